"""Worst-case profile generators, brute-force oracles, and exhaustive search.

Everything here is exact and deterministic: searches enumerate anonymous
profiles by increasing voter count and lexicographic ballot-count order, so
reported witnesses are minimal and reproducible regardless of worker count.
"""

from __future__ import annotations

import heapq
import itertools
import math
import os
import random as _random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .criteria import Violation
from .errors import SearchBudgetExceeded
from .exact import ExactNumber, exact
from .model import ChoiceSet, Profile, default_candidates
from .rules import is_rule_id, winners as rule_winners

ENV_MAX_VOTERS = "VOTELAB_MAX_VOTERS"


def env_max_voters() -> int | None:
    raw = os.environ.get(ENV_MAX_VOTERS)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise SearchBudgetExceeded(f"{ENV_MAX_VOTERS} must be an integer, got {raw!r}")
    if value < 1:
        raise SearchBudgetExceeded(f"{ENV_MAX_VOTERS} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for exhaustive/randomized searches; seeded and deterministic."""

    max_voters: int = 12
    max_candidates: int = 5
    samples: int = 0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.max_voters < 1:
            raise ValueError("max_voters must be at least 1")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @classmethod
    def default(cls, **overrides) -> "SearchBudget":
        """Budget with the environment cap applied to max_voters."""
        budget = cls(**overrides)
        cap = env_max_voters()
        if cap is not None and cap < budget.max_voters:
            budget = cls(**{**overrides, "max_voters": cap})
        return budget


# -- profile generators ---------------------------------------------------------


def condorcet_k_tuple(k: int, n: int) -> Profile:
    """Maximally cyclic profile: n/k voters on each cyclic shift of b1 > ... > bk.

    Its pairwise counts are h(b_i, b_j) = n * (k - ((j - i) mod k)) / k.
    """
    if k < 2:
        raise ValueError("a cyclic tuple needs at least two candidates")
    if n % k != 0:
        raise ValueError(f"number of voters must be divisible by k={k}, got {n}")
    share = n // k
    ballots = []
    order = list(range(k))
    for j in range(k):
        ballots.append((share, tuple(order[j:] + order[:j])))
    return Profile(default_candidates(k), tuple(ballots))


def worst_case_profile(m: int, k: int, q: Fraction, n: int) -> Profile:
    """Adversarial qualified-majority profile.

    A q share of voters ranks the k-set B = {b1..bk} on top in k balanced
    cyclic shifts and the fixed order a1 > ... > a_{m-k} below; the remaining
    voters rank a1 > ... > a_{m-k} on top and the same B shifts below.  Both
    qn/k and (1-q)n/k must be integers.
    """
    q = Fraction(q)
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < m, got k={k}, m={m}")
    if not 0 < q < 1:
        raise ValueError("q must lie strictly between 0 and 1")
    qn = q * n
    rest = (1 - q) * n
    if qn.denominator != 1 or qn.numerator % k or rest.numerator % k:
        raise ValueError(
            f"q*n/k and (1-q)*n/k must be integers; smallest valid n is "
            f"{smallest_worst_case_n(k, q)}"
        )
    maj = int(qn) // k
    minority = int(rest) // k
    bcands = list(range(k))
    acands = list(range(k, m))
    ballots = []
    for j in range(k):
        shift = bcands[j:] + bcands[:j]
        ballots.append((maj, tuple(shift + acands)))
        ballots.append((minority, tuple(acands + shift)))
    labels = tuple(f"b{i + 1}" for i in range(k)) + tuple(
        f"a{i + 1}" for i in range(m - k)
    )
    return Profile(labels, tuple(ballots))


def smallest_worst_case_n(k: int, q: Fraction) -> int:
    """Least n making the adversarial construction's group sizes integral."""
    q = Fraction(q)
    kd = k * q.denominator
    n1 = kd // math.gcd(kd, q.numerator)
    n2 = kd // math.gcd(kd, q.denominator - q.numerator)
    return n1 * n2 // math.gcd(n1, n2)


def random_profile(rng, m: int, n: int, candidates=None) -> Profile:
    """n voters with independently shuffled rankings (seeded rng)."""
    ballots = []
    base = list(range(m))
    for _ in range(n):
        ranking = base[:]
        rng.shuffle(ranking)
        ballots.append((1, tuple(ranking)))
    return Profile(candidates or default_candidates(m), tuple(ballots))


def _count_vectors(total: int, parts: int):
    """All nonnegative integer vectors of the given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _count_vectors(total - head, parts - 1):
            yield (head,) + tail


def all_profiles(m: int, max_voters: int, min_voters: int = 1):
    """Every anonymous profile with at most max_voters voters, minimal-n first."""
    types = list(itertools.permutations(range(m)))
    labels = default_candidates(m)
    for n in range(min_voters, max_voters + 1):
        for vec in _count_vectors(n, len(types)):
            ballots = tuple(
                (count, types[i]) for i, count in enumerate(vec) if count
            )
            yield Profile(labels, ballots)


# -- brute-force oracles -----------------------------------------------------------


def oracle_young_score(profile: Profile, cand: int, max_voters: int = 16) -> int:
    """Naive removal search: try every voter subset in increasing size.

    Independent of the per-type composition search in the rules module.
    """
    voters = profile.expand()
    n = len(voters)
    if n > max_voters:
        raise SearchBudgetExceeded(f"oracle limited to {max_voters} voters, got {n}")
    others = [b for b in range(profile.m) if b != cand]
    for size in range(n + 1):
        for removed in itertools.combinations(range(n), size):
            gone = set(removed)
            kept = [voters[i] for i in range(n) if i not in gone]
            ok = True
            for b in others:
                wins = sum(1 for r in kept if r.index(cand) < r.index(b))
                if 2 * wins < len(kept):
                    ok = False
                    break
            if ok:
                return size
    return n


def oracle_dodgson_score(
    profile: Profile,
    cand: int,
    use_bound: bool = True,
    max_nodes: int = 2_000_000,
) -> int:
    """Optimal-cost search over unrestricted adjacent-swap states.

    Explores the graph whose nodes are whole ballot lists and whose edges are
    single adjacent transpositions in any one ballot.  With ``use_bound`` the
    search is ordered by cost plus the remaining pairwise deficit, a valid
    lower bound because one swap changes exactly one pairwise count by one;
    without it this is plain breadth-first search.  Either way the result is
    the exact minimum; the search never approximates and raises when the node
    budget is hit.
    """
    m = profile.m
    perms = list(itertools.permutations(range(m)))
    index = {p: i for i, p in enumerate(perms)}
    swap_to = [
        [index[p[:pos] + (p[pos + 1], p[pos]) + p[pos + 2 :]] for pos in range(m - 1)]
        for p in perms
    ]
    others = [b for b in range(m) if b != cand]
    beats = [
        tuple(1 if p.index(cand) < p.index(b) else 0 for b in others) for p in perms
    ]
    start = tuple(sorted(index[r] for r in profile.expand()))
    n = len(start)
    need = n // 2 + 1

    def h_row(state):
        row = [0] * len(others)
        for pi in state:
            for j, v in enumerate(beats[pi]):
                row[j] += v
        return tuple(row)

    def deficit(row):
        return sum(need - v for v in row if v < need)

    start_row = h_row(start)
    if deficit(start_row) == 0:
        return 0
    frontier = [(deficit(start_row) if use_bound else 0, 0, start, start_row)]
    best_g = {start: 0}
    expanded = 0
    while frontier:
        f, g, state, row = heapq.heappop(frontier)
        if best_g.get(state, g) < g:
            continue
        if deficit(row) == 0:
            return g
        expanded += 1
        if expanded > max_nodes:
            raise SearchBudgetExceeded(
                f"dodgson oracle exceeded {max_nodes} expansions"
            )
        for slot, pi in enumerate(state):
            if slot and state[slot - 1] == pi:
                continue  # identical ballot already expanded
            for pos in range(m - 1):
                new_pi = swap_to[pi][pos]
                new_state = tuple(sorted(state[:slot] + (new_pi,) + state[slot + 1 :]))
                new_g = g + 1
                if best_g.get(new_state, new_g + 1) <= new_g:
                    continue
                best_g[new_state] = new_g
                delta = [0] * len(others)
                for j in range(len(others)):
                    delta[j] = beats[new_pi][j] - beats[pi][j]
                new_row = tuple(r + d for r, d in zip(row, delta))
                bound = deficit(new_row) if use_bound else 0
                heapq.heappush(frontier, (new_g + bound, new_g, new_state, new_row))
    raise AssertionError("the all-top state is always reachable")


def parallel_universe_irv(profile: Profile, max_candidates: int = 8) -> ChoiceSet:
    """Union of instant-runoff winners over every single-elimination order.

    Cross-check oracle for the simultaneous-elimination tie handling of the
    main instant-runoff implementation.
    """
    if profile.m > max_candidates:
        raise SearchBudgetExceeded(
            f"parallel-universe search limited to {max_candidates} candidates"
        )
    ballots = profile.ballots

    cache: dict[frozenset[int], frozenset[int]] = {}

    def wins(active: frozenset[int]) -> frozenset[int]:
        if len(active) == 1:
            return active
        if active in cache:
            return cache[active]
        tally = {a: 0 for a in active}
        for count, ranking in ballots:
            for c in ranking:
                if c in active:
                    tally[c] += count
                    break
        low = min(tally.values())
        out: set[int] = set()
        for loser in [a for a in active if tally[a] == low]:
            out |= wins(active - {loser})
        result = frozenset(out)
        cache[active] = result
        return result

    return ChoiceSet(wins(frozenset(range(profile.m))))


# -- exhaustive criterion verification -----------------------------------------------


def _exact_floor(x: ExactNumber) -> int:
    z = math.floor(float(x))
    while exact(z + 1) <= x:
        z += 1
    while exact(z) > x:
        z -= 1
    return z


def _split_types(m: int, k: int):
    """Ballot types partitioned into those top-ranking B = {0..k-1} and the rest."""
    b_set = frozenset(range(k))
    b_types, o_types = [], []
    for p in itertools.permutations(range(m)):
        (b_types if frozenset(p[:k]) == b_set else o_types).append(p)
    return b_types, o_types


def _profiles_with_support(m: int, k: int, n: int, support: int):
    """Profiles with exactly `support` voters top-ranking B = {0..k-1}."""
    b_types, o_types = _split_types(m, k)
    labels = default_candidates(m)
    for bvec in _count_vectors(support, len(b_types)):
        b_part = tuple((c, b_types[i]) for i, c in enumerate(bvec) if c)
        for ovec in _count_vectors(n - support, len(o_types)):
            ballots = b_part + tuple(
                (c, o_types[i]) for i, c in enumerate(ovec) if c
            )
            yield Profile(labels, ballots)


def _violations_in_slice(rule_id: str, m: int, k: int, n: int, support: int):
    """Minimal violation key in one (n, support) slice, or None."""
    b_set = frozenset(range(k))
    best = None
    for profile in _profiles_with_support(m, k, n, support):
        won = rule_winners(rule_id, profile)
        if not won <= b_set:
            key = profile.ballots
            if best is None or key < best[0]:
                best = (key, profile, won, support)
    return best


def _search_slice(args):
    rule_id, m, k, n, support = args
    found = _violations_in_slice(rule_id, m, k, n, support)
    if found is None:
        return None
    key, profile, won, support = found
    return (n, key, profile.ballots, tuple(sorted(won)), support)


def exhaustive_criterion_search(
    rule_id: str, m: int, k: int, q, budget: SearchBudget
) -> Violation | None:
    """Search every anonymous profile within budget for a criterion violation.

    By neutrality the qualified set is fixed to the lexicographically first k
    candidates, and only profiles whose support for it strictly exceeds q*n
    are generated.  Returns a violation witness minimal in (n, ballot-count
    order), or None when the whole range is clean.

    When ``budget.samples`` is positive, a seeded random stage supplements
    (never replaces) the exhaustive range with qualified profiles of up to
    twice the voter budget; a witness found there is returned as-is, without
    the minimality guarantee.
    """
    if not is_rule_id(rule_id):
        raise ValueError(f"unknown rule id {rule_id!r}")
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < m, got k={k}, m={m}")
    if m > budget.max_candidates:
        raise SearchBudgetExceeded(
            f"m={m} exceeds the candidate budget {budget.max_candidates}"
        )
    qq = exact(q)
    if not exact(0) < qq <= exact(1):
        raise ValueError("q must lie in (0, 1]")
    b_set = frozenset(range(k))
    labels = default_candidates(m)
    pool = ProcessPoolExecutor(budget.workers) if budget.workers > 1 else None
    try:
        for n in range(1, budget.max_voters + 1):
            min_support = _exact_floor(qq * n) + 1
            slices = [
                (rule_id, m, k, n, s) for s in range(min_support, n + 1)
            ]
            if pool is None:
                results = map(_search_slice, slices)
            else:
                results = pool.map(_search_slice, slices)
            hits = [r for r in results if r is not None]
            if hits:
                hits.sort(key=lambda r: r[1])
                _, _, ballots, won, support = hits[0]
                profile = Profile(labels, ballots)
                return Violation(b_set, support, ChoiceSet(won), profile, qq)
        return _sampled_violation(rule_id, m, k, qq, budget)
    finally:
        if pool is not None:
            pool.shutdown()


def _sampled_violation(rule_id, m, k, qq, budget: SearchBudget) -> Violation | None:
    if not budget.samples:
        return None
    rng = _random.Random(budget.seed)
    b_types, o_types = _split_types(m, k)
    b_set = frozenset(range(k))
    labels = default_candidates(m)
    for _ in range(budget.samples):
        n = rng.randint(budget.max_voters + 1, 2 * budget.max_voters)
        min_support = _exact_floor(qq * n) + 1
        if min_support > n:
            continue
        support = rng.randint(min_support, n)
        ballots = [(1, rng.choice(b_types)) for _ in range(support)]
        ballots += [(1, rng.choice(o_types)) for _ in range(n - support)]
        profile = Profile(labels, tuple(ballots))
        won = rule_winners(rule_id, profile)
        if not won <= b_set:
            return Violation(b_set, support, won, profile, qq)
    return None


def _max_share_slice(args):
    rule_id, m, k, n, support = args
    found = _violations_in_slice(rule_id, m, k, n, support)
    if found is None:
        return None
    key, profile, won, support = found
    return (Fraction(support, n), n, key, profile.ballots, tuple(sorted(won)), support)


def max_violation(
    rule_id: str, m: int, k: int, budget: SearchBudget
) -> tuple[Fraction, Violation] | None:
    """Largest support share among violating profiles, with a witness.

    The witness attains the maximal share at the smallest voter count and
    ballot-count order among attaining profiles.
    """
    if not is_rule_id(rule_id):
        raise ValueError(f"unknown rule id {rule_id!r}")
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < m, got k={k}, m={m}")
    if m > budget.max_candidates:
        raise SearchBudgetExceeded(
            f"m={m} exceeds the candidate budget {budget.max_candidates}"
        )
    b_set = frozenset(range(k))
    labels = default_candidates(m)
    best: tuple | None = None
    pool = ProcessPoolExecutor(budget.workers) if budget.workers > 1 else None
    try:
        for n in range(1, budget.max_voters + 1):
            slices = []
            for s in range(1, n + 1):
                if best is not None and Fraction(s, n) <= best[0]:
                    continue
                slices.append((rule_id, m, k, n, s))
            if not slices:
                continue
            if pool is None:
                results = map(_max_share_slice, slices)
            else:
                results = pool.map(_max_share_slice, slices)
            for r in results:
                if r is None:
                    continue
                if best is None or r[0] > best[0]:
                    best = r
        if best is None:
            return None
        share, n, _, ballots, won, support = best
        profile = Profile(labels, ballots)
        return share, Violation(b_set, support, ChoiceSet(won), profile)
    finally:
        if pool is not None:
            pool.shutdown()


def empirical_quota(rule_id: str, m: int, k: int, budget: SearchBudget) -> Fraction:
    """Largest violating support share found within budget (0 when none)."""
    found = max_violation(rule_id, m, k, budget)
    return found[0] if found else Fraction(0)
