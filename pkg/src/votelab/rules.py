"""Voting rules as choice correspondences with inspectable score reports.

Every rule maps a profile to a nonempty set of tied winners; no arbitrary
tie-breaking is ever applied.  Scores are exact: integers, rationals, or
quadratic irrationals, so argmin/argmax decisions are never made in floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import SearchBudgetExceeded
from .exact import ExactNumber, exact
from .model import (
    ChoiceSet,
    Profile,
    condorcet_winner,
    majority_winner,
    positional_matrix,
    tournament_matrix,
)

ExactScore = ExactNumber | Fraction | int

RULE_IDS = (
    "plurality",
    "runoff",
    "irv",
    "borda",
    "antiplurality",
    "simpson",
    "young",
    "dodgson",
    "clr",
    "black",
    "convexmedian",
    "vetocore",
    "t12rule",
)


@dataclass(frozen=True)
class ScoreVector:
    """Monotonic positional weights s_1 >= ... >= s_m with s_1 > s_m."""

    scores: tuple[Fraction, ...]

    def __post_init__(self):
        s = tuple(Fraction(x) for x in self.scores)
        if len(s) < 2:
            raise ValueError("a score vector needs at least two positions")
        if any(s[i] < s[i + 1] for i in range(len(s) - 1)):
            raise ValueError("scores must be nonincreasing")
        if s[0] == s[-1]:
            raise ValueError("the top score must exceed the bottom score")
        object.__setattr__(self, "scores", s)

    def __len__(self) -> int:
        return len(self.scores)

    def __getitem__(self, i: int) -> Fraction:
        return self.scores[i]

    @property
    def is_convex(self) -> bool:
        """Score gaps positive at the bottom and nondecreasing toward the top."""
        s = self.scores
        gaps = [s[i] - s[i + 1] for i in range(len(s) - 1)]
        if gaps[-1] <= 0:
            return False
        return all(gaps[i] >= gaps[i + 1] for i in range(len(gaps) - 1))

    @classmethod
    def plurality(cls, m: int) -> "ScoreVector":
        return cls((Fraction(1),) + (Fraction(0),) * (m - 1))

    @classmethod
    def borda(cls, m: int) -> "ScoreVector":
        return cls(tuple(Fraction(m - 1 - i) for i in range(m)))

    @classmethod
    def antiplurality(cls, m: int) -> "ScoreVector":
        return cls((Fraction(1),) * (m - 1) + (Fraction(0),))


@dataclass(frozen=True)
class ScoreReport:
    """Winners of a rule plus its per-candidate scores and decision trace."""

    rule_id: str
    winners: ChoiceSet
    scores: dict[int, ExactScore | None]
    trace: dict = field(default_factory=dict)


def _argmax(values: dict[int, ExactScore]) -> ChoiceSet:
    best = None
    for v in values.values():
        if best is None or exact(v) > exact(best):
            best = v
    return ChoiceSet(c for c, v in values.items() if exact(v) == exact(best))


def _argmin(values: dict[int, ExactScore]) -> ChoiceSet:
    best = None
    for v in values.values():
        if best is None or exact(v) < exact(best):
            best = v
    return ChoiceSet(c for c, v in values.items() if exact(v) == exact(best))


def simple_majority_winners(profile: Profile) -> ChoiceSet:
    """Candidates with the most top positions (the m = 2 baseline rule)."""
    pos = positional_matrix(profile)
    top = pos.counts[0]
    best = max(top)
    return ChoiceSet(a for a in range(profile.m) if top[a] == best)


# -- positional scoring rules -------------------------------------------------


def scoring_report(profile: Profile, scores: ScoreVector) -> ScoreReport:
    if len(scores) != profile.m:
        raise ValueError(f"score vector has {len(scores)} entries for m={profile.m}")
    pos = positional_matrix(profile)
    totals = {
        a: sum((scores[l] * pos.counts[l][a] for l in range(profile.m)), Fraction(0))
        for a in range(profile.m)
    }
    return ScoreReport("scoring", _argmax(totals), dict(totals))


def scoring_winners(profile: Profile, scores: ScoreVector) -> ChoiceSet:
    """All candidates maximizing the positional score sum."""
    return scoring_report(profile, scores).winners


def _fixed_scoring_report(rule_id: str, make: Callable[[int], ScoreVector]):
    def report(profile: Profile) -> ScoreReport:
        if profile.m == 1:
            return ScoreReport(rule_id, ChoiceSet({0}), {0: 1})
        rep = scoring_report(profile, make(profile.m))
        return ScoreReport(rule_id, rep.winners, rep.scores)

    return report


plurality_report = _fixed_scoring_report("plurality", ScoreVector.plurality)
borda_report = _fixed_scoring_report("borda", ScoreVector.borda)
antiplurality_report = _fixed_scoring_report("antiplurality", ScoreVector.antiplurality)


def plurality_winners(profile: Profile) -> ChoiceSet:
    return plurality_report(profile).winners


def borda_winners(profile: Profile) -> ChoiceSet:
    return borda_report(profile).winners


def antiplurality_winners(profile: Profile) -> ChoiceSet:
    return antiplurality_report(profile).winners


# -- plurality with runoff ----------------------------------------------------


def plurality_runoff_report(profile: Profile) -> ScoreReport:
    """Top-two runoff; finalist ties produce the union over all resolutions."""
    m = profile.m
    if m == 1:
        return ScoreReport("runoff", ChoiceSet({0}), {0: profile.n})
    pos = positional_matrix(profile)
    top = pos.counts[0]
    scores = {a: top[a] for a in range(m)}
    if m == 2:
        return ScoreReport("runoff", simple_majority_winners(profile), scores)
    first = max(top)
    leaders = [a for a in range(m) if top[a] == first]
    pairs: list[tuple[int, int]] = []
    if len(leaders) >= 2:
        pairs = [
            (leaders[i], leaders[j])
            for i in range(len(leaders))
            for j in range(i + 1, len(leaders))
        ]
    else:
        x = leaders[0]
        second = max(top[a] for a in range(m) if a != x)
        pairs = [(x, y) for y in range(m) if y != x and top[y] == second]
    tm = tournament_matrix(profile)
    n = profile.n
    winners: set[int] = set()
    duels = {}
    for x, y in pairs:
        if 2 * tm.h[x][y] > n:
            w = {x}
        elif 2 * tm.h[x][y] < n:
            w = {y}
        else:
            w = {x, y}
        winners |= w
        duels[(x, y)] = (tm.h[x][y], tm.h[y][x])
    return ScoreReport(
        "runoff", ChoiceSet(winners), scores, {"finalist_pairs": pairs, "duels": duels}
    )


def plurality_runoff_winners(profile: Profile) -> ChoiceSet:
    return plurality_runoff_report(profile).winners


# -- instant runoff -----------------------------------------------------------


def _transfer_tally(profile: Profile, active: frozenset[int]) -> dict[int, int]:
    tally = {a: 0 for a in active}
    for count, ranking in profile.ballots:
        for c in ranking:
            if c in active:
                tally[c] += count
                break
    return tally


def instant_runoff_report(profile: Profile) -> ScoreReport:
    """Iteratively delete a candidate with the fewest top positions.

    When several candidates tie at the minimum, the winners are the union
    over all ways of deleting one of them (deleting the whole tied group at
    once can wipe out a mutually top-ranked majority set, so the union over
    single deletions is the tie handling consistent with the runoff rule's).
    """
    winners_of: dict[frozenset[int], frozenset[int]] = {}

    def resolve(active: frozenset[int]) -> frozenset[int]:
        if len(active) == 1:
            return active
        hit = winners_of.get(active)
        if hit is not None:
            return hit
        tally = _transfer_tally(profile, active)
        low = min(tally.values())
        out: set[int] = set()
        for loser in active:
            if tally[loser] == low:
                out |= resolve(active - {loser})
        result = frozenset(out)
        winners_of[active] = result
        return result

    # Trace the deterministic path while eliminations are unambiguous.
    rounds = []
    active = frozenset(range(profile.m))
    unique_path = True
    while len(active) > 1 and unique_path:
        tally = _transfer_tally(profile, active)
        low = min(tally.values())
        losers = sorted(a for a in active if tally[a] == low)
        if len(losers) == 1:
            rounds.append({"scores": dict(tally), "eliminated": losers})
            active = active - {losers[0]}
        else:
            unique_path = False
    final = resolve(frozenset(range(profile.m)))
    scores = _transfer_tally(profile, frozenset(range(profile.m)))
    trace = {"rounds": rounds, "tie_branching": not unique_path}
    return ScoreReport("irv", ChoiceSet(final), dict(scores), trace)


def instant_runoff_winners(profile: Profile) -> ChoiceSet:
    return instant_runoff_report(profile).winners


# -- pairwise-comparison rules --------------------------------------------------


def simpson_report(profile: Profile) -> ScoreReport:
    """Maximin: maximize the worst pairwise support."""
    if profile.m == 1:
        return ScoreReport("simpson", ChoiceSet({0}), {0: profile.n})
    tm = tournament_matrix(profile)
    scores = {
        a: min(tm.h[a][b] for b in range(profile.m) if b != a)
        for a in range(profile.m)
    }
    return ScoreReport("simpson", _argmax(scores), dict(scores))


def simpson_winners(profile: Profile) -> ChoiceSet:
    return simpson_report(profile).winners


def clr_report(profile: Profile) -> ScoreReport:
    """Minimize the total of losing pairwise margins below n/2."""
    tm = tournament_matrix(profile)
    half = Fraction(profile.n, 2)
    scores = {
        a: sum(
            (max(half - tm.h[a][b], Fraction(0)) for b in range(profile.m) if b != a),
            Fraction(0),
        )
        for a in range(profile.m)
    }
    return ScoreReport("clr", _argmin(scores), dict(scores))


def clr_winners(profile: Profile) -> ChoiceSet:
    return clr_report(profile).winners


def black_report(profile: Profile) -> ScoreReport:
    """The strict pairwise-unbeaten candidate if one exists, else the Borda winners."""
    cw = condorcet_winner(profile)
    borda = borda_report(profile)
    if cw is not None:
        return ScoreReport(
            "black", ChoiceSet({cw}), borda.scores, {"condorcet_winner": cw}
        )
    return ScoreReport("black", borda.winners, borda.scores, {"condorcet_winner": None})


def black_winners(profile: Profile) -> ChoiceSet:
    return black_report(profile).winners


# -- Young ---------------------------------------------------------------------


def _compositions(total: int, caps: Sequence[int]):
    """All tuples x with 0 <= x_i <= caps[i] and sum(x) == total."""
    k = len(caps)

    def rec(i: int, left: int, prefix: tuple[int, ...]):
        if i == k - 1:
            if left <= caps[i]:
                yield prefix + (left,)
            return
        tail_cap = sum(caps[i + 1 :])
        lo = max(0, left - tail_cap)
        hi = min(caps[i], left)
        for x in range(lo, hi + 1):
            yield from rec(i + 1, left - x, prefix + (x,))

    if total <= sum(caps):
        yield from rec(0, total, ())


def young_score(profile: Profile, cand: int) -> int:
    """Fewest voters whose removal leaves cand unbeaten in every pairwise duel.

    Removals are searched per ballot type in increasing total size, which is
    exhaustive because the profile is anonymous.  Writing h' for the kept
    votes, the target "2 h'(cand, b) >= n - removed" becomes, per opponent,
    (removed voters ranking cand above b) - (removed voters ranking b above
    cand) <= 2 h(cand, b) - n, which no longer mentions the removal size; so
    one removal improves each pairwise deficit by at most one, giving the
    starting size max_b (n - 2 h(cand, b)), and voters ranking cand on top
    never belong to a minimal removal set.
    """
    tm = tournament_matrix(profile)
    n = profile.n
    opponents = [b for b in range(profile.m) if b != cand]
    slack = [2 * tm.h[cand][b] - n for b in opponents]
    if all(s >= 0 for s in slack):
        return 0
    caps = [
        0 if ranking[0] == cand else count for count, ranking in profile.ballots
    ]
    signs = [
        [1 if ranking.index(cand) < ranking.index(b) else -1 for b in opponents]
        for _, ranking in profile.ballots
    ]
    start = max(-s for s in slack)
    for removed in range(max(start, 1), sum(caps) + 1):
        for comp in _compositions(removed, caps):
            ok = True
            for j, limit in enumerate(slack):
                if sum(x * sign[j] for x, sign in zip(comp, signs)) > limit:
                    ok = False
                    break
            if ok:
                return removed
    raise AssertionError("removing every opposing voter always works")


def young_report(profile: Profile) -> ScoreReport:
    scores = {a: young_score(profile, a) for a in range(profile.m)}
    return ScoreReport("young", _argmin(scores), dict(scores))


def young_winners(profile: Profile) -> ChoiceSet:
    return young_report(profile).winners


# -- Dodgson --------------------------------------------------------------------


def dodgson_score(profile: Profile, cand: int) -> int:
    """Fewest adjacent swaps making cand beat everyone strictly.

    Only upward moves of cand are searched: a swap not lifting cand never
    increases any h(cand, .), and displacing a blocker costs exactly as much
    as passing it.  The unrestricted-swap oracle in the search module
    cross-checks this restriction.
    """
    tm = tournament_matrix(profile)
    n = profile.n
    need = n // 2 + 1
    opponents = [b for b in range(profile.m) if b != cand]
    deficits = tuple(max(0, need - tm.h[cand][b]) for b in opponents)
    if not any(deficits):
        return 0
    opp_index = {b: j for j, b in enumerate(opponents)}
    # For each ballot type: a voter lifting cand by s positions gains one
    # duel vote against each of the s candidates immediately above cand.
    # Per type the choice is the nonincreasing vector z, where z[d] voters
    # lift past depth d+1; its cost is sum(z).
    types = []
    for count, ranking in profile.ballots:
        p = ranking.index(cand)
        above = [opp_index[ranking[p - 1 - off]] for off in range(p)]
        types.append((count, above))

    INF = float("inf")
    memo: dict[tuple[int, tuple[int, ...]], float] = {}

    def type_options(count, above, defs):
        """(waste, cost, reduced deficits) per useful lift vector, sorted to
        try zero-waste, maximal-coverage choices first."""
        useful = 0
        for depth, j in enumerate(above, start=1):
            if defs[j] > 0:
                useful = depth
        options = []

        def gen(depth, prev, z):
            if depth > useful:
                cost = sum(z)
                new = list(defs)
                gained = 0
                for d, lifted in enumerate(z):
                    take = min(lifted, new[above[d]])
                    gained += take
                    new[above[d]] -= take
                options.append((cost - gained, -cost, cost, tuple(new)))
                return
            # lifting deeper than every remaining deficit is pure waste
            cap = min(prev, max(defs[above[d]] for d in range(depth - 1, useful)))
            for lifted in range(cap + 1):
                gen(depth + 1, lifted, z + (lifted,))

        gen(1, count, ())
        options.sort()
        return [(cost, new) for _, _, cost, new in options]

    def best(i: int, defs: tuple[int, ...]) -> float:
        if not any(defs):
            return 0
        if i == len(types):
            return INF
        key = (i, defs)
        if key in memo:
            return memo[key]
        count, above = types[i]
        result = INF
        for cost, new in type_options(count, above, defs):
            # each swap gains at most one needed duel vote, so the remaining
            # deficit bounds the remaining cost from below
            if cost + sum(new) >= result:
                continue
            sub = best(i + 1, new)
            if cost + sub < result:
                result = cost + sub
        memo[key] = result
        return result

    score = best(0, deficits)
    assert score != INF, "lifting cand to the top of every ballot always works"
    return int(score)


def dodgson_report(profile: Profile) -> ScoreReport:
    scores = {a: dodgson_score(profile, a) for a in range(profile.m)}
    return ScoreReport("dodgson", _argmin(scores), dict(scores))


def dodgson_winners(profile: Profile) -> ChoiceSet:
    return dodgson_report(profile).winners


# -- convex median ----------------------------------------------------------------


def _piecewise_depth_pieces(pos_column: Sequence[int], m: int):
    """Yield (j, N, C): on depth interval [j, j+1] the truncated positional
    score is C + t*N, where N counts voters ranking the candidate in the top
    j+1 and C is the constant part."""
    N = pos_column[0] + (pos_column[1] if m > 1 else 0)
    C = -(pos_column[1] if m > 1 else 0)
    j = 1
    while True:
        yield j, N, C
        j += 1
        if j + 1 <= m:
            N += pos_column[j]
            C -= j * pos_column[j]


def convex_median_score(profile: Profile, cand: int) -> Fraction:
    """Largest depth t with truncated-score average B_t/t still at most n/2.

    Piecewise linear in t, so the crossing is solved exactly per unit
    interval.  Undefined (raises) when the candidate is a strict majority
    winner, since then no depth satisfies the condition.
    """
    pos = positional_matrix(profile)
    n = profile.n
    col = [pos.counts[l][cand] for l in range(profile.m)]
    if 2 * col[0] > n:
        raise ValueError("score undefined for a strict majority winner")
    for j, N, C in _piecewise_depth_pieces(col, profile.m):
        right = C + (j + 1) * N
        if 2 * right <= n * (j + 1):
            continue
        # Crossing inside [j, j+1): solve 2(C + tN) = n t exactly.
        t = Fraction(-2 * C, 2 * N - n)
        assert j <= t < j + 1
        return t


def convex_median_report(profile: Profile) -> ScoreReport:
    mw = majority_winner(profile)
    if mw is not None:
        scores: dict[int, ExactScore | None] = {a: None for a in range(profile.m)}
        return ScoreReport(
            "convexmedian", ChoiceSet({mw}), scores, {"majority_winner": mw}
        )
    scores = {a: convex_median_score(profile, a) for a in range(profile.m)}
    return ScoreReport("convexmedian", _argmin(scores), dict(scores))


def convex_median_winners(profile: Profile) -> ChoiceSet:
    return convex_median_report(profile).winners


# -- proportional veto core -------------------------------------------------------


def proportional_veto_core_report(profile: Profile, max_types: int = 18) -> ScoreReport:
    """All candidates no coalition can block.

    A coalition of t voters blocks candidate a through the set B of
    candidates they all prefer to a when |A \\ B| * n < m * t.  Only
    coalitions taking every voter of each included ballot type need
    checking: adding a voter of a type already present never shrinks the
    common upper contour.
    """
    T = len(profile.ballots)
    if T > max_types:
        raise SearchBudgetExceeded(
            f"{T} ballot types exceed the veto-core budget of {max_types}"
        )
    m, n = profile.m, profile.n
    counts = [count for count, _ in profile.ballots]
    above_masks = []
    for _, ranking in profile.ballots:
        masks = [0] * m
        seen = 0
        for c in ranking:
            masks[c] = seen
            seen |= 1 << c
        above_masks.append(masks)
    blocked: dict[int, dict] = {}
    full = (1 << m) - 1
    for a in range(m):
        relevant = [i for i in range(T) if above_masks[i][a]]
        found = None
        for mask in range(1, 1 << len(relevant)):
            inter = full
            t = 0
            mm = mask
            while mm:
                bit = (mm & -mm).bit_length() - 1
                i = relevant[bit]
                inter &= above_masks[i][a]
                t += counts[i]
                mm &= mm - 1
            outside = m - inter.bit_count()
            if outside * n < m * t:
                coalition = [relevant[b] for b in range(len(relevant)) if mask >> b & 1]
                found = {
                    "coalition_types": coalition,
                    "coalition_size": t,
                    "blocking_set": sorted(
                        c for c in range(m) if inter >> c & 1
                    ),
                }
                break
        if found:
            blocked[a] = found
    stable = [a for a in range(m) if a not in blocked]
    scores = {a: 0 if a in blocked else 1 for a in range(m)}
    return ScoreReport(
        "vetocore", ChoiceSet(stable), scores, {"blocked": blocked}
    )


def proportional_veto_core(profile: Profile, max_types: int = 18) -> ChoiceSet:
    return proportional_veto_core_report(profile, max_types).winners


# -- depth-threshold rule trading off with positional dominance --------------------


def integer_truncated_scores(profile: Profile, cand: int) -> list[int]:
    """B_t(cand) for integer depths t = 1..m-1 (integer arithmetic)."""
    pos = positional_matrix(profile)
    out = []
    for t in range(1, profile.m):
        out.append(sum((t - i) * pos.counts[i][cand] for i in range(t + 1)))
    return out


def second_order_dominates(bt_a: Sequence[int], bt_b: Sequence[int]) -> bool:
    """Second-order positional dominance via integer truncated scores."""
    if bt_a[-1] <= bt_b[-1]:
        return False
    return all(x >= y for x, y in zip(bt_a, bt_b))


def tradeoff_score(profile: Profile, cand: int) -> ExactNumber:
    """Largest depth t with (3t+1)/(2(t+1)) * B_t/t at most n/2.

    The weighting factor and the truncated-score average are both
    nondecreasing in t, so the feasible set is an initial interval; per unit
    interval the boundary is a quadratic with integer coefficients, solved
    exactly.  Undefined (raises) for a strict majority winner.
    """
    pos = positional_matrix(profile)
    n = profile.n
    col = [pos.counts[l][cand] for l in range(profile.m)]
    if 2 * col[0] > n:
        raise ValueError("score undefined for a strict majority winner")
    for j, N, C in _piecewise_depth_pieces(col, profile.m):
        t1 = j + 1
        right = C + t1 * N
        if (3 * t1 + 1) * right <= n * t1 * (t1 + 1):
            continue
        # Crossing inside [j, j+1): (3N-n) t^2 + (3C+N-n) t + C = 0.
        roots = ExactNumber.quadratic_roots(3 * N - n, 3 * C + N - n, C)
        in_piece = [t for t in roots if exact(j) <= t <= exact(j + 1)]
        assert in_piece, "a sign change must bracket a root"
        return in_piece[-1]


def theorem12_report(profile: Profile) -> ScoreReport:
    """Winners: lowest tradeoff score, dropping dominated candidates on ties.

    When several candidates tie at the minimal score, any of them that is
    second-order positionally dominated loses to its dominator (which
    necessarily ties too); dropping dominated candidates keeps the choice
    set nonempty and makes the rule respect positional dominance.
    """
    m = profile.m
    mw = majority_winner(profile)
    if mw is not None:
        scores: dict[int, ExactScore | None] = {a: None for a in range(m)}
        return ScoreReport("t12rule", ChoiceSet({mw}), scores, {"majority_winner": mw})
    scores = {a: tradeoff_score(profile, a) for a in range(m)}
    argmin = _argmin(scores)
    if len(argmin) > 1 and m > 1:
        bt = {a: integer_truncated_scores(profile, a) for a in argmin}
        undominated = [
            a for a in argmin if not any(second_order_dominates(bt[b], bt[a]) for b in argmin)
        ]
        winners = ChoiceSet(undominated)
    else:
        winners = argmin
    return ScoreReport("t12rule", winners, dict(scores), {"score_argmin": sorted(argmin)})


def theorem12_rule_winners(profile: Profile) -> ChoiceSet:
    return theorem12_report(profile).winners


# -- registry -----------------------------------------------------------------------


_REPORTS: dict[str, Callable[[Profile], ScoreReport]] = {
    "plurality": plurality_report,
    "runoff": plurality_runoff_report,
    "irv": instant_runoff_report,
    "borda": borda_report,
    "antiplurality": antiplurality_report,
    "simpson": simpson_report,
    "young": young_report,
    "dodgson": dodgson_report,
    "clr": clr_report,
    "black": black_report,
    "convexmedian": convex_median_report,
    "vetocore": proportional_veto_core_report,
    "t12rule": theorem12_report,
}


def parse_score_vector(spec: str, m: int) -> ScoreVector:
    """Parse the payload of a scoring:<s1,...,sm> rule id."""
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != m:
        raise ValueError(f"scoring rule has {len(parts)} weights for m={m}")
    return ScoreVector(tuple(Fraction(p) for p in parts))


def report(rule_id: str, profile: Profile) -> ScoreReport:
    """Evaluate a rule by its stable identifier."""
    if rule_id.startswith("scoring:"):
        vec = parse_score_vector(rule_id[len("scoring:") :], profile.m)
        rep = scoring_report(profile, vec)
        return ScoreReport(rule_id, rep.winners, rep.scores)
    try:
        return _REPORTS[rule_id](profile)
    except KeyError:
        raise ValueError(f"unknown rule id {rule_id!r}") from None


def winners(rule_id: str, profile: Profile) -> ChoiceSet:
    return report(rule_id, profile).winners


def is_rule_id(rule_id: str) -> bool:
    return rule_id in _REPORTS or rule_id.startswith("scoring:")
