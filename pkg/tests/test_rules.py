import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from votelab import (
    ChoiceSet,
    ExactNumber,
    Profile,
    black_winners,
    borda_winners,
    clr_winners,
    condorcet_winner,
    convex_median_score,
    convex_median_winners,
    dodgson_score,
    dodgson_winners,
    exact,
    instant_runoff_winners,
    majority_winner,
    plurality_runoff_winners,
    plurality_winners,
    proportional_veto_core,
    relabel_profile,
    report,
    scoring_winners,
    simple_majority_winners,
    simpson_winners,
    theorem12_rule_winners,
    tournament_matrix,
    tradeoff_score,
    winners,
    young_score,
    young_winners,
)
from votelab.rules import RULE_IDS, ScoreVector

from conftest import profiles


def names(profile, choice):
    return set(profile.labels(choice))


class TestScoreVector:
    def test_standard_vectors(self):
        assert ScoreVector.plurality(4).scores == (1, 0, 0, 0)
        assert ScoreVector.borda(4).scores == (3, 2, 1, 0)
        assert ScoreVector.antiplurality(4).scores == (1, 1, 1, 0)

    def test_monotonicity_enforced(self):
        with pytest.raises(ValueError):
            ScoreVector((0, 1))
        with pytest.raises(ValueError):
            ScoreVector((1, 1))

    def test_convexity(self):
        assert ScoreVector.borda(5).is_convex
        assert not ScoreVector.antiplurality(5).is_convex
        # plurality's bottom gap is zero for m > 2, so it is not convex
        assert not ScoreVector.plurality(3).is_convex
        assert ScoreVector.plurality(2).is_convex
        assert ScoreVector((3, 1, 0)).is_convex
        assert not ScoreVector((3, 2, 0)).is_convex  # gaps grow downward


class TestScoringRules:
    def test_primary_five_plurality(self, primary_five):
        assert names(primary_five, plurality_winners(primary_five)) == {"Hillary"}

    def test_four_bloc_borda(self, four_bloc):
        rep = report("borda", four_bloc)
        assert names(four_bloc, rep.winners) == {"c"}
        assert [rep.scores[a] for a in range(4)] == [165, 163, 186, 86]

    def test_four_bloc_antiplurality(self, four_bloc):
        rep = report("antiplurality", four_bloc)
        assert names(four_bloc, rep.winners) == {"c"}
        assert [rep.scores[a] for a in range(4)] == [79, 78, 100, 43]

    def test_scoring_length_mismatch(self, four_bloc):
        with pytest.raises(ValueError):
            scoring_winners(four_bloc, ScoreVector((1, 0)))

    def test_scoring_rule_id(self, four_bloc):
        assert winners("scoring:3,2,1,0", four_bloc) == borda_winners(four_bloc)

    def test_borda_positional_equals_pairwise(self, four_bloc):
        rep = report("borda", four_bloc)
        tm = tournament_matrix(four_bloc)
        for a in range(4):
            assert rep.scores[a] == sum(tm.h[a][b] for b in range(4) if b != a)


class TestRunoff:
    def test_primary_five(self, primary_five):
        rep = report("runoff", primary_five)
        assert names(primary_five, rep.winners) == {"Donald"}
        (pair,) = rep.trace["finalist_pairs"]
        assert set(primary_five.labels(pair)) == {"Hillary", "Donald"}
        assert rep.trace["duels"][pair] == (42, 58)

    def test_small_example(self):
        p = Profile.from_names("abc", [(2, "abc"), (2, "bac"), (1, "cab")])
        assert plurality_runoff_winners(p) == {0}

    def test_majority_winner_always_wins(self):
        p = Profile.from_names("abc", [(3, "cab"), (1, "abc"), (1, "bca")])
        assert plurality_runoff_winners(p) == {2}

    def test_finalist_tie_union(self):
        # tops 2/2/2: all three finalist pairs contribute
        p = Profile.from_names("abc", [(2, "abc"), (2, "bca"), (2, "cab")])
        assert plurality_runoff_winners(p) == {0, 1, 2}


class TestInstantRunoff:
    def test_primary_five_elimination_order(self, primary_five):
        rep = report("irv", primary_five)
        assert names(primary_five, rep.winners) == {"Ted"}
        order = [primary_five.label(r["eliminated"][0]) for r in rep.trace["rounds"]]
        assert order == ["John", "Bernie", "Donald", "Hillary"]

    def test_small_example(self):
        p = Profile.from_names("abc", [(2, "abc"), (2, "bac"), (1, "cab")])
        assert instant_runoff_winners(p) == {0}

    def test_majority_winner_always_wins(self):
        p = Profile.from_names("abc", [(3, "cab"), (1, "abc"), (1, "bca")])
        assert instant_runoff_winners(p) == {2}

    def test_tie_union_keeps_supported_set(self):
        # deleting the whole tied minimum at once would elect c here
        p = Profile.from_names("abc", [(3, "abc"), (3, "bac"), (4, "cab")])
        assert instant_runoff_winners(p) == {0, 1}


class TestSimpson:
    def test_four_bloc(self, four_bloc):
        rep = report("simpson", four_bloc)
        assert names(four_bloc, rep.winners) == {"a"}
        assert [rep.scores[a] for a in range(4)] == [51, 49, 43, 0]

    def test_cycle_ties(self, cycle3):
        rep = report("simpson", cycle3)
        assert rep.winners == {0, 1, 2}
        assert set(rep.scores.values()) == {1}


class TestYoung:
    def test_condorcet_winner_scores_zero(self, four_bloc):
        assert young_score(four_bloc, 0) == 0
        assert names(four_bloc, young_winners(four_bloc)) == {"a"}

    def test_cycle_scores_one(self, cycle3):
        assert [young_score(cycle3, a) for a in range(3)] == [1, 1, 1]
        assert young_winners(cycle3) == {0, 1, 2}


class TestDodgson:
    def test_condorcet_winner_scores_zero(self, four_bloc):
        assert dodgson_score(four_bloc, 0) == 0
        assert names(four_bloc, dodgson_winners(four_bloc)) == {"a"}

    def test_cycle_scores_one(self, cycle3):
        assert [dodgson_score(cycle3, a) for a in range(3)] == [1, 1, 1]

    def test_lift_past_blockers(self):
        # b must climb the whole single ballot: 2 swaps through c then a
        p = Profile.from_names("abc", [(1, "acb")])
        assert dodgson_score(p, 1) == 2
        assert dodgson_score(p, 2) == 1
        assert dodgson_score(p, 0) == 0


class TestCLR:
    def test_four_bloc(self, four_bloc):
        rep = report("clr", four_bloc)
        assert names(four_bloc, rep.winners) == {"a"}
        assert rep.scores[0] == 0

    def test_cycle_margins(self, cycle3):
        rep = report("clr", cycle3)
        assert set(rep.scores.values()) == {Fraction(1, 2)}
        assert rep.winners == {0, 1, 2}


class TestBlack:
    def test_four_bloc_condorcet_branch(self, four_bloc):
        assert names(four_bloc, black_winners(four_bloc)) == {"a"}

    def test_primary_five(self, primary_five):
        assert names(primary_five, black_winners(primary_five)) == {"John"}

    def test_cycle_borda_fallback(self, cycle3):
        assert black_winners(cycle3) == {0, 1, 2}

    def test_weak_winner_does_not_preempt_borda(self):
        # a ties b, beats c; no strict winner, so the positional scores decide
        p = Profile.from_names("abc", [(1, "abc"), (1, "bac")])
        rep = report("black", p)
        assert rep.trace["condorcet_winner"] is None
        assert rep.winners == {0, 1}


class TestConvexMedian:
    def test_four_bloc_scores(self, four_bloc):
        rep = report("convexmedian", four_bloc)
        assert names(four_bloc, rep.winners) == {"c"}
        expected = {
            0: Fraction(72, 29),
            1: Fraction(71, 28),
            2: Fraction(57, 25),
            3: Fraction(107, 25),
        }
        assert rep.scores == expected

    def test_four_bloc_scores_match_grid_scan(self, four_bloc):
        # independent check: densely scan depths for the last feasible point
        from votelab import truncated_borda

        for a in range(4):
            feasible = [
                Fraction(i, 512)
                for i in range(512, 6 * 512)
                if truncated_borda(four_bloc, a, Fraction(i, 512)) / Fraction(i, 512)
                <= Fraction(100, 2)
            ]
            grid_value = feasible[-1]
            assert abs(grid_value - convex_median_score(four_bloc, a)) <= Fraction(1, 512)

    def test_majority_winner_override(self):
        p = Profile.from_names("abc", [(3, "cab"), (2, "abc")])
        rep = report("convexmedian", p)
        assert rep.winners == {2}
        assert rep.trace["majority_winner"] == 2

    def test_mutual_majority_at_m_equals_k_plus_1(self):
        from votelab import worst_case_profile

        p = worst_case_profile(3, 2, Fraction(51, 100), 200)
        assert convex_median_winners(p) <= {0, 1}


class TestVetoCore:
    def test_cycle_all_stable(self, cycle3):
        assert proportional_veto_core(cycle3) == {0, 1, 2}

    def test_four_bloc(self, four_bloc):
        rep = report("vetocore", four_bloc)
        assert names(four_bloc, rep.winners) == {"a", "b"}
        assert set(rep.trace["blocked"]) == {2, 3}
        assert rep.trace["blocked"][2]["blocking_set"] == [0, 1]

    def test_single_voter_unanimity(self):
        p = Profile.from_names("abcd", [(1, "cadb")])
        assert proportional_veto_core(p) == {2}

    def test_type_budget(self, four_bloc):
        from votelab import SearchBudgetExceeded

        with pytest.raises(SearchBudgetExceeded):
            proportional_veto_core(four_bloc, max_types=2)


class TestTradeoffRule:
    def test_quadratic_scores(self):
        p = Profile.from_names("abc", [(2, "abc"), (2, "bca")])
        rep = report("t12rule", p)
        assert rep.scores[0] == 1
        assert rep.scores[1] == 1
        assert rep.scores[2] == ExactNumber(9, 1, 129, 8)
        # b outscores a under every convex scoring rule, so the tie at the
        # minimum resolves to b alone
        assert rep.trace["score_argmin"] == [0, 1]
        assert names(p, rep.winners) == {"b"}

    def test_scores_match_numeric_scan(self):
        p = Profile.from_names("abc", [(2, "abc"), (2, "bca")])
        from votelab import truncated_borda

        n = p.n
        for a in range(3):
            feasible = 1
            for i in range(256, 5 * 256):
                t = Fraction(i, 256)
                if (3 * t + 1) * truncated_borda(p, a, t) <= n * t * (t + 1):
                    feasible = t
            assert abs(feasible - exact(report("t12rule", p).scores[a])) < Fraction(1, 128)

    def test_majority_winner_override(self):
        p = Profile.from_names("abc", [(3, "cab"), (2, "abc")])
        assert theorem12_rule_winners(p) == {2}

    def test_selects_from_supported_set_above_threshold(self):
        from votelab import worst_case_profile

        p = worst_case_profile(3, 1, Fraction(59, 100), 100)
        assert theorem12_rule_winners(p) == {0}

    def test_tradeoff_score_undefined_for_majority_winner(self):
        p = Profile.from_names("ab", [(3, "ab")])
        with pytest.raises(ValueError):
            tradeoff_score(p, 0)


class TestRegistry:
    def test_unknown_rule(self, four_bloc):
        with pytest.raises(ValueError):
            winners("approval", four_bloc)

    @pytest.mark.parametrize("rule_id", RULE_IDS)
    def test_single_candidate(self, rule_id):
        p = Profile(("solo",), ((2, (0,)),))
        assert winners(rule_id, p) == {0}


ALL_RULES = list(RULE_IDS)


@pytest.mark.parametrize("rule_id", ALL_RULES)
def test_m2_coincides_with_simple_majority(rule_id):
    rng = random.Random(42)
    for _ in range(30):
        counts = (rng.randint(1, 6), rng.randint(0, 6))
        ballots = [(counts[0], (0, 1))]
        if counts[1]:
            ballots.append((counts[1], (1, 0)))
        p = Profile(("a", "b"), tuple(ballots))
        assert winners(rule_id, p) == simple_majority_winners(p)


@pytest.mark.parametrize(
    "rule_id", ["simpson", "young", "dodgson", "clr", "black"]
)
def test_condorcet_consistency(rule_id):
    rng = random.Random(5)
    from votelab import random_profile

    found = 0
    while found < 25:
        p = random_profile(rng, rng.randint(2, 4), rng.randint(1, 7))
        cw = condorcet_winner(p)
        if cw is None:
            continue
        found += 1
        assert winners(rule_id, p) == {cw}


@settings(max_examples=40, deadline=None)
@given(profiles(max_m=3, max_voters=6))
def test_universality_and_anonymity(p):
    for rule_id in ALL_RULES:
        won = winners(rule_id, p)
        assert isinstance(won, ChoiceSet) and won
        assert won <= set(range(p.m))


@settings(max_examples=25, deadline=None)
@given(profiles(min_m=2, max_m=3, max_voters=6))
def test_neutrality_of_rules(p):
    perm = tuple(reversed(range(p.m)))
    q = relabel_profile(p, perm)
    for rule_id in ALL_RULES:
        mapped = {perm[a] for a in winners(rule_id, p)}
        assert mapped == set(winners(rule_id, q))


@settings(max_examples=30, deadline=None)
@given(profiles(min_m=2, max_m=4, max_voters=8))
def test_borda_dual_formulas(p):
    rep = report("borda", p)
    tm = tournament_matrix(p)
    for a in range(p.m):
        assert rep.scores[a] == sum(tm.h[a][b] for b in range(p.m) if b != a)
