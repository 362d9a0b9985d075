"""votelab: voting rules, majority/veto power criteria, and exact quota bounds."""

from .criteria import (
    CriterionQuery,
    Quota,
    Violation,
    check_qk_majority,
    check_ql_veto,
    mutual_majority_groups,
    mutual_minority_groups,
    quota_majority,
    quota_majority_sup,
    quota_veto_sup,
    second_order_dominance,
    tradeoff_threshold,
)
from .errors import ProfileFormatError, SearchBudgetExceeded, VotelabError
from .exact import ExactNumber, exact
from .model import (
    ChoiceSet,
    PositionalMatrix,
    Profile,
    TournamentMatrix,
    condorcet_winner,
    default_candidates,
    majority_loser,
    majority_winner,
    positional_matrix,
    relabel_profile,
    restrict_profile,
    tournament_matrix,
    truncated_borda,
    weak_condorcet_winners,
)
from .profile_io import parse_profile, serialize_profile
from .rules import (
    RULE_IDS,
    ScoreReport,
    ScoreVector,
    black_winners,
    borda_winners,
    clr_winners,
    convex_median_score,
    convex_median_winners,
    dodgson_score,
    dodgson_winners,
    instant_runoff_winners,
    plurality_runoff_winners,
    plurality_winners,
    proportional_veto_core,
    report,
    scoring_winners,
    simple_majority_winners,
    simpson_winners,
    theorem12_rule_winners,
    tradeoff_score,
    winners,
    young_score,
    young_winners,
)
from .search import (
    SearchBudget,
    all_profiles,
    condorcet_k_tuple,
    empirical_quota,
    exhaustive_criterion_search,
    max_violation,
    oracle_dodgson_score,
    oracle_young_score,
    parallel_universe_irv,
    random_profile,
    worst_case_profile,
)
from .tables import emit_table, table_data

__version__ = "0.1.0"
