import pytest
from hypothesis import strategies as st

from votelab import Profile, default_candidates


@pytest.fixture
def four_bloc():
    """Four candidates, four voter blocs of 29/28/22/21; a beats everyone
    pairwise while c tops the positional counts."""
    return Profile.from_names(
        "abcd", [(29, "abcd"), (28, "bacd"), (22, "cdab"), (21, "cdba")]
    )


@pytest.fixture
def primary_five():
    """Five fictional candidates, percent shares scaled to 100 voters."""
    names = ["Hillary", "Donald", "John", "Ted", "Bernie"]
    return Profile.from_names(
        names,
        [
            (22, ["Hillary", "John", "Bernie", "Ted", "Donald"]),
            (21, ["Donald", "John", "Ted", "Bernie", "Hillary"]),
            (18, ["John", "Ted", "Bernie", "Donald", "Hillary"]),
            (19, ["Ted", "Bernie", "John", "Donald", "Hillary"]),
            (20, ["Bernie", "John", "Ted", "Hillary", "Donald"]),
        ],
    )


@pytest.fixture
def cycle3():
    return Profile.from_names("abc", [(1, "abc"), (1, "bca"), (1, "cab")])


@st.composite
def profiles(draw, max_m=4, max_voters=8, min_m=1):
    m = draw(st.integers(min_m, max_m))
    rankings = st.permutations(range(m)).map(tuple)
    ballots = draw(
        st.lists(st.tuples(st.integers(1, 3), rankings), min_size=1, max_size=max_voters)
    )
    total = sum(c for c, _ in ballots)
    if total > max_voters:
        # trim counts down to respect the voter bound
        trimmed = []
        left = max_voters
        for count, ranking in ballots:
            take = min(count, left)
            if take:
                trimmed.append((take, ranking))
            left -= take
            if left == 0:
                break
        ballots = trimmed or [ballots[0][:1] + (ballots[0][1],)]
        ballots = [(max(1, c), r) for c, r in ballots]
    return Profile(default_candidates(m), tuple(ballots))
