import random

import pytest

from cohepow.clocked import pair, unpair
from cohepow.errors import PreconditionFailed
from cohepow.shuffles import (
    PulledBack, brute_fiber_size, forall_exists_cost, pull_back, r_below, r_false, r_true,
    shuffle_all, shuffle_finite, shuffle_pi2, shuffle_sigma2, verify_least,
)
from cohepow.staged import StagedOrder

COLORS = [0, 1, 3, 0, 0, 2, 3, 20, 1, 0, 3, 19, 25]


def colored_line(colors=COLORS):
    """Append order 0 < 1 < ... with the given colors."""
    L = StagedOrder(colored=True)
    for x, c in enumerate(colors):
        L.append(x, x, c)
    L.stage = len(colors) - 1
    return L


def test_singleton_fibers_copy_the_base():
    L = colored_line()
    M = shuffle_finite(L, (1,))
    for x in range(len(COLORS)):
        assert M.fiber(x) == [pair(x, 0)]
    assert all(M.less(pair(a, 0), pair(b, 0)) == (a < b) for a in range(13) for b in range(13))


def test_finite_block_sizes_follow_collapsed_color():
    L = colored_line()
    M = shuffle_finite(L, (2, 3))
    for x, c in enumerate(COLORS):
        assert M.fiber_size(x) == (2 if c == 0 else 3)
    assert M.less(pair(4, 0), pair(4, 1)) is True


def test_shuffle_all_block_sizes():
    L = colored_line()
    M = shuffle_all(L)
    assert M.fiber(4) == [pair(4, i) for i in range(5)]     # color 0 at x=4
    assert M.fiber_size(2) == 3                               # color 3


def test_two_fibers_concatenate_in_base_order():
    L = colored_line()
    M = shuffle_all(L)
    both = M.fiber(3) + M.fiber(5)
    assert all(M.less(u, v) for i, u in enumerate(both) for v in both[i + 1:])


def test_pi2_with_trivial_predicate():
    L = colored_line()
    M = shuffle_pi2(L, r_true, 1)
    for x, c in enumerate(COLORS):
        assert M.fiber_size(x) == (x + 1 if c < 1 else c)


def test_pi2_capped_fibers():
    L = colored_line()
    M = shuffle_pi2(L, r_below, 17)
    assert M.fiber_size(7) == 20      # color 20 > x: the search succeeds
    assert M.fiber_size(11) == 19
    assert M.fiber_size(12) == 25
    assert M.fiber_size(2) == 3 and M.fiber_size(0) == 1   # color below k0: x+1
    assert M.fiber_size(10) == 11


def test_pi2_rejects_wrong_least_color():
    L = colored_line()
    with pytest.raises(PreconditionFailed):
        shuffle_pi2(L, r_below, 5)
    assert verify_least(r_below, 17)


def test_sigma2_block_sizes():
    L = colored_line(COLORS[:10] + [3])
    assert shuffle_sigma2(L, r_true).fiber_size(4) == 5          # color 0
    assert shuffle_sigma2(L, r_true).fiber_size(10) == 11        # color 3 grows to x+1
    assert shuffle_sigma2(L, r_false).fiber_size(10) == 3        # never extends


@pytest.mark.parametrize("kind,kw", [
    ("finite", {"ks": (2, 3)}), ("all", {}), ("pi2", {"R": r_true, "k0": 1}),
    ("pi2", {"R": r_below, "k0": 17}), ("sigma2", {"R": r_true}), ("sigma2", {"R": r_below}),
])
def test_fiber_sizes_against_brute_force(kind, kw):
    L = colored_line()
    make = {"finite": lambda: shuffle_finite(L, kw["ks"]), "all": lambda: shuffle_all(L),
            "pi2": lambda: shuffle_pi2(L, kw["R"], kw["k0"]),
            "sigma2": lambda: shuffle_sigma2(L, kw["R"])}[kind]
    M = make()
    for x, c in enumerate(COLORS):
        assert M.fiber_size(x) == brute_fiber_size(kind, x, c, **kw)


def test_search_costs():
    assert forall_exists_cost(r_true, 3, 4, 100) is not None
    assert forall_exists_cost(r_false, 3, 4, 10**4) is None


def test_exact_census_inside_a_fiber():
    L = colored_line()
    M = shuffle_all(L)
    assert M.census(pair(4, 0), pair(4, 4)) == 3
    assert M.census(pair(3, 0), pair(5, 0)) == 3 + 5


def test_pull_back_is_order_preserving_bijection():
    L = colored_line()
    M = shuffle_all(L)
    P = pull_back(M, 200)
    rng = random.Random(1)
    seen = {}
    for k in range(60):
        z = P.element(k)
        assert z is not None and z not in seen.values()
        seen[k] = z
    for _ in range(200):
        a, b = rng.randrange(60), rng.randrange(60)
        assert P.less(a, b) == M.less(seen[a], seen[b])


def test_pull_back_of_total_order_reindexes():
    from cohepow.orders import Naturals
    P = PulledBack(Naturals(), 100)
    assert [P.contains(k) for k in range(10)] == [True] * 10
