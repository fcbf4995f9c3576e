from fractions import Fraction

import pytest

from cohepow.clocked import PENDING
from cohepow.staged import StagedOrder, replay_trace


def build():
    L = StagedOrder(colored=True)
    for x in range(5):
        L.append(x, x)
    L.stage = 4
    L.take_snapshot(4)
    L.insert_after(1, [10, 11], 5, [2, 3])
    L.stage = 5
    return L


def test_insertions_sit_between_neighbours():
    L = build()
    assert L.in_order() == [0, 1, 10, 11, 2, 3, 4]
    assert L.successor(1) == 10 and L.predecessor(2) == 11
    assert L.between(1, 2) == [10, 11]
    assert L.colored_between(0, 4, 3) == [11]
    assert L.has_color_between(0, 4, 2) and not L.has_color_between(2, 4, 2)


def test_comparisons_never_change():
    L = build()
    assert L.stability_problems() == []
    assert isinstance(L.labels[10], Fraction)


def test_membership_respects_budget():
    L = build()
    assert L.contains(10, 5) is True
    assert L.contains(10, 4) is PENDING
    assert L.contains(5) is False
    assert L.contains(70) is PENDING
    assert L.less(0, 10, budget=4) is PENDING


def test_census_exact_and_bounded():
    L = build()
    assert L.census(0, 4) == 5
    assert L.predecessors(2) == 4
    assert L.predecessors(2, horizon=5) == 2


def test_duplicate_insert_rejected():
    L = build()
    with pytest.raises(ValueError):
        L.append(3, 6)


def test_trace_replay_round_trip():
    L = StagedOrder()
    L.append(0, 0)
    for s in (1, 2, 3):
        L.stage = s
        L.append(s, s)
    L.insert_after(1, [9], 3)
    L.trace.append({"stage": 3, "witness": {"n": 1}, "added": [9], "colors": None})
    assert replay_trace(L.trace, 3).in_order() == L.in_order() == [0, 1, 9, 2, 3]
