import pytest

from cohepow.clocked import CeSetEnumerator, RuleFunction, TableFunction, halting_set, pair, program, scaled_program
from cohepow.cohesive import ReservedSet, default_cohesive, reserved_computable_subset
from cohepow.constructions import (
    ColoredDense, DenseBlocks, SuccessorBreaker, audit_colored_actions, audit_restraint,
    build_colored_dense, build_noncomputable_successor_copy, build_successor_breaker,
    collapse_coloring, default_noncomputable_successor, dense_blocks_theta,
    naive_successor_breaker, partition_block,
)
from cohepow.orders import Found, Naturals, successor_probe
from cohepow.staged import replay_trace

R = ReservedSet(parity=1, cutoff=6)


# -- partition blocks ---------------------------------------------------------------

def test_partition_blocks():
    assert [x for x in range(10) if partition_block(0, 0, x)] == [0, 2, 4, 6, 8]
    assert partition_block(0, 0, 4)
    assert [partition_block(1, 0, x) for x in range(6)] == [True, True, False, False, True, True]
    assert any(partition_block(0, 0, x) and partition_block(1, 1, x) for x in range(8))


def test_collapse_coloring():
    assert collapse_coloring(lambda x: 0, 1)(5) == 0
    assert collapse_coloring(lambda x: 7, 1)(5) == 1
    assert collapse_coloring(lambda x: 2, 3)(5) == 2
    assert all(collapse_coloring(lambda x: x, 0)(x) == 0 for x in range(20))


# -- noncomputable successor order -------------------------------------------------

def test_nzq_displayed_rules():
    A = CeSetEnumerator.from_predicate(lambda x: x % 2 == 1 and x >= 3, "odd >= 3")
    f = RuleFunction(lambda k: 3 + 2 * k, "3+2k")
    L = build_noncomputable_successor_copy(A, f)
    assert L.less(6, 1) is True and L.less(1, 8) is True
    assert all(L.less(2 * a, 2 * b) is True for a in range(10) for b in range(a + 1, 10))


def test_nzq_successor_characterizes_membership():
    L = default_noncomputable_successor(2000)
    K = halting_set(2000)
    for a in range(0, 24):
        probe = successor_probe(L, 2 * a, 4000)
        assert isinstance(probe, Found)
        assert (probe != Found(2 * a + 2)) == K.contains(a, 2000), a


# -- successor breaker -----------------------------------------------------------

def test_breaker_matches_naive_transcription():
    fast = build_successor_breaker(R, 200)
    slow = naive_successor_breaker(R, 200)
    assert fast.in_order() == slow.in_order()
    assert [r["added"] for r in fast.trace] == [r["added"] for r in slow.trace]


def test_breaker_stage_one_is_append_order():
    L = build_successor_breaker(R, 1)
    assert L.in_order() == [0, 1]
    assert L.trace == []


def test_breaker_breaks_successor_program():
    L = build_successor_breaker(R, 2000)
    succ = 2  # index of n -> n+1
    C = default_cohesive()
    hits = [n for n in C.elements if pair(succ, n) < 2000 and all(L.less(j, n) for j in range(succ + 1))]
    assert hits
    for n in hits:
        between = [m for m in L.in_order()[L.position(n) + 1:L.position(n + 1)]]
        assert between and all(R(m) for m in between)


def test_breaker_never_targets_reserved_elements():
    L = build_successor_breaker(R, 2000)
    assert not any(R(rec["witness"]["n"]) for rec in L.trace)
    assert audit_restraint(L) == []
    assert L.stability_problems() == []


def test_breaker_frozen_prefix():
    L = build_successor_breaker(R, 500)
    assert L.in_order()[:12] == [0, 1, 2, 3, 21, 4, 27, 5, 35, 6, 45, 7]
    assert len(L.trace) == 14


def test_breaker_trace_replays():
    L = build_successor_breaker(R, 800)
    assert replay_trace(L.trace, 800).in_order() == L.in_order()


def test_breaker_estimator():
    est = SuccessorBreaker(stages=100).fit(default_cohesive())
    assert est.reserved_ == R
    assert len(est.transform()) >= 101


# -- DenseBlocks ----------------------------------------------------------------

def test_dense_blocks_empty_interval():
    W = default_cohesive().complement
    theta, ledger = dense_blocks_theta(RuleFunction(lambda n: 0), RuleFunction(lambda n: 1), W, 100)
    assert theta.graph == {}


def test_dense_blocks_covers_small_k_strictly_inside():
    W = default_cohesive().complement
    theta, ledger = dense_blocks_theta(RuleFunction(lambda n: 0), RuleFunction(lambda n: 2 * n), W, 300)
    assert all(k in ledger.cover for k in range(6))
    assert all(not W.contains(ledger.cover[k], 300) for k in range(6))
    assert all(0 < x < 2 * n for n, (x, _) in theta.graph.items())
    est = DenseBlocks(stages=50).fit(RuleFunction(lambda n: 0), RuleFunction(lambda n: 2 * n), W)
    assert est.transform() is not None


# -- colored dense ----------------------------------------------------------------

def test_colored_dense_without_demands_is_append_order():
    W = default_cohesive().complement
    never = RuleFunction(lambda n: None, "nowhere")
    L = build_colored_dense(W, 100, [never, never])
    assert L.in_order() == list(range(101))
    assert set(L.color.values()) == {0}


@pytest.fixture(scope="module")
def colored():
    from cohepow.suites import colored_window
    W = colored_window(1000).complement
    progs = [scaled_program(4), scaled_program(8)]
    return build_colored_dense(W, 1000, progs), W, progs


def test_colored_dense_intervals_get_every_color(colored):
    L, W, progs = colored
    assert L.trace
    for rec in L.trace:
        u, v = rec["witness"]["left"], rec["witness"]["right"]
        if (u, v) == (4 * rec["witness"]["n"], 8 * rec["witness"]["n"]):
            for c in range(max(u, v) + 1):
                assert L.has_color_between(u, v, c)


def test_colored_dense_audit_and_replay(colored):
    L, W, progs = colored
    assert audit_colored_actions(L, W, progs) == []
    assert L.stability_problems() == []
    R2 = replay_trace(L.trace, 1000, colored=True)
    assert R2.in_order() == L.in_order() and R2.color == L.color


def test_colored_dense_estimator():
    from cohepow.suites import colored_window
    est = ColoredDense(stages=100).fit(colored_window(100))
    assert len(est.transform()) >= 101
