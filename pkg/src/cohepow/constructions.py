"""Stage-by-stage constructions of computable copies of omega.

* :class:`NoncomputableSuccessorOrder` orders the evens naturally and slots the
  odd number ``2k+1`` right after ``2 f(k)``.
* :func:`build_successor_breaker` appends numbers one per stage and inserts
  reserved elements between ``n`` and ``phi_e(n)`` whenever ``phi_e`` is about to
  compute the successor.
* :func:`dense_blocks_theta` enumerates a function landing deep inside the
  intervals ``(psi(n), phi(n))``.
* :func:`build_colored_dense` colors a copy of omega so that every color is
  dense between ``phi_l(n)`` and ``phi_r(n)`` for pairs of programs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from sklearn.base import BaseEstimator
from sortedcontainers import SortedList

from .clocked import (
    NUMBERING_VERSION,
    PENDING,
    CeSetEnumerator,
    ClockedFunction,
    EnumerationOrder,
    Halted,
    halting_set,
    pair,
    program,
    unpair,
)
from .cohesive import CohesiveApprox, ReservedSet
from .orders import DEFAULT_BUDGET, ComputableOrder, Naturals
from .staged import StagedOrder
from .validation import check_bit, check_fitted, check_natural

DEFAULT_CHECKPOINTS = (0, 1, 2, 5, 10, 50, 100, 250, 500, 1000, 2000, 4000)


def partition_block(i: int, side: int, x: int) -> bool:
    """``x`` lies in the ``side`` half when ``N`` is cut into blocks of size ``2**i``."""
    check_bit(side, "side")
    return (x >> i) & 1 == side


def collapse_coloring(F: Callable[[int], int], N: int) -> Callable[[int], int]:
    check_natural(N, "N")
    return lambda x: min(F(x), N)


# -- the order with a non-computable successor ----------------------------

class NoncomputableSuccessorOrder(ComputableOrder):
    """Evens in natural order; ``2k+1`` sits just above ``2 f(k)``."""

    kind = "nzq"

    def __init__(self, f: ClockedFunction, A: CeSetEnumerator | None = None, name: str = "L_A"):
        self.f, self.A, self.name = f, A, name

    def _f(self, k, budget):
        return self.f.evaluate(k, budget)

    def contains(self, x, budget=DEFAULT_BUDGET):
        if x % 2 == 0:
            return True
        return True if self._f(x // 2, budget) is not PENDING else PENDING

    def _key(self, x, budget):
        # evens 2c -> (c, 0); odds 2k+1 -> (f(k), 1, f(k)) so odd-odd ties cannot occur
        if x % 2 == 0:
            return (x // 2, 0)
        v = self._f(x // 2, budget)
        return PENDING if v is PENDING else (v, 1)

    def less(self, a, b, budget=DEFAULT_BUDGET):
        ka, kb = self._key(a, budget), self._key(b, budget)
        if ka is PENDING or kb is PENDING:
            return PENDING
        return ka < kb

    def decided_elements(self, horizon, budget=DEFAULT_BUDGET):
        return [x for x in range(horizon + 1) if self.contains(x, budget) is True]


def default_noncomputable_successor(cap: int = 2000) -> NoncomputableSuccessorOrder:
    """Uses ``A = {e : phi_e(e) halts within cap steps}`` listed in order of entry."""
    A = halting_set(cap)
    f = EnumerationOrder(A).as_function("f_A")
    return NoncomputableSuccessorOrder(f, A)


def build_noncomputable_successor_copy(A: CeSetEnumerator, f: ClockedFunction) -> NoncomputableSuccessorOrder:
    return NoncomputableSuccessorOrder(f, A)


# -- successor breaker ----------------------------------------------------

def _prefix_max(order: StagedOrder, cache: list, e: int):
    while len(cache) <= e:
        j = len(cache)
        lab = order.labels[j]
        cache.append(lab if not cache or lab > cache[-1] else cache[-1])
    return cache[e]


def build_successor_breaker(R: ReservedSet, stages: int,
                            programs: Callable[[int], ClockedFunction] = program,
                            checkpoints: Sequence[int] = DEFAULT_CHECKPOINTS) -> StagedOrder:
    """Stage loop that keeps ``phi_e(n)`` from being the successor of ``n``.

    A pair ``<e, n>`` acts at most once: after it acts, or once ``phi_e(n)`` is
    in the order but fails to be the successor, the outcome can never change.
    So each pair is examined at the first stage where ``<e,n> < s``, ``phi_e(n)``
    has halted within ``s`` steps and its value is in the order.
    """
    stages = check_natural(stages, "stages")
    L = StagedOrder("successor breaker")
    L.numbering = NUMBERING_VERSION
    L.append(0, 0)
    pm: list = []
    halt: dict[int, Halted | None] = {}
    active = SortedList()
    ready_at: dict[int, list[int]] = {}
    for c in range(stages):
        e, n = unpair(c)
        r = programs(e).run(n, stages)
        halt[c] = r
        if r is not None:
            ready_at.setdefault(max(c + 1, r.steps), []).append(c)
    m = R.least_at_least(0)
    cps = set(checkpoints)
    if 0 in cps:
        L.take_snapshot(0)
    for s in range(1, stages + 1):
        L.stage = s
        if s not in L:
            L.append(s, s)
        for c in ready_at.get(s, ()):
            active.add(c)
        done = []
        for c in active:
            e, n = unpair(c)
            v = halt[c].value
            if v not in L:
                continue
            done.append(c)
            if L.successor(n) != v or R(n):
                continue
            if L.labels[n] <= _prefix_max(L, pm, e):
                continue
            while m in L:
                m = R.least_at_least(m + 1)
            L.insert_after(n, [m], s)
            L.trace.append({"stage": s, "pair": c, "witness": {"e": e, "n": n, "value": v},
                            "sides": None, "added": [m], "colors": None})
        for c in done:
            active.remove(c)
        if s in cps:
            L.take_snapshot(s)
    return L


def naive_successor_breaker(R: ReservedSet, stages: int,
                            programs: Callable[[int], ClockedFunction] = program) -> StagedOrder:
    """Direct transcription of the stage loop, rescanning every pair each stage."""
    L = StagedOrder("successor breaker (naive)")
    L.append(0, 0)
    for s in range(1, stages + 1):
        L.stage = s
        if s not in L:
            L.append(s, s)
        for c in range(s):
            e, n = unpair(c)
            v = programs(e).evaluate(n, s)
            if v is PENDING or v not in L:
                continue
            if L.successor(n) != v or R(n):
                continue
            if any(not L.less(j, n) for j in range(e + 1)):
                continue
            m = R.least_at_least(0)
            while m in L:
                m = R.least_at_least(m + 1)
            L.insert_after(n, [m], s)
            L.trace.append({"stage": s, "pair": c, "witness": {"e": e, "n": n, "value": v},
                            "sides": None, "added": [m], "colors": None})
    return L


def audit_restraint(L: StagedOrder) -> list[str]:
    """Every inserted element lies above all of ``0..e`` for the acting ``e``."""
    bad = []
    for rec in L.trace:
        e, n = rec["witness"]["e"], rec["witness"]["n"]
        for m in rec["added"]:
            if any(not L.less(j, n) or not L.less(j, m) for j in range(e + 1)):
                bad.append(f"stage {rec['stage']}: {m} below the restraint of e={e}")
    return bad


class SuccessorBreaker(BaseEstimator):
    def __init__(self, stages: int = 2000):
        self.stages = stages

    def fit(self, cohesive: CohesiveApprox, y=None):
        from .cohesive import reserved_computable_subset
        self.reserved_ = reserved_computable_subset(cohesive)
        self.order_ = build_successor_breaker(self.reserved_, self.stages)
        return self

    def transform(self, X=None):
        check_fitted(self, "order_")
        return self.order_


# -- DenseBlocks ------------------------------------------------------------

@dataclass
class CoverLedger:
    """Per-stage ``l0``, ``l1``, ``k`` and action; ``cover`` maps each covered k to its least cover."""

    stages: list[dict] = field(default_factory=list)
    cover: dict[int, int] = field(default_factory=dict)
    retractions: list[dict] = field(default_factory=list)


class EnumeratedFunction(ClockedFunction):
    """Partial function whose graph was enumerated stage by stage."""

    def __init__(self, name: str = "theta"):
        super().__init__(name)
        self.graph: dict[int, tuple[int, int]] = {}

    def _run(self, n, budget):
        hit = self.graph.get(n)
        return None if hit is None else Halted(hit[0], max(hit[1], 1))


def dense_blocks_theta(psi: ClockedFunction, phi: ClockedFunction, W: CeSetEnumerator,
                       stages: int, base: ComputableOrder | None = None):
    """Returns ``(theta, ledger)``."""
    base = base or Naturals()
    stages = check_natural(stages, "stages")
    theta = EnumeratedFunction(f"theta({psi.name},{phi.name})")
    ledger = CoverLedger()
    prev_cov: dict[int, int] = {}

    def values(n, s):
        a, b = psi.run(n, s), phi.run(n, s)
        return None if a is None or b is None else (a.value, b.value)

    def covers(s):
        cov = {}
        for n, (x, _) in theta.graph.items():
            if W.contains(n, s):
                continue
            ab = values(n, s)
            if ab is not None:
                cov[n] = min(base.census(ab[0], x, s), base.census(x, ab[1], s))
        return cov

    for s in range(stages + 1):
        cov = covers(s)
        l0 = max(cov.values()) + 1 if cov else 0
        l1 = None
        for n in sorted(prev_cov):
            if s > 0 and W.contains(n, s) and not W.contains(n, s - 1):
                below = max((cov[m] for m in cov if m < n), default=-1)
                if below + 1 <= prev_cov[n]:
                    l1 = below + 1 if l1 is None else min(l1, below + 1)
        for n in prev_cov:
            if n not in cov:
                ledger.retractions.append({"stage": s, "n": n, "in_W": W.contains(n, s)})
        k = l0 if l1 is None else min(l0, l1)
        action = None
        idx = base.index(s)
        for n in range(s + 1):
            if n in theta.graph or W.contains(n, s):
                continue
            ab = values(n, s)
            if ab is None:
                continue
            # strictly inside the interval, with at least k elements on each side
            lo, hi = idx.count_at_most(ab[0]), idx.count_below(ab[1])
            inner = idx.elements[lo + k: hi - k] if hi - lo > 2 * k else []
            if inner:
                action = (n, min(inner))
                break
        if action:
            theta.graph[action[0]] = (action[1], s)
        ledger.stages.append({"stage": s, "l0": l0, "l1": l1, "k": k, "action": action})
        prev_cov = cov
    final = {}
    for n, c in sorted(covers(stages).items()):
        for j in range(c + 1):
            final.setdefault(j, n)
    ledger.cover = final
    return theta, ledger


class DenseBlocks(BaseEstimator):
    def __init__(self, stages: int = 300):
        self.stages = stages

    def fit(self, psi: ClockedFunction, phi: ClockedFunction, W: CeSetEnumerator):
        self.theta_, self.ledger_ = dense_blocks_theta(psi, phi, W, self.stages)
        return self

    def transform(self, X=None):
        check_fitted(self, "theta_")
        return self.theta_


# -- colored dense copy -----------------------------------------------------

SIDES = ((0, 0), (0, 1), (1, 0), (1, 1))


def _greatest_r(code: int) -> int:
    r = 0
    while pair(r + 1, 0) <= code:
        r += 1
    return r


class _Demand:
    """Bookkeeping for one pair code and one choice of sides."""

    __slots__ = ("ready", "frontier", "m3")

    def __init__(self, N: int):
        self.ready = SortedList()
        self.frontier = N
        self.m3 = N


def build_colored_dense(W: CeSetEnumerator, stages: int, programs: Sequence[ClockedFunction],
                        checkpoints: Sequence[int] = DEFAULT_CHECKPOINTS) -> StagedOrder:
    """Colored copy of omega in which colors are dense between pairs of programs.

    ``programs`` is the list of functions playing the role of the enumeration;
    indices outside the list name the nowhere-defined function, so pairs that
    mention them never act.
    """
    stages = check_natural(stages, "stages")
    P = list(programs)
    L = StagedOrder("colored dense", colored=True)
    L.numbering = NUMBERING_VERSION
    L.programs = [p.name for p in P]
    L.append(0, 0)
    pm: list = []
    prefix_ok = [-1] * len(P)
    values: list[list[int]] = [[] for _ in P]
    demands: dict[tuple[int, int], _Demand] = {}
    waiting: dict[int, list[tuple[int, int, int]]] = {}
    last_sides: dict[int, list[tuple[int, tuple[int, int]]]] = {}
    cps = set(checkpoints)
    if 0 in cps:
        L.take_snapshot(0)

    def wake(xs):
        for x in xs:
            for key, n in ((w[:2], w[2]) for w in waiting.pop(x, ())):
                demands[key].ready.add(n)

    for s in range(1, stages + 1):
        L.stage = s
        if s not in L:
            L.append(s, s)
            wake([s])
        for i, f in enumerate(P):
            while True:
                r = f.run(prefix_ok[i] + 1, s)
                if r is None:
                    break
                prefix_ok[i] += 1
                values[i].append(r.value)
        for code in range(s):
            p, N = unpair(code)
            li, ri = unpair(p)
            if li >= len(P) or ri >= len(P):
                continue
            t1 = min(prefix_ok[li], prefix_ok[ri], s)
            if t1 < N:
                continue
            fl, fr = values[li], values[ri]
            found = None
            for a, b in SIDES:
                key = (code, 2 * a + b)
                d = demands.get(key)
                if d is None:
                    d = demands[key] = _Demand(N)
                while d.frontier <= t1:
                    n = d.frontier
                    if partition_block(2 * p, a, fl[n]) and partition_block(2 * p + 1, b, fr[n]):
                        d.ready.add(n)
                    d.frontier += 1
                while d.m3 <= t1:
                    m = d.m3
                    wrong = (partition_block(2 * p, 1 - a, fl[m])
                             or partition_block(2 * p + 1, 1 - b, fr[m]))
                    if wrong and not W.contains(m, s):
                        break
                    d.m3 += 1
                limit = min(t1, d.m3 - 1)
                dead = []
                for n in d.ready.irange(N, limit):
                    u, v = fl[n], fr[n]
                    if u not in L or v not in L:
                        waiting.setdefault(u if u not in L else v, []).append((code, 2 * a + b, n))
                        dead.append(n)
                        continue
                    if not L.less(u, v) or L.labels[u] <= _prefix_max(L, pm, code):
                        dead.append(n)
                        continue
                    c = max(u, v)
                    if all(L.has_color_between(u, v, col) for col in range(c, -1, -1)):
                        dead.append(n)
                        continue
                    found = (a, b, n)
                    break
                for n in dead:
                    d.ready.remove(n)
                if found:
                    break
            if not found:
                continue
            a, b, n = found
            u, v = fl[n], fr[n]
            last_sides.setdefault(p, []).append((code, (a, b)))
            r = _greatest_r(code)
            sides = {}
            for q in range(r + 1):
                used = [sd for cd, sd in last_sides.get(q, ()) if cd <= code]
                sides[q] = used[-1] if used else (0, 0)
            pattern = 0
            for q, (aq, bq) in sides.items():
                pattern |= (1 - aq) << (2 * q) | (1 - bq) << (2 * q + 1)
            modulus = 1 << (2 * r + 2)
            c = max(u, v)
            ks, j = [], 0
            while len(ks) < c + 1:
                k = pattern + j * modulus
                if k not in L:
                    ks.append(k)
                j += 1
            anchor = L.predecessor(v)
            L.insert_after(anchor, ks, s, range(c + 1))
            wake(ks)
            L.trace.append({"stage": s, "pair": code, "p": p, "N": N,
                            "witness": {"n": n, "left": u, "right": v}, "sides": [a, b],
                            "added": ks, "colors": list(range(c + 1)),
                            "side_table": {str(q): list(sd) for q, sd in sides.items()},
                            "anchor": anchor})
        if s in cps:
            L.take_snapshot(s)
    return L


def audit_colored_actions(L: StagedOrder, W: CeSetEnumerator,
                          programs: Sequence[ClockedFunction]) -> list[str]:
    """Re-check conditions (1)-(5) and the selection rule for every recorded action."""
    bad = []
    P = list(programs)
    for rec in L.trace:
        s, code, p, N = rec["stage"], rec["pair"], rec["p"], rec["N"]
        n, u, v = rec["witness"]["n"], rec["witness"]["left"], rec["witness"]["right"]
        a, b = rec["sides"]
        li, ri = unpair(p)
        tag = f"stage {s} pair {code}"
        first = L.seq[rec["added"][0]]
        if not N <= n <= s:
            bad.append(f"{tag}: input out of range")
        if any(P[i].run(m, s) is None for i in (li, ri) for m in range(n + 1)):
            bad.append(f"{tag}: condition 1")
        if not (partition_block(2 * p, a, u) and partition_block(2 * p + 1, b, v)):
            bad.append(f"{tag}: condition 2")
        for m in range(N, n + 1):
            wl = partition_block(2 * p, 1 - a, P[li].evaluate(m, s))
            wr = partition_block(2 * p + 1, 1 - b, P[ri].evaluate(m, s))
            if (wl or wr) and not W.contains(m, s):
                bad.append(f"{tag}: condition 3 at {m}")
                break
        if not (L.seq[u] < first and L.seq[v] < first and L.less(u, v)):
            bad.append(f"{tag}: condition 4 endpoints")
        c = max(u, v)
        missing = any(all(L.seq[k] >= first for k in L.colored_between(u, v, d))
                      for d in range(c, -1, -1))
        if not missing:
            bad.append(f"{tag}: condition 4 colors")
        if any(not L.less(j, u) for j in range(code + 1)):
            bad.append(f"{tag}: condition 5")
        r = _greatest_r(code)
        table = {int(q): tuple(sd) for q, sd in rec["side_table"].items()}
        for k in rec["added"]:
            if any(partition_block(2 * q, aq, k) or partition_block(2 * q + 1, bq, k)
                   for q, (aq, bq) in table.items()):
                bad.append(f"{tag}: {k} outside the selected intersection")
        if rec["colors"] != list(range(c + 1)) or len(table) != r + 1:
            bad.append(f"{tag}: coloring")
        if not (L.less(u, rec["added"][0]) and L.less(rec["added"][-1], v)):
            bad.append(f"{tag}: chain not inside the interval")
    return bad


class ColoredDense(BaseEstimator):
    def __init__(self, stages: int = 1000, programs=None):
        self.stages = stages
        self.programs = programs

    def fit(self, cohesive: CohesiveApprox, y=None):
        from .clocked import scaled_program
        progs = self.programs or [scaled_program(4), scaled_program(8)]
        self.order_ = build_colored_dense(cohesive.complement, self.stages, progs)
        return self

    def transform(self, X=None):
        check_fitted(self, "order_")
        return self.order_
