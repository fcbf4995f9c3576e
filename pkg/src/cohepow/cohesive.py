"""Finite windows of cohesive sets.

Two sources are provided.  ``family_cohesive`` settles, one set at a time, on the
side of each c.e. set that keeps enough elements, preferring the inside; the
result sits exactly inside or outside every member of the family.
``build_maximal`` runs a marker construction of a maximal set over a family and
keeps the unenumerated part of ``[0, horizon]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from sklearn.base import BaseEstimator

from .clocked import (
    PENDING,
    CeSetEnumerator,
    ClockedFunction,
    Halted,
    halting_set,
    program,
)
from .errors import EmptyWindow, Undetermined
from .validation import check_fitted, check_natural

DEFAULT_MIN_KEEP = 8


@dataclass(frozen=True)
class CohesiveApprox:
    elements: tuple[int, ...]
    stage: int
    horizon: int
    provenance: str
    complement: CeSetEnumerator = field(compare=False, repr=False)
    family: tuple[str, ...] = ()

    def __post_init__(self):
        els = self.elements
        if any(b <= a for a, b in zip(els, els[1:])):
            raise ValueError("window elements must ascend strictly")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def refresh(self, stage: int) -> "CohesiveApprox":
        """Drop elements the complement has enumerated by ``stage``."""
        stage = max(stage, self.stage)
        keep = tuple(x for x in self.elements if not self.complement.contains(x, stage))
        return CohesiveApprox(keep, stage, self.horizon, self.provenance, self.complement, self.family)

    def truncate(self, bound: int) -> "CohesiveApprox":
        """Restrict the window to elements ``<= bound``."""
        keep = tuple(x for x in self.elements if x <= bound)
        return CohesiveApprox(keep, self.stage, min(self.horizon, bound), self.provenance,
                              self.complement, self.family)

    def describe(self) -> dict:
        return {"provenance": self.provenance, "stage": self.stage, "horizon": self.horizon,
                "size": len(self.elements), "family": list(self.family)}

    def to_json(self) -> str:
        return json.dumps({"provenance": self.provenance, "stage": self.stage,
                           "horizon": self.horizon, "elements": list(self.elements)})

    @classmethod
    def from_json(cls, text: str) -> "CohesiveApprox":
        data = json.loads(text)
        for key in ("stage", "horizon", "elements"):
            if key not in data:
                raise ValueError(f"cohesive window JSON lacks {key!r}")
        return injected(data["elements"], data["stage"], data["horizon"],
                        provenance=data.get("provenance", "injected"))


def injected(elements: Sequence[int], stage: int, horizon: int,
             provenance: str = "injected") -> CohesiveApprox:
    """Window supplied by hand; its complement inside the horizon enters at stage ``x``."""
    members = frozenset(elements)
    comp = CeSetEnumerator(lambda x: x if x <= horizon and x not in members else None,
                           "complement(injected)")
    return CohesiveApprox(tuple(sorted(members)), stage, horizon, provenance, comp)


# -- family-relative windows -------------------------------------------------

def family_cohesive(family: Sequence[CeSetEnumerator], stage: int, horizon: int,
                    min_keep: int = DEFAULT_MIN_KEEP) -> CohesiveApprox:
    stage = check_natural(stage, "stage")
    horizon = check_natural(horizon, "horizon")
    current = list(range(horizon + 1))
    reasons: list[tuple[CeSetEnumerator, bool]] = []
    for w in family:
        inside = [x for x in current if w.contains(x, stage)]
        if len(inside) >= min_keep:
            current, keep_in = inside, True
        else:
            current, keep_in = [x for x in current if not w.contains(x, stage)], False
        reasons.append((w, keep_in))
    if not current:
        raise EmptyWindow(f"no element of [0, {horizon}] survives at stage {stage}")
    members = frozenset(current)

    def entry(x):
        if x > horizon or x in members:
            return None
        best = None
        for w, keep_in in reasons:
            if keep_in and not w.contains(x, stage):
                t = x if w.decidable else stage
            elif not keep_in and w.contains(x, stage):
                t = w.entry_stage(x)
            else:
                continue
            best = t if best is None else min(best, t)
        return best

    comp = CeSetEnumerator(entry, "complement(family)")
    return CohesiveApprox(tuple(current), stage, horizon, "family-relative", comp,
                          tuple(w.name for w in family))


def tail_contract_cut(window: Sequence[int], w: CeSetEnumerator, stage: int) -> int | None:
    """Least index from which the window lies inside or outside ``w`` at ``stage``."""
    flags = [w.contains(x, stage) for x in window]
    cut = len(flags)
    while cut > 0 and flags[cut - 1] == flags[-1]:
        cut -= 1
    return cut


def interpreter_family(k: int, cap: int) -> list[CeSetEnumerator]:
    return [CeSetEnumerator.domain_of(program(e), cap, f"W_{e}") for e in range(k)]


def evens() -> CeSetEnumerator:
    return CeSetEnumerator.from_predicate(lambda x: x % 2 == 0, "evens")


def multiples_of(m: int) -> CeSetEnumerator:
    return CeSetEnumerator.from_predicate(lambda x: x % m == 0, f"multiples of {m}")


def bit_clear(i: int) -> CeSetEnumerator:
    return CeSetEnumerator.from_predicate(lambda x: not (x >> i) & 1, f"bit {i} clear")


def canonical_family(cap: int = 4000) -> list[CeSetEnumerator]:
    """Six c.e. sets of mixed shape used to exercise the family contract."""
    return [
        evens(),
        multiples_of(3),
        CeSetEnumerator.from_predicate(lambda x: x % 5 in (0, 1), "residue 0 or 1 mod 5"),
        CeSetEnumerator.domain_of(program(4), cap, "W_4"),
        halting_set(cap),
        bit_clear(2),
    ]


def default_family(extra: Sequence[CeSetEnumerator] = (), k: int = 6,
                   cap: int = 4000) -> list[CeSetEnumerator]:
    return interpreter_family(k, cap) + [evens(), multiples_of(3)] + list(extra)


def default_cohesive(stage: int = 2000, horizon: int = 2048,
                     extra: Sequence[CeSetEnumerator] = ()) -> CohesiveApprox:
    return family_cohesive(default_family(extra), stage, horizon)


# -- maximal-set construction ---------------------------------------------

@dataclass
class MaximalSetState:
    """Markers sit on the unenumerated elements of ``[0, horizon]`` in order."""

    markers: list[int]
    e_states: list[tuple[int, ...]]
    stage: int
    horizon: int
    family_size: int
    enumerated: dict[int, int]
    history: list[list[tuple[int, ...]]] = field(repr=False, default_factory=list)
    moves: list[tuple[int, int, int]] = field(repr=False, default_factory=list)

    def complement_enumerator(self) -> CeSetEnumerator:
        entered = dict(self.enumerated)
        return CeSetEnumerator(entered.get, "maximal set")

    def window(self) -> CohesiveApprox:
        return CohesiveApprox(tuple(self.markers), self.stage, self.horizon, "maximal-set",
                              self.complement_enumerator(),
                              tuple(f"W_{e}" for e in range(self.family_size)))

    def is_maximized(self) -> bool:
        """No marker could move to a later marker with a larger state."""
        lim = min(len(self.markers), self.stage + 1)
        for i in range(lim):
            for j in range(i + 1, lim):
                if self.e_states[j][: i + 1] > self.e_states[i][: i + 1]:
                    return False
        return True


def _prefix(code: int, i: int, k: int) -> int:
    return code >> (k - min(i + 1, k))


def build_maximal(stages: int, horizon: int,
                  family: Sequence[CeSetEnumerator] | None = None,
                  record_history: bool = True) -> MaximalSetState:
    """Marker construction over ``family`` (default: domains of the first six programs).

    At each stage the lowest-index marker that sees a later marker (among the
    first ``stage + 1``) with a larger state jumps to the least such one, and the
    elements it skips are enumerated; this repeats until no marker can move.
    """
    stages = check_natural(stages, "stages")
    horizon = check_natural(horizon, "horizon")
    if family is None:
        family = interpreter_family(6, max(stages, 1))
    k = len(family)
    events: dict[int, list[tuple[int, int]]] = {}
    for x in range(horizon + 1):
        for e, w in enumerate(family):
            t = w.entry_stage(x)
            if t is not None and t <= stages:
                events.setdefault(t, []).append((x, e))
    code = [0] * (horizon + 1)
    comp = list(range(horizon + 1))
    enumerated: dict[int, int] = {}
    history, moves = [], []

    def snapshot():
        return [tuple((code[x] >> (k - 1 - b)) & 1 for b in range(k)) for x in comp]

    for s in range(stages + 1):
        for x, e in events.get(s, ()):
            code[x] |= 1 << (k - 1 - e)
        while k:
            lim = min(len(comp), s + 1)
            if lim < 2:
                break
            suf = [0] * (lim + 1)
            for j in range(lim - 1, -1, -1):
                suf[j] = max(suf[j + 1], code[comp[j]])
            move = None
            for i in range(lim - 1):
                mine = _prefix(code[comp[i]], i, k)
                if _prefix(suf[i + 1], i, k) > mine:
                    j = next(j for j in range(i + 1, lim) if _prefix(code[comp[j]], i, k) > mine)
                    move = (i, j)
                    break
            if move is None:
                break
            i, j = move
            for x in comp[i:j]:
                enumerated[x] = s
            moves.append((s, i, comp[j]))
            del comp[i:j]
        if record_history:
            history.append([code[x] for x in comp])
    states = snapshot()
    return MaximalSetState(comp, states, stages, horizon, k, enumerated, history, moves)


def marker_states(state: MaximalSetState, s: int) -> tuple[int, ...]:
    """Each marker's own state (prefix of length ``i + 1``) at the end of stage ``s``."""
    k = state.family_size
    return tuple(_prefix(c, i, k) for i, c in enumerate(state.history[s]))


def state_regressions(state: MaximalSetState) -> list[tuple[int, int]]:
    """(stage, marker) pairs where a marker's own state went down."""
    bad = []
    for s in range(1, len(state.history)):
        prev, cur = marker_states(state, s - 1), marker_states(state, s)
        bad.extend((s, i) for i in range(min(len(prev), len(cur))) if cur[i] < prev[i])
    return bad


def audit_monotone(state: MaximalSetState) -> list[str]:
    """Check the state trace; returns a list of problems (empty when sound).

    The sequence of marker states read left to right never decreases
    lexicographically, and a single marker's state only drops at a stage where
    some lower-index marker moved past it.
    """
    problems = []
    for s in range(1, len(state.history)):
        if marker_states(state, s) < marker_states(state, s - 1):
            problems.append(f"stage {s}: marker state sequence decreased")
    movers: dict[int, int] = {}
    for s, i, _ in state.moves:
        movers[s] = min(i, movers.get(s, i))
    for s, i in state_regressions(state):
        if movers.get(s, i) >= i:
            problems.append(f"stage {s}: marker {i} dropped without a higher-priority move")
    return problems


class MaximalSetCohesive(BaseEstimator):
    """Estimator wrapper: ``fit()`` runs :func:`build_maximal` and stores ``approx_``."""

    def __init__(self, stages: int = 2000, horizon: int = 512, family_size: int = 6):
        self.stages = stages
        self.horizon = horizon
        self.family_size = family_size

    def fit(self, X=None, y=None):
        fam = interpreter_family(self.family_size, max(self.stages, 1))
        self.state_ = build_maximal(self.stages, self.horizon, fam)
        self.approx_ = self.state_.window()
        return self

    def transform(self, X=None):
        check_fitted(self, "approx_")
        return self.approx_


class FamilyCohesive(BaseEstimator):
    def __init__(self, family=None, stage: int = 2000, horizon: int = 2048,
                 min_keep: int = DEFAULT_MIN_KEEP):
        self.family = family
        self.stage = stage
        self.horizon = horizon
        self.min_keep = min_keep

    def fit(self, X=None, y=None):
        fam = default_family() if self.family is None else list(self.family)
        self.approx_ = family_cohesive(fam, self.stage, self.horizon, self.min_keep)
        return self

    def transform(self, X=None):
        check_fitted(self, "approx_")
        return self.approx_


# -- reserved computable subset ----------------------------------------------

@dataclass(frozen=True)
class ReservedSet:
    """Numbers above ``cutoff`` with parity opposite to the window's tail."""

    parity: int
    cutoff: int

    def __call__(self, x: int) -> bool:
        return x > self.cutoff and x % 2 == self.parity

    def least_at_least(self, x: int) -> int:
        x = max(x, self.cutoff + 1)
        return x if x % 2 == self.parity else x + 1


def reserved_computable_subset(c: CohesiveApprox, min_tail: int = 4) -> ReservedSet:
    els = c.elements
    if len(els) < 2 * min_tail:
        raise Undetermined(f"window of {len(els)} elements is too short")
    cut = len(els) - 1
    while cut > 0 and els[cut - 1] % 2 == els[-1] % 2:
        cut -= 1
    if cut > len(els) // 2:
        raise Undetermined("no parity tail covers half the window")
    return ReservedSet(1 - els[-1] % 2, els[cut])


# -- totalization --------------------------------------------------------

class Totalized(ClockedFunction):
    """Race ``f(n)`` against the enumeration of ``n`` into the complement."""

    def __init__(self, f: ClockedFunction, complement: CeSetEnumerator, default: int, cutoff: int):
        super().__init__(f"total({f.name})")
        self.f, self.complement, self.default, self.cutoff = f, complement, default, cutoff

    def _run(self, n, budget):
        if n <= self.cutoff:
            return Halted(self.default, 1)
        t = self.complement.entry_stage(n)
        r = self.f.run(n, budget if t is None else min(budget, t))
        if r is not None:
            return r
        if t is not None and t <= budget:
            return Halted(self.default, max(t, 1))
        return None


def totalize(f: ClockedFunction, c: CohesiveApprox, default: int, cutoff: int) -> ClockedFunction:
    return Totalized(f, c.complement, default, cutoff)
