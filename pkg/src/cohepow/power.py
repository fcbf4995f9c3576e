"""Elements of the cohesive power and window-scale verdicts about them.

An element is a clocked representative evaluated on the window of a
:class:`CohesiveApprox`. "For almost every window element" means "for every
element from some cut ``m`` on", with ``m`` at most half the window length.
Growth claims use dyadic blocks: the window is split into its last half, the
quarter before that, the eighth before that and so on, and a sequence grows
when its minima over the last three or more blocks strictly increase.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .clocked import (
    PENDING,
    ClockedFunction,
    Combined,
    RuleFunction,
    constant,
    pair,
    unpair,
)
from .cohesive import CohesiveApprox
from .errors import (
    IncompatibleContexts,
    LadderExhausted,
    PreconditionFailed,
    Undetermined,
    UnsupportedBase,
    WitnessNotFound,
)
from .orders import DEFAULT_BUDGET, ComputableOrder, Product, Reverse, Sum, simplest_between

MIN_BLOCKS = 3


# -- elements ----------------------------------------------------------------

class PowerElement:
    """A representative together with the base order and window it lives over."""

    def __init__(self, rep: ClockedFunction, base: ComputableOrder, cohesive: CohesiveApprox,
                 label: str | None = None, budget: int = DEFAULT_BUDGET,
                 horizon: int | None = None, check: bool = True):
        self.rep, self.base, self.cohesive = rep, base, cohesive
        self.label = label or rep.name
        self.budget, self.horizon = budget, horizon
        self._values: tuple | None = None
        if check:
            undefined = [i for i, v in enumerate(self.values()) if v is PENDING]
            if undefined and undefined[-1] >= len(self.window) // 2:
                raise PreconditionFailed(
                    f"{self.label} is undefined at window positions {undefined[-5:]}")

    @property
    def window(self) -> tuple[int, ...]:
        return self.cohesive.elements

    def values(self) -> tuple:
        if self._values is None:
            self._values = tuple(self.rep.evaluate(n, self.budget) for n in self.window)
        return self._values

    def derive(self, rep: ClockedFunction, label: str, base: ComputableOrder | None = None,
               check: bool = True) -> "PowerElement":
        return PowerElement(rep, base or self.base, self.cohesive, label, self.budget,
                            self.horizon, check)

    def __repr__(self) -> str:
        return f"<PowerElement {self.label} over {self.base.name}>"


def canonical_embed(a: int, base: ComputableOrder, cohesive: CohesiveApprox,
                    budget: int = DEFAULT_BUDGET, horizon: int | None = None) -> PowerElement:
    if base.contains(a, budget) is not True:
        raise PreconditionFailed(f"{a} is not in {base.name}")
    return PowerElement(constant(a), base, cohesive, f"[{a}]", budget, horizon)


def _shared(x: PowerElement, y: PowerElement) -> None:
    if x.base is not y.base:
        raise IncompatibleContexts(f"{x.label} and {y.label} live over different orders")
    if x.cohesive.elements != y.cohesive.elements:
        raise IncompatibleContexts(f"{x.label} and {y.label} use different windows")


# -- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """``result`` is ``None`` when undecided.

    ``cut`` is the least window position from which every label equals
    ``result``; ``dissenters`` lists positions whose label differs.
    """

    operation: str
    result: str | None
    cut: int | None
    agreeing: int
    dissenters: tuple[int, ...]
    budget: int
    inputs: tuple[str, ...] = ()
    counts: dict = field(default_factory=dict)
    provenance: str = ""

    @property
    def decided(self) -> bool:
        return self.result is not None

    def to_dict(self) -> dict:
        return {"operation": self.operation, "inputs": list(self.inputs),
                "outcome": "Decided" if self.decided else "Undecided", "result": self.result,
                "cut": self.cut, "counts": {"agreeing": self.agreeing,
                                            "dissenting": len(self.dissenters), **self.counts},
                "dissenters": list(self.dissenters[:20]), "budget": self.budget,
                "cohesive_provenance": self.provenance}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def tail_verdict(labels: Sequence, operation: str, x: PowerElement, inputs: Sequence[str] = (),
                 counts: dict | None = None) -> Verdict:
    """Decide on the label the window ends with, if it holds from a cut in the first half."""
    res = labels[-1] if labels else None
    cut = len(labels)
    while cut > 0 and labels[cut - 1] == res:
        cut -= 1
    dissenters = tuple(i for i, l in enumerate(labels) if l != res)
    ok = res is not None and res is not PENDING and cut <= len(labels) // 2
    return Verdict(operation, res if ok else None, cut if ok else None,
                   len(labels) - len(dissenters), dissenters, x.budget, tuple(inputs),
                   counts or {}, x.cohesive.provenance)


def dyadic_blocks(length: int) -> list[tuple[int, int]]:
    """``[start, stop)`` blocks from left to right: ..., eighth, quarter, last half."""
    out, stop = [], length
    while stop > 0:
        start = stop // 2
        out.append((start, stop))
        stop = start
    return out[::-1]


def growing(seq: Sequence[int]) -> tuple[bool, list[int]]:
    """Block minima; growth means the last ``MIN_BLOCKS`` or more strictly increase."""
    mins = [min(seq[a:b]) for a, b in dyadic_blocks(len(seq))]
    run = 1
    while run < len(mins) and mins[-run - 1] < mins[-run]:
        run += 1
    return run >= MIN_BLOCKS, mins


def _cmp(base, a, b, budget) -> str | None:
    if a is PENDING or b is PENDING:
        return None
    if a == b:
        return "="
    r = base.less(a, b, budget)
    if r is PENDING:
        return None
    return "<" if r else ">"


def power_compare(x: PowerElement, y: PowerElement) -> Verdict:
    _shared(x, y)
    memo: dict = {}
    labels = []
    for ab in zip(x.values(), y.values()):
        if ab not in memo:
            memo[ab] = _cmp(x.base, ab[0], ab[1], x.budget)
        labels.append(memo[ab])
    return tail_verdict(labels, "power_compare", x, (x.label, y.label))


def _census(x: PowerElement, a, b) -> int | None:
    if a is PENDING or b is PENDING:
        return None
    return x.base.census(a, b, x.horizon, x.budget)


def _magnitude(x: PowerElement, v) -> int | None:
    if v is PENDING:
        return None
    if x.base.kind == "nat":
        return v
    return x.base.predecessors(v, x.horizon, x.budget)


# -- standard vs non-standard ----------------------------------------------

@dataclass(frozen=True)
class Standard:
    value: int
    cut: int


@dataclass(frozen=True)
class NonstandardEvidence:
    minima: tuple[int, ...]


def classify_standard(x: PowerElement):
    vals = x.values()
    v = tail_verdict(list(vals), "classify_standard", x)
    if v.decided:
        return Standard(v.result, v.cut)
    mags = [_magnitude(x, a) for a in vals]
    if None not in mags[len(mags) // 2:]:
        tail = [m if m is not None else -1 for m in mags]
        ok, mins = growing(tail)
        if ok:
            return NonstandardEvidence(tuple(mins))
    raise Undetermined(f"{x.label} is neither eventually constant nor growing on the window")


def initial_segment_audit(x: PowerElement, a: int) -> list[str]:
    """If ``x`` sits below the embedded ``a`` it must equal some embedded ``b`` below ``a``."""
    emb = canonical_embed(a, x.base, x.cohesive, x.budget, x.horizon)
    if power_compare(x, emb).result != "<":
        return []
    for b in x.base.index(a if x.horizon is None else x.horizon, x.budget).elements:
        if x.base.less(b, a, x.budget) is True:
            e = canonical_embed(b, x.base, x.cohesive, x.budget, x.horizon)
            if power_compare(x, e).result == "=":
                return []
    return [f"{x.label} lies below [{a}] without equalling a standard element"]


# -- successors and blocks --------------------------------------------------

def immediate_successor_test(x: PowerElement, y: PowerElement) -> Verdict:
    """Pointwise: ``y(n)`` is above ``x(n)`` with nothing in between up to the horizon."""
    _shared(x, y)
    labels = []
    for a, b in zip(x.values(), y.values()):
        c = _cmp(x.base, a, b, x.budget)
        if c is None:
            labels.append(None)
        else:
            labels.append("yes" if c == "<" and _census(x, a, b) == 0 else "no")
    yes = labels.count("yes")
    v = tail_verdict(labels, "immediate_successor_test", x, (x.label, y.label),
                     {"frequency_yes": yes, "frequency_no": labels.count("no")})
    tail = len(labels) - (v.cut if v.cut is not None else len(labels))
    return Verdict(**{**v.__dict__, "counts": {**v.counts, "strict_tail": tail}})


@dataclass(frozen=True)
class NotFound:
    failing: tuple[int, ...]


def _found_everywhere_late(x: PowerElement, found: Sequence) -> tuple[int, ...] | None:
    """Window elements where nothing was found, or ``None`` if failures reach the second half."""
    bad = tuple(x.window[i] for i, v in enumerate(found) if v is None)
    last = max((i for i, v in enumerate(found) if v is None), default=-1)
    return None if last >= len(found) // 2 else bad


def successor_witness_search(x: PowerElement, y: PowerElement):
    """First element found strictly between ``x(n)`` and ``y(n)``.

    Over the rationals the search runs through denominators; elsewhere it
    returns the least code up to the horizon.
    """
    if power_compare(x, y).result != "<":
        raise PreconditionFailed(f"{x.label} is not below {y.label}")
    base, budget = x.base, x.budget
    if base.kind == "nat":
        def between(a, b):
            return a + 1 if a + 1 < b else None
    elif base.kind == "rat":
        between = simplest_between
    else:
        if x.horizon is None and not hasattr(base, "in_order"):
            raise PreconditionFailed("a horizon is needed to search this order")
        idx = base.index(x.horizon, budget)

        def between(a, b):
            return idx.least_code_between(a, b)

    found = [None if a is PENDING or b is PENDING else between(a, b)
             for a, b in zip(x.values(), y.values())]
    if _found_everywhere_late(x, found) is None:
        return NotFound(tuple(n for n, v in zip(x.window, found) if v is None))
    table = {n: v for n, v in zip(x.window, found) if v is not None}
    rep = RuleFunction(table.get, f"between({x.label},{y.label})")
    return x.derive(rep, rep.name)


def far_apart_test(x: PowerElement, y: PowerElement) -> Verdict:
    """``yes`` when the interval census grows; ``no`` when it never exceeds its early maximum.

    The census counts elements strictly between ``x(n)`` and ``y(n)`` when
    ``x(n)`` is below ``y(n)`` and is 0 otherwise. ``no`` means the maximum over
    the second half of the window is at most the maximum over the first half.
    """
    _shared(x, y)
    cens = []
    for a, b in zip(x.values(), y.values()):
        c = _cmp(x.base, a, b, x.budget)
        cens.append(None if c is None else (_census(x, a, b) if c == "<" else 0))
    half = len(cens) // 2
    counts = {"census_first": cens[:3], "census_last": cens[-3:]}
    if any(c is None for c in cens[half:]) or not cens:
        return Verdict("far_apart_test", None, None, 0, (), x.budget, (x.label, y.label),
                       counts, x.cohesive.provenance)
    seq = [c if c is not None else -1 for c in cens]
    ok, mins = growing(seq)
    counts["ramp"] = mins
    if ok:
        res, cut = "yes", dyadic_blocks(len(seq))[-MIN_BLOCKS][0]
    elif max(seq[half:]) <= max(seq[:half] or [0]):
        res, cut = "no", 0
    else:
        res, cut = None, None
    return Verdict("far_apart_test", res, cut, len(seq) - cut if res else 0, (), x.budget,
                   (x.label, y.label), counts, x.cohesive.provenance)


# -- witnesses from the proofs -----------------------------------------------

def successor_witness(x: PowerElement) -> PowerElement:
    if x.base.kind != "nat":
        raise UnsupportedBase("successor by +1 needs the standard naturals")
    return x.derive(x.rep.map(lambda v: v + 1, f"{x.label}+1"), f"{x.label}+1")


def predecessor_witness(x: PowerElement) -> PowerElement:
    if x.base.kind != "nat":
        raise UnsupportedBase("truncated subtraction needs the standard naturals")
    return x.derive(x.rep.map(lambda v: max(v - 1, 0), f"{x.label}-1"), f"{x.label}-1")


class Ladder:
    """``x_0`` is the least code in the order; ``x_{i+1}`` the least code above ``x_i``."""

    def __init__(self, base: ComputableOrder, horizon: int | None, budget: int):
        self.base = base
        if base.kind == "nat":
            self.steps = None
            return
        idx = base.index(horizon, budget)
        suffix = list(idx.elements)
        for r in range(len(suffix) - 2, -1, -1):
            suffix[r] = min(suffix[r], suffix[r + 1])
        steps = [suffix[0]] if suffix else []
        while steps and idx.rank[steps[-1]] + 1 < len(suffix):
            steps.append(suffix[idx.rank[steps[-1]] + 1])
        self.steps, self.index = steps, idx
        self._pos = {x: i for i, x in enumerate(steps)}

    def __getitem__(self, i: int) -> int:
        if self.steps is None:
            return i
        if i >= len(self.steps):
            raise LadderExhausted(f"ladder has {len(self.steps)} rungs, needed {i + 1}")
        return self.steps[i]

    def rung_below(self, v: int) -> int:
        """Greatest ``j`` with ``x_j`` at or below ``v``."""
        if self.steps is None:
            return v
        r = self.index.count_at_most(v)
        lo, hi = 0, len(self.steps)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.index.rank[self.steps[mid]] < r:
                lo = mid + 1
            else:
                hi = mid
        return lo - 1


def flank_witnesses(x: PowerElement) -> tuple[PowerElement, PowerElement]:
    """Elements far below and far above a non-standard ``x``, built from the ladder."""
    if not isinstance(classify_standard_safe(x), NonstandardEvidence):
        raise PreconditionFailed(f"{x.label} is not non-standard on the window")
    ladder = Ladder(x.base, x.horizon, x.budget)

    def lower(v):
        j = ladder.rung_below(v)
        return ladder[j // 2]

    def upper(v):
        return ladder[2 * ladder.rung_below(v)]

    lo = x.derive(x.rep.map(lower, f"lower({x.label})"), f"lower({x.label})")
    hi = x.derive(x.rep.map(upper, f"upper({x.label})"), f"upper({x.label})")
    return lo, hi


def classify_standard_safe(x: PowerElement):
    try:
        return classify_standard(x)
    except Undetermined:
        return None


def midpoint_witness(x: PowerElement, y: PowerElement) -> PowerElement:
    if far_apart_test(x, y).result != "yes":
        raise PreconditionFailed(f"{x.label} and {y.label} are not far apart")
    kind = x.base.kind
    if kind == "nat":
        def mid(a, b):
            return (a + b) // 2
    elif kind == "nzq":
        def mid(a, b):
            m = (a + b) // 2
            return m + 1 if m % 2 else m
    else:
        raise UnsupportedBase(f"no midpoint arithmetic on {x.base.name}")
    rep = Combined([x.rep, y.rep], mid, f"mid({x.label},{y.label})")
    return x.derive(rep, rep.name)


# -- transports --------------------------------------------------------------

def transport_iso(f: Callable[[int], int], x: PowerElement, target: ComputableOrder,
                  name: str = "f") -> PowerElement:
    rep = x.rep.map(f, f"{name}.{x.label}")
    return PowerElement(rep, target, x.cohesive, rep.name, x.budget, x.horizon)


def z_to_sum_code(z: int) -> int:
    """Integers to ``N* + N``: negatives go to the reversed naturals, the rest to the naturals."""
    from .orders import int_decode
    v = int_decode(z)
    return pair(0, -v - 1) if v < 0 else pair(1, v)


def sum_transport(x: PowerElement) -> tuple[int, PowerElement]:
    if not isinstance(x.base, Sum):
        raise UnsupportedBase("sum_transport needs a sum order")
    tags = [PENDING if v is PENDING else unpair(v)[0] for v in x.values()]
    v = tail_verdict(tags, "sum_tag", x)
    if not v.decided:
        raise Undetermined(f"summand of {x.label} is not eventually constant")
    tag = v.result
    rep = x.rep.map(lambda c: unpair(c)[1], f"pi1.{x.label}")
    return tag, x.derive(rep, rep.name, x.base.parts[tag])


def product_transport(x: PowerElement) -> tuple[PowerElement, PowerElement]:
    """Split into the (outer, inner) coordinates: outer from the second factor."""
    if not isinstance(x.base, Product):
        raise UnsupportedBase("product_transport needs a product order")
    outer = x.rep.map(lambda c: unpair(c)[0], f"pi0.{x.label}")
    inner = x.rep.map(lambda c: unpair(c)[1], f"pi1.{x.label}")
    return (x.derive(outer, outer.name, x.base.second), x.derive(inner, inner.name, x.base.first))


def reverse_transport(x: PowerElement) -> PowerElement:
    """Same representative viewed over the reversed (or un-reversed) order."""
    base = x.base.base if isinstance(x.base, Reverse) else Reverse(x.base)
    return x.derive(x.rep, x.label, base)


_FLIP = {"<": ">", ">": "<", "=": "="}


def sum_compare(x: PowerElement, y: PowerElement) -> str | None:
    (i, a), (j, b) = sum_transport(x), sum_transport(y)
    if i != j:
        return "<" if i < j else ">"
    return power_compare(a, b).result


def product_compare(x: PowerElement, y: PowerElement) -> str | None:
    (xo, xi), (yo, yi) = product_transport(x), product_transport(y)
    outer = power_compare(xo, yo).result
    if outer != "=":
        return outer
    return power_compare(xi, yi).result


def reverse_compare(x: PowerElement, y: PowerElement) -> str | None:
    r = power_compare(reverse_transport(x), reverse_transport(y)).result
    return None if r is None else _FLIP[r]


def transport_audit(pairs: Sequence[tuple[PowerElement, PowerElement]],
                    via: Callable[[PowerElement, PowerElement], str | None]) -> list[str]:
    """Every decided verdict over the composite order must survive the decomposition."""
    bad = []
    for x, y in pairs:
        direct = power_compare(x, y).result
        if direct is not None and via(x, y) != direct:
            bad.append(f"{x.label} vs {y.label}: {direct} became {via(x, y)}")
    return bad


# -- colors ---------------------------------------------------------------

@dataclass(frozen=True)
class ColorClass:
    kind: str
    value: int | None = None
    minima: tuple[int, ...] = ()


SOLID, STRIPED = "solid", "striped"


def induced_color(F: Callable[[int], int], x: PowerElement) -> ColorClass:
    deltas = [PENDING if v is PENDING else F(v) for v in x.values()]
    v = tail_verdict(deltas, "induced_color", x)
    if v.decided:
        return ColorClass(SOLID, v.result)
    half = len(deltas) // 2
    if PENDING not in deltas[half:]:
        ok, mins = growing([d if d is not PENDING else -1 for d in deltas])
        if ok:
            return ColorClass(STRIPED, None, tuple(mins))
    raise Undetermined(f"color of {x.label} is neither solid nor striped on the window")


def color_density_witness(x: PowerElement, y: PowerElement, target: ColorClass | int,
                          F: Callable[[int], int] | None = None) -> PowerElement:
    """First element between ``x(n)`` and ``y(n)`` with the requested color.

    ``target`` is a color ``d`` or a striped class; for the latter the color
    sought is the code ``y(n)`` itself.
    """
    if power_compare(x, y).result != "<":
        raise PreconditionFailed(f"{x.label} is not below {y.label}")
    base = x.base
    F = F or (lambda k: base.color.get(k, 0))
    striped = isinstance(target, ColorClass) and target.kind == STRIPED
    if isinstance(target, ColorClass) and not striped:
        target = target.value

    def search(a, b):
        d = b if striped else target
        if hasattr(base, "colored_between"):
            hits = base.colored_between(a, b, d)
        else:
            idx = base.index(x.horizon, x.budget)
            hits = [k for k in idx.elements[idx.count_at_most(a):idx.count_below(b)] if F(k) == d]
        return min(hits) if hits else None

    found = [None if a is PENDING or b is PENDING else search(a, b)
             for a, b in zip(x.values(), y.values())]
    if _found_everywhere_late(x, found) is None:
        failing = tuple(n for n, v in zip(x.window, found) if v is None)
        raise WitnessNotFound(f"no element of the requested color for {len(failing)} window elements",
                              failing)
    table = {n: v for n, v in zip(x.window, found) if v is not None}
    name = f"color[{'striped' if striped else target}]({x.label},{y.label})"
    return x.derive(RuleFunction(table.get, name), name)


# -- blocks of a shuffle ------------------------------------------------------

class ProjectionFiber:
    """Elements of a shuffle power sharing the eventual first coordinate of ``chi``."""

    def __init__(self, chi: PowerElement):
        if not hasattr(chi.base, "fiber_bounds"):
            raise UnsupportedBase("projection fibers need a block order")
        self.chi, self.order = chi, chi.base
        self.first = chi.rep.map(lambda z: unpair(z)[0], f"pi0.{chi.label}")

    def member(self, psi: PowerElement) -> Verdict:
        labels = [None if a is PENDING or b is PENDING else unpair(a)[0] == unpair(b)[0]
                  for a, b in zip(self.chi.values(), psi.values())]
        return tail_verdict(labels, "fiber_member", self.chi, (self.chi.label, psi.label))

    def least(self) -> PowerElement:
        rep = self.first.map(lambda x: pair(x, 0), f"lambda({self.chi.label})")
        return self.chi.derive(rep, rep.name)

    def greatest(self) -> PowerElement:
        size = self.order.fiber_size
        budget = self.chi.budget
        rep = self.first.map(lambda x: pair(x, size(x, budget) - 1), f"rho({self.chi.label})")
        return self.chi.derive(rep, rep.name)

    def successor(self, phi: PowerElement) -> PowerElement:
        size, budget = self.order.fiber_size, self.chi.budget

        def step(z):
            x, i = unpair(z)
            return pair(x, i + 1) if i + 1 < size(x, budget) else None

        rep = phi.rep.map(step, f"succ({phi.label})")
        return phi.derive(rep, rep.name)

    def predecessor(self, phi: PowerElement) -> PowerElement:
        index = [None if z is PENDING else unpair(z)[1] for z in phi.values()]
        if tail_verdict(index, "index", phi).result == 0:
            raise PreconditionFailed(f"{phi.label} is the least element of its fiber")
        rep = phi.rep.map(lambda z: pair(unpair(z)[0], max(unpair(z)[1] - 1, 0)),
                          f"pred({phi.label})")
        return phi.derive(rep, rep.name)

    def midpoint(self, psi: PowerElement, phi: PowerElement) -> PowerElement:
        def mid(c, a, b):
            x = unpair(c)[0]
            (xa, ia), (xb, ib) = unpair(a), unpair(b)
            return pair(x, (ia + ib) // 2) if xa == xb == x else None

        rep = Combined([self.chi.rep, psi.rep, phi.rep], mid, f"mid({psi.label},{phi.label})")
        return psi.derive(rep, rep.name)


def projection_fiber(chi: PowerElement) -> ProjectionFiber:
    return ProjectionFiber(chi)


# -- quantifier-free formulas -------------------------------------------------

def qf_eval(formula, atom: Callable[[str, int, int], bool | None]) -> bool | None:
    """Evaluate a formula of nested tuples; ``None`` propagates as unknown."""
    tag = formula[0]
    if tag == "atom":
        return atom(*formula[1:])
    if tag == "not":
        v = qf_eval(formula[1], atom)
        return None if v is None else not v
    a, b = qf_eval(formula[1], atom), qf_eval(formula[2], atom)
    if a is None or b is None:
        return None
    return (a and b) if tag == "and" else (a or b)


def random_formula(rng: random.Random, params: int = 3, depth: int = 2):
    if depth == 0 or rng.random() < 0.3:
        return ("atom", rng.choice("<="), rng.randrange(params), rng.randrange(params))
    tag = rng.choice(["not", "and", "or"])
    if tag == "not":
        return ("not", random_formula(rng, params, depth - 1))
    return (tag, random_formula(rng, params, depth - 1), random_formula(rng, params, depth - 1))


def power_formula_verdict(formula, elems: Sequence[PowerElement]) -> bool | None:
    """Combine the decided atom verdicts."""
    def atom(op, i, j):
        r = power_compare(elems[i], elems[j]).result
        return None if r is None else r == op
    return qf_eval(formula, atom)


def window_formula_verdict(formula, elems: Sequence[PowerElement]) -> bool | None:
    """Evaluate pointwise at each window element, then take the tail verdict."""
    base, budget = elems[0].base, elems[0].budget
    cols = [e.values() for e in elems]
    labels = []
    for k in range(len(elems[0].window)):
        def atom(op, i, j):
            c = _cmp(base, cols[i][k], cols[j][k], budget)
            return None if c is None else c == op
        labels.append(qf_eval(formula, atom))
    return tail_verdict(labels, "qf_formula", elems[0]).result


def los_audit(elems: Sequence[PowerElement], instances: int = 100, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    bad = []
    for t in range(instances):
        f = random_formula(rng)
        ps = [rng.choice(elems) for _ in range(3)]
        a, b = power_formula_verdict(f, ps), window_formula_verdict(f, ps)
        if a is not None and a != b:
            bad.append(f"instance {t}: {f} power={a} window={b}")
    return bad
