"""Computable linear orders on codes, the standard presentations, and combinators."""

from __future__ import annotations

from dataclasses import dataclass
import math
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable

from .clocked import PENDING, pair, unpair

DEFAULT_BUDGET = 100_000


class ComputableOrder:
    """A clocked domain predicate plus a clocked strict comparator.

    ``contains`` and ``less`` return ``True``, ``False`` or ``PENDING``.
    ``kind`` names the arithmetic a base supports ("nat", "nzq") for witness
    constructions that need it.
    """

    name = "L"
    kind: str | None = None

    def contains(self, x: int, budget: int = DEFAULT_BUDGET):
        return True

    def less(self, a: int, b: int, budget: int = DEFAULT_BUDGET):
        raise NotImplementedError

    # finite views -------------------------------------------------------
    def decided_elements(self, horizon: int, budget: int = DEFAULT_BUDGET) -> list[int]:
        return [x for x in range(horizon + 1) if self.contains(x, budget) is True]

    def index(self, horizon: int, budget: int = DEFAULT_BUDGET) -> "OrderIndex":
        cache = self.__dict__.setdefault("_index_cache", {})
        key = (horizon, budget)
        if key not in cache:
            cache[key] = OrderIndex(self, self.decided_elements(horizon, budget), budget)
        return cache[key]

    def census(self, a: int, b: int, horizon: int, budget: int = DEFAULT_BUDGET) -> int:
        """Decided elements of ``[0, horizon]`` strictly between ``a`` and ``b``."""
        return self.index(horizon, budget).count_between(a, b)

    def predecessors(self, z: int, horizon: int, budget: int = DEFAULT_BUDGET) -> int:
        return self.index(horizon, budget).count_below(z)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class OrderIndex:
    """Sorted snapshot of finitely many decided elements, for fast rank queries."""

    def __init__(self, order: ComputableOrder, elements: Iterable[int], budget: int,
                 presorted: bool = False):
        self.order, self.budget = order, budget

        def cmp(a, b):
            if a == b:
                return 0
            r = order.less(a, b, budget)
            if r is PENDING:
                raise ValueError(f"comparison of {a} and {b} undecided at budget {budget}")
            return -1 if r else 1

        self.elements = list(elements) if presorted else sorted(elements, key=cmp_to_key(cmp))
        self.rank = {x: i for i, x in enumerate(self.elements)}
        self._sparse: list[list[int]] | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def count_below(self, x: int) -> int:
        if x in self.rank:
            return self.rank[x]
        lo, hi = 0, len(self.elements)
        while lo < hi:
            mid = (lo + hi) // 2
            r = self.order.less(self.elements[mid], x, self.budget)
            if r is PENDING:
                raise ValueError(f"comparison with {x} undecided")
            if r:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def count_at_most(self, x: int) -> int:
        return self.count_below(x) + (1 if x in self.rank else 0)

    def count_between(self, a: int, b: int) -> int:
        return max(0, self.count_below(b) - self.count_at_most(a))

    def successor_of(self, a: int):
        i = self.count_at_most(a)
        return self.elements[i] if i < len(self.elements) else None

    def least_code_between(self, a: int, b: int):
        """Numerically least element strictly between ``a`` and ``b``, or ``None``."""
        lo, hi = self.count_at_most(a), self.count_below(b)
        if lo >= hi:
            return None
        if self._sparse is None:
            table = [list(self.elements)]
            span = 1
            while 2 * span <= len(self.elements):
                prev = table[-1]
                table.append([min(prev[i], prev[i + span]) for i in range(len(prev) - span)])
                span *= 2
            self._sparse = table
        level = (hi - lo).bit_length() - 1
        row = self._sparse[level]
        return min(row[lo], row[hi - (1 << level)])


# -- standard presentations ---------------------------------------------------

class Naturals(ComputableOrder):
    name, kind = "N", "nat"

    def contains(self, x, budget=DEFAULT_BUDGET):
        return x >= 0

    def less(self, a, b, budget=DEFAULT_BUDGET):
        return a < b

    def census(self, a, b, horizon=None, budget=DEFAULT_BUDGET):
        top = b - 1 if horizon is None else min(b - 1, horizon)
        return max(0, top - a)

    def predecessors(self, z, horizon=None, budget=DEFAULT_BUDGET):
        return z if horizon is None else min(z, horizon + 1)


class Reverse(ComputableOrder):
    def __init__(self, base: ComputableOrder):
        self.base = base
        self.name = f"rev({base.name})"

    def contains(self, x, budget=DEFAULT_BUDGET):
        return self.base.contains(x, budget)

    def less(self, a, b, budget=DEFAULT_BUDGET):
        return self.base.less(b, a, budget)

    def decided_elements(self, horizon, budget=DEFAULT_BUDGET):
        return self.base.decided_elements(horizon, budget)

    def census(self, a, b, horizon=None, budget=DEFAULT_BUDGET):
        return self.base.census(b, a, horizon, budget)

    def predecessors(self, z, horizon, budget=DEFAULT_BUDGET):
        total = len(self.base.decided_elements(horizon, budget))
        inside = 1 if z <= horizon and self.base.contains(z, budget) is True else 0
        return total - self.base.predecessors(z, horizon, budget) - inside


def int_decode(c: int) -> int:
    return c // 2 if c % 2 == 0 else -(c + 1) // 2


def int_encode(z: int) -> int:
    return 2 * z if z >= 0 else -2 * z - 1


class Integers(ComputableOrder):
    """Even codes are the nonnegative integers, odd codes the negative ones."""

    name = "Z"

    def less(self, a, b, budget=DEFAULT_BUDGET):
        return int_decode(a) < int_decode(b)

    def census(self, a, b, horizon=None, budget=DEFAULT_BUDGET):
        lo, hi = int_decode(a) + 1, int_decode(b) - 1
        if horizon is not None:
            lo, hi = max(lo, -((horizon + 1) // 2)), min(hi, horizon // 2)
        return max(0, hi - lo + 1)


def rat_decode(c: int) -> Fraction | None:
    zc, d = unpair(c)
    num, den = int_decode(zc), d + 1
    if gcd(abs(num), den) != 1:
        return None
    return Fraction(num, den)


def rat_encode(q) -> int:
    q = Fraction(q)
    return pair(int_encode(q.numerator), q.denominator - 1)


class Rationals(ComputableOrder):
    """Code ``pair(z, d)`` names ``z/(d+1)`` (``z`` in the integer coding), reduced fractions only."""

    name, kind = "Q", "rat"

    def contains(self, x, budget=DEFAULT_BUDGET):
        return rat_decode(x) is not None

    def census(self, a, b, horizon=None, budget=DEFAULT_BUDGET):
        """With no horizon, any nonempty interval holds infinitely many elements."""
        if horizon is None:
            return float("inf") if self.less(a, b) else 0
        return super().census(a, b, horizon, budget)

    def less(self, a, b, budget=DEFAULT_BUDGET):
        za, da = unpair(a)
        zb, db = unpair(b)
        return int_decode(za) * (db + 1) < int_decode(zb) * (da + 1)


def simplest_between(a: int, b: int) -> int | None:
    """Code of the rational with least denominator strictly between two codes (least numerator on ties)."""
    qa, qb = rat_decode(a), rat_decode(b)
    if qa is None or qb is None or qa >= qb:
        return None
    d = _least_denominator(qa, qb)
    return rat_encode(Fraction(math.floor(qa * d) + 1, d))


def _least_denominator(lo: Fraction, hi) -> int:
    """Denominator of the simplest rational in the open interval ``(lo, hi)``; ``hi=None`` is unbounded."""
    return _simplest(lo, hi).denominator


def _simplest(lo: Fraction, hi) -> Fraction:
    fl = math.floor(lo)
    if hi is None or fl + 1 < hi:
        return Fraction(fl + 1)
    return fl + 1 / _simplest(1 / (hi - fl), None if lo == fl else 1 / (lo - fl))


def standard_presentations() -> dict[str, ComputableOrder]:
    n = Naturals()
    return {"N": n, "N*": Reverse(n), "Z": Integers(), "Q": Rationals()}


# -- combinators ------------------------------------------------------------

class Sum(ComputableOrder):
    """Code ``pair(i, x)`` for ``x`` in the ``i``-th summand."""

    def __init__(self, first: ComputableOrder, second: ComputableOrder):
        self.parts = (first, second)
        self.name = f"({first.name}+{second.name})"

    def contains(self, z, budget=DEFAULT_BUDGET):
        i, x = unpair(z)
        return i < 2 and self.parts[i].contains(x, budget)

    def less(self, a, b, budget=DEFAULT_BUDGET):
        i, x = unpair(a)
        j, y = unpair(b)
        if i != j:
            return i < j
        return self.parts[i].less(x, y, budget)


class Product(ComputableOrder):
    """``first * second``: code ``pair(x, a)`` with ``x`` from ``second`` and ``a`` from ``first``,
    ordered by ``x`` first, then by ``a``."""

    def __init__(self, first: ComputableOrder, second: ComputableOrder):
        self.first, self.second = first, second
        self.name = f"({first.name}.{second.name})"

    def contains(self, z, budget=DEFAULT_BUDGET):
        x, a = unpair(z)
        c1 = self.second.contains(x, budget)
        if c1 is not True:
            return c1
        return self.first.contains(a, budget)

    def less(self, u, v, budget=DEFAULT_BUDGET):
        x, a = unpair(u)
        y, b = unpair(v)
        if x != y:
            return self.second.less(x, y, budget)
        return self.first.less(a, b, budget)


class Finite(ComputableOrder):
    def __init__(self, k: int):
        self.k = k
        self.name = str(k)

    def contains(self, x, budget=DEFAULT_BUDGET):
        return 0 <= x < self.k

    def less(self, a, b, budget=DEFAULT_BUDGET):
        return a < b


def sum_order(first, second) -> Sum:
    return Sum(first, second)


def product(first, second) -> Product:
    return Product(first, second)


def reverse(order) -> Reverse:
    return Reverse(order)


def finite_k(k: int) -> Finite:
    return Finite(k)


# -- probes -------------------------------------------------------------

@dataclass(frozen=True)
class Found:
    element: int


@dataclass(frozen=True)
class NotFoundWithin:
    horizon: int
    budget: int


def successor_probe(order: ComputableOrder, a: int, horizon: int,
                    budget: int = DEFAULT_BUDGET, confirm: int | None = None):
    """Candidate successor of ``a`` among decided elements of ``[0, horizon]``.

    The candidate is accepted only if nothing lies between it and ``a`` in the
    larger range ``[0, confirm]`` (default ``4 * horizon + 4``).
    """
    b = order.index(horizon, budget).successor_of(a)
    if b is None:
        return NotFoundWithin(horizon, budget)
    confirm = 4 * horizon + 4 if confirm is None else confirm
    if order.census(a, b, confirm, budget) > 0:
        return NotFoundWithin(horizon, budget)
    return Found(b)


def predecessor_census(order: ComputableOrder, z: int, horizon: int,
                       budget: int = DEFAULT_BUDGET) -> int:
    return order.predecessors(z, horizon, budget)


def interval_census(order: ComputableOrder, a: int, b: int, horizon: int,
                    budget: int = DEFAULT_BUDGET) -> int:
    return order.census(a, b, horizon, budget)


# -- order-type labels -------------------------------------------------------

@dataclass(frozen=True)
class OrderTypeTag:
    """Symbolic label for an expected order-type. Labels carry no proof."""

    symbol: str

    def __str__(self) -> str:
        return self.symbol

    @classmethod
    def finite(cls, k: int) -> "OrderTypeTag":
        return cls(str(k))

    @classmethod
    def shuffle(cls, members: Iterable[str]) -> "OrderTypeTag":
        return cls("shuffle{" + ",".join(members) + "}")


OMEGA = OrderTypeTag("omega")
OMEGA_STAR = OrderTypeTag("omega*")
ZETA = OrderTypeTag("zeta")
ETA = OrderTypeTag("eta")
OMEGA_PLUS_ZETA_ETA = OrderTypeTag("omega+zeta.eta")
ZETA_ETA = OrderTypeTag("zeta.eta")
OMEGA_PLUS_ETA = OrderTypeTag("omega+eta")
ALPHA = OrderTypeTag("omega+zeta.eta+omega*")
