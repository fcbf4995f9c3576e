"""Replacing each point of a colored copy of omega by a finite block.

The block sizes depend on the color and, for the two predicate-driven variants,
on a clocked search ``(for all a <= x)(exists b) R(k, a, b)``. Membership of a
block element is then c.e. rather than decidable, so those orders are pulled
back along an enumeration of their domain.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Callable, Sequence

from .clocked import PENDING, pair, unpair
from .constructions import collapse_coloring
from .errors import PreconditionFailed
from .orders import DEFAULT_BUDGET, ComputableOrder
from .staged import StagedOrder

Predicate = Callable[[int, int, int], bool]


def r_true(k: int, a: int, b: int) -> bool:
    return True


def r_below(k: int, a: int, b: int) -> bool:
    """Holds exactly when ``b = 0`` and ``a < k``; the search over ``a`` fails at ``a = k``."""
    return b == 0 and a < k


def r_false(k: int, a: int, b: int) -> bool:
    return False


def forall_exists_cost(R: Predicate, k: int, x: int, budget: int) -> int | None:
    """Steps used by the search ``(for all a <= x)(exists b) R(k, a, b)``.

    Each tried ``b`` costs one step. Returns ``None`` if the budget runs out.
    """
    spent = 0
    for a in range(x + 1):
        b = 0
        while True:
            spent += 1
            if spent > budget:
                return None
            if R(k, a, b):
                break
            b += 1
    return spent


def verify_least(R: Predicate, k0: int, a_bound: int = 16, b_bound: int = 64) -> bool:
    """Bounded check that ``k0`` is the least ``k > 0`` passing the search.

    ``k0`` must pass for every ``a <= a_bound`` with some ``b <= b_bound`` and
    each smaller ``k`` must fail at some ``a <= a_bound``.
    """
    def passes(k):
        return all(any(R(k, a, b) for b in range(b_bound + 1)) for a in range(a_bound + 1))
    return k0 > 0 and passes(k0) and not any(passes(k) for k in range(1, k0))


class ShuffleOrder(ComputableOrder):
    """Lexicographic order on ``pair(x, i)`` over a staged base order.

    Subclasses define ``fiber_bounds(x)`` returning ``(sure, extra, k)``: indices
    below ``sure`` are in outright, indices in ``[sure, extra)`` join once the
    search for color ``k`` up to ``x`` halts.
    """

    searches = False

    def __init__(self, base: StagedOrder, coloring: Callable[[int], int], name: str):
        self.base, self.F, self.name = base, coloring, name

    def fiber_bounds(self, x: int) -> tuple[int, int, int]:
        raise NotImplementedError

    def _search_cost(self, x: int, k: int, budget: int):
        return 0

    def membership_time(self, z: int, cap: int = DEFAULT_BUDGET) -> int | None:
        """Least budget at which ``z`` is confirmed, or ``None`` within ``cap``."""
        x, i = unpair(z)
        t = self.base.added_at.get(x)
        if t is None or t > cap:
            return None
        sure, extra, k = self.fiber_bounds(x)
        if i < sure:
            return t
        if i < extra:
            cost = self._search_cost(x, k, cap)
            return None if cost is None else max(t, cost)
        return None

    def contains(self, z, budget=DEFAULT_BUDGET):
        x, i = unpair(z)
        c = self.base.contains(x, budget)
        if c is not True:
            return c
        sure, extra, k = self.fiber_bounds(x)
        if i < sure:
            return True
        if i >= extra:
            return False
        return True if self._search_cost(x, k, budget) is not None else PENDING

    def less(self, u, v, budget=DEFAULT_BUDGET):
        x, i = unpair(u)
        y, j = unpair(v)
        if x == y:
            return i < j
        return self.base.less(x, y, budget)

    def listed_by(self, x: int, t: int) -> int:
        """How many of ``x``'s block members the stage dovetail has listed by stage ``t``."""
        a = self.base.added_at.get(x)
        if a is None or a > t:
            return 0
        sure, extra, k = self.fiber_bounds(x)
        n = min(sure, t + 1)
        if extra > sure and self._search_cost(x, k, t) is not None:
            n = min(extra, t + 1)
        return n

    def fiber_size(self, x: int, budget: int = DEFAULT_BUDGET) -> int:
        sure, extra, k = self.fiber_bounds(x)
        if extra > sure and self._search_cost(x, k, budget) is not None:
            return extra
        return sure

    def census(self, a, b, horizon=None, budget=DEFAULT_BUDGET):
        """Exact count over the whole base when ``horizon`` is ``None``."""
        if horizon is not None:
            return super().census(a, b, horizon, budget)
        x, i = unpair(a)
        y, j = unpair(b)
        if x == y:
            return max(0, j - i - 1)
        if self.base.less(x, y, budget) is not True:
            return 0
        inner = sum(self.fiber_size(w, budget) for w in self.base.between(x, y))
        return self.fiber_size(x, budget) - i - 1 + inner + j

    def key(self, z: int):
        x, i = unpair(z)
        return (self.base.labels[x], i)

    def fiber(self, x: int, budget: int = DEFAULT_BUDGET) -> list[int]:
        sure, extra, _ = self.fiber_bounds(x)
        return [pair(x, i) for i in range(extra) if self.contains(pair(x, i), budget) is True]

    def decided_elements(self, horizon, budget=DEFAULT_BUDGET):
        out = []
        for x in self.base.decided_elements(None, budget):
            out.extend(z for z in self.fiber(x, budget) if z <= horizon)
        return sorted(out)


class ShuffleFinite(ShuffleOrder):
    def __init__(self, base, coloring, ks: Sequence[int]):
        if not ks or any(k < 1 for k in ks):
            raise PreconditionFailed("block sizes must be positive")
        self.ks = tuple(ks)
        super().__init__(base, collapse_coloring(coloring, len(ks) - 1),
                         f"shuffle_finite{self.ks}")

    def fiber_bounds(self, x):
        n = self.ks[self.F(x)]
        return n, n, 0


class ShuffleAll(ShuffleOrder):
    def __init__(self, base, coloring):
        super().__init__(base, coloring, "shuffle_all")

    def fiber_bounds(self, x):
        c = self.F(x)
        n = x + 1 if c == 0 else c
        return n, n, c


class ShufflePi2(ShuffleOrder):
    searches = True

    def __init__(self, base, coloring, R: Predicate, k0: int, a_bound: int = 16, b_bound: int = 64):
        if not verify_least(R, k0, a_bound, b_bound):
            raise PreconditionFailed(f"{k0} is not the least passing color up to a={a_bound}, b={b_bound}")
        self.R, self.k0 = R, k0
        super().__init__(base, coloring, f"shuffle_pi2(k0={k0})")

    def fiber_bounds(self, x):
        c = self.F(x)
        if c < self.k0:
            return x + 1, x + 1, c
        return self.k0, max(self.k0, c), c

    def _search_cost(self, x, k, budget):
        return forall_exists_cost(self.R, k, x, budget)


class ShuffleSigma2(ShuffleOrder):
    searches = True

    def __init__(self, base, coloring, R: Predicate):
        self.R = R
        super().__init__(base, coloring, "shuffle_sigma2")

    def fiber_bounds(self, x):
        c = self.F(x)
        if c == 0:
            return x + 1, x + 1, c
        return c, max(c, x + 1), c

    def _search_cost(self, x, k, budget):
        return forall_exists_cost(self.R, k, x, budget)


def _coloring(L: StagedOrder) -> Callable[[int], int]:
    return lambda x: L.color.get(x, 0)


def shuffle_finite(L: StagedOrder, ks: Sequence[int]) -> ShuffleFinite:
    return ShuffleFinite(L, _coloring(L), ks)


def shuffle_all(L: StagedOrder) -> ShuffleAll:
    return ShuffleAll(L, _coloring(L))


def shuffle_pi2(L: StagedOrder, R: Predicate, k0: int) -> ShufflePi2:
    return ShufflePi2(L, _coloring(L), R, k0)


def shuffle_sigma2(L: StagedOrder, R: Predicate) -> ShuffleSigma2:
    return ShuffleSigma2(L, _coloring(L), R)


def brute_fiber_size(kind: str, x: int, color: int, R: Predicate = r_true, k0: int = 1,
                     ks: Sequence[int] = (1,), b_bound: int = 64) -> int:
    """Block size from the case analysis, with the search bounded by ``b_bound``."""
    def holds(k):
        return all(any(R(k, a, b) for b in range(b_bound + 1)) for a in range(x + 1))
    if kind == "finite":
        return ks[min(color, len(ks) - 1)]
    if kind == "all":
        return x + 1 if color == 0 else color
    if kind == "pi2":
        if color < k0:
            return x + 1
        return color if color > k0 and holds(color) else k0
    if kind == "sigma2":
        if color == 0:
            return x + 1
        return x + 1 if x + 1 > color and holds(color) else color
    raise ValueError(kind)


# -- pulling back along an enumeration of the domain ------------------------

class PulledBack(ComputableOrder):
    """Order on ``0..len-1``: ``k`` precedes ``l`` iff ``f(k)`` precedes ``f(l)``.

    ``f`` lists the domain of the source in order of confirmation stage, ties by
    code, over codes and stages up to ``horizon``.
    """

    def __init__(self, source: ComputableOrder, horizon: int):
        self.source, self.horizon = source, horizon
        self.name = f"pullback({source.name})"
        timed = []
        for z in range(horizon + 1):
            t = _membership_time(source, z, horizon)
            if t is not None:
                timed.append((max(t, z), z))
        timed.sort()
        self.f = [z for _, z in timed]
        self.inverse = {z: k for k, z in enumerate(self.f)}
        key = getattr(source, "key", None)
        self._keys = sorted(key(z) for z in self.f) if key else None

    def __len__(self) -> int:
        return len(self.f)

    def contains(self, k, budget=DEFAULT_BUDGET):
        return 0 <= k < len(self.f)

    def less(self, k, l, budget=DEFAULT_BUDGET):
        if k >= len(self.f) or l >= len(self.f):
            return PENDING
        return self.source.less(self.f[k], self.f[l], budget)

    def decided_elements(self, horizon, budget=DEFAULT_BUDGET):
        return list(range(min(horizon + 1, len(self.f))))

    def predecessors(self, k, horizon=None, budget=DEFAULT_BUDGET):
        if horizon is None and self._keys is not None:
            return bisect_left(self._keys, self.source.key(self.f[k]))
        return super().predecessors(k, len(self.f) - 1 if horizon is None else horizon, budget)


class ShufflePullBack(ComputableOrder):
    """Pull-back of a block order along the stage dovetail.

    At stage ``t`` the dovetail lists every ``pair(x, i)`` with ``x`` already in
    the base order, ``i <= t`` and membership confirmed within ``t`` steps, new
    codes in increasing order. Stages run up to ``stages``. The listing is
    materialized lazily; ranks come from per-block counts.
    """

    def __init__(self, source: ShuffleOrder, stages: int):
        self.source, self.stages = source, stages
        self.name = f"pullback({source.name})"
        self.f: list[int] = []
        self.inverse: dict[int, int] = {}
        self._stage = -1
        self._counts: dict[int, int] = {}

    def _advance(self) -> bool:
        if self._stage >= self.stages:
            return False
        t = self._stage = self._stage + 1
        new = []
        for x, a in self.source.base.added_at.items():
            if a > t:
                continue
            have = self._counts.get(x, 0)
            now = self.source.listed_by(x, t)
            new.extend(pair(x, i) for i in range(have, now))
            self._counts[x] = now
        for z in sorted(new):
            self.inverse[z] = len(self.f)
            self.f.append(z)
        return True

    def element(self, k: int) -> int | None:
        while len(self.f) <= k:
            if not self._advance():
                return None
        return self.f[k]

    def index_of(self, z: int) -> int | None:
        while z not in self.inverse:
            if not self._advance():
                return None
        return self.inverse[z]

    def contains(self, k, budget=DEFAULT_BUDGET):
        return True if self.element(k) is not None else PENDING

    def less(self, k, l, budget=DEFAULT_BUDGET):
        a, b = self.element(k), self.element(l)
        if a is None or b is None:
            return PENDING
        return self.source.less(a, b, budget)

    def _rank(self, z: int) -> int:
        x, i = unpair(z)
        base = self.source.base
        below = base.in_order()[:base.position(x)]
        return i + sum(self.source.listed_by(y, self.stages) for y in below)

    def predecessors(self, k, horizon=None, budget=DEFAULT_BUDGET):
        """Listed elements below ``k`` once every stage has run (``horizon`` is ignored)."""
        return self._rank(self.element(k))

    def census(self, a, b, horizon=None, budget=DEFAULT_BUDGET):
        if self.less(a, b) is not True:
            return 0
        return self._rank(self.element(b)) - self._rank(self.element(a)) - 1

    def decided_elements(self, horizon, budget=DEFAULT_BUDGET):
        self.element(horizon)
        return list(range(min(horizon + 1, len(self.f))))


def _membership_time(P: ComputableOrder, z: int, cap: int) -> int | None:
    if hasattr(P, "membership_time"):
        return P.membership_time(z, cap)
    if P.contains(z, cap) is not True:
        return None
    lo, hi = 0, cap
    while lo < hi:
        mid = (lo + hi) // 2
        if P.contains(z, mid) is True:
            hi = mid
        else:
            lo = mid + 1
    return lo


def pull_back(P: ComputableOrder, horizon: int):
    """Block orders use the stage dovetail with ``horizon`` stages; others list codes."""
    if isinstance(P, ShuffleOrder):
        return ShufflePullBack(P, horizon)
    return PulledBack(P, horizon)
