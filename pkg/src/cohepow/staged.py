"""Growing finite linear orders with fixed comparisons.

Each element carries an exact rational label; inserting between two neighbours
picks labels strictly between theirs, so a comparison made at one stage is the
same at every later stage.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable

from sortedcontainers import SortedList

from .clocked import PENDING
from .orders import DEFAULT_BUDGET, ComputableOrder, OrderIndex


class StagedOrder(ComputableOrder):
    def __init__(self, name: str = "staged", colored: bool = False):
        self.name = name
        self.colored = colored
        self.labels: dict[int, Fraction] = {}
        self.added_at: dict[int, int] = {}
        self.seq: dict[int, int] = {}
        self.color: dict[int, int] = {}
        self.trace: list[dict] = []
        self.snapshots: dict[int, tuple[int, ...]] = {}
        self.stage = 0
        self._sorted = SortedList()
        self._at: dict[Fraction, int] = {}
        self._by_color: dict[int, SortedList] = {}
        self._top = Fraction(0)
        self._max = -1
        self._sub: dict[int, OrderIndex] = {}

    # mutation ---------------------------------------------------------
    def _place(self, x: int, label: Fraction, stage: int, color: int) -> None:
        if x in self.labels:
            raise ValueError(f"{x} is already in the order")
        self.labels[x] = label
        self.added_at[x] = stage
        self.seq[x] = len(self.seq)
        self._sorted.add(label)
        self._at[label] = x
        self._max = max(self._max, x)
        self._sub.clear()
        if self.colored:
            self.color[x] = color
            self._by_color.setdefault(color, SortedList()).add(label)

    def append(self, x: int, stage: int, color: int = 0) -> None:
        self._top += 1
        self._place(x, self._top, stage, color)

    def insert_after(self, anchor: int, xs: Iterable[int], stage: int,
                     colors: Iterable[int] | None = None) -> None:
        """Insert ``xs`` as a chain immediately after ``anchor``."""
        xs = list(xs)
        colors = list(colors) if colors is not None else [0] * len(xs)
        lo = self.labels[anchor]
        i = self._sorted.bisect_right(lo)
        hi = self._sorted[i] if i < len(self._sorted) else lo + 2
        if hi > self._top:
            self._top = hi
        step = (hi - lo) / (len(xs) + 1)
        for j, (x, c) in enumerate(zip(xs, colors)):
            self._place(x, lo + step * (j + 1), stage, c)

    def take_snapshot(self, stage: int) -> None:
        self.snapshots[stage] = tuple(self._at[l] for l in self._sorted)

    # queries ----------------------------------------------------------
    def __contains__(self, x: int) -> bool:
        return x in self.labels

    def __len__(self) -> int:
        return len(self.labels)

    def contains(self, x, budget=DEFAULT_BUDGET):
        s = self.added_at.get(x)
        if s is not None:
            return True if s <= budget else PENDING
        return False if x <= self.stage else PENDING

    def less(self, a, b, budget=DEFAULT_BUDGET):
        la, lb = self.labels.get(a), self.labels.get(b)
        if la is None or lb is None or self.added_at[a] > budget or self.added_at[b] > budget:
            return PENDING
        return la < lb

    def position(self, x: int) -> int:
        return self._sorted.index(self.labels[x])

    def successor(self, x: int):
        i = self._sorted.bisect_right(self.labels[x])
        return self._at[self._sorted[i]] if i < len(self._sorted) else None

    def predecessor(self, x: int):
        i = self._sorted.bisect_left(self.labels[x])
        return self._at[self._sorted[i - 1]] if i > 0 else None

    def between(self, a: int, b: int) -> list[int]:
        la, lb = self.labels[a], self.labels[b]
        if la >= lb:
            return []
        return [self._at[l] for l in self._sorted.irange(la, lb, inclusive=(False, False))]

    def colored_between(self, a: int, b: int, d: int) -> list[int]:
        """Elements of color ``d`` strictly between ``a`` and ``b``, in order."""
        la, lb = self.labels[a], self.labels[b]
        bucket = self._by_color.get(d)
        if bucket is None or la >= lb:
            return []
        return [self._at[l] for l in bucket.irange(la, lb, inclusive=(False, False))]

    def has_color_between(self, a: int, b: int, d: int) -> bool:
        la, lb = self.labels[a], self.labels[b]
        bucket = self._by_color.get(d)
        if bucket is None:
            return False
        i = bucket.bisect_right(la)
        return i < len(bucket) and bucket[i] < lb

    def in_order(self) -> list[int]:
        return [self._at[l] for l in self._sorted]

    def decided_elements(self, horizon=None, budget=DEFAULT_BUDGET):
        return sorted(x for x, s in self.added_at.items()
                      if s <= budget and (horizon is None or x <= horizon))

    def index(self, horizon=None, budget=DEFAULT_BUDGET):
        key = -1 if horizon is None or horizon >= self._max else horizon
        if budget < self.stage:
            return OrderIndex(self, sorted(self.decided_elements(horizon, budget),
                                           key=self.labels.__getitem__), budget, presorted=True)
        if key not in self._sub:
            els = self.in_order() if key < 0 else [x for x in self.in_order() if x <= key]
            self._sub[key] = OrderIndex(self, els, budget, presorted=True)
        return self._sub[key]

    def census(self, a, b, horizon=None, budget=DEFAULT_BUDGET):
        if (horizon is None or horizon >= self._max) and budget >= self.stage \
                and a in self.labels and b in self.labels:
            return max(0, self.position(b) - self.position(a) - 1)
        return self.index(horizon, budget).count_between(a, b)

    def predecessors(self, z, horizon=None, budget=DEFAULT_BUDGET):
        if (horizon is None or horizon >= self._max) and budget >= self.stage and z in self.labels:
            return self.position(z)
        return self.index(horizon, budget).count_below(z)

    # audits -----------------------------------------------------------
    def stability_problems(self) -> list[str]:
        """Compare every recorded snapshot with the final order restricted to it."""
        out = []
        for stage, snap in self.snapshots.items():
            members = set(snap)
            now = [x for x in self.in_order() if x in members]
            if now != list(snap):
                out.append(f"order on X_{stage} changed later")
        return out

    def trace_jsonl(self) -> str:
        return "\n".join(json.dumps(rec, sort_keys=True) for rec in self.trace)


def replay_trace(records: Iterable[dict], stages: int, colored: bool = False) -> StagedOrder:
    """Rebuild an order from its action trace alone.

    Each stage appends ``s`` when absent, then applies that stage's actions in
    recorded order. Records without an ``anchor`` insert after the witness ``n``.
    """
    by_stage: dict[int, list[dict]] = {}
    for rec in records:
        by_stage.setdefault(rec["stage"], []).append(rec)
    L = StagedOrder("replay", colored=colored)
    L.append(0, 0)
    for s in range(1, stages + 1):
        L.stage = s
        if s not in L:
            L.append(s, s)
        for rec in by_stage.get(s, ()):
            anchor = rec.get("anchor", rec["witness"]["n"])
            L.insert_after(anchor, rec["added"], s, rec.get("colors") or None)
        L.trace.extend(by_stage.get(s, ()))
    return L
