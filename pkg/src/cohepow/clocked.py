"""Step-budgeted partial functions, a small register machine, and c.e. set enumerators.

Every partial function in the package is a :class:`ClockedFunction`.  Asking for
``f.evaluate(n, s)`` either returns a natural number or the :data:`PENDING`
sentinel, meaning the computation did not finish within ``s`` steps.  Results are
deterministic and monotone in the budget.

Machine model
-------------
Registers ``R0, R1, ...`` hold naturals; the input is loaded into ``R0`` and the
output is read from ``R0``.  There are three instructions:

====  ==================  ==============================================
code  JSON form            meaning
====  ==================  ==============================================
0     ``["HALT"]``         stop
2k+1  ``["INC", k]``       ``Rk += 1``; go to next instruction
2k+2  ``["DEC", r, j]``    if ``Rr > 0``: ``Rr -= 1`` and go on, else jump
                           to ``j`` (here ``k = pair(r, j)``)
====  ==================  ==============================================

Executing any instruction costs one step, and so does the implicit halt when the
program counter leaves the program.  A run that needs ``t`` steps is reported at
every budget ``s >= t``; in particular budget 0 never halts.

Programs are numbered bijectively: index 0 is the empty program and index
``e > 0`` is the list whose head has code ``left(e-1)`` and whose tail has index
``right(e-1)``.  Every natural number is therefore a valid program.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Iterable, NamedTuple, Sequence

NUMBERING_VERSION = "urm-cantor-1"


class _Pending:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PENDING"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        return (_Pending, ())


PENDING = _Pending()


def is_pending(v) -> bool:
    return v is PENDING


# -- pairing ---------------------------------------------------------------

def pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def left(z: int) -> int:
    return unpair(z)[0]


def right(z: int) -> int:
    return unpair(z)[1]


# -- clocked functions -----------------------------------------------------

class Halted(NamedTuple):
    value: int
    steps: int


class ClockedFunction:
    """Base class. Subclasses implement ``_run(n, budget) -> Halted | None``.

    ``_run`` must return the least step count at which the computation halts,
    so that the result depends only on whether that count fits the budget.
    """

    name: str = "f"

    def __init__(self, name: str | None = None):
        if name is not None:
            self.name = name
        self._done: dict[int, Halted] = {}
        self._pending_upto: dict[int, int] = {}

    def _run(self, n: int, budget: int) -> Halted | None:
        raise NotImplementedError

    def run(self, n: int, budget: int) -> Halted | None:
        hit = self._done.get(n)
        if hit is not None:
            return hit if hit.steps <= budget else None
        if budget <= self._pending_upto.get(n, -1):
            return None
        res = self._run(n, budget)
        if res is None:
            self._pending_upto[n] = max(budget, self._pending_upto.get(n, -1))
        else:
            self._done[n] = res
            return res if res.steps <= budget else None
        return None

    def evaluate(self, n: int, budget: int):
        res = self.run(n, budget)
        return PENDING if res is None else res.value

    def __call__(self, n: int, budget: int):
        return self.evaluate(n, budget)

    def map(self, fn: Callable[[int], int | None], name: str | None = None) -> "ClockedFunction":
        return Combined([self], lambda v: fn(v), name=name or f"map({self.name})")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def eval_clocked(f: ClockedFunction, n: int, s: int):
    return f.evaluate(n, s)


class RuleFunction(ClockedFunction):
    """Built-in rule. ``rule(n)`` returns a natural or ``None`` for divergence;
    ``cost(n)`` is the number of steps charged (default 1)."""

    def __init__(self, rule: Callable[[int], int | None], name: str = "rule",
                 cost: Callable[[int], int] | None = None):
        super().__init__(name)
        self.rule = rule
        self.cost = cost

    def _run(self, n, budget):
        v = self.rule(n)
        if v is None:
            return None
        return Halted(v, self.cost(n) if self.cost else 1)


class TableFunction(ClockedFunction):
    def __init__(self, table: dict[int, int], name: str = "table", cost: int = 1):
        super().__init__(name)
        self.table = dict(table)
        self.cost = cost

    def _run(self, n, budget):
        if n in self.table:
            return Halted(self.table[n], self.cost)
        return None


class Combined(ClockedFunction):
    """``n -> combine(f_1(n), ..., f_k(n))``; halts once every part halts.
    The combiner may return ``None`` to diverge."""

    def __init__(self, parts: Sequence[ClockedFunction], combine: Callable[..., int | None],
                 name: str = "combined"):
        super().__init__(name)
        self.parts = list(parts)
        self.combine = combine

    def _run(self, n, budget):
        vals, steps = [], 0
        for p in self.parts:
            r = p.run(n, budget)
            if r is None:
                return None
            vals.append(r.value)
            steps = max(steps, r.steps)
        v = self.combine(*vals)
        if v is None:
            return None
        return Halted(v, steps)


def constant(v: int, name: str | None = None) -> RuleFunction:
    return RuleFunction(lambda n: v, name=name or f"const {v}")


def identity() -> RuleFunction:
    return RuleFunction(lambda n: n, name="id")


def compose(outer: Callable[[int], int | None], inner: ClockedFunction,
            name: str | None = None) -> ClockedFunction:
    return Combined([inner], outer, name=name or f"compose({inner.name})")


# -- register machine ------------------------------------------------------

HALT, INC, DEC = "HALT", "INC", "DEC"
Instruction = tuple


def decode_instruction(c: int) -> Instruction:
    if c == 0:
        return (HALT,)
    k, t = divmod(c - 1, 2)
    if t == 0:
        return (INC, k)
    r, j = unpair(k)
    return (DEC, r, j)


def encode_instruction(ins: Instruction) -> int:
    op = ins[0]
    if op == HALT:
        return 0
    if op == INC:
        return 2 * ins[1] + 1
    if op == DEC:
        return 2 * pair(ins[1], ins[2]) + 2
    raise ValueError(f"unknown opcode {op!r}")


def program_from_index(e: int) -> tuple[Instruction, ...]:
    out = []
    while e > 0:
        head, e = unpair(e - 1)
        out.append(decode_instruction(head))
    return tuple(out)


def index_of_program(instrs: Iterable[Instruction]) -> int:
    e = 0
    for ins in reversed(list(instrs)):
        e = pair(encode_instruction(ins), e) + 1
    return e


def run_program(instrs: Sequence[Instruction], n: int, budget: int) -> Halted | None:
    """Run to completion or until ``budget`` steps are spent."""
    nreg = 1
    for ins in instrs:
        if ins[0] != HALT:
            nreg = max(nreg, ins[1] + 1)
    regs = [0] * nreg
    regs[0] = n
    code = [(0, 0, 0) if ins[0] == HALT else (1, ins[1], 0) if ins[0] == INC else (2, ins[1], ins[2])
            for ins in instrs]
    size = len(code)
    pc = steps = 0
    while steps < budget:
        steps += 1
        if pc >= size:
            return Halted(regs[0], steps)
        op, r, j = code[pc]
        if op == 1:
            regs[r] += 1
            pc += 1
        elif op == 2:
            if regs[r]:
                regs[r] -= 1
                pc += 1
            else:
                pc = j
        else:
            return Halted(regs[0], steps)
    return None


class Program(ClockedFunction):
    """A register-machine program viewed as a clocked function."""

    def __init__(self, instrs: Sequence[Instruction], name: str | None = None,
                 index: int | None = None):
        instrs = tuple(tuple(i) for i in instrs)
        for ins in instrs:
            encode_instruction(ins)
        super().__init__(name or (f"phi_{index}" if index is not None else "program"))
        self.instrs = instrs
        self._index = index

    @classmethod
    def from_index(cls, e: int) -> "Program":
        return cls(program_from_index(e), index=e)

    @property
    def index(self) -> int:
        if self._index is None:
            self._index = index_of_program(self.instrs)
        return self._index

    def _run(self, n, budget):
        return run_program(self.instrs, n, budget)

    def to_json(self) -> str:
        return json.dumps([list(i) for i in self.instrs])

    @classmethod
    def from_json(cls, text: str, name: str | None = None) -> "Program":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("program JSON must be an array of instructions")
        return cls([tuple(i) for i in data], name=name)


def disassemble(instrs: Sequence[Instruction]) -> str:
    lines = []
    for pc, ins in enumerate(instrs):
        if ins[0] == HALT:
            txt = "HALT"
        elif ins[0] == INC:
            txt = f"INC  R{ins[1]}"
        else:
            txt = f"DEC  R{ins[1]} else -> {ins[2]}"
        lines.append(f"{pc:4d}  {txt}")
    return "\n".join(lines) if lines else "(empty program)"


_program_cache: dict[int, Program] = {}


def program(e: int) -> Program:
    p = _program_cache.get(e)
    if p is None:
        p = _program_cache[e] = Program.from_index(e)
    return p


def interpret(e: int, n: int, s: int):
    return program(e).evaluate(n, s)


def scaled_program(factor: int) -> Program:
    """Program for ``n -> factor * n`` (uses R1 as scratch and R2 as a zero)."""
    body = [(DEC, 0, factor + 2)] + [(INC, 1)] * factor + [(DEC, 2, 0)]
    base = len(body)
    body += [(DEC, 1, base + 3), (INC, 0), (DEC, 2, base)]
    return Program(body, name=f"{factor}n")


SUCCESSOR_PROGRAM = Program([(INC, 0)], name="n+1")
IDENTITY_PROGRAM = Program([], name="id")
LOOP_PROGRAM = Program([(DEC, 1, 0)], name="loop")


# -- c.e. sets -------------------------------------------------------------

class CeSetEnumerator:
    """Monotone enumeration of a c.e. set.

    ``entry(x)`` gives the stage at which ``x`` is enumerated or ``None``.  An
    element never appears before stage ``x``, so ``enumerate(s)`` is a subset of
    ``[0, s]``.
    """

    def __init__(self, entry: Callable[[int], int | None], name: str = "W",
                 decidable: bool = False):
        self._entry = entry
        self.name = name
        # decidable sets reveal non-membership of x at stage x
        self.decidable = decidable
        self._cache: dict[int, int | None] = {}

    def entry_stage(self, x: int) -> int | None:
        if x in self._cache:
            return self._cache[x]
        t = self._entry(x)
        t = None if t is None else max(t, x)
        self._cache[x] = t
        return t

    def contains(self, x: int, s: int) -> bool:
        t = self.entry_stage(x)
        return t is not None and t <= s

    def enumerate(self, s: int) -> tuple[int, ...]:
        return tuple(x for x in range(s + 1) if self.contains(x, s))

    def __repr__(self) -> str:
        return f"<CeSetEnumerator {self.name}>"

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], name: str = "W") -> "CeSetEnumerator":
        return cls(lambda x: x if pred(x) else None, name, decidable=True)

    @classmethod
    def domain_of(cls, f: ClockedFunction, cap: int, name: str | None = None) -> "CeSetEnumerator":
        """Domain of ``f``: ``x`` enters when ``f(x)`` halts, searched up to ``cap`` steps."""
        def entry(x):
            r = f.run(x, cap)
            return None if r is None else r.steps
        return cls(entry, name or f"dom({f.name})")

    @classmethod
    def from_stages(cls, stages: dict[int, int], name: str = "W") -> "CeSetEnumerator":
        return cls(stages.get, name)

    @classmethod
    def empty(cls) -> "CeSetEnumerator":
        return cls(lambda x: None, "empty")


def halting_set(cap: int) -> CeSetEnumerator:
    """``{e : phi_e(e) halts}``, each run searched up to ``cap`` steps."""
    def entry(e):
        r = program(e).run(e, cap)
        return None if r is None else r.steps
    return CeSetEnumerator(entry, f"K[{cap}]")


@dataclass
class EnumerationOrder:
    """Elements of a c.e. set listed in order of entry (ties by value).

    Used as a computable bijection from the naturals onto an infinite c.e. set.
    """

    source: CeSetEnumerator
    listing: list[int] = field(default_factory=list)
    stage: int = -1

    def advance_to(self, s: int) -> None:
        while self.stage < s:
            self.stage += 1
            t = self.stage
            for x in range(t + 1):
                if self.source.entry_stage(x) == t:
                    self.listing.append(x)

    def as_function(self, name: str = "f") -> ClockedFunction:
        """Clocked view: ``f(k)`` halts at the stage where the ``k``-th element appears."""
        outer = self

        class _Enum(ClockedFunction):
            def _run(self, k, budget):
                while len(outer.listing) <= k and outer.stage < budget:
                    outer.advance_to(outer.stage + 1)
                if len(outer.listing) <= k:
                    return None
                x = outer.listing[k]
                return Halted(x, max(outer.source.entry_stage(x), 1))

        return _Enum(name)
