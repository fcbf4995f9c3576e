import pytest
from hypothesis import given, strategies as st

from cohepow.clocked import (
    DEC, HALT, INC, IDENTITY_PROGRAM, LOOP_PROGRAM, PENDING, SUCCESSOR_PROGRAM, CeSetEnumerator,
    EnumerationOrder, Program, RuleFunction, compose, constant, decode_instruction, disassemble,
    encode_instruction, halting_set, index_of_program, interpret, left, pair, program,
    program_from_index, right, scaled_program, unpair,
)


def cantor(x, y):
    return (x + y) * (x + y + 1) // 2 + y


def test_pairing_fixed_values():
    assert pair(0, 0) == 0
    assert pair(1, 2) == 8
    assert (left(8), right(8)) == (1, 2)
    assert pair(1, 0) == 1 and pair(2, 0) == 3


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_pairing_matches_formula_and_inverts(x, y):
    z = pair(x, y)
    assert z == cantor(x, y)
    assert unpair(z) == (x, y)


def test_pairing_is_a_bijection_on_a_prefix():
    assert sorted(pair(*unpair(z)) for z in range(5000)) == list(range(5000))


def test_identity_and_successor_programs():
    assert IDENTITY_PROGRAM.evaluate(7, 10**6) == 7
    assert SUCCESSOR_PROGRAM.evaluate(41, 10**6) == 42


def test_loop_diverges_at_every_budget():
    for s in (0, 1, 10, 10**4):
        assert LOOP_PROGRAM.evaluate(3, s) is PENDING


def test_empty_program_index_is_identity():
    assert program_from_index(0) == ()
    assert interpret(0, 0, 10) == 0
    assert interpret(0, 5, 10) == 5


def test_assembled_identity_index():
    e0 = index_of_program([])
    succ = index_of_program([(INC, 0)])
    assert interpret(e0, 5, 100) == 5
    assert succ == 2 and interpret(succ, 5, 100) == 6


@pytest.mark.parametrize("e", [0, 1, 5, 17, 300])
def test_zero_budget_is_pending(e):
    assert interpret(e, 3, 0) is PENDING


def test_budget_monotone():
    p = scaled_program(3)
    r = p.run(9, 10**5)
    assert r.value == 27
    assert p.evaluate(9, r.steps - 1) is PENDING
    assert p.evaluate(9, r.steps) == 27


@given(st.integers(0, 30), st.integers(1, 6))
def test_scaled_program(n, k):
    assert scaled_program(k).evaluate(n, 10**5) == k * n


def test_instruction_codes_round_trip():
    for c in range(500):
        assert encode_instruction(decode_instruction(c)) == c
    assert decode_instruction(0) == (HALT,)
    assert decode_instruction(1) == (INC, 0)
    assert decode_instruction(2) == (DEC, 0, 0)


def test_program_indices_round_trip():
    for e in range(2000):
        assert index_of_program(program_from_index(e)) == e


def test_json_and_disassembly():
    p = program(5)
    assert p.to_json() == '[["INC", 0], ["HALT"]]'
    assert Program.from_json(p.to_json()).evaluate(4, 10) == 5
    assert "INC  R0" in disassemble(p.instrs)


def test_rule_function_divergence_and_map():
    half = RuleFunction(lambda n: n // 2 if n % 2 == 0 else None, "half")
    assert half.evaluate(8, 10) == 4
    assert half.evaluate(7, 10**6) is PENDING
    assert half.map(lambda v: v + 1).evaluate(8, 10) == 5
    assert compose(lambda v: 3 * v, constant(2)).evaluate(0, 10) == 6


def test_pending_is_falsy_but_distinct_from_zero():
    assert not PENDING
    assert PENDING is not None and PENDING != 0


def test_halting_set_and_enumeration_order():
    K = halting_set(500)
    assert K.contains(0, 500)          # empty program halts on 0
    loop = index_of_program([(DEC, 1, 0)])
    assert not K.contains(loop, 10**4)
    order = EnumerationOrder(K)
    f = order.as_function()
    vals = [f.evaluate(k, 10**4) for k in range(10)]
    assert len(set(vals)) == 10 and all(K.contains(v, 10**4) for v in vals)


def test_ce_enumerator_monotone():
    W = CeSetEnumerator.from_stages({3: 10, 5: 2})
    assert W.enumerate(4) == ()        # nothing appears before its own value
    assert W.enumerate(5) == (5,)
    assert W.enumerate(10) == (3, 5)
    for s in range(20):
        assert set(W.enumerate(s)) <= set(W.enumerate(s + 1))
