import pytest

from cohepow.clocked import PENDING, RuleFunction, constant, pair, unpair
from cohepow.cohesive import default_cohesive, injected
from cohepow.constructions import collapse_coloring, default_noncomputable_successor
from cohepow.errors import (
    IncompatibleContexts, PreconditionFailed, UnsupportedBase, WitnessNotFound,
)
from cohepow.orders import Integers, Naturals, Product, Rationals, Reverse, Sum, finite_k, int_encode
from cohepow.power import (
    STRIPED, ColorClass, NonstandardEvidence, NotFound, PowerElement, Standard, canonical_embed,
    classify_standard, color_density_witness, dyadic_blocks, far_apart_test, flank_witnesses,
    growing, immediate_successor_test, induced_color, initial_segment_audit, los_audit,
    midpoint_witness, power_compare, product_transport, projection_fiber, reverse_compare,
    successor_witness, successor_witness_search, sum_transport, tail_verdict, transport_iso,
    z_to_sum_code,
)
from cohepow.shuffles import shuffle_all, shuffle_finite
from cohepow.staged import StagedOrder

C = default_cohesive()          # multiples of 6 from 6 to 1998
N = Naturals()


def el(rule, label, base=N, window=C, **kw):
    return PowerElement(RuleFunction(rule, label), base, window, **kw)


def test_dyadic_blocks_and_growth():
    assert dyadic_blocks(9) == [(0, 1), (1, 2), (2, 4), (4, 9)]
    assert dyadic_blocks(333)[-1] == (166, 333)
    assert growing([0, 1, 2, 3, 4, 5, 6, 7, 8])[0]
    assert not growing([5] * 9)[0]


def test_constant_comparison():
    v = power_compare(canonical_embed(3, N, C), canonical_embed(5, N, C))
    assert v.result == "<" and v.cut == 0
    assert v.to_dict()["operation"] == "power_compare"


def test_identity_against_constant():
    v = power_compare(el(lambda n: n, "id"), canonical_embed(10, N, C))
    assert v.result == ">"


def test_alternating_dissent_is_undecided():
    x = el(lambda n: n, "id")
    y = el(lambda n: n + 1 if (n // 6) % 2 else n - 1, "zigzag")
    assert power_compare(x, y).result is None


def test_embedding_mirrors_base():
    assert power_compare(canonical_embed(0, N, C), canonical_embed(1, N, C)).result == "<"
    assert power_compare(canonical_embed(4, N, C), canonical_embed(4, N, C)).result == "="


def test_incompatible_contexts():
    with pytest.raises(IncompatibleContexts):
        power_compare(canonical_embed(1, N, C), canonical_embed(1, Naturals(), C))


def test_undefined_on_window_is_rejected():
    with pytest.raises(PreconditionFailed):
        el(lambda n: None, "nowhere")


def test_classify_standard():
    assert classify_standard(canonical_embed(7, N, C)) == Standard(7, 0)
    assert isinstance(classify_standard(el(lambda n: n, "id")), NonstandardEvidence)
    assert classify_standard(el(lambda n: n % 2, "parity")).value == 0   # window is all even
    assert initial_segment_audit(el(lambda n: n % 2, "parity"), 5) == []


def test_immediate_successor():
    x = el(lambda n: n, "id")
    assert immediate_successor_test(x, successor_witness(x)).result == "yes"
    assert immediate_successor_test(x, x).result == "no"
    Q = Rationals()
    from fractions import Fraction
    from cohepow.orders import rat_encode
    a = el(lambda n: rat_encode(Fraction(n)), "n", Q)
    b = el(lambda n: rat_encode(Fraction(n + 1)), "n+1", Q)
    assert immediate_successor_test(a, b).result == "no"


def test_successor_witness_search_over_naturals():
    x = el(lambda n: n, "id")
    theta = successor_witness_search(x, el(lambda n: n + 2, "n+2"))
    assert theta.values() == tuple(n + 1 for n in C)
    assert isinstance(successor_witness_search(x, el(lambda n: n + 1, "n+1")), NotFound)


def test_far_apart():
    x = el(lambda n: n, "id")
    assert far_apart_test(x, el(lambda n: 2 * n, "2n")).result == "yes"
    assert far_apart_test(x, el(lambda n: n + 3, "n+3")).result == "no"
    assert far_apart_test(x, x).result == "no"


def test_flanks_and_midpoint():
    x = el(lambda n: n, "id")
    lo, hi = flank_witnesses(x)
    assert lo.values() == tuple(n // 2 for n in C)
    assert hi.values() == tuple(2 * n for n in C)
    assert all(a <= b for a, b in zip(lo.values(), x.values()))
    with pytest.raises(PreconditionFailed):
        flank_witnesses(canonical_embed(3, N, C))
    mid = midpoint_witness(x, el(lambda n: 4 * n, "4n"))
    assert mid.values() == tuple(5 * n // 2 for n in C)
    with pytest.raises(PreconditionFailed):
        midpoint_witness(x, el(lambda n: n + 1, "n+1"))


def test_midpoint_rounds_to_even_on_successor_breaking_base():
    L = default_noncomputable_successor(2000)
    x = el(lambda n: n, "id", L, horizon=8000)
    y = el(lambda n: 4 * n, "4n", L, horizon=8000)
    mid = midpoint_witness(x, y)
    assert all(v % 2 == 0 for v in mid.values())


def test_midpoint_needs_arithmetic():
    Z = Integers()
    x = el(lambda n: int_encode(n), "n", Z, horizon=4000)
    y = el(lambda n: int_encode(4 * n), "4n", Z, horizon=4000)
    with pytest.raises((UnsupportedBase, PreconditionFailed)):
        midpoint_witness(x, y)


def test_sum_and_product_transports():
    S = Sum(Reverse(N), N)
    tag, comp = sum_transport(el(lambda n: pair(1, n), "(1,n)", S))
    assert tag == 1 and comp.values() == tuple(C)
    P = Product(finite_k(2), N)
    outer, inner = product_transport(el(lambda n: pair(n, n % 2), "<n,n%2>", P))
    assert outer.values() == tuple(C) and inner.values() == (0,) * len(C)


def test_reverse_flips_exactly():
    R = Reverse(N)
    x, y = el(lambda n: n, "id", R), el(lambda n: 2 * n, "2n", R)
    assert power_compare(x, y).result == ">"
    assert reverse_compare(x, y) == ">"


def test_transport_round_trip_and_identity():
    x = el(lambda n: int_encode(-n), "-n", Integers())
    S = Sum(Reverse(N), N)
    moved = transport_iso(z_to_sum_code, x, S, "code")
    assert sum_transport(moved)[0] == 0
    same = transport_iso(lambda v: v, x, x.base, "id")
    assert same.values() == x.values()


def colored_line(color, top=2100):
    L = StagedOrder(colored=True)
    for x in range(top + 1):
        L.append(x, x, color(x))
    L.stage = top
    return L


def test_induced_colors():
    zero = colored_line(lambda x: 0)
    x = el(lambda n: n, "id", zero)
    assert induced_color(lambda k: 0, x) == ColorClass("solid", 0)
    ident = colored_line(lambda x: x)
    y = el(lambda n: n, "id", ident)
    assert induced_color(lambda k: k, y).kind == STRIPED
    G = collapse_coloring(lambda k: k, 2)
    assert induced_color(G, y).value == 2


def test_color_density_witness_and_missing_color():
    L = colored_line(lambda x: x % 5)
    x, y = el(lambda n: n, "id", L), el(lambda n: n + 20, "n+20", L)
    theta = color_density_witness(x, y, 3)
    assert all(v % 5 == 3 and a < v < b for v, a, b in zip(theta.values(), x.values(), y.values()))
    with pytest.raises(WitnessNotFound):
        color_density_witness(x, y, 9)


def test_projection_fibers():
    L = colored_line(lambda x: 1 if x % 6 == 0 else 0)
    M = shuffle_finite(L, (2, 3))
    chi = el(lambda n: pair(n, 0), "chi", M)
    fib = projection_fiber(chi)
    lam, rho = fib.least(), fib.greatest()
    chain = [lam]
    while power_compare(chain[-1], rho).result != "=":
        chain.append(fib.successor(chain[-1]))
    assert len(chain) == 3
    assert all(fib.member(c).result is True for c in chain)
    with pytest.raises(PreconditionFailed):
        fib.predecessor(lam)

    striped = colored_line(lambda x: x // 6 + 1 if x % 6 == 0 else 0)
    A = shuffle_all(striped)
    f2 = projection_fiber(el(lambda n: pair(n, 0), "chi", A))
    assert far_apart_test(f2.least(), f2.greatest()).result == "yes"


def test_los_on_quantifier_free_formulas():
    elems = [el(lambda n: n, "id"), el(lambda n: 2 * n, "2n"), canonical_embed(4, N, C),
             el(lambda n: n + 1, "n+1")]
    assert los_audit(elems, 100, seed=1) == []
