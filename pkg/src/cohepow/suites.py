"""Acceptance checks, each returning a :class:`CheckResult`.

Every check is deterministic. Heavy constructions are cached per parameter set
so that checks sharing an order build it once.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .clocked import RuleFunction, pair, program, scaled_program
from .cohesive import (
    audit_monotone,
    bit_clear,
    build_maximal,
    canonical_family,
    default_cohesive,
    default_family,
    family_cohesive,
    reserved_computable_subset,
    tail_contract_cut,
)
from .constructions import (
    audit_colored_actions,
    audit_restraint,
    build_colored_dense,
    build_successor_breaker,
    default_noncomputable_successor,
    dense_blocks_theta,
)
from .errors import CohepowError
from .orders import (
    Integers,
    Naturals,
    Product,
    Reverse,
    Sum,
    finite_k,
    int_encode,
    rat_encode,
    standard_presentations,
)
from .power import (
    STRIPED,
    ColorClass,
    NotFound,
    PowerElement,
    canonical_embed,
    color_density_witness,
    far_apart_test,
    flank_witnesses,
    immediate_successor_test,
    induced_color,
    midpoint_witness,
    power_compare,
    predecessor_witness,
    product_compare,
    reverse_compare,
    reverse_transport,
    successor_witness,
    successor_witness_search,
    sum_compare,
    sum_transport,
    transport_iso,
    z_to_sum_code,
)
from .shuffles import (
    brute_fiber_size,
    pull_back,
    r_below,
    r_true,
    shuffle_all,
    shuffle_finite,
    shuffle_pi2,
    shuffle_sigma2,
)

COLORED_PROGRAMS = (4, 8)


@dataclass
class CheckResult:
    name: str
    passed: bool
    evidence: dict = field(default_factory=dict)
    runtime: float = 0.0
    undecided: bool = False

    @property
    def outcome(self) -> str:
        return "pass" if self.passed else "undecided" if self.undecided else "fail"

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.evidence.get('summary', '')}"

    def to_dict(self, runtime: bool = True) -> dict:
        """Wall-clock numbers live under ``runtime`` so the rest is reproducible."""
        ev = {k: v for k, v in self.evidence.items() if k != "timing"}
        out = {"name": self.name, "outcome": self.outcome, "evidence": ev}
        if runtime:
            out["runtime"] = {"seconds": round(self.runtime, 3), **self.evidence.get("timing", {})}
        return out


# -- shared constructions --------------------------------------------------

@lru_cache(maxsize=None)
def breaker(stages: int):
    return build_successor_breaker(reserved_computable_subset(default_cohesive()), stages)


@lru_cache(maxsize=None)
def colored_window(stages: int):
    return family_cohesive(default_family([bit_clear(2)]), stages, stages)


@lru_cache(maxsize=None)
def colored(stages: int):
    progs = [scaled_program(k) for k in COLORED_PROGRAMS]
    return build_colored_dense(colored_window(stages).complement, stages, progs)


@lru_cache(maxsize=None)
def nzq(cap: int):
    return default_noncomputable_successor(cap)


def _timed(name: str, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, ev = fn()
    except CohepowError as exc:
        return CheckResult(name, False, {"summary": f"{type(exc).__name__}: {exc}"},
                           time.perf_counter() - t, undecided=True)
    return CheckResult(name, ok, ev, time.perf_counter() - t)


# -- 1: embedding fidelity ------------------------------------------------

def shipped_bases(small_stages: int = 300) -> dict:
    bases = dict(standard_presentations())
    bases["L_A"] = nzq(2000)
    bases["breaker"] = breaker(small_stages)
    bases["colored"] = colored(small_stages)
    return bases


def check_embedding(bound: int = 50, limit: float = 5.0) -> CheckResult:
    def run():
        bases = shipped_bases()
        C = default_cohesive()
        t = time.perf_counter()
        failures, compared = [], 0
        for name, base in bases.items():
            dom = [a for a in range(bound) if base.contains(a) is True]
            emb = {a: canonical_embed(a, base, C) for a in dom}
            for a in dom:
                for b in dom:
                    want = "=" if a == b else ("<" if base.less(a, b) else ">")
                    compared += 1
                    if power_compare(emb[a], emb[b]).result != want:
                        failures.append((name, a, b))
        elapsed = time.perf_counter() - t
        return not failures and elapsed < limit, {
            "summary": f"{compared} pairs over {len(bases)} bases, {len(failures)} failures "
                       f"(time limit {limit}s)",
            "failures": failures[:10], "timing": {"comparisons": round(elapsed, 3)}}
    return _timed("1 embedding fidelity", run)


# -- 2: standard-power witnesses --------------------------------------------

NONSTANDARD_RULES: tuple[tuple[str, Callable[[int], int]], ...] = (
    ("n", lambda n: n), ("n+5", lambda n: n + 5), ("2n", lambda n: 2 * n),
    ("2n+1", lambda n: 2 * n + 1), ("3n", lambda n: 3 * n), ("3n+7", lambda n: 3 * n + 7),
    ("n/2", lambda n: n // 2), ("n/3+1", lambda n: n // 3 + 1), ("n^2", lambda n: n * n),
    ("n^2+n", lambda n: n * n + n), ("n^2/7", lambda n: n * n // 7),
    ("n+n/3", lambda n: n + n // 3), ("5n", lambda n: 5 * n), ("n+100", lambda n: n + 100),
    ("4n+3", lambda n: 4 * n + 3), ("7n/2", lambda n: 7 * n // 2),
    ("n(n+1)/2", lambda n: n * (n + 1) // 2), ("10n+1", lambda n: 10 * n + 1),
    ("n/2+n/5", lambda n: n // 2 + n // 5), ("sqrt", lambda n: int(n ** 0.5)),
)


def check_standard_power(stage: int = 2000, horizon: int = 2048, limit: float = 60.0) -> CheckResult:
    def run():
        C = default_cohesive(stage, horizon)
        N = Naturals()
        t = time.perf_counter()
        verdicts, failing = 0, []
        for label, rule in NONSTANDARD_RULES:
            x = PowerElement(RuleFunction(rule, label), N, C)
            succ, pred = successor_witness(x), predecessor_witness(x)
            _, upper = flank_witnesses(x)
            mid = midpoint_witness(x, upper)
            for v in (immediate_successor_test(x, succ), immediate_successor_test(pred, x),
                      far_apart_test(x, mid), far_apart_test(mid, upper)):
                verdicts += 1
                if v.result != "yes":
                    failing.append((label, v.operation, v.result))
        elapsed = time.perf_counter() - t
        ok = not failing and elapsed < limit and len(C) > 0
        return ok, {"summary": f"{verdicts - len(failing)}/{verdicts} Decided(yes) over "
                               f"{len(NONSTANDARD_RULES)} representatives, window {len(C)}",
                    "failing": failing, "timing": {"witnesses": round(elapsed, 3)}}
    return _timed("2 standard-power witnesses", run)


# -- 3: predecessor census stabilizes --------------------------------------------

def census_orders() -> dict[str, tuple[Callable[[], object], Callable[[], object], object, object]]:
    """name -> (order at level 1, order at level 2, horizon 1, horizon 2)."""
    def shuffled(make):
        return (lambda: pull_back(make(colored(2000)), 8000),
                lambda: pull_back(make(colored(4000)), 16000), None, None)
    return {
        "N": (Naturals, Naturals, 1000, 2000),
        "L_A": (lambda: nzq(2000), lambda: nzq(4000), 2000, 4000),
        "breaker": (lambda: breaker(2000), lambda: breaker(4000), None, None),
        "colored": (lambda: colored(2000), lambda: colored(4000), None, None),
        "shuffle_finite": shuffled(lambda L: shuffle_finite(L, (2, 3))),
        "shuffle_all": shuffled(shuffle_all),
        "shuffle_pi2": shuffled(lambda L: shuffle_pi2(L, r_below, 17)),
        "shuffle_sigma2": shuffled(lambda L: shuffle_sigma2(L, r_true)),
    }


def check_census_stability(probe: int = 30, limit: float = 120.0) -> CheckResult:
    def run():
        rows, timing, ok = {}, {}, True
        for name, (mk1, mk2, h1, h2) in census_orders().items():
            t = time.perf_counter()
            o1, o2 = mk1(), mk2()
            c1 = [o1.predecessors(z, h1) for z in range(probe + 1)]
            c2 = [o2.predecessors(z, h2) for z in range(probe + 1)]
            diff = sum(a != b for a, b in zip(c1, c2))
            secs = time.perf_counter() - t
            rows[name] = {"discrepancies": diff, "census": c2}
            timing[name] = round(secs, 3)
            ok = ok and diff == 0 and secs < limit
        bad = {k: v["discrepancies"] for k, v in rows.items() if v["discrepancies"]}
        return ok, {"summary": f"{len(rows)} orders, discrepancies {bad or 0}",
                    "orders": rows, "timing": timing}
    return _timed("3 omega-ness stabilization", run)


# -- 4: successor breaking ----------------------------------------------------------

def check_successor_breaking(stages: int = 2000, programs: int = 8) -> CheckResult:
    def run():
        L = breaker(stages)
        C = default_cohesive()
        checked, failures = 0, []
        for e in range(programs):
            for n in C.elements:
                if pair(e, n) >= stages:
                    continue
                if not all(L.less(j, n) is True for j in range(e + 1)):
                    continue
                r = program(e).run(n, stages)
                if r is None or r.value not in L:
                    continue
                checked += 1
                if L.successor(n) == r.value:
                    failures.append((e, n, r.value))
        audit = audit_restraint(L) + L.stability_problems()
        ok = not failures and not audit and checked > 0
        return ok, {"summary": f"{checked} processed (e, n) pairs, {len(failures)} immediate "
                               f"successors, restraint audit {len(audit)} problems",
                    "failures": failures, "audit": audit[:10], "actions": len(L.trace)}
    return _timed("4 successor breaking", run)


# -- 5: color density ---------------------------------------------------------

def colored_power_window(stages: int):
    """Window elements whose interval the construction has processed."""
    L = colored(stages)
    done = max((r["witness"]["n"] for r in L.trace), default=-1)
    return L, colored_window(stages).truncate(done)


def check_color_density(stages: int = 4000, colors: int = 6, limit: float = 120.0) -> CheckResult:
    def run():
        t = time.perf_counter()
        L, C = colored_power_window(stages)
        F = L.color.get
        lo, hi = (PowerElement(scaled_program(k), L, C, f"{k}n") for k in COLORED_PROGRAMS)
        bad = []
        for d in range(colors + 1):
            theta = color_density_witness(lo, hi, d)
            got = induced_color(lambda k: F(k, 0), theta)
            if (got.kind, got.value) != ("solid", d) or power_compare(lo, theta).result != "<" \
                    or power_compare(theta, hi).result != "<":
                bad.append(d)
        striped = color_density_witness(lo, hi, ColorClass(STRIPED))
        s_ok = induced_color(lambda k: F(k, 0), striped).kind == STRIPED
        audit = audit_colored_actions(L, colored_window(stages).complement,
                                      [scaled_program(k) for k in COLORED_PROGRAMS])
        elapsed = time.perf_counter() - t
        ok = not bad and s_ok and not audit and elapsed < limit
        return ok, {"summary": f"colors 0..{colors} found on a {len(C)}-element window "
                               f"(failed {bad}), striped {'found' if s_ok else 'missing'}, "
                               f"action audit {len(audit)} problems",
                    "window": list(C.elements), "audit": audit[:10],
                    "timing": {"check": round(elapsed, 3)}}
    return _timed("5 color density", run)


# -- 6: shuffle fiber laws ----------------------------------------------------

def fiber_variants(L) -> list[tuple[str, object, dict]]:
    return [
        ("finite(2,3)", shuffle_finite(L, (2, 3)), {"kind": "finite", "ks": (2, 3)}),
        ("finite(1,2,3)", shuffle_finite(L, (1, 2, 3)), {"kind": "finite", "ks": (1, 2, 3)}),
        ("all", shuffle_all(L), {"kind": "all"}),
        ("pi2 true", shuffle_pi2(L, r_true, 1), {"kind": "pi2", "R": r_true, "k0": 1}),
        ("pi2 below", shuffle_pi2(L, r_below, 17), {"kind": "pi2", "R": r_below, "k0": 17}),
        ("sigma2 true", shuffle_sigma2(L, r_true), {"kind": "sigma2", "R": r_true}),
        ("sigma2 below", shuffle_sigma2(L, r_below), {"kind": "sigma2", "R": r_below}),
    ]


def check_fiber_laws(bound: int = 500, stages: int = 2000) -> CheckResult:
    def run():
        L = colored(stages)
        mism, total = [], 0
        for name, order, params in fiber_variants(L):
            for x in range(bound + 1):
                total += 1
                want = brute_fiber_size(x=x, color=L.color[x], **params)
                if order.fiber_size(x) != want:
                    mism.append((name, x, order.fiber_size(x), want))
        return not mism, {"summary": f"{total} fibers checked, {len(mism)} mismatches",
                          "mismatches": mism[:10]}
    return _timed("6 shuffle fiber laws", run)


# -- 7: transports ------------------------------------------------------------

def _affine_reps(rng: random.Random, k: int) -> list[tuple[str, Callable[[int], int]]]:
    out = []
    for _ in range(k):
        a, b = rng.choice((0, 0, 1, 2, 3)), rng.randrange(20)
        out.append((f"{a}n+{b}", lambda n, a=a, b=b: a * n + b))
    return out


def _pairs(elems, rng, k=200):
    return [(rng.choice(elems), rng.choice(elems)) for _ in range(k)]


def check_transports(samples: int = 200, seed: int = 11) -> CheckResult:
    def run():
        rng = random.Random(seed)
        C = default_cohesive()
        N = Naturals()
        failures: dict[str, list] = {}
        reps = _affine_reps(rng, 24)

        S = Sum(Reverse(N), N)
        sum_elems = [PowerElement(RuleFunction(lambda n, f=f, t=t: pair(t, f(n)), f"({t},{lab})"),
                                  S, C) for lab, f in reps for t in (0, 1)]
        failures["sum"] = _audit(_pairs(sum_elems, rng, samples), sum_compare)

        P = Product(finite_k(2), N)
        prod_elems = [PowerElement(RuleFunction(lambda n, f=f, g=g: pair(f(n), g), f"<{lab},{g}>"),
                                   P, C) for lab, f in reps for g in (0, 1)]
        failures["product"] = _audit(_pairs(prod_elems, rng, samples), product_compare)

        R = Reverse(N)
        rev_elems = [PowerElement(RuleFunction(f, lab), R, C) for lab, f in reps]
        failures["reverse"] = _audit(_pairs(rev_elems, rng, samples), reverse_compare)

        Z = Integers()
        z_elems = [PowerElement(RuleFunction(lambda n, f=f, s=s: int_encode(s * f(n)),
                                             f"{'-' if s < 0 else ''}({lab})"), Z, C)
                   for lab, f in reps for s in (1, -1)]
        iso_bad = [(a, b) for a in range(-20, 20) for b in range(-20, 20)
                   if (a < b) != S.less(z_to_sum_code(int_encode(a)), z_to_sum_code(int_encode(b)))]
        failures["Z iso"] = iso_bad
        failures["Z pipeline"] = _audit(_pairs(z_elems, rng, samples),
                                        lambda x, y: z_pipeline_compare(x, y, S))
        total = sum(len(v) for v in failures.values())
        return total == 0, {"summary": "preservation failures " +
                                       ", ".join(f"{k}={len(v)}" for k, v in failures.items()),
                            "failures": {k: v[:5] for k, v in failures.items()}}
    return _timed("7 transport audits", run)


def _audit(pairs, via) -> list:
    bad = []
    for x, y in pairs:
        direct = power_compare(x, y).result
        if direct is not None and via(x, y) != direct:
            bad.append((x.label, y.label, direct))
    return bad


_FLIP = {"<": ">", ">": "<", "=": "=", None: None}


def z_pipeline_compare(x: PowerElement, y: PowerElement, S: Sum) -> str | None:
    """Integers -> N* + N -> summands, with the reversed summand read back over N."""
    (i, a), (j, b) = (sum_transport(transport_iso(z_to_sum_code, e, S, "code")) for e in (x, y))
    if i != j:
        return "<" if i < j else ">"
    if i == 0:
        return _FLIP[power_compare(reverse_transport(a), reverse_transport(b)).result]
    return power_compare(a, b).result


# -- 8: DenseBlocks ----------------------------------------------------------

def check_dense_blocks(stages: int = 300, covered: int = 10) -> CheckResult:
    def run():
        C = default_cohesive()
        W = C.complement
        N = Naturals()
        psi = RuleFunction(lambda n: 0, "0")
        phi = RuleFunction(lambda n: 2 * n, "2n")
        theta, ledger = dense_blocks_theta(psi, phi, W, stages)
        missing = [k for k in range(covered + 1)
                   if k not in ledger.cover or W.contains(ledger.cover[k], stages)]
        outside = [n for n, (x, _) in theta.graph.items() if not 0 < x < 2 * n]
        audit = []
        for rec in ledger.stages:
            l0, l1, k = rec["l0"], rec["l1"], rec["k"]
            if k != (l0 if l1 is None else min(l0, l1)):
                audit.append(f"stage {rec['stage']}: k")
            if rec["action"]:
                n, x = rec["action"]
                s = rec["stage"]
                if N.census(0, x, s) < k or N.census(x, 2 * n, s) < k:
                    audit.append(f"stage {s}: action too close to an endpoint")
        audit += [f"stage {r['stage']}: cover by {r['n']} retracted outside W"
                  for r in ledger.retractions if not r["in_W"]]
        ok = not missing and not outside and not audit
        return ok, {"summary": f"k<= {covered} uncovered {missing}, {len(theta.graph)} values, "
                               f"{len(outside)} outside the interval, ledger audit {len(audit)} problems",
                    "cover": {k: ledger.cover.get(k) for k in range(covered + 1)}}
    return _timed("8 DenseBlocks enumeration", run)


# -- 9: family cohesiveness contract ------------------------------------------

def check_family_contract(stage: int = 2000, horizon: int = 2048, limit: float = 30.0) -> CheckResult:
    def run():
        t = time.perf_counter()
        fam = canonical_family()
        C = family_cohesive(fam, stage, horizon)
        cuts = [tail_contract_cut(C.elements, w, stage) for w in fam]
        state = build_maximal(stage, 512, fam)
        audit = audit_monotone(state)
        elapsed = time.perf_counter() - t
        ok = all(c == 0 for c in cuts) and not audit and elapsed < limit
        return ok, {"summary": f"window {len(C)}, containment cuts {cuts}, maximal-set audit "
                               f"{len(audit)} problems over {len(state.history)} stages",
                    "audit": audit[:10], "timing": {"check": round(elapsed, 3)}}
    return _timed("9 family cohesiveness contract", run)


# -- 10: rationals -------------------------------------------------------------

def rational_pairs(rng: random.Random, k: int = 50) -> list[tuple[str, Callable, str, Callable]]:
    out = []
    for _ in range(k):
        a = Fraction(rng.randrange(-20, 20), rng.randrange(1, 9))
        slope = Fraction(rng.randrange(0, 3), rng.randrange(1, 4))
        gap = Fraction(1, rng.randrange(1, 6))
        shrink = rng.random() < 0.5

        def x(n, a=a, slope=slope):
            return rat_encode(a + slope * n)

        def y(n, a=a, slope=slope, gap=gap, shrink=shrink):
            return rat_encode(a + slope * n + (gap / (n + 1) if shrink else gap))

        out.append((f"{a}+{slope}n", x, f"{a}+{slope}n+{gap}{'/(n+1)' if shrink else ''}", y))
    return out


def check_rationals(pairs: int = 50, seed: int = 5) -> CheckResult:
    def run():
        Q = standard_presentations()["Q"]
        C = default_cohesive()
        rng = random.Random(seed)
        found, endpoint, undecided = 0, [], 0
        for lx, fx, ly, fy in rational_pairs(rng, pairs):
            x = PowerElement(RuleFunction(fx, lx), Q, C)
            y = PowerElement(RuleFunction(fy, ly), Q, C)
            if power_compare(x, y).result != "<":
                undecided += 1
                continue
            theta = successor_witness_search(x, y)
            if isinstance(theta, NotFound):
                continue
            found += 1
            if power_compare(x, theta).result != "<" or power_compare(theta, y).result != "<":
                endpoint.append((lx, ly))
        ok = found == pairs and not endpoint and undecided == 0
        return ok, {"summary": f"{found}/{pairs} pairs with a strictly-between witness, "
                               f"{len(endpoint)} endpoint verdicts, {undecided} undecided inputs"}
    return _timed("10 rationals self-similarity", run)


CRITERIA: dict[str, Callable[[], CheckResult]] = {
    "acc-1": check_embedding,
    "acc-2": check_standard_power,
    "acc-3": check_census_stability,
    "acc-4": check_successor_breaking,
    "acc-5": check_color_density,
    "acc-6": check_fiber_laws,
    "acc-7": check_transports,
    "acc-8": check_dense_blocks,
    "acc-9": check_family_contract,
    "acc-10": check_rationals,
}
