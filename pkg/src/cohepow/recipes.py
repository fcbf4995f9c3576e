"""Recipes: declarative check lists, run into JSON reports."""

from __future__ import annotations

import inspect
import json
import platform
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import metadata
from pathlib import Path
from typing import Callable

from .clocked import NUMBERING_VERSION, RuleFunction, pair
from .cohesive import CohesiveApprox, build_maximal, canonical_family, default_cohesive
from .errors import CohepowError, ConfigError
from .orders import Integers, Naturals, Product, Rationals, Reverse, Sum, int_encode, rat_encode
from .power import (
    PowerElement,
    far_apart_test,
    flank_witnesses,
    immediate_successor_test,
    midpoint_witness,
    power_compare,
    predecessor_witness,
    product_compare,
    successor_witness,
    sum_transport,
)
from .suites import CRITERIA, NONSTANDARD_RULES, CheckResult, _timed, z_pipeline_compare

DEFAULTS = {"stages": 2000, "horizon": 2048, "budget": 100_000, "cohesive": "family"}


@dataclass
class Recipe:
    name: str
    checks: list[dict] = field(default_factory=list)
    stages: int = DEFAULTS["stages"]
    horizon: int = DEFAULTS["horizon"]
    budget: int = DEFAULTS["budget"]
    cohesive: str = DEFAULTS["cohesive"]

    def validate(self) -> "Recipe":
        for key in ("stages", "horizon", "budget"):
            v = getattr(self, key)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ConfigError(f"{key} must be a natural number, got {v!r}")
        if not isinstance(self.checks, list):
            raise ConfigError("checks must be a list")
        for i, c in enumerate(self.checks):
            if not isinstance(c, dict) or "check" not in c:
                raise ConfigError(f"check #{i} needs a 'check' field")
            if c["check"] not in CHECKS:
                raise ConfigError(f"unknown check {c['check']!r}")
            if not isinstance(c.get("params", {}), dict):
                raise ConfigError(f"params of check #{i} must be an object")
            if c.get("expect", "pass") not in ("pass", "fail"):
                raise ConfigError(f"expect of check #{i} must be 'pass' or 'fail'")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "Recipe":
        if not isinstance(data, dict) or "name" not in data:
            raise ConfigError("a recipe is a JSON object with a 'name'")
        unknown = set(data) - {"name", "checks", "stages", "horizon", "budget", "cohesive"}
        if unknown:
            raise ConfigError(f"unknown recipe fields {sorted(unknown)}")
        return cls(**data).validate()


@dataclass
class Report:
    recipe: dict
    cohesive: dict | None
    checks: list[dict]
    environment: dict
    partial: bool = False

    @property
    def passed(self) -> bool:
        return not self.partial and all(c["as_expected"] for c in self.checks)

    def to_dict(self, runtime: bool = True) -> dict:
        d = asdict(self)
        if not runtime:
            for c in d["checks"]:
                c.pop("runtime", None)
        return d

    def to_json(self, runtime: bool = True) -> str:
        return json.dumps(self.to_dict(runtime), indent=2, sort_keys=True, default=str)

    def to_csv(self) -> str:
        rows = ["check,outcome,expected,as_expected,summary"]
        for c in self.checks:
            summary = str(c["evidence"].get("summary", "")).replace('"', "'")
            rows.append(f'{c["name"]},{c["outcome"]},{c["expected"]},{c["as_expected"]},"{summary}"')
        return "\n".join(rows) + "\n"


def environment() -> dict:
    try:
        version = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        version = "unknown"
    return {"package": version, "numbering": NUMBERING_VERSION,
            "python": platform.python_version()}


def resolve_cohesive(source: str, stages: int, horizon: int) -> CohesiveApprox:
    if source == "family":
        return default_cohesive(stages, horizon)
    if source == "maximal":
        return build_maximal(stages, min(horizon, 512), canonical_family()).window()
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"cohesive source {source!r} is neither maximal, family nor a file")
    try:
        return CohesiveApprox.from_json(path.read_text())
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad cohesive file {source}: {exc}") from exc


# -- checks usable in recipes -------------------------------------------------

@dataclass
class Context:
    cohesive: CohesiveApprox
    budget: int


def _nat_reps(ctx: Context, count: int) -> list[PowerElement]:
    return [PowerElement(RuleFunction(rule, label), Naturals(), ctx.cohesive, budget=ctx.budget)
            for label, rule in NONSTANDARD_RULES[:count]]


def _witness_check(name: str, tests: Callable[[PowerElement], list]):
    def check(ctx: Context, count: int = len(NONSTANDARD_RULES)) -> CheckResult:
        def run():
            bad, total = [], 0
            for x in _nat_reps(ctx, count):
                for v in tests(x):
                    total += 1
                    if v.result != "yes":
                        bad.append((x.label, v.operation, v.result))
            return not bad, {"summary": f"{total - len(bad)}/{total} Decided(yes)", "failing": bad}
        return _timed(name, run)
    return check


def _midpoint_tests(x: PowerElement) -> list:
    _, upper = flank_witnesses(x)
    mid = midpoint_witness(x, upper)
    return [far_apart_test(x, mid), far_apart_test(mid, upper)]


def _affine(rng: random.Random) -> Callable[[int], int]:
    a, b = rng.choice((0, 0, 1, 2)), rng.randrange(12)
    return lambda n: a * n + b


def _transport_elements(order: str, ctx: Context, rng: random.Random, k: int = 24):
    Z, Q = Integers(), Rationals()
    zq = Product(Z, Q)

    def zq_code(rng):
        f, g, den, sign = _affine(rng), _affine(rng), rng.randrange(1, 4), rng.choice((1, -1))
        return lambda n: pair(rat_encode(Fraction(sign * f(n), den)), int_encode(-sign * g(n)))

    if order == "Z":
        base, makers = Z, [lambda n, f=_affine(rng), s=rng.choice((1, -1)): int_encode(s * f(n))
                           for _ in range(k)]
    elif order == "ZQ":
        base, makers = zq, [zq_code(rng) for _ in range(k)]
    elif order == "N+ZQ":
        base = Sum(Naturals(), zq)
        makers = []
        for i in range(k):
            if i % 2:
                makers.append(lambda n, f=_affine(rng): pair(0, f(n)))
            else:
                makers.append(lambda n, h=zq_code(rng): pair(1, h(n)))
    else:
        raise ConfigError(f"no transport pipeline for {order!r}")
    return base, [PowerElement(RuleFunction(m, f"{order}#{i}"), base, ctx.cohesive, budget=ctx.budget)
                  for i, m in enumerate(makers)]


def _via(order: str):
    if order == "Z":
        S = Sum(Reverse(Naturals()), Naturals())
        return lambda x, y: z_pipeline_compare(x, y, S)
    if order == "ZQ":
        return product_compare

    def sum_then_product(x, y):
        (i, a), (j, b) = sum_transport(x), sum_transport(y)
        if i != j:
            return "<" if i < j else ">"
        return power_compare(a, b).result if i == 0 else product_compare(a, b)
    return sum_then_product


def transport_check(ctx: Context, order: str = "Z", samples: int = 200, seed: int = 3) -> CheckResult:
    def run():
        rng = random.Random(seed)
        base, elems = _transport_elements(order, ctx, rng)
        via = _via(order)
        bad, decided = [], 0
        for _ in range(samples):
            x, y = rng.choice(elems), rng.choice(elems)
            direct = power_compare(x, y).result
            if direct is None:
                continue
            decided += 1
            if via(x, y) != direct:
                bad.append((x.label, y.label, direct))
        return not bad and decided > 0, {
            "summary": f"{decided} decided pairs over {base.name}, {len(bad)} not preserved",
            "failures": bad[:10]}
    return _timed(f"transport {order}", run)


def _criterion(key: str):
    def check(ctx: Context, **params) -> CheckResult:
        return CRITERIA[key](**params)
    inner = inspect.signature(CRITERIA[key])
    check.__signature__ = inner.replace(
        parameters=[inspect.Parameter("ctx", inspect.Parameter.POSITIONAL_OR_KEYWORD),
                    *inner.parameters.values()])
    return check


CHECKS: dict[str, Callable[..., CheckResult]] = {
    "successor": _witness_check("successor", lambda x: [immediate_successor_test(x, successor_witness(x))]),
    "predecessor": _witness_check("predecessor", lambda x: [immediate_successor_test(predecessor_witness(x), x)]),
    "midpoint": _witness_check("midpoint", _midpoint_tests),
    "transport": transport_check,
    **{k: _criterion(k) for k in CRITERIA},
}


BUILTIN: dict[str, dict] = {
    "empty": {"name": "empty", "checks": []},
    "std-power": {"name": "std-power", "checks": [{"check": c} for c in ("successor", "predecessor", "midpoint")]},
    "example-4-5": {"name": "example-4-5",
                    "checks": [{"check": "transport", "params": {"order": o}} for o in ("Z", "ZQ", "N+ZQ")]},
    "acceptance": {"name": "acceptance", "checks": [{"check": k} for k in CRITERIA]},
    **{k: {"name": k, "checks": [{"check": k}]} for k in CRITERIA},
}


def load_recipe(name_or_path: str, overrides: dict | None = None) -> Recipe:
    """Built-in name or JSON file; ``overrides`` (from flags) win over file values."""
    if name_or_path in BUILTIN:
        data = json.loads(json.dumps(BUILTIN[name_or_path]))
    else:
        path = Path(name_or_path)
        if not path.is_file():
            raise ConfigError(f"no built-in recipe or file named {name_or_path!r}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    data = dict(data) if isinstance(data, dict) else data
    if isinstance(data, dict):
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return Recipe.from_dict(data)


def _run_one(ctx: Context, entry: dict) -> dict:
    expected = entry.get("expect", "pass")
    fn, params = CHECKS[entry["check"]], entry.get("params", {})
    try:
        inspect.signature(fn).bind(ctx, **params)
    except TypeError as exc:
        raise ConfigError(f"bad params for {entry['check']}: {exc}") from exc
    try:
        out = fn(ctx, **params).to_dict()
    except CohepowError as exc:
        out = {"name": entry["check"], "outcome": "undecided",
               "evidence": {"summary": f"{type(exc).__name__}: {exc}"}, "runtime": {}}
    out["check"] = entry["check"]
    out["expected"] = expected
    out["as_expected"] = out["outcome"] == expected
    return out


def run_recipe(recipe: Recipe, parallel: bool = False) -> Report:
    recipe.validate()
    cohesive = resolve_cohesive(recipe.cohesive, recipe.stages, recipe.horizon) if recipe.checks else None
    ctx = Context(cohesive, recipe.budget)
    results: list[dict] = []
    partial = False
    try:
        if parallel and len(recipe.checks) > 1:
            with ThreadPoolExecutor() as pool:
                results = list(pool.map(lambda c: _run_one(ctx, c), recipe.checks))
        else:
            for c in recipe.checks:
                results.append(_run_one(ctx, c))
    except (MemoryError, RecursionError) as exc:
        partial = True
        results.append({"name": "resource limit", "check": None, "outcome": "error",
                        "evidence": {"summary": type(exc).__name__}, "expected": "pass",
                        "as_expected": False, "runtime": {}})
    return Report(asdict(recipe), cohesive.describe() if cohesive else None, results,
                  environment(), partial)
