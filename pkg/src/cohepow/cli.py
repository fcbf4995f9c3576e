"""``cohepow`` command-line driver.

Exit codes: 0 when every check passes, 1 on failures, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .clocked import NUMBERING_VERSION, RuleFunction, disassemble, program, scaled_program
from .cohesive import build_maximal, canonical_family, reserved_computable_subset
from .constructions import build_colored_dense, build_successor_breaker, dense_blocks_theta
from .errors import ConfigError
from .orders import DEFAULT_BUDGET, standard_presentations
from .recipes import DEFAULTS, load_recipe, resolve_cohesive, run_recipe
from .shuffles import pull_back, r_below, r_true, shuffle_all, shuffle_finite, shuffle_pi2, shuffle_sigma2
from .staged import StagedOrder, replay_trace
from .suites import CRITERIA, colored, nzq

CONSTRUCTIONS = ("breaker", "colored-dense", "nzq", "dense-blocks", "maximal")
SHUFFLES = {
    "shuffle-finite": lambda L: shuffle_finite(L, (2, 3)),
    "shuffle-all": shuffle_all,
    "shuffle-pi2": lambda L: shuffle_pi2(L, r_below, 17),
    "shuffle-sigma2": lambda L: shuffle_sigma2(L, r_true),
}


def _settings(args) -> dict:
    """Flags over config file over defaults."""
    merged = dict(DEFAULTS, parallel=False)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - set(merged)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        merged.update(data)
    for key in merged:
        v = getattr(args, key, None)
        if v not in (None, False):
            merged[key] = v
    for key in ("stages", "horizon", "budget"):
        v = merged[key]
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ConfigError(f"{key} must be a natural number, got {v!r}")
    return merged


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- build --------------------------------------------------------------------

def build(name: str, cfg: dict):
    S, B = cfg["stages"], cfg["horizon"]
    if name == "breaker":
        C = resolve_cohesive(cfg["cohesive"], S, B)
        return build_successor_breaker(reserved_computable_subset(C), S)
    if name == "colored-dense":
        C = resolve_cohesive(cfg["cohesive"], S, B)
        return build_colored_dense(C.complement, S, [scaled_program(4), scaled_program(8)])
    if name == "nzq":
        return nzq(S)
    if name == "dense-blocks":
        C = resolve_cohesive(cfg["cohesive"], S, B)
        return dense_blocks_theta(RuleFunction(lambda n: 0, "0"), RuleFunction(lambda n: 2 * n, "2n"),
                                  C.complement, S)
    if name == "maximal":
        return build_maximal(S, min(B, 512), canonical_family())
    raise ConfigError(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTIONS)}")


def _build_summary(name: str, obj, cfg: dict) -> dict:
    out = {"construction": name, "stages": cfg["stages"], "numbering": NUMBERING_VERSION}
    if isinstance(obj, StagedOrder):
        out.update(size=len(obj), actions=len(obj.trace), stability_problems=obj.stability_problems(),
                   prefix=obj.in_order()[:64])
    elif isinstance(obj, tuple):
        theta, ledger = obj
        out.update(values=len(theta.graph), cover={str(k): v for k, v in ledger.cover.items()},
                   retractions=len(ledger.retractions))
    elif hasattr(obj, "markers"):
        w = obj.window()
        out.update(window=list(w.elements), cohesive=w.describe())
    else:
        out.update(order=obj.name)
    return out


def cmd_build(args, cfg) -> int:
    obj = build(args.construction, cfg)
    _emit(json.dumps(_build_summary(args.construction, obj, cfg), indent=2), args.out)
    if args.trace:
        if not isinstance(obj, StagedOrder):
            raise ConfigError(f"{args.construction} records no action trace")
        Path(args.trace).write_text(obj.trace_jsonl() + ("\n" if obj.trace else ""))
    return 0


# -- dump ---------------------------------------------------------------------

def resolve_order(name: str, cfg: dict):
    std = standard_presentations()
    if name in std:
        return std[name]
    if name in ("L_A", "nzq"):
        return nzq(cfg["stages"])
    if name in ("breaker", "colored-dense"):
        return build(name, cfg)
    if name in SHUFFLES:
        return pull_back(SHUFFLES[name](colored(cfg["stages"])), 4 * cfg["stages"])
    raise ConfigError(f"unknown order {name!r}")


def dump_prefix(order, horizon: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Decided elements of ``[0, horizon]`` in order; undecided codes listed separately."""
    pending = [x for x in range(horizon + 1) if order.contains(x, budget) not in (True, False)]
    return {"order": order.name, "horizon": horizon, "budget": budget, "numbering": NUMBERING_VERSION,
            "elements": list(order.index(horizon, budget).elements), "pending": pending}


def plot_prefix(dump: dict, order, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    els = dump["elements"]
    colors = [getattr(order, "color", {}).get(x, 0) for x in els]
    fig, ax = plt.subplots(figsize=(10, 3))
    ax.scatter(range(len(els)), els, c=colors, s=6, cmap="viridis")
    ax.set_xlabel("position in the order")
    ax.set_ylabel("code")
    ax.set_title(f"{dump['order']} on [0, {dump['horizon']}]")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_dump(args, cfg) -> int:
    order = resolve_order(args.order, cfg)
    d = dump_prefix(order, cfg["horizon"], cfg["budget"])
    _emit(json.dumps(d), args.out)
    if args.plot:
        plot_prefix(d, order, args.plot)
    return 0


# -- replay -------------------------------------------------------------------

def cmd_replay(args, cfg) -> int:
    try:
        records = [json.loads(line) for line in Path(args.trace).read_text().splitlines() if line.strip()]
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read trace {args.trace}: {exc}") from exc
    is_colored = any(r.get("colors") for r in records)
    L = replay_trace(records, cfg["stages"], is_colored)
    out = {"stages": cfg["stages"], "actions": len(records), "prefix": L.in_order()[:64]}
    code = 0
    if args.against:
        ref = build(args.against, cfg)
        out["matches"] = ref.in_order() == L.in_order() and (not is_colored or ref.color == L.color)
        code = 0 if out["matches"] else 1
    _emit(json.dumps(out, indent=2), args.out)
    return code


# -- test / suite ---------------------------------------------------------------

def _overrides(cfg: dict) -> dict:
    return {k: cfg[k] for k in ("stages", "horizon", "budget", "cohesive")
            if cfg[k] != DEFAULTS[k]}


def cmd_test(args, cfg) -> int:
    recipe = load_recipe(args.suite, _overrides(cfg))
    if args.base and args.base != "N":
        for c in recipe.checks:
            if c["check"] == "transport":
                c.setdefault("params", {})["order"] = args.base
    report = run_recipe(recipe, parallel=cfg["parallel"])
    _emit(report.to_json(), args.out)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    return 0 if report.passed else 1


def cmd_suite(args, cfg) -> int:
    name = args.name or "acceptance"
    recipe = load_recipe(name)
    report = run_recipe(recipe, parallel=cfg["parallel"])
    for c in report.checks:
        print(f"{'PASS' if c['as_expected'] else 'FAIL'} {c['name']}: {c['evidence'].get('summary', '')}")
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n")
    return 0 if report.passed else 1


def cmd_disasm(args, cfg) -> int:
    p = program(args.index)
    print(f"# program {args.index} ({NUMBERING_VERSION})")
    print(disassemble(p.instrs))
    print(p.to_json())
    return 0


# -- parser -------------------------------------------------------------------

def parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--stages", type=int)
    common.add_argument("--horizon", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--cohesive", help="maximal, family, or a path to a window JSON file")
    common.add_argument("--config", help="JSON file of defaults; flags override it")
    common.add_argument("--parallel", action="store_true", help="run independent checks concurrently")
    common.add_argument("--seedless", action="store_true",
                        help="accepted for compatibility; every construction is deterministic")
    common.add_argument("--out", help="write the JSON result here instead of stdout")

    p = argparse.ArgumentParser(prog="cohepow", description="Stage constructions and power-of-order checks.")
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", parents=[common], help="run a stage construction")
    b.add_argument("construction", choices=CONSTRUCTIONS)
    b.add_argument("--trace", help="write the action trace as JSON lines")
    b.set_defaults(func=cmd_build)
    t = sub.add_parser("test", parents=[common], help="run a recipe and emit its report")
    t.add_argument("suite", help="built-in recipe name or recipe JSON file")
    t.add_argument("--base", help="order for transport checks (Z, ZQ, N+ZQ)")
    t.add_argument("--csv", help="also write a CSV projection")
    t.set_defaults(func=cmd_test)
    d = sub.add_parser("dump", parents=[common], help="sorted decided prefix of an order")
    d.add_argument("order")
    d.add_argument("--plot", help="write a prefix diagram image")
    d.set_defaults(func=cmd_dump)
    r = sub.add_parser("replay", parents=[common], help="rebuild an order from a trace file")
    r.add_argument("trace")
    r.add_argument("--against", choices=("breaker", "colored-dense"),
                   help="rebuild the construction and compare")
    r.set_defaults(func=cmd_replay)
    s = sub.add_parser("suite", parents=[common], help="acceptance checks, one line each")
    s.add_argument("name", nargs="?", choices=["acceptance", *CRITERIA])
    s.set_defaults(func=cmd_suite)
    a = sub.add_parser("disasm", parents=[common], help="disassemble a numbered program")
    a.add_argument("index", type=int)
    a.set_defaults(func=cmd_disasm)
    return p


def main(argv: list[str] | None = None) -> int:
    p = parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = _settings(args)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
