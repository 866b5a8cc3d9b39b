"""Command line interface: ``broadcast-indep {compute,verify,witness,generate,sweep}``.

Exit codes: 0 ok, 1 broadcast invalid (verify), 2 bad input / usage,
3 disconnected graph where alpha_b is needed, 4 theorem hypothesis violated,
5 witness certificate failed.

Every command's flags form a :class:`RunConfig`; ``--save-config`` writes it
as JSON and ``--config`` reads it back.  A flag given both on the command
line and in the config file with different values is an error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

from . import __version__
from .exact_solvers import (
    Broadcast,
    Budget,
    alpha_b_exact,
    max_independent_set,
    max_packing,
    validate_broadcast,
)
from .extremal_gen import (
    ConstructionOptions,
    default_epsilon,
    run_with_retries,
    run_construction,
    sweep_csv,
    sweep_summary,
)
from .graph_core import (
    NAMED_GRAPHS,
    DisconnectedGraphError,
    Graph,
    GraphError,
    diameter,
    girth,
    is_connected,
    min_degree,
    parse_graph,
    serialize_graph6,
)
from .witness import HypothesisViolation, build_witness, strict_improvement_check, verify_witness

SCHEMA = 1
EXIT_INVALID = 1
EXIT_INPUT = 2
EXIT_DISCONNECTED = 3
EXIT_HYPOTHESIS = 4
EXIT_CERTIFICATE = 5

THEOREM_TAGS = {"1": "thm1", "3i": "thm3i", "3ii": "thm3ii"}

class CliError(Exception):
    def __init__(self, message: str, code: int, extra: dict | None = None):
        super().__init__(message)
        self.code = code
        self.extra = extra or {}


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    inline: str | None = None
    named: str | None = None
    format: str = "auto"
    budget_ms: int = 60_000
    params: str = "alpha,rho,alpha_b"
    broadcast: str | None = None
    theorem: str = "1"
    xi: str | None = None
    n: list[int] | None = None
    k: list[int] | None = None
    epsilon: list[str] | None = None
    seed: int = 0
    seeds: int = 1
    retries: int = 0
    alpha_nodes: int = 200_000
    alpha_b_max_n: int = 0
    allow_any_epsilon: bool = False
    jobs: int = 1
    out: str | None = None
    summary: str | None = None
    graph_out: str | None = None
    timings: bool = False


_DEFAULTS = {f.name: f.default for f in fields(RunConfig) if f.name != "command"}


# ------------------------------------------------------------------ helpers

def _load_graph(cfg: RunConfig) -> Graph:
    sources = [s for s in (cfg.input, cfg.inline, cfg.named) if s is not None]
    if len(sources) != 1:
        raise CliError("give exactly one of --input, --inline, --named", EXIT_INPUT)
    if cfg.named is not None:
        if cfg.named not in NAMED_GRAPHS:
            raise CliError(f"unknown named graph {cfg.named!r}", EXIT_INPUT)
        return NAMED_GRAPHS[cfg.named]()
    if cfg.input is not None:
        try:
            text = sys.stdin.read() if cfg.input == "-" else Path(cfg.input).read_text()
        except OSError as exc:
            raise CliError(f"cannot read {cfg.input}: {exc}", EXIT_INPUT) from exc
    else:
        text = cfg.inline.replace("\\n", "\n").replace(";", "\n")
    fmt = cfg.format
    if fmt == "auto":
        name = cfg.input or ""
        first = text.strip().splitlines()[0] if text.strip() else ""
        looks_g6 = bool(first) and " " not in first and not first.startswith("#")
        fmt = "graph6" if name.endswith((".g6", ".graph6")) or looks_g6 else "edgelist"
    try:
        return parse_graph(text, fmt)
    except GraphError as exc:
        raise CliError(f"cannot parse graph ({fmt}): {exc}", EXIT_INPUT) from exc


def _parse_broadcast(text: str, n: int) -> Broadcast:
    path = Path(text)
    if path.exists():
        text = path.read_text()
    try:
        values = [int(t) for t in text.replace(",", " ").split()]
        f = Broadcast(tuple(values))
    except ValueError as exc:
        raise CliError(f"bad broadcast {text!r}: {exc}", EXIT_INPUT) from exc
    if len(f) != n:
        raise CliError(f"broadcast has {len(f)} values, graph has {n} vertices", EXIT_INPUT)
    return f


def _budget(cfg: RunConfig) -> Budget:
    return Budget(time_ms=cfg.budget_ms)


def _solver_meta(res, timings: bool) -> dict:
    out = {"nodes": res.nodes_explored, "budget_hit": res.time_budget_hit}
    if timings:
        out["wall_ms"] = round(res.wall_ms, 3)
    return out


def _girth_json(g: Graph):
    gg = girth(g)
    return "acyclic" if gg is None else gg


def _epsilons(cfg: RunConfig, k: int) -> list[float]:
    if not cfg.epsilon:
        return [float(default_epsilon(k))]
    try:
        return [float(Fraction(e)) for e in cfg.epsilon]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad epsilon: {exc}", EXIT_INPUT) from exc


def _options(cfg: RunConfig) -> ConstructionOptions:
    return ConstructionOptions(
        alpha_node_limit=cfg.alpha_nodes,
        beta_node_limit=cfg.alpha_nodes,
        alpha_b_max_n=cfg.alpha_b_max_n,
        enforce_epsilon=not cfg.allow_any_epsilon,
    )


# ----------------------------------------------------------------- commands

def cmd_compute(cfg: RunConfig) -> tuple[dict, int]:
    g = _load_graph(cfg)
    wanted = [p.strip() for p in cfg.params.split(",") if p.strip()]
    unknown = set(wanted) - {"alpha", "rho", "alpha_b"}
    if unknown:
        raise CliError(f"unknown parameters {sorted(unknown)}", EXIT_INPUT)
    connected = is_connected(g)
    if "alpha_b" in wanted and not connected:
        raise CliError("alpha_b needs a connected graph", EXIT_DISCONNECTED)
    out: dict = {
        "schema": SCHEMA,
        "command": "compute",
        "n": g.n,
        "m": g.m,
        "graph6": serialize_graph6(g),
        "connected": connected,
        "diameter": diameter(g) if connected and g.n else None,
        "girth": _girth_json(g),
        "min_degree": min_degree(g) if g.n else None,
    }
    witnesses = {}
    solvers = {}
    budget = _budget(cfg)
    for name, solve in (("alpha", max_independent_set), ("rho", max_packing),
                        ("alpha_b", alpha_b_exact)):
        if name not in wanted:
            continue
        res = solve(g, budget)
        out[name] = res.optimum
        wit = res.witness
        witnesses[name] = list(wit.values) if isinstance(wit, Broadcast) else list(wit)
        solvers[name] = _solver_meta(res, cfg.timings)
    out["witnesses"] = witnesses
    out["solvers"] = solvers
    return out, 0


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    g = _load_graph(cfg)
    if cfg.broadcast is None:
        raise CliError("verify needs --broadcast", EXIT_INPUT)
    f = _parse_broadcast(cfg.broadcast, g.n)
    try:
        bad = validate_broadcast(g, f)
    except DisconnectedGraphError as exc:
        raise CliError(str(exc), EXIT_DISCONNECTED) from exc
    out = {
        "schema": SCHEMA,
        "command": "verify",
        "valid": not bad,
        "weight": f.weight,
        "violations": [
            {"condition": v.condition, "vertices": list(v.vertices), "detail": v.detail}
            for v in bad
        ],
    }
    return out, 0 if not bad else EXIT_INVALID


def cmd_witness(cfg: RunConfig) -> tuple[dict, int]:
    g = _load_graph(cfg)
    theorem = THEOREM_TAGS.get(cfg.theorem)
    if theorem is None:
        raise CliError(f"unknown theorem {cfg.theorem!r}", EXIT_INPUT)
    if theorem == "thm3ii" and cfg.xi is None:
        raise CliError("--theorem 3ii needs --xi", EXIT_INPUT)
    xi = None
    if cfg.xi is not None:
        try:
            xi = Fraction(cfg.xi)
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(f"bad xi: {exc}", EXIT_INPUT) from exc
    if not is_connected(g):
        raise CliError("witness construction needs a connected graph", EXIT_HYPOTHESIS,
                       {"hypothesis": "graph is disconnected"})
    out: dict = {"schema": SCHEMA, "command": "witness", "theorem": theorem}
    if cfg.broadcast is not None:
        f = _parse_broadcast(cfg.broadcast, g.n)
    else:
        res = alpha_b_exact(g, _budget(cfg))
        f = res.witness
        out["alpha_b"] = {"optimum": res.optimum, **_solver_meta(res, cfg.timings)}
    out["broadcast"] = list(f.values)
    out["weight"] = f.weight
    try:
        family = build_witness(g, f, theorem, xi)
    except HypothesisViolation as exc:
        raise CliError(f"hypothesis violated: {exc.hypothesis}", EXIT_HYPOTHESIS,
                       {"hypothesis": exc.hypothesis}) from exc
    cert = verify_witness(g, f, family)
    out["family"] = family.to_json()
    out["certificate"] = cert.to_json()
    values = [f[x] for x in f.support]
    if theorem == "thm1" and values and all(v == 2 for v in values):
        improved = strict_improvement_check(g, f.support)
        out["improvement"] = None if improved is None else list(improved)
    return out, 0 if cert.ok else EXIT_CERTIFICATE


def cmd_generate(cfg: RunConfig) -> tuple[dict, int]:
    if len(cfg.n or []) != 1 or len(cfg.k or []) != 1:
        raise CliError("generate takes exactly one --n and one --k", EXIT_INPUT)
    n, k = cfg.n[0], cfg.k[0]
    eps = _epsilons(cfg, k)
    if len(eps) != 1:
        raise CliError("generate takes one --epsilon", EXIT_INPUT)
    try:
        reports = run_with_retries(n, k, eps[0], cfg.seed, cfg.retries, _options(cfg))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    last = reports[-1]
    if cfg.graph_out and last.graph6:
        Path(cfg.graph_out).write_text(last.graph6 + "\n")
    out = {
        "schema": SCHEMA,
        "command": "generate",
        "attempts": [r.to_json() for r in reports],
    }
    return out, 0


def _sweep_one(args):
    n, k, eps, seed, options = args
    return run_construction(n, k, eps, seed, options)


def cmd_sweep(cfg: RunConfig) -> tuple[str, dict]:
    if not cfg.n or not cfg.k:
        raise CliError("sweep needs --n and --k", EXIT_INPUT)
    options = _options(cfg)
    jobs = []
    for k in cfg.k:
        for eps in _epsilons(cfg, k):
            for n in cfg.n:
                for seed in range(cfg.seed, cfg.seed + cfg.seeds):
                    jobs.append((n, k, eps, seed, options))
    try:
        if cfg.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(cfg.jobs) as pool:
                reports = list(pool.map(_sweep_one, jobs))
        else:
            reports = [_sweep_one(j) for j in jobs]
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    return sweep_csv(reports), sweep_summary(reports)


# ------------------------------------------------------------------ parsing

def _add_graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="graph file ('-' for stdin)")
    p.add_argument("--inline", help="graph text; ';' separates edge-list lines")
    p.add_argument("--named", choices=sorted(NAMED_GRAPHS), help="built-in graph")
    p.add_argument("--format", choices=["auto", "graph6", "edgelist"])
    p.add_argument("--budget-ms", type=int, dest="budget_ms")
    p.add_argument("--timings", action="store_true", default=None,
                   help="include wall-clock times (breaks byte-identical output)")


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--k", type=int, nargs="+")
    p.add_argument("--epsilon", nargs="+", help="default 0.9/(2k^2); fractions accepted")
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha-nodes", type=int, dest="alpha_nodes",
                   help="search-node budget for alpha(G*)")
    p.add_argument("--alpha-b-max-n", type=int, dest="alpha_b_max_n",
                   help="also compute alpha_b(G*) up to this many vertices")
    p.add_argument("--allow-any-epsilon", action="store_true", default=None,
                   dest="allow_any_epsilon", help="skip the epsilon < 1/k^2 check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="broadcast-indep",
        description="Exact broadcast independence, witness certificates and the star-gluing generator.",
        epilog="exit codes: 0 ok, 1 invalid broadcast, 2 bad input, 3 disconnected graph, "
               "4 hypothesis violated, 5 certificate failed",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="alpha, rho, alpha_b with witnesses")
    _add_graph_flags(p)
    p.add_argument("--params", help="comma list from alpha,rho,alpha_b")

    p = sub.add_parser("verify", help="check an independent broadcast")
    _add_graph_flags(p)
    p.add_argument("--broadcast", help="values 'f0,f1,...' or a file holding them")

    p = sub.add_parser("witness", help="build and certify an I(x) family")
    _add_graph_flags(p)
    p.add_argument("--broadcast", help="default: an optimal broadcast")
    p.add_argument("--theorem", choices=sorted(THEOREM_TAGS))
    p.add_argument("--xi", help="real in [2, 4) for --theorem 3ii, e.g. 5/2")

    p = sub.add_parser("generate", help="one run of the extremal construction")
    _add_gen_flags(p)
    p.add_argument("--retries", type=int, help="retry degenerate runs with seed+1, ...")
    p.add_argument("--graph-out", dest="graph_out", help="write G* as graph6")

    p = sub.add_parser("sweep", help="many construction runs as CSV")
    _add_gen_flags(p)
    p.add_argument("--seeds", type=int, help="number of consecutive seeds")
    p.add_argument("--jobs", type=int)
    p.add_argument("--summary", help="write the summary JSON here")

    for p in sub.choices.values():
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--config", help="RunConfig JSON to read")
        p.add_argument("--save-config", dest="save_config", help="write the RunConfig JSON")
        p.set_defaults(**{k: None for k in _DEFAULTS})
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    given = {k: getattr(args, k) for k in _DEFAULTS if getattr(args, k, None) is not None}
    values = dict(_DEFAULTS)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config: {exc}", EXIT_INPUT) from exc
        if data.get("command", args.command) != args.command:
            raise CliError(f"config is for {data['command']!r}, not {args.command!r}", EXIT_INPUT)
        unknown = set(data) - set(_DEFAULTS) - {"command", "schema"}
        if unknown:
            raise CliError(f"unknown config keys {sorted(unknown)}", EXIT_INPUT)
        for key, val in data.items():
            if key in ("command", "schema"):
                continue
            if key in given and given[key] != val:
                raise CliError(
                    f"--{key.replace('_', '-')} conflicts with config ({given[key]!r} vs {val!r})",
                    EXIT_INPUT,
                )
            values[key] = val
    values.update(given)
    return RunConfig(command=args.command, **values)


def _write(text: str, path: str | None) -> None:
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.save_config:
            Path(args.save_config).write_text(_dump({"schema": SCHEMA, **asdict(cfg)}))
        if cfg.command == "sweep":
            csv_text, summary = cmd_sweep(cfg)
            _write(csv_text, cfg.out)
            if cfg.summary:
                Path(cfg.summary).write_text(_dump(summary))
            return 0
        handler = {
            "compute": cmd_compute,
            "verify": cmd_verify,
            "witness": cmd_witness,
            "generate": cmd_generate,
        }[cfg.command]
        out, code = handler(cfg)
        _write(_dump(out), cfg.out)
        return code
    except CliError as exc:
        sys.stderr.write(_dump({"schema": SCHEMA, "error": str(exc), "exit_code": exc.code,
                                **exc.extra}))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
