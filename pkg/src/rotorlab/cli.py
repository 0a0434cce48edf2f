"""Command-line experiment runner.

Exit status: 0 when every hard invariant holds, 1 when one fails, 2 for usage
or configuration errors, 3 when a requested verifier does not apply to the
graph, 4 when the pipeline itself cannot finish (budget or cap exhausted).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import shlex
import sys
from pathlib import Path

from .circulation import BipartiteGraphError, CirculationError, ShiftModulusError, delta_table
from .engine import RecurrenceNotFound
from .experiment import (
    SCHEMA,
    Artifacts,
    Caps,
    InstanceResult,
    InstanceSpec,
    SuiteSummary,
    parse_family,
    run_instance,
    run_many,
    run_suite,
    table_row,
)
from .graph import GraphError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REFUSED, EXIT_PIPELINE = 0, 1, 2, 3, 4
ENV_OUT_DIR = "ROTORLAB_OUT_DIR"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rotorlab",
        description="Simulate round-robin token dynamics and verify its recurrent structure.",
    )
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", help="graph file ('nodes N' header, one 'u v' line per edge)")
    src.add_argument("--generate", help="generator spec, e.g. 'cycle:n=7,loops=1' or 'grid:rows=3,cols=4'")
    src.add_argument("--batch", help="file with one instance per line: 'generate=SPEC k=K seed=S'")
    src.add_argument("--suite", choices=("lemmas", "idleness", "discrepancy", "baseline"))
    p.add_argument("--family", help="instance family for --suite (name or sweep spec)")
    p.add_argument("--k", type=int, default=1, help="number of tokens")
    p.add_argument("--seed", type=int, default=0, help="seed for token placement and pointers")
    p.add_argument("--max-steps", type=int, help="simulation budget (default from the stabilization bound)")
    p.add_argument("--shift-cap", type=int, default=1_000_000, help="cap on the time-shift modulus")
    p.add_argument("--state-cap", type=int, default=1_000_000, help="states kept before switching to Brent")
    p.add_argument("--verify", help="comma-separated verifier ids (e.g. middle_third,bohr_trivial,walk); default: all applicable")
    p.add_argument("--out-dir", help=f"output directory (default ${ENV_OUT_DIR} or ./rotorlab-out)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--dump-trace", action="store_true", help="write the recurrent load window as CSV")
    p.add_argument("--dump-circulation", action="store_true", help="write phi/cycles JSON and a delta summary CSV")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    return p


def read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_args(argv: list[str] | None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = read_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        known = {a.dest: a for a in parser._actions}
        defaults = {}
        for key, value in cfg.items():
            if key not in known or key in ("help", "config"):
                parser.error(f"unknown config key {key!r}")
            action = known[key]
            if action.const is True:  # store_true
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                defaults[key] = action.type(value)
            else:
                defaults[key] = value
        parser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    for name in ("workers", "shift_cap", "state_cap"):
        if getattr(args, name) < 1:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    if args.max_steps is not None and args.max_steps < 1:
        parser.error("--max-steps must be positive")
    if args.k < 1:
        parser.error("--k must be >= 1")
    sources = [x for x in (args.graph, args.generate, args.batch, args.suite) if x]
    if len(sources) != 1:
        parser.error("give exactly one of --graph, --generate, --batch, --suite")
    return args


def parse_generator(text: str) -> tuple[str, tuple[tuple[str, object], ...]]:
    kind, _, rest = text.partition(":")
    params: dict[str, object] = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"bad generator parameter {item!r}")
        value = value.strip()
        params[key.strip()] = int(value) if value.lstrip("-").isdigit() else value
    return kind.strip(), tuple(sorted(params.items()))


def spec_from(graph: str | None, generate: str | None, k: int, seed: int) -> InstanceSpec:
    if graph:
        text = Path(graph).read_text()
        return InstanceSpec("file", (("name", Path(graph).stem),), k, seed, text)
    kind, params = parse_generator(generate or "")
    return InstanceSpec(kind, params, k, seed)


def read_batch(path: str, k: int, seed: int) -> list[InstanceSpec]:
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = dict(tok.split("=", 1) for tok in shlex.split(line) if "=" in tok)
        if ("graph" in fields) == ("generate" in fields):
            raise ValueError(f"{path}:{lineno}: need exactly one of graph= or generate=")
        out.append(
            spec_from(
                fields.get("graph"),
                fields.get("generate"),
                int(fields.get("k", k)),
                int(fields.get("seed", seed)),
            )
        )
    return out


def out_dir(args) -> Path:
    path = Path(args.out_dir or os.environ.get(ENV_OUT_DIR) or "rotorlab-out")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_rows(path: Path, rows: list[dict]) -> None:
    if not rows:
        path.write_text("")
        return
    fields = list(dict.fromkeys(key for row in rows for key in row))
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def _json_default(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return str(x)


def write_report(directory: Path, result: InstanceResult, fmt: str) -> Path:
    if fmt == "json":
        path = directory / f"{result.id}.report.json"
        path.write_text(json.dumps(result.as_dict(), indent=2, default=_json_default))
    else:
        path = directory / f"{result.id}.report.csv"
        row = table_row(result)
        row.update({f"check_{k}": v for k, v in result.hard.items()})
        _write_rows(path, [row])
    return path


def dump_artifacts(directory: Path, result: InstanceResult, art: Artifacts, args) -> None:
    if args.dump_trace and art.trace is not None:
        with (directory / f"{result.id}.trace.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "arc", "load"])
            for t, row in enumerate(art.trace.loads):
                for e, load in enumerate(row):
                    writer.writerow([t, e, int(load)])
    if args.dump_circulation and art.circulation is not None:
        c = art.circulation
        doc = {
            "schema": SCHEMA,
            "phi": list(c.phi),
            "cycles": [list(x) for x in c.cycles],
            "per_cycle_tokens": list(c.per_cycle_tokens),
        }
        (directory / f"{result.id}.circulation.json").write_text(json.dumps(doc, indent=2))
        table = art.table
        if table is None:
            try:
                table = delta_table(art.graph, c, args.shift_cap)
            except ShiftModulusError:
                return
        rows = []
        for x in range(table.modulus):
            vals = [table.diagonal(e, x) for e in range(art.graph.m)]
            rows.append({"x": x, "max_delta": _json_default(max(vals)) if math.isinf(max(vals)) else max(vals)})
        _write_rows(directory / f"{result.id}.delta.csv", rows)


def _summary_line(r: InstanceResult) -> str:
    status = "ok" if r.ok else "FAIL " + ",".join(r.failures)
    idle = r.measures.get("idleness", "-")
    return f"{r.id}: m={r.m} k={r.k} p={r.period} t_rec={r.preperiod} g={r.g} idle={idle} {status}"


def write_suite(directory: Path, summary: SuiteSummary, fmt: str) -> None:
    base = directory / f"suite-{summary.name}"
    _write_rows(base.with_suffix(".csv"), summary.rows)
    if fmt == "json":
        doc = {
            "schema": SCHEMA,
            "suite": summary.name,
            "ok": summary.ok,
            "checks": {k: {"passed": a, "total": b} for k, (a, b) in summary.check_totals().items()},
            "extra": summary.extra,
            "rows": summary.rows,
            "instances": [r.as_dict() for r in summary.results],
        }
        base.with_suffix(".json").write_text(json.dumps(doc, indent=2, default=_json_default))


def exit_status(results: list[InstanceResult]) -> int:
    """Failed hard checks outrank pipeline errors; either makes the run nonzero."""
    if any(not all(r.hard.values()) for r in results):
        return EXIT_FAIL
    if any(r.error for r in results):
        return EXIT_PIPELINE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    caps = Caps(args.max_steps, args.shift_cap, args.state_cap)
    verify = args.verify.split(",") if args.verify else None
    try:
        directory = out_dir(args)
        if args.suite:
            specs = parse_family(args.family) if args.family else None
            summary = run_suite(args.suite, specs, caps, args.workers)
            write_suite(directory, summary, args.format)
            for r in summary.results:
                print(_summary_line(r))
            for row in summary.rows if args.suite == "baseline" else ():
                print(", ".join(f"{k}={v}" for k, v in row.items()))
            for name, (a, b) in summary.check_totals().items():
                print(f"{name}: {a}/{b}")
            if summary.extra:
                print(json.dumps(summary.extra, default=_json_default))
            return EXIT_OK if summary.ok else EXIT_FAIL

        if args.batch:
            specs = read_batch(args.batch, args.k, args.seed)
            results = run_many(specs, caps, verify, args.workers)
            for r in results:
                write_report(directory, r, args.format)
                print(_summary_line(r))
            return exit_status(results)

        spec = spec_from(args.graph, args.generate, args.k, args.seed)
        art = Artifacts(spec.graph())
        result = run_instance(spec, caps, verify, keep=art)
        path = write_report(directory, result, args.format)
        dump_artifacts(directory, result, art, args)
        print(_summary_line(result))
        print(f"report: {path}")
        if result.error:
            print(f"pipeline error: {result.error}", file=sys.stderr)
        return exit_status([result])
    except BipartiteGraphError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (RecurrenceNotFound, CirculationError, ShiftModulusError) as exc:
        print(f"pipeline error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    except (GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
