"""Command-line entry point: ``mobopc run | compliance | hv | merge``.

Output files (all written by ``run`` into the output directory):

trace.csv
    One row per evaluated point, columns in this order:
    ``t, x0..x{n-1}, y0..y{m-1}, s_x, acquisition, hv, phase, config_hash, seed``.
    ``y`` is in raw objective units, ``hv`` is the hypervolume after the row,
    empty cells mean "not applicable" (initial design rows have no
    acquisition value).
pareto.json
    The non-dominated points with their per-tuple probabilities.
summary.json
    Compliance, final hypervolume, seed, config hash and the config itself.

Progress goes to stderr; stdout only carries results of ``compliance``,
``hv`` and ``merge``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np
import yaml

from ._backend import BACKEND
from .acquisition import SearchBudget
from .benchmarks import BENCHMARKS, direction_signs, normalize_direction
from .errors import ConfigError, ContractError, InvalidDataError, MobopcError
from .hypervolume import hypervolume
from .optimizer import (
    EmptyFrontWarning,
    RunConfig,
    compliance_flags,
    merge_runs,
    run,
    trace_from_rows,
)

EXIT_OK, EXIT_ABORT, EXIT_CONFIG = 0, 1, 2

_RUN_KEYS = {f for f in RunConfig.__dataclass_fields__}
_REPORT_KEYS = {"preferences", "gradients"}
_FILE_KEYS = _RUN_KEYS | {"output_dir", "report"}
_SEARCH_KEYS = set(SearchBudget.__dataclass_fields__)


def _err(msg):
    print(msg, file=sys.stderr)


def load_config_file(path):
    """Parse a YAML run file into ``(RunConfig, output_dir, report, base_dir)``.

    Unknown keys are rejected; relative paths resolve against the file's directory.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    base_dir = path.resolve().parent
    config, output_dir, report = config_from_mapping(data, base_dir)
    return config, output_dir, report, base_dir


def config_from_mapping(data, base_dir=None):
    unknown = sorted(set(data) - _FILE_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    if "objective" not in data or "iterations" not in data:
        raise ConfigError("config needs 'objective' and 'iterations'")
    fields = {k: v for k, v in data.items() if k in _RUN_KEYS}
    search = fields.get("search")
    if search is not None:
        if not isinstance(search, dict):
            raise ConfigError("'search' must be a mapping")
        bad = sorted(set(search) - _SEARCH_KEYS)
        if bad:
            raise ConfigError(f"unknown search key(s): {', '.join(bad)}")
        fields["search"] = SearchBudget(**search)
    for key in ("iterations", "seed", "initial_design", "mc_samples", "prob_samples", "gp_restarts"):
        val = fields.get(key)
        if val is not None and (isinstance(val, bool) or not isinstance(val, int)):
            raise ConfigError(f"'{key}' must be an integer")
    objective = fields["objective"]
    if not isinstance(objective, str):
        raise ConfigError("'objective' must be a benchmark name or a file path")
    if objective not in BENCHMARKS and base_dir is not None and not Path(objective).is_absolute():
        fields["objective"] = str(Path(base_dir) / objective)
    try:
        config = RunConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    output_dir = data.get("output_dir")
    if output_dir is not None:
        output_dir = Path(output_dir)
        if base_dir is not None and not output_dir.is_absolute():
            output_dir = Path(base_dir) / output_dir
    report = data.get("report") or {}
    if not isinstance(report, dict):
        raise ConfigError("'report' must be a mapping")
    bad = sorted(set(report) - _REPORT_KEYS)
    if bad:
        raise ConfigError(f"unknown report key(s): {', '.join(bad)}")
    if report.get("gradients", "analytic") not in ("analytic", "gp"):
        raise ConfigError("report.gradients must be 'analytic' or 'gp'")
    return config, output_dir, report


def config_hash(config):
    """Short digest of the config with the seed left out."""
    data = config.to_dict()
    data.pop("seed")
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"), default=list)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _num(v):
    """JSON-safe float (NaN becomes null)."""
    v = float(v)
    return None if math.isnan(v) else v


def _cell(v):
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def _dump_json(path, payload):
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n", encoding="utf-8")


def write_trace_csv(path, trace, chash):
    n = trace.x.shape[1] if trace.records else 0
    m = len(trace.directions)
    header = ["t"] + [f"x{j}" for j in range(n)] + [f"y{i}" for i in range(m)]
    header += ["s_x", "acquisition", "hv", "phase", "config_hash", "seed"]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for rec, hv in zip(trace.records, trace.hv_trajectory):
            writer.writerow(
                [rec.t] + [repr(float(v)) for v in rec.x] + [repr(float(v)) for v in rec.y]
                + [_cell(rec.s_x), _cell(rec.acquisition), repr(float(hv)), rec.phase, chash, trace.config.seed]
            )


def read_trace_csv(path):
    """Rows ``(t, phase, x, y, acquisition, s_x)`` from a trace file."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        xcols = [i for i, h in enumerate(header) if h.startswith("x") and h[1:].isdigit()]
        ycols = [i for i, h in enumerate(header) if h.startswith("y") and h[1:].isdigit()]
        col = {h: i for i, h in enumerate(header)}
        rows = []
        for line_no, row in enumerate(reader, start=1):
            try:
                rows.append((
                    int(row[col["t"]]),
                    row[col["phase"]],
                    [float(row[i]) for i in xcols],
                    [float(row[i]) for i in ycols],
                    float(row[col["acquisition"]] or "nan"),
                    float(row[col["s_x"]] or "nan"),
                ))
            except (ValueError, IndexError, KeyError) as exc:
                raise InvalidDataError(f"{path}: malformed row {line_no}: {exc}") from exc
    return rows


def _compliance_report(trace, report):
    prefs = report.get("preferences", trace.config.preferences)
    prefs = tuple(prefs or ())
    if not prefs or not trace.records:
        return {"value": None, "gradients": None, "preferences": list(prefs), "empty_front": False}, None
    source = report.get("gradients")
    if source is None:
        source = "analytic" if trace.config.objective in BENCHMARKS else "gp"
    flags = compliance_flags(trace, source, prefs)
    empty = flags.size == 0
    value = 1.0 if empty else float(np.mean(flags))
    return {"value": value, "gradients": source, "preferences": [str(p) for p in prefs], "empty_front": empty}, flags


def build_outputs(trace, report=None):
    """The pareto and summary payloads for a finished (or aborted) run."""
    report = report or {}
    chash = config_hash(trace.config)
    comp, flags = _compliance_report(trace, report)
    idx = trace.pareto_indices()
    ref = trace.reference_point_raw
    points = []
    for k, i in enumerate(idx):
        points.append({
            "t": int(trace.records[i].t),
            "x": [float(v) for v in trace.records[i].x],
            "y": [float(v) for v in trace.records[i].y],
            "probabilities": {label: float(p[i]) for label, p in trace.probabilities.items()},
            "compliant": None if flags is None else bool(flags[k]),
        })
    pareto = {
        "config_hash": chash,
        "seed": trace.config.seed,
        "objective": trace.config.objective,
        "directions": list(trace.directions),
        "reference_point": [_num(v) for v in ref],
        "hypervolume": trace.final_hv,
        "points": points,
    }
    summary = {
        "config_hash": chash,
        "seed": trace.config.seed,
        "config": json.loads(json.dumps(trace.config.to_dict(), default=list)),
        "directions": list(trace.directions),
        "reference_point": [_num(v) for v in ref],
        "final_hypervolume": trace.final_hv,
        "evaluations": len(trace.records),
        "pareto_size": int(idx.size),
        "compliance": comp,
        "aborted": trace.aborted,
        "abort_reason": trace.abort_reason,
        "failures": trace.failures,
        "backend": BACKEND,
    }
    return pareto, summary


def write_outputs(out_dir, trace, report=None):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pareto, summary = build_outputs(trace, report)
    write_trace_csv(out / "trace.csv", trace, pareto["config_hash"])
    _dump_json(out / "pareto.json", pareto)
    _dump_json(out / "summary.json", summary)
    return summary


def load_run(out_dir):
    """Rebuild a trace from a ``run`` output directory."""
    out = Path(out_dir)
    try:
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidDataError(f"cannot read {out / 'summary.json'}: {exc}") from exc
    cfg = dict(summary["config"])
    cfg["search"] = SearchBudget(**cfg["search"])
    config = RunConfig(**cfg)
    directions = summary["directions"]
    ref_raw = np.array([math.nan if v is None else v for v in summary["reference_point"]], dtype=float)
    ref = ref_raw * direction_signs(directions)
    return trace_from_rows(config, directions, read_trace_csv(out / "trace.csv"), ref)


def cmd_run(args):
    try:
        config, output_dir, report, base_dir = load_config_file(args.config)
        if args.seed is not None:
            config = config.replace(seed=args.seed)
        if args.iterations is not None:
            config = config.replace(iterations=args.iterations)
        out = Path(args.out) if args.out else output_dir or Path("mobopc-out")
        _err(f"mobopc: running {config.objective} seed={config.seed} backend={BACKEND}")
        trace = run(config, base_dir=base_dir, progress=lambda msg: _err(f"  {msg}"))
    except (ConfigError, InvalidDataError) as exc:
        _err(f"error: {exc}")
        return EXIT_CONFIG
    summary = write_outputs(out, trace, report)
    _err(f"mobopc: wrote {out}; hv={summary['final_hypervolume']:.6g} compliance={summary['compliance']['value']}")
    if trace.aborted:
        _err(f"mobopc: run aborted: {trace.abort_reason}")
        return EXIT_ABORT
    return EXIT_OK


def cmd_compliance(args):
    trace = load_run(args.run_dir)
    report = {"gradients": args.gradients} if args.gradients else {}
    if args.preferences:
        report["preferences"] = args.preferences
    comp, _ = _compliance_report(trace, report)
    if comp["empty_front"]:
        warnings.warn("no Pareto points; compliance defined as 1.0", EmptyFrontWarning, stacklevel=1)
    print(json.dumps(comp, sort_keys=True))
    return EXIT_OK


def _parse_floats(text):
    return [float(v) for v in text.replace(",", " ").split()]


def cmd_hv(args):
    path = Path(args.points)
    if path.suffix == ".json":
        data = json.loads(path.read_text(encoding="utf-8"))
        points = np.array([p["y"] for p in data["points"]], dtype=float)
        directions = data["directions"]
        z_raw = data["reference_point"]
    else:
        points = np.atleast_2d(np.loadtxt(path, delimiter=",", ndmin=2))
        directions = ["minimise"] * points.shape[1]
        z_raw = None
    if args.directions:
        directions = [normalize_direction(d) for d in args.directions.split(",")]
    if args.z is not None:
        z_raw = _parse_floats(args.z)
    if z_raw is None:
        raise ContractError("a reference point is required (--z)")
    signs = direction_signs(directions)
    if points.size == 0:
        value = 0.0
    else:
        value = hypervolume(points * signs, np.asarray(z_raw, dtype=float) * signs)
    print(repr(float(value)))
    return EXIT_OK


def cmd_merge(args):
    traces = [load_run(d) for d in args.run_dirs]
    merged = merge_runs(traces)
    payload = {
        "directions": list(merged.directions),
        "reference_point": [_num(v) for v in merged.reference_point * direction_signs(merged.directions)],
        "hypervolume": merged.hypervolume,
        "points": [
            {
                "x": [float(v) for v in merged.x[k]],
                "y": [float(v) for v in merged.y[k]],
                "source": int(merged.sources[k]),
                "probabilities": {label: float(p[k]) for label, p in merged.probabilities.items()},
            }
            for k in range(merged.x.shape[0])
        ],
        "sources": [str(Path(d)) for d in args.run_dirs],
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _dump_json(out / "merged.json", payload)
        _err(f"mobopc: wrote {out / 'merged.json'}")
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="mobopc", description="Preference-order constrained multi-objective BO.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an optimisation from a YAML config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compliance", help="recompute compliance of a finished run")
    p.add_argument("run_dir")
    p.add_argument("--gradients", choices=("analytic", "gp"))
    p.add_argument("--preferences", nargs="+", help='tuples such as "0>1"')
    p.set_defaults(func=cmd_compliance)

    p = sub.add_parser("hv", help="hypervolume of a pareto.json or a CSV of objective vectors")
    p.add_argument("points")
    p.add_argument("--z", help="reference point in raw units, comma separated")
    p.add_argument("--directions", help="comma separated min/max per objective (CSV default: all min)")
    p.set_defaults(func=cmd_hv)

    p = sub.add_parser("merge", help="merge runs made under different preference tuples")
    p.add_argument("run_dirs", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_merge)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(f"error: {exc}")
        return EXIT_CONFIG
    except (MobopcError, OSError, KeyError) as exc:
        _err(f"error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
