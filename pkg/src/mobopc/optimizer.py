"""The outer optimisation loop, run merging, and compliance scoring.

Objectives are negated at the boundary for minimisation, so everything
inside (GPs, hypervolume, acquisitions) maximises. ``RunTrace`` keeps the
raw objective values as observed.
"""

from __future__ import annotations

import dataclasses
import math
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.stats import qmc

from . import gp
from .acquisition import (
    AcquisitionContext,
    SearchBudget,
    candidate_probability,
    rank_candidates,
    rank_discrete,
)
from .benchmarks import (
    BENCHMARKS,
    TabularSchema,
    direction_signs,
    get_benchmark,
    load_tabular,
    normalize_direction,
)
from .cone import build_basis, parse_preference, satisfies_preference
from .constraint_prob import prob_satisfies
from .errors import ConfigError, ContractError, MobopcError, NumericError
from .hypervolume import ParetoArchive, dominant_indices, hypervolume

MAX_RETRIES = 3
Z_MARGIN = 0.1

# independent random streams, keyed by purpose
_DESIGN, _GP, _ACQ, _PROB, _FINAL, _RETRY = range(6)


class EmptyFrontWarning(UserWarning):
    """Compliance was requested for a run without any Pareto points."""


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run.

    ``objective`` is a benchmark name or the path of a delimited data file;
    ``bounds`` defaults to the benchmark's box. ``acquisition`` defaults to
    ``"pehi"`` when preferences are given and ``"ehi"`` otherwise.
    ``reference_point`` is given in the raw objective units.
    """

    objective: str
    iterations: int
    preferences: tuple = ()
    bounds: tuple | None = None
    directions: tuple | None = None
    acquisition: str | None = None
    initial_design: int | None = None
    seed: int = 0
    reference_point: tuple | None = None
    mc_samples: int = 500
    prob_samples: int = 1000
    constraint_mode: str = "conjunction"
    merge_split: tuple | None = None
    search: SearchBudget = field(default_factory=SearchBudget)
    gp_restarts: int = 5
    input_columns: tuple | None = None
    objective_columns: tuple | None = None
    allow_degenerate_bounds: bool = False

    def __post_init__(self):
        def tup(v):
            return None if v is None else tuple(tuple(e) if isinstance(e, (list, tuple)) else e for e in v)

        for name in ("preferences", "bounds", "directions", "reference_point", "merge_split",
                     "input_columns", "objective_columns"):
            val = getattr(self, name)
            if name == "preferences" and val is None:
                val = ()
            object.__setattr__(self, name, tup(val))
        if isinstance(self.search, dict):
            object.__setattr__(self, "search", SearchBudget(**self.search))

    @property
    def resolved_acquisition(self):
        if self.acquisition is not None:
            return self.acquisition
        return "pehi" if self.preferences else "ehi"

    def to_dict(self):
        return dataclasses.asdict(self)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class IterationRecord:
    """One evaluated point. ``t`` counts rows from 0, initial design included."""

    t: int
    phase: str
    x: np.ndarray
    y: np.ndarray
    acquisition: float
    s_x: float
    wall_time: float = 0.0

    def same_as(self, other):
        # wall time is deliberately not part of a record's identity
        return (
            self.t == other.t
            and self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and _same_float(self.acquisition, other.acquisition)
            and _same_float(self.s_x, other.s_x)
        )


def _same_float(a, b):
    return (math.isnan(a) and math.isnan(b)) or a == b


@dataclass(eq=False)
class RunTrace:
    """Result of :func:`run`.

    ``reference_point`` is in internal (maximisation) coordinates and
    ``probabilities`` maps each preference label to one probability per
    evaluated point, from models fitted on the final data.
    """

    config: RunConfig
    directions: tuple
    records: list
    reference_point: np.ndarray
    hv_trajectory: np.ndarray
    probabilities: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    aborted: bool = False
    abort_reason: str = ""

    @property
    def signs(self):
        return direction_signs(self.directions)

    @property
    def x(self):
        return np.array([r.x for r in self.records]).reshape(len(self.records), -1)

    @property
    def y(self):
        """Raw objective values, one row per record."""
        return np.array([r.y for r in self.records]).reshape(len(self.records), -1)

    @property
    def y_internal(self):
        return self.y * self.signs

    @property
    def reference_point_raw(self):
        return self.reference_point * self.signs

    @property
    def final_hv(self):
        return float(self.hv_trajectory[-1]) if len(self.hv_trajectory) else 0.0

    def pareto_indices(self):
        """Indices of the non-dominated evaluated points."""
        if not self.records:
            return np.zeros(0, dtype=int)
        return dominant_indices(self.y_internal)

    def __eq__(self, other):
        if not isinstance(other, RunTrace):
            return NotImplemented
        return (
            self.config == other.config
            and self.directions == other.directions
            and len(self.records) == len(other.records)
            and all(a.same_as(b) for a, b in zip(self.records, other.records))
            and np.array_equal(self.reference_point, other.reference_point)
            and np.array_equal(self.hv_trajectory, other.hv_trajectory)
            and self.probabilities.keys() == other.probabilities.keys()
            and all(np.array_equal(v, other.probabilities[k]) for k, v in self.probabilities.items())
            and self.aborted == other.aborted
        )


@dataclass(eq=False)
class _Problem:
    name: str
    n: int
    bounds: np.ndarray
    evaluate: Callable | None
    gradient: Callable | None
    directions: tuple | None
    candidates: np.ndarray | None = None
    candidate_outputs: np.ndarray | None = None

    @property
    def discrete(self):
        return self.candidates is not None


def _stream(seed, *keys):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=keys))


def _resolve_problem(config, objective, base_dir=None):
    if objective is not None:
        if config.bounds is None:
            raise ConfigError("bounds are required for a user-supplied objective")
        bounds = np.asarray(config.bounds, dtype=float)
        return _Problem(config.objective, bounds.shape[0], bounds, objective, None, config.directions)
    if config.objective in BENCHMARKS:
        spec = get_benchmark(config.objective)
        bounds = spec.bounds if config.bounds is None else np.asarray(config.bounds, dtype=float)
        directions = config.directions or spec.directions
        return _Problem(spec.name, spec.n, bounds, spec.evaluate, spec.gradient, directions)
    path = Path(config.objective)
    if base_dir is not None and not path.is_absolute():
        path = Path(base_dir) / path
    if not path.exists():
        available = ", ".join(sorted(BENCHMARKS))
        raise ConfigError(f"objective {config.objective!r} is neither a benchmark ({available}) nor a file")
    if config.input_columns is None or config.objective_columns is None:
        raise ConfigError("tabular objectives need input_columns and objective_columns")
    schema = TabularSchema(config.input_columns, config.objective_columns, config.directions)
    data = load_tabular(path, schema)
    return _Problem(
        str(config.objective), data.inputs.shape[1], data.bounds, None, None, data.directions,
        candidates=data.inputs, candidate_outputs=data.objectives,
    )


def validate_config(config, objective=None, base_dir=None):
    """Check a config and resolve its objective; raises :class:`ConfigError`."""
    if config.iterations < 1:
        raise ConfigError("iterations must be at least 1")
    if config.initial_design is not None and config.initial_design < 2:
        raise ConfigError("initial_design must be at least 2")
    if config.mc_samples < 1 or config.prob_samples < 1:
        raise ConfigError("sample counts must be positive")
    if config.gp_restarts < 1:
        raise ConfigError("gp_restarts must be at least 1")
    if config.constraint_mode not in ("conjunction", "merge"):
        raise ConfigError(f"unknown constraint_mode {config.constraint_mode!r}")
    if config.resolved_acquisition not in ("ehi", "pehi"):
        raise ConfigError(f"unknown acquisition {config.acquisition!r}")
    if config.resolved_acquisition == "pehi" and not config.preferences:
        raise ConfigError("pehi needs at least one preference tuple")
    if config.search.screen_count < 1:
        raise ConfigError("search.screen_count must be at least 1")
    try:
        problem = _resolve_problem(config, objective, base_dir)
    except ContractError as exc:
        raise ConfigError(str(exc)) from exc
    bounds = np.asarray(problem.bounds, dtype=float)
    if bounds.ndim != 2 or bounds.shape[1] != 2 or not np.all(np.isfinite(bounds)):
        raise ConfigError("bounds must be a list of finite [low, high] pairs")
    if np.any(bounds[:, 1] < bounds[:, 0]):
        raise ConfigError("every bound needs low <= high")
    if np.any(bounds[:, 1] == bounds[:, 0]) and not config.allow_degenerate_bounds:
        raise ConfigError("degenerate bounds; set allow_degenerate_bounds to permit them")
    directions = problem.directions
    if directions is not None:
        try:
            directions = tuple(normalize_direction(d) for d in directions)
        except ContractError as exc:
            raise ConfigError(str(exc)) from exc
        problem.directions = directions
        m = len(directions)
        try:
            _bases(config.preferences, m)
        except ContractError as exc:
            raise ConfigError(str(exc)) from exc
        if config.reference_point is not None and len(config.reference_point) != m:
            raise ConfigError("reference_point needs one value per objective")
    if problem.discrete:
        needed = _initial_size(config, problem.n) + config.iterations
        if needed > problem.candidates.shape[0]:
            raise ConfigError(f"dataset has {problem.candidates.shape[0]} rows, run needs {needed}")
    if config.constraint_mode == "merge":
        if len(config.preferences) < 2:
            raise ConfigError("merge mode needs at least two preference tuples")
        if config.merge_split is not None and (
            len(config.merge_split) != len(config.preferences) or any(w < 0 for w in config.merge_split)
            or sum(config.merge_split) <= 0
        ):
            raise ConfigError("merge_split needs one non-negative weight per preference tuple")
    return problem


def _bases(preferences, m):
    return [build_basis(parse_preference(p, m)) for p in preferences]


def _label(basis):
    return str(basis.preference)


def _initial_size(config, n):
    return config.initial_design if config.initial_design is not None else max(5, 2 * n)


def _evaluate(problem, x):
    """Raw objective vector at ``x``; any exception or non-finite output is a failure."""
    y = np.asarray(problem.evaluate(np.array(x, dtype=float)), dtype=float).reshape(-1)
    if not np.all(np.isfinite(y)):
        raise ValueError(f"objective returned non-finite values {y}")
    if problem.directions is not None and y.shape[0] != len(problem.directions):
        raise ValueError(f"objective returned {y.shape[0]} values, expected {len(problem.directions)}")
    return y


def _split_iterations(total, weights):
    weights = np.asarray(weights, dtype=float)
    raw = total * weights / weights.sum()
    counts = np.floor(raw).astype(int)
    # hand out the remainder by largest fractional part, earliest first
    for i in np.argsort(-(raw - counts), kind="stable")[: total - counts.sum()]:
        counts[i] += 1
    return [int(c) for c in counts]


def _reference_point(config, y_internal, signs):
    if config.reference_point is not None:
        return np.asarray(config.reference_point, dtype=float) * signs
    lo = y_internal.min(axis=0)
    span = y_internal.max(axis=0) - lo
    margin = np.where(span > 0, Z_MARGIN * span, 1.0)
    return lo - margin


def _fit_models(x, y_internal, previous, restarts, rng):
    models = []
    for i in range(y_internal.shape[1]):
        warm = previous[i].kernel if previous else None
        models.append(gp.fit(x, y_internal[:, i], restarts=restarts, rng=rng, warm_start=warm))
    return models


def _archive_probs(models, bases, x, prob_samples, rng):
    return np.array([prob_satisfies(models, bases, xi, prob_samples, rng).value for xi in x])


class _Branch:
    """Mutable state of one optimisation sequence."""

    def __init__(self, problem, signs, z):
        self.problem = problem
        self.signs = signs
        self.z = z
        self.x = []
        self.y = []
        self.used = set()
        self.models = None

    def add(self, x, y, index=None):
        self.x.append(np.asarray(x, dtype=float))
        self.y.append(np.asarray(y, dtype=float))
        if index is not None:
            self.used.add(index)

    def arrays(self):
        x = np.array(self.x).reshape(len(self.x), -1)
        y = np.array(self.y).reshape(len(self.y), -1)
        return x, y * self.signs


def _step(branch, config, bases, acquisition, t, seed):
    """Fit, maximise, evaluate. Returns ``(record, failures)``; record is None on abort."""
    problem = branch.problem
    x, y_int = branch.arrays()
    branch.models = _fit_models(x, y_int, branch.models, config.gp_restarts, _stream(seed, _GP, t))
    probs = None
    if bases:
        probs = _archive_probs(branch.models, bases, x, config.prob_samples, _stream(seed, _PROB, t))
    archive = ParetoArchive(x, y_int, branch.z, probs)
    ctx = AcquisitionContext(branch.models, archive, bases, config.mc_samples, config.prob_samples)
    acq_state = _stream(seed, _ACQ, t).integers(2**63)

    if problem.discrete:
        free = np.array([i for i in range(problem.candidates.shape[0]) if i not in branch.used])
        ranked = rank_discrete(ctx, acquisition, problem.candidates[free], acq_state)
        ranked = [(int(free[i]), problem.candidates[free[i]], v) for i, v in ranked]
    else:
        ranked = [(None, xc, v) for xc, v in rank_candidates(ctx, acquisition, problem.bounds, config.search, acq_state)]

    failures = []
    tried = []
    for index, xc, value in ranked:
        if any(np.array_equal(xc, prev) for prev in tried):
            continue
        tried.append(xc)
        try:
            y = problem.candidate_outputs[index] if problem.discrete else _evaluate(problem, xc)
        except Exception as exc:  # objective code is foreign; any failure is retried
            failures.append({"t": t, "x": [float(v) for v in xc], "error": f"{type(exc).__name__}: {exc}"})
            if len(failures) > MAX_RETRIES:
                return None, failures
            continue
        s_x = float("nan")
        if bases:
            s_x = candidate_probability(ctx, xc, np.random.default_rng(acq_state).spawn(2)[1])
        branch.add(xc, y, index)
        return (xc, y, float(value), s_x), failures
    return None, failures


def _initial_design(problem, config, seed, count):
    rng = _stream(seed, _DESIGN)
    if problem.discrete:
        rows = rng.choice(problem.candidates.shape[0], size=count, replace=False)
        return [(int(i), problem.candidates[i]) for i in sorted(rows)]
    lo, hi = problem.bounds[:, 0], problem.bounds[:, 1]
    unit = qmc.LatinHypercube(d=problem.n, rng=rng).random(count)
    return [(None, lo + u * (hi - lo)) for u in unit]


def run(config, objective=None, *, base_dir=None, progress=None):
    """Run the optimisation loop described by ``config``.

    Parameters
    ----------
    config : RunConfig
    objective : callable, optional
        Replaces the named objective; maps an ``(n,)`` array to raw objective values.
    base_dir : path, optional
        Directory that relative dataset paths are resolved against.
    progress : callable, optional
        Receives one short status string per evaluated point.

    Returns
    -------
    RunTrace
        Complete unless ``aborted`` is set, in which case it holds every
        point evaluated before the abort.
    """
    problem = validate_config(config, objective, base_dir)
    seed = int(config.seed)
    say = progress or (lambda msg: None)
    acquisition = config.resolved_acquisition

    # initial design
    records = []
    failures = []
    design = _initial_design(problem, config, seed, _initial_size(config, problem.n))
    retry_rng = _stream(seed, _RETRY)
    init_x, init_y, init_idx = [], [], []
    for index, xd in design:
        attempts = 0
        while True:
            start = time.perf_counter()
            try:
                y = problem.candidate_outputs[index] if problem.discrete else _evaluate(problem, xd)
                break
            except Exception as exc:
                failures.append({"t": len(init_x), "x": [float(v) for v in xd], "error": f"{type(exc).__name__}: {exc}"})
                attempts += 1
                if attempts > MAX_RETRIES:
                    return _abort_early(config, problem, init_x, init_y, failures, "initial design evaluation failed")
                lo, hi = problem.bounds[:, 0], problem.bounds[:, 1]
                xd = lo + retry_rng.random(problem.n) * (hi - lo)
        if problem.directions is None:
            problem.directions = ("minimise",) * len(y)
            _bases(config.preferences, len(y))
        init_x.append(np.asarray(xd, dtype=float))
        init_y.append(np.asarray(y, dtype=float))
        init_idx.append(index)
        records.append(IterationRecord(len(records), "initial", init_x[-1], init_y[-1], math.nan, math.nan,
                                       time.perf_counter() - start))
        say(f"initial {len(records)}/{len(design)}")

    directions = tuple(problem.directions)
    signs = direction_signs(directions)
    m = len(directions)
    bases = _bases(config.preferences, m)
    z = _reference_point(config, np.array(init_y) * signs, signs)

    if config.constraint_mode == "merge":
        weights = config.merge_split or (1.0,) * len(bases)
        plan = [(f"pref:{_label(b)}", [b], k) for b, k in zip(bases, _split_iterations(config.iterations, weights))]
    else:
        plan = [(acquisition, bases, config.iterations)]

    aborted, reason = False, ""
    for branch_no, (phase, branch_bases, count) in enumerate(plan):
        branch = _Branch(problem, signs, z)
        for xi, yi, idx in zip(init_x, init_y, init_idx):
            branch.add(xi, yi, idx)
        branch_seed = seed if len(plan) == 1 else int(np.random.SeedSequence(seed, spawn_key=(99, branch_no)).generate_state(1)[0])
        branch_acq = acquisition if branch_bases or acquisition == "ehi" else "ehi"
        for t in range(count):
            start = time.perf_counter()
            try:
                outcome, fails = _step(branch, config, branch_bases, branch_acq, t, branch_seed)
            except NumericError as exc:
                outcome, fails = None, []
                reason = f"numerical failure: {exc}"
            failures.extend(fails)
            if outcome is None:
                aborted = True
                reason = reason or f"objective failed {len(fails)} times in a row"
                break
            xc, y, value, s_x = outcome
            records.append(IterationRecord(len(records), phase, np.asarray(xc, float), np.asarray(y, float),
                                           value, s_x, time.perf_counter() - start))
            say(f"{phase} {t + 1}/{count} acq={value:.4g} s_x={s_x:.3f}")
        if aborted:
            break

    trace = RunTrace(config, directions, records, z, np.zeros(0), {}, failures, aborted, reason)
    trace.hv_trajectory = _hv_trajectory(trace.y_internal, z)
    if bases and len(records) >= 2:
        trace.probabilities = final_probabilities(trace, bases)
    return trace


def _abort_early(config, problem, xs, ys, failures, reason):
    directions = tuple(problem.directions or ())
    records = [IterationRecord(i, "initial", x, y, math.nan, math.nan) for i, (x, y) in enumerate(zip(xs, ys))]
    m = len(directions)
    trace = RunTrace(config, directions, records, np.full(m, np.nan), np.zeros(0), {}, failures, True, reason)
    return trace


def _hv_trajectory(y_internal, z):
    return np.array([hypervolume(y_internal[: k + 1], z) for k in range(y_internal.shape[0])])


def final_probabilities(trace, bases=None):
    """Per preference label, the probability of every evaluated point under models fitted to all of them."""
    m = len(trace.directions)
    bases = bases if bases is not None else _bases(trace.config.preferences, m)
    seed = int(trace.config.seed)
    models = _fit_models(trace.x, trace.y_internal, None, trace.config.gp_restarts, _stream(seed, _FINAL, 0))
    out = {}
    for k, basis in enumerate(bases):
        out[_label(basis)] = _archive_probs(models, [basis], trace.x, trace.config.prob_samples,
                                            _stream(seed, _FINAL, 1, k))
    return out


@dataclass(eq=False)
class MergedArchive:
    """Union of several runs reduced to its non-dominated subset."""

    x: np.ndarray
    y: np.ndarray
    directions: tuple
    reference_point: np.ndarray
    probabilities: dict
    sources: list

    @property
    def hypervolume(self):
        return hypervolume(self.y * direction_signs(self.directions), self.reference_point)


def merge_runs(traces, *, seed=None):
    """Merge runs made under different preference tuples.

    Every evaluated point of every run is pooled (exact duplicates kept
    once), the non-dominated subset is taken, and each remaining point gets
    a probability under each run's preference tuples from GPs fitted on the
    pooled data. The reference point is the componentwise minimum of the
    runs' reference points.
    """
    traces = list(traces)
    if not traces:
        raise ContractError("nothing to merge")
    first = traces[0]
    for tr in traces[1:]:
        if tr.config.objective != first.config.objective or tr.directions != first.directions:
            raise ContractError("merged runs must share objective and directions")
        if tr.x.shape[1] != first.x.shape[1]:
            raise ContractError("merged runs must share the design space")
    xs, ys, src = [], [], []
    seen = set()
    for k, tr in enumerate(traces):
        for x, y in zip(tr.x, tr.y):
            key = (x.tobytes(), y.tobytes())
            if key in seen:
                continue
            seen.add(key)
            xs.append(x)
            ys.append(y)
            src.append(k)
    x = np.array(xs)
    y = np.array(ys)
    signs = direction_signs(first.directions)
    keep = dominant_indices(y * signs)
    z = np.min(np.array([tr.reference_point for tr in traces]), axis=0)

    labels = {}
    for tr in traces:
        for pref in tr.config.preferences:
            basis = build_basis(parse_preference(pref, len(first.directions)))
            labels.setdefault(_label(basis), basis)
    probs = {}
    if labels and x.shape[0] >= 2:
        seed = int(first.config.seed if seed is None else seed)
        models = _fit_models(x, y * signs, None, first.config.gp_restarts, _stream(seed, _FINAL, 2))
        for k, (label, basis) in enumerate(sorted(labels.items())):
            probs[label] = _archive_probs(models, [basis], x[keep], first.config.prob_samples,
                                          _stream(seed, _FINAL, 3, k))
    return MergedArchive(x[keep], y[keep], first.directions, z, probs, [src[i] for i in keep])


def compliance_flags(trace, gradient_source="analytic", preferences=None):
    """Per Pareto point, whether its gradients meet every preference tuple.

    ``analytic`` uses the benchmark's closed-form gradients; ``gp`` uses the
    gradient posterior means of GPs fitted to all evaluated points.
    """
    prefs = trace.config.preferences if preferences is None else preferences
    m = len(trace.directions)
    bases = _bases(prefs, m)
    idx = trace.pareto_indices()
    if not bases or idx.size == 0:
        return np.ones(idx.size, dtype=bool)
    signs = trace.signs
    points = trace.x[idx]
    if gradient_source == "analytic":
        if trace.config.objective not in BENCHMARKS:
            raise ContractError("analytic gradients are only available for the built-in benchmarks")
        grad_fn = get_benchmark(trace.config.objective).gradient
        grads = [grad_fn(p) * signs for p in points]
    elif gradient_source == "gp":
        models = _fit_models(trace.x, trace.y_internal, None, trace.config.gp_restarts,
                             _stream(int(trace.config.seed), _FINAL, 4))
        grads = [np.column_stack([gp.gradient_posterior(mod, p).mean for mod in models]) for p in points]
    else:
        raise ContractError(f"unknown gradient source {gradient_source!r}")
    return np.array([all(satisfies_preference(g, b) for b in bases) for g in grads], dtype=bool)


def compliance(trace, gradient_source="analytic", preferences=None):
    """Fraction of Pareto points whose gradients meet the preference tuples.

    An empty front scores 1.0 and raises :class:`EmptyFrontWarning`.
    """
    flags = compliance_flags(trace, gradient_source, preferences)
    if flags.size == 0:
        warnings.warn("no Pareto points; compliance defined as 1.0", EmptyFrontWarning, stacklevel=2)
        return 1.0
    return float(np.mean(flags))


def trace_from_rows(config, directions, rows, reference_point):
    """Rebuild a :class:`RunTrace` from stored rows ``(t, phase, x, y, acquisition, s_x)``."""
    records = [IterationRecord(int(t), phase, np.asarray(x, float), np.asarray(y, float), float(a), float(s))
               for t, phase, x, y, a, s in rows]
    trace = RunTrace(config, tuple(directions), records, np.asarray(reference_point, float), np.zeros(0))
    trace.hv_trajectory = _hv_trajectory(trace.y_internal, trace.reference_point) if records else np.zeros(0)
    return trace


__all__ = [
    "EmptyFrontWarning",
    "IterationRecord",
    "MergedArchive",
    "MobopcError",
    "RunConfig",
    "RunTrace",
    "compliance",
    "compliance_flags",
    "final_probabilities",
    "merge_runs",
    "run",
    "trace_from_rows",
    "validate_config",
]
