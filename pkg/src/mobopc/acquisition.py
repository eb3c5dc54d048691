"""Expected hypervolume improvement, plain and preference weighted.

Both acquisitions are Monte-Carlo estimates over the independent GP
posteriors of the objectives. The preference-weighted variant multiplies
the candidate's own constraint probability onto a cell sum in which every
cell is discounted by ``prod(1 - s_j)`` over archive points already
covering it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.stats import qmc

from . import gp
from .constraint_prob import DEFAULT_PROB_SAMPLES, prob_satisfies
from .errors import ContractError
from .hypervolume import ImprovementTables, ParetoArchive, build_cells

DEFAULT_MC_SAMPLES = 500


@dataclass(frozen=True)
class SearchBudget:
    """Inner maximiser budget: LHS screening then pattern-search refinements."""

    screen_count: int = 200
    local_restarts: int = 3
    local_evals: int = 50
    initial_step: float = 0.1


@dataclass(eq=False)
class AcquisitionContext:
    """Everything an acquisition evaluation needs, fixed for one BO iteration.

    ``archive.probs`` caches the constraint probability of each observed
    point. ``sx_override`` pins the candidate probability instead of
    estimating it (used for checks and ablations).
    """

    models: list
    archive: ParetoArchive
    bases: list = field(default_factory=list)
    mc_samples: int = DEFAULT_MC_SAMPLES
    prob_samples: int = DEFAULT_PROB_SAMPLES
    sx_override: float | None = None

    def __post_init__(self):
        if self.mc_samples < 1 or self.prob_samples < 1:
            raise ContractError("sample counts must be positive")

    @property
    def num_objectives(self):
        return len(self.models)

    @cached_property
    def improvement_tables(self):
        return ImprovementTables(self.archive.y, np.zeros(len(self.archive)), self.archive.z)

    @cached_property
    def weighted_tables(self):
        if self.archive.probs is None:
            raise ContractError("archive probabilities are required for pehi")
        return ImprovementTables(self.archive.y, 1.0 - self.archive.probs, self.archive.z)

    def sample_outcomes(self, x, rng):
        """``mc_samples`` draws of the objective vector at ``x``."""
        means = np.empty(self.num_objectives)
        sds = np.empty(self.num_objectives)
        for i, model in enumerate(self.models):
            mu, var = gp.posterior(model, x)
            means[i] = mu
            sds[i] = np.sqrt(var)
        eps = rng.standard_normal((self.mc_samples, self.num_objectives))
        return means + eps * sds


def _streams(rng_state):
    """Independent (outcome, probability) substreams derived from one state.

    An integer seed always yields the same pair; a Generator advances.
    """
    outcome, prob = np.random.default_rng(rng_state).spawn(2)
    return outcome, prob


def ehi_rounds(ctx, x, rng_state=None):
    """Per-round hypervolume improvements; their mean is :func:`ehi`."""
    outcome_rng, _ = _streams(rng_state)
    ys = ctx.sample_outcomes(x, outcome_rng)
    return ctx.improvement_tables(ys)


def ehi(ctx, x, rng_state=None):
    """Monte-Carlo expected hypervolume improvement at ``x``."""
    return float(np.mean(ehi_rounds(ctx, x, rng_state)))


def candidate_probability(ctx, x, rng):
    if ctx.sx_override is not None:
        return float(ctx.sx_override)
    if not ctx.bases:
        raise ContractError("pehi needs at least one preference basis")
    return prob_satisfies(ctx.models, ctx.bases, x, ctx.prob_samples, rng).value


def pehi_rounds(ctx, x, rng_state=None):
    """Candidate probability and the per-round weighted cell sums (before scaling)."""
    outcome_rng, prob_rng = _streams(rng_state)
    s_x = candidate_probability(ctx, x, prob_rng)
    if s_x == 0.0:
        return 0.0, np.zeros(ctx.mc_samples)
    ys = ctx.sample_outcomes(x, outcome_rng)
    return s_x, ctx.weighted_tables(ys)


def pehi(ctx, x, rng_state=None):
    """Preference-weighted expected hypervolume improvement at ``x``."""
    s_x, rounds = pehi_rounds(ctx, x, rng_state)
    return float(s_x * np.mean(rounds))


def pehi_cellwise(ctx, x, rng_state=None):
    """Same estimate as :func:`pehi`, rebuilding the cell grid every round.

    Slow; kept as an independent check on the table-based evaluation.
    """
    outcome_rng, prob_rng = _streams(rng_state)
    s_x = candidate_probability(ctx, x, prob_rng)
    if s_x == 0.0:
        return 0.0
    ys = ctx.sample_outcomes(x, outcome_rng)
    arch = ctx.archive
    probs = arch.probs
    total = 0.0
    for y in ys:
        grid = build_cells(np.vstack([arch.y, y]), arch.z)
        if grid.points.shape[0] == 0 or not np.all(y > arch.z):
            continue
        upper = grid.upper_corners
        vol = grid.volumes.reshape(-1)
        under = np.all(y >= upper, axis=1)
        acc = 0.0
        for k in np.flatnonzero(under):
            covering = np.all(arch.y >= upper[k], axis=1)
            acc += vol[k] * np.prod(1.0 - probs[covering])
        total += s_x * acc
    return total / ctx.mc_samples


ACQUISITIONS = {"ehi": ehi, "pehi": pehi}


def _resolve(acquisition, ctx, rng_state):
    if callable(acquisition):
        return lambda x: float(acquisition(ctx, x, rng_state))
    try:
        fn = ACQUISITIONS[acquisition]
    except KeyError:
        raise ContractError(f"unknown acquisition {acquisition!r}") from None
    return lambda x: fn(ctx, x, rng_state)


def _pattern_search(fn, x0, f0, lo, hi, budget, step0):
    """Coordinate-wise compass search, maximising ``fn`` inside ``[lo, hi]``."""
    x, fx = x0.copy(), f0
    width = hi - lo
    step = step0
    evals = 0
    while evals < budget and step > 1e-9:
        improved = False
        for d in range(len(x)):
            if width[d] == 0:
                continue
            for sign in (1.0, -1.0):
                if evals >= budget:
                    break
                trial = x.copy()
                trial[d] = np.clip(x[d] + sign * step * width[d], lo[d], hi[d])
                if trial[d] == x[d]:
                    continue
                ft = fn(trial)
                evals += 1
                if ft > fx:
                    x, fx, improved = trial, ft, True
                    break
        if not improved:
            step *= 0.5
    return x, fx


def rank_candidates(ctx, acquisition, bounds, search=None, rng_state=None):
    """Screen and refine, returning ``[(x, value), ...]`` best first.

    The acquisition is evaluated with the same random stream at every
    point (common random numbers), so the surface being maximised is
    deterministic and comparisons between points are not blurred by
    Monte-Carlo noise.
    """
    search = search or SearchBudget()
    if search.screen_count < 1 and search.local_restarts < 1:
        raise ContractError("search budget must allow at least one evaluation")
    bounds = np.atleast_2d(np.asarray(bounds, dtype=float))
    lo, hi = bounds[:, 0], bounds[:, 1]
    design_seed, eval_seed = (int(s) for s in np.random.default_rng(rng_state).integers(2**63, size=2))
    fn = _resolve(acquisition, ctx, eval_seed)

    count = max(search.screen_count, 1)
    unit = qmc.LatinHypercube(d=len(lo), rng=np.random.default_rng(design_seed)).random(count)
    points = lo + unit * (hi - lo)
    values = np.array([fn(p) for p in points])
    order = np.argsort(-values, kind="stable")
    results = [(points[i], float(values[i])) for i in order]

    refined = []
    for i in order[: search.local_restarts]:
        x, fx = _pattern_search(fn, points[i], values[i], lo, hi, search.local_evals, search.initial_step)
        refined.append((x, float(fx)))
    merged = refined + results
    merged.sort(key=lambda item: -item[1])
    return merged


def maximize_acquisition(ctx, acquisition, bounds, search=None, rng_state=None):
    """Best point found by :func:`rank_candidates` as ``(x, value)``."""
    return rank_candidates(ctx, acquisition, bounds, search, rng_state)[0]


def rank_discrete(ctx, acquisition, candidates, rng_state=None):
    """Evaluate the acquisition at each candidate row; ``[(index, value), ...]`` best first."""
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    if candidates.shape[0] == 0:
        raise ContractError("no candidates left to evaluate")
    eval_seed = int(np.random.default_rng(rng_state).integers(2**63))
    fn = _resolve(acquisition, ctx, eval_seed)
    values = np.array([fn(c) for c in candidates])
    order = np.argsort(-values, kind="stable")
    return [(int(i), float(values[i])) for i in order]
