"""Monte-Carlo probability that a design point satisfies the preferences."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gp
from ._backend import kernels
from .cone import DEFAULT_REL_TOL
from .errors import ContractError

DEFAULT_PROB_SAMPLES = 1000


@dataclass(frozen=True)
class ProbEstimate:
    """``count`` passing rounds out of ``num_samples``."""

    count: int
    num_samples: int

    @property
    def value(self):
        return self.count / self.num_samples

    @property
    def std_error(self):
        p = self.value
        return float(np.sqrt(p * (1.0 - p) / self.num_samples))

    def __float__(self):
        return self.value


def sample_gradient_rounds(posteriors, num_samples, rng=None):
    """Draw ``num_samples`` joint gradient samples.

    One full gradient vector per objective per round, objectives drawn
    independently. Returns an ``(R, n, m)`` array whose ``[r, j]`` row is
    the vector of objective derivatives along design axis ``j``.
    """
    rng = np.random.default_rng(rng)
    cols = [gp.sample_gradient(post, rng, size=num_samples) for post in posteriors]
    return np.stack(cols, axis=2)


def generator_stack(bases):
    if not bases:
        raise ContractError("at least one preference basis is required")
    return np.stack([b.generators for b in bases])


def pass_mask(grads, bases, rel_tol=DEFAULT_REL_TOL):
    """Per-round flags: every axis row lies in every cone's perpendicular set."""
    return kernels.sperp_mask(np.asarray(grads, dtype=float), generator_stack(bases), rel_tol)


def prob_from_posteriors(posteriors, bases, num_samples=DEFAULT_PROB_SAMPLES, rng=None):
    """Probability estimate from already computed gradient posteriors."""
    if num_samples < 1:
        raise ContractError("num_samples must be positive")
    stack = generator_stack(bases)
    grads = sample_gradient_rounds(posteriors, num_samples, rng)
    mask = kernels.sperp_mask(grads, stack, DEFAULT_REL_TOL)
    return ProbEstimate(int(np.sum(mask)), num_samples)


def prob_satisfies(models, bases, x, num_samples=DEFAULT_PROB_SAMPLES, rng=None):
    """Estimate the posterior probability that ``x`` meets every preference in ``bases``.

    Each round draws one gradient per objective from its GP gradient
    posterior and counts the round when every design-axis vector passes
    the perpendicular-cone test for every basis.
    """
    if not bases:
        raise ContractError("at least one preference basis is required")
    posteriors = [gp.gradient_posterior(model, x) for model in models]
    return prob_from_posteriors(posteriors, bases, num_samples, rng)
