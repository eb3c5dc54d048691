"""Gaussian-process regression with gradient posteriors.

One independent GP per objective, squared-exponential kernel with a
lengthscale per design dimension. Besides the usual predictive mean and
variance, a fitted model exposes the joint Gaussian posterior of the
gradient of the latent function at a point, which is what the
preference-constraint probability is built on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize

from .errors import InvalidDataError, NumericError

JITTER_START = 1e-10
JITTER_MAX = 1e-4
VARIANCE_CLIP = 1e-9


@dataclass(frozen=True)
class KernelSpec:
    """Squared-exponential ARD kernel hyperparameters."""

    signal_variance: float
    lengthscales: np.ndarray
    noise_variance: float = 0.0

    def __post_init__(self):
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=float))
        object.__setattr__(self, "lengthscales", ls)
        object.__setattr__(self, "signal_variance", float(self.signal_variance))
        object.__setattr__(self, "noise_variance", float(self.noise_variance))
        if not np.all(ls > 0) or not np.all(np.isfinite(ls)):
            raise InvalidDataError("lengthscales must be positive and finite")
        if not self.signal_variance > 0:
            raise InvalidDataError("signal_variance must be positive")
        if not self.noise_variance >= 0:
            raise InvalidDataError("noise_variance must be non-negative")

    def __eq__(self, other):
        if not isinstance(other, KernelSpec):
            return NotImplemented
        return (
            self.signal_variance == other.signal_variance
            and self.noise_variance == other.noise_variance
            and np.array_equal(self.lengthscales, other.lengthscales)
        )

    __hash__ = None

    @property
    def dim(self):
        return self.lengthscales.shape[0]

    def __call__(self, xa, xb):
        """Covariance matrix between the rows of ``xa`` and ``xb``."""
        xa = np.atleast_2d(xa) / self.lengthscales
        xb = np.atleast_2d(xb) / self.lengthscales
        sq = (
            np.sum(xa * xa, axis=1)[:, None]
            + np.sum(xb * xb, axis=1)[None, :]
            - 2.0 * xa @ xb.T
        )
        return self.signal_variance * np.exp(-0.5 * np.maximum(sq, 0.0))

    def to_log_params(self):
        return np.concatenate(
            [[np.log(self.signal_variance)], np.log(self.lengthscales), [np.log(self.noise_variance)]]
        )

    @classmethod
    def from_log_params(cls, theta):
        theta = np.asarray(theta, dtype=float)
        return cls(np.exp(theta[0]), np.exp(theta[1:-1]), np.exp(theta[-1]))


@dataclass(frozen=True)
class HyperBounds:
    """Box for hyperparameter search, in natural (not log) units."""

    signal_variance: tuple[float, float]
    lengthscales: np.ndarray  # (n, 2)
    noise_variance: tuple[float, float]

    def log_box(self):
        ls = np.asarray(self.lengthscales, dtype=float)
        lo = np.concatenate([[self.signal_variance[0]], ls[:, 0], [self.noise_variance[0]]])
        hi = np.concatenate([[self.signal_variance[1]], ls[:, 1], [self.noise_variance[1]]])
        return np.log(lo), np.log(hi)


def default_bounds(inputs, targets, span=None):
    """Hyperparameter box scaled to the data.

    Lengthscales range over ``[0.01, 10]`` times the per-dimension span
    (taken from ``span`` when given, else from the inputs); variances are
    scaled by the empirical target variance.
    """
    inputs = np.atleast_2d(inputs)
    if span is None:
        span = np.ptp(inputs, axis=0)
    span = np.where(np.asarray(span, dtype=float) > 0, span, 1.0)
    var = float(np.var(targets))
    if not var > 1e-12:
        var = 1.0
    return HyperBounds(
        signal_variance=(1e-2 * var, 1e2 * var),
        lengthscales=np.column_stack([1e-2 * span, 1e1 * span]),
        noise_variance=(1e-10 * var, 1e-2 * var),
    )


def _factorize(matrix, scale):
    """Cholesky of ``matrix + jitter*I`` with the escalating jitter policy."""
    eye = np.eye(matrix.shape[0])
    jitter = JITTER_START * scale
    while jitter <= JITTER_MAX * scale * (1 + 1e-9):
        try:
            return cholesky(matrix + jitter * eye, lower=True), jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise NumericError("Cholesky factorisation failed at maximum jitter")


@dataclass(frozen=True, eq=False)
class GpModel:
    """A GP conditioned on training data.

    ``chol_factor`` is the lower Cholesky factor of
    ``K + noise*I + jitter*I`` and ``alpha`` solves that system against the
    (offset-removed) targets. Treat instances as immutable.
    """

    kernel: KernelSpec
    train_inputs: np.ndarray
    train_targets: np.ndarray
    chol_factor: np.ndarray
    alpha: np.ndarray
    jitter: float
    mean_offset: float = 0.0
    log_likelihood: float = field(default=float("nan"))

    @property
    def dim(self):
        return self.train_inputs.shape[1]


def _check_finite(name, arr):
    if not np.all(np.isfinite(arr)):
        raise InvalidDataError(f"{name} contains non-finite values")


def condition(kernel, inputs, targets, mean_offset=0.0):
    """Build a :class:`GpModel` for fixed hyperparameters."""
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.asarray(targets, dtype=float).reshape(-1)
    _check_finite("inputs", inputs)
    _check_finite("targets", targets)
    if inputs.shape[0] != targets.shape[0]:
        raise InvalidDataError("inputs and targets disagree in length")
    if inputs.shape[1] != kernel.dim:
        raise InvalidDataError("kernel dimension does not match inputs")
    gram = kernel(inputs, inputs) + kernel.noise_variance * np.eye(len(targets))
    chol, jitter = _factorize(gram, kernel.signal_variance)
    resid = targets - mean_offset
    alpha = cho_solve((chol, True), resid)
    lml = (
        -0.5 * resid @ alpha
        - np.sum(np.log(np.diag(chol)))
        - 0.5 * len(targets) * np.log(2 * np.pi)
    )
    return GpModel(kernel, inputs, targets, chol, alpha, jitter, float(mean_offset), float(lml))


def _neg_lml(theta, inputs, resid, sqdist):
    """Negative log marginal likelihood and its gradient in log-parameter space."""
    sv = np.exp(theta[0])
    ls = np.exp(theta[1:-1])
    noise = np.exp(theta[-1])
    n_pts = len(resid)
    scaled = sqdist / (ls * ls)
    kf = sv * np.exp(-0.5 * np.sum(scaled, axis=2))
    gram = kf + noise * np.eye(n_pts)
    try:
        chol, _ = _factorize(gram, sv)
    except NumericError:
        return 1e25, np.zeros_like(theta)
    alpha = cho_solve((chol, True), resid)
    value = 0.5 * resid @ alpha + np.sum(np.log(np.diag(chol))) + 0.5 * n_pts * np.log(2 * np.pi)
    inner = np.outer(alpha, alpha) - cho_solve((chol, True), np.eye(n_pts))
    grad = np.empty_like(theta)
    grad[0] = -0.5 * np.sum(inner * kf)
    for d in range(len(ls)):
        grad[1 + d] = -0.5 * np.sum(inner * kf * scaled[:, :, d])
    grad[-1] = -0.5 * noise * np.trace(inner)
    return value, grad


def fit(inputs, targets, bounds=None, *, restarts=5, rng=None, warm_start=None, center=True):
    """Fit hyperparameters by maximising the log marginal likelihood.

    Multi-start L-BFGS-B in log space. The first start is ``warm_start``
    (a :class:`KernelSpec`) when given, else the centre of the box; the
    remaining starts are drawn uniformly in the log box from ``rng``.

    Parameters
    ----------
    inputs : (N, n) array
    targets : (N,) array
    bounds : HyperBounds, optional
        Defaults to :func:`default_bounds`.
    restarts : int
        Total number of optimiser starts.
    rng : int or numpy Generator, optional
    warm_start : KernelSpec, optional
    center : bool
        Use the target mean as a constant prior mean.

    Returns
    -------
    GpModel
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.asarray(targets, dtype=float).reshape(-1)
    _check_finite("inputs", inputs)
    _check_finite("targets", targets)
    if inputs.shape[0] < 2:
        raise InvalidDataError("need at least two observations to fit")
    if bounds is None:
        bounds = default_bounds(inputs, targets)
    rng = np.random.default_rng(rng)
    offset = float(np.mean(targets)) if center else 0.0
    resid = targets - offset
    sqdist = (inputs[:, None, :] - inputs[None, :, :]) ** 2
    lo, hi = bounds.log_box()

    starts = []
    if warm_start is not None:
        starts.append(np.clip(warm_start.to_log_params(), lo, hi))
    else:
        starts.append(0.5 * (lo + hi))
    while len(starts) < max(restarts, 1):
        starts.append(lo + rng.random(lo.shape) * (hi - lo))

    best = None
    for theta0 in starts:
        res = minimize(
            _neg_lml,
            theta0,
            args=(inputs, resid, sqdist),
            jac=True,
            method="L-BFGS-B",
            bounds=list(zip(lo, hi)),
        )
        if best is None or res.fun < best.fun:
            best = res
    kernel = KernelSpec.from_log_params(np.clip(best.x, lo, hi))
    return condition(kernel, inputs, targets, mean_offset=offset)


def _clip_variance(var, scale):
    floor = -VARIANCE_CLIP * max(1.0, scale)
    if np.any(var < floor):
        raise NumericError(f"posterior variance {np.min(var):.3e} is negative beyond tolerance")
    return np.maximum(var, 0.0)


def posterior_batch(model, points):
    """Posterior mean and variance at each row of ``points``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    _check_finite("x", points)
    k = model.kernel(points, model.train_inputs)
    mean = model.mean_offset + k @ model.alpha
    v = solve_triangular(model.chol_factor, k.T, lower=True)
    var = model.kernel.signal_variance - np.sum(v * v, axis=0)
    return mean, _clip_variance(var, model.kernel.signal_variance)


def posterior(model, x):
    """Posterior ``(mean, variance)`` of the latent function at ``x``."""
    mean, var = posterior_batch(model, np.reshape(x, (1, -1)))
    return float(mean[0]), float(var[0])


@dataclass(frozen=True, eq=False)
class GradientPosterior:
    """Gaussian posterior of the gradient at one point."""

    mean: np.ndarray
    covariance: np.ndarray

    @cached_property
    def factor(self):
        """Lower-triangular square root of the covariance (jittered if needed)."""
        cov = np.asarray(self.covariance, dtype=float)
        scale = float(np.max(np.abs(np.diag(cov)))) if cov.size else 0.0
        if scale == 0.0:
            return np.zeros_like(cov)
        chol, _ = _factorize(cov, scale)
        return chol


def gradient_posterior(model, x):
    """Joint posterior of the gradient of the latent function at ``x``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    _check_finite("x", x)
    kern = model.kernel
    inv_l2 = 1.0 / kern.lengthscales ** 2
    k = kern(x[None, :], model.train_inputs)[0]
    # rows: d k(x, x_j) / dx
    jac = -(k[:, None] * (x[None, :] - model.train_inputs)) * inv_l2
    mean = jac.T @ model.alpha
    v = solve_triangular(model.chol_factor, jac, lower=True)
    cov = kern.signal_variance * np.diag(inv_l2) - v.T @ v
    cov = 0.5 * (cov + cov.T)
    return GradientPosterior(mean, cov)


def sample_gradient(post, rng=None, size=None):
    """Draw from a :class:`GradientPosterior`.

    Returns one ``(n,)`` vector, or ``(size, n)`` draws when ``size`` is given.
    """
    rng = np.random.default_rng(rng)
    n = post.mean.shape[0]
    if size is None:
        z = rng.standard_normal(n)
        return post.mean + post.factor @ z
    z = rng.standard_normal((size, n))
    return post.mean[None, :] + z @ post.factor.T
