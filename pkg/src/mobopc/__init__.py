"""Multi-objective Bayesian optimisation under preference-order constraints."""

from ._backend import BACKEND, COMPILED
from .acquisition import AcquisitionContext, SearchBudget, ehi, maximize_acquisition, pehi
from .benchmarks import get_benchmark, load_tabular
from .cone import PreferenceTuple, build_basis, in_s_perp, parse_preference, satisfies_preference
from .constraint_prob import prob_satisfies
from .errors import (
    ConfigError,
    ContractError,
    InvalidDataError,
    MobopcError,
    NumericError,
    TabularParseError,
)
from .gp import fit, gradient_posterior, posterior
from .hypervolume import ParetoArchive, dominant_subset, hypervolume, weighted_expected_hv
from .optimizer import RunConfig, RunTrace, compliance, merge_runs, run

__version__ = "0.1.0"
