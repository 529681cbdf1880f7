"""Iteratively reweighted l1 solvers with extrapolation for
sparsity-regularized least squares."""
from ._kernels import BACKEND
from .penalty import L1Penalty, LogPenalty, MCPPenalty, SCADPenalty
from .problem import (
    InstanceRecipe, ProblemInstance, estimate_lipschitz, generate_instance,
    grad_f, objective, stationarity_residual,
)
from .prox import Box
from .solvers import SOLVERS, SolveReport, SolverOptions, solve

__version__ = "0.1.0"
