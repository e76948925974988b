"""Subspace expansion strategies for matrix eigenvalue problems.

Compares the theoretical optimal expansion of a projection subspace against
its computable replacements extracted from the residual span and against the
classical Arnoldi/Ritz expansions, and verifies the underlying identities by
independent brute force.
"""

from .extraction import EigenApprox, TargetSpec
from .harness import ExperimentConfig, TraceRow, run_experiment, write_trace_csv
from .problems import Problem, gen_inverse_diag, gen_strakos, load_matrix_market
from .strategies import ExpansionProposal, Strategy
from .subspace import SubspaceState, expand, init, residual_basis

__version__ = "0.1.0"

__all__ = [
    "EigenApprox", "TargetSpec", "ExperimentConfig", "TraceRow",
    "run_experiment", "write_trace_csv", "Problem", "gen_inverse_diag",
    "gen_strakos", "load_matrix_market", "ExpansionProposal", "Strategy",
    "SubspaceState", "expand", "init", "residual_basis", "__version__",
]
