"""Scattering-matrix design for Q-stem connected beyond-diagonal RIS."""
from .channels import PropagationConfig, derive_seed, path_loss, sample_channels
from .ls_solver import LsResult, ls_design
from .quasi_newton import (
    DesignResult,
    OptimizerConfig,
    newton_ls_design,
    newton_random_design,
    optimize,
)
from .scattering import ChannelSet, SystemDims, scattering_from_susceptance, sum_channel_gain
from .spectral import decompose, dof, reciprocity_obstruction, relaxed_optimal_theta, upper_bound
from .topology import (
    ArchitectureSpec,
    build_mask,
    build_transform,
    circuit_complexity,
    contract,
    expand,
    independent_dim,
    parse_architecture,
)

__version__ = "0.1.0"
