"""Minimum dedicated-input selection for strong structural controllability.

Zero-forcing based verification, an annealed Metropolis chain over input
sets, and exact oracles for small instances.
"""
from .errors import DimensionError, DomainError, ParseError, SizeGuardError, ZfcError
from .exact import ExactResult, solve_exact, solve_exact_bounded
from .generators import gen_erdos_renyi, gen_selfdamped_tree
from .io import read_edge_list, read_instance, read_pattern, write_edge_list, write_pattern
from .mcmc import (
    AnnealConfig,
    ChainState,
    Mode,
    Move,
    RunReport,
    accept,
    build_exact_tpm,
    empirical_distribution,
    propose,
    run,
    run_chains,
)
from .pattern import InputPattern, LoopDigraph, PatternMatrix, VertexSet, graph_of, input_pattern, modified_pattern
from .scontrol import CostParams, SControlInstance, cost, repair, verify, white_residuals
from .zeroforcing import ClosureResult, closure, is_zfs, zero_forcing_number_exact

__version__ = "0.1.0"
