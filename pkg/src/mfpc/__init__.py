"""Maximum flow with pairwise arc conflicts: exact and heuristic solvers,
MILP export and benchmark instance generation."""

from .bench import BenchRecord, gap_lb, gap_ub, run_bench
from .bnb import SearchNode, SolveOutcome, select_branch_pair, solve_bnb, solve_bruteforce
from .datasets import figure1, figure1_solution
from .generator import GenParams, generate, grid
from .greedy import solve_greedy
from .instance import (
    ActivationPattern, Arc, FlowAssignment, Instance, InstanceFormatError, Verdict, Violation,
    check_feasible, parse_instance, parse_solution, read_instance, serialize_instance, serialize_solution,
)
from .maxflow import ResidualNetwork, max_flow, min_cut
from .model import ModelIR, build_model, export_lp, validate_against_model

__version__ = "0.1.0"
