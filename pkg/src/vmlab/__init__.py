"""Local complementation, vertex-minors and the GF(2) algebra behind them."""

from .f2core import F2Matrix, F2Vector, invert, rank, solve_unit_upper_triangular, tensor
from .graph import Graph, from_graph6, local_complement, pivot, pivot_tripartite, to_graph6
from .lcdelta import LCInstance, delta_via_m, sequential_delta
from .quadpoly import QuadPoly, sign_expectation_exact, lemma21_bound
from .rankcensus import census_exhaustive, census_formula, census_bound
from .gfourier import GraphDist, fourier_transform, tv_to_uniform, fourier_tv_bound
from .vminor import lc_orbit, is_vertex_minor, is_k_vm_universal, pivot_orbit, is_pivot_minor
from .bippivot import OrderedBipartiteGraph, bipartite_pivot, find_pivot_pairs, bipartite_delta_via_m
from .harness import ExperimentConfig, run_experiment, sample_gnp, sample_bipartite, theorem13_parameters

__version__ = "0.1.0"
