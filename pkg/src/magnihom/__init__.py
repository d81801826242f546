"""Magnitude homology of finite metric spaces and metric graphs, computed exactly."""
from .chains import (
    ChainBasis, FormalSum, HomologyGroup, MagnitudeComplex, boundary, boundary_matrix,
    chain_boundary, enumerate_chains, homology, homology_total, length_spectrum, spectrum_upto,
)
from .graph import (
    AdmissibleSet, GeodesicClasses, GeodesicPath, GraphPoint, MetricGraph, build_gamma_cycle,
    check_admissible, check_non_branching, check_unique_between_geodesics, decompose_f_regular,
    enumerate_geodesics, geodesic_through, graph_distance, h2_rank_geodesic, nonbranching_rank,
    nu_f, pi0_geodesics, submodel,
)
from .metric import (
    FiniteMetricSpace, as_rational, between, chain_length, frame, is_four_cut, is_proper,
    random_metric, smoothness_count, validate_metric,
)
from .simplicial import build_A, build_B, h0_B, reduced_homology_A
from .smith import IntegerMatrix, invariant_factors, smith_normal_form
from .spectral import convergence_check, d1_matrix, e1_page, page_advance, spectral_pages

__version__ = "0.1.0"
