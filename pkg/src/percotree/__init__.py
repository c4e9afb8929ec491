"""percotree: Monte Carlo laboratory for minimal paths, spanning trees and
percolation interfaces on planar lattices."""

from .lattice import (HONEYCOMB, SQUARE, PlanarLattice, boundary_arcs,
                      build_lattice, euler_characteristic)
from .disorder import (BC_FREE, BC_REPULSIVE, BC_SLE_FREE, BC_SLE_LIKE,
                       BOUNDARY_CONDITIONS, THETA_CRITICAL, DisorderInstance,
                       WeightedEdgeGraph, derive_key, induce_edge_weights,
                       sample_instance, sample_random_edge_weights)
from .spanning import (EQUAL, GREATER, LESS, LatticePath, SpanningTree,
                       brute_force_all_targets, brute_force_optimal_path,
                       compare_paths, connected, cut_property_check,
                       f_beta_order_check, kruskal, optimal_crossing_path,
                       path_cost, prim, tree_path)
from .percolation import FaceColoring, color_faces, exploration_path
from .conformal import (RectangleMap, halfplane_angle, make_disk_map,
                        make_halfannulus_map, make_halfplane_map,
                        rect_to_disk_equilateral, rect_to_halfannulus,
                        rect_to_halfplane)
from .observables import (KappaFit, LeftPassageField, ScalingFit,
                          TriplePointHistogram, accumulate_left_passage,
                          displacement_scaling, fit_kappa, fractal_dimension,
                          gauss_2f1_negz, horizontal_displacement,
                          kappa_from_dimension, left_side_faces,
                          make_left_passage_field, make_triple_histogram,
                          rotation_symmetry_statistic, schramm_lpp,
                          triple_point)
from .harness import (ConfigError, ExperimentConfig, SampleRecord,
                      parse_config, run_experiment)

__version__ = "0.1.0"
