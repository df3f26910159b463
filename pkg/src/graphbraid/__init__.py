"""Configuration complexes of graphs, their embeddings into right-angled Artin
groups, and checkable certificates for the resulting group invariants."""
from __future__ import annotations

from .graph_core import (
    Graph,
    degree_profile,
    parse_graph,
    star_graph,
    subdivide_for,
    tripod_chain,
    tripod_subdivided,
    two_tripods,
)
from .cube_complex import CubeComplex, build_config_complex, f_vector
from .homology import betti_numbers, boundary_matrices, homology, smith_normal_form
from .raag import Word, build_delta, is_conjugate, normal_form, parse_word, primitive_root
from .crisp_wiest import build_cw_map, check_local_isometry, pi1_generators
from .subgroup_lab import certify_graph, verify_certificate
from .report import compute_report, render_report

__version__ = "0.1.0"
