"""Semicontraction analysis of Kuramoto-Sakaguchi oscillator networks.

Phase-cohesive winding cells, logarithmic seminorm certificates, the reduced
dynamics modulo rotations, and synchronous states per cell.
"""
from .certificate import (
    CertificateReport,
    PointwiseCheck,
    ScanGrid,
    bounds_curve,
    certify,
    contraction_rate,
    contraction_rate_closed_form,
    even_bound,
    gamma_bar,
    odd_bound,
    sample_cohesive_states,
    scan_slice,
    verify_pointwise,
)
from .dynamics import (
    ModelParams,
    Trajectory,
    even_part,
    integrate,
    jacobian,
    jacobian_even,
    jacobian_odd,
    odd_part,
    sync_residual,
    vector_field,
)
from .errors import KSError
from .graph import (
    CycleBasis,
    WeightedGraph,
    algebraic_connectivity,
    complete_graph,
    cycle_basis,
    double_ring_graph,
    incidence_matrix,
    laplacian,
    max_weighted_degree,
    path_graph,
    random_connected_graph,
    ring_graph,
    star_graph,
)
from .reduction import (
    ReducedState,
    chebyshev_center,
    embed_edge_diffs,
    in_polytope,
    polytope_bounding_box,
    project,
    reduced_field,
    reduced_jacobian,
)
from .seminorm import (
    ConsensusProjector,
    build_projector,
    consensus_seminorm,
    log_seminorm,
    log_seminorm_limit_estimate,
    log_seminorm_lmi_check,
)
from .sync import (
    SyncResult,
    UniquenessReport,
    enumerate_feasible_windings,
    find_sync,
    lift,
    same_sync,
    sample_polytope,
    uniqueness_check,
)
from .torus import (
    ccw_diff,
    edge_diffs,
    in_cell,
    is_cohesive,
    splay_state,
    winding_number,
    winding_vector,
)

__version__ = "0.1.0"
