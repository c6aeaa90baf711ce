"""Exact invariant-PDE computations on adjoint contact manifolds."""

from .errors import ConsistencyError, PreconditionError
from .rootsys import CartanType, build_root_system, weyl_dim
from .contact import (
    ContactGrading,
    contact_grading,
    crossed_nodes,
    database_entry,
    g_minus1_highest_weights,
    semisimple_part,
)
from .kostant import (
    ParabolicCoset,
    decomposition_dimensions,
    generate_wp,
    kostant_decomposition,
    primitive_wedge_dim,
)
from .branching import pushforward, ring_dimension
from .quadrics import (
    count_invariant_pairs,
    quadric_invariant_dimension,
    solve_invariant_system,
    sym_square_relation,
    tensor_relation,
)
from .minorpoly import (
    IMAG_UNIT,
    GaussianRational,
    MinorPolynomial,
    SymmetricMatrix,
    variable_pairs,
)
from .pdes import (
    SymplecticFrame,
    b3_data,
    chow_transform_g2,
    evaluate_q,
    evaluate_qn,
    pde_type_A,
    pde_type_D,
    principal_minor_trace,
    subadjoint_degree,
    verify_b3_membership,
    verify_invariance,
)

__version__ = "0.1.0"

__all__ = [
    "CartanType",
    "ConsistencyError",
    "ContactGrading",
    "GaussianRational",
    "IMAG_UNIT",
    "MinorPolynomial",
    "ParabolicCoset",
    "PreconditionError",
    "SymmetricMatrix",
    "SymplecticFrame",
    "b3_data",
    "build_root_system",
    "chow_transform_g2",
    "contact_grading",
    "count_invariant_pairs",
    "crossed_nodes",
    "database_entry",
    "decomposition_dimensions",
    "evaluate_q",
    "evaluate_qn",
    "g_minus1_highest_weights",
    "generate_wp",
    "kostant_decomposition",
    "pde_type_A",
    "pde_type_D",
    "primitive_wedge_dim",
    "principal_minor_trace",
    "pushforward",
    "quadric_invariant_dimension",
    "ring_dimension",
    "semisimple_part",
    "solve_invariant_system",
    "subadjoint_degree",
    "sym_square_relation",
    "tensor_relation",
    "variable_pairs",
    "verify_b3_membership",
    "verify_invariance",
    "weyl_dim",
]
