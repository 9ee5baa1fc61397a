"""Finite-dimensional workbench for power graphs, Born valuations and topos daseinisation."""

from .config import DEFAULT_TOL, Tolerances
from .graph import (
    Context,
    PowerGraph,
    build_commutation_graph,
    generate_context_containing,
    is_context,
    maximal_contexts,
)
from .linalg import (
    DensityMatrix,
    Projector,
    complete_to_basis,
    eigen_hermitian,
    make_density,
    make_projector,
    vector_to_projector,
)
from .psa import (
    PSA,
    PurityReport,
    QuantumPerspective,
    change_perspective,
    evaluate_psa,
    informationally_complete_family,
    mix,
    purity_report,
    quantum_perspective,
    reconstruct_density,
)
from .sampling import SampleRun, estimate_psa, sample_context
from .topos import (
    AbelianContext,
    ContextPoset,
    abelian_context_from,
    born_recovery,
    build_poset,
    daseinisation_subobject,
    daseinise,
    measure,
    spectrum,
)
from .valuations import check_intensive_valuation, find_binary_valuation, ks18_problem, make_problem

__version__ = "0.1.0"
