"""Certification of genuine multipartite nonlocality for n-qubit pure
states that are permutation-symmetric on all parties but the first."""

__version__ = "0.1.0"

from .bell import (
    CertificationReport,
    CertifyOptions,
    catalonia_lhs,
    certify,
    curchod_gap,
    hardy_residuals,
    improved_gap,
    joint_probability,
    lifted_chsh,
)
from .gme import (
    AlphaSelection,
    AlphaSelectionError,
    concurrence_coefficients,
    first_party_separability,
    gme_check,
    poly_eval,
    select_alpha,
)
from .hardy import (
    DegenerateGeometryError,
    Measurement,
    MeasurementAssignment,
    ResidualCoeffs,
    annihilator,
    assemble,
    hardy_vectors,
    orthocomplement,
    residual_coeffs,
    symmetric_bra,
)
from .oracle import (
    DeterministicBilocalStrategy,
    SchmidtData,
    dense_residual,
    enumerate_bilocal_extremes,
    nosignaling_bilocal_vertices,
    sample_bilocal_strategies,
    schmidt_two_qubit,
    verify_pipeline,
)
from .states import (
    NearSymmetricState,
    biseparable_state,
    dicke,
    dicke_split,
    embed,
    ghz_state,
    inner,
    project_party,
    random_near_symmetric,
    state_from_dict,
    state_to_dict,
    w_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
