"""Exact-arithmetic toolkit for solvable Leibniz algebras with Heisenberg
nilradical: construction, symbolic constraint derivation, nilpotency
certification, and the classified catalog over C and R."""

from .scalars import Scalar, ScalarError, IncompatibleFieldError, ScalarParseError
from .poly import (
    PolyQ,
    PolyError,
    UnknownIndeterminateError,
    UnsupportedDegreeError,
    quadratic_real_root_exists,
    quadratic_roots,
)
from .algebra import (
    StructTensor,
    Subspace,
    Fingerprint,
    ClosureChecks,
    bracket_span,
    change_basis,
    basis_rows_to_coordinate_map,
    center,
    derived_series,
    element_nilpotent,
    fingerprint,
    is_nilpotent_algebra,
    is_solvable,
    left_annihilator,
    lower_central_series,
    subspace_closure_checks,
)
from .heisenberg import (
    ExtensionSpec,
    ExtensionValidationError,
    build_extension,
    eigenvector_check,
    heisenberg,
    heisenberg_subspace,
    max_extension_bound,
    symplectic_check,
)
from .certify import (
    LocusResult,
    NilradicalCertificate,
    certify_nilradical,
    commuting_sp2_proportionality,
    matrix_nilpotent,
    mubar_bound_check,
    sp2_nilpotency_locus,
    subspace_nilpotent,
)
from .constraints import (
    CascadeResult,
    ConstraintReport,
    ParamAlgebra,
    annihilator_residual_system,
    commutation_residual_system,
    extract_forced_bindings,
    gamma_eliminate,
    jacobi_residual_system,
    parametric_extension,
    run_cascade,
    verify_arar,
)
from .catalog import (
    CatalogEntry,
    VerificationReport,
    build_entry,
    catalog_entries,
    condensation_witness,
    distinctness_report,
    verify_entry,
    verify_field,
)

__version__ = "0.1.0"
