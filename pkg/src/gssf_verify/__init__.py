"""Numerical verification toolkit for generalized Sasakian-space-form
geometry and its submanifolds.

The package computes curvature, second fundamental forms, connection
variants, and the residuals of the structural identities they satisfy, and
exposes a reproducible check suite over a catalog of ambient models and
immersed submanifolds.
"""

from .errors import (
    ClassificationMismatchError,
    DegenerateFrameError,
    DegenerateMetricError,
    DimensionError,
    FitDegenerateError,
    GssfVerifyError,
    ImmersionDegenerateError,
    InsufficientSamplesError,
    NotAGssfError,
    NotFoundError,
    NumericDomainError,
    PreconditionError,
    ShapeError,
    UnsupportedOrderError,
)
from .contact import (
    AlmostContactStructure,
    AmbientModel,
    GssfFit,
    check_acs_axioms,
    fit_gssf,
    gssf_identity_suite,
)
from .report import DefectEntry, DefectReport
from .subman import (
    Classification,
    DefectKind,
    FundamentalForms,
    Immersion,
    SamplingPlan,
    SubmanifoldKind,
    SubmanifoldPointData,
    classify,
    defect,
    frames,
    induced_curvature,
    invariant_identity_suite,
    nabla_h,
    normal_curvature,
    second_fundamental_form,
)
from .ssmc import (
    RecurrenceKind,
    RecurrenceSolution,
    SsmcContext,
    alpha_tensor,
    recurrence_residual,
    ssmc_connection,
    ssmc_curvature_suite,
    ssmc_induced,
    ssmc_nabla_h,
)
from .soliton import (
    ConnectionKind,
    EinsteinDecomposition,
    SolitonFit,
    einstein_residual,
    pseudo_eta_einstein_residual,
    soliton_fit,
)
from .catalog import (
    CatalogEntry,
    CatalogKind,
    Expectation,
    catalog_entries,
    catalog_payload,
    example_names,
    get_example,
    get_model,
    model_names,
)
from .riemann import (
    MetricField,
    christoffel,
    concircular,
    lie_derivative_metric,
    ricci_scalar,
    riemann_tensor,
)
from .tensorjet import (
    Jet,
    MultiArray,
    SmoothMap,
    contract,
    eval_jet,
    orthonormal_frames,
)

__version__ = "0.1.0"

__all__ = [
    "GssfVerifyError",
    "UnsupportedOrderError",
    "NumericDomainError",
    "ShapeError",
    "DegenerateFrameError",
    "DegenerateMetricError",
    "DimensionError",
    "FitDegenerateError",
    "NotAGssfError",
    "ImmersionDegenerateError",
    "InsufficientSamplesError",
    "ClassificationMismatchError",
    "PreconditionError",
    "NotFoundError",
    "MultiArray",
    "SmoothMap",
    "Jet",
    "eval_jet",
    "contract",
    "orthonormal_frames",
    "MetricField",
    "christoffel",
    "riemann_tensor",
    "ricci_scalar",
    "concircular",
    "lie_derivative_metric",
    "AlmostContactStructure",
    "AmbientModel",
    "GssfFit",
    "check_acs_axioms",
    "fit_gssf",
    "gssf_identity_suite",
    "DefectEntry",
    "DefectReport",
    "Immersion",
    "SubmanifoldPointData",
    "FundamentalForms",
    "Classification",
    "SubmanifoldKind",
    "SamplingPlan",
    "DefectKind",
    "frames",
    "induced_curvature",
    "second_fundamental_form",
    "classify",
    "nabla_h",
    "normal_curvature",
    "defect",
    "invariant_identity_suite",
    "SsmcContext",
    "RecurrenceKind",
    "RecurrenceSolution",
    "ssmc_connection",
    "alpha_tensor",
    "ssmc_curvature_suite",
    "ssmc_induced",
    "ssmc_nabla_h",
    "recurrence_residual",
    "ConnectionKind",
    "SolitonFit",
    "EinsteinDecomposition",
    "soliton_fit",
    "einstein_residual",
    "pseudo_eta_einstein_residual",
    "CatalogEntry",
    "CatalogKind",
    "Expectation",
    "catalog_entries",
    "catalog_payload",
    "get_model",
    "get_example",
    "model_names",
    "example_names",
    "__version__",
]
