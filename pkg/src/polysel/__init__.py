"""Continuous selections of polynomial families.

Library layout:

- poly: sparse polynomials, the canonical monomial basis, instances
- roots: certified univariate real-root isolation
- selections: coincidence decomposition, enumeration, max-min formulas
- subdiff: Clarke subdifferential, nearest-point slope computation
- critical: stationary-point catalogs over all candidate active sets
- genericity: witness-level audits, exact certificates, random instances
- growth: slope-value inequalities, sublevel sets, error bounds, coercivity
- bounds: the closed-form integer ceilings used throughout
- cli: the `polysel` command line front end
"""

from .bounds import (
    connected_component_bound,
    critical_point_bound,
    lojasiewicz_exponent,
)
from .critical import (
    CriticalCatalog,
    CriticalPoint,
    CriticalSystem,
    SolverConfig,
    all_critical_points,
    build_system,
    classify_local_1d,
    second_order_check,
    solve_1d,
    solve_nd,
)
from .errors import (
    CenterNotZeroError,
    DegenerateInstanceError,
    DimensionMismatchError,
    EmptySublevelSetError,
    InconsistentValueError,
    InstanceFormatError,
    MinNormConvergenceError,
    NonIsolatedCriticalSetError,
    NotCriticalError,
    PolyselError,
    SelectionSpecError,
    SubsetGuardError,
    ZeroPolynomialError,
)
from .genericity import (
    Certificate1D,
    CheckResult,
    GenericityReport,
    PairCertificate,
    TripleCertificate,
    certify_1d,
    genericity_report,
    random_instance,
)
from .growth import (
    CoercivityVerdict,
    ErrorBoundReport,
    GoodnessReport,
    LojaReport,
    SublevelSet1D,
    coercivity_check,
    dist_to_S,
    error_bound_check,
    goodness_at_infinity,
    sublevel_set_1d,
    verify_loja,
)
from .poly import (
    Instance,
    Polynomial,
    from_coeff_vector,
    make_instance,
    monomial_basis,
    monomial_count,
)
from .roots import IntervalRoots, RootEnclosure, real_roots
from .selections import (
    ActiveSet,
    Breakpoint,
    Decomposition1D,
    MaxMinExpr,
    SelectionEnumeration,
    UnivariateSelection,
    active_set,
    active_set_exact,
    collapse_duplicates,
    decompose_1d,
    enumerate_selections_1d,
    eval_selection,
    materialize_maxmin,
    max_selection,
    min_selection,
    parse_selection_spec,
    resolve_selection,
)
from .subdiff import (
    GradientPolytope,
    MinNormResult,
    clarke_subdifferential,
    min_norm_point,
    slope,
)

__version__ = "0.1.0"
