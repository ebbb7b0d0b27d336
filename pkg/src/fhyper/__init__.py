"""Filter-relative hyperreals over piecewise rational sequences.

Sequences indexed by the naturals are compared along filters on omega
generated by residue classes and cofinite sets.  Each query reduces to exact
computations on index sets, so verdicts come with certificates.
"""

from .calculus import (
    Branch,
    Branches,
    ContinuityReport,
    Unbounded,
    Unique,
    check_continuity,
    f_continuity_profile,
    f_continuous,
    forces_apart,
    in_halo,
    is_finite_at,
    is_infinitesimal,
    is_standard,
    standard_part,
    transfer_counterexample,
)
from .errors import (
    ArgumentError,
    DivisionError,
    DomainError,
    EngineError,
    FragmentError,
    ImproperFilterError,
    IncoherenceError,
    ParseError,
    PartitionError,
    PreconditionError,
    RepairWarning,
)
from .filters import F0, Filter, compatible, contains, extend, frechet, join, mk_filter, refines, try_extend
from .generic import (
    UltraOracle,
    extends_filter,
    forcing_filter,
    mk_ultra,
    padic,
    quotient_sat,
    random_chooser,
    ultra_contains,
    zero_chooser,
)
from .index_algebra import (
    EMPTY,
    OMEGA,
    IndexSet,
    classify,
    finite_set,
    interval_from,
    residue,
    residues,
)
from .internal_sets import (
    ChainPlan,
    InternalPred,
    boolean_internal,
    emptiness_set,
    extension_at,
    finite_standard_internal_check,
    internal,
    interval_pred,
    member_at,
    saturation_witness,
    subset_set,
)
from .logic import (
    Verdict,
    check_structure_axioms,
    forces,
    forces_clausal,
    function,
    parse,
    parse_seq,
    parse_set,
    parse_term,
    stable_set,
    truth_index_set,
)
from .poly import Poly, RationalFunc
from .sequences import (
    Limit,
    Seq,
    absolute,
    arith,
    cluster_limits,
    constant,
    delta,
    from_expr,
    index_seq,
    maximum,
    minimum,
    piecewise,
    reciprocal,
    truth_set,
)

__all__ = [
    "ArgumentError", "Branch", "Branches", "ChainPlan", "ContinuityReport", "DivisionError",
    "DomainError", "EMPTY", "EngineError", "F0", "Filter", "FragmentError",
    "ImproperFilterError", "IncoherenceError", "IndexSet", "InternalPred", "Limit", "OMEGA",
    "ParseError", "PartitionError", "Poly", "PreconditionError", "RationalFunc",
    "RepairWarning", "Seq", "UltraOracle", "Unbounded", "Unique", "Verdict", "absolute",
    "arith", "boolean_internal", "check_continuity", "check_structure_axioms", "classify",
    "cluster_limits", "compatible", "constant", "contains", "delta", "emptiness_set",
    "extend", "extends_filter", "extension_at", "f_continuity_profile", "f_continuous", "finite_set",
    "finite_standard_internal_check", "forces", "forces_apart", "forces_clausal",
    "forcing_filter", "frechet", "from_expr", "function", "in_halo", "index_seq", "internal",
    "interval_from", "interval_pred", "is_finite_at", "is_infinitesimal", "is_standard",
    "join", "maximum", "member_at", "minimum", "mk_filter", "mk_ultra", "padic", "parse",
    "parse_seq", "parse_set", "parse_term", "piecewise", "quotient_sat", "random_chooser",
    "reciprocal", "refines", "residue", "residues", "saturation_witness", "stable_set",
    "standard_part", "subset_set", "transfer_counterexample", "truth_index_set", "truth_set",
    "try_extend", "ultra_contains", "zero_chooser",
]
