"""germforge: exact local bifurcation analysis of scalar germs g(x, lambda)."""

import sys

from .classify import (
    BifurcationDiagram,
    GridWarning,
    ParameterRegion,
    PersistentDiagrams,
    diagram_trace,
    limit_points,
    persistent_diagrams,
    region_decompose,
)
from .division import IdealBasis, divide, groebner_basis, reduce_basis, remainder, standard_basis
from .errors import (
    CertificationError,
    CompositionError,
    GermforgeError,
    GermSyntaxError,
    InconclusiveError,
    InconsistentSystemError,
    InfiniteCodimensionError,
    NotSingularError,
    NumericBudgetError,
)
from .expr import Jet, TailSupport, parse_germ, parse_polynomial, tail_support, taylor_jet
from .ideals import (
    MultMatrix,
    QuotientBasis,
    TruncationCertificate,
    colon_ideal,
    max_power_in_ideal,
    mult_matrix,
    normal_set,
    verify_truncation,
)
from .intrinsic import IntrinsicIdeal, intrinsic_decomposition, intrinsic_part
from .poly import XL, MonomialOrder, Poly, leading_data, s_germ
from .serialize import dumps, from_json, loads, to_json
from .singularity import (
    AlgebraicObjects,
    NormalForm,
    alg_objects,
    high_order_ideal,
    normal_form,
    normal_form_details,
    recognition_conditions,
    restricted_tangent,
    tangent_space,
    transformation_residual,
    transformation_solve,
)
from .svg import diagram_svg, emit_svg, transition_svg
from .transition import TransitionSet, defining_systems, eliminate, transition_set
from .unfolding import Unfolding, codimension, is_universal_unfolding, universal_unfolding

__version__ = "0.1.0"

__all__ = [name for name, obj in list(globals().items()) if not name.startswith("_") and not isinstance(obj, type(sys))]
