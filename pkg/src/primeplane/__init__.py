"""Exact Fourier analysis and support-uncertainty bounds on prime planes.

The package computes Fourier transforms of Q(zeta_p)-valued functions on
F_p and F_p^2 in exact cyclotomic arithmetic, evaluates the family of
support-size inequalities with their classified exceptional structures,
and searches small candidate spaces exhaustively for extremal witnesses.
"""

__version__ = "0.1.0"

from .cyclotomic import CycNum, format_value, is_prime, parse_value, root_of_unity
from .plane import (
    DUAL,
    PRIMAL,
    Coset,
    LineSubgroup,
    Point,
    PointSet,
    all_subgroups,
    bounded_line_direction,
    coset_of,
    covered_by_lines,
    directions_determined,
    is_blocking_set,
    lines_in_direction,
    min_blocking_size,
    min_line_cover,
    one_line_cover,
    orthogonal,
    parse_pointset,
    pencil_stability,
    rich_direction_search,
    two_line_cover,
)
from .fourier import (
    GFunc,
    convolution,
    coset_indicator,
    coset_restriction_transform,
    coset_sum_identity,
    dual_convolution,
    fourier_transform,
    galois_twist,
    inverse_transform,
    line_diff_convolution,
    pointwise_mul,
    quad_diff_convolution,
    rational_support_closure,
    restrict_to_coset,
    shifted_line_diff,
)
from .bounds import (
    BoundReport,
    ExceptionDescriptor,
    SupportProfile,
    check_asym2,
    check_asym3,
    check_birotao,
    check_conjecture,
    check_coset_counts,
    check_kp1,
    check_kp2,
    check_meshulam,
    check_product,
    check_product3,
    check_quasicharacter,
    check_rational,
    check_roots,
    classify_exception,
    profile,
    sumset_size,
)
from .search import (
    Construction,
    FrontierMap,
    SearchSpace,
    attainable_lattice,
    construct,
    frontier,
    hunt,
    make_space,
    sweep,
)
