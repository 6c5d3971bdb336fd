"""Exact ladder matrices, ladder determinantal ideals and permutation recovery."""

from .errors import (
    DimensionError,
    DomainError,
    GenerationError,
    LadderMatError,
    PreconditionError,
    ResourceError,
    ValidationError,
)
from .linalg import RationalMatrix, determinant, minor, rank
from .ladder import (
    CellSet,
    Ladder,
    corners_decompose,
    is_ladder,
    ladder_rank,
    max_square,
    shrink,
    subcritical_cells,
    variety_dim,
)
from .polyring import GrevlexOrder, LexOrder, Polynomial, buchberger, is_groebner, normal_form
from .determinantal import VariableGrid, det_ideal, dim_via_initial, verify_gb_minors
from .recovery import (
    CellPermutation,
    apply,
    build_system,
    enumerate_rank_preserving,
    random_ladder_low_rank,
    random_low_rank,
    verify_uniqueness,
)

__version__ = "0.1.0"
