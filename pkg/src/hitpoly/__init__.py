"""Exact F2 computations for the hit problem: Steenrod square action,
GF(2) rank/solve with certificates, and hit/quotient space dimensions."""

from .arith import alpha, binom_mod2, mu
from .basis import (
    DegreeBasis,
    basis_dimension,
    composition_rank,
    iter_compositions,
)
from .engine import (
    GeneratorTask,
    HitMatrix,
    HitResult,
    build_hit_matrix,
    decide_hit,
    dimension_report,
    enumerate_tasks,
    hit_dimension,
    kameko_reduces,
    nonuniqueness_witness,
    quotient_dimension,
    wood_vanishes,
)
from .errors import HitpolyError, InputError, ParseError, ResourceLimitError
from .fastrank import PackedEliminator
from .gf2 import (
    BitVector,
    EchelonBasis,
    SparseColumnSet,
    nullspace_basis,
    rank,
    solve,
)
from .oracle import oracle_decide_hit, oracle_hit_rank
from .parsing import format_mono, format_poly, parse_poly
from .poly import Monomial, PolyF2, weight_degree, weight_vector
from .steenrod import SqEvaluator, sq_poly, sq_recursive, sq_total_square

__version__ = "0.1.0"

__all__ = [
    "alpha",
    "binom_mod2",
    "mu",
    "DegreeBasis",
    "basis_dimension",
    "composition_rank",
    "iter_compositions",
    "GeneratorTask",
    "HitMatrix",
    "HitResult",
    "build_hit_matrix",
    "decide_hit",
    "dimension_report",
    "enumerate_tasks",
    "hit_dimension",
    "kameko_reduces",
    "nonuniqueness_witness",
    "quotient_dimension",
    "wood_vanishes",
    "HitpolyError",
    "InputError",
    "ParseError",
    "ResourceLimitError",
    "PackedEliminator",
    "BitVector",
    "EchelonBasis",
    "SparseColumnSet",
    "nullspace_basis",
    "rank",
    "solve",
    "oracle_decide_hit",
    "oracle_hit_rank",
    "format_mono",
    "format_poly",
    "parse_poly",
    "Monomial",
    "PolyF2",
    "weight_degree",
    "weight_vector",
    "SqEvaluator",
    "sq_poly",
    "sq_recursive",
    "sq_total_square",
    "__version__",
]
