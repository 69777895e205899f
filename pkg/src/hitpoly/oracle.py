"""Brute-force reference for small instances.

Spans the hit space with ALL operators Sq^i for 1 <= i <= d (not just
powers of two), applies no admissibility filter, and computes ranks by
dense textbook row elimination on a numpy matrix.  Deliberately a
different code path from the production engines so bugs do not correlate;
deliberately single-threaded and capped because it is a test oracle.
"""

from __future__ import annotations

import numpy as np

from .basis import DegreeBasis, basis_dimension, iter_compositions
from .errors import InputError, ResourceLimitError
from .poly import PolyF2
from .steenrod import SqEvaluator

ORACLE_DIM_CAP = 5000


def dense_rank(A: np.ndarray) -> int:
    """Textbook row-echelon rank of a dense 0/1 matrix over F2."""
    work = (np.asarray(A, dtype=np.uint8) & 1).copy()
    n_rows, n_cols = work.shape
    r = 0
    for c in range(n_cols):
        pivot = None
        for i in range(r, n_rows):
            if work[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        for i in range(n_rows):
            if i != r and work[i, c]:
                work[i] ^= work[r]
        r += 1
        if r == n_rows:
            break
    return r


def _check_cap(k: int, d: int) -> None:
    n = basis_dimension(k, d)
    if n > ORACLE_DIM_CAP:
        raise ResourceLimitError(
            f"oracle is capped at {ORACLE_DIM_CAP} basis monomials, "
            f"(k={k}, d={d}) needs {n}",
            projected=n,
            cap=ORACLE_DIM_CAP,
        )


def oracle_hit_matrix(k: int, d: int) -> np.ndarray:
    """Dense matrix whose columns are coords of Sq^i(g), 1 <= i <= d."""
    _check_cap(k, d)
    basis = DegreeBasis(k, d)
    evaluator = SqEvaluator()
    columns = []
    for i in range(1, d + 1):
        for g in iter_compositions(k, d - i):
            terms = evaluator.sq_mono(i, g)
            if terms:
                col = np.zeros(len(basis), dtype=np.uint8)
                for m in terms:
                    col[basis.index_of(m)] = 1
                columns.append(col)
    if not columns:
        return np.zeros((len(basis), 0), dtype=np.uint8)
    return np.stack(columns, axis=1)


def oracle_hit_rank(k: int, d: int) -> int:
    """Rank of the unfiltered generating set (ground truth, small cases)."""
    if d == 0:
        return 0
    return dense_rank(oracle_hit_matrix(k, d))


def oracle_decide_hit(f: PolyF2, k: int) -> bool:
    """Membership of f in the oracle column space via augmented rank."""
    if f.is_zero():
        raise InputError("the zero polynomial is ill-posed for hit decisions")
    if f.k > k:
        raise InputError(f"polynomial uses {f.k} variables but k={k} requested")
    f = f.embed(k)
    d = f.degree
    if d == 0:
        return False
    _check_cap(k, d)
    M = oracle_hit_matrix(k, d)
    basis = DegreeBasis(k, d)
    b = np.zeros((len(basis), 1), dtype=np.uint8)
    for m in f.terms:
        b[basis.index_of(m), 0] = 1
    return dense_rank(np.hstack([M, b])) == dense_rank(M)
