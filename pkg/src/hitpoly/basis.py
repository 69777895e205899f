"""Monomial basis of the degree-d slice of F2[x1..xk] and its coordinates.

The basis is all compositions of d into k non-negative parts, in
ascending lexicographic order of exponent tuples.  ``composition_rank``
computes a monomial's position arithmetically, so matrix assembly never
needs the index dictionary (workers only need (k, d)).
"""

from __future__ import annotations

from math import comb
from typing import Iterator, TextIO

from .errors import ResourceLimitError
from .gf2 import BitVector
from .poly import Monomial, PolyF2, validate_monomial

#: refuse to enumerate slices larger than this many monomials by default
DEFAULT_BASIS_CAP = 1 << 27


def basis_dimension(k: int, d: int) -> int:
    """dim of the degree-d slice: C(d + k - 1, k - 1), in exact arithmetic."""
    if k < 1:
        raise ValueError(f"variable count must be >= 1, got {k}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    return comb(d + k - 1, k - 1)


def iter_compositions(k: int, d: int) -> Iterator[Monomial]:
    """All compositions of d into k parts, ascending lexicographic.

    Iterative successor: move one unit from the last slot leftward, or
    carry into the rightmost nonzero slot.  O(k) per step, no recursion.
    """
    if k < 1:
        raise ValueError(f"variable count must be >= 1, got {k}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    if k == 1:
        yield (d,)
        return
    cur = [0] * (k - 1) + [d]
    while True:
        yield tuple(cur)
        if cur[-1] > 0:
            cur[-2] += 1
            cur[-1] -= 1
            continue
        # last slot empty: carry out of the rightmost nonzero slot
        p = k - 2
        while p >= 0 and cur[p] == 0:
            p -= 1
        if p <= 0:
            return  # (d, 0, ..., 0) is the last tuple
        rest = cur[p] - 1
        cur[p] = 0
        cur[p - 1] += 1
        cur[-1] = rest


def composition_rank(m: Monomial) -> int:
    """0-based position of m within its degree slice, in canonical order.

    Counts tuples lexicographically below m: for each position i and each
    value v < e_i, the compositions completing the remainder are counted
    with a hockey-stick collapse of the binomial sum.
    """
    k = len(m)
    d = sum(m)
    rank = 0
    rem = d
    for i in range(k - 1):
        parts = k - 1 - i  # free slots after position i
        e = m[i]
        if e:
            # sum_{v < e} C(rem - v + parts - 1, parts - 1)
            rank += comb(rem + parts, parts) - comb(rem - e + parts, parts)
            rem -= e
    return rank


class DegreeBasis:
    """Immutable ordered basis of the degree-d slice in k variables."""

    __slots__ = ("k", "d", "monomials", "_index")

    def __init__(self, k: int, d: int, *, cap: int = DEFAULT_BASIS_CAP):
        n = basis_dimension(k, d)
        if n > cap:
            raise ResourceLimitError(
                f"basis of degree {d} in {k} variables has {n} monomials, "
                f"exceeding the cap of {cap}; raise the cap to proceed",
                projected=n,
                cap=cap,
            )
        self.k = k
        self.d = d
        self.monomials: tuple[Monomial, ...] = tuple(iter_compositions(k, d))
        self._index = {m: i for i, m in enumerate(self.monomials)}

    def __len__(self) -> int:
        return len(self.monomials)

    def __getitem__(self, i: int) -> Monomial:
        return self.monomials[i]

    def index_of(self, m: Monomial) -> int:
        try:
            return self._index[m]
        except KeyError:
            raise KeyError(
                f"monomial {m!r} is not in the degree-{self.d} basis "
                f"over {self.k} variables"
            ) from None

    def to_coordinates(self, f: PolyF2) -> BitVector:
        """Coordinate vector of f: bit i set iff basis monomial i is a term."""
        n = len(self.monomials)
        if f.is_zero():
            return BitVector(n, 0)
        if f.k != self.k:
            raise ValueError(
                f"polynomial over {f.k} variables does not match basis k={self.k}"
            )
        value = 0
        for m in f.terms:
            if sum(m) != self.d:
                raise ValueError(
                    f"monomial {m!r} has degree {sum(m)}, basis degree is {self.d}"
                )
            value |= 1 << self._index[m]
        return BitVector(n, value)

    def from_coordinates(self, vec: BitVector) -> PolyF2:
        """Inverse of to_coordinates."""
        if vec.n_bits != len(self.monomials):
            raise ValueError(
                f"vector length {vec.n_bits} does not match basis size "
                f"{len(self.monomials)}"
            )
        return PolyF2(self.k, (self.monomials[i] for i in vec.indices()))

    def dump(self, stream: TextIO) -> None:
        """One monomial per line, canonical order (for golden comparisons)."""
        for m in self.monomials:
            stream.write(" ".join(str(e) for e in m))
            stream.write("\n")


def coordinate_index(m: Monomial, k: int, d: int) -> int:
    """composition_rank with an arity/degree check, for matrix assembly."""
    validate_monomial(m, k)
    if sum(m) != d:
        raise ValueError(f"monomial {m!r} has degree {sum(m)}, expected {d}")
    return composition_rank(m)
