"""Monomials and homogeneous polynomials over F2.

A monomial in k variables is an exponent tuple ``(e1, ..., ek)``.  The
canonical order used everywhere (basis indexing, column order, printed
output) is plain ascending lexicographic comparison of these tuples, i.e.
Python's built-in tuple ordering.

A polynomial is a set of equal-degree monomials; coefficients are
implicitly 1 and addition is symmetric difference (m + m = 0).
"""

from __future__ import annotations

from typing import Iterable, Iterator

Monomial = tuple[int, ...]


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) != len(b):
        raise ValueError(f"variable count mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def validate_monomial(m: Monomial, k: int | None = None) -> None:
    if not isinstance(m, tuple) or not all(isinstance(e, int) and e >= 0 for e in m):
        raise ValueError(f"monomial must be a tuple of non-negative ints, got {m!r}")
    if len(m) < 1:
        raise ValueError("monomial needs at least one variable slot")
    if k is not None and len(m) != k:
        raise ValueError(f"monomial {m!r} has {len(m)} variables, expected {k}")


class PolyF2:
    """Homogeneous polynomial over F2, stored as a frozenset of monomials.

    The zero polynomial is the empty set; its degree is None and it is
    accepted by every operation.  ``k`` (the ambient variable count) is
    explicit because the zero polynomial carries no terms to infer it from.
    """

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms: Iterable[Monomial] = ()):
        if k < 1:
            raise ValueError(f"variable count must be >= 1, got {k}")
        acc: set[Monomial] = set()
        for m in terms:
            validate_monomial(m, k)
            # mod-2 cancellation on repeats
            if m in acc:
                acc.discard(m)
            else:
                acc.add(m)
        degs = {sum(m) for m in acc}
        if len(degs) > 1:
            raise ValueError(
                f"non-homogeneous term set: degrees {sorted(degs)} present"
            )
        self.k = k
        self.terms = frozenset(acc)

    @classmethod
    def zero(cls, k: int) -> "PolyF2":
        return cls(k)

    @classmethod
    def monomial(cls, m: Monomial) -> "PolyF2":
        return cls(len(m), (m,))

    @property
    def degree(self) -> int | None:
        """Degree of the polynomial, or None for the zero polynomial."""
        for m in self.terms:
            return sum(m)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[Monomial]:
        return sorted(self.terms)

    def embed(self, k: int) -> "PolyF2":
        """Reinterpret in k >= self.k variables by zero-padding exponents."""
        if k < self.k:
            raise ValueError(f"cannot embed {self.k}-variable polynomial into k={k}")
        if k == self.k:
            return self
        pad = (0,) * (k - self.k)
        return PolyF2(k, (m + pad for m in self.terms))

    def __add__(self, other: "PolyF2") -> "PolyF2":
        self._check_arity(other)
        if not (self.is_zero() or other.is_zero()) and self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return PolyF2(self.k, self.terms ^ other.terms)

    def __mul__(self, other: "PolyF2") -> "PolyF2":
        # degrees may differ: product of homogeneous inputs is homogeneous
        self._check_arity(other)
        acc: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                m = mono_mul(a, b)
                if m in acc:
                    acc.discard(m)
                else:
                    acc.add(m)
        return PolyF2(self.k, acc)

    def _check_arity(self, other: "PolyF2") -> None:
        if not isinstance(other, PolyF2):
            raise TypeError(f"expected PolyF2, got {type(other).__name__}")
        if self.k != other.k:
            raise ValueError(f"variable count mismatch: {self.k} vs {other.k}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyF2)
            and self.k == other.k
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.k, self.terms))

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        from .parsing import format_poly

        return f"PolyF2(k={self.k}, {format_poly(self)})"


def weight_vector(m: Monomial) -> tuple[int, ...]:
    """Weight vector of a monomial: entry j counts set bit j-1 across exponents.

    Trailing zeros are trimmed; the constant monomial maps to ().
    """
    validate_monomial(m)
    width = max(m).bit_length() if any(m) else 0
    return tuple(sum((e >> j) & 1 for e in m) for j in range(width))


def weight_degree(w: tuple[int, ...]) -> int:
    """deg(omega) = sum over s >= 1 of 2^(s-1) * omega_s."""
    return sum(ws << s for s, ws in enumerate(w))
