"""Steenrod square action on F2 polynomials, implemented two ways.

``sq_recursive`` peels the lowest-index variable and applies the Cartan
expansion term by term, memoizing on (i, exponent tuple).  It is the
engine used for generator evaluation.

``sq_total_square`` substitutes x -> x + s*x^2 for every variable,
expands in the formal parameter s truncated at degree i, and reads off
the s^i coefficient.  It shares no code with the recursion and exists to
cross-check it.

Both agree with the axioms: Sq^0 = id, Sq^i(f) = 0 for i > deg f, and
Sq^(deg f)(f) = f^2.
"""

from __future__ import annotations

from .arith import binom_mod2
from .poly import Monomial, PolyF2, validate_monomial


class SqEvaluator:
    """Evaluation context owning a private memo cache.

    Contexts are cheap; concurrent work should give each worker its own.
    Cache entries are pure function values, so eviction (dropping the
    whole context) is always safe.
    """

    def __init__(self) -> None:
        self._memo: dict[tuple[int, Monomial], frozenset[Monomial]] = {}

    def sq_mono(self, i: int, m: Monomial) -> frozenset[Monomial]:
        """Term set of Sq^i applied to the monomial m."""
        if i < 0:
            raise ValueError(f"Sq index must be >= 0, got {i}")
        if i == 0:
            return frozenset((m,))
        if i > sum(m):
            # unstability: Sq^i vanishes above the degree (covers the
            # constant monomial for every i > 0)
            return frozenset()
        return self._sq_rec(i, m)

    def _sq_rec(self, i: int, m: Monomial) -> frozenset[Monomial]:
        key = (i, m)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        v = next(idx for idx, e in enumerate(m) if e > 0)
        e = m[v]
        rest = m[:v] + (0,) + m[v + 1 :]
        acc: set[Monomial] = set()
        for t in range(i + 1):
            if not binom_mod2(e, t):
                continue
            j = i - t
            if j == 0:
                sub: frozenset[Monomial] = frozenset((rest,))
            elif j > sum(rest):
                continue
            else:
                sub = self._sq_rec(j, rest)
            # rest and everything below it has exponent 0 at position v
            for r in sub:
                nm = r[:v] + (e + t,) + r[v + 1 :]
                if nm in acc:
                    acc.discard(nm)
                else:
                    acc.add(nm)
        out = frozenset(acc)
        self._memo[key] = out
        return out

    def sq_poly(self, i: int, f: PolyF2) -> PolyF2:
        """Sq^i extended over a polynomial by linearity."""
        if f.is_zero() or i == 0:
            return f
        acc: set[Monomial] = set()
        for m in f.terms:
            acc ^= self.sq_mono(i, m)
        return PolyF2(f.k, acc)


def sq_recursive(i: int, m: Monomial) -> PolyF2:
    """Sq^i on a monomial via the memoized Cartan recursion (fresh cache)."""
    validate_monomial(m)
    return PolyF2(len(m), SqEvaluator().sq_mono(i, m))


def sq_poly(i: int, f: PolyF2) -> PolyF2:
    """Sq^i on a polynomial via the recursive implementation (fresh cache)."""
    return SqEvaluator().sq_poly(i, f)


def sq_total_square(i: int, m: Monomial) -> PolyF2:
    """Sq^i on a monomial via total-square substitution.

    Tracks the polynomial sum over s-degrees c <= i of the expansion of
    prod_v (x_v + s*x_v^2)^(e_v) and returns the coefficient of s^i.
    """
    validate_monomial(m)
    if i < 0:
        raise ValueError(f"Sq index must be >= 0, got {i}")
    k = len(m)
    # series: s-degree -> set of monomials, truncated beyond degree i
    series: dict[int, set[Monomial]] = {0: {(0,) * k}}
    for v, e in enumerate(m):
        if e == 0:
            continue
        # (x + s x^2)^e = sum_c C(e, c) s^c x^(e + c) over F2
        var_terms = [(c, e + c) for c in range(min(i, e) + 1) if binom_mod2(e, c)]
        nxt: dict[int, set[Monomial]] = {}
        for sdeg, monos in series.items():
            for c, power in var_terms:
                if sdeg + c > i:
                    continue
                bucket = nxt.setdefault(sdeg + c, set())
                for mo in monos:
                    nm = mo[:v] + (power,) + mo[v + 1 :]
                    if nm in bucket:
                        bucket.discard(nm)
                    else:
                        bucket.add(nm)
        series = nxt
    return PolyF2(k, series.get(i, ()))
