"""Binary-digit arithmetic: alpha, mu, and binomial parity.

These three functions drive every filter in the package: the generator
admissibility test alpha(d' + k) <= k, Wood's vanishing criterion
alpha(d + k) > k, and Kameko's degree-halving condition mu(d) = k.
"""


def alpha(n: int) -> int:
    """Number of ones in the binary expansion of ``n`` (n >= 0)."""
    if n < 0:
        raise ValueError(f"alpha is defined for non-negative integers, got {n}")
    return n.bit_count()


def mu(n: int) -> int:
    """Smallest ell >= 1 with alpha(n + ell) <= ell (n >= 1).

    Equivalently the least number of terms needed to write n as a sum of
    integers of the form 2^u - 1 with u > 0.  The scan terminates because
    ell = n always satisfies the inequality.
    """
    if n < 1:
        raise ValueError(f"mu is defined for positive integers, got {n}")
    ell = 1
    while alpha(n + ell) > ell:
        ell += 1
    return ell


def binom_mod2(e: int, i: int) -> int:
    """C(e, i) mod 2 by Lucas' criterion: 1 iff i's bits are a subset of e's."""
    if e < 0 or i < 0:
        raise ValueError("binom_mod2 needs non-negative arguments")
    if i > e:
        return 0
    return 0 if i & (e - i) else 1
