"""Dyadic arithmetic: alpha, zeta, mu and the Kameko threshold t(k, d)."""

from __future__ import annotations

__all__ = ["alpha", "zeta", "beta", "mu", "mu_decomposition", "t_threshold"]


def alpha(n: int) -> int:
    """Number of ones in the binary expansion of n."""
    if n < 0:
        raise ValueError(f"alpha needs n >= 0, got {n}")
    return bin(n).count("1")


def zeta(n: int) -> int:
    """Largest u with 2^u dividing n."""
    if n < 1:
        raise ValueError(f"zeta needs n >= 1, got {n}")
    return (n & -n).bit_length() - 1


def beta(n: int) -> int:
    """min{u : alpha(n + u) <= u}."""
    u = 0
    while alpha(n + u) > u:
        u += 1
    return u


def mu(n: int) -> int:
    """Least r such that n is a sum of r numbers of the form 2^u - 1 (mu(0) = 0)."""
    if n < 0:
        raise ValueError(f"mu needs n >= 0, got {n}")
    return beta(n)


def mu_decomposition(n: int) -> tuple[int, ...]:
    """The exponents v1 > ... > v(s-1) >= vs > 0 with n = sum(2^vi - 1) and s = mu(n).

    Greedy: each part takes the largest 2^v - 1 whose remainder still fits
    into the parts that are left.
    """
    if n < 1:
        raise ValueError(f"mu_decomposition needs n >= 1, got {n}")
    s = mu(n)
    parts = []
    rest = n
    for left in range(s - 1, -1, -1):
        v = (rest + 1).bit_length() - 1
        while v > 0 and mu(rest - ((1 << v) - 1)) > left:
            v -= 1
        if left == 0 and (1 << v) - 1 != rest:
            raise AssertionError(f"decomposition of {n} failed")
        parts.append(v)
        rest -= (1 << v) - 1
    return tuple(parts)


def t_threshold(k: int, d: int) -> int:
    """t(k, d) = max(0, k - alpha(d + k) - zeta(d + k))."""
    if k < 1 or d < 0:
        raise ValueError(f"need k >= 1 and d >= 0, got k={k}, d={d}")
    return max(0, k - alpha(d + k) - zeta(d + k))
