"""Scalar special functions used by the gamma count model.

Hand-rolled (series / continued fraction) so results are bit-stable across
platforms. SciPy and mpmath appear only as independent references in the
test suite.
"""

from __future__ import annotations

import math

MAX_TERMS = 10_000
_EPS = 1e-15
_TINY = 1e-300


class ConvergenceError(RuntimeError):
    """A series or continued fraction exhausted its term budget."""


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function for x > 0."""
    if x <= 0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 8.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    # asymptotic expansion, Bernoulli terms through x**-10
    tail = inv2 * (
        1.0 / 12.0
        - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0)))
    )
    return acc + math.log(x) - 0.5 / x - tail


def _lower_series(a: float, x: float) -> float:
    """Regularized P(a, x) by power series; requires x < a + 1."""
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(MAX_TERMS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete gamma series stalled at a={a}, x={x}")


def _upper_cf(a: float, x: float) -> float:
    """Regularized Q(a, x) by continued fraction (modified Lentz); x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    f = d
    for i in range(1, MAX_TERMS + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        f *= delta
        if abs(delta - 1.0) < _EPS:
            return f * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete gamma continued fraction stalled at a={a}, x={x}")


def regularized_gamma_p(a: float, x: float) -> float:
    """P(a, x) = gamma(a, x) / Gamma(a), the regularized lower incomplete gamma."""
    if a <= 0:
        raise ValueError(f"order must be positive, got {a}")
    if x < 0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _lower_series(a, x)
    return 1.0 - _upper_cf(a, x)


def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x), computed on whichever side is accurate."""
    if a <= 0:
        raise ValueError(f"order must be positive, got {a}")
    if x < 0:
        raise ValueError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return 1.0 - _lower_series(a, x)
    return _upper_cf(a, x)


def lower_incomplete_gamma(alpha: float, x: float) -> float:
    """Unnormalized lower incomplete gamma integral from 0 to x."""
    return regularized_gamma_p(alpha, x) * math.gamma(alpha)


def generalized_incomplete_gamma(alpha: float, z1: float, z2: float) -> float:
    """Gamma integral of t**(alpha-1) e**-t between z1 and z2, 0 <= z1 <= z2."""
    if not 0.0 <= z1 <= z2:
        raise ValueError(f"need 0 <= z1 <= z2, got z1={z1}, z2={z2}")
    # swap to the accurate tail: P near 0, Q near infinity
    if z1 >= alpha + 1.0:
        diff = regularized_gamma_q(alpha, z1) - regularized_gamma_q(alpha, z2)
    else:
        diff = regularized_gamma_p(alpha, z2) - regularized_gamma_p(alpha, z1)
    return diff * math.gamma(alpha)


def hyp2f2_special(alpha: float, z: float) -> float:
    """2F2(a, a; a+1, a+1; -z) for z >= 0.

    The defining alternating series loses all double-precision significance
    once z is moderately large, so the sum is taken over the equivalent
    all-positive expansion

        2F2(a, a; a+1, a+1; -z) = a^2 e^-z sum_k z^k s_k / prod_{j=0..k}(a+j),
        s_k = sum_{j=0..k} 1/(a+j),

    which follows from differentiating the e^-z-scaled power series of the
    lower incomplete gamma function with respect to its order. Every term is
    positive, so the stated accuracy holds at any z the exponential scale can
    represent.
    """
    if alpha <= 0:
        raise ValueError(f"order must be positive, got {alpha}")
    if z < 0:
        raise ValueError(f"argument must be nonnegative, got {z}")
    if z == 0.0:
        return 1.0
    if z > 700.0:
        raise ConvergenceError(f"z={z} exceeds the exponential scale of the expansion")
    term = 1.0 / alpha  # z^k / prod(a+j) at k = 0
    s = 1.0 / alpha
    total = term * s
    for k in range(1, MAX_TERMS + 1):
        denom = alpha + k
        term *= z / denom
        s += 1.0 / denom
        contrib = term * s
        total += contrib
        if k > z and contrib < total * _EPS:
            return alpha * alpha * math.exp(-z) * total
    raise ConvergenceError(f"2F2 series exhausted {MAX_TERMS} terms at alpha={alpha}, z={z}")
