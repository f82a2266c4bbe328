"""Digamma, trigamma, and normalized Hermite functions.

The closed-form norm and energy identities of the split well reduce to
polygamma evaluations with arguments in (0, 2), and the fat-tail
oscillator state needs Hermite functions up to order ~1e4 without
overflow.  Strategy for the polygammas: lift the argument above
``_LIFT`` by the forward recurrences, then apply the Bernoulli
asymptotic series, which at u >= 10 is accurate to well below 1e-14.

All functions here are pure; there is no shared mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._kernels import hermite_point

_LIFT = 10.0
_EPS = 2.220446049250313e-16

# Bernoulli-number coefficients B_{2k}/(2k) for the digamma tail
# sum_{k>=1} B_{2k} / (2k u^{2k}).
_DIGAMMA_TAIL = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

# Coefficients B_{2k} for the trigamma tail sum_{k>=1} B_{2k} / u^{2k+1}.
_TRIGAMMA_TAIL = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)


@dataclass(frozen=True)
class SpecialValue:
    """A function value with an absolute error bound."""

    value: float
    abs_error_bound: float


def _digamma_value(u: float) -> float:
    if u <= 0.0:
        raise ValueError(f"digamma requires u > 0, got {u}")
    shift = 0.0
    while u < _LIFT:
        shift -= 1.0 / u
        u += 1.0
    inv = 1.0 / u
    inv2 = inv * inv
    tail = 0.0
    power = inv2
    for coeff in _DIGAMMA_TAIL:
        tail += coeff * power
        power *= inv2
    return shift + math.log(u) - 0.5 * inv - tail


def _trigamma_value(u: float) -> float:
    if u <= 0.0:
        raise ValueError(f"trigamma requires u > 0, got {u}")
    shift = 0.0
    while u < _LIFT:
        shift += 1.0 / (u * u)
        u += 1.0
    inv = 1.0 / u
    inv2 = inv * inv
    tail = 0.0
    power = inv2 * inv
    for coeff in _TRIGAMMA_TAIL:
        tail += coeff * power
        power *= inv2
    return shift + inv + 0.5 * inv2 + tail


def digamma(u: float) -> SpecialValue:
    """Psi_0(u) = d ln Gamma(u) / du for u > 0.

    The bound accounts for the truncated asymptotic tail plus the
    rounding of the recurrence lift, which is dominated by 1/u when u
    is small.
    """
    value = _digamma_value(u)
    bound = 5e-16 + 8.0 * _EPS * (abs(value) + 1.0 / u)
    return SpecialValue(value, bound)


def trigamma(u: float) -> SpecialValue:
    """Psi_1(u) = sum_{k>=0} 1/(u+k)^2 for u > 0."""
    value = _trigamma_value(u)
    bound = 5e-16 + 8.0 * _EPS * (abs(value) + 1.0 / (u * u))
    return SpecialValue(value, bound)


def hermite_fn(n: int, x: float) -> float:
    """L2-normalized harmonic-oscillator eigenfunction phi_n(x).

    Uses the stable three-term recurrence
      phi_{n+1} = x sqrt(2/(n+1)) phi_n - sqrt(n/(n+1)) phi_{n-1}
    seeded with phi_0 = pi**-0.25 * exp(-x^2/2), so no 2^n n! factors
    ever appear.  Deep in the Gaussian tail (x^2/2 beyond ~745) the
    seed underflows and the result is a flushed 0.
    """
    n = int(n)
    if n < 0:
        raise ValueError("hermite_fn requires n >= 0")
    if n > 100_000:
        raise ValueError("hermite_fn supports n <= 100000")
    return float(hermite_point(n, float(x)))
