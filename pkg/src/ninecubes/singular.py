"""Singular series and singular integral for the nine-cube system.

Two independent routes to the series: the partial sum of A(q) over q <= x,
and the Euler product of s(p) = 1 + A(p) with the 3-adic factor summed to
exponent 3.  A(q) vanishes unless q is a power of 3 up to 27 times a
squarefree number prime to 3, so the partial sum runs over that support
only, with A(q) taken from its definition for small q and assembled
multiplicatively from prime-power values above the definition cutoff.

The singular integral J(n) sums (m_1 ... m_9)^(-2/3) over integer tuples
with sum a_j m_j = n and M < |a_j| m_j <= N.  The constraint is linear in
the m_j: each m_j stands for a cube p_j^3, so the per-variable window
matches the cube window of the counting problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith, convolve
from .errors import DomainError, ResourceLimitError
from .localdata import CoefficientSystem, euler_factor, series_term

SERIES_X_CAP = 10**4
EULER_PMAX_CAP = 10**4
DEFINITION_ROUTE_MAX = 10**3
INTEGRAL_N_CAP = 10**6
NORMALIZER = 3.0**-9  # each V_j contributes a factor 1/3 in the main term


def series_support(q: int) -> bool:
    """True when A(q) is not forced to vanish: q = 3^e * squarefree, e <= 3, 3 squarefree-part free."""
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    for p, e in arith.factorize(q):
        if p == 3:
            if e > 3:
                return False
        elif e > 1:
            return False
    return True


def series_term_any(q: int, system: CoefficientSystem) -> float:
    """A(q) by definition for small q, multiplicatively from prime powers above."""
    if not series_support(q):
        return 0.0
    if q <= DEFINITION_ROUTE_MAX:
        return series_term(q, system)
    val = 1.0
    for p, e in arith.factorize(q):
        val *= series_term(p**e, system)
    return val


@dataclass(frozen=True)
class SeriesReport:
    """Truncated singular series with its per-modulus terms."""

    cutoff: int
    value: float
    terms: tuple[tuple[int, float], ...]
    tail_estimate: float
    euler_pmax: int
    euler_value: float
    euler_tail_factor: float


def _euler_tail_factor(pmax: int) -> float:
    """Bound for the neglected product over p > pmax, via |A(p)| <= 40 p^(-9/2)."""
    return math.exp(40.0 * (2.0 / 7.0) * pmax ** (-3.5)) - 1.0


def singular_series_euler(
    system: CoefficientSystem, pmax: int, cap: int = EULER_PMAX_CAP
) -> float:
    """Euler route: prod_{p <= pmax, p != 3} s(p) times the 3-adic factor.

    Every factor passes the s(p) = p N(p) / phi(p)^9 cross-check inside
    euler_factor (exact N below the check threshold, float shadow above).
    """
    if pmax < 3:
        raise DomainError(f"pmax must be >= 3, got {pmax}")
    if pmax > cap:
        raise ResourceLimitError(f"pmax {pmax} exceeds cap {cap}")
    value = 1.0 + series_term(3, system) + series_term(9, system) + series_term(27, system)
    for p in arith.sieve_primes(pmax):
        if p != 3:
            value *= euler_factor(p, system)
    return value


def singular_series_partial(
    system: CoefficientSystem, x: int, cap: int = SERIES_X_CAP
) -> SeriesReport:
    """Partial-sum route: sum of A(q) over the support q <= x."""
    if x < 1:
        raise DomainError(f"cutoff must be >= 1, got {x}")
    if x > cap:
        raise ResourceLimitError(f"cutoff {x} exceeds cap {cap}")
    terms: list[tuple[int, float]] = []
    for q in range(1, x + 1):
        if not series_support(q):
            continue
        terms.append((q, series_term_any(q, system)))
    value = math.fsum(t for _, t in terms)
    # empirical tail scale C/x, calibrated on the computed prefix
    tail = 0.0
    for frac in (4, 2):
        x0 = x // frac
        if x0 >= 1:
            seen = math.fsum(t for q, t in terms if q > x0)
            tail = max(tail, abs(seen) * x0 / x)
    pmax = min(x, EULER_PMAX_CAP)
    euler = singular_series_euler(system, max(pmax, 3))
    return SeriesReport(
        cutoff=x,
        value=value,
        terms=tuple(terms),
        tail_estimate=tail,
        euler_pmax=max(pmax, 3),
        euler_value=euler,
        euler_tail_factor=_euler_tail_factor(max(pmax, 3)),
    )


@dataclass(frozen=True)
class IntegralReport:
    """Windowed singular integral and its normalized size."""

    window_m: int
    window_n: int
    value: float
    normalized: float
    solution_count: float


def _integral_support(aj: int, M: int, N: int, cap: int) -> convolve.IndexedWeights:
    """Weights m^(-2/3) at indices aj * m over the window M < |aj| m <= N."""
    mag = abs(aj)
    m_lo = M // mag + 1  # least m with |aj| m > M
    m_hi = N // mag  # greatest m with |aj| m <= N
    if m_hi < m_lo:
        return convolve.IndexedWeights(0, np.zeros(0, dtype=np.float64))
    m = np.arange(m_lo, m_hi + 1, dtype=np.float64)
    w = m ** (-2.0 / 3.0)
    span = (m_hi - m_lo) * mag + 1
    if span > cap:
        raise ResourceLimitError(f"integral support span {span} exceeds cap {cap}")
    vals = np.zeros(span, dtype=np.float64)
    if aj > 0:
        vals[::mag] = w
        return convolve.IndexedWeights(aj * m_lo, vals)
    vals[::mag] = w[::-1]
    return convolve.IndexedWeights(aj * m_hi, vals)


def singular_integral(
    system: CoefficientSystem, M: int, N: int, cap: int = INTEGRAL_N_CAP
) -> IntegralReport:
    """J(n) over the window M < |a_j| m_j <= N, by staged convolution."""
    if not 0 < M < N:
        raise DomainError(f"need 0 < M < N, got M={M}, N={N}")
    if N > cap:
        raise ResourceLimitError(f"window bound {N} exceeds cap {cap}")
    parts = [_integral_support(aj, M, N, cap) for aj in system.a]
    value = convolve.convolve_read(parts, system.n)
    ones = [
        convolve.IndexedWeights(p.offset, (p.values > 0).astype(np.float64)) for p in parts
    ]
    count = convolve.convolve_read(ones, system.n)
    norm = value * abs(system.coefficient_product) ** (1.0 / 3.0) / float(N) ** 2
    if value < -1e-9:
        raise AssertionError("negative integral from nonnegative weights")
    return IntegralReport(
        window_m=M,
        window_n=N,
        value=max(value, 0.0),
        normalized=norm,
        solution_count=count,
    )


def main_term(
    system: CoefficientSystem, M: int, N: int, series_cutoff: int = DEFINITION_ROUTE_MAX
) -> float:
    """(1/3^9) * (series partial sum at the cutoff) * J(n)."""
    series = singular_series_partial(system, series_cutoff)
    integral = singular_integral(system, M, N)
    return NORMALIZER * series.value * integral.value
