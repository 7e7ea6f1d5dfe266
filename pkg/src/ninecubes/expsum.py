"""Exponential sums over prime cubes and the weighted solution count r(n).

The generating sum for slot j is S_j(alpha) = sum over primes p with
M < |a_j| p^3 <= N of log(p) e(a_j p^3 alpha).  The weighted count

    r(n) = sum over solutions of n = a_1 p_1^3 + ... + a_9 p_9^3
           of log(p_1) ... log(p_9),   all |a_j| p_j^3 in (M, N],

is computed two independent ways: as a nine-fold convolution of the
weighted supports (direct route) and as the exact trigonometric-polynomial
coefficient recovered by averaging prod_j S_j(t/T) e(-n t/T) over T
equispaced points, with T a power of two past the exponent range so no
alias lands on the target frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import arith, convolve, singular
from .characters import DirichletCharacter
from .errors import DomainError, ResourceLimitError
from .localdata import CoefficientSystem

FOURIER_T_CAP = 1 << 26
MOMENT_SPAN_CAP = 10**8


@dataclass(frozen=True, eq=False)
class WeightedCubeSupport:
    """Primes p with M < |a| p^3 <= N, their signed indices a p^3, and log p."""

    slot: int
    coefficient: int
    primes: np.ndarray
    indices: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)


def cube_support(system: CoefficientSystem, j: int, M: int, N: int) -> WeightedCubeSupport:
    """Support of slot j over the window (M, N]."""
    if not 0 <= j < 9:
        raise DomainError(f"slot must be 0..8, got {j}")
    if not 0 < M < N:
        raise DomainError(f"need 0 < M < N, got M={M}, N={N}")
    aj = system.a[j]
    mag = abs(aj)
    p_hi = arith.icbrt(N // mag)
    primes = [p for p in arith.sieve_primes(max(p_hi, 2)) if mag * p**3 > M and mag * p**3 <= N]
    arr = np.array(primes, dtype=np.int64)
    return WeightedCubeSupport(
        slot=j,
        coefficient=aj,
        primes=arr,
        indices=aj * arr**3,
        weights=np.log(arr.astype(np.float64)) if len(arr) else np.zeros(0),
    )


def prime_cube_sum(alpha: float, j: int, system: CoefficientSystem, M: int, N: int) -> complex:
    """S_j(alpha), the log-weighted exponential sum of slot j."""
    sup = cube_support(system, j, M, N)
    if len(sup) == 0:
        return 0j
    phase = (sup.indices.astype(np.float64) * alpha) % 1.0
    return complex(np.dot(sup.weights, np.exp(2j * np.pi * phase)))


def integer_cube_sum(lam: float, j: int, system: CoefficientSystem, M: int, N: int) -> complex:
    """V_j(lambda): the same sum over all integers m in the window, unit weights."""
    aj = system.a[j]
    mag = abs(aj)
    m_hi = arith.icbrt(N // mag)
    ms = np.array([m for m in range(1, m_hi + 1) if mag * m**3 > M], dtype=np.int64)
    if len(ms) == 0:
        return 0j
    phase = ((aj * ms**3).astype(np.float64) * lam) % 1.0
    return complex(np.exp(2j * np.pi * phase).sum())


def char_twisted_difference(
    chi: DirichletCharacter, lam: float, j: int, system: CoefficientSystem, M: int, N: int
) -> complex:
    """W_j(chi, lambda): twisted prime sum minus its expected main term.

    For principal chi the subtracted term is the full integer sum V_j, so
    the value measures how well log-weighted primes fill the window.
    """
    sup = cube_support(system, j, M, N)
    twisted = 0j
    if len(sup):
        vals = np.array([chi(int(p)) for p in sup.primes], dtype=np.complex128)
        phase = (sup.indices.astype(np.float64) * lam) % 1.0
        twisted = complex(np.dot(sup.weights * vals, np.exp(2j * np.pi * phase)))
    if chi.is_principal:
        return twisted - integer_cube_sum(lam, j, system, M, N)
    return twisted


def _supports(system: CoefficientSystem, M: int, N: int) -> list[WeightedCubeSupport]:
    return [cube_support(system, j, M, N) for j in range(9)]


def weighted_count_direct(
    system: CoefficientSystem, M: int, N: int, cap: int = convolve.CELL_CAP
) -> float:
    """r(n) by windowed nine-fold convolution of the weighted supports."""
    sups = _supports(system, M, N)
    if any(len(s) == 0 for s in sups):
        return 0.0
    parts = [convolve.from_sparse(s.indices, s.weights, cap=cap) for s in sups]
    return convolve.convolve_read(parts, system.n, cap=cap)


def solution_tuple_count(
    system: CoefficientSystem, M: int, N: int, cap: int = convolve.CELL_CAP
) -> int:
    """Number of prime 9-tuples counted by r(n), exact."""
    sups = _supports(system, M, N)
    if any(len(s) == 0 for s in sups):
        return 0
    parts = [convolve.from_sparse(s.indices, np.ones(len(s)), cap=cap) for s in sups]
    return convolve.count_read(parts, system.n, cap=cap)


def weighted_count_fourier(
    system: CoefficientSystem, M: int, N: int, t_cap: int = FOURIER_T_CAP
) -> float:
    """r(n) recovered by sampling prod S_j on T equispaced points.

    T is the least power of two exceeding both n - K_min and K_max - n,
    where [K_min, K_max] is the attainable exponent range; the only
    multiple of T in the shifted exponent range is then zero.
    """
    sups = _supports(system, M, N)
    if any(len(s) == 0 for s in sups):
        return 0.0
    k_min = sum(int(s.indices.min()) for s in sups)
    k_max = sum(int(s.indices.max()) for s in sups)
    n = system.n
    if not k_min <= n <= k_max:
        return 0.0
    reach = max(k_max - n, n - k_min, 1)
    T = 1 << reach.bit_length()  # least power of two > reach
    if T > t_cap:
        raise ResourceLimitError(f"sampling length {T} exceeds cap {t_cap}")
    spectrum = np.ones(T // 2 + 1, dtype=np.complex128)
    grid = np.zeros(T, dtype=np.float64)
    for s in sups:
        grid[:] = 0.0
        np.add.at(grid, s.indices % T, s.weights)
        spectrum *= np.fft.rfft(grid)
    return float(np.fft.irfft(spectrum, T)[n % T])


def eighth_power_moment(
    system: CoefficientSystem, j: int, M: int, N: int, cap: int = MOMENT_SPAN_CAP
) -> float:
    """Integral of |S_j|^8 over [0,1]: the weighted count of p1^3+..+p4^3 = p5^3+..+p8^3.

    Computed as the sum of squared coefficients of S_j^4, which is a
    four-fold convolution of the support.
    """
    sup = cube_support(system, j, M, N)
    if len(sup) == 0:
        return 0.0
    base = convolve.from_sparse(sup.primes**3, sup.weights, cap=cap)
    h = convolve.convolve_full([base] * 4, cap=cap)
    return float(np.dot(h.values, h.values))


@dataclass(frozen=True)
class MinorScanPoint:
    alpha: float
    magnitude: float


@dataclass(frozen=True)
class MinorScanReport:
    """Sup of |S_9| over grid points falling on minor arcs."""

    grid_step: float
    points_total: int
    points_minor: int
    sup_abs: float | None
    sup_alpha: float | None
    reference_power: float  # N_9^(19/60)
    ratio: float | None


def minor_arc_sup(
    system: CoefficientSystem,
    dissection,
    M: int,
    N: int,
    grid_step: float,
    j: int = 8,
) -> MinorScanReport:
    """Scan |S_j| on an equispaced grid restricted to the minor arcs.

    An empty minor set (every grid point major) is reported distinctly
    with sup_abs = None.
    """
    from .arcs import classify

    if grid_step <= 0 or grid_step >= 1:
        raise DomainError(f"grid step must lie in (0, 1), got {grid_step}")
    q_big = dissection.Q
    start = 1.0 / q_big
    npts = int(math.ceil(1.0 / grid_step))
    sup = cube_support(system, j, M, N)
    n_j = N // abs(system.a[j])
    ref = n_j ** (19.0 / 60.0)
    best: tuple[float, float] | None = None
    minor = 0
    for i in range(npts):
        alpha = start + i * grid_step
        if alpha >= 1.0 + start:
            break
        if classify(alpha, dissection) is not None:
            continue
        minor += 1
        phase = (sup.indices.astype(np.float64) * alpha) % 1.0
        mag = abs(np.dot(sup.weights, np.exp(2j * np.pi * phase)))
        if best is None or mag > best[0]:
            best = (float(mag), alpha)
    return MinorScanReport(
        grid_step=grid_step,
        points_total=npts,
        points_minor=minor,
        sup_abs=None if best is None else best[0],
        sup_alpha=None if best is None else best[1],
        reference_power=ref,
        ratio=None if best is None else best[0] / ref,
    )


@dataclass(frozen=True)
class RnReport:
    """r(n) by both routes next to the main-term prediction."""

    n: int
    M: int
    N: int
    coeffs: tuple[int, ...]
    r_direct: float
    r_fourier: float
    main_term: float
    series_cutoff: int
    ratio: float | None


def rn_report(
    system: CoefficientSystem, M: int, N: int, series_cutoff: int = singular.DEFINITION_ROUTE_MAX
) -> RnReport:
    direct = weighted_count_direct(system, M, N)
    fourier = weighted_count_fourier(system, M, N)
    mt = singular.main_term(system, M, N, series_cutoff)
    return RnReport(
        n=system.n,
        M=M,
        N=N,
        coeffs=system.a,
        r_direct=direct,
        r_fourier=fourier,
        main_term=mt,
        series_cutoff=series_cutoff,
        ratio=None if mt == 0 else direct / mt,
    )
