"""Local (mod q) data attached to a nine-coefficient cubic system.

For a system a_1 x_1^3 + ... + a_9 x_9^3 = n the objects computed here are

    C_chi(a)  = sum_{k=1..q} chi(k) e(a k^3 / q)
    B(q)      = sum_{k mod q, gcd(k,q)=1} e(-k n / q) prod_j C_{chi_j}(a_j k)
    F(q)      = the same sum over all k mod q
    A(q)      = B(q, principal characters) / phi(q)^9
    N(q)      = #{unit 9-tuples (x_j) with sum a_j x_j^3 = n mod q}
    s(p)      = 1 + A(p) = p N(p) / phi(p)^9

A(q) is the per-modulus term of the singular series.  N(q) is kept in
exact integers through CRT-split cyclic convolutions; the float shadow
of the same count is used where only 1e-12 relative accuracy is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import arith
from .characters import DirichletCharacter, unit_roots
from .errors import DomainError, NumericIntegrityError, ResourceLimitError

LOCAL_Q_CAP = 10**6
EXACT_COUNT_CAP = 2 * 10**4
EXACT_CHECK_MAX = 500

# primes just below 2^31; enough pairwise products to cover any phi(q)^9 we allow
_CRT_MODULI = [2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549]


def validate_coefficients(coeffs, n: int) -> list[str]:
    """Violation messages for the solvability conditions; empty means valid.

    Checks: nine nonzero integer coefficients, parity sum(a) = n mod 2,
    pairwise coprime coefficients, and gcd(n, a_1, ..., a_9) = 1.
    """
    problems: list[str] = []
    coeffs = list(coeffs)
    if len(coeffs) != 9:
        problems.append(f"expected 9 coefficients, got {len(coeffs)}")
        return problems
    if any(a == 0 for a in coeffs):
        problems.append("all coefficients must be nonzero")
        return problems
    if (sum(coeffs) - n) % 2 != 0:
        problems.append(
            "parity violated: sum of coefficients and n differ mod 2 "
            "(solutions then need some x_j = 2, which the odd-prime windows exclude)"
        )
    for i in range(9):
        for j in range(i + 1, 9):
            if math.gcd(coeffs[i], coeffs[j]) != 1:
                problems.append(
                    f"coefficients {i + 1} and {j + 1} share a factor "
                    f"gcd({coeffs[i]},{coeffs[j]}) > 1"
                )
    if math.gcd(n, *coeffs) != 1:
        problems.append("gcd of n with all coefficients exceeds 1")
    return problems


@dataclass(frozen=True)
class CoefficientSystem:
    """Nine nonzero integer coefficients and the target n."""

    a: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if len(self.a) != 9:
            raise DomainError(f"expected 9 coefficients, got {len(self.a)}")
        if any(x == 0 for x in self.a):
            raise DomainError("coefficients must be nonzero")
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @classmethod
    def make(cls, coeffs, n: int) -> "CoefficientSystem":
        return cls(tuple(int(x) for x in coeffs), int(n))

    @property
    def size_bound(self) -> int:
        """D = max(2, |a_1|, ..., |a_9|)."""
        return max(2, max(abs(x) for x in self.a))

    @property
    def coefficient_product(self) -> int:
        return math.prod(self.a)

    def violations(self) -> list[str]:
        return validate_coefficients(self.a, self.n)

    @property
    def is_valid(self) -> bool:
        return not self.violations()

    @property
    def all_positive(self) -> bool:
        return all(x > 0 for x in self.a)


def _check_q(q: int, cap: int = LOCAL_Q_CAP) -> None:
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    if q > cap:
        raise ResourceLimitError(f"modulus {q} exceeds cap {cap}")


@lru_cache(maxsize=4096)
def _cube_table(q: int) -> np.ndarray:
    """k^3 mod q for k = 0..q-1."""
    k = np.arange(q, dtype=np.int64)
    return (k * k % q) * k % q


@lru_cache(maxsize=4096)
def _unit_mask(q: int) -> np.ndarray:
    return np.gcd(np.arange(q, dtype=np.int64), q) == 1


@lru_cache(maxsize=4096)
def principal_cubic_table(q: int) -> np.ndarray:
    """C_{chi_0}(a) for a = 0..q-1, via the DFT of the unit-cube histogram."""
    _check_q(q)
    if q == 1:
        return np.ones(1, dtype=np.complex128)
    cubes = _cube_table(q)[_unit_mask(q)]
    hist = np.bincount(cubes, minlength=q).astype(np.float64)
    # C(a) = sum_r hist[r] e(a r / q) = q * ifft(hist)[a]
    tab = q * np.fft.ifft(hist)
    tab.flags.writeable = False
    return tab


def cubic_char_sum_table(chi: DirichletCharacter) -> np.ndarray:
    """C_chi(a) for a = 0..q-1."""
    q = chi.modulus
    _check_q(q)
    if chi.is_principal:
        return principal_cubic_table(q)
    hist = np.zeros(q, dtype=np.complex128)
    np.add.at(hist, _cube_table(q), chi.value_table())
    return q * np.fft.ifft(hist)


def cubic_char_sum(chi: DirichletCharacter, a: int) -> complex:
    """C_chi(a) = sum_{k=1..q} chi(k) e(a k^3 / q)."""
    q = chi.modulus
    _check_q(q)
    if q == 1:
        return 1 + 0j
    idx = (a % q) * _cube_table(q) % q
    return complex(np.dot(chi.value_table(), unit_roots(q)[idx]))


def char_sum_bound_ok(chi: DirichletCharacter, a: int, slack: float = 1e-6) -> bool:
    """|C_chi(a)| <= 3 (3,p) (a, p^alpha)^(1/2) p^(alpha/2), prime-power modulus only."""
    q = chi.modulus
    fact = arith.factorize(q) if q > 1 else []
    if q > 1 and len(fact) != 1:
        raise DomainError(f"bound applies to prime-power moduli, got {q}")
    if q == 1:
        return True
    p, alpha = fact[0]
    bound = 3 * math.gcd(3, p) * math.sqrt(math.gcd(a, q)) * p ** (alpha / 2)
    return abs(cubic_char_sum(chi, a)) <= bound + slack


def twisted_sum_units(q: int, chars, system: CoefficientSystem) -> complex:
    """B(q): the nine-fold twisted sum over k coprime to q."""
    return _twisted_sum(q, chars, system, units_only=True)


def twisted_sum_all(q: int, chars, system: CoefficientSystem) -> complex:
    """F(q): the nine-fold twisted sum over all k mod q."""
    return _twisted_sum(q, chars, system, units_only=False)


def _twisted_sum(q: int, chars, system: CoefficientSystem, units_only: bool) -> complex:
    _check_q(q)
    chars = list(chars)
    if len(chars) != 9:
        raise DomainError(f"expected 9 characters, got {len(chars)}")
    if any(chi.modulus != q for chi in chars):
        raise DomainError("all characters must have modulus q")
    if q == 1:
        return 1 + 0j
    tables: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}
    for chi in chars:
        key = (chi.modulus, chi.exponents)
        if key not in tables:
            tables[key] = cubic_char_sum_table(chi)
    k = np.arange(q, dtype=np.int64)
    if units_only:
        k = k[_unit_mask(q)]
    total = unit_roots(q)[(-system.n) % q * k % q].copy()
    for chi, aj in zip(chars, system.a):
        total *= tables[(chi.modulus, chi.exponents)][aj % q * k % q]
    return complex(total.sum())


def _principal_twisted_sum(q: int, system: CoefficientSystem, units_only: bool) -> complex:
    """B(q) or F(q) at principal characters, without character machinery."""
    _check_q(q)
    if q == 1:
        return 1 + 0j
    tab = principal_cubic_table(q)
    k = np.arange(q, dtype=np.int64)
    if units_only:
        k = k[_unit_mask(q)]
    total = unit_roots(q)[(-system.n) % q * k % q].copy()
    for aj in system.a:
        total *= tab[aj % q * k % q]
    return complex(total.sum())


@lru_cache(maxsize=200000)
def series_term(q: int, system: CoefficientSystem) -> float:
    """A(q) = B(q at principal characters) / phi(q)^9, verified real."""
    _check_q(q)
    b = _principal_twisted_sum(q, system, units_only=True)
    scale = 1.0 + abs(b)
    if abs(b.imag) > 1e-9 * scale:
        raise NumericIntegrityError(f"A({q}) has imaginary part {b.imag:.3e} (scale {scale:.3e})")
    return b.real / arith.euler_phi(q) ** 9


def _cube_histograms(q: int, system: CoefficientSystem, units_only: bool) -> list[np.ndarray]:
    cubes = _cube_table(q)
    if units_only:
        cubes = cubes[_unit_mask(q)]
    return [np.bincount(aj % q * cubes % q, minlength=q) for aj in system.a]


def _count_solutions_crt(q: int, system: CoefficientSystem, units_only: bool) -> int:
    """Exact tuple count via cyclic convolutions run modulo several primes."""
    if q == 1:
        return 1
    base = arith.euler_phi(q) if units_only else q
    bound = base**9  # trivial upper bound for any stage value
    moduli: list[int] = []
    prod = 1
    for m in _CRT_MODULI:
        moduli.append(m)
        prod *= m
        if prod > 2 * bound:
            break
    if prod <= 2 * bound:
        raise ResourceLimitError(f"count mod {q} exceeds the CRT capacity")
    hists = _cube_histograms(q, system, units_only)
    target = system.n % q
    residues = []
    for m in moduli:
        acc = hists[0].astype(np.int64) % m
        for h in hists[1:]:
            full = np.convolve(acc, h.astype(np.int64) % m)
            full[: q - 1] += full[q:]
            acc = full[:q] % m
        residues.append(int(acc[target]))
    return arith.crt(residues, moduli)


@lru_cache(maxsize=65536)
def unit_solution_count(q: int, system: CoefficientSystem, cap: int = EXACT_COUNT_CAP) -> int:
    """N(q): unit 9-tuples with sum a_j x_j^3 = n mod q, exact."""
    _check_q(q, cap=cap)
    return _count_solutions_crt(q, system, units_only=True)


@lru_cache(maxsize=65536)
def residue_solution_count(q: int, system: CoefficientSystem, cap: int = EXACT_COUNT_CAP) -> int:
    """Auxiliary count over all residue 9-tuples mod q, exact."""
    _check_q(q, cap=cap)
    return _count_solutions_crt(q, system, units_only=False)


def unit_solution_count_float(q: int, system: CoefficientSystem) -> float:
    """Float shadow of N(q) via FFT convolutions; ~1e-12 relative accuracy."""
    _check_q(q)
    if q == 1:
        return 1.0
    hists = _cube_histograms(q, system, units_only=True)
    spectrum = np.ones(q // 2 + 1, dtype=np.complex128)
    for h in hists:
        spectrum *= np.fft.rfft(h.astype(np.float64))
    return float(np.fft.irfft(spectrum, q)[system.n % q])


def euler_factor(p: int, system: CoefficientSystem) -> float:
    """s(p) = 1 + A(p), cross-checked against p N(p) / phi(p)^9."""
    if not arith.is_prime(p):
        raise DomainError(f"euler_factor requires a prime, got {p}")
    s = 1.0 + series_term(p, system)
    if p <= EXACT_CHECK_MAX:
        shadow = p * unit_solution_count(p, system) / float(p - 1) ** 9
    else:
        shadow = p * unit_solution_count_float(p, system) / float(p - 1) ** 9
    if abs(s - shadow) > 1e-9 * max(1.0, abs(s), abs(shadow)):
        raise NumericIntegrityError(
            f"s({p}) identity violated: 1 + A = {s!r} vs p N / phi^9 = {shadow!r}"
        )
    return s


@dataclass(frozen=True)
class LocalData:
    """A(q), exact N(q), and s(p) when q is prime."""

    q: int
    series_term: float
    unit_solutions: int
    euler_factor: float | None


def local_data(q: int, system: CoefficientSystem) -> LocalData:
    _check_q(q, cap=EXACT_COUNT_CAP)
    a_q = series_term(q, system)
    n_q = unit_solution_count(q, system)
    s_p = euler_factor(q, system) if arith.is_prime(q) else None
    return LocalData(q=q, series_term=a_q, unit_solutions=n_q, euler_factor=s_p)


def cube_twist_vanishing_threshold(p: int, alpha: int, t_max: int = 6) -> int | None:
    """Least t with C over modulus p^t vanishing for primitive chi mod p^alpha.

    Scans t = alpha..t_max, inducing a primitive character mod p^alpha to
    modulus p^t and testing C(a) = 0 for all a coprime to p.  Returns the
    least t from which vanishing holds through t_max, or None.
    """
    from .characters import character_group, induce, principal_character

    if not arith.is_prime(p):
        raise DomainError(f"expected a prime, got {p}")
    if alpha == 0:
        base = [principal_character(1)]
    else:
        base = [chi for chi in character_group(p**alpha) if chi.is_primitive]
        if not base:
            return None
    vanish_from: int | None = None
    for t in range(max(alpha, 1), t_max + 1):
        q = p**t
        coprime = np.ones(q, dtype=bool)
        coprime[::p] = False
        all_zero = True
        for chi in base[:3]:  # a few primitive characters suffice for the scan
            lifted = induce(chi, q)
            tab = cubic_char_sum_table(lifted)
            if np.abs(tab[coprime]).max(initial=0.0) > 1e-7 * q:
                all_zero = False
                break
        if all_zero:
            if vanish_from is None:
                vanish_from = t
        else:
            vanish_from = None
    return vanish_from
