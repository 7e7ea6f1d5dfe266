import cmath
import math

import numpy as np
import pytest

from ninecubes import localdata
from ninecubes.characters import character_group, principal_character
from ninecubes.errors import DomainError
from ninecubes.localdata import (
    CoefficientSystem,
    cube_twist_vanishing_threshold,
    cubic_char_sum,
    char_sum_bound_ok,
    euler_factor,
    local_data,
    residue_solution_count,
    series_term,
    twisted_sum_all,
    twisted_sum_units,
    unit_solution_count,
    validate_coefficients,
)

ONES = CoefficientSystem.make([1] * 9, 23)
MIXED = CoefficientSystem.make([1, 1, 1, -2, 3, 1, 5, 1, -1], 14)


def brute_count(q, system, units_only):
    """Residue-class solution count by direct dict convolution (exact ints)."""
    counts = {0: 1}
    for a in system.a:
        hist = {}
        for k in range(q):
            if units_only and math.gcd(k, q) != 1:
                continue
            r = a * k**3 % q
            hist[r] = hist.get(r, 0) + 1
        new = {}
        for r1, c1 in counts.items():
            for r2, c2 in hist.items():
                r = (r1 + r2) % q
                new[r] = new.get(r, 0) + c1 * c2
        counts = new
    return counts.get(system.n % q, 0)


def brute_series_term(q, system):
    """A(q) from the definition with cmath arithmetic only."""
    units = [k for k in range(max(q, 1)) if math.gcd(k, q) == 1] or [0]

    def c_sum(m):
        return sum(cmath.exp(2j * cmath.pi * (m * x**3 % q) / q) for x in units)

    total = 0j
    for k in units:
        term = cmath.exp(-2j * cmath.pi * (k * system.n % q) / q)
        for a in system.a:
            term *= c_sum(a * k % q)
        total += term
    phi = len(units)
    return total.real / phi**9


def test_validator_messages():
    assert validate_coefficients([1] * 9, 23) == []
    assert validate_coefficients(MIXED.a, 14) == []
    assert "expected 9 coefficients" in validate_coefficients([1] * 8, 5)[0]
    assert "nonzero" in validate_coefficients([1] * 8 + [0], 5)[0]
    msgs = validate_coefficients([1] * 9, 24)
    assert len(msgs) == 1 and msgs[0].startswith("parity violated")
    msgs = validate_coefficients([2, 4, 1, 1, 1, 1, 1, 1, 1], 14)
    assert any("share a factor" in m for m in msgs)
    msgs = validate_coefficients([3, 3, 3, 3, 3, 3, 3, 3, 3], 27)
    assert any("gcd of n" in m for m in msgs)


def test_system_construction_guards():
    with pytest.raises(DomainError):
        CoefficientSystem.make([1] * 8, 5)
    with pytest.raises(DomainError):
        CoefficientSystem.make([1] * 8 + [0], 5)
    assert ONES.size_bound == 2
    assert MIXED.size_bound == 5
    assert MIXED.coefficient_product == 30
    assert not MIXED.all_positive and ONES.all_positive


def test_counts_match_brute_force():
    rng = np.random.default_rng(311)
    systems = [ONES, MIXED]
    for _ in range(3):
        coeffs = [int(rng.integers(1, 7)) * int(rng.choice([-1, 1])) for _ in range(9)]
        systems.append(CoefficientSystem.make(coeffs, int(rng.integers(0, 50))))
    for q in (2, 3, 4, 5, 8, 9, 12, 16, 25, 27, 30):
        for system in systems:
            assert unit_solution_count(q, system) == brute_count(q, system, True)
            assert residue_solution_count(q, system) == brute_count(q, system, False)


def test_series_term_matches_definition():
    rng = np.random.default_rng(312)
    systems = [ONES, MIXED]
    coeffs = [int(rng.integers(1, 5)) * int(rng.choice([-1, 1])) for _ in range(9)]
    systems.append(CoefficientSystem.make(coeffs, int(rng.integers(0, 40))))
    for q in (1, 2, 3, 5, 6, 7, 9, 10, 13, 14, 15, 18):
        for system in systems:
            assert series_term(q, system) == pytest.approx(
                brute_series_term(q, system), abs=1e-10
            )


def test_cubic_char_sum_matches_definition():
    for q in (7, 9, 13):
        for chi in character_group(q):
            for a in range(q):
                brute = sum(
                    chi(x) * cmath.exp(2j * cmath.pi * (a * x**3 % q) / q)
                    for x in range(q)
                    if math.gcd(x, q) == 1
                )
                assert abs(cubic_char_sum(chi, a) - brute) < 1e-10


def test_unit_weighted_sum_mod_2():
    # the single unit mod 2 gives B(2) = (-1)^(n + sum a)
    chi0 = principal_character(2)
    for n in (23, 31, 1):
        system = CoefficientSystem.make([1] * 9, n)
        value = twisted_sum_units(2, [chi0] * 9, system)
        assert value == pytest.approx(1.0)
    even = CoefficientSystem.make([1] * 9, 14)
    assert twisted_sum_units(2, [chi0] * 9, even) == pytest.approx(-1.0)


def test_full_sum_counts_solutions():
    # summing the twist over all residues k recovers q times the unit count
    for q in (2, 3, 4, 9, 10, 27):
        chars = [principal_character(q)] * 9
        for system in (ONES, MIXED):
            value = twisted_sum_all(q, chars, system)
            target = q * unit_solution_count(q, system)
            assert abs(value.imag) <= 1e-9 * (1 + target)
            assert round(value.real) == target
            assert abs(value.real - target) <= 1e-6 * (1 + target)


def test_full_equals_unit_sum_for_primitive_characters():
    rng = np.random.default_rng(313)
    for q in (5, 7, 9):
        prim = [chi for chi in character_group(q) if chi.is_primitive]
        for _ in range(5):
            chars = [prim[rng.integers(0, len(prim))] for _ in range(9)]
            b = twisted_sum_units(q, chars, ONES)
            f = twisted_sum_all(q, chars, ONES)
            assert abs(f - b) < 1e-9 * q


def test_series_term_multiplicative():
    for q1, q2 in [(2, 5), (5, 7), (2, 27), (9, 10), (7, 8)]:
        for system in (ONES, MIXED):
            left = series_term(q1 * q2, system)
            right = series_term(q1, system) * series_term(q2, system)
            assert left == pytest.approx(right, abs=1e-10)


def test_telescoping_prime_power_sums():
    # partial sums of A over p^0..p^eta collapse to the scaled count mod p^eta
    for p, eta_max in [(2, 3), (3, 3), (5, 2), (7, 2)]:
        for system in (ONES, MIXED):
            for eta in range(1, eta_max + 1):
                q = p**eta
                partial = sum(series_term(p**v, system) for v in range(eta + 1))
                phi = q - q // p
                target = q * unit_solution_count(q, system) / phi**9
                assert partial == pytest.approx(target, abs=1e-8)


def test_series_term_support():
    # squares of primes other than 3 kill the term; at 3 even level 27 dies,
    # since unit cubes mod 27 fill whole cosets of 1 + 9Z
    for q in (4, 25, 49, 121, 8, 50, 27, 81):
        assert abs(series_term(q, ONES)) < 1e-12
        assert abs(series_term(q, MIXED)) < 1e-12
    assert series_term(1, ONES) == pytest.approx(1.0)
    assert abs(series_term(9, ONES)) > 1e-6


def test_euler_factor_values():
    odd = CoefficientSystem.make([1] * 9, 23)
    even = CoefficientSystem.make([1] * 9, 14)
    assert euler_factor(2, odd) == pytest.approx(2.0)
    assert euler_factor(2, even) == pytest.approx(0.0)
    for p in (3, 5, 7, 11):
        s = euler_factor(p, odd)
        phi = float(p - 1)
        assert s == pytest.approx(p * unit_solution_count(p, odd) / phi**9, rel=1e-9)
    with pytest.raises(DomainError):
        euler_factor(6, odd)


def test_char_bound_exhaustive_small():
    for q in (2, 3, 4, 5, 7, 9, 25, 27):
        for chi in character_group(q):
            for a in range(q):
                assert char_sum_bound_ok(chi, a)


def test_cube_twist_vanishing_thresholds():
    # principal cube twists die at level 2 away from 3 and at level 3 at 3
    assert cube_twist_vanishing_threshold(2, 0) == 2
    assert cube_twist_vanishing_threshold(5, 0) == 2
    assert cube_twist_vanishing_threshold(7, 0) == 2
    assert cube_twist_vanishing_threshold(3, 0) == 3
    assert cube_twist_vanishing_threshold(3, 1) == 3
    assert cube_twist_vanishing_threshold(2, 1) is None


def test_local_data_bundle():
    data = local_data(9, ONES)
    assert data.q == 9
    assert data.unit_solutions == brute_count(9, ONES, True)
    assert data.euler_factor is None
    prime = local_data(7, ONES)
    assert prime.euler_factor == pytest.approx(1.0 + prime.series_term, rel=1e-9)
