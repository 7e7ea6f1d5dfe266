import itertools
import math

import numpy as np
import pytest

from ninecubes.arcs import build_dissection
from ninecubes.errors import DomainError
from ninecubes.expsum import (
    char_twisted_difference,
    cube_support,
    eighth_power_moment,
    integer_cube_sum,
    minor_arc_sup,
    prime_cube_sum,
    rn_report,
    solution_tuple_count,
    weighted_count_direct,
    weighted_count_fourier,
)
from ninecubes.characters import character_group
from ninecubes.localdata import CoefficientSystem

ONES = CoefficientSystem.make([1] * 9, 23)
MIXED = CoefficientSystem.make([1, 1, 1, -2, 3, 1, 5, 1, -1], 270)


def brute_weighted_count(system, M, N):
    sups = [cube_support(system, j, M, N) for j in range(9)]
    total = 0.0
    count = 0
    for tup in itertools.product(*(range(len(s)) for s in sups)):
        value = sum(int(s.indices[i]) for s, i in zip(sups, tup))
        if value == system.n:
            count += 1
            total += math.prod(float(s.weights[i]) for s, i in zip(sups, tup))
    return total, count


def test_support_window_is_half_open():
    sup = cube_support(ONES, 0, 8, 1000)
    assert list(sup.primes) == [3, 5, 7]  # 2^3 = 8 excluded, 10^3 > 1000
    sup = cube_support(ONES, 0, 7, 8)
    assert list(sup.primes) == [2]
    scaled = cube_support(MIXED, 3, 16, 1000)  # a = -2
    assert list(scaled.primes) == [3, 5, 7]
    assert list(scaled.indices) == [-54, -250, -686]
    with pytest.raises(DomainError):
        cube_support(ONES, 9, 7, 8)
    with pytest.raises(DomainError):
        cube_support(ONES, 0, 8, 8)


def test_single_atom_window_gives_log_power():
    system = CoefficientSystem.make([1] * 9, 72)
    want = math.log(2.0) ** 9
    assert weighted_count_direct(system, 7, 8) == pytest.approx(want, rel=1e-12)
    assert weighted_count_fourier(system, 7, 8) == pytest.approx(want, rel=1e-9)
    assert solution_tuple_count(system, 7, 8) == 1


def test_conjugate_symmetry():
    rng = np.random.default_rng(611)
    for _ in range(25):
        alpha = float(rng.uniform(0, 1))
        j = int(rng.integers(0, 9))
        s1 = prime_cube_sum(alpha, j, MIXED, 10, 5000)
        s2 = prime_cube_sum(1.0 - alpha, j, MIXED, 10, 5000)
        assert s2 == pytest.approx(s1.conjugate(), abs=1e-8)


def test_mean_square_is_weight_energy():
    # (1/T) sum over the T-th roots recovers sum of squared weights when
    # the support span stays below T
    sup = cube_support(ONES, 0, 8, 3000)
    span = int(sup.indices.max() - sup.indices.min())
    T = 8192
    assert span < T
    total = 0.0
    for t in range(T):
        s = np.dot(sup.weights, np.exp(2j * np.pi * ((sup.indices * t) % T) / T))
        total += abs(s) ** 2
    energy = float(np.dot(sup.weights, sup.weights))
    assert total / T == pytest.approx(energy, rel=1e-9)


def test_parity_blocked_target_counts_zero():
    # odd cubes only, even target: no solutions at all
    system = CoefficientSystem.make([1] * 9, 1000)
    assert weighted_count_direct(system, 8, 2000) == 0.0
    assert abs(weighted_count_fourier(system, 8, 2000)) <= 1e-6


def test_counts_match_brute_force():
    want, count = brute_weighted_count(MIXED, 8, 1000)
    assert count > 0
    assert weighted_count_direct(MIXED, 8, 1000) == pytest.approx(want, rel=1e-9)
    assert weighted_count_fourier(MIXED, 8, 1000) == pytest.approx(want, rel=1e-6)
    assert solution_tuple_count(MIXED, 8, 1000) == count


def test_eighth_moment_counts_quadruple_pairs():
    sup = cube_support(ONES, 0, 8, 1000)
    cubes = [int(p) ** 3 for p in sup.primes]
    logs = [float(w) for w in sup.weights]
    total = 0.0
    for quad in itertools.product(range(len(cubes)), repeat=4):
        s1 = sum(cubes[i] for i in quad)
        w1 = math.prod(logs[i] for i in quad)
        for quad2 in itertools.product(range(len(cubes)), repeat=4):
            if sum(cubes[i] for i in quad2) == s1:
                total += w1 * math.prod(logs[i] for i in quad2)
    assert eighth_power_moment(ONES, 0, 8, 1000) == pytest.approx(total, rel=1e-9)


def test_integer_sum_basics():
    v0 = integer_cube_sum(0.0, 0, ONES, 8, 1000)
    assert v0 == pytest.approx(8.0)  # m = 3..10
    rng = np.random.default_rng(612)
    for _ in range(10):
        lam = float(rng.uniform(0, 1))
        assert abs(integer_cube_sum(lam, 0, ONES, 8, 1000)) <= 8.0 + 1e-12


def test_twisted_difference_definition():
    sup = cube_support(ONES, 2, 8, 4000)
    for chi in character_group(5)[:3]:
        for lam in (0.0, 0.3):
            got = char_twisted_difference(chi, lam, 2, ONES, 8, 4000)
            want = sum(
                chi(int(p)) * math.log(p) * np.exp(2j * np.pi * ((int(p) ** 3 * lam) % 1.0))
                for p in sup.primes
            )
            if chi.is_principal:
                want -= integer_cube_sum(lam, 2, ONES, 8, 4000)
            assert got == pytest.approx(want, abs=1e-8)


def test_minor_scan_report_shape():
    dis = build_dissection(20000, 2, 0.01, 1.0)
    rep = minor_arc_sup(ONES, dis, 100, 20000, grid_step=0.01)
    assert rep.points_total == 100
    assert 0 <= rep.points_minor <= rep.points_total
    assert rep.reference_power == pytest.approx(float(20000) ** (19.0 / 60.0))
    if rep.points_minor:
        sup = cube_support(ONES, 8, 100, 20000)
        assert rep.sup_abs <= float(sup.weights.sum()) + 1e-9
        assert rep.ratio == pytest.approx(rep.sup_abs / rep.reference_power)


def test_rn_report_round_trip():
    system = CoefficientSystem.make([1] * 9, 72)
    rep = rn_report(system, 7, 8)
    assert rep.n == 72 and rep.M == 7 and rep.N == 8
    assert rep.coeffs == (1,) * 9
    assert rep.r_direct == pytest.approx(math.log(2.0) ** 9, rel=1e-12)
    assert rep.r_fourier == pytest.approx(rep.r_direct, rel=1e-9)
