import numpy as np
import pytest

from ninecubes import selftest
from ninecubes.errors import DomainError
from ninecubes.selftest import CHECKS, DEFAULT_SEED, random_valid_system, run_all


def test_registry_names_are_unique():
    names = [name for name, _ in CHECKS]
    assert len(names) == len(set(names)) == 11


def test_random_systems_are_valid():
    rng = np.random.default_rng(911)
    for _ in range(50):
        system = random_valid_system(rng, 500, 5000)
        assert system.is_valid
        assert len(system.a) == 9
    flat = random_valid_system(rng, 500, 5000, max_prime_slots=0, all_positive=True)
    assert all(abs(c) == 1 for c in flat.a) and flat.all_positive


def test_run_all_subset_deterministic():
    first = run_all(names=["arc_dissection"], seed=3)
    second = run_all(names=["arc_dissection"], seed=3)
    assert len(first) == 1
    assert first[0].name == "arc_dissection"
    assert first[0].passed
    assert first[0].detail == second[0].detail


def test_run_all_rejects_unknown_name():
    with pytest.raises(DomainError):
        run_all(names=["definitely_not_a_check"])


def test_failures_are_reported_not_raised(monkeypatch):
    def boom(rng):
        raise ValueError("synthetic breakage")

    monkeypatch.setattr(
        selftest, "CHECKS", (("fourier_direct", boom),) + tuple(selftest.CHECKS[1:])
    )
    results = run_all(names=["fourier_direct"], seed=DEFAULT_SEED)
    assert results[0].passed is False
    assert "ValueError" in results[0].detail
