"""Explicit prime solutions of a1*p1^3 + ... + a9*p9^3 = n.

The solver is a meet-in-the-middle search over nine independent prime
slots: partial sums of the first four slots go into a hash index keyed
by value, the remaining five slots are scanned for exact complements.
Among all solutions under the prime bound it returns the one minimizing
max p_j, tie-broken by the lexicographically smallest tuple (the max is
the figure of merit; solution sizes are compared against n^(1/3)).

A solution is verified in exact integer arithmetic before it is
returned.  `solution_exists` is an independent reachability check used
to cross-validate the solver, and `threshold_scan` tabulates, for
all-positive systems, the least representable n in a range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import arith, expsum
from .errors import DomainError, ResourceLimitError
from .localdata import CoefficientSystem, validate_coefficients

PRIME_BOUND_CAP = 10**4
# element visits across index build + complement scan
ENUM_CAP = 2 * 10**8
# total stored sums across the suffix-reachability refinement
REFINE_CAP = 3 * 10**7


def validate_system(system: CoefficientSystem) -> list[str]:
    """Violated solubility conditions, empty when the system is admissible."""
    return validate_coefficients(system.a, system.n)


@dataclass(frozen=True)
class SolutionRecord:
    system: CoefficientSystem
    primes: tuple[int, ...]
    max_p: int
    n_cuberoot: float
    found_by: str

    def __post_init__(self) -> None:
        total = sum(aj * p**3 for aj, p in zip(self.system.a, self.primes))
        if total != self.system.n:
            raise AssertionError(f"solution check failed: {total} != {self.system.n}")


@dataclass(frozen=True)
class SearchExhausted:
    system: CoefficientSystem
    prime_bound: int
    window: tuple[int, int] | None
    states_visited: int


def _check_span(system: CoefficientSystem, prime_bound: int) -> None:
    # partial sums must stay inside int64 for the vectorized search
    span = sum(abs(aj) for aj in system.a) * prime_bound**3 + abs(system.n)
    if span >= 2**62:
        raise ResourceLimitError(
            f"coefficient sums near {span} overflow the 64-bit search arithmetic"
        )


def _slot_primes(
    system: CoefficientSystem,
    prime_bound: int,
    window: tuple[int, int] | None,
) -> list[np.ndarray]:
    """Per-slot candidate primes, window-filtered when a window is given."""
    if prime_bound < 2:
        raise DomainError(f"prime bound must be >= 2, got {prime_bound}")
    if prime_bound > PRIME_BOUND_CAP:
        raise DomainError(f"prime bound {prime_bound} exceeds cap {PRIME_BOUND_CAP}")
    _check_span(system, prime_bound)
    primes = np.asarray(arith.sieve_primes(prime_bound), dtype=np.int64)
    out = []
    for j in range(9):
        if window is None:
            out.append(primes)
        else:
            M, N = window
            sup = expsum.cube_support(system, j, M, N)
            out.append(sup.primes[sup.primes <= prime_bound])
    return out


def _expand(slots: list[np.ndarray], coeffs: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """All ordered tuples over the given slots: (signed sums, max prime)."""
    sums = np.zeros(1, dtype=np.int64)
    maxes = np.zeros(1, dtype=np.int64)
    for ps, aj in zip(slots, coeffs):
        cubes = aj * ps.astype(np.int64) ** 3
        sums = (sums[:, None] + cubes[None, :]).ravel()
        maxes = np.maximum(maxes[:, None], ps[None, :].astype(np.int64)).ravel()
    return sums, maxes


def _unravel(flat: int, sizes: list[int]) -> list[int]:
    out = []
    for size in reversed(sizes):
        out.append(flat % size)
        flat //= size
    out.reverse()
    return out


def _lex_refine(
    system: CoefficientSystem,
    slots: list[np.ndarray],
    max_p: int,
) -> tuple[int, ...] | None:
    """Lexicographically least solution tuple with all primes <= max_p.

    Builds suffix reachability sets right to left, then fixes slots left
    to right, always taking the smallest prime whose residual target
    stays reachable.  Returns None when the sets would exceed REFINE_CAP.
    """
    capped = [ps[ps <= max_p] for ps in slots]
    cubes = [aj * ps.astype(np.int64) ** 3 for aj, ps in zip(system.a, capped)]
    # suffix[j] = sorted achievable sums over slots j..8
    suffix: list[np.ndarray | None] = [None] * 10
    suffix[9] = np.zeros(1, dtype=np.int64)
    stored = 1
    for j in range(8, -1, -1):
        prev = suffix[j + 1]
        if len(capped[j]) * len(prev) + stored > REFINE_CAP:
            return None
        suffix[j] = np.unique(cubes[j][:, None] + prev[None, :])
        stored += len(suffix[j])
    target = system.n
    chosen = []
    for j in range(9):
        nxt = suffix[j + 1]
        picked = None
        for p, c in zip(capped[j], cubes[j]):
            rest = target - int(c)
            i = np.searchsorted(nxt, rest)
            if i < len(nxt) and nxt[i] == rest:
                picked = int(p)
                target = rest
                break
        if picked is None:
            return None
        chosen.append(picked)
    return tuple(chosen)


def _search_at(
    system: CoefficientSystem,
    prime_bound: int,
    window: tuple[int, int] | None,
) -> SolutionRecord | SearchExhausted:
    slots = _slot_primes(system, prime_bound, window)
    if any(len(ps) == 0 for ps in slots):
        return SearchExhausted(system, prime_bound, window, 0)

    left, mid, last = slots[:4], slots[4:8], slots[8]
    size_left = math.prod(len(ps) for ps in left)
    size_mid = math.prod(len(ps) for ps in mid)
    visits = size_left + size_mid * len(last)
    if visits > ENUM_CAP:
        raise ResourceLimitError(
            f"search would visit {visits} states, cap is {ENUM_CAP}"
        )

    sums_left, max_left = _expand(left, system.a[:4])
    order = np.lexsort((max_left, sums_left))
    sums_left, max_left = sums_left[order], max_left[order]
    keys, first = np.unique(sums_left, return_index=True)
    # per distinct sum: least max prime and one witness achieving it
    key_max = max_left[first]
    key_witness = order[first]

    sums_mid, max_mid = _expand(mid, system.a[4:8])
    a9 = system.a[8]
    best_max = None
    best_tuple = None
    sizes_left = [len(ps) for ps in left]
    sizes_mid = [len(ps) for ps in mid]
    for p9 in last:
        c9 = a9 * int(p9) ** 3
        need = system.n - c9 - sums_mid
        pos = np.searchsorted(keys, need)
        pos[pos == len(keys)] = 0
        hit = keys[pos] == need
        if not hit.any():
            continue
        cand = np.maximum(np.maximum(key_max[pos[hit]], max_mid[hit]), int(p9))
        i = int(np.argmin(cand))
        if best_max is None or int(cand[i]) < best_max:
            best_max = int(cand[i])
            w_left = int(key_witness[pos[hit]][i])
            w_mid = int(np.flatnonzero(hit)[i])
            left_idx = _unravel(w_left, sizes_left)
            mid_idx = _unravel(w_mid, sizes_mid)
            best_tuple = tuple(
                [int(left[j][left_idx[j]]) for j in range(4)]
                + [int(mid[j][mid_idx[j]]) for j in range(4)]
                + [int(p9)]
            )

    if best_max is None:
        return SearchExhausted(system, prime_bound, window, visits)

    refined = _lex_refine(system, slots, best_max)
    if refined is not None:
        best_tuple = refined
        tag = "meet_in_the_middle+lex"
    else:
        tag = "meet_in_the_middle"
    return SolutionRecord(
        system=system,
        primes=best_tuple,
        max_p=best_max,
        n_cuberoot=abs(system.n) ** (1.0 / 3.0) if system.n else 0.0,
        found_by=tag,
    )


def find_solution(
    system: CoefficientSystem,
    prime_bound: int = 10**4,
    window: tuple[int, int] | None = None,
) -> SolutionRecord | SearchExhausted:
    """Best prime solution with all p_j <= prime_bound, or an exhaustion report.

    "Best" minimizes max p_j, then the tuple lexicographically.  The
    bound is deepened in stages so that small solutions are found
    without paying for the full bound; a solution found at a lower
    stage already has the globally minimal max p_j, since any better
    solution would live entirely inside the smaller stage.  The
    lexicographic pass is skipped (the meet-in-the-middle witness is
    returned as-is) when the refinement would exceed REFINE_CAP.
    """
    if prime_bound < 2:
        raise DomainError(f"prime bound must be >= 2, got {prime_bound}")
    if prime_bound > PRIME_BOUND_CAP:
        raise DomainError(f"prime bound {prime_bound} exceeds cap {PRIME_BOUND_CAP}")
    ladder = [b for b in (8, 32, 128, 512, 2048) if b < prime_bound]
    ladder.append(prime_bound)
    for bound in ladder:
        result = _search_at(system, bound, window)
        if isinstance(result, SolutionRecord):
            return result
    return result


def solution_exists(
    system: CoefficientSystem,
    prime_bound: int = 100,
    window: tuple[int, int] | None = None,
) -> bool:
    """Independent reachability check via a running set of partial sums."""
    slots = _slot_primes(system, prime_bound, window)
    if any(len(ps) == 0 for ps in slots):
        return False
    reach = np.zeros(1, dtype=np.int64)
    for j in range(9):
        cubes = system.a[j] * slots[j].astype(np.int64) ** 3
        if len(cubes) * len(reach) > REFINE_CAP:
            raise ResourceLimitError("reachability set too large")
        reach = np.unique(reach[:, None] + cubes[None, :])
    i = np.searchsorted(reach, system.n)
    return bool(i < len(reach) and reach[i] == system.n)


@dataclass(frozen=True)
class ThresholdRow:
    coeffs: tuple[int, ...]
    n: int | None
    found: bool
    max_p: int | None
    n_cuberoot: float | None
    D: int


def threshold_scan(
    coeff_grid,
    n_range,
    prime_bound: int = 100,
) -> list[ThresholdRow]:
    """Least representable n per all-positive system, scanned over n_range.

    Reachability of every candidate n is decided at once by a boolean
    convolution over [0, max(n_range)]; the witness for the least hit is
    then recovered with find_solution.
    """
    n_values = sorted(set(int(n) for n in n_range))
    if not n_values or n_values[0] < 1:
        raise DomainError("n_range must contain positive integers")
    n_max = n_values[-1]
    primes = arith.sieve_primes(prime_bound)
    rows = []
    for coeffs in coeff_grid:
        coeffs = tuple(int(c) for c in coeffs)
        if any(c <= 0 for c in coeffs):
            raise DomainError(f"threshold scan needs all-positive systems, got {coeffs}")
        reach = np.zeros(n_max + 1, dtype=bool)
        reach[0] = True
        for aj in coeffs:
            nxt = np.zeros(n_max + 1, dtype=bool)
            for p in primes:
                v = aj * int(p) ** 3
                if v > n_max:
                    break
                nxt[v:] |= reach[: n_max + 1 - v]
            reach = nxt
        hit = None
        for n in n_values:
            if reach[n]:
                hit = n
                break
        D = max(2, max(abs(c) for c in coeffs))
        if hit is None:
            rows.append(ThresholdRow(coeffs, None, False, None, None, D))
            continue
        record = find_solution(CoefficientSystem.make(coeffs, hit), prime_bound)
        assert isinstance(record, SolutionRecord)
        rows.append(
            ThresholdRow(coeffs, hit, True, record.max_p, record.n_cuberoot, D)
        )
    return rows
