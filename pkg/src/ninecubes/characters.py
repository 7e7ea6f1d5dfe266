"""Dirichlet characters mod q, represented by exponent vectors.

A character is stored as its exponents on the cyclic generators of
(Z/qZ)*.  Values are roots of unity; every evaluation goes through an
exact rational angle reduced mod 1 before a single trigonometric call,
so no drift accumulates from repeated multiplication.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import arith
from .errors import DomainError

VALUE_TABLE_CACHE_MAX_Q = 10**4
CACHE_DIR_ENV = "CGL_CACHE_DIR"


def e_of(x: float) -> complex:
    """exp(2 pi i x), with the argument reduced mod 1 first."""
    if not math.isfinite(x):
        raise DomainError(f"e_of requires a finite argument, got {x}")
    r = x % 1.0
    return complex(math.cos(2.0 * math.pi * r), math.sin(2.0 * math.pi * r))


@lru_cache(maxsize=512)
def unit_roots(m: int) -> np.ndarray:
    """Array of exp(2 pi i k/m) for k = 0..m-1 (read-only)."""
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    roots.flags.writeable = False
    return roots


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod `modulus` with the given generator exponents."""

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        ug = arith.unit_group(self.modulus)
        if len(self.exponents) != len(ug.components):
            raise DomainError("exponent vector does not match the unit group")
        for e, c in zip(self.exponents, ug.components):
            if not 0 <= e < c.order:
                raise DomainError(f"exponent {e} out of range for order {c.order}")

    @property
    def group(self) -> arith.UnitGroup:
        return arith.unit_group(self.modulus)

    def angle(self, k: int) -> Fraction | None:
        """Exact angle a with chi(k) = e(a), or None when gcd(k, q) > 1."""
        vec = self.group.exponent_vector(k)
        if vec is None:
            return None
        total = Fraction(0)
        for e, x, c in zip(self.exponents, vec, self.group.components):
            total += Fraction(e * x, c.order)
        return total % 1

    def __call__(self, k: int) -> complex:
        a = self.angle(k)
        if a is None:
            return 0j
        return e_of(float(a))

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def value_table(self) -> np.ndarray:
        """chi(k) for k = 0..q-1 as a complex array (cached for small q)."""
        return _value_table(self)

    def conductor(self) -> int:
        return _conductor(self)

    @property
    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def order(self) -> int:
        """Order of the character in the dual group."""
        return math.lcm(
            *(c.order // math.gcd(e, c.order) for e, c in zip(self.exponents, self.group.components)),
            1,
        )

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            raise DomainError("can only multiply characters of equal modulus")
        comps = self.group.components
        vec = tuple((a + b) % c.order for a, b, c in zip(self.exponents, other.exponents, comps))
        return DirichletCharacter(self.modulus, vec)


def principal_character(q: int) -> DirichletCharacter:
    ug = arith.unit_group(q)
    return DirichletCharacter(q, (0,) * len(ug.components))


def character_group(q: int, cap: int = arith.UNIT_GROUP_CAP) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, principal first."""
    ug = arith.unit_group(q, cap=cap)
    orders = [c.order for c in ug.components]
    return [DirichletCharacter(q, vec) for vec in product(*(range(m) for m in orders))]


_table_cache: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}


def _cache_path(chi: DirichletCharacter) -> str | None:
    root = os.environ.get(CACHE_DIR_ENV)
    if not root:
        return None
    tag = "-".join(str(e) for e in chi.exponents) or "0"
    return os.path.join(root, f"chartab-q{chi.modulus}-e{tag}.npy")


def _value_table(chi: DirichletCharacter) -> np.ndarray:
    key = (chi.modulus, chi.exponents)
    tab = _table_cache.get(key)
    if tab is not None:
        return tab
    path = _cache_path(chi)
    if path is not None and os.path.exists(path):
        tab = np.load(path)
    else:
        tab = _build_value_table(chi)
        if path is not None:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            np.save(path, tab)
    tab.flags.writeable = False
    if chi.modulus <= VALUE_TABLE_CACHE_MAX_Q:
        _table_cache[key] = tab
    return tab


def _build_value_table(chi: DirichletCharacter) -> np.ndarray:
    q = chi.modulus
    ug = chi.group
    if q == 1:
        return np.ones(1, dtype=np.complex128)
    ks = np.arange(q, dtype=np.int64)
    units = np.gcd(ks, q) == 1
    lam = math.lcm(*(c.order for c in ug.components))
    num = np.zeros(q, dtype=np.int64)
    for e, c in zip(chi.exponents, ug.components):
        num[units] += e * c.dlog[ks[units] % c.modulus] * (lam // c.order)
    num %= lam
    tab = np.zeros(q, dtype=np.complex128)
    tab[units] = unit_roots(lam)[num[units]]
    return tab


_conductor_cache: dict[tuple[int, tuple[int, ...]], int] = {}


def _conductor(chi: DirichletCharacter) -> int:
    """Smallest f | q such that chi factors through (Z/fZ)*."""
    key = (chi.modulus, chi.exponents)
    hit = _conductor_cache.get(key)
    if hit is not None:
        return hit
    q = chi.modulus
    if q == 1:
        return 1
    for f in arith.divisors(q):
        ok = True
        for u in range(1, q, f):  # candidates with u = 1 mod f
            if math.gcd(u, q) != 1:
                continue
            if chi.angle(u) != 0:
                ok = False
                break
        if ok:
            _conductor_cache[key] = f
            return f
    raise AssertionError("unreachable: f = q always works")


def induce(chi: DirichletCharacter, q: int) -> DirichletCharacter:
    """The character mod q induced by chi (requires chi.modulus | q)."""
    f = chi.modulus
    if q % f != 0:
        raise DomainError(f"cannot induce mod {q}: {f} does not divide {q}")
    ug = arith.unit_group(q)
    vec = []
    for c in ug.components:
        a = chi.angle(c.lifted)
        if a is None:  # lifted generator is a unit mod q, hence mod f
            raise AssertionError("unreachable")
        e = a * c.order
        assert e.denominator == 1
        vec.append(int(e) % c.order)
    return DirichletCharacter(q, tuple(vec))


def primitive_characters(q: int) -> list[DirichletCharacter]:
    return [chi for chi in character_group(q) if chi.is_primitive]
