"""Arithmetic in the prime field F_p.

Elements are identified with their canonical integer lift in {0, ..., p-1};
that lift is what range sums add up over the integers.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

# Deterministic Miller-Rabin: these witnesses are exact for n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_MODULUS = 1 << 31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 2**64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime 3 <= p < 2**31."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or isinstance(p, bool):
            raise TypeError(f"modulus must be an int, got {type(p).__name__}")
        if p < 3 or p >= MAX_MODULUS:
            raise ValueError(f"modulus {p} outside supported range [3, 2^31)")
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")

    def __int__(self) -> int:
        return self.p

    def __index__(self) -> int:
        return self.p

    @property
    def half(self) -> int:
        """(p - 1) / 2."""
        return (self.p - 1) // 2

    def __call__(self, n: int) -> "Residue":
        return Residue(n % self.p, self)


ModulusLike = Union[PrimeModulus, int]


def as_modulus(p: ModulusLike) -> PrimeModulus:
    if isinstance(p, PrimeModulus):
        return p
    return _cached_modulus(int(p))


@lru_cache(maxsize=256)
def _cached_modulus(p: int) -> PrimeModulus:
    return PrimeModulus(p)


class MixedModulusError(ValueError):
    pass


@dataclass(frozen=True)
class Residue:
    """An element of F_p stored as its lift in [0, p-1]."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.p:
            raise ValueError(
                f"residue value {self.value} not in [0, {self.modulus.p - 1}]")

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus.p != self.modulus.p:
                raise MixedModulusError(
                    f"cannot combine residues mod {self.p} and mod {other.p}")
            return other.value
        if isinstance(other, numbers.Integral) and not isinstance(other, bool):
            return int(other)
        return NotImplemented

    def _new(self, n: int) -> "Residue":
        return Residue(n % self.modulus.p, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * inverse(self._new(o))

    def __pow__(self, e: int):
        if e < 0:
            return inverse(self) ** (-e)
        return self._new(pow(self.value, e, self.p))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"Residue({self.value} mod {self.p})"


def reduce(n: int, p: ModulusLike) -> Residue:
    """n mod p in [0, p-1]; Python's % already handles negative n."""
    m = as_modulus(p)
    return Residue(n % m.p, m)


def lift(a: Residue) -> int:
    return a.value


def inverse(a: Residue) -> Residue:
    if a.value == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {a.p}")
    return Residue(pow(a.value, -1, a.p), a.modulus)


def legendre_int(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def jacobi_int(a: int, n: int) -> int:
    """Jacobi symbol via quadratic reciprocity; equals (a/p) for prime n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: Residue) -> int:
    return legendre_int(a.value, a.p)


def square_table(p: int) -> np.ndarray:
    """Legendre symbols (x/p) for x = 0..p-1 as an int8 array."""
    p = int(p)
    chi = np.full(p, -1, dtype=np.int8)
    x = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    chi[(x * x) % p] = 1
    chi[0] = 0
    return chi


@lru_cache(maxsize=64)
def _square_table_cached(p: int) -> np.ndarray:
    t = square_table(p)
    t.setflags(write=False)
    return t


def legendre_table(p: int) -> np.ndarray:
    """Cached read-only view of :func:`square_table`."""
    return _square_table_cached(int(p))
