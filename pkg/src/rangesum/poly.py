"""Polynomials of degree <= p-1 over F_p and their value tables.

Every function F_p -> F_p is a unique polynomial of degree at most p-1, so
:class:`FpPoly` and :class:`ValueTable` are two views of the same object.
The value table lifts each value to {0, ..., p-1}; its integer sum is the
range sum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .fp_core import ModulusLike, PrimeModulus, Residue, as_modulus


class DegreeOverflowError(ValueError):
    """A polynomial expression reached degree >= p without Frobenius reduction."""


class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}: {text!r}")


def _int(a) -> int:
    return a.value if isinstance(a, Residue) else int(a)


@dataclass(frozen=True)
class FpPoly:
    """Dense coefficient vector a_0 .. a_{p-1} with entries in [0, p-1]."""

    modulus: PrimeModulus
    coeffs: tuple

    def __post_init__(self):
        p = self.modulus.p
        if len(self.coeffs) != p:
            raise ValueError(f"expected {p} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < p for c in self.coeffs):
            raise ValueError("coefficients must be reduced mod p")

    @classmethod
    def from_coeffs(cls, p: ModulusLike, coeffs: Iterable[int],
                    reduce_frobenius: bool = False) -> "FpPoly":
        """Build from ascending coefficients; trailing zeros may be omitted.

        Terms of degree >= p are folded with x^p = x when
        ``reduce_frobenius`` is set, otherwise they raise
        :class:`DegreeOverflowError`.
        """
        m = as_modulus(p)
        p = m.p
        raw = [_int(c) % p for c in coeffs]
        while raw and raw[-1] == 0:
            raw.pop()
        if len(raw) > p:
            if not reduce_frobenius:
                raise DegreeOverflowError(
                    f"degree {len(raw) - 1} >= p = {p}; pass reduce_frobenius to fold")
            raw = _frobenius_fold(raw, p)
        return cls(m, tuple(raw) + (0,) * (p - len(raw)))

    @classmethod
    def zero(cls, p: ModulusLike) -> "FpPoly":
        return cls.from_coeffs(p, [])

    @classmethod
    def constant(cls, p: ModulusLike, c: int) -> "FpPoly":
        return cls.from_coeffs(p, [c])

    @classmethod
    def monomial(cls, p: ModulusLike, n: int, c: int = 1) -> "FpPoly":
        return cls.from_coeffs(p, [0] * n + [c])

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def degree(self) -> Optional[int]:
        """Largest exponent with nonzero coefficient; None for the zero polynomial."""
        for n in range(self.p - 1, -1, -1):
            if self.coeffs[n]:
                return n
        return None

    def coeff(self, n: int) -> Residue:
        return Residue(self.coeffs[n], self.modulus)

    @property
    def leading(self) -> int:
        d = self.degree
        return 0 if d is None else self.coeffs[d]

    def __call__(self, x) -> Residue:
        return eval_poly(self, x)

    def __add__(self, other: "FpPoly") -> "FpPoly":
        _same(self, other)
        return FpPoly.from_coeffs(self.modulus, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        _same(self, other)
        return FpPoly.from_coeffs(self.modulus, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        if isinstance(other, FpPoly):
            _same(self, other)
            return FpPoly.from_coeffs(self.modulus, _mul(self.coeffs, other.coeffs, self.p))
        return scalar_mul(self, other)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        d = self.degree
        return {"p": self.p, "coeffs": list(self.coeffs[: (d or 0) + 1])}

    @classmethod
    def from_json(cls, obj) -> "FpPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_coeffs(obj["p"], obj["coeffs"])

    def __str__(self) -> str:
        terms = []
        for n in range(self.p - 1, -1, -1):
            c = self.coeffs[n]
            if not c:
                continue
            if n == 0:
                terms.append(str(c))
            else:
                mono = "x" if n == 1 else f"x^{n}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"


def _same(f: FpPoly, g: FpPoly) -> None:
    if f.p != g.p:
        raise ValueError(f"polynomials over different fields: p={f.p} and p={g.p}")


def _mul(a: Sequence[int], b: Sequence[int], p: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _frobenius_fold(raw: Sequence[int], p: int) -> list:
    # x^e = x^(e - (p-1)) as functions, for e >= p
    out = [0] * p
    for e, c in enumerate(raw):
        if e >= p:
            e = (e - 1) % (p - 1) + 1
        out[e] = (out[e] + c) % p
    return out


@dataclass(frozen=True)
class ValueTable:
    """values[x] is the lift of f(x) for x = 0..p-1."""

    modulus: PrimeModulus
    values: tuple

    def __post_init__(self):
        p = self.modulus.p
        if len(self.values) != p:
            raise ValueError(f"expected {p} values, got {len(self.values)}")
        if any(not 0 <= v < p for v in self.values):
            raise ValueError("table values must lie in [0, p-1]")

    @classmethod
    def of(cls, p: ModulusLike, values: Iterable[int]) -> "ValueTable":
        return cls(as_modulus(p), tuple(int(v) for v in values))

    @property
    def p(self) -> int:
        return self.modulus.p

    def __getitem__(self, x: int) -> int:
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)


def eval_poly(f: FpPoly, x) -> Residue:
    """Horner evaluation of f at x."""
    p = f.p
    if isinstance(x, Residue) and x.p != p:
        raise ValueError("evaluation point from a different field")
    x = _int(x) % p
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * x + c) % p
    return Residue(acc, f.modulus)


def eval_all(f: FpPoly) -> ValueTable:
    """Value table of f: one vectorized Horner pass over the whole domain."""
    p = f.p
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * xs + c) % p
    return ValueTable(f.modulus, tuple(int(v) for v in acc))


def interpolate(v: ValueTable) -> FpPoly:
    """The unique f of degree <= p-1 with eval_all(f) == v.

    Expanding f(x) = sum_a v[a] (1 - (x-a)^(p-1)) gives a_0 = v[0] and
    a_n = -sum_x v[x] x^(p-1-n) for n >= 1, with 0^0 = 1.
    """
    p = v.p
    vals = np.asarray(v.values, dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    coeffs = [0] * p
    coeffs[0] = int(vals[0])
    # power[x] = x^m, walking m = 0 .. p-2 so that n = p-1-m runs p-1 .. 1
    power = np.ones(p, dtype=np.int64)
    for m in range(p - 1):
        coeffs[p - 1 - m] = int(-(vals @ power)) % p
        power = power * xs % p
    return FpPoly(v.modulus, tuple(coeffs))


def range_sum(v: ValueTable) -> int:
    return sum(v.values)


def range_sum_mod_check(f: FpPoly) -> bool:
    """Self-test: the integer range sum is congruent to -a_{p-1} mod p."""
    return (range_sum(eval_all(f)) + f.coeffs[f.p - 1]) % f.p == 0


def scalar_mul(f: FpPoly, c) -> FpPoly:
    c = _int(c)
    return FpPoly.from_coeffs(f.modulus, [a * c for a in f.coeffs])


def affine_compose(f: FpPoly, a, b) -> FpPoly:
    """g(x) = f(a x + b); a must be nonzero."""
    p = f.p
    a, b = _int(a) % p, _int(b) % p
    if a == 0:
        raise ValueError("affine substitution needs a != 0")
    lin = [b, a]
    acc: list = []
    for c in reversed(f.coeffs):
        acc = _mul(acc, lin, p)
        if acc:
            acc[0] = (acc[0] + c) % p
        elif c:
            acc = [c]
    return FpPoly.from_coeffs(f.modulus, acc)


def poly_divmod(f: FpPoly, g: Sequence[int]) -> tuple[list, list]:
    """Quotient and remainder of f by the (raw, ascending) divisor g over F_p."""
    p = f.p
    g = [c % p for c in g]
    while g and g[-1] == 0:
        g.pop()
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(f.coeffs)
    while rem and rem[-1] == 0:
        rem.pop()
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    quot = [0] * max(len(rem) - dg, 0)
    while len(rem) - 1 >= dg and rem:
        shift = len(rem) - 1 - dg
        q = rem[-1] * inv_lead % p
        quot[shift] = q
        for i, c in enumerate(g):
            rem[shift + i] = (rem[shift + i] - q * c) % p
        while rem and rem[-1] == 0:
            rem.pop()
    return quot, rem


# ----------------------------------------------------------------------
# Parser for factored expressions such as "2 x*(x-1)*(x-3)"
#
#   expr   := ["+"|"-"] term (("+"|"-") term)*
#   term   := factor (("*" | <juxtaposition>) factor)*
#   factor := INT | "x" ("^" INT)? | "(" expr ")"
#
# A leading sign is read as "0 - term". Intermediate results are raw
# coefficient lists of unbounded length; the degree cap is applied once
# at the end.

_MAX_RAW_DEGREE = 1 << 16


class _Parser:
    def __init__(self, text: str, p: int, reduce_frobenius: bool):
        self.text = text
        self.p = p
        self.fold = reduce_frobenius
        self.pos = 0

    def error(self, message: str):
        raise PolySyntaxError(message, self.text, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def parse(self) -> list:
        out = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return out

    def expr(self) -> list:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = self._scale(self.term(), sign)
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            acc = self._add(acc, self._scale(self.term(), 1 if op == "+" else -1))
        return acc

    def term(self) -> list:
        acc = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
            elif not (c.isdigit() or c in ("x", "(")) or not c:
                return acc
            acc = self._trim(_mul(acc, self.factor(), self.p))

    def factor(self) -> list:
        c = self.peek()
        if not c:
            self.error("unexpected end of input")
        if c.isdigit():
            return self._trim([self.integer() % self.p])
        if c == "x":
            self.pos += 1
            e = 1
            if self.peek() == "^":
                self.pos += 1
                e = self.integer()
            if e >= self.p and self.fold:
                e = (e - 1) % (self.p - 1) + 1
            if e > _MAX_RAW_DEGREE:
                self.error(f"exponent {e} too large")
            return [0] * e + [1]
        if c == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        self.error(f"unexpected {c!r}")

    def _scale(self, a: list, s: int) -> list:
        return self._trim([s * c % self.p for c in a])

    def _add(self, a: list, b: list) -> list:
        n = max(len(a), len(b))
        a = a + [0] * (n - len(a))
        b = b + [0] * (n - len(b))
        return self._trim([(x + y) % self.p for x, y in zip(a, b)])

    def _trim(self, a: list) -> list:
        while a and a[-1] == 0:
            a.pop()
        if self.fold and len(a) > self.p:
            a = self._trim(_frobenius_fold(a, self.p))
        if len(a) - 1 > _MAX_RAW_DEGREE:
            self.error("intermediate degree too large")
        return a


def parse_poly(text: str, p: ModulusLike, reduce_frobenius: bool = False) -> FpPoly:
    """Parse a polynomial expression over F_p.

    >>> str(parse_poly("x*(x-1)*(x-2)", 5))
    'x^3 + 2*x^2 + 2*x'
    """
    m = as_modulus(p)
    raw = _Parser(text, m.p, reduce_frobenius).parse()
    return FpPoly.from_coeffs(m, raw, reduce_frobenius=reduce_frobenius)
