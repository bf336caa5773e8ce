"""Explicit families of range-sum-p polynomials, each checked from scratch."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .fp_core import as_modulus
from .poly import FpPoly, eval_all, parse_poly, range_sum, scalar_mul


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionRecord:
    name: str
    p: int
    polynomial: FpPoly
    expected_degree: Optional[int]
    expected_range_sum: int
    verified: bool = False
    degree: Optional[int] = None
    range_sum: Optional[int] = None
    source: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "coeffs": self.polynomial.to_json()["coeffs"],
            "polynomial": str(self.polynomial),
            "source": self.source,
            "expected_degree": self.expected_degree,
            "expected_range_sum": self.expected_range_sum,
            "degree": self.degree,
            "range_sum": self.range_sum,
            "verified": self.verified,
        }


def verify_construction(rec: ConstructionRecord) -> ConstructionRecord:
    """Recompute degree and range sum; returns a copy with ``verified`` set."""
    f = rec.polynomial
    total = range_sum(eval_all(f))
    ok = total == rec.expected_range_sum and f.degree == rec.expected_degree
    return replace(rec, verified=ok, degree=f.degree, range_sum=total)


def _record(name: str, f: FpPoly, degree, source: str = "") -> ConstructionRecord:
    return verify_construction(ConstructionRecord(name, f.p, f, degree, f.p, source=source))


def legendre_family(p: int) -> tuple[ConstructionRecord, ConstructionRecord]:
    """x^((p-1)/2) + 1 and ((p+1)/2) (x^((p-1)/2) + 1)."""
    m = as_modulus(p)
    half = m.half
    f1 = FpPoly.monomial(m, half) + FpPoly.constant(m, 1)
    f2 = scalar_mul(f1, (m.p + 1) // 2)
    return (_record("legendre", f1, half), _record("legendre-scaled", f2, half))


SMALL_PRIME_EXAMPLES = {
    5: "x*(x-1)*(x-2)",
    7: "x*(x-1)*(x-2)*(x-3)",
    11: "2 x*(x-1)*(x-3)*(x-5)*(x-7)*(x-9)",
    13: "x*(2-x)*(4-x)*(6-x)*(7-x)*(8-x)*(10-x)",
}


def small_prime_examples(strict: bool = True) -> list:
    """The four degree-(p+1)/2 examples for p = 5, 7, 11, 13, parsed verbatim.

    With ``strict`` a record that fails verification raises
    :class:`ConstructionError`; otherwise failures come back with
    ``verified=False``.
    """
    recs = [_record(f"small-p{p}", parse_poly(text, p), (p + 1) // 2, source=text)
            for p, text in SMALL_PRIME_EXAMPLES.items()]
    bad = [r for r in recs if not r.verified]
    if strict and bad:
        detail = "; ".join(f"p={r.p} {r.source!r}: degree {r.degree}, range sum {r.range_sum}"
                           for r in bad)
        raise ConstructionError(f"example verification failed: {detail}")
    return recs


def cube_roots_of_unity(p: int) -> list:
    """The three solutions of a^3 = 1 in F_p, for p = 1 mod 3."""
    return [a for a in range(1, p) if pow(a, 3, p) == 1]


def _check_cubic(p: int, alpha: int) -> None:
    if p % 3 != 1:
        raise ConstructionError(f"cubic family needs p = 1 mod 3, got p = {p}")
    if pow(alpha % p, 3, p) != 1:
        raise ConstructionError(f"alpha = {alpha} is not a cube root of unity mod {p}")


def cubic_family(p: int, alpha: int) -> ConstructionRecord:
    """1 + alpha x^((p-1)/3) + alpha^2 x^(2(p-1)/3)."""
    m = as_modulus(p)
    _check_cubic(m.p, alpha)
    e = (m.p - 1) // 3
    f = FpPoly.from_coeffs(m, [1] + [0] * (e - 1) + [alpha] + [0] * (e - 1) + [alpha * alpha])
    return _record(f"cubic(alpha={alpha % m.p})", f, 2 * e)


def scaled_cubic(p: int, alpha: int, which: int) -> ConstructionRecord:
    """c * cubic_family(p, alpha) with 3c = which (mod p), which in {1, 2}."""
    if which not in (1, 2):
        raise ConstructionError("which must be 1 or 2")
    base = cubic_family(p, alpha)
    c = which * pow(3, -1, p) % p
    f = scalar_mul(base.polynomial, c)
    return _record(f"scaled-cubic(alpha={alpha % p}, c={c})", f, base.expected_degree)
