"""Root/value decomposition of range-sum-p polynomials of degree (p+1)/2.

For a value table v with range sum p:

* A is the root set {x : v[x] = 0};
* B is the multiset giving weight v[x] - 1 to every x with v[x] > 1;
* k is the descending list of weights of the distinct elements of B.

The total weight of B then equals |A|.

For f of degree d = (p+1)/2 and every gamma in F_p one has the congruence

    sum_{a in A} (a - gamma | p) = sum_{b in B} (b - gamma | p)
                                   + a_d * gamma / 2 + a_{d-1}   (mod p),

obtained by summing (y - gamma)^((p-1)/2) f(y) over y. After the affine
change f(x) -> f(c x + b) that kills a_{d-1} and forces a_d / 2 = +-1 the
lifted difference of the two character sums is an integer r(gamma) with
r(gamma) = +-gamma (mod p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fp_core import PrimeModulus, legendre_table
from .poly import FpPoly, ValueTable, affine_compose, eval_all, poly_divmod, range_sum


@dataclass(frozen=True)
class RootValueProfile:
    modulus: PrimeModulus
    A: frozenset
    B: dict  # beta -> weight, weight >= 1
    k: tuple

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def weight_B(self) -> int:
        return sum(self.B.values())

    def B_items(self) -> list:
        return sorted(self.B.items())


def decompose(v: ValueTable) -> RootValueProfile:
    A = frozenset(x for x, y in enumerate(v.values) if y == 0)
    B = {x: y - 1 for x, y in enumerate(v.values) if y > 1}
    k = tuple(sorted(B.values(), reverse=True))
    return RootValueProfile(v.modulus, A, B, k)


class ProfileUsageError(ValueError):
    pass


def _check_target(f: FpPoly) -> ValueTable:
    p = f.p
    v = eval_all(f)
    if f.degree != (p + 1) // 2:
        raise ProfileUsageError(f"degree {f.degree} != (p+1)/2 = {(p + 1) // 2}")
    if range_sum(v) != p:
        raise ProfileUsageError(f"range sum {range_sum(v)} != p = {p}")
    return v


def _char_sums(prof: RootValueProfile) -> tuple[np.ndarray, np.ndarray]:
    """Integer vectors sum_A (a-g|p) and sum_B w (b-g|p) indexed by g."""
    p = prof.p
    chi = legendre_table(p).astype(np.int64)
    g = np.arange(p)
    sa = np.zeros(p, dtype=np.int64)
    for a in prof.A:
        sa += chi[(a - g) % p]
    sb = np.zeros(p, dtype=np.int64)
    for b, w in prof.B.items():
        sb += w * chi[(b - g) % p]
    return sa, sb


def verify_identity_eq2(f: FpPoly) -> set:
    """Return the set of gamma at which the root/value congruence fails.

    Raises :class:`ProfileUsageError` unless deg f = (p+1)/2 and the range
    sum is p.
    """
    v = _check_target(f)
    p = f.p
    d = (p + 1) // 2
    half = pow(2, -1, p)
    lead, sub = f.coeffs[d], f.coeffs[d - 1]
    prof = decompose(v)
    sa, sb = _char_sums(prof)
    failing = set()
    for gamma in range(p):
        rhs = int(sb[gamma]) + half * lead * gamma + sub
        if (int(sa[gamma]) - rhs) % p:
            failing.add(gamma)
    return failing


@dataclass(frozen=True)
class NormalizedInstance:
    """Profile of f(c x + b), with f(c x + b) having a_{d-1} = 0 and a_d = 2 * sign."""

    source: FpPoly
    poly: FpPoly
    profile: RootValueProfile
    sign: int
    scale: int  # c
    shift: int  # b

    @property
    def is_identity(self) -> bool:
        return self.scale == 1 and self.shift == 0


def normalize_instance(f: FpPoly) -> NormalizedInstance:
    _check_target(f)
    p = f.p
    d = (p + 1) // 2
    lead, sub = f.coeffs[d], f.coeffs[d - 1]
    inv_lead = pow(lead, -1, p)
    # translation by b kills the x^{d-1} coefficient: a_{d-1} + a_d b / 2 = 0
    b = -2 * sub * inv_lead % p
    # already at a_d = +-2: keep the scale so normalization is idempotent
    c = 1 if lead in (2, p - 2) else 2 * inv_lead % p
    g = affine_compose(f, c, b)
    new_lead = g.coeffs[d]
    assert g.coeffs[d - 1] == 0 and new_lead in (2, p - 2), (g, new_lead)
    sign = 1 if new_lead == 2 else -1
    return NormalizedInstance(f, g, decompose(eval_all(g)), sign, c, b)


def normalized_congruence_failures(inst: NormalizedInstance) -> set:
    """gamma with sum_A != sum_B + sign * gamma (mod p) for the normalized profile."""
    p = inst.profile.p
    sa, sb = _char_sums(inst.profile)
    return {g for g in range(p) if (int(sa[g]) - int(sb[g]) - inst.sign * g) % p}


@dataclass(frozen=True)
class ResidualFunction:
    """r(gamma) = lifted sum_A - lifted sum_B, with r(gamma) = sign*gamma mod p.

    For sign = -1 the analysis runs on the reflected index gamma* = -gamma,
    for which r = +gamma* (mod p); :meth:`effective` gives that view.
    """

    p: int
    r: tuple
    sign: int = 1

    def effective(self) -> list:
        """Pairs (gamma*, r) with gamma* = lift(sign * gamma), so r = gamma* mod p."""
        return [((self.sign * g) % self.p, rv) for g, rv in enumerate(self.r)]


def residual_r(inst: NormalizedInstance) -> ResidualFunction:
    sa, sb = _char_sums(inst.profile)
    return ResidualFunction(inst.profile.p, tuple(int(x) for x in sa - sb), inst.sign)


IDENTITY = "IDENTITY"
SHIFTED = "SHIFTED"
ANOMALY = "ANOMALY"


def classify_r(rf: ResidualFunction) -> dict:
    """Label each gamma (original index).

    gamma* = 0 gets "-p", "0" or "+p"; otherwise IDENTITY when r = gamma*
    and SHIFTED when r = gamma* - p. Anything else is ANOMALY.
    """
    p = rf.p
    labels = {}
    for g, (ge, rv) in enumerate(rf.effective()):
        if ge == 0:
            labels[g] = {-p: "-p", 0: "0", p: "+p"}.get(rv, ANOMALY)
        elif rv == ge:
            labels[g] = IDENTITY
        elif rv == ge - p:
            labels[g] = SHIFTED
        else:
            labels[g] = ANOMALY
    return labels


def interval_bounds(p: int) -> tuple[int, int]:
    """Integer endpoints of [9p/20, 19p/40], rounded inward."""
    lo = -((-9 * p) // 20)
    hi = (19 * p) // 40
    return lo, hi


def gamma_sets(rf: ResidualFunction) -> tuple[set, set]:
    """(Gamma_{-p}, Gamma') in effective coordinates gamma*."""
    labels = classify_r(rf)
    eff = rf.effective()
    minus_p = {eff[g][0] for g, lab in labels.items() if lab == SHIFTED}
    lo, hi = interval_bounds(rf.p)
    prime = {g for g in minus_p if lo <= g <= hi}
    return minus_p, prime


@dataclass
class ProfileStats:
    k1: int
    weight_B: int
    sum_k_sq: int
    k1_bound_holds: Optional[bool]
    dominant_beta: Optional[int]
    note: str = ""

    def as_dict(self) -> dict:
        return dict(k1=self.k1, weight_B=self.weight_B, sum_k_sq=self.sum_k_sq,
                    k1_bound_holds=self.k1_bound_holds,
                    dominant_beta=self.dominant_beta, note=self.note)


def profile_stats(prof: RootValueProfile) -> ProfileStats:
    """Report k_1 >= |B|/5 and the dominant beta'; nothing is asserted."""
    if not prof.B:
        return ProfileStats(0, 0, 0, None, None, note="no elements")
    k1 = prof.k[0]
    wb = prof.weight_B
    holds = 5 * k1 >= wb
    dominant = None
    if 10 * k1 >= prof.p - 1:
        dominant = min(b for b, w in prof.B.items() if w == k1)
    return ProfileStats(k1, wb, sum(x * x for x in prof.k), holds, dominant)


def gamma_prime_bound_holds(p: int, size: int) -> bool:
    """|Gamma'| <= 21 sqrt(p), compared exactly as size^2 <= 441 p."""
    return size * size <= 441 * p


def divisible_by_half_power_minus_one(f: FpPoly) -> bool:
    """Whether x^((p-1)/2) - 1 divides f in F_p[x]."""
    p = f.p
    g = [p - 1] + [0] * ((p - 1) // 2 - 1) + [1]
    _, rem = poly_divmod(f, g)
    return not rem


def profile_report(f: FpPoly) -> dict:
    """JSON-ready report for a degree-(p+1)/2, range-sum-p polynomial."""
    inst = normalize_instance(f)
    rf = residual_r(inst)
    labels = classify_r(rf)
    minus_p, prime = gamma_sets(rf)
    prof = decompose(eval_all(f))
    stats = profile_stats(prof)
    return {
        "p": f.p,
        "coeffs": f.to_json()["coeffs"],
        "A": sorted(prof.A),
        "B": [[b, w] for b, w in prof.B_items()],
        "k": list(prof.k),
        "sign": inst.sign,
        "transform": {"scale": inst.scale, "shift": inst.shift},
        "normalized_A": sorted(inst.profile.A),
        "normalized_B": [[b, w] for b, w in inst.profile.B_items()],
        "r": list(rf.r),
        "labels": [labels[g] for g in range(f.p)],
        "gamma_minus_p": sorted(minus_p),
        "gamma_prime": sorted(prime),
        "gamma_prime_bound_holds": gamma_prime_bound_holds(f.p, len(prime)),
        "anomalies": sorted(g for g, lab in labels.items() if lab == ANOMALY),
        "eq2_failures": sorted(verify_identity_eq2(f)),
        "stats": stats.as_dict(),
        "divisible_by_x_half_minus_1": divisible_by_half_power_minus_one(f),
    }
