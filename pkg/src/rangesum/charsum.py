"""Exact audits of Legendre character-sum inequalities.

All comparisons against irrational bounds are made in integers by squaring
or cubing both sides:

* sum_g |sum_{a in A} (a-g|p)| <= p^(3/2) / 2   <=>   (2 stat)^2 <= p^3
* |S(A)| <= p^(2/3)                             <=>   |S|^3 <= p^2
* sum_g |sum_{b in B} w_b (b-g|p)| <= p sqrt(sum k^2)  <=>  stat^2 <= p^2 sum k^2

where S(A) = {g : |sum_{a in A} (a-g|p)|^3 >= p^2}.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from .fp_core import legendre_int, legendre_table

EXHAUSTIVE_LIMIT = 19
_CHUNK = 1 << 14


class AuditBudgetError(RuntimeError):
    """Exhaustive mode requested beyond the 2^p budget."""


@dataclass
class CharSumReport:
    p: int
    kind: str  # "alpha", "pathological", "beta", "pv"
    subject: str
    statistic: int
    bound_sq_lhs: int
    bound_sq_rhs: int
    holds: bool
    seed: Optional[int] = None
    witnesses: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def _as_ints(xs: Iterable, p: int) -> list:
    return sorted({int(x) % p for x in xs})


def _shift_matrix(p: int) -> np.ndarray:
    """M[a, g] = ((a - g) | p)."""
    chi = legendre_table(p).astype(np.int64)
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    return chi[idx]


def alpha_inner_sums(A: Iterable, p: int) -> np.ndarray:
    """Vector over g of sum_{a in A} ((a - g) | p)."""
    A = _as_ints(A, p)
    if not A:
        return np.zeros(p, dtype=np.int64)
    return _shift_matrix(p)[A].sum(axis=0)


def alpha_abs_sum(A: Iterable, p: int) -> int:
    return int(np.abs(alpha_inner_sums(A, p)).sum())


def alpha_report(A: Iterable, p: int) -> CharSumReport:
    A = _as_ints(A, p)
    stat = alpha_abs_sum(A, p)
    lhs, rhs = (2 * stat) ** 2, p ** 3
    return CharSumReport(p, "alpha", _subject(A), stat, lhs, rhs, lhs <= rhs)


def pathological_set(A: Iterable, p: int) -> set:
    inner = np.abs(alpha_inner_sums(A, p))
    return {int(g) for g in np.nonzero(inner ** 3 >= p * p)[0]}


def pathological_report(A: Iterable, p: int) -> CharSumReport:
    A = _as_ints(A, p)
    S = pathological_set(A, p)
    lhs, rhs = len(S) ** 3, p ** 2
    return CharSumReport(p, "pathological", _subject(A), len(S), lhs, rhs,
                         lhs <= rhs, witnesses=sorted(S))


def _subject(A: list) -> str:
    return "{" + ",".join(map(str, A)) + "}"


def _multiplicity_profile(B: Mapping) -> list:
    return sorted((w for w in B.values() if w), reverse=True)


def beta_abs_sum(B: Mapping, p: int, k: Optional[Iterable] = None) -> int:
    """sum_g |sum_b w_b ((b - g) | p)| for a multiset given as {beta: weight}.

    If ``k`` is supplied it must be the descending weight profile of B.
    """
    B = {int(b) % p: int(w) for b, w in B.items()}
    if any(w < 0 for w in B.values()):
        raise ValueError("multiset weights must be nonnegative")
    if k is not None and sorted(k, reverse=True) != _multiplicity_profile(B):
        raise ValueError(f"k={list(k)} does not match the multiplicities of B")
    chi = legendre_table(p).astype(np.int64)
    g = np.arange(p)
    total = np.zeros(p, dtype=np.int64)
    for b, w in B.items():
        if w:
            total += w * chi[(b - g) % p]
    return int(np.abs(total).sum())


def beta_report(B: Mapping, p: int, seed: Optional[int] = None) -> CharSumReport:
    k = _multiplicity_profile(B)
    stat = beta_abs_sum(B, p, k)
    lhs, rhs = stat ** 2, p * p * sum(x * x for x in k)
    subject = "{" + ",".join(f"{b}:{w}" for b, w in sorted(B.items()) if w) + "}"
    return CharSumReport(p, "beta", subject, stat, lhs, rhs, lhs <= rhs, seed=seed)


def random_multiset(p: int, rng: random.Random, max_weight: Optional[int] = None) -> dict:
    """Random multiset over F_p with total weight at most (p+1)/2."""
    total = rng.randint(1, (p + 1) // 2)
    distinct = rng.randint(1, total)
    support = rng.sample(range(p), min(distinct, p))
    B = dict.fromkeys(support, 1)
    for _ in range(total - len(support)):
        b = rng.choice(support)
        if max_weight is None or B[b] < max_weight:
            B[b] += 1
    return B


# ----------------------------------------------------------------------
# Interval counts for quadratic residues


def pv_interval(p: int) -> tuple[int, int]:
    """[ceil(9p/20), floor(19p/40)]."""
    return -((-9 * p) // 20), (19 * p) // 40


def pv_lower_bound(p: int, log=math.log) -> float:
    """p/80 - sqrt(p) log(p) / 2 (natural log unless another is passed)."""
    return p / 80 - 0.5 * math.sqrt(p) * log(p)


def pv_required_count(p: int, log=math.log) -> int:
    return math.ceil(pv_lower_bound(p, log))


def pv_interval_count(p: int, beta: int) -> int:
    """Number of g in the interval with ((beta - g) | p) = 1."""
    lo, hi = pv_interval(p)
    if hi < lo:
        return 0
    chi = legendre_table(p)
    g = np.arange(lo, hi + 1, dtype=np.int64)
    return int(np.count_nonzero(chi[(int(beta) - g) % p] == 1))


def pv_interval_counts(p: int, betas: Iterable[int]) -> np.ndarray:
    """Vectorized :func:`pv_interval_count` over many beta."""
    lo, hi = pv_interval(p)
    betas = np.asarray(list(betas), dtype=np.int64)
    if hi < lo:
        return np.zeros(len(betas), dtype=np.int64)
    chi = legendre_table(p)
    g = np.arange(lo, hi + 1, dtype=np.int64)
    out = np.empty(len(betas), dtype=np.int64)
    for i, b in enumerate(betas):
        out[i] = np.count_nonzero(chi[(b - g) % p] == 1)
    return out


def pv_interval_count_euler(p: int, beta: int) -> int:
    """Same count, one Euler-criterion exponentiation per element."""
    lo, hi = pv_interval(p)
    return sum(1 for g in range(lo, hi + 1) if legendre_int(beta - g, p) == 1)


def pv_report(p: int, betas: Iterable[int], seed: Optional[int] = None) -> CharSumReport:
    betas = list(betas)
    counts = pv_interval_counts(p, betas)
    need = pv_required_count(p)
    worst = int(np.argmin(counts)) if len(counts) else None
    stat = int(counts.min()) if len(counts) else 0
    holds = bool((counts >= need).all()) if len(counts) else True
    rep = CharSumReport(p, "pv", f"{len(betas)} betas", stat, stat, need, holds, seed=seed)
    if worst is not None:
        rep.witnesses = [betas[worst]]
    return rep


# ----------------------------------------------------------------------
# Exhaustive and sampled audits over subsets A


@dataclass
class AuditSummary:
    p: int
    mode: str  # "exhaustive" or "sampled"
    subsets: int
    seed: Optional[int]
    alpha_violations: int
    pathological_violations: int
    worst_alpha: int
    worst_alpha_subject: int  # bitmask
    worst_pathological: int
    worst_pathological_subject: int
    rows: Optional[list] = None

    @property
    def all_hold(self) -> bool:
        return self.alpha_violations == 0 and self.pathological_violations == 0

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("rows")
        d["alpha_bound_sq_rhs"] = self.p ** 3
        d["pathological_bound_rhs"] = self.p ** 2
        d["all_hold"] = self.all_hold
        return d


def mask_to_subset(mask: int, p: int) -> list:
    return [i for i in range(p) if mask >> i & 1]


def _audit_masks(p: int, masks: np.ndarray, keep_rows: bool):
    M = _shift_matrix(p)
    bits = ((masks[:, None] >> np.arange(p, dtype=np.int64)) & 1).astype(np.int64)
    inner = np.abs(bits @ M)
    stats = inner.sum(axis=1)
    ssize = (inner ** 3 >= p * p).sum(axis=1)
    a_viol = int(np.count_nonzero((2 * stats) ** 2 > p ** 3))
    s_viol = int(np.count_nonzero(ssize ** 3 > p ** 2))
    # first maximiser in mask order keeps the merge deterministic
    ia, isz = int(np.argmax(stats)), int(np.argmax(ssize))
    best = (int(stats[ia]), int(masks[ia]), int(ssize[isz]), int(masks[isz]))
    rows = None
    if keep_rows:
        rows = list(zip(masks.tolist(), stats.tolist(), ssize.tolist()))
    return len(masks), a_viol, s_viol, best, rows


def _audit_range(args):
    p, start, stop, keep_rows = args
    return _audit_masks(p, np.arange(start, stop, dtype=np.int64), keep_rows)


def _audit_sample(args):
    p, masks, keep_rows = args
    return _audit_masks(p, np.asarray(masks, dtype=np.int64), keep_rows)


def exhaustive_audit(p: int, sample: Optional[int] = None, seed: int = 0,
                     workers: int = 1, keep_rows: bool = False) -> AuditSummary:
    """Check the alpha and pathological-set bounds over subsets of F_p.

    Without ``sample`` every one of the 2^p subsets is audited, which is
    only allowed for p <= 19. With ``sample`` that many subsets are drawn
    uniformly (with replacement) from a PRNG seeded by ``seed``.
    """
    if sample is None:
        if p > EXHAUSTIVE_LIMIT:
            raise AuditBudgetError(
                f"exhaustive audit needs 2^{p} subsets; p > {EXHAUSTIVE_LIMIT} requires sampling")
        total = 1 << p
        jobs = [(p, s, min(s + _CHUNK, total), keep_rows) for s in range(0, total, _CHUNK)]
        fn, mode, rec_seed = _audit_range, "exhaustive", None
    else:
        rng = random.Random(seed)
        drawn = [rng.getrandbits(p) for _ in range(sample)]
        jobs = [(p, drawn[i:i + _CHUNK], keep_rows) for i in range(0, sample, _CHUNK)]
        fn, mode, rec_seed = _audit_sample, "sampled", seed

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(fn, jobs))
    else:
        parts = [fn(j) for j in jobs]

    n = a_viol = s_viol = 0
    best_a, best_am, best_s, best_sm = -1, 0, -1, 0
    rows = [] if keep_rows else None
    for cnt, av, sv, (sa, am, ss, sm), part_rows in parts:
        n += cnt
        a_viol += av
        s_viol += sv
        if sa > best_a:
            best_a, best_am = sa, am
        if ss > best_s:
            best_s, best_sm = ss, sm
        if keep_rows:
            rows.extend(part_rows)
    return AuditSummary(p, mode, n, rec_seed, a_viol, s_viol,
                        best_a, best_am, best_s, best_sm, rows)


def audit_csv_rows(summary: AuditSummary) -> Iterator[list]:
    """CSV rows: p, subject_id, statistic, bound_sq_lhs, bound_sq_rhs, holds, seed.

    Two rows per subset: the alpha statistic and the pathological-set size.
    """
    p = summary.p
    seed = "" if summary.seed is None else summary.seed
    yield ["p", "subject_id", "statistic", "bound_sq_lhs", "bound_sq_rhs", "holds", "seed"]
    for mask, stat, ssize in summary.rows or []:
        lhs = (2 * stat) ** 2
        yield [p, f"alpha:{mask}", stat, lhs, p ** 3, int(lhs <= p ** 3), seed]
        yield [p, f"S:{mask}", ssize, ssize ** 3, p ** 2, int(ssize ** 3 <= p ** 2), seed]
