"""Exhaustive search for range-sum-p polynomials of a prescribed degree.

The search runs over value tables rather than coefficient vectors: a table
with range sum p is a choice of support T and a composition of p into |T|
positive parts, each at most p-1. Candidates are produced in lexicographic
order of (|T|, T, composition).

The degree test reads coefficients off power sums. For n >= 1,

    a_n = -sum_x v[x] x^(p-1-n)   (mod p),

so deg f <= D iff the weighted power sums S_m = sum_{t in T} v_t t^m
vanish for m = 1 .. p-2-D (a_{p-1} = -p = 0 automatically). The sums are
checked lowest m first and a candidate is dropped at the first nonzero one.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import chain, combinations, islice
from math import comb
from typing import Iterator, Optional

import numpy as np

from .fp_core import as_modulus
from .poly import FpPoly, ValueTable, eval_all, interpolate, poly_divmod, range_sum
from .profile import decompose

_BLOCK = 1 << 15
_CACHE_ROWS = 1 << 18


class SearchSpecError(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    p: int
    degree_min: int
    degree_max: Optional[int] = None
    max_support: Optional[int] = None
    canonicalize: bool = True
    budget: Optional[int] = None  # max candidates enumerated
    time_limit: Optional[float] = None  # seconds
    seed: int = 0

    def __post_init__(self):
        p = as_modulus(self.p).p
        if self.degree_max is None:
            object.__setattr__(self, "degree_max", self.degree_min)
        lo, hi = self.degree_min, self.degree_max
        if not 0 <= lo <= hi <= p - 1:
            raise SearchSpecError(f"degree range [{lo}, {hi}] not within [0, {p - 1}]")
        if self.max_support is None:
            half = (p + 1) // 2
            # at least (p-3)/2 roots when the degree is (p+1)/2
            cap = (p + 3) // 2 if lo == hi == half else p
            object.__setattr__(self, "max_support", cap)
        if not 1 <= self.max_support <= p:
            raise SearchSpecError(f"max_support {self.max_support} not in [1, {p}]")
        if self.budget is not None and self.budget < 0:
            raise SearchSpecError("budget must be nonnegative")

    def as_dict(self) -> dict:
        return dict(p=self.p, degree_min=self.degree_min, degree_max=self.degree_max,
                    max_support=self.max_support, canonicalize=self.canonicalize,
                    budget=self.budget, time_limit=self.time_limit, seed=self.seed)


@dataclass
class Orbit:
    rep: ValueTable
    degree: int
    size: int
    hits: int  # members met during the scan

    def describe(self) -> dict:
        f = interpolate(self.rep)
        prof = decompose(self.rep)
        return {
            "table": list(self.rep.values),
            "degree": self.degree,
            "orbit_size": self.size,
            "coeffs": f.to_json()["coeffs"],
            "factored": factored_form(f),
            "roots": sorted(prof.A),
            "B": [[b, w] for b, w in prof.B_items()],
            "k": list(prof.k),
        }


@dataclass
class SearchResult:
    spec: SearchSpec
    orbits: list
    enumerated: int = 0
    pruned: int = 0
    survivors: int = 0
    exhaustive: bool = True
    tables: list = field(default_factory=list)  # populated when canonicalize=False

    @property
    def orbit_reps(self) -> list:
        return [o.rep for o in self.orbits]

    def as_dict(self) -> dict:
        return {
            "spec": self.spec.as_dict(),
            "counters": {"enumerated": self.enumerated, "pruned": self.pruned,
                         "survivors": self.survivors, "orbits": len(self.orbits)},
            "exhaustive": self.exhaustive,
            "orbits": [o.describe() for o in self.orbits],
            "tables": [list(t.values) for t in self.tables],
        }


# ----------------------------------------------------------------------
# candidate generation


@lru_cache(maxsize=64)
def _cached_compositions(p: int, s: int) -> np.ndarray:
    arr = np.concatenate(list(_composition_chunks(p, s, _CACHE_ROWS)) or
                         [np.empty((0, s), dtype=np.int64)])
    arr.setflags(write=False)
    return arr


def _composition_chunks(p: int, s: int, chunk: int) -> Iterator[np.ndarray]:
    """Compositions of p into s parts in [1, p-1], lexicographic, in blocks."""
    if s == 1:
        return  # the single part p exceeds p-1
    cuts_iter = combinations(range(1, p), s - 1)
    while True:
        flat = np.fromiter(chain.from_iterable(islice(cuts_iter, chunk)), dtype=np.int64)
        if not flat.size:
            return
        cuts = flat.reshape(-1, s - 1)
        n = len(cuts)
        full = np.hstack([np.zeros((n, 1), np.int64), cuts, np.full((n, 1), p, np.int64)])
        yield np.diff(full, axis=1)


def _compositions(p: int, s: int) -> Iterator[np.ndarray]:
    if comb(p - 1, s - 1) <= _CACHE_ROWS:
        arr = _cached_compositions(p, s)
        for i in range(0, len(arr), _BLOCK):
            yield arr[i:i + _BLOCK]
    else:
        yield from _composition_chunks(p, s, _BLOCK)


def _subsets(p: int, s: int, first: int) -> Iterator[tuple]:
    for rest in combinations(range(first + 1, p), s - 1):
        yield (first,) + rest


def _blocks(p: int, s: int, first: int) -> Iterator[tuple]:
    for T in _subsets(p, s, first):
        for block in _compositions(p, s):
            yield T, block


def _work_units(spec: SearchSpec) -> list:
    p = spec.p
    return [(s, first) for s in range(1, spec.max_support + 1)
            for first in range(0, p - s + 1)]


def enumerate_candidates(spec: SearchSpec) -> Iterator[ValueTable]:
    """Every table with range sum p and support <= max_support, in order.

    Honors ``spec.budget``; the stream simply stops when it runs out (the
    search reports that as non-exhaustive).
    """
    m = as_modulus(spec.p)
    p = m.p
    left = spec.budget
    for s, first in _work_units(spec):
        for T, block in _blocks(p, s, first):
            for row in block:
                if left is not None:
                    if left == 0:
                        return
                    left -= 1
                vals = [0] * p
                for t, v in zip(T, row):
                    vals[t] = int(v)
                yield ValueTable(m, tuple(vals))


def count_candidates(p: int, max_support: int) -> int:
    """Closed-form size of the candidate stream."""
    return sum(comb(p, s) * comb(p - 1, s - 1) for s in range(2, max_support + 1))


# ----------------------------------------------------------------------
# degree filter


def _degree_filter(p: int, T: tuple, vals: np.ndarray, dmin: int, dmax: int):
    """Rows of ``vals`` (on support T) whose interpolant has degree in [dmin, dmax].

    Returns (row indices, degrees).
    """
    t = np.asarray(T, dtype=np.int64)
    idx = np.arange(len(vals))
    pw = np.ones_like(t)  # t^0, with 0^0 = 1
    # a_n = 0 for n = p-2 .. dmax+1, i.e. S_m = 0 for m = 1 .. p-2-dmax
    for _ in range(1, p - 1 - dmax):
        pw = pw * t % p
        keep = (vals[idx] @ pw) % p == 0
        idx = idx[keep]
        if not idx.size:
            return idx, idx
    degrees = np.full(len(idx), -1, dtype=np.int64)
    undecided = np.ones(len(idx), dtype=bool)
    for n in range(dmax, dmin - 1, -1):
        if n == 0:
            coef = vals[idx][:, 0] * (t[0] == 0)  # a_0 = v[0]
        else:
            if n < p - 1:
                pw = pw * t % p
            coef = (vals[idx] @ pw) % p
        hit = undecided & (coef != 0)
        degrees[hit] = n
        undecided &= ~hit
        if not undecided.any():
            break
    ok = degrees >= 0
    return idx[ok], degrees[ok]


def _scan_unit(args):
    """Scan one (support size, smallest support point) slice.

    Returns (enumerated, survivors as (table tuple, degree) list, truncated).
    """
    p, s, first, dmin, dmax, budget, deadline = args
    enumerated = 0
    found = []
    for T, block in _blocks(p, s, first):
        if budget is not None and enumerated + len(block) > budget:
            block = block[:budget - enumerated]
            truncated = True
        else:
            truncated = False
        enumerated += len(block)
        if len(block):
            rows, degs = _degree_filter(p, T, block, dmin, dmax)
            for r, d in zip(rows.tolist(), degs.tolist()):
                vals = [0] * p
                for x, y in zip(T, block[r].tolist()):
                    vals[x] = y
                found.append((tuple(vals), d))
        if truncated or (deadline is not None and time.monotonic() > deadline):
            return enumerated, found, True
    return enumerated, found, False


# ----------------------------------------------------------------------
# affine orbits


@lru_cache(maxsize=64)
def affine_permutations(p: int) -> np.ndarray:
    """Row (a, b) lists x -> a x + b for x = 0..p-1; a = 1..p-1, b = 0..p-1."""
    x = np.arange(p, dtype=np.int64)
    rows = [(a * x + b) % p for a in range(1, p) for b in range(p)]
    arr = np.array(rows, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def affine_orbit(v) -> set:
    """All tables x -> v[a x + b] with a != 0."""
    vals = np.asarray(v.values if isinstance(v, ValueTable) else v, dtype=np.int64)
    images = vals[affine_permutations(len(vals))]
    return set(map(tuple, images.tolist()))


def canonical_orbit_rep(v: ValueTable) -> ValueTable:
    """Lexicographically smallest table in the affine orbit of v."""
    return ValueTable(v.modulus, min(affine_orbit(v)))


class _OrbitCollector:
    def __init__(self, p: int):
        self.p = p
        self.member_of: dict = {}
        self.orbits: dict = {}  # rep -> [degree, size, hits]

    def add(self, table: tuple, degree: int) -> None:
        rep = self.member_of.get(table)
        if rep is None:
            members = affine_orbit(table)
            rep = min(members)
            for m in members:
                self.member_of[m] = rep
            self.orbits[rep] = [degree, len(members), 0]
        self.orbits[rep][2] += 1

    def result(self, modulus) -> list:
        return [Orbit(ValueTable(modulus, rep), d, size, hits)
                for rep, (d, size, hits) in sorted(self.orbits.items())]


def search(spec: SearchSpec, workers: int = 1) -> SearchResult:
    """Find range-sum-p tables whose interpolant has degree in the target range.

    With ``canonicalize`` the result holds one representative per affine
    orbit, sorted by that representative. Parallel runs (``workers > 1``)
    return the same result; budgets and time limits force a serial scan.
    """
    m = as_modulus(spec.p)
    p = m.p
    deadline = None if spec.time_limit is None else time.monotonic() + spec.time_limit
    units = _work_units(spec)
    result = SearchResult(spec, [])
    collector = _OrbitCollector(p)
    plain = []

    def absorb(part):
        enumerated, found, truncated = part
        result.enumerated += enumerated
        result.survivors += len(found)
        for table, d in found:
            if spec.canonicalize:
                collector.add(table, d)
            else:
                plain.append((table, d))
        return truncated

    if workers > 1 and spec.budget is None and deadline is None:
        args = [(p, s, first, spec.degree_min, spec.degree_max, None, None)
                for s, first in units]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for part in ex.map(_scan_unit, args, chunksize=4):
                absorb(part)
    else:
        left = spec.budget
        for s, first in units:
            part = _scan_unit((p, s, first, spec.degree_min, spec.degree_max, left, deadline))
            truncated = absorb(part)
            if left is not None:
                left -= part[0]
            if truncated:
                result.exhaustive = False
                break

    result.pruned = result.enumerated - result.survivors
    if spec.canonicalize:
        result.orbits = collector.result(m)
    else:
        plain.sort()
        result.tables = [ValueTable(m, t) for t, _ in plain]
    return result


def verify_result(result: SearchResult) -> list:
    """Independent recheck of every reported table; returns the failures."""
    spec = result.spec
    bad = []
    tables = result.orbit_reps if spec.canonicalize else result.tables
    for v in tables:
        f = interpolate(v)
        if eval_all(f) != v or range_sum(v) != spec.p or f.degree is None \
                or not spec.degree_min <= f.degree <= spec.degree_max:
            bad.append(v)
    return bad


# ----------------------------------------------------------------------
# degree census


def degree_histogram(p: int, budget: Optional[int] = None) -> dict:
    """Existence status for every degree in [(p-1)/2, p-1] from one shared scan.

    Values are dicts with ``status`` in {"exists", "none-found",
    "not-exhausted"}, the number of tables met and a witness table.
    """
    p = as_modulus(p).p
    spec = SearchSpec(p, (p - 1) // 2, p - 1, max_support=p, canonicalize=False, budget=budget)
    counts = {d: 0 for d in range(spec.degree_min, p)}
    witness: dict = {}
    left = budget
    exhaustive = True
    for s, first in _work_units(spec):
        enumerated, found, truncated = _scan_unit(
            (p, s, first, spec.degree_min, spec.degree_max, left, None))
        for table, d in found:
            counts[d] += 1
            witness.setdefault(d, table)
        if left is not None:
            left -= enumerated
        if truncated:
            exhaustive = False
            break
    out = {}
    for d, c in counts.items():
        if c:
            status = "exists"
        else:
            status = "none-found" if exhaustive else "not-exhausted"
        out[d] = {"status": status, "count": c,
                  "witness": list(witness[d]) if d in witness else None}
    return out


# ----------------------------------------------------------------------
# rendering


def factored_form(f: FpPoly) -> str:
    """c*(x-a1)^e1*...*g with g root-free, e.g. "2*x*(x-1)^2*(x^2 + 1)"."""
    p = f.p
    if f.degree is None:
        return "0"
    quot = list(f.coeffs)
    while quot[-1] == 0:
        quot.pop()
    parts = []
    for r in range(p):
        e = 0
        while len(quot) > 1:
            q, rem = poly_divmod(FpPoly.from_coeffs(p, quot), [-r, 1])
            if rem:
                break
            quot, e = q, e + 1
        if e:
            base = "x" if r == 0 else f"(x-{r})"
            parts.append(base if e == 1 else f"{base}^{e}")
    lead = quot[-1]
    if len(quot) > 1:
        inv = pow(lead, -1, p)
        parts.append(f"({FpPoly.from_coeffs(p, [c * inv for c in quot])})")
    if lead != 1 or not parts:
        parts.insert(0, str(lead))
    return "*".join(parts)
