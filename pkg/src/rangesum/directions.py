"""Directions determined by p-point sets in the affine plane over F_p.

A direction is a point of PG(1, p): the slope dy/dx of a difference of two
distinct points, or the vertical direction when dx = 0.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Optional

from .fp_core import as_modulus
from .poly import FpPoly, ValueTable, eval_all, interpolate


@dataclass(frozen=True)
class PlanarSet:
    p: int
    points: frozenset

    def __post_init__(self):
        p = as_modulus(self.p).p
        if len(self.points) != p:
            raise ValueError(f"a planar set here has exactly p = {p} points, got {len(self.points)}")
        for x, y in self.points:
            if not (0 <= x < p and 0 <= y < p):
                raise ValueError(f"point {(x, y)} not reduced mod {p}")

    @classmethod
    def of(cls, p: int, points: Iterable) -> "PlanarSet":
        pts = [(int(x) % p, int(y) % p) for x, y in points]
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        return cls(p, frozenset(pts))

    @classmethod
    def from_json(cls, obj) -> "PlanarSet":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.of(obj["p"], obj["points"])

    def to_json(self) -> dict:
        return {"p": self.p, "points": [list(pt) for pt in sorted(self.points)]}


@dataclass(frozen=True)
class DirectionSet:
    slopes: frozenset
    vertical: bool = False

    def __len__(self) -> int:
        return len(self.slopes) + (1 if self.vertical else 0)

    def to_json(self) -> dict:
        return {"slopes": sorted(self.slopes), "vertical": self.vertical, "count": len(self)}


def directions_of(S: PlanarSet) -> DirectionSet:
    """Exact enumeration over all unordered pairs."""
    p = S.p
    inv = [0] + [pow(d, -1, p) for d in range(1, p)]
    pts = sorted(S.points)
    slopes = [False] * p
    vertical = False
    for i, (x1, y1) in enumerate(pts):
        for x2, y2 in pts[i + 1:]:
            dx = (x2 - x1) % p
            if dx == 0:
                vertical = True
            else:
                slopes[(y2 - y1) * inv[dx] % p] = True
    return DirectionSet(frozenset(s for s in range(p) if slopes[s]), vertical)


def graph_of(f) -> PlanarSet:
    """{(x, f(x))} for a polynomial or value table."""
    v = eval_all(f) if isinstance(f, FpPoly) else f
    return PlanarSet(v.p, frozenset(enumerate(v.values)))


def ls_count_check(p: int) -> dict:
    """Direction count of the graph of x^((p+1)/2) next to (p+3)/2."""
    m = as_modulus(p)
    if m.p < 5:
        raise ValueError("needs p >= 5")
    f = FpPoly.monomial(m, (m.p + 1) // 2)
    dirs = directions_of(graph_of(f))
    expected = (m.p + 3) // 2
    return {"p": m.p, "polynomial": str(f), "directions": len(dirs),
            "expected": expected, "agrees": len(dirs) == expected,
            "slopes": sorted(dirs.slopes)}


def is_affine_table(v: ValueTable) -> bool:
    d = interpolate(v).degree
    return d is None or d <= 1


def _scan(p: int, tables) -> dict:
    need = (p + 3) // 2
    checked = affine = 0
    failures = []
    min_non_affine = None
    for v in tables:
        checked += 1
        n = len(directions_of(graph_of(v)))
        if is_affine_table(v):
            affine += 1
            if n != 1:
                failures.append({"table": list(v.values), "directions": n, "affine": True})
        else:
            min_non_affine = n if min_non_affine is None else min(min_non_affine, n)
            if n < need:
                failures.append({"table": list(v.values), "directions": n, "affine": False})
    return {"p": p, "checked": checked, "affine": affine, "required": need,
            "min_non_affine": min_non_affine, "failures": failures,
            "holds": not failures}


def redei_scan(p: int, trials: Optional[int] = None, seed: int = 0) -> dict:
    """Check that non-affine function graphs determine >= (p+3)/2 directions.

    ``trials=None`` walks all p^p function graphs; otherwise ``trials``
    uniformly random ones are drawn from ``random.Random(seed)``.
    """
    from itertools import product

    m = as_modulus(p)
    p = m.p
    if trials is None:
        tables = (ValueTable(m, vals) for vals in product(range(p), repeat=p))
        out = _scan(p, tables)
        out["mode"] = "exhaustive"
        out["seed"] = None
    else:
        rng = random.Random(seed)
        tables = (ValueTable(m, tuple(rng.randrange(p) for _ in range(p)))
                  for _ in range(trials))
        out = _scan(p, tables)
        out["mode"] = "sampled"
        out["seed"] = seed
    return out
