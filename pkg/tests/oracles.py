"""Slow, independent reference computations used to check the library.

Nothing here imports the code paths it is used to check: interpolation is
Lagrange's product formula, Legendre symbols come from squaring every
residue, orbits are built by applying every affine map explicitly.
"""

from itertools import product

import numpy as np


def squares(p):
    return {x * x % p for x in range(1, p)}


def legendre_by_squares(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if a in squares(p) else -1


def poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def lagrange_coeffs(values, p):
    """Coefficients a_0..a_{p-1} of the interpolant via Lagrange basis products."""
    out = [0] * p
    for a, va in enumerate(values):
        if not va:
            continue
        basis = [1]
        denom = 1
        for b in range(p):
            if b != a:
                basis = poly_mul(basis, [-b % p, 1], p)
                denom = denom * (a - b) % p
        scale = va * pow(denom, p - 2, p) % p
        for i, c in enumerate(basis):
            out[i] = (out[i] + scale * c) % p
    return out


def degree_of(coeffs):
    for n in range(len(coeffs) - 1, -1, -1):
        if coeffs[n]:
            return n
    return None


def horner_table(coeffs, p):
    vals = []
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        vals.append(acc)
    return vals


def lagrange_matrix(p):
    """L with coeffs = L @ values (mod p), column a = Lagrange basis at a."""
    L = np.zeros((p, p), dtype=np.int64)
    for a in range(p):
        e = [0] * p
        e[a] = 1
        L[:, a] = lagrange_coeffs(e, p)
    return L


def orbit_of(table, p):
    return frozenset(tuple(table[(a * x + b) % p] for x in range(p))
                     for a in range(1, p) for b in range(p))


def brute_force_orbits(p):
    """{degree: set of orbits} over ALL p^p tables with range sum p."""
    grid = np.array(list(product(range(p), repeat=p)), dtype=np.int64)
    grid = grid[grid.sum(axis=1) == p]
    coeffs = grid @ lagrange_matrix(p).T % p
    out = {}
    for row, c in zip(grid.tolist(), coeffs.tolist()):
        d = degree_of(c)
        out.setdefault(d, set()).add(orbit_of(row, p))
    return out


def alpha_abs_sum_slow(A, p):
    return sum(abs(sum(legendre_by_squares(a - g, p) for a in A)) for g in range(p))


def beta_abs_sum_slow(B, p):
    return sum(abs(sum(w * legendre_by_squares(b - g, p) for b, w in B.items()))
               for g in range(p))


def directions_slow(points, p):
    dirs = set()
    pts = list(points)
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i == j:
                continue
            (x1, y1), (x2, y2) = pts[i], pts[j]
            dx, dy = (x2 - x1) % p, (y2 - y1) % p
            if dx == 0:
                dirs.add("inf")
            else:
                # the slope s with s*dx = dy, found by scanning
                dirs.add(next(s for s in range(p) if s * dx % p == dy))
    return dirs
