"""Independent oracles used by the tests.

These deliberately avoid the library's evaluation paths: the subset-sum
expansion checks the complex-product residuals, coordinate geometry checks
tangency claims, and central differences check Jacobians.
"""

import itertools
import math

import numpy as np


def brute_force_product_im(ms, deltas=None):
    """Expanded alternating subset sum equal to Im prod (m_j + i d_j).

    Sums over subsets I with |I| = n-1 (mod 2) of
    (-1)^((n-|I|-1)/2) * prod_{j in I} m_j * prod_{j not in I} d_j.
    """
    n = len(ms)
    if deltas is None:
        deltas = [1] * n
    total = 0.0
    for size in range((n - 1) % 2, n + 1, 2):
        sign = (-1.0) ** ((n - size - 1) // 2)
        for idx in itertools.combinations(range(n), size):
            prod = sign
            inside = set(idx)
            for j in range(n):
                prod *= ms[j] if j in inside else deltas[j]
            total += prod
    return total


def fd_jacobian(system, x, h=1e-6):
    """Central-difference Jacobian of the system residual at x."""
    x = np.asarray(x, float)
    cols = []
    for k in range(len(x)):
        xp = x.copy()
        xm = x.copy()
        xp[k] += h
        xm[k] -= h
        cols.append((system.residual_vector(xp)
                     - system.residual_vector(xm)) / (2.0 * h))
    return np.stack(cols, axis=1)


def tangent_circle_solutions(circles):
    """All circles tangent to three given mutually tangent circles.

    Input: [(center, radius)] * 3.  Solves the coordinate system
    |c - c_i|^2 = (rho + r_i)^2 by linear elimination plus one quadratic;
    returns [(center, rho)] with signed rho (negative = enclosing).
    """
    (c1, r1), (c2, r2), (c3, r3) = [(np.asarray(c, float), float(r))
                                    for c, r in circles]

    def row(ca, ra, cb, rb):
        lhs = np.array([2.0 * (ca[0] - cb[0]), 2.0 * (ca[1] - cb[1])])
        rho_coef = 2.0 * (ra - rb)
        rhs = (ca @ ca - ra * ra) - (cb @ cb - rb * rb)
        return lhs, rho_coef, rhs

    A = np.zeros((2, 2))
    rc = np.zeros(2)
    b = np.zeros(2)
    A[0], rc[0], b[0] = row(c1, r1, c2, r2)
    A[1], rc[1], b[1] = row(c1, r1, c3, r3)
    p = np.linalg.solve(A, b)        # center = p + rho * q
    q = np.linalg.solve(A, -rc)

    alpha = q @ q - 1.0
    beta = 2.0 * (q @ (p - c1)) - 2.0 * r1
    gamma = (p - c1) @ (p - c1) - r1 * r1
    if abs(alpha) < 1e-14:
        roots = [-gamma / beta]
    else:
        disc = beta * beta - 4.0 * alpha * gamma
        if disc < 0:
            return []
        sq = math.sqrt(disc)
        roots = [(-beta + sq) / (2.0 * alpha), (-beta - sq) / (2.0 * alpha)]
    return [(p + rho * q, rho) for rho in roots]


def rigid_align_residual(points_a, points_b):
    """Best orientation-preserving rigid motion residual (no scaling)."""
    A = np.asarray(points_a, float)
    B = np.asarray(points_b, float)
    ca = A.mean(axis=0)
    cb = B.mean(axis=0)
    A0 = A - ca
    B0 = B - cb
    U, _, Vt = np.linalg.svd(A0.T @ B0)
    R = U @ Vt
    if np.linalg.det(R) < 0:
        U[:, -1] *= -1
        R = U @ Vt
    return float(np.abs(A0 @ R - B0).max())


def place_triangle(a, b, c):
    """Vertices of a triangle with side lengths a (BC), b (CA), c (AB)."""
    A = np.array([0.0, 0.0])
    B = np.array([c, 0.0])
    x = (b * b + c * c - a * a) / (2.0 * c)
    y = math.sqrt(max(b * b - x * x, 0.0))
    return A, B, np.array([x, y])
