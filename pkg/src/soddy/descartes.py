"""Flower-level utilities and Descartes-type identities.

An n-flower is a central circle with n petals, each externally tangent to
the centre and to its cyclic neighbours.  The flower parameters

    m_j = sqrt((k_j/k_inf + 1)(k_{j-1}/k_inf + 1) - 1)

equal the cotangents of the half-angles subtended at the centre, and for
every realized flower the product prod_j (m_j + i) is real.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from . import errors

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Flower:
    """Curvature data of an n-flower; centers are filled by the generator."""

    central: float
    petals: tuple[float, ...]
    centers: Optional[tuple[tuple[float, float], ...]] = None  # petal centres
    branch: int = 0

    @property
    def n(self) -> int:
        return len(self.petals)

    def to_json_dict(self) -> dict:
        out = {"central": self.central, "petals": list(self.petals)}
        if self.centers is not None:
            out["centers"] = [list(c) for c in self.centers]
        if self.branch:
            out["branch"] = self.branch
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "Flower":
        data = json.loads(text)
        return Flower(float(data["central"]),
                      tuple(float(p) for p in data["petals"]),
                      branch=int(data.get("branch", 0)))


@dataclass(frozen=True)
class TriangleSoddy:
    """A Euclidean triangle with its Soddy circles (radii s-a, s-b, s-c)."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        s = self.semiperimeter
        if min(s - self.a, s - self.b, s - self.c) <= 0:
            raise errors.DegenerateTriangle(
                f"sides {(self.a, self.b, self.c)} violate the strict "
                "triangle inequality")

    @property
    def semiperimeter(self) -> float:
        return 0.5 * (self.a + self.b + self.c)

    @property
    def radii(self) -> tuple[float, float, float]:
        s = self.semiperimeter
        return (s - self.a, s - self.b, s - self.c)

    @property
    def curvatures(self) -> tuple[float, float, float]:
        ra, rb, rc = self.radii
        return (1.0 / ra, 1.0 / rb, 1.0 / rc)

    @property
    def curvature_form(self) -> float:
        """L = kA kB + kB kC + kC kA."""
        ka, kb, kc = self.curvatures
        return ka * kb + kb * kc + kc * ka


def soddy_radii(a: float, b: float, c: float) -> tuple[float, float, float]:
    """Radii of the mutually tangent circles centred at a triangle's
    vertices."""
    return TriangleSoddy(a, b, c).radii


def m_from_flower(flower: Flower) -> list[float]:
    """Flower parameters m_j from curvature ratios (one per petal gap)."""
    if flower.central <= 0 or any(k <= 0 for k in flower.petals):
        raise errors.NonPositiveCurvature(
            "flower curvatures must be positive")
    k0 = flower.central
    ks = flower.petals
    out = []
    for j in range(len(ks)):
        prod = (ks[j] / k0 + 1.0) * (ks[j - 1] / k0 + 1.0) - 1.0
        out.append(math.sqrt(prod))
    return out


def symmetric_descartes_residual(ms: Sequence[float]) -> float:
    """Im prod_j (m_j + i); zero exactly on flower parameter lists."""
    m = np.asarray(ms, float)
    ones = np.ones(len(m), np.int8)
    return float(K.product_im(m, ones))


def normalized_descartes_residual(ms: Sequence[float]) -> float:
    """Residual scaled by prod |m_j + i|, giving a dimensionless size."""
    scale = math.exp(sum(0.5 * math.log(m * m + 1.0) for m in ms))
    return symmetric_descartes_residual(ms) / scale


def classic_descartes_residual(k1: float, k2: float, k3: float,
                               k4: float) -> float:
    """(k1+k2+k3+k4)^2 - 2(k1^2+k2^2+k3^2+k4^2); signed curvatures."""
    s = k1 + k2 + k3 + k4
    return s * s - 2.0 * (k1 * k1 + k2 * k2 + k3 * k3 + k4 * k4)


def flower_angle_sum(central_radius: float,
                     petal_radii: Sequence[float]) -> float:
    """Total angle subtended at the centre by the cyclic petal chain."""
    return float(K.flower_angle_sum(float(central_radius),
                                    np.asarray(petal_radii, float)))


ANGLE_TOL = 1e-13
MAX_RESAMPLES = 2000


def random_flower(n: int, beta: int = 0, seed: int = 0) -> Flower:
    """Random realized flower with angle sum 2 pi (beta + 1).

    Petal radii except the last are sampled log-uniformly; the last is
    solved by bisection on the monotone angle-sum condition.  The angle at
    the centre of each petal triangle is below pi, so the target is
    attainable only for n >= 2 beta + 3.  Deterministic per seed.
    """
    if n < 3:
        raise errors.FlowerError("a flower needs at least 3 petals")
    if beta < 0:
        raise errors.FlowerError("branch index must be >= 0")
    if n <= 2 * beta + 2:
        raise errors.Unattainable(
            f"angle sum {2 * (beta + 1)} pi needs at least {2 * beta + 3} "
            f"petals, got {n}")
    target = TWO_PI * (beta + 1)
    hi_exp = 1.0 if beta == 0 else 1.0 + 2.0 * beta
    rng = np.random.default_rng(seed)
    lo_x, hi_x = 1e-12, 1e12
    for _ in range(MAX_RESAMPLES):
        fixed = 10.0 ** rng.uniform(-1.0, hi_exp, n - 1)
        base = sum(K.flower_angle(1.0, fixed[j - 1], fixed[j])
                   for j in range(1, n - 1))
        f_lo = (base + K.flower_angle(1.0, fixed[-1], lo_x)
                + K.flower_angle(1.0, lo_x, fixed[0]) - target)
        f_hi = (base + K.flower_angle(1.0, fixed[-1], hi_x)
                + K.flower_angle(1.0, hi_x, fixed[0]) - target)
        if f_lo < 0.0 < f_hi:
            last = float(K.solve_flower_radius(
                1.0, np.ascontiguousarray(fixed, float), target,
                lo_x, hi_x, ANGLE_TOL, 200))
            radii = list(fixed) + [last]
            centers = _place_petals(radii)
            return Flower(1.0, tuple(1.0 / r for r in radii),
                          centers=centers, branch=beta)
    raise errors.Unattainable(
        f"no bracket for n={n}, beta={beta} after {MAX_RESAMPLES} samples")


def _place_petals(radii: Sequence[float]) -> tuple[tuple[float, float], ...]:
    """Petal centres around a unit central circle at the origin."""
    phi = 0.0
    centers = []
    for j, r in enumerate(radii):
        if j > 0:
            phi += K.flower_angle(1.0, radii[j - 1], radii[j])
        d = 1.0 + r
        centers.append((d * math.cos(phi), d * math.sin(phi)))
    return tuple(centers)
