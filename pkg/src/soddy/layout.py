"""Reconstruct circle packings from solutions and certify them.

The pipeline per geometry:

* disc: curvatures up to scale, breadth-first placement over the dual
  graph, tangency certification;
* sphere: planar layout of the complex minus the distinguished face,
  mirrored (stereographic projection reverses orientation) and lifted
  through the inverse stereographic map to spherical caps;
* torus: planar layout of the cut fundamental domain, lattice vectors
  from the boundary identifications, lattice-aware certification.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import errors
from .complexes import (Complex, Corner, FundamentalDomain, NormalCurve,
                        SurfaceKind, cut_fundamental_domain)
from .equations import Assignment, EquationSystem

TWO_PI = 2.0 * math.pi


def _cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def wrap_angle(x: float) -> float:
    """Reduce to the principal range (-pi, pi]."""
    r = math.remainder(x, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


# -- angles and curvatures ------------------------------------------------


@dataclass(frozen=True)
class AngleData:
    """Corner angles theta = 2*atan2(1, m); pinned corners of the
    distinguished sphere face get their exterior angle 5*pi/3."""

    theta: dict[Corner, float]

    def vertex_angle_sum(self, cx: Complex, vertex: int) -> float:
        return sum(self.theta[c] for c in cx.vertex_corners[vertex])


def angles_from_solution(system: EquationSystem,
                         assignment: Assignment) -> AngleData:
    theta = {}
    for corner in system.complex.corners:
        m = assignment.value(system, corner)
        if corner not in system.pinned and m <= 0:
            raise errors.NonPositiveValue(
                f"corner {corner} has non-positive value {m}")
        theta[corner] = 2.0 * math.atan2(1.0, m)
    return AngleData(theta)


@dataclass
class CurvatureData:
    """Circle curvatures per layout vertex, up to one global scale.

    ``kappa`` is indexed by the vertices of the layout complex (the disc
    itself, the sphere minus its distinguished face, or the cut fundamental
    domain of a torus).  ``max_mismatch`` is the largest relative
    inconsistency met while propagating over faces; on true solutions it is
    at the solver-residual level.  For tori, ``scale_l`` and ``scale_m``
    are the boundary scale factors that equal 1 exactly on solutions.
    """

    kappa: dict[int, float]
    base_vertex: int
    max_mismatch: float
    scale_l: Optional[float] = None
    scale_m: Optional[float] = None


def _layout_faces(system: EquationSystem) -> tuple[Complex, list[int]]:
    cx = system.complex
    if cx.kind is SurfaceKind.SPHERE:
        return cx, [f for f in range(cx.num_faces) if f != system.delta0]
    if cx.kind is SurfaceKind.TORUS:
        fd = system.domain or cut_fundamental_domain(cx)
        return fd.disc, list(range(fd.disc.num_faces))
    return cx, list(range(cx.num_faces))


def _corner_value(system: EquationSystem, assignment: Assignment,
                  corner: Corner) -> float:
    return assignment.value(system, corner)


def curvatures_from_solution(system: EquationSystem, assignment: Assignment,
                             base_vertex: Optional[int] = None,
                             tol: float = 1e-9) -> CurvatureData:
    """Propagate curvature ratios kappa ~ 1/m over the face graph.

    Within one face the three curvatures are proportional to the
    reciprocals of its corner values; edge equations make the face scales
    match along shared edges, up to the reported mismatch.
    """
    layout_cx, faces = _layout_faces(system)
    face_set = set(faces)
    for f in faces:
        for c in layout_cx.face_corners(f):
            m = _corner_value(system, assignment, c)
            if m <= 0:
                raise errors.NonPositiveValue(
                    f"corner {c} has non-positive value {m}")

    adj: dict[int, list[tuple[int, int]]] = {f: [] for f in faces}
    for e in layout_cx.interior_edges():
        reps = layout_cx.edge_sides[e]
        (f1, _), (f2, _) = reps
        if f1 in face_set and f2 in face_set:
            adj[f1].append((f2, e))
            adj[f2].append((f1, e))

    kappa: dict[int, float] = {}
    max_mismatch = 0.0
    seed = min(faces)
    scale = {seed: 1.0}
    order = [seed]
    queue = [seed]
    while queue:
        f = queue.pop(0)
        for g, e in sorted(adj[f]):
            if g in scale:
                continue
            # match the face scales across the shared edge via one endpoint
            (fa, sa), (fb, sb) = layout_cx.edge_sides[e]
            if fa != f:
                (fa, sa), (fb, sb) = (fb, sb), (fa, sa)
            m_f = _corner_value(system, assignment, (fa, sa))
            m_g = _corner_value(system, assignment, (fb, (sb + 1) % 3))
            s_u = scale[f] * m_g / m_f
            m_f2 = _corner_value(system, assignment, (fa, (sa + 1) % 3))
            m_g2 = _corner_value(system, assignment, (fb, sb))
            s_v = scale[f] * m_g2 / m_f2
            max_mismatch = max(max_mismatch,
                               abs(s_u - s_v) / max(abs(s_u), abs(s_v)))
            scale[g] = s_u
            order.append(g)
            queue.append(g)
    if len(scale) != len(faces):
        raise errors.Disconnected("layout face graph is disconnected")

    for f in order:
        for c in layout_cx.face_corners(f):
            v = layout_cx.vertex_of_corner[c]
            k = scale[f] / _corner_value(system, assignment, c)
            if v in kappa:
                max_mismatch = max(max_mismatch,
                                   abs(k - kappa[v]) / max(k, kappa[v]))
            else:
                kappa[v] = k
    if max_mismatch > tol:
        raise errors.InconsistentCurvatures(
            f"curvature propagation mismatch {max_mismatch:.3e} > {tol:.1e}")

    scale_l = scale_m = None
    if system.complex.kind is SurfaceKind.TORUS:
        fd = system.domain or cut_fundamental_domain(system.complex)
        ratios_m = [kappa[b] / kappa[t]
                    for b, t in zip(fd.p_bottom, fd.p_top)]
        ratios_l = [kappa[left] / kappa[r]
                    for left, r in zip(fd.p_left, fd.p_right)]
        scale_m = float(np.mean(ratios_m))
        scale_l = float(np.mean(ratios_l))
        worst = max(abs(r - 1.0) for r in ratios_m + ratios_l)
        if worst > tol:
            raise errors.TorusScaleMismatch(
                f"fundamental-domain scale factor off by {worst:.3e}")

    if base_vertex is None:
        base_vertex = min(kappa)
    if base_vertex not in kappa:
        raise errors.LayoutError(f"no vertex {base_vertex} in the layout")
    base = kappa[base_vertex]
    kappa = {v: k / base for v, k in kappa.items()}
    return CurvatureData(kappa, base_vertex, max_mismatch,
                         scale_l=scale_l, scale_m=scale_m)


# -- packings ---------------------------------------------------------------


class Geometry(Enum):
    PLANE = "plane"
    SPHERE = "sphere"
    TORUS_LATTICE = "torus_lattice"


@dataclass(frozen=True)
class PlacedFace:
    face: int
    vertices: tuple[int, int, int]
    positions: tuple[tuple[float, ...], ...]


@dataclass
class Packing:
    """Realized circles per vertex plus per-geometry extras.

    Plane/torus circles are ((x, y), euclidean radius); sphere circles are
    ((x, y, z) unit cap centre, spherical radius).  ``faces`` hold the
    placed triangles; for tori the positions live in the fundamental
    domain and ``lattice`` carries the two translation vectors.
    """

    geometry: Geometry
    circles: dict[int, tuple[tuple[float, ...], float]]
    faces: tuple[PlacedFace, ...]
    lattice: Optional[tuple[tuple[float, float], tuple[float, float]]] = None
    certification: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "geometry": self.geometry.value,
            "circles": {str(v): {"center": list(c), "radius": r}
                        for v, (c, r) in sorted(self.circles.items())},
            "faces": [{"face": pf.face, "vertices": list(pf.vertices),
                       "positions": [list(p) for p in pf.positions]}
                      for pf in self.faces],
            "certification": dict(sorted(self.certification.items())),
        }
        if self.lattice is not None:
            out["lattice"] = [list(self.lattice[0]), list(self.lattice[1])]
        if "planar_circles" in self.extras:
            out["planar_circles"] = {
                str(v): {"center": list(c), "radius": r}
                for v, (c, r) in sorted(self.extras["planar_circles"].items())}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_json(text: str) -> "Packing":
        data = json.loads(text)
        geometry = Geometry(data["geometry"])
        circles = {int(v): (tuple(rec["center"]), float(rec["radius"]))
                   for v, rec in data["circles"].items()}
        faces = tuple(
            PlacedFace(rec["face"], tuple(rec["vertices"]),
                       tuple(tuple(p) for p in rec["positions"]))
            for rec in data["faces"])
        lattice = None
        if "lattice" in data:
            lattice = (tuple(data["lattice"][0]), tuple(data["lattice"][1]))
        extras = {}
        if "planar_circles" in data:
            extras["planar_circles"] = {
                int(v): (tuple(rec["center"]), float(rec["radius"]))
                for v, rec in data["planar_circles"].items()}
        return Packing(geometry, circles, faces, lattice=lattice,
                       certification=dict(data.get("certification", {})),
                       extras=extras)


def _third_point(pa: np.ndarray, pb: np.ndarray, ra: float,
                 rb: float) -> np.ndarray:
    """Positively oriented third vertex at distances ra from pa, rb from pb."""
    d = pb - pa
    dist = float(np.hypot(d[0], d[1]))
    along = (dist * dist + ra * ra - rb * rb) / (2.0 * dist)
    h2 = ra * ra - along * along
    h = math.sqrt(h2) if h2 > 0.0 else 0.0
    ux, uy = d[0] / dist, d[1] / dist
    return np.array([pa[0] + along * ux - h * uy,
                     pa[1] + along * uy + h * ux])


def _gate_residual_check(system: EquationSystem, assignment: Assignment,
                         tol: float) -> None:
    r = system.residual_vector(assignment.vector(system))
    worst = float(np.abs(r).max(initial=0.0))
    if worst > tol:
        raise errors.ResidualTooLarge(
            f"assignment residual {worst:.3e} exceeds {tol:.1e}; "
            "solve first")


def _place(layout_cx: Complex, faces: Sequence[int],
           radius_of_vertex: dict[int, float], seed_face: int,
           tol: float) -> tuple[dict[int, np.ndarray], list[int], float]:
    """BFS placement over the dual graph; returns positions per vertex,
    face order, and the largest relative position mismatch on revisits."""
    face_set = set(faces)
    adj: dict[int, list[tuple[int, int]]] = {f: [] for f in faces}
    for e in layout_cx.interior_edges():
        (f1, _), (f2, _) = layout_cx.edge_sides[e]
        if f1 in face_set and f2 in face_set:
            adj[f1].append((f2, e))
            adj[f2].append((f1, e))

    rad = radius_of_vertex
    max_radius = max(rad.values())
    pos: dict[int, np.ndarray] = {}
    mismatch = 0.0

    def vertex(f: int, slot: int) -> int:
        return layout_cx.vertex_of_corner[(f, slot)]

    def set_pos(v: int, p: np.ndarray) -> None:
        nonlocal mismatch
        if v in pos:
            dev = float(np.hypot(*(pos[v] - p))) / max_radius
            mismatch = max(mismatch, dev)
        else:
            pos[v] = p

    v0, v1, v2 = (vertex(seed_face, i) for i in range(3))
    pos[v0] = np.zeros(2)
    pos[v1] = np.array([rad[v0] + rad[v1], 0.0])
    set_pos(v2, _third_point(pos[v0], pos[v1],
                             rad[v0] + rad[v2], rad[v1] + rad[v2]))

    done = {seed_face}
    order = [seed_face]
    queue = [seed_face]
    while queue:
        f = queue.pop(0)
        for g, _e in sorted(adj[f]):
            if g in done:
                continue
            vs = [vertex(g, i) for i in range(3)]
            missing = [i for i, v in enumerate(vs) if v not in pos]
            if len(missing) >= 2:
                continue  # not attachable yet; reached via another edge
            if len(missing) == 1:
                k = missing[0]
                a, b = vs[(k + 1) % 3], vs[(k + 2) % 3]
                p = _third_point(pos[a], pos[b],
                                 rad[a] + rad[vs[k]], rad[b] + rad[vs[k]])
                set_pos(vs[k], p)
            else:
                # all three placed already: consistency is recorded by the
                # tangency certification
                pass
            done.add(g)
            order.append(g)
            queue.append(g)
    if len(done) != len(faces):
        raise errors.Disconnected("dual graph BFS did not reach every face")
    if mismatch > tol:
        raise errors.PlacementMismatch(
            f"vertex reached twice with positions {mismatch:.3e} apart "
            f"(relative to the largest radius); not a solution")
    return pos, order, mismatch


def _planar_certification(layout_cx: Complex, faces: Sequence[int],
                          pos: dict[int, np.ndarray],
                          rad: dict[int, float]) -> dict:
    max_radius = max(rad.values())
    tangency = 0.0
    orientation = 0.0
    for f in faces:
        vs = [layout_cx.vertex_of_corner[(f, i)] for i in range(3)]
        ps = [pos[v] for v in vs]
        for i in range(3):
            a, b = vs[i], vs[(i + 1) % 3]
            gap = abs(float(np.hypot(*(pos[a] - pos[b])))
                      - (rad[a] + rad[b]))
            tangency = max(tangency, gap / max_radius)
        cross = _cross2(ps[1] - ps[0], ps[2] - ps[0])
        orientation = min(orientation, cross / (max_radius * max_radius))
    return {
        "max_tangency_residual": tangency,
        "max_orientation_violation": -orientation,
        "max_radius": max_radius,
    }


def realize_disc(system: EquationSystem, assignment: Assignment,
                 scale: float = 1.0, seed_face: Optional[int] = None,
                 tol: float = 1e-9,
                 residual_tol: float = 1e-8) -> Packing:
    """Plane layout of a disc solution; certified tangencies."""
    if system.complex.kind is not SurfaceKind.DISC:
        raise errors.LayoutError("realize_disc needs a disc system")
    _gate_residual_check(system, assignment, residual_tol)
    cx = system.complex
    curv = curvatures_from_solution(system, assignment, tol=residual_tol)
    rad = {v: scale / k for v, k in curv.kappa.items()}
    faces = list(range(cx.num_faces))
    seed = min(faces) if seed_face is None else int(seed_face)
    pos, order, mismatch = _place(cx, faces, rad, seed, tol)
    placed = tuple(
        PlacedFace(f, tuple(cx.vertex_of_corner[(f, i)] for i in range(3)),
                   tuple(tuple(pos[cx.vertex_of_corner[(f, i)]])
                         for i in range(3)))
        for f in faces)
    cert = _planar_certification(cx, faces, pos, rad)
    cert["max_position_mismatch"] = mismatch
    return Packing(Geometry.PLANE,
                   {v: (tuple(pos[v]), rad[v]) for v in pos},
                   placed, certification=cert)


# -- sphere -----------------------------------------------------------------


def _lift_point(x: float, y: float) -> np.ndarray:
    s = x * x + y * y
    return np.array([2.0 * x, 2.0 * y, s - 1.0]) / (1.0 + s)


def _lift_circle(center: np.ndarray, r: float) -> tuple[np.ndarray, float]:
    """Spherical cap that is the inverse stereographic image of the disc."""
    cx, cy = center
    pts = [_lift_point(cx + r, cy), _lift_point(cx - r, cy),
           _lift_point(cx, cy + r)]
    n = np.cross(pts[1] - pts[0], pts[2] - pts[0])
    norm = float(np.linalg.norm(n))
    if norm == 0.0:
        raise errors.LayoutError("degenerate circle lift")
    n /= norm
    d = float(n @ pts[0])
    inside = _lift_point(cx, cy)
    if float(n @ inside) < d:
        n, d = -n, -d
    d = min(1.0, max(-1.0, d))
    return n, math.acos(d)


def realize_sphere(system: EquationSystem, assignment: Assignment,
                   plane_scale: float = 1.0, tol: float = 1e-9,
                   residual_tol: float = 1e-8) -> Packing:
    """Spherical packing good for the distinguished face.

    Lays out the complex minus the distinguished face in the plane,
    verifies the boundary triangle is equilateral with congruent circles,
    centres it, mirrors it (stereographic projection reverses orientation)
    and lifts every circle to a spherical cap avoiding the north pole.
    """
    cx = system.complex
    if cx.kind is not SurfaceKind.SPHERE or system.delta0 is None:
        raise errors.LayoutError("realize_sphere needs a sphere system")
    _gate_residual_check(system, assignment, residual_tol)
    delta0 = system.delta0
    curv = curvatures_from_solution(system, assignment, tol=residual_tol)
    rad = {v: plane_scale / k for v, k in curv.kappa.items()}
    faces = [f for f in range(cx.num_faces) if f != delta0]
    pos, order, mismatch = _place(cx, faces, rad, min(faces), tol)

    bverts = [cx.vertex_of_corner[c] for c in cx.face_corners(delta0)]
    rb = [rad[v] for v in bverts]
    if max(rb) - min(rb) > tol * max(rb):
        raise errors.NotEquilateralBoundary(
            f"boundary circles have radii {rb}")
    sides = [float(np.hypot(*(pos[bverts[i]] - pos[bverts[(i + 1) % 3]])))
             for i in range(3)]
    if max(sides) - min(sides) > tol * max(sides):
        raise errors.NotEquilateralBoundary(
            f"boundary triangle has sides {sides}")

    centroid = sum(pos[v] for v in bverts) / 3.0
    # mirror in y after centring: the lift reverses orientation once more,
    # so the spherical packing comes out positively oriented
    flip = np.array([1.0, -1.0])
    plane_pos = {v: (p - centroid) * flip for v, p in pos.items()}

    caps = {}
    for v, p in plane_pos.items():
        caps[v] = _lift_circle(p, rad[v])
    north = np.array([0.0, 0.0, 1.0])
    for v, (c, rho) in caps.items():
        if math.acos(min(1.0, max(-1.0, float(c @ north)))) <= rho + tol:
            raise errors.NorthPoleCovered(
                f"cap of vertex {v} reaches the projection point")

    sphere_faces = tuple(
        PlacedFace(f, tuple(cx.vertex_of_corner[(f, i)] for i in range(3)),
                   tuple(tuple(caps[cx.vertex_of_corner[(f, i)]][0])
                         for i in range(3)))
        for f in range(cx.num_faces))

    tangency = 0.0
    orientation = 0.0
    for f in range(cx.num_faces):
        vs = [cx.vertex_of_corner[(f, i)] for i in range(3)]
        cs = [caps[v][0] for v in vs]
        for i in range(3):
            a, b = vs[i], vs[(i + 1) % 3]
            geo = math.acos(min(1.0, max(-1.0, float(caps[a][0] @ caps[b][0]))))
            tangency = max(tangency, abs(geo - (caps[a][1] + caps[b][1])))
        if f != delta0:
            # the distinguished face realizes the geodesic triangle
            # containing the projection point, where the spanned-triple
            # determinant does not witness orientation; its orientation is
            # implied by goodness and the planar stage
            det = float(np.linalg.det(np.stack(cs)))
            orientation = min(orientation, det)

    plane_cert = _planar_certification(cx, faces, pos, rad)
    cert = {
        "max_tangency_residual": tangency,
        "max_orientation_violation": max(
            -min(orientation, 0.0), plane_cert["max_orientation_violation"]),
        "max_position_mismatch": mismatch,
        "max_radius": max(rho for _, rho in caps.values()),
        "planar_tangency_residual": plane_cert["max_tangency_residual"],
    }
    return Packing(
        Geometry.SPHERE,
        {v: (tuple(c), rho) for v, (c, rho) in caps.items()},
        sphere_faces,
        certification=cert,
        extras={"planar_circles": {v: (tuple(plane_pos[v]), rad[v])
                                   for v in plane_pos},
                "delta0": delta0})


# -- torus ------------------------------------------------------------------


def realize_torus(system: EquationSystem, assignment: Assignment,
                  scale: float = 1.0, tol: float = 1e-9,
                  residual_tol: float = 1e-8) -> Packing:
    """Lay out the cut fundamental domain and extract the lattice."""
    cx = system.complex
    if cx.kind is not SurfaceKind.TORUS:
        raise errors.LayoutError("realize_torus needs a torus system")
    _gate_residual_check(system, assignment, residual_tol)
    fd = system.domain or cut_fundamental_domain(cx)
    k0 = fd.disc
    curv = curvatures_from_solution(system, assignment, tol=residual_tol)
    rad = {v: scale / k for v, k in curv.kappa.items()}
    faces = list(range(k0.num_faces))
    pos, order, mismatch = _place(k0, faces, rad, min(faces), tol)

    diam = max(rad.values())

    def translation(pairs) -> np.ndarray:
        vecs = [pos[b] - pos[a] for a, b in pairs]
        t = vecs[0]
        worst = max(float(np.hypot(*(v - t))) for v in vecs)
        if worst > tol * max(diam, float(np.hypot(*t))):
            raise errors.BoundaryMismatch(
                f"boundary segments differ by {worst:.3e}; not translates")
        return sum(vecs) / len(vecs)

    t_mu = translation(list(zip(fd.p_bottom, fd.p_top)))
    t_lambda = translation(list(zip(fd.p_left, fd.p_right)))
    for a, b in list(zip(fd.p_bottom, fd.p_top)) + \
            list(zip(fd.p_left, fd.p_right)):
        if abs(rad[a] - rad[b]) > tol * diam:
            raise errors.BoundaryMismatch(
                f"identified vertices {a}, {b} carry different radii")

    det = _cross2(t_lambda, t_mu)
    if abs(det) <= tol * diam * diam:
        raise errors.DegenerateLattice(
            f"lattice vectors nearly dependent (det {det:.3e})")

    torus_vertex = {v: cx.vertex_of_corner[k0.vertex_corners[v][0]]
                    for v in range(k0.num_vertices)}
    circles = {}
    for v in sorted(range(k0.num_vertices)):
        tv = torus_vertex[v]
        if tv not in circles:
            circles[tv] = (tuple(pos[v]), rad[v])

    placed = tuple(
        PlacedFace(f,
                   tuple(torus_vertex[k0.vertex_of_corner[(f, i)]]
                         for i in range(3)),
                   tuple(tuple(pos[k0.vertex_of_corner[(f, i)]])
                         for i in range(3)))
        for f in faces)
    cert = _planar_certification(k0, faces, pos, rad)
    cert["max_position_mismatch"] = mismatch
    cert["lattice_orientation"] = det
    return Packing(
        Geometry.TORUS_LATTICE, circles, placed,
        lattice=(tuple(t_lambda), tuple(t_mu)),
        certification=cert,
        extras={"k0_positions": {v: tuple(p) for v, p in pos.items()},
                "k0_radii": dict(rad),
                "scale_l": curv.scale_l, "scale_m": curv.scale_m})


# -- holonomy angles ---------------------------------------------------------


def theta_holonomy(system: EquationSystem, assignment: Assignment,
                   curve: NormalCurve, tol: float = 1e-9) -> float:
    """Total edge-rotation angle along a closed normal curve, in (-pi, pi].

    Well defined on assignments satisfying the vertex equations (it then
    depends only on the homology class of the curve).
    """
    cx = system.complex
    for v in cx.interior_vertices():
        s = sum(2.0 * math.atan2(1.0, assignment.value(system, c))
                for c in cx.vertex_corners[v])
        if abs(math.remainder(s, TWO_PI)) > tol:
            raise errors.VertexEquationsViolated(
                f"angle sum at vertex {v} is {s!r}, not a multiple of 2 pi")
    total = sum(d * 2.0 * math.atan2(1.0, assignment.value(system, (f, c)))
                for f, c, d in curve.steps)
    return wrap_angle(total)


# -- certification -----------------------------------------------------------


@dataclass
class CertificationReport:
    max_tangency_residual: float
    max_orientation_violation: float
    tolerance: float
    offending_edges: tuple

    @property
    def passed(self) -> bool:
        return (self.max_tangency_residual <= self.tolerance
                and self.max_orientation_violation <= self.tolerance)

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_tangency_residual": self.max_tangency_residual,
            "max_orientation_violation": self.max_orientation_violation,
            "tolerance": self.tolerance,
            "offending_edges": [list(e) for e in self.offending_edges],
        }


def check_packing(packing: Packing, tol: float = 1e-9) -> CertificationReport:
    """Re-derive tangency and orientation residuals from placed data.

    Residuals are relative to the largest radius (geodesic gaps are
    absolute radians on the unit sphere).  Every edge of the complex is
    realized inside some placed face, so face-local checks cover all
    edges; for tori the faces live in the fundamental domain, where the
    lattice identifications were certified at construction.
    """
    spherical = packing.geometry is Geometry.SPHERE
    skip_det = packing.extras.get("delta0") if spherical else None
    max_radius = max(r for _, r in packing.circles.values())
    worst = 0.0
    orient = 0.0
    offending = []
    for pf in packing.faces:
        ps = [np.array(p) for p in pf.positions]
        for i in range(3):
            a, b = pf.vertices[i], pf.vertices[(i + 1) % 3]
            ra, rb = packing.circles[a][1], packing.circles[b][1]
            if spherical:
                dot = min(1.0, max(-1.0, float(ps[i] @ ps[(i + 1) % 3])))
                gap = abs(math.acos(dot) - (ra + rb))
            else:
                d = ps[i] - ps[(i + 1) % 3]
                gap = abs(float(np.hypot(d[0], d[1])) - (ra + rb)) / max_radius
            if gap > tol:
                offending.append((pf.face, a, b, gap))
            worst = max(worst, gap)
        if spherical:
            if pf.face != skip_det:
                orient = min(orient, float(np.linalg.det(np.stack(ps))))
        else:
            cross = _cross2(ps[1] - ps[0], ps[2] - ps[0])
            orient = min(orient, cross / (max_radius * max_radius))
    return CertificationReport(
        max_tangency_residual=worst,
        max_orientation_violation=-min(orient, 0.0),
        tolerance=tol,
        offending_edges=tuple(offending),
    )


# -- round trips --------------------------------------------------------------


def corner_values_from_curvatures(layout_cx: Complex, faces: Sequence[int],
                                  kappa: dict[int, float]) -> dict[Corner, float]:
    """Recover corner values from circle curvatures: sqrt(L)/kappa_v."""
    out = {}
    for f in faces:
        vs = [layout_cx.vertex_of_corner[(f, i)] for i in range(3)]
        ku, kv, kw = (kappa[v] for v in vs)
        L = ku * kv + kv * kw + kw * ku
        for i, v in enumerate(vs):
            out[(f, i)] = math.sqrt(L) / kappa[v]
    return out


def packing_corner_values(system: EquationSystem,
                          packing: Packing) -> dict[Corner, float]:
    """Corner values recomputed from a packing's placed curvatures."""
    if packing.geometry is Geometry.PLANE:
        cx = system.complex
        kappa = {v: 1.0 / r for v, (c, r) in packing.circles.items()}
        return corner_values_from_curvatures(
            cx, range(cx.num_faces), kappa)
    if packing.geometry is Geometry.SPHERE:
        cx = system.complex
        planar = packing.extras["planar_circles"]
        kappa = {v: 1.0 / r for v, (c, r) in planar.items()}
        faces = [f for f in range(cx.num_faces) if f != packing.extras["delta0"]]
        return corner_values_from_curvatures(cx, faces, kappa)
    fd = system.domain or cut_fundamental_domain(system.complex)
    kappa = {v: 1.0 / r for v, r in packing.extras["k0_radii"].items()}
    return corner_values_from_curvatures(
        fd.disc, range(fd.disc.num_faces), kappa)
