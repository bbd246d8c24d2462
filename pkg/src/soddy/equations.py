"""Assembly and evaluation of circle packing equation systems.

Residual contracts (one per equation kind, for corner values m):

* triangle:        m_u m_v m_w - m_u - m_v - m_w
* edge:            m_{D1,v1} m_{D2,v2} - m_{D1,v2} m_{D2,v1}
* vertex:          Im prod_j (m_j + i)            (branched mode)
*                  sum_j 2 arg(m_j + i) - 2 pi     (unbranched mode)
* holonomy:        Im prod_j (m_j + i d_j)         (branched mode)
*                  sum_j 2 arg(m_j + i d_j)        (unbranched mode)
* pin:             m_c - constant
* boundary ratio:  c_v m_{D,v} - c_w m_{D,w}

Vertex and holonomy residuals are evaluated as imaginary parts of
incrementally computed complex products, which equals the expanded
alternating subset sum exactly while costing O(d).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from . import _kernels as K
from . import errors
from .complexes import (Complex, Corner, FundamentalDomain, NormalCurve,
                        SurfaceKind, cut_fundamental_domain)

SQRT3 = math.sqrt(3.0)


class EquationKind(Enum):
    TRIANGLE = "triangle"
    EDGE = "edge"
    VERTEX = "vertex"
    HOLONOMY = "holonomy"
    PIN = "pin"
    BOUNDARY_RATIO = "boundary_ratio"


_KIND_ORDER = {k: i for i, k in enumerate(EquationKind)}


class Mode(Enum):
    BRANCHED = "branched"
    UNBRANCHED = "unbranched"


class Flavor(Enum):
    FULL = "full"
    REDUCED = "reduced"


@dataclass(frozen=True)
class Equation:
    kind: EquationKind
    corners: tuple[Corner, ...]
    deltas: tuple[int, ...] = ()
    constants: tuple[float, ...] = ()

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.corners, self.deltas)


# -- single-equation constructors ------------------------------------------


def triangle_equation(cx: Complex, corners: Sequence[Corner]) -> Equation:
    corners = tuple(tuple(c) for c in corners)
    faces = {c[0] for c in corners}
    if len(corners) != 3 or len(faces) != 1 or len(set(corners)) != 3:
        raise errors.WrongFace(f"{corners} are not the corners of one face")
    return Equation(EquationKind.TRIANGLE, tuple(sorted(corners)))


def edge_equation(cx: Complex, edge: int) -> Equation:
    quad = cx.edge_corner_quad(edge)  # raises BoundaryEdge
    return Equation(EquationKind.EDGE, quad)


def vertex_equation(cx: Complex, vertex: int) -> Equation:
    if cx.vertex_boundary[vertex]:
        raise errors.BoundaryVertex(f"vertex {vertex} lies on the boundary")
    corners = cx.vertex_corners[vertex]
    if len(corners) < 3:
        raise errors.DegreeTooSmall(
            f"vertex {vertex} has degree {len(corners)}")
    return Equation(EquationKind.VERTEX, corners, (1,) * len(corners))


def holonomy_equation(cx: Complex, curve: NormalCurve) -> Equation:
    if len(curve) == 0:
        raise errors.NotClosed("empty curve")
    for j in range(len(curve)):
        out = curve.exit_side(j)
        mate = cx.side_partner.get(tuple(out))
        nxt = curve.entry_side((j + 1) % len(curve))
        if mate is None or cx.edge_of_side[mate] != cx.edge_of_side[nxt]:
            raise errors.NotClosed(
                f"steps {j} and {(j + 1) % len(curve)} do not share an edge")
    steps = list(zip(curve.corners, curve.deltas))
    k = steps.index(min(steps))
    steps = steps[k:] + steps[:k]
    return Equation(EquationKind.HOLONOMY,
                    tuple(c for c, _ in steps), tuple(d for _, d in steps))


def pin_equation(corner: Corner, value: float) -> Equation:
    return Equation(EquationKind.PIN, (tuple(corner),), (), (float(value),))


def boundary_ratio_equation(corner_v: Corner, corner_w: Corner,
                            c_v: float, c_w: float) -> Equation:
    return Equation(EquationKind.BOUNDARY_RATIO,
                    (tuple(corner_v), tuple(corner_w)), (),
                    (float(c_v), float(c_w)))


# -- assignments -------------------------------------------------------------


@dataclass
class Assignment:
    """Corner values; pinned corners may be omitted (constants are known)."""

    values: dict[Corner, float] = field(default_factory=dict)

    @staticmethod
    def constant(system: "EquationSystem", value: float) -> "Assignment":
        return Assignment({c: value for c in system.variables})

    @staticmethod
    def from_vector(system: "EquationSystem", x: Sequence[float]) -> "Assignment":
        if len(x) != len(system.variables):
            raise errors.MissingValue(
                f"expected {len(system.variables)} values, got {len(x)}")
        return Assignment(dict(zip(system.variables, map(float, x))))

    def vector(self, system: "EquationSystem") -> np.ndarray:
        missing = [c for c in system.variables if c not in self.values]
        if missing:
            raise errors.MissingValue(f"no value for corners {missing[:5]}")
        return np.array([self.values[c] for c in system.variables], float)

    def value(self, system: "EquationSystem", corner: Corner) -> float:
        corner = tuple(corner)
        if corner in system.pinned:
            return system.pinned[corner]
        try:
            return self.values[corner]
        except KeyError:
            raise errors.MissingValue(f"no value for corner {corner}")


# -- systems -----------------------------------------------------------------


@dataclass
class EquationSystem:
    complex: Complex
    mode: Mode
    flavor: Flavor
    variables: tuple[Corner, ...]
    pinned: dict[Corner, float]
    equations: tuple[Equation, ...]
    delta0: Optional[int] = None
    e0: Optional[int] = None
    v0: Optional[int] = None
    lambda_curve: Optional[NormalCurve] = None
    mu_curve: Optional[NormalCurve] = None
    domain: Optional[FundamentalDomain] = None

    def __post_init__(self):
        self._compiled = None

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_equations(self) -> int:
        return len(self.equations)

    def counts_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for eq in self.equations:
            out[eq.kind.value] = out.get(eq.kind.value, 0) + 1
        return out

    # -- compiled evaluation -------------------------------------------

    def _compile(self):
        if self._compiled is not None:
            return self._compiled
        ncr = 3 * self.complex.num_faces
        col = np.full(ncr, -1, np.int32)
        for j, c in enumerate(self.variables):
            col[3 * c[0] + c[1]] = j
        pin_flat = np.array([3 * c[0] + c[1] for c in self.pinned], np.int32)
        pin_val = np.array([self.pinned[c] for c in self.pinned], float)

        kinds = np.empty(len(self.equations), np.int8)
        off = np.zeros(len(self.equations) + 1, np.int32)
        cidx, deltas, rows, cols = [], [], [], []
        ca = np.zeros(len(self.equations))
        cb = np.zeros(len(self.equations))
        unbranched = self.mode is Mode.UNBRANCHED
        code = {
            EquationKind.TRIANGLE: K.TRIANGLE,
            EquationKind.EDGE: K.EDGE,
            EquationKind.VERTEX: K.VERTEX_ARG if unbranched else K.VERTEX,
            EquationKind.HOLONOMY: (K.HOLONOMY_ARG if unbranched
                                    else K.HOLONOMY),
            EquationKind.PIN: K.PIN,
            EquationKind.BOUNDARY_RATIO: K.RATIO,
        }
        for i, eq in enumerate(self.equations):
            kinds[i] = code[eq.kind]
            ds = eq.deltas or (1,) * len(eq.corners)
            for c, d in zip(eq.corners, ds):
                flat = 3 * c[0] + c[1]
                cidx.append(flat)
                deltas.append(d)
                if col[flat] >= 0:
                    rows.append(i)
                    cols.append(col[flat])
            off[i + 1] = len(cidx)
            if eq.kind is EquationKind.PIN:
                ca[i] = eq.constants[0]
            elif eq.kind is EquationKind.BOUNDARY_RATIO:
                ca[i], cb[i] = eq.constants

        cidx = np.array(cidx, np.int32)
        slot_var = col[cidx] >= 0
        self._compiled = dict(
            kinds=kinds, off=off, cidx=cidx,
            deltas=np.array(deltas, np.int8), ca=ca, cb=cb,
            pin_flat=pin_flat, pin_val=pin_val,
            var_flat=np.array([3 * c[0] + c[1] for c in self.variables],
                              np.int32),
            slot_var=slot_var,
            rows=np.array(rows, np.int32), cols=np.array(cols, np.int32),
            ncr=ncr)
        return self._compiled

    def corner_values(self, x: np.ndarray) -> np.ndarray:
        """Full per-corner value array (flat index 3*face + slot)."""
        cp = self._compile()
        values = np.zeros(cp["ncr"])
        if len(cp["pin_flat"]):
            values[cp["pin_flat"]] = cp["pin_val"]
        values[cp["var_flat"]] = x
        return values

    def residual_vector(self, x: np.ndarray) -> np.ndarray:
        cp = self._compile()
        values = self.corner_values(np.asarray(x, float))
        out = np.empty(len(self.equations))
        K.system_residuals(cp["kinds"], cp["off"], cp["cidx"], cp["deltas"],
                           cp["ca"], cp["cb"], values, out)
        return out

    def jacobian_matrix(self, x: np.ndarray) -> sp.csr_matrix:
        """d residual / d m over variable corners, as a sparse matrix."""
        cp = self._compile()
        values = self.corner_values(np.asarray(x, float))
        data = np.empty(len(cp["cidx"]))
        K.system_jacobian_data(cp["kinds"], cp["off"], cp["cidx"],
                               cp["deltas"], cp["ca"], cp["cb"], values, data)
        mat = sp.coo_matrix(
            (data[cp["slot_var"]], (cp["rows"], cp["cols"])),
            shape=(len(self.equations), len(self.variables)))
        return mat.tocsr()

    # -- serialization --------------------------------------------------

    def to_json_dict(self) -> dict:
        eqs = []
        for eq in self.equations:
            rec = {"kind": eq.kind.value,
                   "corners": [list(c) for c in eq.corners]}
            if eq.deltas:
                rec["deltas"] = list(eq.deltas)
            if eq.constants:
                rec["constants"] = list(eq.constants)
            eqs.append(rec)
        out = {
            "surface": self.complex.kind.value,
            "mode": self.mode.value,
            "flavor": self.flavor.value,
            "variables": [list(c) for c in self.variables],
            "pinned": [{"corner": list(c), "value": v}
                       for c, v in sorted(self.pinned.items())],
            "equations": eqs,
        }
        if self.delta0 is not None:
            out["delta0"] = self.delta0
        if self.e0 is not None:
            out["e0"] = list(self.complex.edge_key(self.e0))
        if self.v0 is not None:
            out["v0"] = self.v0
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


def residual(system: EquationSystem, assignment: Assignment) -> np.ndarray:
    """One residual per equation, in system order.  Deterministic."""
    return system.residual_vector(assignment.vector(system))


def jacobian(system: EquationSystem, assignment: Assignment) -> sp.csr_matrix:
    return system.jacobian_matrix(assignment.vector(system))


# -- assembly ----------------------------------------------------------------


def assemble_system(cx: Complex, *,
                    flavor: Flavor = Flavor.FULL,
                    mode: Mode = Mode.BRANCHED,
                    delta0: Optional[int] = None,
                    delta0_constants: Optional[Sequence[float]] = None,
                    e0: Optional[int] = None,
                    v0: Optional[int] = None,
                    lambda_curve: Optional[NormalCurve] = None,
                    mu_curve: Optional[NormalCurve] = None,
                    pins: Optional[Mapping[Corner, float]] = None,
                    boundary_ratios: Optional[Mapping[int, float]] = None,
                    ) -> EquationSystem:
    """Build the equation system matching the complex's surface kind.

    Disc systems may carry extra ``pins`` (corner -> value) or
    ``boundary_ratios`` (boundary vertex -> prescribed curvature weight)
    cutting down the (n-1)-dimensional solution family.  Sphere systems
    take a distinguished face ``delta0`` (smallest id by default) and, when
    reduced, one of its edges ``e0``.  Torus systems take homology-basis
    curves (fundamental-domain pushoffs by default) and, when reduced, a
    boundary edge ``e0`` of the fundamental domain and a vertex ``v0``.
    """
    if cx.kind is SurfaceKind.DISC:
        return _assemble_disc(cx, flavor, mode, delta0, pins, boundary_ratios)
    _reject_disc_options(pins, boundary_ratios)
    if cx.kind is SurfaceKind.SPHERE:
        if lambda_curve is not None or mu_curve is not None or v0 is not None:
            raise errors.OptionMismatch("curves and v0 are torus options")
        return _assemble_sphere(cx, flavor, mode, delta0, delta0_constants,
                                e0)
    if delta0 is not None or delta0_constants is not None:
        raise errors.OptionMismatch("delta0 is a sphere option")
    return _assemble_torus(cx, flavor, mode, e0, v0, lambda_curve, mu_curve)


def _reject_disc_options(pins, boundary_ratios):
    if pins or boundary_ratios:
        raise errors.OptionMismatch(
            "pins and boundary ratios apply to disc systems only")


def _sorted_system(equations: Iterable[Equation]) -> tuple[Equation, ...]:
    return tuple(sorted(equations, key=Equation.sort_key))


def _assemble_disc(cx, flavor, mode, delta0, pins, boundary_ratios):
    if flavor is not Flavor.FULL:
        raise errors.OptionMismatch("disc systems have no reduced flavor")
    if delta0 is not None:
        raise errors.OptionMismatch("delta0 is a sphere option")
    eqs = [triangle_equation(cx, cx.face_corners(f))
           for f in range(cx.num_faces)]
    eqs += [edge_equation(cx, e) for e in cx.interior_edges()]
    eqs += [vertex_equation(cx, v) for v in cx.interior_vertices()]
    variables = tuple(sorted(cx.corners))
    for corner, value in (pins or {}).items():
        corner = tuple(corner)
        if corner not in variables:
            raise errors.OptionMismatch(f"unknown corner {corner}")
        eqs.append(pin_equation(corner, value))
    if boundary_ratios:
        weights = {int(v): float(c) for v, c in boundary_ratios.items()}
        if set(weights) != set(cx.boundary_vertices):
            raise errors.OptionMismatch(
                "boundary ratios must cover exactly the boundary vertices")
        if any(w <= 0 for w in weights.values()):
            raise errors.OptionMismatch("ratio weights must be positive")
        for e in sorted(cx.boundary_edges):
            (f, s), = cx.edge_sides[e]
            cv, cw = (f, s), (f, (s + 1) % 3)
            v, w = cx.vertex_of_corner[cv], cx.vertex_of_corner[cw]
            eqs.append(boundary_ratio_equation(cv, cw, weights[v],
                                               weights[w]))
    return EquationSystem(cx, mode, flavor, variables, {},
                          _sorted_system(eqs))


def _assemble_sphere(cx, flavor, mode, delta0, delta0_constants, e0):
    delta0 = 0 if delta0 is None else int(delta0)
    if not 0 <= delta0 < cx.num_faces:
        raise errors.OptionMismatch(f"no face {delta0}")
    if delta0_constants is None:
        consts = (-SQRT3, -SQRT3, -SQRT3)
    else:
        consts = tuple(float(c) for c in delta0_constants)
        prod = consts[0] * consts[1] * consts[2]
        if len(consts) != 3 or any(c >= 0 for c in consts):
            raise errors.OptionMismatch(
                "delta0 constants must be three negative reals")
        if abs(prod - sum(consts)) > 1e-9 * max(1.0, abs(prod)):
            raise errors.OptionMismatch(
                "delta0 constants must satisfy the triangle equation")
    pinned = {c: consts[i] for i, c in enumerate(cx.face_corners(delta0))}
    variables = tuple(sorted(set(cx.corners) - set(pinned)))

    delta0_edges = sorted({cx.edge_of_side[(delta0, s)] for s in range(3)})
    delta0_vertices = {cx.vertex_of_corner[c]
                       for c in cx.face_corners(delta0)}
    if flavor is Flavor.REDUCED:
        e0 = delta0_edges[0] if e0 is None else int(e0)
        if e0 not in delta0_edges:
            raise errors.InvalidReductionChoice(
                f"e0 must be one of the edges {delta0_edges} of face "
                f"{delta0}")
    elif e0 is not None:
        raise errors.OptionMismatch("e0 applies to reduced systems")

    eqs = [triangle_equation(cx, cx.face_corners(f))
           for f in range(cx.num_faces) if f != delta0]
    skip_edge = {e0} if flavor is Flavor.REDUCED else set()
    eqs += [edge_equation(cx, e) for e in range(cx.num_edges)
            if e not in skip_edge]
    if flavor is Flavor.REDUCED:
        verts = [v for v in range(cx.num_vertices)
                 if v not in delta0_vertices]
    else:
        verts = list(range(cx.num_vertices))
    eqs += [vertex_equation(cx, v) for v in verts]
    return EquationSystem(cx, mode, flavor, variables, pinned,
                          _sorted_system(eqs), delta0=delta0, e0=e0)


def _assemble_torus(cx, flavor, mode, e0, v0, lambda_curve, mu_curve):
    domain = None
    if lambda_curve is None or mu_curve is None or flavor is Flavor.REDUCED:
        domain = cut_fundamental_domain(cx)
    if lambda_curve is None:
        lambda_curve = domain.lambda_curve
    if mu_curve is None:
        mu_curve = domain.mu_curve

    if flavor is Flavor.REDUCED:
        cut = sorted(domain.cut_edges)
        e0 = cut[0] if e0 is None else int(e0)
        if e0 not in cut:
            raise errors.InvalidReductionChoice(
                f"e0 must lie on the fundamental-domain boundary {cut}")
        v0 = 0 if v0 is None else int(v0)
        if not 0 <= v0 < cx.num_vertices:
            raise errors.InvalidReductionChoice(f"no vertex {v0}")
    elif e0 is not None or v0 is not None:
        raise errors.OptionMismatch("e0/v0 apply to reduced systems")

    eqs = [triangle_equation(cx, cx.face_corners(f))
           for f in range(cx.num_faces)]
    skip_edge = {e0} if flavor is Flavor.REDUCED else set()
    skip_vertex = {v0} if flavor is Flavor.REDUCED else set()
    eqs += [edge_equation(cx, e) for e in range(cx.num_edges)
            if e not in skip_edge]
    eqs += [vertex_equation(cx, v) for v in range(cx.num_vertices)
            if v not in skip_vertex]
    eqs.append(holonomy_equation(cx, lambda_curve))
    eqs.append(holonomy_equation(cx, mu_curve))
    variables = tuple(sorted(cx.corners))
    return EquationSystem(cx, mode, flavor, variables, {},
                          _sorted_system(eqs), e0=e0, v0=v0,
                          lambda_curve=lambda_curve, mu_curve=mu_curve,
                          domain=domain)
