"""Finite Δ-complexes triangulating oriented discs, spheres and tori.

A complex is described by oriented triangular faces and a list of side
gluings.  Face ``f`` has corners ``(f, 0), (f, 1), (f, 2)`` in anticlockwise
order and sides ``(f, s)`` running from corner ``s`` to corner ``(s+1) % 3``.
A gluing identifies two sides by the orientation-reversing map, i.e. the
start corner of one side is identified with the end corner of the other.
Vertices and edges are derived as equivalence classes of corners and sides.

Faces may have repeated vertices or edges; the three corners of a face are
always distinct.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from . import errors

Corner = tuple[int, int]   # (face, slot 0..2)
Side = tuple[int, int]     # (face, side 0..2); side s joins corners s, s+1


class SurfaceKind(Enum):
    DISC = "disc"
    SPHERE = "sphere"
    TORUS = "torus"


@dataclass(frozen=True)
class ComplexSpec:
    """Raw input: number of faces plus side gluings.

    ``curves`` optionally names crossing lists (sequences of edge keys, see
    :meth:`Complex.edge_index`) for later use as normal curves.
    """

    num_faces: int
    gluings: tuple[tuple[Side, Side], ...]
    curves: Mapping[str, object] = field(default_factory=dict)

    @staticmethod
    def from_gluings(num_faces: int,
                     gluings: Iterable[tuple[Side, Side]],
                     curves: Optional[Mapping[str, object]] = None
                     ) -> "ComplexSpec":
        normed = tuple((tuple(a), tuple(b)) for a, b in gluings)
        return ComplexSpec(num_faces, normed, dict(curves or {}))


def spec_from_face_vertices(faces: Sequence[Sequence[int]]) -> ComplexSpec:
    """Build a spec from per-face vertex triples (simplicial-style input).

    Each face lists its vertices in anticlockwise order.  Sides are glued
    when two faces carry the same unordered vertex pair; the two directed
    sides must run in opposite directions, otherwise the identifications
    are orientation-incompatible.
    """
    by_pair: dict[tuple[int, int], list[tuple[Side, tuple[int, int]]]] = {}
    for f, tri in enumerate(faces):
        if len(tri) != 3 or len(set(tri)) != 3:
            raise errors.NonSurface(
                f"face {f} must list three distinct vertices, got {tri!r}")
        for s in range(3):
            a, b = tri[s], tri[(s + 1) % 3]
            key = (min(a, b), max(a, b))
            by_pair.setdefault(key, []).append(((f, s), (a, b)))
    gluings = []
    for key, entries in by_pair.items():
        if len(entries) > 2:
            raise errors.NonSurface(
                f"vertex pair {key} appears on {len(entries)} sides")
        if len(entries) == 2:
            (side1, d1), (side2, d2) = entries
            if d1 == d2:
                raise errors.NonOrientable(
                    f"sides {side1} and {side2} traverse {key} in the same "
                    "direction")
            gluings.append((side1, side2))
    return ComplexSpec.from_gluings(len(faces), gluings)


@dataclass(frozen=True)
class NormalCurve:
    """Closed normal curve as a cyclic list of (face, cut corner slot, δ).

    δ is +1 when the arc proceeds anticlockwise around the corner it cuts
    off, -1 when clockwise.  The arc through ``(f, c, +1)`` enters face
    ``f`` through side ``c`` and exits through side ``(c+2) % 3``; for
    δ = -1 the sides are swapped.
    """

    steps: tuple[tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def corners(self) -> tuple[Corner, ...]:
        return tuple((f, c) for f, c, _ in self.steps)

    @property
    def deltas(self) -> tuple[int, ...]:
        return tuple(d for _, _, d in self.steps)

    def entry_side(self, j: int) -> Side:
        f, c, d = self.steps[j]
        return (f, c) if d == 1 else (f, (c + 2) % 3)

    def exit_side(self, j: int) -> Side:
        f, c, d = self.steps[j]
        return (f, (c + 2) % 3) if d == 1 else (f, c)

    def reversed(self) -> "NormalCurve":
        return NormalCurve(tuple((f, c, -d)
                                 for f, c, d in reversed(self.steps)))


class Complex:
    """Derived combinatorics of a Δ-complex; immutable after construction.

    Use :func:`build_complex` to construct.
    """

    def __init__(self, spec: ComplexSpec, classify: bool = True):
        self.spec = spec
        self.num_faces = spec.num_faces
        self._classify = classify
        self._derive()

    # -- construction --------------------------------------------------

    def _derive(self) -> None:
        F = self.num_faces
        if F <= 0:
            raise errors.NonSurface("complex needs at least one face")

        partner: dict[Side, Side] = {}
        for a, b in self.spec.gluings:
            for side in (a, b):
                f, s = side
                if not (0 <= f < F and 0 <= s < 3):
                    raise errors.NonSurface(f"side {side} out of range")
                if side in partner:
                    raise errors.NonSurface(
                        f"side {side} appears in more than one gluing")
            if a == b:
                raise errors.NonSurface(f"side {a} glued to itself")
            partner[a] = b
            partner[b] = a
        self.side_partner = partner

        # connectivity over faces through gluings
        seen = {0}
        stack = [0]
        adj: dict[int, list[int]] = {f: [] for f in range(F)}
        for a, b in self.spec.gluings:
            adj[a[0]].append(b[0])
            adj[b[0]].append(a[0])
        while stack:
            f = stack.pop()
            for g in adj[f]:
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
        if len(seen) != F:
            raise errors.Disconnected(
                f"only {len(seen)} of {F} faces are connected to face 0")

        # edges: classes of sides
        edge_sides: list[tuple[Side, ...]] = []
        eidx: dict[Side, int] = {}
        for f in range(F):
            for s in range(3):
                side = (f, s)
                if side in eidx:
                    continue
                mate = partner.get(side)
                reps = (side,) if mate is None else tuple(
                    sorted((side, mate)))
                k = len(edge_sides)
                edge_sides.append(reps)
                for r in reps:
                    eidx[r] = k
        order = sorted(range(len(edge_sides)), key=lambda k: edge_sides[k][0])
        self.edge_sides = tuple(edge_sides[k] for k in order)
        remap = {old: new for new, old in enumerate(order)}
        self.edge_of_side = {side: remap[k] for side, k in eidx.items()}
        self.num_edges = len(self.edge_sides)
        self.boundary_edges = frozenset(
            k for k, reps in enumerate(self.edge_sides) if len(reps) == 1)

        # vertices: walk corners anticlockwise; acw neighbour of (f, c) is
        # across side (f, (c+2) % 3), clockwise neighbour across side (f, c)
        def acw_next(corner: Corner) -> Optional[Corner]:
            f, c = corner
            mate = partner.get((f, (c + 2) % 3))
            return None if mate is None else (mate[0], mate[1])

        def cw_next(corner: Corner) -> Optional[Corner]:
            f, c = corner
            mate = partner.get((f, c))
            return None if mate is None else (mate[0], (mate[1] + 1) % 3)

        all_corners = [(f, c) for f in range(F) for c in range(3)]
        visited: set[Corner] = set()
        walks: list[tuple[list[Corner], bool]] = []  # (corners, is_boundary)
        for corner in all_corners:
            if corner in visited or cw_next(corner) is not None:
                continue
            # corner starts a boundary walk
            walk = [corner]
            visited.add(corner)
            nxt = acw_next(corner)
            while nxt is not None:
                if nxt in visited:
                    raise errors.NonSurface(
                        f"corner fan at {nxt} is not embedded")
                walk.append(nxt)
                visited.add(nxt)
                nxt = acw_next(nxt)
            walks.append((walk, True))
        for corner in all_corners:
            if corner in visited:
                continue
            walk = [corner]
            visited.add(corner)
            nxt = acw_next(corner)
            while nxt != corner:
                if nxt is None or nxt in visited:
                    raise errors.NonSurface(
                        f"corner fan at {corner} does not close up")
                walk.append(nxt)
                visited.add(nxt)
                nxt = acw_next(nxt)
            walks.append((walk, False))

        # pinched vertices: two walks whose corners are identified via
        # gluings would merge under corner identification; detect by
        # union-find over corners
        uf = {c: c for c in all_corners}

        def find(x: Corner) -> Corner:
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x

        def union(x: Corner, y: Corner) -> None:
            rx, ry = find(x), find(y)
            if rx != ry:
                uf[ry] = rx

        for a, b in self.spec.gluings:
            (f1, s1), (f2, s2) = a, b
            union((f1, s1), (f2, (s2 + 1) % 3))
            union((f1, (s1 + 1) % 3), (f2, s2))
        classes: dict[Corner, set[Corner]] = {}
        for c in all_corners:
            classes.setdefault(find(c), set()).add(c)
        walk_root = {}
        for wk, (walk, _) in enumerate(walks):
            for c in walk:
                walk_root[c] = wk
        for root, members in classes.items():
            if len({walk_root[c] for c in members}) != 1:
                raise errors.NonSurface(
                    f"vertex at corner {min(members)} is pinched")

        walks.sort(key=lambda w: min(w[0]))
        # rotate interior cycles so the smallest corner comes first
        normed_walks = []
        for walk, is_bnd in walks:
            if not is_bnd:
                k = walk.index(min(walk))
                walk = walk[k:] + walk[:k]
            normed_walks.append((walk, is_bnd))
        self.vertex_corners = tuple(tuple(w) for w, _ in normed_walks)
        self.vertex_boundary = tuple(b for _, b in normed_walks)
        self.num_vertices = len(normed_walks)
        self.vertex_of_corner = {}
        for v, (walk, _) in enumerate(normed_walks):
            for c in walk:
                self.vertex_of_corner[c] = v
        self.vertex_degree = tuple(len(w) for w in self.vertex_corners)

        self.boundary_vertices = frozenset(
            v for v in range(self.num_vertices) if self.vertex_boundary[v])

        chi = self.num_vertices - self.num_edges + F
        self.euler_characteristic = chi
        has_boundary = bool(self.boundary_edges)
        kind: Optional[SurfaceKind]
        if has_boundary:
            kind = SurfaceKind.DISC if chi == 1 else None
        elif chi == 2:
            kind = SurfaceKind.SPHERE
        elif chi == 0:
            kind = SurfaceKind.TORUS
        else:
            kind = None
        if kind is None and self._classify:
            raise errors.UnsupportedTopology(
                ("bounded" if has_boundary else "closed")
                + f" surface with Euler characteristic {chi}")
        self.kind = kind

        # per-vertex gate tables for normal-curve pushoffs (interior only).
        # Gate i of vertex v sits between corners W[i] and W[i+1] of the
        # anticlockwise walk W; it is crossed outward from W[i] via side
        # (face(W[i]), slot+2) and lands on W[i+1] = partner corner.
        self._gate_out: list[dict[Side, int]] = []
        self._gate_in: list[dict[Side, int]] = []
        for v in range(self.num_vertices):
            out: dict[Side, int] = {}
            into: dict[Side, int] = {}
            walk = self.vertex_corners[v]
            n = len(walk)
            gates = n if not self.vertex_boundary[v] else n - 1
            for i in range(gates):
                f, c = walk[i]
                f2, c2 = walk[(i + 1) % n]
                out[(f, (c + 2) % 3)] = i
                into[(f2, c2)] = i
            self._gate_out.append(out)
            self._gate_in.append(into)

    # -- basic queries --------------------------------------------------

    @property
    def corners(self) -> tuple[Corner, ...]:
        return tuple((f, c) for f in range(self.num_faces) for c in range(3))

    def face_corners(self, f: int) -> tuple[Corner, Corner, Corner]:
        return ((f, 0), (f, 1), (f, 2))

    def edge_index(self, side: Side) -> int:
        return self.edge_of_side[tuple(side)]

    def edge_key(self, e: int) -> Side:
        """Canonical (face, side) naming edge ``e`` in files."""
        return self.edge_sides[e][0]

    def is_boundary_edge(self, e: int) -> bool:
        return e in self.boundary_edges

    def edge_vertices(self, e: int) -> tuple[int, int]:
        f, s = self.edge_sides[e][0]
        return (self.vertex_of_corner[(f, s)],
                self.vertex_of_corner[(f, (s + 1) % 3)])

    def edge_corner_quad(self, e: int) -> tuple[Corner, Corner, Corner, Corner]:
        """Corners (Δ1,v1), (Δ2,v2), (Δ1,v2), (Δ2,v1) of an interior edge."""
        reps = self.edge_sides[e]
        if len(reps) != 2:
            raise errors.BoundaryEdge(f"edge {e} is a boundary edge")
        (f1, s1), (f2, s2) = reps
        return ((f1, s1), (f2, s2), (f1, (s1 + 1) % 3), (f2, (s2 + 1) % 3))

    def interior_edges(self) -> list[int]:
        return [e for e in range(self.num_edges)
                if e not in self.boundary_edges]

    def interior_vertices(self) -> list[int]:
        return [v for v in range(self.num_vertices)
                if not self.vertex_boundary[v]]

    def boundary_vertex_cycle(self) -> list[int]:
        """Boundary vertices of a disc in order around the boundary."""
        if self.kind is not SurfaceKind.DISC:
            raise errors.UnsupportedTopology("boundary cycle needs a disc")
        # each boundary vertex walk starts at a corner whose clockwise side
        # (f, c) is unglued: that side is the outgoing boundary side
        start = min(v for v in self.boundary_vertices)
        cycle = [start]
        v = start
        while True:
            f, c = self.vertex_corners[v][0]
            nxt = self.vertex_of_corner[(f, (c + 1) % 3)]
            if nxt == start:
                break
            cycle.append(nxt)
            v = nxt
            if len(cycle) > self.num_vertices:
                raise errors.NonSurface("boundary walk does not close")
        return cycle

    def boundary_side_of_vertex(self, v: int) -> Side:
        """Outgoing boundary side at a boundary vertex of a disc."""
        f, c = self.vertex_corners[v][0]
        return (f, c)

    # -- hypothesis checks ----------------------------------------------

    def check_hypotheses(self) -> "HypothesisReport":
        return check_hypotheses(self)

    # -- normal curves ----------------------------------------------------

    def normalize_curve(self, crossings: Sequence[int],
                        start_face: Optional[int] = None) -> NormalCurve:
        return normalize_curve(self, crossings, start_face=start_face)

    def sides_of_face_on_edge(self, f: int, e: int) -> list[int]:
        return [s for s in range(3) if self.edge_of_side[(f, s)] == e]

    # -- pushoffs ---------------------------------------------------------

    def pushoff(self, oriented_sides: Sequence[Side]) -> NormalCurve:
        """Normal curve running parallel to an edge loop, on its left.

        ``oriented_sides`` lists one side per loop edge, in traversal
        order, each chosen so its face lies on the left of the traversal
        (side (f, s) runs from corner s to corner s+1).
        """
        steps: list[tuple[int, int, int]] = []
        n = len(oriented_sides)
        for j, (f, s) in enumerate(oriented_sides):
            steps.append((f, (s + 2) % 3, 1))  # arc over the edge, apex cut
            fn, sn = oriented_sides[(j + 1) % n]
            v = self.vertex_of_corner[(f, (s + 1) % 3)]
            if self.vertex_of_corner[(fn, sn)] != v:
                raise errors.OpenCurve(
                    f"sides {(f, s)} and {(fn, sn)} are not consecutive")
            walk = self.vertex_corners[v]
            m = len(walk)
            exit_gate = self._gate_in[v][(f, (s + 1) % 3)]
            entry_gate = self._gate_out[v][(fn, (sn + 2) % 3)]
            i = exit_gate
            while i != entry_gate:
                fc, cc = walk[i]
                steps.append((fc, cc, -1))
                i = (i - 1) % m
        return NormalCurve(tuple(steps))

    def homology_class(self, curve: NormalCurve,
                       l_sides: Sequence[Side],
                       m_sides: Sequence[Side]) -> tuple[int, int]:
        """Signed crossing counts of a normal curve with edge loops l, m."""
        l_left = {tuple(s) for s in l_sides}
        l_edges = {self.edge_of_side[tuple(s)] for s in l_sides}
        m_left = {tuple(s) for s in m_sides}
        m_edges = {self.edge_of_side[tuple(s)] for s in m_sides}
        a = b = 0
        for j in range(len(curve)):
            out = curve.exit_side(j)
            e = self.edge_of_side[out]
            if e in l_edges:
                a += 1 if out in l_left else -1
            if e in m_edges:
                b += 1 if out in m_left else -1
        return a, b

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "faces": [{"id": f} for f in range(self.num_faces)],
            "gluings": [[list(a), list(b)] for a, b in self.spec.gluings],
            **({"curves": {name: _curve_json(val)
                           for name, val in self.spec.curves.items()}}
               if self.spec.curves else {}),
        }


def _curve_json(val):
    if isinstance(val, dict):
        return {"edges": [list(e) for e in val["edges"]],
                **({"start_face": val["start_face"]}
                   if "start_face" in val else {})}
    return [list(e) for e in val]


@dataclass(frozen=True)
class HypothesisReport:
    """Results of the necessary checks behind the main realization theorem.

    For discs and spheres, ``simplicial`` decides the hypothesis.  For
    tori only necessary local conditions are checked; full certification
    happens at layout time.
    """

    kind: SurfaceKind
    checks: tuple[tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def simplicial(self) -> Optional[bool]:
        vals = [ok for name, ok in self.checks if name.startswith("simplicial")]
        return all(vals) if vals else None


def check_hypotheses(cx: Complex) -> HypothesisReport:
    checks: list[tuple[str, bool]] = []
    if cx.kind in (SurfaceKind.DISC, SurfaceKind.SPHERE):
        distinct = all(
            len({cx.vertex_of_corner[c] for c in cx.face_corners(f)}) == 3
            for f in range(cx.num_faces))
        checks.append(("simplicial: faces have distinct vertices", distinct))
        vsets: dict[frozenset, int] = {}
        dup_face = False
        for f in range(cx.num_faces):
            key = frozenset(cx.vertex_of_corner[c]
                            for c in cx.face_corners(f))
            dup_face |= vsets.setdefault(key, f) != f
        checks.append(("simplicial: no two faces share a vertex set",
                       not dup_face))
        pair_seen: dict[tuple[int, int], int] = {}
        double = False
        for e in range(cx.num_edges):
            u, v = cx.edge_vertices(e)
            key = (min(u, v), max(u, v))
            double |= u == v or pair_seen.setdefault(key, e) != e
        checks.append(("simplicial: no loops or double edges", not double))
    else:
        # necessary local conditions for the universal cover to be a
        # simplicial triangulation of the plane; sufficiency is certified
        # later by layout-time tangency verification
        checks.append(("local: no side glued to a side of the same face",
                       all(a[0] != b[0] for a, b in cx.spec.gluings)))
        checks.append(("local: all vertex degrees >= 3",
                       all(d >= 3 for d in cx.vertex_degree)))
        checks.append(("local: corner fans close up",
                       all(not b for b in cx.vertex_boundary)))
    return HypothesisReport(cx.kind, tuple(checks))


def build_complex(spec: ComplexSpec) -> Complex:
    """Construct and classify a complex; see :class:`Complex`."""
    return Complex(spec)


def normalize_curve(cx: Complex, crossings: Sequence[int],
                    start_face: Optional[int] = None) -> NormalCurve:
    """Turn a cyclic list of crossed edge indices into a normal curve.

    Consecutive crossed edges must bound a common face; the arc between
    them cuts off the shared corner of the entry and exit sides.  When two
    faces share both edges the choice of ``start_face`` (face of the first
    arc) disambiguates; by default candidate start faces are tried in
    increasing order and the first that closes the curve wins.
    """
    if cx.kind is not SurfaceKind.TORUS:
        raise errors.UnsupportedTopology("normal curves require a torus")
    if not crossings:
        raise errors.OpenCurve("empty crossing list")
    for e in crossings:
        if not 0 <= e < cx.num_edges:
            raise errors.NoSharedFace(f"edge index {e} out of range")
        if cx.is_boundary_edge(e):
            raise errors.NoSharedFace(f"edge {e} is a boundary edge")

    first = crossings[0]
    entries = [s for s in cx.edge_sides[first]]
    if start_face is not None:
        entries = [s for s in entries if s[0] == start_face]
        if not entries:
            raise errors.NoSharedFace(
                f"edge {first} has no side on face {start_face}")
    entries.sort()

    last_err: Optional[Exception] = None
    for h0 in entries:
        steps: list[tuple[int, int, int]] = []
        h = h0
        ok = True
        for j in range(len(crossings)):
            nxt_edge = crossings[(j + 1) % len(crossings)]
            f, s_in = h
            outs = [s for s in cx.sides_of_face_on_edge(f, nxt_edge)
                    if s != s_in]
            if not outs:
                if cx.edge_of_side[h] == nxt_edge:
                    last_err = errors.NotNormal(
                        f"crossing {j}: backtracks through edge "
                        f"{cx.edge_of_side[h]}")
                else:
                    last_err = errors.NoSharedFace(
                        f"crossings {j} and {j+1} share no face")
                ok = False
                break
            s_out = min(outs)
            shared = ({s_in, (s_in + 1) % 3} & {s_out, (s_out + 1) % 3})
            cut = shared.pop()
            delta = 1 if s_in == cut else -1
            steps.append((f, cut, delta))
            mate = cx.side_partner.get((f, s_out))
            if mate is None:
                last_err = errors.NoSharedFace(
                    f"cannot cross boundary side {(f, s_out)}")
                ok = False
                break
            h = mate
        if ok and h == h0:
            return NormalCurve(tuple(steps))
        if ok:
            last_err = errors.OpenCurve(
                "crossing sequence does not close up")
    if last_err is None:
        last_err = errors.OpenCurve("no valid start face")
    raise last_err


# -- fundamental domains ------------------------------------------------


@dataclass(frozen=True)
class FundamentalDomain:
    """A torus cut along edge loops l and m into a disc.

    Corners of the disc are the corners of the torus (the cut only removes
    gluings), so the corner bijection is the identity on (face, slot).

    The boundary decomposes into two copies of each loop: ``l_bottom`` /
    ``l_top`` and ``m_left`` / ``m_right`` are the matched side lists, and
    the ``p_*`` tuples list the disc vertices along each copy so that
    ``p_bottom[j]`` is identified with ``p_top[j]`` in the torus (and
    ``p_left[j]`` with ``p_right[j]``).
    """

    torus: Complex
    disc: Complex
    l_sides: tuple[Side, ...]       # left-face reps along l, traversal order
    m_sides: tuple[Side, ...]       # left-face reps along m, traversal order
    l_bottom: tuple[Side, ...]
    l_top: tuple[Side, ...]
    m_right: tuple[Side, ...]
    m_left: tuple[Side, ...]
    p_bottom: tuple[int, ...]
    p_top: tuple[int, ...]
    p_right: tuple[int, ...]
    p_left: tuple[int, ...]
    lambda_curve: NormalCurve
    mu_curve: NormalCurve

    @property
    def l_edges(self) -> tuple[int, ...]:
        return tuple(self.torus.edge_of_side[s] for s in self.l_sides)

    @property
    def m_edges(self) -> tuple[int, ...]:
        return tuple(self.torus.edge_of_side[s] for s in self.m_sides)

    @property
    def cut_edges(self) -> frozenset[int]:
        return frozenset(self.l_edges) | frozenset(self.m_edges)


def _cut_spec(cx: Complex, cut_edges: Iterable[int]) -> ComplexSpec:
    cut = set(cut_edges)
    gluings = tuple(
        (a, b) for a, b in cx.spec.gluings
        if cx.edge_of_side[a] not in cut)
    return ComplexSpec(cx.num_faces, gluings)


def _simple_cycles(cx: Complex) -> list[list[Side]]:
    """Candidate simple closed edge cycles, shortest first.

    Cycles are returned as oriented side lists (face on the left).  BFS
    trees from every base vertex are combined with each non-tree edge;
    only vertex-simple cycles are kept.  Deterministic: ties broken by
    edge indices.
    """
    # oriented side for traversing edge e from vertex u: a side rep whose
    # start corner lies at u
    def oriented(e: int, u: int) -> Side:
        for f, s in sorted(cx.edge_sides[e]):
            if cx.vertex_of_corner[(f, s)] == u:
                return (f, s)
        raise AssertionError("edge not incident to vertex")

    incident: dict[int, list[int]] = {v: [] for v in range(cx.num_vertices)}
    for e in range(cx.num_edges):
        u, v = cx.edge_vertices(e)
        incident[u].append(e)
        if v != u:
            incident[v].append(e)

    seen_keys = set()
    out: list[tuple[int, tuple[int, ...], list[Side]]] = []

    for e in range(cx.num_edges):  # length-1 candidates: self loops
        u, v = cx.edge_vertices(e)
        if u == v:
            key = (e,)
            if key not in seen_keys:
                seen_keys.add(key)
                f, s = sorted(cx.edge_sides[e])[0]
                out.append((1, key, [(f, s)]))

    for r in range(cx.num_vertices):
        parent: dict[int, tuple[int, int]] = {}  # vertex -> (prev vertex, edge)
        level = {r: 0}
        frontier = [r]
        while frontier:
            nxt = []
            for u in frontier:
                for e in sorted(incident[u]):
                    a, b = cx.edge_vertices(e)
                    w = b if a == u else a
                    if w == u or w in level:
                        continue
                    level[w] = level[u] + 1
                    parent[w] = (u, e)
                    nxt.append(w)
            frontier = nxt

        def path(v: int) -> list[tuple[int, int]]:
            # list of (vertex, edge-to-parent) back to root
            seq = []
            while v != r:
                u, e = parent[v]
                seq.append((v, e))
                v = u
            return seq

        for e in range(cx.num_edges):
            a, b = cx.edge_vertices(e)
            if a == b or a not in level or b not in level:
                continue
            pe_a = parent.get(a, (None, None))[1]
            pe_b = parent.get(b, (None, None))[1]
            if e in (pe_a, pe_b):
                continue
            pa, pb = path(a), path(b)
            va = [v for v, _ in pa]
            vb = [v for v, _ in pb]
            if set(va) & set(vb):
                continue  # not simple through r
            # cycle r -> a (tree), a -> b (e), b -> r (tree)
            verts = [r] + list(reversed(va))
            edges = [pe for _, pe in reversed(pa)] + [e] + [pe for _, pe in pb]
            verts += vb
            key = tuple(sorted(edges))
            if len(set(edges)) != len(edges) or key in seen_keys:
                continue
            seen_keys.add(key)
            sides = []
            u = r
            for e2 in edges:
                side = oriented(e2, u)
                f, s = side
                u = cx.vertex_of_corner[(f, (s + 1) % 3)]
                sides.append(side)
            out.append((len(edges), key, sides))

    out.sort(key=lambda t: (t[0], t[1]))
    return [sides for _, _, sides in out]


def cut_fundamental_domain(cx: Complex) -> FundamentalDomain:
    """Cut a torus along edge loops l, m into a fundamental-domain disc."""
    if cx.kind is not SurfaceKind.TORUS:
        raise errors.UnsupportedTopology("fundamental domains need a torus")

    last_reason = "no non-contractible simple edge cycle found"
    for l_sides in _simple_cycles(cx):
        l_edges = [cx.edge_of_side[s] for s in l_sides]
        try:
            annulus = Complex(_cut_spec(cx, l_edges), classify=False)
        except errors.ComplexError:
            continue
        if annulus.euler_characteristic != 0 or not annulus.boundary_edges:
            continue  # cycle was separating or degenerate

        m_sides = _find_m_arc(cx, annulus, l_sides)
        if m_sides is None:
            last_reason = "no properly embedded arc m for this l"
            continue
        m_edges = [cx.edge_of_side[s] for s in m_sides]
        disc = Complex(_cut_spec(cx, l_edges + m_edges))
        if disc.kind is not SurfaceKind.DISC:
            last_reason = "cut did not produce a disc"
            continue
        return _assemble_domain(cx, disc, l_sides, m_sides)
    raise errors.CutFailed(last_reason)


def _find_m_arc(cx: Complex, annulus: Complex,
                l_sides: Sequence[Side]) -> Optional[list[Side]]:
    """Shortest properly embedded edge arc between the two boundary circles
    of the annulus, from the circle carrying the left-face copies of l (the
    bottom) to the copy of the same torus vertex on the other circle, so
    that the arc closes up to a loop in the torus."""
    bottom_sides = {tuple(s) for s in l_sides}
    comp_b: set[int] = set()
    comp_t: set[int] = set()
    for e in annulus.boundary_edges:
        (f, s), = annulus.edge_sides[e]
        vs = {annulus.vertex_of_corner[(f, s)],
              annulus.vertex_of_corner[(f, (s + 1) % 3)]}
        (comp_b if (f, s) in bottom_sides else comp_t).update(vs)
    if comp_b & comp_t:
        return None
    boundary_vs = comp_b | comp_t

    def torus_vertex(av: int) -> int:
        return cx.vertex_of_corner[annulus.vertex_corners[av][0]]

    target_of = {}  # bottom annulus vertex -> its top copy
    top_by_tv = {torus_vertex(av): av for av in comp_t}
    for av in comp_b:
        mate = top_by_tv.get(torus_vertex(av))
        if mate is not None:
            target_of[av] = mate

    incident: dict[int, list[int]] = {v: [] for v in range(annulus.num_vertices)}
    for e in annulus.interior_edges():
        u, v = annulus.edge_vertices(e)
        incident[u].append(e)
        if v != u:
            incident[v].append(e)

    best: Optional[tuple[int, int, list[int], list[int]]] = None
    for src in sorted(target_of):
        dst = target_of[src]
        parent: dict[int, tuple[int, int]] = {}
        level = {src: 0}
        frontier = [src]
        found = False
        while frontier and not found:
            nxt = []
            for u in frontier:
                for e in sorted(incident[u]):
                    a, b = annulus.edge_vertices(e)
                    w = b if a == u else a
                    if w == u or w in level:
                        continue
                    if w == dst:
                        parent[w] = (u, e)
                        found = True
                        break
                    if w in boundary_vs:
                        continue  # interior of the arc avoids the boundary
                    level[w] = level[u] + 1
                    parent[w] = (u, e)
                    nxt.append(w)
                if found:
                    break
            frontier = nxt
        if not found:
            continue
        verts = [dst]
        edges = []
        v = dst
        while v != src:
            u, e = parent[v]
            edges.append(e)
            verts.append(u)
            v = u
        verts.reverse()
        edges.reverse()
        if best is None or len(edges) < best[1]:
            best = (src, len(edges), verts, edges)
    if best is None:
        return None

    _, _, verts, edges = best
    sides = []
    for u, e in zip(verts, edges):
        for f, s in sorted(annulus.edge_sides[e]):
            if annulus.vertex_of_corner[(f, s)] == u:
                sides.append((f, s))
                break
        else:
            return None
    return sides


def _assemble_domain(cx: Complex, disc: Complex, l_sides: Sequence[Side],
                     m_sides: Sequence[Side]) -> FundamentalDomain:
    def mate(side: Side) -> Side:
        return cx.side_partner[tuple(side)]

    l_bottom = tuple(tuple(s) for s in l_sides)
    l_top = tuple(mate(s) for s in l_sides)
    m_right = tuple(tuple(s) for s in m_sides)
    m_left = tuple(mate(s) for s in m_sides)

    def verts_along(sides: Sequence[Side], forward: bool) -> tuple[int, ...]:
        # forward: side (f, s) runs p[j-1] -> p[j]; else reversed
        pts = []
        for j, (f, s) in enumerate(sides):
            if j == 0:
                first = (f, s) if forward else (f, (s + 1) % 3)
                pts.append(disc.vertex_of_corner[first])
            nxt = (f, (s + 1) % 3) if forward else (f, s)
            pts.append(disc.vertex_of_corner[nxt])
        return tuple(pts)

    lam = cx.pushoff(l_bottom)
    mu = cx.pushoff(m_right)
    det = _basis_det(cx, lam, mu, l_bottom, m_right)
    if det != 1:
        raise errors.CutFailed(
            f"pushoff basis has intersection determinant {det}")

    return FundamentalDomain(
        torus=cx, disc=disc,
        l_sides=l_bottom, m_sides=m_right,
        l_bottom=l_bottom, l_top=l_top,
        m_right=m_right, m_left=m_left,
        p_bottom=verts_along(l_bottom, True),
        p_top=verts_along(l_top, False),
        p_right=verts_along(m_right, True),
        p_left=verts_along(m_left, False),
        lambda_curve=lam, mu_curve=mu,
    )


def _basis_det(cx: Complex, lam: NormalCurve, mu: NormalCurve,
               l_sides: Sequence[Side], m_sides: Sequence[Side]) -> int:
    a = cx.homology_class(lam, l_sides, m_sides)
    b = cx.homology_class(mu, l_sides, m_sides)
    return a[0] * b[1] - a[1] * b[0]


# -- JSON ---------------------------------------------------------------


def spec_to_json(spec: ComplexSpec) -> str:
    cx_dict = {
        "faces": [{"id": f} for f in range(spec.num_faces)],
        "gluings": [[list(a), list(b)] for a, b in spec.gluings],
    }
    if spec.curves:
        cx_dict["curves"] = {k: _curve_json(v) for k, v in spec.curves.items()}
    return json.dumps(cx_dict, indent=2, sort_keys=True) + "\n"


def spec_from_json(text: str) -> ComplexSpec:
    data = json.loads(text)
    faces = data.get("faces", [])
    ids = sorted(face["id"] for face in faces)
    if ids != list(range(len(ids))):
        raise errors.NonSurface("face ids must be 0..F-1")
    gluings = [
        (tuple(a), tuple(b)) for a, b in data.get("gluings", [])
    ]
    curves = {}
    for name, val in data.get("curves", {}).items():
        if isinstance(val, dict):
            curves[name] = {"edges": [tuple(e) for e in val["edges"]],
                            **({"start_face": val["start_face"]}
                               if "start_face" in val else {})}
        else:
            curves[name] = [tuple(e) for e in val]
    return ComplexSpec.from_gluings(len(ids), gluings, curves)


def curve_from_spec_entry(cx: Complex, entry) -> NormalCurve:
    """Resolve a named curve entry (edge-key list) into a normal curve."""
    if isinstance(entry, dict):
        keys = entry["edges"]
        start = entry.get("start_face")
    else:
        keys, start = entry, None
    crossings = [cx.edge_index(tuple(k)) for k in keys]
    return normalize_curve(cx, crossings, start_face=start)
