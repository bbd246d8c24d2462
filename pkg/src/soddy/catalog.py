"""Ready-made complexes: flowers, platonic spheres, bipyramids, grid tori."""

from __future__ import annotations

from .complexes import (Complex, ComplexSpec, build_complex,
                        spec_from_face_vertices)


def single_triangle_complex() -> Complex:
    return build_complex(ComplexSpec.from_gluings(1, []))


def flower_spec(n: int) -> ComplexSpec:
    """n triangles sharing a centre vertex; face j has corners
    (centre, petal j, petal j+1)."""
    if n < 2:
        raise ValueError("flower needs at least 2 faces")
    gluings = [((j, 2), ((j + 1) % n, 0)) for j in range(n)]
    return ComplexSpec.from_gluings(n, gluings)


def flower_complex(n: int) -> Complex:
    return build_complex(flower_spec(n))


def tetrahedron_complex() -> Complex:
    """A 3-flower capped by a fourth face; face 3 is the natural Δ0."""
    gluings = [((0, 2), (1, 0)), ((1, 2), (2, 0)), ((2, 2), (0, 0)),
               ((3, 0), (2, 1)), ((3, 1), (1, 1)), ((3, 2), (0, 1))]
    return build_complex(ComplexSpec.from_gluings(4, gluings))


def octahedron_complex() -> Complex:
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
             (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4)]
    return build_complex(spec_from_face_vertices(faces))


def icosahedron_complex() -> Complex:
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
             (1, 6, 2), (2, 6, 7), (2, 7, 3), (3, 7, 8), (3, 8, 4),
             (4, 8, 9), (4, 9, 5), (5, 9, 10), (5, 10, 1), (1, 10, 6),
             (11, 7, 6), (11, 8, 7), (11, 9, 8), (11, 10, 9), (11, 6, 10)]
    return build_complex(spec_from_face_vertices(faces))


def bipyramid_complex(n: int) -> Complex:
    """Double pyramid over an n-gon: 2n faces triangulating a sphere."""
    if n < 3:
        raise ValueError("bipyramid needs n >= 3")
    north, south = 0, n + 1
    ring = [1 + j for j in range(n)]
    faces = [(north, ring[j], ring[(j + 1) % n]) for j in range(n)]
    faces += [(south, ring[(j + 1) % n], ring[j]) for j in range(n)]
    return build_complex(spec_from_face_vertices(faces))


def torus_grid_spec(p: int, q: int,
                    flipped: frozenset | set | tuple = ()) -> ComplexSpec:
    """p x q grid of unit cells with wraparound; each cell split by a
    diagonal into two faces.  Cells in ``flipped`` use the other diagonal.

    ``torus_grid_spec(1, 1)`` is the standard one-vertex torus.
    """
    if p < 1 or q < 1:
        raise ValueError("grid dimensions must be positive")
    flipped = {tuple(c) for c in flipped}

    def cell(i: int, j: int) -> int:
        return (i % p) * q + (j % q)

    bottom, top, left, right, internal = {}, {}, {}, {}, []
    for i in range(p):
        for j in range(q):
            f1 = 2 * cell(i, j)
            f2 = f1 + 1
            if (i, j) in flipped:
                # f1 = ((i,j),(i+1,j),(i,j+1)), f2 = ((i+1,j),(i+1,j+1),(i,j+1))
                internal.append(((f1, 1), (f2, 2)))
                bottom[(i, j)] = (f1, 0)
                top[(i, j)] = (f2, 1)
                left[(i, j)] = (f1, 2)
                right[(i, j)] = (f2, 0)
            else:
                # f1 = ((i,j),(i+1,j),(i+1,j+1)), f2 = ((i,j),(i+1,j+1),(i,j+1))
                internal.append(((f1, 2), (f2, 0)))
                bottom[(i, j)] = (f1, 0)
                top[(i, j)] = (f2, 1)
                left[(i, j)] = (f2, 2)
                right[(i, j)] = (f1, 1)
    gluings = list(internal)
    for i in range(p):
        for j in range(q):
            gluings.append((bottom[(i, j)], top[(i, (j - 1) % q)]))
            gluings.append((right[(i, j)], left[((i + 1) % p, j)]))
    return ComplexSpec.from_gluings(2 * p * q, gluings)


def torus_grid_complex(p: int, q: int,
                       flipped: frozenset | set | tuple = ()) -> Complex:
    return build_complex(torus_grid_spec(p, q, flipped))


def standard_torus_complex() -> Complex:
    """The two-face one-vertex torus, with the usual homology basis named.

    Curve "lambda" runs horizontally (cutting corners d then c of the
    worked example), "mu" vertically (cutting a then e).
    """
    spec = torus_grid_spec(1, 1)
    curves = {
        "lambda": {"edges": [(0, 1), (0, 2)], "start_face": 1},
        "mu": {"edges": [(0, 0), (0, 2)], "start_face": 0},
    }
    return build_complex(ComplexSpec(spec.num_faces, spec.gluings, curves))
