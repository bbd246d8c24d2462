"""Equation construction, residual contracts, Jacobians, and exports."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from soddy import catalog, errors
from soddy.complexes import curve_from_spec_entry
from soddy.equations import (Assignment, EquationKind, Flavor, Mode,
                             assemble_system, edge_equation,
                             holonomy_equation, jacobian, residual,
                             triangle_equation, vertex_equation)

from helpers import brute_force_product_im, fd_jacobian

SQRT3 = math.sqrt(3.0)


def eval_one(cx, eq, values, mode=Mode.BRANCHED):
    """Evaluate a single equation through a one-equation system."""
    from soddy.equations import EquationSystem
    variables = tuple(sorted(set(eq.corners)))
    system = EquationSystem(cx, mode, Flavor.FULL, variables, {}, (eq,))
    x = np.array([values[c] for c in variables])
    return float(system.residual_vector(x)[0])


# -- triangle ------------------------------------------------------------


def test_triangle_equation_examples(flower3):
    eq = triangle_equation(flower3, flower3.face_corners(0))
    cs = flower3.face_corners(0)
    assert eval_one(flower3, eq, dict(zip(cs, (SQRT3,) * 3))) \
        == pytest.approx(0.0, abs=1e-12)
    assert eval_one(flower3, eq, dict(zip(cs, (-SQRT3,) * 3))) \
        == pytest.approx(0.0, abs=1e-12)
    # angles of the (1, 2, 3) triple sum to pi, so the residual vanishes
    assert eval_one(flower3, eq, dict(zip(cs, (1.0, 2.0, 3.0)))) \
        == pytest.approx(0.0, abs=1e-12)
    assert 2 * sum(math.atan2(1, m) for m in (1, 2, 3)) \
        == pytest.approx(math.pi)


def test_triangle_equation_rejects_mixed_faces(flower3):
    with pytest.raises(errors.WrongFace):
        triangle_equation(flower3, ((0, 0), (0, 1), (1, 0)))


# -- edge ------------------------------------------------------------------


def test_edge_equation_flower_labels(flower3):
    # edge between the centre and petal 2 carries corners a, e, c, d
    e = flower3.edge_index((0, 2))
    eq = edge_equation(flower3, e)
    assert eq.corners == ((0, 2), (1, 0), (0, 0), (1, 1))
    vals = {(0, 0): 2.0, (0, 2): 3.0, (1, 0): 5.0, (1, 1): 7.5}
    # residual = m(D1,v1) m(D2,v2) - m(D1,v2) m(D2,v1) = 3*5 - 2*7.5
    assert eval_one(flower3, eq, vals) == pytest.approx(0.0, abs=1e-12)
    vals[(1, 1)] = 1.0
    assert eval_one(flower3, eq, vals) == pytest.approx(13.0)


def test_edge_equation_proportional_pairs(flower3):
    e = flower3.edge_index((0, 2))
    eq = edge_equation(flower3, e)
    c1, c2, c3, c4 = eq.corners
    assert eval_one(flower3, eq, {c1: 2.0, c2: 3.0, c3: 1.0, c4: 6.0}) \
        == pytest.approx(0.0)
    assert eval_one(flower3, eq, {c1: 4.0, c2: 4.0, c3: 4.0, c4: 4.0}) \
        == pytest.approx(0.0)


def test_edge_equation_boundary_rejected(flower3):
    boundary = sorted(flower3.boundary_edges)[0]
    with pytest.raises(errors.BoundaryEdge):
        edge_equation(flower3, boundary)


# -- vertex ------------------------------------------------------------------


def test_vertex_equation_degree3(flower3):
    [v] = flower3.interior_vertices()
    eq = vertex_equation(flower3, v)
    a, b, c = 0.3, 1.7, 2.9
    got = eval_one(flower3, eq, dict(zip(eq.corners, (a, b, c))))
    assert got == pytest.approx(a * b + b * c + c * a - 1.0, rel=1e-12)


def test_vertex_equation_degree4():
    cx = catalog.flower_complex(4)
    [v] = cx.interior_vertices()
    eq = vertex_equation(cx, v)
    a, b, c, d = 0.7, 1.3, 2.1, 0.4
    want = (a * b * c + b * c * d + c * d * a + d * a * b
            - a - b - c - d)
    got = eval_one(cx, eq, dict(zip(eq.corners, (a, b, c, d))))
    assert got == pytest.approx(want, rel=1e-12)


def test_vertex_equation_degree6_hexagonal(standard_torus):
    eq = vertex_equation(standard_torus, 0)
    vals = {c: SQRT3 for c in eq.corners}
    assert eval_one(standard_torus, eq, vals) == pytest.approx(0.0, abs=1e-12)


def test_vertex_equation_boundary_rejected(flower3):
    v = sorted(flower3.boundary_vertices)[0]
    with pytest.raises(errors.BoundaryVertex):
        vertex_equation(flower3, v)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.data())
def test_vertex_residual_matches_expansion(d, data):
    cx = catalog.flower_complex(d)
    # build a torus-free check directly through the kernel contract
    [v] = cx.interior_vertices()
    eq = vertex_equation(cx, v)
    ms = data.draw(st.lists(
        st.floats(0.05, 20.0, allow_nan=False), min_size=d, max_size=d))
    got = eval_one(cx, eq, dict(zip(eq.corners, ms)))
    want = brute_force_product_im(ms)
    scale = math.prod(math.hypot(m, 1.0) for m in ms)
    assert abs(got - want) <= 1e-12 * scale


# -- holonomy ------------------------------------------------------------------


def test_holonomy_standard_torus(standard_torus):
    cx = standard_torus
    lam = curve_from_spec_entry(cx, cx.spec.curves["lambda"])
    mu = curve_from_spec_entry(cx, cx.spec.curves["mu"])
    eq_l = holonomy_equation(cx, lam)
    eq_m = holonomy_equation(cx, mu)
    # lambda: (d, -1), (c, +1) -> residual vanishes iff c = d
    vals = {(0, 0): 1.0, (0, 1): 1.0, (0, 2): 5.0,
            (1, 0): 5.0, (1, 1): 1.0, (1, 2): 1.0}
    assert eval_one(cx, eq_l, vals) == pytest.approx(0.0, abs=1e-12)
    vals2 = dict(vals)
    vals2[(1, 0)] = 2.0   # d
    assert abs(eval_one(cx, eq_l, vals2)) == pytest.approx(3.0)  # |c - d|
    # mu: (a, +1), (e, -1) -> vanishes iff a = e
    vals3 = {(0, 0): 4.0, (1, 1): 4.0, (0, 1): 9.0, (0, 2): 1.0,
             (1, 0): 1.0, (1, 2): 1.0}
    assert eval_one(cx, eq_m, vals3) == pytest.approx(0.0, abs=1e-12)
    vals3[(1, 1)] = 1.0
    assert abs(eval_one(cx, eq_m, vals3)) == pytest.approx(3.0)


def test_holonomy_all_plus_is_vertex_case():
    # six +1 steps with all values sqrt(3): same as the degree-6 vertex
    from soddy import _kernels as K
    m = np.full(6, SQRT3)
    d = np.ones(6, np.int8)
    assert K.product_im(m, d) == pytest.approx(0.0, abs=1e-12)


def test_holonomy_rejects_open_curve(fig3_torus):
    from soddy.complexes import NormalCurve
    with pytest.raises(errors.NotClosed):
        holonomy_equation(fig3_torus, NormalCurve(((0, 2, 1), (2, 0, -1))))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.data())
def test_holonomy_matches_expansion(n, data):
    from soddy import _kernels as K
    ms = data.draw(st.lists(
        st.floats(0.05, 20.0, allow_nan=False), min_size=n, max_size=n))
    ds = data.draw(st.lists(st.sampled_from([1, -1]),
                            min_size=n, max_size=n))
    got = K.product_im(np.array(ms), np.array(ds, np.int8))
    want = brute_force_product_im(ms, ds)
    scale = math.prod(math.hypot(m, 1.0) for m in ms)
    assert abs(got - want) <= 1e-12 * scale


# -- assembly ------------------------------------------------------------------


def test_flower_full_inventory(flower3):
    system = assemble_system(flower3)
    assert system.num_variables == 9 and system.num_equations == 7
    assert system.counts_by_kind() == {"triangle": 3, "edge": 3, "vertex": 1}


def test_torus_full_inventory(standard_torus):
    system = assemble_system(standard_torus)
    assert system.num_variables == 6 and system.num_equations == 8
    assert system.counts_by_kind() == {"triangle": 2, "edge": 3,
                                       "vertex": 1, "holonomy": 2}


def test_tetra_reduced_adds_pinned_edge_equations(tetrahedron):
    e0 = tetrahedron.edge_index((1, 1))
    system = assemble_system(tetrahedron, flavor=Flavor.REDUCED, delta0=3,
                             e0=e0)
    assert system.num_variables == 9 and system.num_equations == 9
    assert len(system.pinned) == 3
    assert all(v == -SQRT3 for v in system.pinned.values())
    # the two edge equations along the pinned face force b = c and h = j
    asg = Assignment({c: 1.0 for c in system.variables})
    asg.values[(0, 1)] = 2.0   # b
    r = residual(system, asg)
    pinned_rows = [i for i, eq in enumerate(system.equations)
                   if eq.kind is EquationKind.EDGE
                   and any(c in system.pinned for c in eq.corners)]
    assert len(pinned_rows) == 2
    assert any(abs(r[i]) == pytest.approx(SQRT3) for i in pinned_rows)


def test_sphere_full_skips_delta0_triangle(tetrahedron):
    system = assemble_system(tetrahedron, delta0=3)
    kinds = system.counts_by_kind()
    assert kinds == {"triangle": 3, "edge": 6, "vertex": 4}
    assert system.num_variables == 9 and system.num_equations == 13


def test_sphere_alternative_constants(tetrahedron):
    # any three negative constants satisfying the triangle equation work;
    # (-2)(-3)(-1) = -6 = (-2) + (-3) + (-1)
    system = assemble_system(tetrahedron, delta0=3,
                             delta0_constants=(-2.0, -3.0, -1.0))
    assert sorted(system.pinned.values()) == [-3.0, -2.0, -1.0]
    with pytest.raises(errors.OptionMismatch):
        assemble_system(tetrahedron, delta0=3,
                        delta0_constants=(-2.0, -3.0, -0.5))


def test_option_mismatches(flower3, tetrahedron, standard_torus):
    with pytest.raises(errors.OptionMismatch):
        assemble_system(flower3, flavor=Flavor.REDUCED)
    with pytest.raises(errors.OptionMismatch):
        assemble_system(tetrahedron, pins={(0, 0): 1.0})
    with pytest.raises(errors.OptionMismatch):
        assemble_system(standard_torus, delta0=0)
    with pytest.raises(errors.InvalidReductionChoice):
        assemble_system(tetrahedron, flavor=Flavor.REDUCED, delta0=3,
                        e0=tetrahedron.edge_index((0, 0)))
    with pytest.raises(errors.OptionMismatch):
        assemble_system(flower3, boundary_ratios={1: 1.0})


def test_boundary_ratio_assembly(flower3):
    ratios = {v: 1.0 + 0.5 * i
              for i, v in enumerate(sorted(flower3.boundary_vertices))}
    system = assemble_system(flower3, boundary_ratios=ratios)
    assert system.counts_by_kind()["boundary_ratio"] == 3
    with pytest.raises(errors.OptionMismatch):
        assemble_system(flower3, boundary_ratios={1: -1.0, 2: 1.0, 3: 1.0})


def test_residual_requires_all_values(flower3):
    system = assemble_system(flower3)
    with pytest.raises(errors.MissingValue):
        residual(system, Assignment({(0, 0): 1.0}))


def test_tetra_known_solution_residuals(tetrahedron):
    system = assemble_system(tetrahedron, delta0=3)
    s3 = 1.0 / SQRT3
    B = 2.0 + SQRT3
    vals = {(f, 0): s3 for f in range(3)}
    vals.update({(f, c): B for f in range(3) for c in (1, 2)})
    r = residual(system, Assignment(vals))
    assert np.abs(r).max() < 1e-12


def test_torus_sqrt3_solution_residuals(standard_torus):
    for mode in (Mode.BRANCHED, Mode.UNBRANCHED):
        system = assemble_system(standard_torus, mode=mode)
        asg = Assignment.constant(system, SQRT3)
        assert np.abs(residual(system, asg)).max() < 1e-12


def test_unbranched_vertex_residual_is_angle_defect():
    cx = catalog.flower_complex(6)
    system = assemble_system(cx, mode=Mode.UNBRANCHED)
    asg = Assignment.constant(system, SQRT3)
    r = system.residual_vector(asg.vector(system))
    rows = [i for i, eq in enumerate(system.equations)
            if eq.kind is EquationKind.VERTEX]
    assert len(rows) == 1
    assert r[rows[0]] == pytest.approx(6 * (math.pi / 3) - 2 * math.pi,
                                       abs=1e-14)


# -- jacobians -------------------------------------------------------------


def test_jacobian_rows_closed_forms(flower3, standard_torus):
    system = assemble_system(flower3)
    asg = Assignment.constant(system, SQRT3)
    J = jacobian(system, asg).toarray()
    rows = {eq.kind: i for i, eq in enumerate(system.equations)}
    tri = rows[EquationKind.TRIANGLE]
    cols = {c: j for j, c in enumerate(system.variables)}
    eq = system.equations[tri]
    for c in eq.corners:
        assert J[tri, cols[c]] == pytest.approx(3.0 - 1.0)
    # edge row at (2, 3, 1, 6) -> (3, 2, -6, -1)
    e = flower3.edge_index((0, 2))
    from soddy.equations import edge_equation, EquationSystem
    eq = edge_equation(flower3, e)
    variables = tuple(sorted(set(eq.corners)))
    one = EquationSystem(flower3, Mode.BRANCHED, Flavor.FULL, variables, {},
                         (eq,))
    vals = dict(zip(eq.corners, (2.0, 3.0, 1.0, 6.0)))
    x = np.array([vals[c] for c in variables])
    row = one.jacobian_matrix(x).toarray()[0]
    grads = dict(zip(eq.corners, (3.0, 2.0, -6.0, -1.0)))
    for c in eq.corners:
        assert row[variables.index(c)] == pytest.approx(grads[c])
    # degree-3 vertex row at (a, b, c) -> (b+c, a+c, a+b)
    [v] = flower3.interior_vertices()
    eq = vertex_equation(flower3, v)
    variables = tuple(sorted(set(eq.corners)))
    one = EquationSystem(flower3, Mode.BRANCHED, Flavor.FULL, variables, {},
                         (eq,))
    a, b, c = 0.5, 1.25, 2.75
    vals = dict(zip(eq.corners, (a, b, c)))
    x = np.array([vals[cn] for cn in variables])
    row = one.jacobian_matrix(x).toarray()[0]
    grads = dict(zip(eq.corners, (b + c, a + c, a + b)))
    for cn in eq.corners:
        assert row[variables.index(cn)] == pytest.approx(grads[cn])


@pytest.mark.parametrize("mode", [Mode.BRANCHED, Mode.UNBRANCHED])
def test_jacobian_matches_finite_differences(mode, flower3, tetrahedron,
                                             standard_torus):
    rng = np.random.default_rng(7)
    for cx, kwargs in [(flower3, {}),
                       (tetrahedron, {"delta0": 3}),
                       (tetrahedron, {"flavor": Flavor.REDUCED, "delta0": 3}),
                       (standard_torus, {})]:
        system = assemble_system(cx, mode=mode, **kwargs)
        x = rng.uniform(0.4, 3.0, system.num_variables)
        J = system.jacobian_matrix(x).toarray()
        F = fd_jacobian(system, x)
        scale = max(1.0, np.abs(J).max())
        assert np.abs(J - F).max() / scale < 1e-5


# -- export ---------------------------------------------------------------


def test_export_stable_and_ordered(tetrahedron):
    e0 = tetrahedron.edge_index((1, 1))
    one = assemble_system(tetrahedron, flavor=Flavor.REDUCED, delta0=3,
                          e0=e0).to_json()
    two = assemble_system(tetrahedron, flavor=Flavor.REDUCED, delta0=3,
                          e0=e0).to_json()
    assert one == two
    kinds = [eq.kind for eq in
             assemble_system(tetrahedron, delta0=3).equations]
    order = [k.value for k in kinds]
    assert order == sorted(order, key=["triangle", "edge", "vertex",
                                       "holonomy", "pin",
                                       "boundary_ratio"].index)
