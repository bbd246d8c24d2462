"""Acceptance criteria.

Each test prints one PASS/FAIL line (run with -s to see them) and asserts
at the stated tolerance.  Tolerances are fixed here, not calibrated.
"""

import math
import time

import numpy as np
import pytest

from soddy import catalog, errors
from soddy.descartes import (m_from_flower, normalized_descartes_residual,
                             random_flower)
from soddy.equations import Assignment, assemble_system, Flavor, Mode, residual
from soddy.layout import (check_packing, curvatures_from_solution,
                          packing_corner_values, realize_disc, realize_sphere,
                          realize_torus)
from soddy.solver import dimension_audit, solve, SolveConfig, verify_solution

from helpers import fd_jacobian

SQRT3 = math.sqrt(3.0)


def report(num, ok, detail):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def sphere_fixtures():
    return [catalog.tetrahedron_complex(), catalog.octahedron_complex(),
            catalog.icosahedron_complex(), catalog.bipyramid_complex(5),
            catalog.bipyramid_complex(7)]


def torus_fixtures():
    return [catalog.standard_torus_complex(),
            catalog.torus_grid_complex(2, 2),
            catalog.torus_grid_complex(3, 3),
            catalog.torus_grid_complex(2, 3),
            catalog.torus_grid_complex(1, 2)]


def test_criterion_1_tetrahedron():
    start = time.perf_counter()
    cx = catalog.tetrahedron_complex()
    system = assemble_system(cx, flavor=Flavor.REDUCED, delta0=3)
    rep = solve(system)
    elapsed = time.perf_counter() - start
    want_small = 1.0 / SQRT3
    want_large = 2.0 + SQRT3
    err = 0.0
    for f in range(3):
        err = max(err, abs(rep.assignment.values[(f, 0)] - want_small))
        for c in (1, 2):
            err = max(err, abs(rep.assignment.values[(f, c)] - want_large))
    ok = rep.converged and err < 1e-9 and elapsed < 1.0
    report(1, ok, f"tetrahedron reduced solve: max deviation {err:.2e}, "
           f"{elapsed * 1e3:.0f} ms")


def test_criterion_2_standard_torus():
    start = time.perf_counter()
    cx = catalog.standard_torus_complex()
    system = assemble_system(cx)
    rep = solve(system)
    elapsed = time.perf_counter() - start
    err = max(abs(v - SQRT3) for v in rep.assignment.values.values())
    # redundancy: all residuals vanish at the solution although the system
    # has 8 equations in 6 variables; rank deficiency is exactly 2
    res = np.abs(residual(system, rep.assignment)).max()
    ok = (rep.converged and err < 1e-9 and res < 1e-9
          and rep.equation_rank_deficiency == 2 and elapsed < 1.0)
    report(2, ok, f"standard torus: deviation {err:.2e}, residual "
           f"{res:.2e}, redundant equations "
           f"{rep.equation_rank_deficiency}, {elapsed * 1e3:.0f} ms")


def closed_forms(a, d):
    return [a * (a + d) / (1 - a - d + a * a),            # b
            a / (a + d - 1),                              # c
            d / (a + d - 1),                              # e
            d * (a + d) / (1 - a - d + d * d),            # f
            (1 - a * d) / (a + d),                        # g
            (1 - a * d) / (1 - a - d + d * d),            # h
            (1 - a * d) / (1 - a - d + a * a)]            # j


def test_criterion_3_flower_parametrization():
    cx = catalog.flower_complex(3)
    labels = [(0, 1), (0, 2), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]
    rng = np.random.default_rng(2024)
    worst = 0.0
    worst_kappa = 0.0
    for _ in range(100):
        a, d = rng.uniform(0.55, 0.65, 2)
        system = assemble_system(cx, pins={(0, 0): a, (1, 0): d})
        rep = solve(system)
        assert rep.converged
        want = closed_forms(a, d)
        for corner, w in zip(labels, want):
            got = rep.assignment.values[corner]
            worst = max(worst, abs(got - w) / abs(w))
        curv = curvatures_from_solution(system, rep.assignment,
                                        base_vertex=0)
        worst_kappa = max(worst_kappa,
                          abs(curv.kappa[2] - (a + d - 1.0)))
    ok = worst < 1e-9 and worst_kappa < 1e-9
    report(3, ok, f"3-flower closed forms over 100 pins: parameter "
           f"deviation {worst:.2e}, curvature ratio deviation "
           f"{worst_kappa:.2e}")


def test_criterion_4_dimension_audits():
    bad = []
    for n in (3, 4, 5, 6, 7):
        audit = dimension_audit(assemble_system(catalog.flower_complex(n)))
        if audit.difference != n - 1 or audit.mismatch:
            bad.append(f"flower{n}")
    for cx in sphere_fixtures():
        audit = dimension_audit(assemble_system(cx, flavor=Flavor.REDUCED))
        if audit.difference != 0 or audit.mismatch:
            bad.append(f"sphere{cx.num_faces}")
    for cx in torus_fixtures():
        audit = dimension_audit(assemble_system(cx, flavor=Flavor.REDUCED))
        if audit.difference != 0 or audit.mismatch:
            bad.append(f"torus{cx.num_faces}")
    report(4, not bad, "dimension audits on 5 discs, 5 spheres, 5 tori"
           + (f"; mismatches: {bad}" if bad else ""))


def test_criterion_5_reduced_full_equivalence():
    worst = 0.0
    for cx in sphere_fixtures():
        red = solve(assemble_system(cx, flavor=Flavor.REDUCED))
        assert red.converged
        full = assemble_system(cx, flavor=Flavor.FULL)
        worst = max(worst,
                    np.abs(residual(full, red.assignment)).max())
    for cx in torus_fixtures():
        red = solve(assemble_system(cx, flavor=Flavor.REDUCED))
        assert red.converged
        full = assemble_system(cx, flavor=Flavor.FULL)
        worst = max(worst,
                    np.abs(residual(full, red.assignment)).max())
    report(5, worst < 1e-9,
           f"reduced solutions on full systems: residual {worst:.2e}")


def test_criterion_6_descartes_suite():
    start = time.perf_counter()
    worst = 0.0
    count = 0
    for beta in (0, 1):
        for n in range(3, 10):
            if n <= 2 * beta + 2:
                # the per-petal angle is under pi, so these (n, beta)
                # pairs admit no flower at all
                with pytest.raises(errors.Unattainable):
                    random_flower(n, beta, seed=0)
                continue
            for seed in range(1000):
                flower = random_flower(n, beta, seed=seed)
                worst = max(worst, abs(normalized_descartes_residual(
                    m_from_flower(flower))))
                count += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < 10.0
    report(6, ok, f"{count} random flowers: normalized residual "
           f"{worst:.2e}, {elapsed:.1f} s")


def test_criterion_7_round_trip():
    cases = []
    fl = catalog.flower_complex(3)
    cases.append(("disc", assemble_system(
        fl, pins={(0, 0): 0.7, (1, 0): 0.6}), realize_disc))
    te = catalog.tetrahedron_complex()
    cases.append(("sphere", assemble_system(
        te, flavor=Flavor.REDUCED, delta0=3), realize_sphere))
    oc = catalog.octahedron_complex()
    cases.append(("sphere8", assemble_system(
        oc, flavor=Flavor.REDUCED), realize_sphere))
    st = catalog.standard_torus_complex()
    cases.append(("torus", assemble_system(st), realize_torus))
    g22 = catalog.torus_grid_complex(2, 2)
    cases.append(("torus8", assemble_system(g22), realize_torus))

    worst_m = 0.0
    worst_tangency = 0.0
    for name, system, realize in cases:
        rep = solve(system)
        assert rep.converged, name
        packing = realize(system, rep.assignment)
        got = packing_corner_values(system, packing)
        for c in system.variables:
            worst_m = max(worst_m, abs(got[c] - rep.assignment.values[c])
                          / abs(rep.assignment.values[c]))
        cert = packing.certification
        tang = cert["max_tangency_residual"]
        if packing.geometry.value == "sphere":
            tang /= cert["max_radius"]
        worst_tangency = max(worst_tangency, tang)
    ok = worst_m < 1e-8 and worst_tangency < 1e-9
    report(7, ok, f"round trips on 5 fixtures: corner deviation "
           f"{worst_m:.2e}, relative tangency {worst_tangency:.2e}")


def test_criterion_8_trig_lemma_suite():
    rng = np.random.default_rng(31)
    worst = 0.0
    # single-m identities: cos, sin, exp, arg
    ms = 10.0 ** rng.uniform(-3, 3, 10_000)
    for m in ms:
        theta = 2.0 * math.atan2(1.0, m)
        worst = max(worst, abs(math.cos(theta) - (m * m - 1) / (m * m + 1)))
        worst = max(worst, abs(math.sin(theta) - 2 * m / (m * m + 1)))
        z = complex(m, 1.0) / complex(m, -1.0)
        worst = max(worst, abs(z - complex(math.cos(theta),
                                           math.sin(theta))))
        worst = max(worst, abs(math.atan2(1.0, m) - theta / 2))
    # triangle equivalence: angle sums pi <-> polynomial identity, and the
    # cot ratio identity against Soddy curvatures
    for _ in range(2000):
        t1, t2 = rng.uniform(0.05, math.pi / 2, 2)
        t3 = math.pi - t1 - t2
        m1, m2, m3 = (1 / math.tan(t / 2) for t in (t1, t2, t3))
        scale = max(1.0, abs(m1 * m2 * m3))
        worst = max(worst, abs(m1 * m2 * m3 - m1 - m2 - m3) / scale)
        r = rng.uniform(0.1, 10.0, 3)
        ka, kb, kc = 1 / r
        L = ka * kb + kb * kc + kc * ka
        ma, mb = math.sqrt(L) / ka, math.sqrt(L) / kb
        worst = max(worst, abs(ma / mb - kb / ka) / max(1.0, kb / ka))
    # vertex equivalence: angle sums 2 pi (beta + 1) <-> product real
    for _ in range(2000):
        d = int(rng.integers(3, 9))
        beta = int(rng.integers(0, 2)) if d >= 5 else 0
        target = 2 * math.pi * (beta + 1)
        while True:
            thetas = rng.uniform(0.05, 0.95 * math.pi, d)
            thetas *= target / thetas.sum()
            if thetas.max() < math.pi:
                break
        mvals = [1 / math.tan(t / 2) for t in thetas]
        prod = complex(1.0)
        for m in mvals:
            prod *= complex(m, 1.0)
        worst = max(worst, abs(prod.imag) / abs(prod))
    ok_ident = worst < 1e-12

    # jacobians agree with central differences
    fd_worst = 0.0
    for cx, kwargs in [(catalog.flower_complex(5), {}),
                       (catalog.tetrahedron_complex(), {"delta0": 0}),
                       (catalog.standard_torus_complex(), {})]:
        for mode in (Mode.BRANCHED, Mode.UNBRANCHED):
            system = assemble_system(cx, mode=mode, **kwargs)
            x = rng.uniform(0.4, 3.0, system.num_variables)
            J = system.jacobian_matrix(x).toarray()
            F = fd_jacobian(system, x)
            fd_worst = max(fd_worst,
                           np.abs(J - F).max() / max(1.0, np.abs(J).max()))
    ok = ok_ident and fd_worst < 1e-5
    report(8, ok, f"trig identities on 1e4 samples: {worst:.2e}; "
           f"jacobian vs finite differences: {fd_worst:.2e}")


def test_criterion_9_unbranched_mode():
    n = 7
    cx = catalog.flower_complex(n)
    flower = random_flower(n, beta=1, seed=5)
    ks = list(flower.petals)          # petal j <-> boundary vertex j + 1

    # corner values of the branched packing, face by face via sqrt(L)/k
    values = {}
    for f in range(n):
        kc, kj, kj1 = 1.0, ks[f], ks[(f + 1) % n]
        L = kc * kj + kj * kj1 + kj1 * kc
        values[(f, 0)] = math.sqrt(L) / kc
        values[(f, 1)] = math.sqrt(L) / kj
        values[(f, 2)] = math.sqrt(L) / kj1
    branched_asg = Assignment(values)
    ratios = {j + 1: ks[j] for j in range(n)}

    sys_b = assemble_system(cx, mode=Mode.BRANCHED, boundary_ratios=ratios)
    vr_b = verify_solution(sys_b, branched_asg, tol=1e-9)
    sys_u = assemble_system(cx, mode=Mode.UNBRANCHED,
                            boundary_ratios=ratios)
    vr_u = verify_solution(sys_u, branched_asg, tol=1e-9)
    rep_u = solve(sys_u)
    vr_u2 = verify_solution(sys_u, rep_u.assignment, tol=1e-9)
    betas_branched = vr_b.branch_indices
    ok = (vr_b.passed and betas_branched[0] == 1
          and not vr_u.passed
          and rep_u.converged and vr_u2.passed
          and set(rep_u.branch_indices.values()) == {0})
    report(9, ok, "branched 7-flower solution: branched mode verifies "
           f"(beta={betas_branched[0]}), unbranched mode rejects it and "
           "finds the beta=0 solution under the same boundary ratios")
