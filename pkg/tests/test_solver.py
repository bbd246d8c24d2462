"""Solver behaviour: convergence, determinism, audits, verification."""

import math

import numpy as np
import pytest

from soddy import catalog, errors
from soddy.equations import Assignment, assemble_system, Flavor, Mode, residual
from soddy.solver import (SolveConfig, branch_indices, dimension_audit, solve,
                          verify_solution)

SQRT3 = math.sqrt(3.0)


def test_tetrahedron_reduced_unique_solution(tetra_reduced_solved):
    system, report = tetra_reduced_solved
    s3 = 1.0 / SQRT3
    B = 2.0 + SQRT3
    for f in range(3):
        assert report.assignment.values[(f, 0)] == pytest.approx(s3, abs=1e-9)
        for c in (1, 2):
            assert report.assignment.values[(f, c)] == pytest.approx(
                B, abs=1e-9)


def test_standard_torus_all_sqrt3(torus_full_solved):
    system, report = torus_full_solved
    for v in report.assignment.values.values():
        assert v == pytest.approx(SQRT3, abs=1e-9)
    # two equations are redundant at the solution
    assert report.equation_rank_deficiency == 2


def closed_forms(a, d):
    return {
        "b": a * (a + d) / (1 - a - d + a * a),
        "c": a / (a + d - 1),
        "e": d / (a + d - 1),
        "f": d * (a + d) / (1 - a - d + d * d),
        "g": (1 - a * d) / (a + d),
        "h": (1 - a * d) / (1 - a - d + d * d),
        "j": (1 - a * d) / (1 - a - d + a * a),
    }


CORNER_OF_LABEL = {"a": (0, 0), "b": (0, 1), "c": (0, 2),
                   "d": (1, 0), "e": (1, 1), "f": (1, 2),
                   "g": (2, 0), "h": (2, 1), "j": (2, 2)}


def test_flower_parametrization_closed_forms(flower3):
    a, d = 0.62, 0.59
    system = assemble_system(flower3, pins={(0, 0): a, (1, 0): d})
    report = solve(system)
    assert report.converged
    want = closed_forms(a, d)
    for label, corner in CORNER_OF_LABEL.items():
        if label in ("a", "d"):
            continue
        assert report.assignment.values[corner] == pytest.approx(
            want[label], rel=1e-9), label


def test_flower_underdetermined_without_pins(flower3):
    with pytest.raises(errors.Underdetermined):
        solve(assemble_system(flower3))


def test_flower_one_pin_still_underdetermined(flower3):
    system = assemble_system(flower3, pins={(0, 0): 0.6})
    with pytest.raises(errors.Underdetermined):
        solve(system)
    report = solve(assemble_system(flower3,
                                   pins={(0, 0): 0.6, (1, 0): 0.6}))
    assert report.converged


def test_determinism_same_seed(flower3):
    system = assemble_system(flower3, pins={(0, 0): 0.6, (1, 0): 0.62})
    r1 = solve(system, SolveConfig(seed=5))
    r2 = solve(system, SolveConfig(seed=5))
    assert r1.to_json() == r2.to_json()


def test_positivity_preserved_on_trace(flower3):
    system = assemble_system(flower3, pins={(0, 0): 0.6, (1, 0): 0.62})
    cfg = SolveConfig(collect_trace=True)
    report = solve(system, cfg)
    assert report.converged
    assert all(np.isfinite(r) for _, r, _ in report.trace)
    assert min(report.assignment.values.values()) > 0


def test_user_initialization(torus_full_solved):
    system, report = torus_full_solved
    cfg = SolveConfig(initial=report.assignment)
    again = solve(system, cfg)
    assert again.converged and again.iterations <= 1


def test_full_and_reduced_converge_to_same_solution(tetrahedron,
                                                    standard_torus):
    for cx, kw in [(tetrahedron, {"delta0": 3}), (standard_torus, {})]:
        red = solve(assemble_system(cx, flavor=Flavor.REDUCED, **kw))
        full = solve(assemble_system(cx, flavor=Flavor.FULL, **kw))
        assert red.converged and full.converged
        for c, v in red.assignment.values.items():
            assert full.assignment.values[c] == pytest.approx(v, abs=1e-9)


def test_branched_mode_keeps_unbranched_solution(standard_torus):
    system_u = assemble_system(standard_torus, mode=Mode.UNBRANCHED)
    rep_u = solve(system_u)
    assert rep_u.converged
    system_b = assemble_system(standard_torus, mode=Mode.BRANCHED)
    rep_b = solve(system_b, SolveConfig(initial=rep_u.assignment))
    assert rep_b.converged
    for c, v in rep_u.assignment.values.items():
        assert rep_b.assignment.values[c] == pytest.approx(v, abs=1e-9)


def test_branch_indices_zero_on_fixtures(tetra_reduced_solved,
                                         torus_full_solved):
    for system, report in (tetra_reduced_solved, torus_full_solved):
        assert set(report.branch_indices.values()) <= {0}


# -- verification -----------------------------------------------------------


def test_verify_passes_on_solution(torus_full_solved):
    system, report = torus_full_solved
    vr = verify_solution(system, report.assignment, tol=1e-10)
    assert vr.passed and vr.positive
    assert set(vr.branch_indices.values()) == {0}


def test_verify_fails_on_perturbation(tetra_reduced_solved):
    system, report = tetra_reduced_solved
    bad = Assignment(dict(report.assignment.values))
    bad.values[(0, 1)] += 1e-3
    vr = verify_solution(system, bad, tol=1e-9)
    assert not vr.passed
    assert vr.failed_equations
    touched = {tuple(c) for rec in vr.failed_equations
               for c in rec["corners"]}
    assert (0, 1) in touched


def test_verify_sphere_pins_exempt_from_positivity(tetra_reduced_solved):
    system, report = tetra_reduced_solved
    vr = verify_solution(system, report.assignment, tol=1e-9)
    assert vr.positive  # the -sqrt(3) pins are constants, not variables


# -- dimension audit ---------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_disc_audit_matches_boundary_count(n):
    cx = catalog.flower_complex(n)
    audit = dimension_audit(assemble_system(cx))
    assert audit.difference == n - 1
    assert not audit.mismatch


def test_sphere_audits(tetrahedron):
    fixtures = [tetrahedron, catalog.octahedron_complex(),
                catalog.icosahedron_complex(), catalog.bipyramid_complex(5),
                catalog.bipyramid_complex(7)]
    for cx in fixtures:
        red = dimension_audit(assemble_system(cx, flavor=Flavor.REDUCED))
        assert red.difference == 0 and not red.mismatch
        full = dimension_audit(assemble_system(cx))
        assert full.difference == -4 and not full.mismatch


def test_torus_audits(standard_torus):
    fixtures = [standard_torus, catalog.torus_grid_complex(2, 2),
                catalog.torus_grid_complex(3, 3),
                catalog.torus_grid_complex(2, 3),
                catalog.torus_grid_complex(1, 2)]
    for cx in fixtures:
        red = dimension_audit(assemble_system(cx, flavor=Flavor.REDUCED))
        assert red.difference == 0 and not red.mismatch
        full = dimension_audit(assemble_system(cx))
        assert full.difference == -2 and not full.mismatch


def test_audit_reflects_constraints(flower3):
    system = assemble_system(flower3, pins={(0, 0): 0.6, (1, 0): 0.6})
    audit = dimension_audit(system)
    assert audit.difference == 0 and not audit.mismatch
