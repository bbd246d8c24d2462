"""Damped least squares in log coordinates, plus solution audits.

Variables are parameterized as m = exp(u) so every iterate stays in the
positive orthant, which is where solutions correspond to packings.
Levenberg-Marquardt steps are taken on the residual of the compiled
system; stalls trigger seeded perturbed restarts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from . import errors
from .equations import Assignment, EquationSystem, Flavor, Mode

SQRT3 = math.sqrt(3.0)
RANK_RTOL = 1e-8  # threshold factor on the largest QR pivot


@dataclass
class SolveConfig:
    max_iterations: int = 200
    residual_tolerance: float = 1e-12   # infinity norm
    step_tolerance: float = 1e-14
    damping_init: float = 1e-3
    damping_growth: float = 10.0
    damping_shrink: float = 0.1
    initial: Optional[Assignment] = None   # default: all corners at sqrt(3)
    seed: int = 0
    max_restarts: int = 8
    collect_trace: bool = False

    def __post_init__(self):
        if min(self.residual_tolerance, self.step_tolerance,
               self.damping_init) <= 0:
            raise ValueError("tolerances and damping must be positive")


@dataclass
class SolveReport:
    assignment: Assignment
    converged: bool
    residual_norm: float
    iterations: int
    restarts: int
    rank: int
    branch_indices: dict[int, int]
    trace: list[tuple[int, float, float]] = field(default_factory=list)

    @property
    def equation_rank_deficiency(self) -> int:
        return self._n_equations - self.rank

    _n_equations: int = 0
    _n_variables: int = 0

    def to_json_dict(self) -> dict:
        return {
            "converged": self.converged,
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "rank": self.rank,
            "equation_rank_deficiency": self.equation_rank_deficiency,
            "branch_indices": {str(v): b
                               for v, b in sorted(self.branch_indices.items())},
            "assignment": [[c[0], c[1], self.assignment.values[c]]
                           for c in sorted(self.assignment.values)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def trace_csv(self) -> str:
        lines = ["iteration,residual_inf,damping"]
        lines += [f"{i},{r!r},{d!r}" for i, r, d in self.trace]
        return "\n".join(lines) + "\n"


def _qr_rank(J: np.ndarray) -> int:
    if J.size == 0:
        return 0
    _, R, _ = scipy.linalg.qr(J, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    return int(np.count_nonzero(diag > RANK_RTOL * diag[0]))


def branch_indices(system: EquationSystem,
                   assignment: Assignment) -> dict[int, int]:
    """Branching index per interior vertex: angle sum = 2 pi (beta + 1)."""
    cx = system.complex
    out = {}
    for v in cx.interior_vertices():
        theta = sum(2.0 * math.atan2(1.0, assignment.value(system, c))
                    for c in cx.vertex_corners[v])
        out[v] = int(round(theta / (2.0 * math.pi))) - 1
    return out


def solve(system: EquationSystem,
          config: Optional[SolveConfig] = None) -> SolveReport:
    """Find a positive solution by Levenberg-Marquardt in log coordinates."""
    cfg = config or SolveConfig()
    n = system.num_variables
    m_eq = system.num_equations

    if cfg.initial is not None:
        x0 = cfg.initial.vector(system)
        if np.any(x0 <= 0):
            raise errors.NonFiniteResidual(
                "user-supplied initialization must be positive")
        u0 = np.log(x0)
    else:
        u0 = np.full(n, math.log(SQRT3))

    def eval_resid(u):
        x = np.exp(u)
        return system.residual_vector(x), x

    def eval_jac(u, x):
        return system.jacobian_matrix(x).toarray() * x[np.newaxis, :]

    r0, x0 = eval_resid(u0)
    if not np.all(np.isfinite(r0)):
        raise errors.NonFiniteResidual("residual not finite at the initial "
                                       "point")

    # structural underdetermination: fewer equations than variables, or a
    # column-rank-deficient Jacobian both at the initial point and at a
    # perturbed probe point
    rng = np.random.default_rng(cfg.seed)
    if m_eq < n:
        raise errors.Underdetermined(
            f"{n} variables but only {m_eq} equations; add pins or "
            "boundary ratios")
    rank0 = _qr_rank(eval_jac(u0, x0))
    if rank0 < n:
        probe = u0 + rng.normal(0.0, 0.3, n)
        rp, xp = eval_resid(probe)
        if np.all(np.isfinite(rp)) and _qr_rank(eval_jac(probe, xp)) < n:
            raise errors.Underdetermined(
                f"Jacobian column rank < {n} variables; add pins or "
                "boundary ratios")

    trace: list[tuple[int, float, float]] = []
    total_iters = 0
    best: Optional[tuple[float, np.ndarray]] = None

    for restart in range(cfg.max_restarts + 1):
        u = u0 if restart == 0 else u0 + rng.normal(
            0.0, 0.25 * restart, n)
        r, x = eval_resid(u)
        if not np.all(np.isfinite(r)):
            continue
        cost = float(r @ r)
        lam = cfg.damping_init
        for it in range(cfg.max_iterations):
            rinf = float(np.abs(r).max(initial=0.0))
            if cfg.collect_trace:
                trace.append((total_iters, rinf, lam))
            if rinf <= cfg.residual_tolerance:
                break
            J = eval_jac(u, x)
            JtJ = J.T @ J
            g = J.T @ r
            D = np.diag(JtJ).copy()
            D[D < 1e-12 * max(D.max(initial=0.0), 1.0)] = \
                1e-12 * max(D.max(initial=0.0), 1.0)
            stepped = False
            while lam < 1e15:
                try:
                    du = np.linalg.solve(JtJ + lam * np.diag(D), -g)
                except np.linalg.LinAlgError:
                    du = np.linalg.lstsq(JtJ + lam * np.diag(D), -g,
                                         rcond=None)[0]
                r_new, x_new = eval_resid(u + du)
                if np.all(np.isfinite(r_new)) and float(r_new @ r_new) < cost:
                    u = u + du
                    r, x = r_new, x_new
                    cost = float(r @ r)
                    lam = max(lam * cfg.damping_shrink, 1e-15)
                    stepped = True
                    break
                lam *= cfg.damping_growth
            total_iters += 1
            if not stepped or float(np.abs(du).max(initial=0.0)) \
                    <= cfg.step_tolerance:
                break
        rinf = float(np.abs(r).max(initial=0.0))
        if best is None or rinf < best[0]:
            best = (rinf, u.copy())
        if rinf <= cfg.residual_tolerance:
            break

    rinf, u = best
    x = np.exp(u)
    assignment = Assignment.from_vector(system, x)
    rank = _qr_rank(eval_jac(u, x))
    report = SolveReport(
        assignment=assignment,
        converged=rinf <= cfg.residual_tolerance,
        residual_norm=rinf,
        iterations=total_iters,
        restarts=restart,
        rank=rank,
        branch_indices=branch_indices(system, assignment),
        trace=trace,
    )
    report._n_equations = m_eq
    report._n_variables = n
    return report


# -- verification -------------------------------------------------------


@dataclass
class VerificationReport:
    residuals: np.ndarray
    max_residual: float
    tolerance: float
    positive: bool
    nonpositive_corners: tuple
    branch_indices: dict[int, int]
    failed_equations: tuple

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance and self.positive

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_residual": float(self.max_residual),
            "tolerance": self.tolerance,
            "positive": self.positive,
            "nonpositive_corners": [list(c) for c in self.nonpositive_corners],
            "branch_indices": {str(v): b for v, b in
                               sorted(self.branch_indices.items())},
            "failed_equations": [dict(e) for e in self.failed_equations],
        }


def verify_solution(system: EquationSystem, assignment: Assignment,
                    tol: float = 1e-9) -> VerificationReport:
    """Re-check an assignment: residuals, positivity, branch indices.

    Pinned corners are constants and exempt from the positivity check.
    """
    x = assignment.vector(system)
    r = system.residual_vector(x)
    bad = [i for i in range(len(r)) if not abs(r[i]) <= tol]
    failed = tuple(
        {"index": i, "kind": system.equations[i].kind.value,
         "corners": [list(c) for c in system.equations[i].corners],
         "residual": float(r[i])}
        for i in bad)
    nonpos = tuple(c for c, val in zip(system.variables, x) if val <= 0)
    return VerificationReport(
        residuals=r,
        max_residual=float(np.abs(r).max(initial=0.0)),
        tolerance=tol,
        positive=not nonpos,
        nonpositive_corners=nonpos,
        branch_indices=branch_indices(system, assignment),
        failed_equations=failed,
    )


# -- dimension audit ----------------------------------------------------


@dataclass
class AuditReport:
    variables: int
    equations: int
    by_kind: dict[str, int]
    difference: int
    expected_difference: int
    mismatch: bool
    note: str

    def to_json_dict(self) -> dict:
        return {
            "variables": self.variables,
            "equations": self.equations,
            "by_kind": dict(sorted(self.by_kind.items())),
            "difference": self.difference,
            "expected_difference": self.expected_difference,
            "mismatch": self.mismatch,
            "note": self.note,
        }


def dimension_audit(system: EquationSystem) -> AuditReport:
    """Compare variables minus equations against the theoretical count."""
    cx = system.complex
    by_kind = system.counts_by_kind()
    n_constraints = by_kind.get("pin", 0) + by_kind.get("boundary_ratio", 0)
    kind = cx.kind.value
    if kind == "disc":
        nb = len(cx.boundary_vertices)
        expected = (nb - 1) - n_constraints
        note = (f"disc: solution family has dimension n-1 = {nb - 1} "
                "before constraints")
    elif kind == "sphere":
        if system.flavor is Flavor.REDUCED:
            expected, note = 0, "reduced sphere systems are rigid"
        else:
            expected = -4
            note = ("full sphere systems carry 4 redundant equations "
                    "(3 vertex + 1 edge at the distinguished face)")
    else:
        if system.flavor is Flavor.REDUCED:
            expected, note = 0, "reduced torus systems are rigid"
        else:
            expected = -2
            note = ("full torus systems carry 2 redundant equations "
                    "(1 vertex + 1 edge)")
    diff = system.num_variables - system.num_equations
    return AuditReport(
        variables=system.num_variables,
        equations=system.num_equations,
        by_kind=by_kind,
        difference=diff,
        expected_difference=expected,
        mismatch=diff != expected,
        note=note,
    )
