"""Circle packings of triangulated surfaces via polynomial corner equations.

Build a :class:`~soddy.complexes.Complex` from side gluings, assemble its
packing equation system, solve in the positive orthant, and reconstruct a
certified packing in the plane, on the sphere, or on a flat torus.
"""

from ._kernels import BACKEND as kernel_backend
from .complexes import (Complex, ComplexSpec, FundamentalDomain, NormalCurve,
                        SurfaceKind, build_complex, check_hypotheses,
                        cut_fundamental_domain, normalize_curve,
                        spec_from_face_vertices, spec_from_json, spec_to_json)
from .descartes import (Flower, TriangleSoddy, classic_descartes_residual,
                        flower_angle_sum, m_from_flower, random_flower,
                        soddy_radii, symmetric_descartes_residual)
from .equations import (Assignment, Equation, EquationKind, EquationSystem,
                        Flavor, Mode, assemble_system, edge_equation,
                        holonomy_equation, jacobian, residual,
                        triangle_equation, vertex_equation)
from .layout import (AngleData, CurvatureData, Geometry, Packing,
                     angles_from_solution, check_packing,
                     curvatures_from_solution, realize_disc, realize_sphere,
                     realize_torus, theta_holonomy)
from .solver import (AuditReport, SolveConfig, SolveReport,
                     VerificationReport, dimension_audit, solve,
                     verify_solution)

__version__ = "0.1.0"

__all__ = [
    "Assignment", "AngleData", "AuditReport", "Complex", "ComplexSpec",
    "CurvatureData", "Equation", "EquationKind", "EquationSystem", "Flavor",
    "Flower", "FundamentalDomain", "Geometry", "Mode", "NormalCurve",
    "Packing", "SolveConfig", "SolveReport", "SurfaceKind", "TriangleSoddy",
    "VerificationReport", "angles_from_solution", "assemble_system",
    "build_complex", "check_hypotheses", "check_packing",
    "classic_descartes_residual", "curvatures_from_solution",
    "cut_fundamental_domain", "dimension_audit", "edge_equation",
    "flower_angle_sum", "holonomy_equation", "jacobian", "kernel_backend",
    "m_from_flower", "normalize_curve", "random_flower", "realize_disc",
    "realize_sphere", "realize_torus", "residual", "soddy_radii", "solve",
    "spec_from_face_vertices", "spec_from_json", "spec_to_json",
    "symmetric_descartes_residual", "theta_holonomy", "triangle_equation",
    "verify_solution", "vertex_equation",
]
