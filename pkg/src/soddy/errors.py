"""Exception hierarchy for soddy.

Every error raised by the library derives from :class:`SoddyError`, so
callers can catch one type at the CLI boundary.  The subclasses mirror the
failure modes of the individual subsystems.
"""


class SoddyError(Exception):
    """Base class for all soddy errors."""


# -- complex construction ---------------------------------------------------

class ComplexError(SoddyError):
    """Invalid complex specification or unsupported surface."""


class NonSurface(ComplexError):
    """The gluing data does not describe a surface (e.g. an edge with
    three or more incident sides, or a pinched vertex)."""


class NonOrientable(ComplexError):
    """Face vertex lists induce incompatible orientations on a shared edge."""


class UnsupportedTopology(ComplexError):
    """The surface is not a disc, sphere or torus."""


class Disconnected(ComplexError):
    """The complex has more than one connected component."""


# -- normal curves and cutting ----------------------------------------------

class CurveError(SoddyError):
    """Invalid normal curve data."""


class NotNormal(CurveError):
    """A step enters and exits a face through the same side (backtracking)."""


class NoSharedFace(CurveError):
    """Consecutive crossed edges do not bound a common face."""


class OpenCurve(CurveError):
    """The crossing sequence does not close up."""


class NotClosed(CurveError):
    """A holonomy equation was requested for a non-closed curve."""


class CutFailed(ComplexError):
    """No valid fundamental domain cut was found."""


# -- equation assembly ------------------------------------------------------

class EquationError(SoddyError):
    """Invalid equation construction request."""


class WrongFace(EquationError):
    """Corners passed to a triangle equation do not form one face."""


class BoundaryEdge(EquationError):
    """An edge equation was requested for a boundary edge."""


class BoundaryVertex(EquationError):
    """A vertex equation was requested for a boundary vertex."""


class DegreeTooSmall(EquationError):
    """Interior vertex of degree < 3."""


class OptionMismatch(EquationError):
    """Assembly options are inconsistent with the surface kind."""


class InvalidReductionChoice(EquationError):
    """The distinguished edge/vertex of a reduced system is not admissible."""


class MissingValue(SoddyError):
    """An assignment does not cover all variable corners."""


# -- solving ----------------------------------------------------------------

class SolveError(SoddyError):
    """Solver failure."""


class Underdetermined(SolveError):
    """More variables than independent equations; add pins or ratios."""


class DidNotConverge(SolveError):
    """The solver exhausted its iteration and restart budget."""


class NonFiniteResidual(SolveError):
    """A residual evaluation produced NaN or infinity."""


# -- layout -----------------------------------------------------------------

class LayoutError(SoddyError):
    """Failure while reconstructing a packing."""


class NonPositiveValue(LayoutError):
    """A non-pinned corner value is not positive."""


class InconsistentCurvatures(LayoutError):
    """Curvature propagation mismatch beyond tolerance."""


class TorusScaleMismatch(LayoutError):
    """A boundary scale factor of the fundamental domain differs from 1."""


class ResidualTooLarge(LayoutError):
    """The assignment does not satisfy the system well enough to lay out."""


class PlacementMismatch(LayoutError):
    """A vertex was reached twice with inconsistent positions."""


class NotEquilateralBoundary(LayoutError):
    """Sphere layout: boundary circles are not congruent."""


class NorthPoleCovered(LayoutError):
    """Sphere layout: a cap covers the projection point."""


class BoundaryMismatch(LayoutError):
    """Torus layout: corresponding boundary segments are not translates."""


class DegenerateLattice(LayoutError):
    """Torus layout: lattice vectors are linearly dependent."""


class VertexEquationsViolated(LayoutError):
    """Holonomy angles requested for an assignment violating vertex equations."""


# -- flowers ----------------------------------------------------------------

class FlowerError(SoddyError):
    """Invalid flower data."""


class NonPositiveCurvature(FlowerError):
    """Flower curvatures must be positive."""


class DegenerateTriangle(FlowerError):
    """Side lengths violate the strict triangle inequality."""


class Unattainable(FlowerError):
    """No petal radius attains the requested angle sum."""
