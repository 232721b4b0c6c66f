"""Exception types shared across the library.

``FlowError`` subclasses mark evaluation failures the trajectory
integrator absorbs into a termination tag instead of propagating; the
remaining types signal misuse or failed procedures and always propagate.
"""


class FlowError(Exception):
    """Base class for per-point evaluation failures along a flow line."""


class LightlikeVelocityError(FlowError):
    """Velocity at or beyond the light-speed guard; never clamped."""


class NodeProximityError(FlowError):
    """Squared amplitude below the node floor; log derivatives undefined."""


class NoTimelikeFlowError(FlowError):
    """Stress tensor has no real timelike eigenvector."""


class DegenerateFlowError(FlowError):
    """Eigenstructure too degenerate to single out a timelike direction."""


class BoundaryError(FlowError):
    """Configuration point left the well region where the state is defined."""


class DegenerateThetaError(Exception):
    """Closed-form velocity branch parameter undefined (gradient contraction
    P.S too close to zero relative to the gradient scale)."""


class SamplingError(Exception):
    """Rejection sampling exhausted its attempt budget."""


class ComparisonFailure(Exception):
    """Frame comparison could not align two complete trajectories."""
