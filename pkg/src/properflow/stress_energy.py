"""Per-particle stress-energy tensors and the eigenflow guidance law.

For one particle of a multi-time state Psi = exp(p + i s), the mixed
tensor built from that particle's coordinate gradients is

    T^mu_nu = |Psi|^2 [m^2 - (P.P + S.S)] delta^mu_nu
              + 2 |Psi|^2 (P^mu P_nu + S^mu S_nu),

with P_mu = (p_t, p_z), S_mu = (s_t, s_z) lower-index derivatives and
indices raised by diag(+1, -1): X^t = X_t, X^z = -X_z.  The overall
normalization is twice the canonical tensor; eigenvectors, and hence the
guidance velocity, are insensitive to it.

The flow direction at a point is the future-pointing timelike eigenvector
of T^mu_nu.  For tensors of the form above the two eigenvalues are always
real; one eigenvector is timelike and one spacelike whenever the P and S
gradient pairs are linearly independent.  The closed-form branch velocity
(``velocity_closed_form``) reproduces the same direction where its branch
parameter theta is defined and is kept only as a cross-check: it
degenerates on every pure product or stationary configuration (P.S = 0),
while the eigenvector route stays regular there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFlowError,
    DegenerateThetaError,
    LightlikeVelocityError,
    NoTimelikeFlowError,
)
from .minkowski import VELOCITY_LIMIT, FourVector
from .wavefield import ConfigPoint, LogDerivatives, WaveModel, log_derivatives, shift_particle

# Characteristic discriminants below this fraction of (tr T)^2 are treated
# as degenerate rather than resolved into eigenvectors.
DEGENERACY_FLOOR_RATIO = 1e-12

# Relative floor on |2 P.S| under which the closed-form branch parameter
# is considered undefined.
THETA_FLOOR_RATIO = 1e-10


@dataclass(frozen=True)
class StressTensor:
    """Mixed components T^mu_nu at one point, plus |Psi|^2 there.

    Field order is tt = T^t_t, tz = T^t_z, zt = T^z_t, zz = T^z_z.  The
    covariant form obtained by lowering the first index is symmetric,
    which in mixed components reads tz = -zt.
    """

    tt: float
    tz: float
    zt: float
    zz: float
    amplitude2: float

    def component(self, mu: str, nu: str) -> float:
        table = {("t", "t"): self.tt, ("t", "z"): self.tz,
                 ("z", "t"): self.zt, ("z", "z"): self.zz}
        try:
            return table[(mu, nu)]
        except KeyError:
            raise ValueError(f"indices must be 't' or 'z', got ({mu!r}, {nu!r})") from None

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.tt, self.tz], [self.zt, self.zz]])

    def lowered(self) -> np.ndarray:
        """Covariant components T_{mu nu}."""
        return np.array([[self.tt, self.tz], [-self.zt, -self.zz]])

    @property
    def trace(self) -> float:
        return self.tt + self.zz

    @property
    def det(self) -> float:
        return self.tt * self.zz - self.tz * self.zt


@dataclass(frozen=True)
class TimelikeFlow:
    """Future-pointing timelike eigenvector and its companions.

    w is normalized to unit Minkowski norm with w.t > 0; v = w.z / w.t is
    the guidance velocity, strictly subluminal.
    """

    w: FourVector
    lambda_time: float
    lambda_space: float
    v: float


def assemble(ld: LogDerivatives, i: int, m: float) -> StressTensor:
    """Mixed stress tensor of particle i from log-polar gradients."""
    if not m >= 0.0:
        raise ValueError(f"mass must be nonnegative, got {m!r}")
    pt, pz, st, sz = ld.particle(i)
    a2 = math.exp(2.0 * ld.p)
    pp = pt * pt - pz * pz
    ss = st * st - sz * sz
    iso = a2 * (m * m - pp - ss)
    # Raising the first index flips the sign of the z-row terms.
    return StressTensor(
        tt=iso + 2.0 * a2 * (pt * pt + st * st),
        tz=2.0 * a2 * (pt * pz + st * sz),
        zt=-2.0 * a2 * (pz * pt + sz * st),
        zz=iso - 2.0 * a2 * (pz * pz + sz * sz),
        amplitude2=a2,
    )


def _split_index(vecs: np.ndarray) -> int | None:
    """Column index of the timelike eigenvector, or None when the columns
    do not split into one timelike and one spacelike direction."""
    norms = vecs[0] * vecs[0] - vecs[1] * vecs[1]
    if int((norms > 0.0).sum()) == 1 and int((norms < 0.0).sum()) == 1:
        return int(np.argmax(norms > 0.0))
    return None


def _explicit_eigvecs(T: StressTensor, tr: float, disc: float):
    """Eigenpairs from the quadratic formula and the rows of T - lambda I.

    Backstop for nearly lightlike flows: once the component scale is many
    orders above the timelike margin, the backward-stable solver returns
    columns rounded onto the light cone, while each row of T - lambda I
    subtracts exactly representable components and keeps the timelike and
    spacelike directions resolvable.  Per eigenvalue the larger of the two
    defining rows is used.
    """
    root = math.sqrt(disc)
    vals = np.array([0.5 * (tr + root), 0.5 * (tr - root)])
    cols = []
    for lam in vals:
        rows = ((T.tz, lam - T.tt), (lam - T.zz, T.zt))
        cols.append(max(rows, key=lambda u: max(abs(u[0]), abs(u[1]))))
    return vals, np.array(cols).T


def eigenflows(T: StressTensor) -> TimelikeFlow:
    """Classify the eigenvectors of T and return the timelike flow.

    Raises no-timelike-flow for complex eigenvalues, degenerate-flow when
    the characteristic discriminant falls below the degeneracy floor or
    the eigenvectors do not split into one timelike and one spacelike
    direction, and lightlike-velocity when the flow velocity reaches the
    light-speed guard.
    """
    tr = T.trace
    disc = tr * tr - 4.0 * T.det
    if disc < 0.0:
        raise NoTimelikeFlowError(f"complex eigenvalue pair (discriminant {disc!r})")
    if disc < DEGENERACY_FLOOR_RATIO * tr * tr:
        raise DegenerateFlowError(
            f"discriminant {disc!r} below degeneracy floor for trace {tr!r}"
        )
    vals, vecs = np.linalg.eig(T.as_matrix())
    if np.iscomplexobj(vals):
        scale = abs(T.tt) + abs(T.tz) + abs(T.zt) + abs(T.zz)
        if float(np.max(np.abs(vals.imag))) > 1e-12 * scale:
            raise NoTimelikeFlowError(f"complex eigenvalues {vals!r}")
        vals, vecs = vals.real, vecs.real
    k = _split_index(vecs)
    if k is None:
        vals, vecs = _explicit_eigvecs(T, tr, disc)
        k = _split_index(vecs)
    if k is None:
        norms = vecs[0] * vecs[0] - vecs[1] * vecs[1]
        raise DegenerateFlowError(
            f"eigenvectors do not split timelike/spacelike (norms {norms!r})"
        )
    wt, wz = float(vecs[0, k]), float(vecs[1, k])
    v = wz / wt
    if not abs(v) < VELOCITY_LIMIT:
        raise LightlikeVelocityError(
            f"flow velocity {v!r} at or beyond the light-speed guard"
        )
    scale = 1.0 / math.sqrt(wt * wt - wz * wz)
    if wt < 0.0:
        scale = -scale
    return TimelikeFlow(
        w=FourVector(t=wt * scale, z=wz * scale),
        lambda_time=float(vals[k]),
        lambda_space=float(vals[1 - k]),
        v=v,
    )


def velocity_closed_form(ld: LogDerivatives, i: int) -> float:
    """Branch-form guidance velocity for particle i; cross-check only.

    Both candidate directions S +/- e^{+/-theta} P (indices raised before
    use) are evaluated with sinh(theta) = (P.P - S.S) / (2 P.S), and the
    timelike one is returned.  Undefined wherever |2 P.S| falls below the
    gradient scale floor, which includes every product or stationary
    state; the eigenvector route is the authority at such points.
    """
    pt, pz, st, sz = ld.particle(i)
    pp = pt * pt - pz * pz
    ss = st * st - sz * sz
    ps = pt * st - pz * sz
    if abs(2.0 * ps) < THETA_FLOOR_RATIO * (abs(pp) + abs(ss) + 1e-30):
        raise DegenerateThetaError(
            f"2 P.S = {2.0 * ps!r} below floor relative to gradient scale"
        )
    sh = (pp - ss) / (2.0 * ps)
    # e^{theta} without cancellation for either sign of sinh(theta).
    if sh >= 0.0:
        e_theta = sh + math.sqrt(1.0 + sh * sh)
    else:
        e_theta = 1.0 / (math.sqrt(1.0 + sh * sh) - sh)
    candidates = []
    for branch in (e_theta, -1.0 / e_theta):
        wt = st + branch * pt
        wz = -(sz + branch * pz)
        if wt * wt - wz * wz > 0.0:
            candidates.append(wz / wt)
    if len(candidates) != 1:
        raise DegenerateFlowError(
            f"branches do not yield a unique timelike direction ({len(candidates)} found)"
        )
    v = candidates[0]
    if not abs(v) < VELOCITY_LIMIT:
        raise LightlikeVelocityError(
            f"closed-form velocity {v!r} at or beyond the light-speed guard"
        )
    return v


def conservation_residual(model: WaveModel, q: ConfigPoint, i: int, nu: str, h: float) -> float:
    """Central-difference estimate of d_mu T^mu_nu for particle i.

    The tensor is assembled from analytic first derivatives at points
    displaced by +/- h in particle i's time and space coordinates, so the
    estimate converges to the exact divergence at second order in h; for
    a state solving the field equation that limit is zero.
    """
    if not h > 0.0:
        raise ValueError(f"step h must be positive, got {h!r}")
    if nu not in ("t", "z"):
        raise ValueError(f"free index must be 't' or 'z', got {nu!r}")
    m = model.mass

    def tensor_at(point: ConfigPoint) -> StressTensor:
        return assemble(log_derivatives(model, point), i, m)

    t_plus = tensor_at(shift_particle(q, i, dt=+h))
    t_minus = tensor_at(shift_particle(q, i, dt=-h))
    z_plus = tensor_at(shift_particle(q, i, dz=+h))
    z_minus = tensor_at(shift_particle(q, i, dz=-h))
    return (
        (t_plus.component("t", nu) - t_minus.component("t", nu))
        + (z_plus.component("z", nu) - z_minus.component("z", nu))
    ) / (2.0 * h)
