"""Time-minimizing trajectories, indicatrix sampling, and propagating fronts.

Geodesics are extremals of the energy E = F^2/2, integrated as the
Euler-Lagrange system g_ij * a^j = dE/dx_i - (d^2E/dv_i dx_j) v_j with a
classic 4th-order Runge-Kutta step; every derivative of F^2 comes from the
same central-difference stencils as the fundamental tensor (at 4th order
here, so force noise stays far below the integrator's truncation error).
Paths run at unit F-speed, so arclength equals travel time, and they halt
at the strong-convexity boundary where extremals stop being minimizers.

Rays of a front are independent; the integrator advances them as one
batch, which is equivalent to running them in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convexity import CRITERION_BAND, THRESHOLD, Verdict, is_strongly_convex_at
from .errors import OutOfDomain, StepTooLarge, ZeroVector
from .metric import NORMALIZED, NavigationParams, hessian_field, induced_metric, slope_metric_F
from .surfaces import SurfaceSpec

__all__ = [
    "GeodesicPath",
    "Indicatrix",
    "LimaconFit",
    "Front",
    "WavefrontResult",
    "geodesic_shoot",
    "wavefront",
    "indicatrix",
    "conservation_drift",
]

STATUS_COMPLETE = "complete"
STATUS_LEFT_DOMAIN = "left_convex_domain"

# relative step for the 4th-order force stencils
_FORCE_STEP = 2e-3

_D1_OFF = np.array([-2.0, -1.0, 1.0, 2.0])
_D1_W = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


@dataclass(frozen=True)
class GeodesicPath:
    """One integrated trajectory, sampled at every accepted step.

    F_values stay constant along the path up to the conservation tolerance;
    every stored point lies inside the strong-convexity domain, and
    ``status`` records whether the requested length was reached or the
    boundary cut the path short.
    """

    t: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    F_values: np.ndarray
    step: float
    status: str

    @property
    def length(self) -> float:
        return float(self.t[-1])

    @property
    def left_domain(self) -> bool:
        return self.status == STATUS_LEFT_DOMAIN


def conservation_drift(path: GeodesicPath) -> float:
    """Max relative F drift per unit F-length along a path."""
    if len(path.t) < 2:
        return 0.0
    f0 = path.F_values[0]
    rel = np.abs(path.F_values[1:] - f0) / f0
    return float(np.max(rel / np.maximum(path.t[1:], path.step)))


def _energy(surf, x, y, tv, nav):
    return 0.5 * np.square(slope_metric_F(surf, x, y, tv, nav))


def _el_accel(surf, p, v, nav, rel=_FORCE_STEP):
    """Acceleration of the Euler-Lagrange flow for a batch of states.

    p, v: (n, 2).  Returns (n, 2); rows where the direction Hessian is not
    positive definite come back NaN (the ray has slipped past the convexity
    boundary between checks).
    """
    hx = rel * np.maximum(1.0, np.linalg.norm(p, axis=-1))  # (n,)
    hy = rel * np.linalg.norm(v, axis=-1)

    g11, g12, g22 = hessian_field(surf, p[:, 0], p[:, 1], v, nav, step=rel, order=4)

    eye = np.eye(2)
    # dE/dx_j: nodes (n, j, k) at p + off_k*hx*e_j, direction fixed
    px = p[:, None, None, :] + hx[:, None, None, None] * _D1_OFF[None, None, :, None] * eye[None, :, None, :]
    Ex = _energy(surf, px[..., 0], px[..., 1], v[:, None, None, :], nav)
    dEdx = (Ex @ _D1_W) / hx[:, None]  # (n, 2)

    # M_ij = d^2E / dv_i dx_j: cross grid over x-offsets (j,k) and v-offsets (i,l)
    pxx = p[:, None, None, None, None, :] + (
        hx[:, None, None, None, None, None]
        * _D1_OFF[None, None, None, None, :, None]
        * eye[None, None, :, None, None, :]
    )  # (n, 1, j, 1, k, 2)
    vvv = v[:, None, None, None, None, :] + (
        hy[:, None, None, None, None, None]
        * _D1_OFF[None, None, None, :, None, None]
        * eye[None, :, None, None, None, :]
    )  # (n, i, 1, l, 1, 2)
    Exy = _energy(surf, pxx[..., 0], pxx[..., 1], vvv, nav)  # (n, i, j, l, k)
    M = np.einsum("nijlk,l,k->nij", Exy, _D1_W, _D1_W) / (hx * hy)[:, None, None]

    rhs = dEdx - np.einsum("nij,nj->ni", M, v)
    det = g11 * g22 - g12 * g12
    with np.errstate(divide="ignore", invalid="ignore"):
        a1 = (rhs[:, 0] * g22 - rhs[:, 1] * g12) / det
        a2 = (g11 * rhs[:, 1] - g12 * rhs[:, 0]) / det
    acc = np.stack([a1, a2], axis=-1)
    acc[det <= 0.0] = np.nan
    return acc


def _rk4_step(surf, p, v, h, nav):
    k1p, k1v = v, _el_accel(surf, p, v, nav)
    k2p = v + 0.5 * h * k1v
    k2v = _el_accel(surf, p + 0.5 * h * k1p, k2p, nav)
    k3p = v + 0.5 * h * k2v
    k3v = _el_accel(surf, p + 0.5 * h * k2p, k3p, nav)
    k4p = v + h * k3v
    k4v = _el_accel(surf, p + h * k3p, k4p, nav)
    p_new = p + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
    v_new = v + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
    return p_new, v_new


def _inside_convex(surf, x, y) -> np.ndarray:
    fx, fy = surf.gradient(x, y)
    q = np.asarray(fx) ** 2 + np.asarray(fy) ** 2
    return q < THRESHOLD - CRITERION_BAND


def _integrate(surf, p0, v0, length, step, nav, conservation_tol):
    """Advance a batch of unit-speed rays; returns per-node arrays and halts."""
    n = p0.shape[0]
    n_full = int(math.floor(length / step + 1e-9))
    hs = [step] * n_full
    rem = length - n_full * step
    if rem > 1e-12 * max(1.0, length):
        hs.append(rem)
    m = len(hs)

    pos = np.empty((m + 1, n, 2))
    vel = np.empty((m + 1, n, 2))
    fv = np.empty((m + 1, n))
    t = np.minimum(np.arange(m + 1) * step, length)
    pos[0], vel[0] = p0, v0
    fv[0] = slope_metric_F(surf, p0[:, 0], p0[:, 1], v0, nav)
    alive = np.ones(n, dtype=bool)
    halt = np.full(n, m, dtype=int)

    for k, h in enumerate(hs):
        p_new, v_new = _rk4_step(surf, pos[k], vel[k], h, nav)
        bad = ~np.isfinite(p_new).all(axis=-1) | ~np.isfinite(v_new).all(axis=-1)
        ok = ~bad
        ok[ok] &= _inside_convex(surf, p_new[ok, 0], p_new[ok, 1])
        newly_dead = alive & ~ok
        halt[newly_dead] = k
        alive &= ok
        pos[k + 1] = np.where(alive[:, None], p_new, pos[k])
        vel[k + 1] = np.where(alive[:, None], v_new, vel[k])
        fv[k + 1] = np.where(
            alive,
            slope_metric_F(surf, pos[k + 1][:, 0], pos[k + 1][:, 1], vel[k + 1], nav),
            fv[k],
        )
        if not alive.any():
            break

    paths = []
    for i in range(n):
        end = halt[i] + 1
        path = GeodesicPath(
            t=t[:end].copy(),
            points=pos[:end, i].copy(),
            velocities=vel[:end, i].copy(),
            F_values=fv[:end, i].copy(),
            step=step,
            status=STATUS_COMPLETE if halt[i] == m else STATUS_LEFT_DOMAIN,
        )
        drift = conservation_drift(path)
        if drift > 10.0 * conservation_tol:
            raise StepTooLarge(
                f"F drift {drift:.3e} per unit length exceeds 10x the tolerance "
                f"{conservation_tol:.1e}; reduce the step"
            )
        paths.append(path)
    return paths


def geodesic_shoot(surf: SurfaceSpec, start, direction, length: float,
                   step: float = 1e-3, nav: NavigationParams | None = None,
                   conservation_tol: float = 1e-6) -> GeodesicPath:
    """Trace the extremal from ``start`` along ``direction`` for an F-length.

    The initial velocity is rescaled to unit F-speed, so ``length`` is travel
    time.  Integration stops early (status ``left_convex_domain``) if the
    path reaches the strong-convexity boundary; raises StepTooLarge when the
    conserved F drifts more than 10x the tolerance per unit length.
    """
    nav = nav or NORMALIZED
    start = np.asarray(start, dtype=float).reshape(2)
    direction = np.asarray(direction, dtype=float).reshape(2)
    if not np.any(direction):
        raise ZeroVector("shooting direction must be nonzero")
    if is_strongly_convex_at(surf, start[0], start[1]) is not Verdict.CONVEX:
        raise OutOfDomain("start point is not strictly inside the strong-convexity domain")
    if length <= 0 or step <= 0:
        raise ValueError("length and step must be positive")
    F0 = slope_metric_F(surf, start[0], start[1], direction, nav)
    v0 = direction / F0
    return _integrate(surf, start[None, :], v0[None, :], length, step, nav, conservation_tol)[0]


@dataclass(frozen=True)
class Front:
    """Positions of the surviving rays at one instant, ordered by ray angle."""

    time: float
    points: np.ndarray
    ray_ids: np.ndarray
    n_rays: int

    @property
    def complete(self) -> bool:
        return len(self.ray_ids) == self.n_rays


@dataclass(frozen=True)
class WavefrontResult:
    """Propagating front: per-time polylines plus the underlying rays."""

    seed: tuple[float, float]
    fronts: list[Front]
    rays: list[GeodesicPath]

    @property
    def statuses(self) -> list[str]:
        return [r.status for r in self.rays]


def wavefront(surf: SurfaceSpec, seed, total_time: float, n_rays: int = 64,
              step: float = 1e-3, nav: NavigationParams | None = None,
              n_fronts: int = 1, conservation_tol: float = 1e-6) -> WavefrontResult:
    """Propagate a unit-F-speed front from a seed point.

    Shoots ``n_rays`` geodesics at equally spaced chart angles; the front at
    time t is the polyline of ray positions at F-arclength t.  Rays that
    exit the strong-convexity domain are truncated and drop out of later
    fronts (their status records the early stop).
    """
    nav = nav or NORMALIZED
    seed = np.asarray(seed, dtype=float).reshape(2)
    if is_strongly_convex_at(surf, seed[0], seed[1]) is not Verdict.CONVEX:
        raise OutOfDomain("seed point is not strictly inside the strong-convexity domain")
    if n_rays < 3:
        raise ValueError("need at least 3 rays for a front polyline")
    th = np.linspace(0.0, 2.0 * math.pi, n_rays, endpoint=False)
    dirs = np.stack([np.cos(th), np.sin(th)], axis=-1)
    F0 = slope_metric_F(surf, seed[0], seed[1], dirs, nav)
    v0 = dirs / F0[:, None]
    p0 = np.broadcast_to(seed, (n_rays, 2)).copy()
    rays = _integrate(surf, p0, v0, total_time, step, nav, conservation_tol)

    fronts = []
    for j in range(1, n_fronts + 1):
        t_front = total_time * j / n_fronts
        pts, ids = [], []
        for i, ray in enumerate(rays):
            k = int(round(t_front / step))
            if k < len(ray.t) and ray.t[k] <= t_front + 0.5 * step:
                pts.append(ray.points[min(k, len(ray.t) - 1)])
                ids.append(i)
        fronts.append(Front(time=t_front, points=np.asarray(pts),
                            ray_ids=np.asarray(ids, dtype=int), n_rays=n_rays))
    return WavefrontResult(seed=(float(seed[0]), float(seed[1])), fronts=fronts, rays=rays)


@dataclass(frozen=True)
class LimaconFit:
    """Least-squares fit r = c0 + c1*cos(theta) in the steepest-descent frame."""

    c0: float
    c1: float
    max_residual: float


@dataclass(frozen=True)
class Indicatrix:
    """The unit curve {tv : F(tv) = 1} sampled at one chart point.

    ``frame`` holds the rows (e1, e2): an orthonormal pair in the induced
    inner product with e1 along steepest descent, or None on level ground
    (zero gradient), where the curve is a circle and the chart frame is used
    for the fit.  ``convex`` is False when the sampled curve's discrete
    curvature changes sign.
    """

    center: tuple[float, float]
    samples: np.ndarray
    frame: np.ndarray | None
    fit: LimaconFit
    convex: bool
    max_F_residual: float


def _discrete_convexity(samples: np.ndarray) -> bool:
    rolled = np.roll(samples, -1, axis=0)
    edges = rolled - samples
    nxt = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
    scale = np.linalg.norm(edges, axis=1) * np.linalg.norm(nxt, axis=1)
    signif = np.abs(cross) > 1e-9 * scale
    signs = np.sign(cross[signif])
    return not (np.any(signs > 0) and np.any(signs < 0))


def indicatrix(surf: SurfaceSpec, x, y, nav: NavigationParams | None = None,
               n: int = 256) -> Indicatrix:
    """Sample n unit-F directions at (x, y) and fit the limacon polar profile.

    Directions are equally spaced in chart angle and scaled by 1/F.  On
    sloped ground the samples, expressed in polar coordinates of the
    steepest-descent frame, follow r = v + w*k*cos(theta) exactly (k grows
    with the incline); the fit is reported along with a discrete convexity
    flag, which goes False outside the strong-convexity domain.
    """
    nav = nav or NORMALIZED
    if n < 8:
        raise ValueError("need at least 8 samples")
    th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    dirs = np.stack([np.cos(th), np.sin(th)], axis=-1)
    F = slope_metric_F(surf, x, y, dirs, nav)
    samples = dirs / F[:, None]
    F_check = slope_metric_F(surf, x, y, samples, nav)
    max_res = float(np.max(np.abs(F_check - 1.0)))

    fx, fy = surf.gradient(x, y)
    q = fx * fx + fy * fy
    a = induced_metric(surf, x, y)
    if q > 0.0:
        e1 = -np.array([fx, fy]) / math.sqrt(q * (1.0 + q))
        e2 = np.array([fy, -fx]) / math.sqrt(q)
        frame = np.stack([e1, e2])
    else:
        frame = None
        e1 = np.array([1.0, 0.0])
        e2 = np.array([0.0, 1.0])
    X = a.inner(samples, e1)
    Y = a.inner(samples, e2)
    theta = np.arctan2(Y, X)
    r = np.hypot(X, Y)
    A = np.stack([np.ones_like(theta), np.cos(theta)], axis=-1)
    coef, *_ = np.linalg.lstsq(A, r, rcond=None)
    resid = float(np.max(np.abs(A @ coef - r)))
    return Indicatrix(
        center=(float(x), float(y)),
        samples=samples,
        frame=frame,
        fit=LimaconFit(c0=float(coef[0]), c1=float(coef[1]), max_residual=resid),
        convex=_discrete_convexity(samples),
        max_F_residual=max_res,
    )
