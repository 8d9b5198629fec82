"""Where the slope metric is strongly convex, decided by three routes.

The pointwise criterion f_x^2 + f_y^2 < 1/3 (gradient route), the profile
criteria phi'(s)^2 < 1/3 and m'(u)^2 > 3 (profile routes), and a
brute-force positive-definiteness sweep of the direction Hessian (oracle
route) must all agree; ``verify_equivalence`` samples surfaces at random
and reports any disagreement instead of raising.

Scans and sweeps are embarrassingly parallel over points; every callee is
pure, and reports are assembled by a single aggregator afterwards.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DerivativeBlowupWarning,
    DoubleRootWarning,
    InsufficientDirections,
    NonDifferentiable,
    OutOfDomain,
    OutOfRange,
)
from .metric import NORMALIZED, NavigationParams, hessian_field
from .surfaces import (
    ProfileCurve,
    SurfaceOfRevolution,
    SurfaceSpec,
    TrigProfile,
    profile_derivative,
)

__all__ = [
    "THRESHOLD",
    "DEFAULT_SCAN_SMAX",
    "Verdict",
    "ConvexityDomain",
    "SamplePlan",
    "EquivalenceReport",
    "is_strongly_convex_at",
    "cartesian_condition",
    "trig_condition",
    "convexity_domain",
    "condition_asymptote",
    "pd_oracle",
    "verify_equivalence",
]

# Strong convexity holds where the squared gradient norm stays below 1/3.
THRESHOLD = 1.0 / 3.0

# Criterion values within +-this of the threshold are ruled indeterminate.
CRITERION_BAND = 1e-9

# Unbounded profile domains are clipped to this radius for scanning.
DEFAULT_SCAN_SMAX = 100.0


class Verdict(enum.Enum):
    CONVEX = "true"
    NOT_CONVEX = "false"
    INDETERMINATE = "indeterminate"

    def __bool__(self):  # pragma: no cover - guard against accidental truthiness
        raise TypeError("compare Verdict members explicitly; indeterminate is not False")


def is_strongly_convex_at(surf: SurfaceSpec, x, y, band: float = CRITERION_BAND,
                          threshold: float = THRESHOLD) -> Verdict:
    """Pointwise verdict from the gradient criterion f_x^2 + f_y^2 < threshold."""
    fx, fy = surf.gradient(x, y)
    q = fx * fx + fy * fy
    if q < threshold - band:
        return Verdict.CONVEX
    if q > threshold + band:
        return Verdict.NOT_CONVEX
    return Verdict.INDETERMINATE


def cartesian_condition(p: ProfileCurve, s):
    """phi'(s)^2; the metric is strongly convex at radius s iff this < 1/3."""
    d = profile_derivative(p, s)
    out = np.square(d)
    return float(out) if np.ndim(out) == 0 else out


def trig_condition(t: TrigProfile, u):
    """m'(u)^2; the metric is strongly convex at height u iff this > 3.

    Where the Cartesian slope vanishes (hilltop, bump peak) m' diverges and
    the condition holds by limit: returns +inf and warns.
    """
    mp = t.m_prime(u)
    arr = np.asarray(mp)
    if np.any(np.isinf(arr)):
        warnings.warn(
            "m'(u) diverges where the profile slope vanishes; condition holds by limit",
            DerivativeBlowupWarning,
            stacklevel=2,
        )
    out = np.square(arr)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ConvexityDomain:
    """Radial intervals where the strong-convexity condition holds.

    ``variable`` tags the parametrization: "s" for the Cartesian radius
    (condition phi'^2 < threshold) or "u" for the height (m'^2 > 1/threshold).
    ``boundary_roots`` carries (location, residual) with residual the
    distance of the criterion from the threshold at the refined root.
    """

    variable: str
    intervals: tuple[tuple[float, float], ...]
    boundary_roots: tuple[tuple[float, float], ...]
    scan_range: tuple[float, float]
    resolution: int
    threshold: float = THRESHOLD

    @property
    def is_entire(self) -> bool:
        """Condition holds on the whole scanned range (no interior boundary)."""
        if len(self.intervals) != 1 or self.boundary_roots:
            return False
        lo, hi = self.scan_range
        (a, b), = self.intervals
        return a <= lo and b >= hi

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, s: float) -> bool:
        return any(a < s < b for a, b in self.intervals)

    def to_dict(self) -> dict:
        return {
            "variable": self.variable,
            "threshold": self.threshold,
            "intervals": [[a, b] for a, b in self.intervals],
            "boundary_roots": [{"location": r, "residual": res} for r, res in self.boundary_roots],
            "scan_range": list(self.scan_range),
            "resolution": self.resolution,
            "entire": self.is_entire,
        }


def _bisect_root(fn, a: float, b: float, fa: float) -> float:
    """Refine a bracketed sign change of fn to ~1e-13 relative width."""
    for _ in range(200):
        mid = 0.5 * (a + b)
        if (b - a) <= 1e-13 * max(1.0, abs(mid)):
            return mid
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fa < 0) == (fm < 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def convexity_domain(p: ProfileCurve, resolution: int = 1024, s_max: float | None = None,
                     threshold: float = THRESHOLD) -> ConvexityDomain:
    """Scan phi'^2 - threshold, bracket sign changes, bisect each boundary root.

    The scan grid is uniform with ``resolution`` panels (>= 64); unbounded
    domains are clipped to ``s_max`` (default 100).  Emits DoubleRootWarning
    when the criterion grazes the threshold without a clean crossing.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    lo, hi = p.domain
    hi_eff = min(hi, s_max if s_max is not None else DEFAULT_SCAN_SMAX)
    if math.isfinite(hi) and hi_eff >= hi:
        hi_eff = hi - max(1e-12, (hi - lo) * 1e-9)
    if not hi_eff > lo:
        raise OutOfDomain(f"empty scan range [{lo}, {hi_eff}]")
    lo_eff = lo
    try:
        profile_derivative(p, lo_eff)
    except (OutOfDomain, NonDifferentiable):
        lo_eff = lo + (hi_eff - lo) * 1e-9
    grid = np.linspace(lo_eff, hi_eff, resolution + 1)
    cond = np.square(np.asarray(profile_derivative(p, grid), dtype=float))
    c = cond - threshold

    def crit(s: float) -> float:
        return float(profile_derivative(p, s)) ** 2 - threshold

    roots: list[float] = []
    for i in range(resolution):
        ci, cj = c[i], c[i + 1]
        if ci == 0.0:
            roots.append(float(grid[i]))
        elif (ci < 0) != (cj < 0):
            roots.append(_bisect_root(crit, float(grid[i]), float(grid[i + 1]), ci))
    if c[-1] == 0.0:
        roots.append(float(grid[-1]))
    roots = sorted(set(roots))

    # tangential grazing: a strict local extremum hugging the threshold with
    # no crossing (a constant near-threshold profile is not a double root)
    interior = np.arange(1, resolution)
    is_min = (np.abs(c[interior]) < np.abs(c[interior - 1])) & (np.abs(c[interior]) < np.abs(c[interior + 1]))
    same_sign = ((c[interior - 1] < 0) == (c[interior] < 0)) & ((c[interior + 1] < 0) == (c[interior] < 0))
    grazing = is_min & same_sign & (np.abs(c[interior]) < 1e-6) & (c[interior] != 0.0)
    if np.any(grazing):
        s_graze = grid[interior[grazing]][0]
        warnings.warn(
            f"criterion grazes the threshold near s={s_graze:.6g}; double root suspected",
            DoubleRootWarning,
            stacklevel=2,
        )

    # assemble intervals where the condition holds (criterion below threshold)
    cuts = [float(grid[0])] + roots + [float(grid[-1])]
    intervals: list[tuple[float, float]] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0:
            continue
        mid = 0.5 * (a + b)
        if crit(mid) < 0:
            a_rep = lo if a == float(grid[0]) and lo_eff != lo else a
            if intervals and intervals[-1][1] == a:
                intervals[-1] = (intervals[-1][0], b)
            else:
                intervals.append((a_rep, b))
    boundary = tuple((r, abs(crit(r))) for r in roots)
    return ConvexityDomain(
        variable="s",
        intervals=tuple(intervals),
        boundary_roots=boundary,
        scan_range=(float(grid[0]), float(grid[-1])),
        resolution=resolution,
        threshold=threshold,
    )


def condition_asymptote(p: ProfileCurve) -> dict | None:
    """Known large-s limit of phi'^2 for builtin profiles with unbounded domains."""
    params = p.params
    if p.kind == "cone":
        return {"limit": params["a"] ** 2, "behavior": "constant"}
    if p.kind == "hyperboloid2":
        return {"limit": params["a"] ** 2, "behavior": "increasing to the limit"}
    if p.kind == "hyperboloid1":
        return {"limit": params["a"] ** 2, "behavior": "decreasing to the limit"}
    if p.kind == "gaussian":
        return {"limit": 0.0, "behavior": "decaying to zero"}
    if p.kind == "paraboloid":
        return {"limit": math.inf, "behavior": "unbounded growth"}
    return None


def _unit_directions(n: int) -> np.ndarray:
    th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return np.stack([np.cos(th), np.sin(th)], axis=-1)


def _pd_margins(surf, x, y, dirs, nav, step):
    g11, g12, g22 = hessian_field(surf, x, y, dirs, nav, step=step, order=2)
    return g11 + g22, g11 * g22 - g12 * g12


def pd_oracle(surf: SurfaceSpec, x, y, nav: NavigationParams | None = None,
              n_directions: int = 64, step: float = 1e-4,
              include_uphill: bool = True) -> bool:
    """Brute-force positive definiteness of g_ij over a fan of directions.

    Sweeps ``n_directions`` equally spaced angles and requires trace > 0 and
    det > 0 for every one.  Convexity of the slope metric is lost first along
    the steepest-uphill direction, and just past the breakdown the indefinite
    cone around it is narrower than any fixed angular spacing, so by default
    the uphill angle joins the fan; the verdict still rests purely on
    Hessian eigenvalue signs.
    """
    if n_directions < 8:
        raise InsufficientDirections("need at least 8 directions for a meaningful sweep")
    nav = nav or NORMALIZED
    dirs = _unit_directions(n_directions)
    if include_uphill:
        fx, fy = surf.gradient(x, y)
        q = fx * fx + fy * fy
        if q > 0.0:
            up = np.array([[fx, fy]]) / math.sqrt(q)
            dirs = np.concatenate([dirs, up], axis=0)
    tr, det = _pd_margins(surf, x, y, dirs, nav, step)
    return bool(np.all(tr > 0.0) and np.all(det > 0.0))


@dataclass(frozen=True)
class SamplePlan:
    """How ``verify_equivalence`` draws its random sample of surface points.

    ``band`` excludes points within that radial distance of any predicted
    convexity boundary; ``threshold`` is a test hook that corrupts the
    analytic routes (the Hessian oracle never sees it).
    """

    n_points: int = 200
    seed: int = 0
    band: float = 1e-3
    n_directions: int = 64
    s_range: tuple[float, float] | None = None
    bbox: tuple[float, float, float, float] | None = None
    threshold: float = THRESHOLD
    hessian_step: float = 1e-4


@dataclass
class EquivalenceReport:
    """Agreement tally among the analytic, profile and Hessian-oracle routes."""

    surface: str
    samples: int
    band: float
    seed: int
    agreements: int = 0
    disagreements: list = field(default_factory=list)
    indeterminate: int = 0
    trig_skipped: int = 0
    worst_margin: float = math.inf

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "samples": self.samples,
            "band": self.band,
            "seed": self.seed,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "indeterminate": self.indeterminate,
            "trig_skipped": self.trig_skipped,
            "worst_margin": self.worst_margin,
        }


def _revolution_sample_range(surf: SurfaceOfRevolution, plan: SamplePlan) -> tuple[float, float]:
    if plan.s_range is not None:
        return plan.s_range
    lo, hi = surf.profile.domain
    hi_eff = min(hi, DEFAULT_SCAN_SMAX)
    if math.isfinite(hi) and hi_eff >= hi:
        hi_eff = hi * (1 - 1e-9) if hi > 0 else hi - 1e-12
    lo_eff = lo
    try:
        profile_derivative(surf.profile, lo_eff)
        if lo == 0.0 and not surf.apex_smooth:
            lo_eff = max(plan.band, 1e-6)
    except (OutOfDomain, NonDifferentiable):
        lo_eff = lo + max(plan.band, (hi_eff - lo) * 1e-6)
    return (lo_eff, hi_eff)


def verify_equivalence(surf: SurfaceSpec, plan: SamplePlan | None = None,
                       nav: NavigationParams | None = None) -> EquivalenceReport:
    """Randomly sample the surface and tally agreement among all routes.

    For each sampled point the gradient criterion, the Cartesian profile
    condition, the height-parametrized condition (where the profile branch
    is invertible) and the Hessian-eigenvalue oracle each issue a verdict;
    any two definite verdicts that differ count as a disagreement (reported,
    never raised).  Indeterminate verdicts are tallied separately.
    """
    plan = plan or SamplePlan()
    nav = nav or NORMALIZED
    rng = np.random.default_rng(plan.seed)
    is_rev = isinstance(surf, SurfaceOfRevolution)
    report = EquivalenceReport(
        surface=getattr(surf, "kind", "graph"),
        samples=plan.n_points,
        band=plan.band,
        seed=plan.seed,
    )

    roots: tuple[float, ...] = ()
    trig: TrigProfile | None = None
    if is_rev:
        s_lo, s_hi = _revolution_sample_range(surf, plan)
        dom = convexity_domain(surf.profile, s_max=s_hi, threshold=plan.threshold)
        roots = tuple(r for r, _ in dom.boundary_roots)
        try:
            trig = TrigProfile.from_profile(surf.profile)
        except Exception:
            trig = None
    else:
        bbox = plan.bbox or surf.bounding_box()

    for _ in range(plan.n_points):
        for _attempt in range(1000):
            if is_rev:
                s = rng.uniform(s_lo, s_hi)
                if any(abs(s - r) <= plan.band for r in roots):
                    continue
                th = rng.uniform(0.0, 2.0 * math.pi)
                x, y = s * math.cos(th), s * math.sin(th)
            else:
                x = rng.uniform(bbox[0], bbox[1])
                y = rng.uniform(bbox[2], bbox[3])
                s = math.hypot(x, y)
            break
        else:
            raise RuntimeError("could not sample a point outside the exclusion band")

        verdicts: dict[str, bool | None] = {}
        analytic = is_strongly_convex_at(surf, x, y, threshold=plan.threshold)
        verdicts["analytic"] = (
            None if analytic is Verdict.INDETERMINATE else analytic is Verdict.CONVEX
        )
        if verdicts["analytic"] is None:
            report.indeterminate += 1

        fx, fy = surf.gradient(x, y)
        report.worst_margin = min(report.worst_margin, abs(fx * fx + fy * fy - plan.threshold))

        if is_rev:
            cond = cartesian_condition(surf.profile, s)
            verdicts["cartesian"] = bool(cond < plan.threshold)
            mu = None
            if trig is not None:
                try:
                    u = float(surf.profile.phi(s))
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", DerivativeBlowupWarning)
                        mu = trig_condition(trig, u)
                except (OutOfRange, OutOfDomain):
                    mu = None
            if mu is None:
                report.trig_skipped += 1
                verdicts["trig"] = None
            else:
                verdicts["trig"] = bool(mu > 1.0 / plan.threshold)

        verdicts["hessian"] = pd_oracle(
            surf, x, y, nav, n_directions=plan.n_directions, step=plan.hessian_step
        )

        definite = [v for v in verdicts.values() if v is not None]
        if all(definite) or not any(definite):
            report.agreements += 1
        else:
            report.disagreements.append({
                "x": x,
                "y": y,
                "s": s,
                "predicates": {k: v for k, v in verdicts.items()},
            })
    return report
