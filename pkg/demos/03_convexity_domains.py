"""Where is the slope metric strongly convex?

The criterion phi'(s)^2 < 1/3 carves each surface of revolution into
radial intervals; its height-space twin m'(u)^2 > 3 marks the same set.
Boundary roots are refined by bisection and the criterion residual at each
root is reported.
"""

import math

from slopemetric import (
    TrigProfile,
    cartesian_condition,
    condition_asymptote,
    cone,
    convexity_domain,
    ellipsoid,
    gaussian_bump,
    one_sheet_hyperboloid,
    paraboloid,
    trig_condition,
    two_sheet_hyperboloid,
)

cases = [
    paraboloid(100.0),
    cone(0.5),
    cone(0.7),
    ellipsoid(1.0, 1.0),
    two_sheet_hyperboloid(0.5, 1.0),
    one_sheet_hyperboloid(0.5, 1.0),
    gaussian_bump(),
]

print(f"threshold: phi'^2 < 1/3 = {1 / 3:.12f}\n")
for p in cases:
    dom = convexity_domain(p, resolution=2048, s_max=8.0)
    label = p.kind + (f" a={p.params['a']:g}" if "a" in p.params else "")
    ivals = ", ".join(f"({a:.8f}, {b:.8f})" for a, b in dom.intervals) or "none"
    print(f"{label:22s} convex on: {ivals}")
    for r, res in dom.boundary_roots:
        print(f"{'':22s} boundary root s = {r:.10f}   |phi'^2 - 1/3| = {res:.1e}")
    asym = condition_asymptote(p)
    if asym is not None:
        print(f"{'':22s} large-s behavior: phi'^2 {asym['behavior']}, limit {asym['limit']:g}")

print("\n=== the two profile criteria are reciprocal ===")
parab = paraboloid(100.0)
trig = TrigProfile.from_profile(parab)
for s in (0.1, 0.25, 0.5):
    u = 100.0 - s * s
    c = cartesian_condition(parab, s)
    mu = trig_condition(trig, u)
    print(f"s={s:4.2f}: phi'^2 = {c:.6f}  m'^2 = {mu:10.4f}  product = {c * mu:.10f}")

print("\n=== the bump surface is convex everywhere ===")
trig = TrigProfile.from_profile(gaussian_bump())
u_star = math.exp(-0.5) / (2.0 * math.sqrt(6.0))
print(f"min of m'(u)^2 is {trig_condition(trig, u_star):.4f} at u = {u_star:.6f} (still > 3)")
