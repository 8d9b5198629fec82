"""Brute force against the analytic criterion.

The direction-dependent metric tensor g_ij (half the direction Hessian of
F^2) must be positive definite exactly where the pointwise criterion
|grad f|^2 < 1/3 says so.  The oracle sweeps a fan of directions plus the
steepest-uphill angle and checks eigenvalue signs; verify_equivalence then
tallies agreement across every route on random samples.
"""

import math

import numpy as np

from slopemetric import (
    SamplePlan,
    SurfaceOfRevolution,
    fundamental_tensor,
    paraboloid,
    pd_oracle,
    verify_equivalence,
)

surf = SurfaceOfRevolution(paraboloid(100.0))
boundary = 1.0 / math.sqrt(12.0)

print("=== fundamental tensor across the convexity boundary ===")
for s in (0.15, 0.25, boundary + 1e-3, 0.35):
    g = fundamental_tensor(surf, s, 0.0, np.array([-1.0, 0.0]))  # uphill direction
    lo, hi = g.eigenvalues()
    side = "inside " if s < boundary else "outside"
    print(f"s = {s:.6f} ({side}): eigenvalues of g = ({lo:+.5f}, {hi:+.5f})")

print("\n=== oracle vs criterion near the boundary ===")
for ds in (-5e-3, -1e-3, 1e-3, 5e-3):
    s = boundary + ds
    verdict = pd_oracle(surf, s, 0.0)
    print(f"s = boundary {ds:+8.0e}:  positive definite in every direction? {verdict}")

print("\n=== random-sample agreement of all four routes ===")
plan = SamplePlan(n_points=300, seed=42, band=1e-3, s_range=(0.0, 1.0))
rep = verify_equivalence(surf, plan)
print(f"samples: {rep.samples}   agreements: {rep.agreements}   "
      f"disagreements: {len(rep.disagreements)}   worst margin to 1/3: {rep.worst_margin:.2e}")

print("\n=== a deliberately wrong threshold is caught ===")
rep_bad = verify_equivalence(
    SurfaceOfRevolution(paraboloid(100.0, s_max=1.0)),
    SamplePlan(n_points=300, seed=42, threshold=0.5),
)
print(f"with threshold corrupted to 0.5: {len(rep_bad.disagreements)} disagreements "
      f"(the Hessian oracle refuses to follow)")
