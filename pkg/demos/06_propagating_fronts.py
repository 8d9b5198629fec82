"""Huygens-style front propagation on sloped terrain.

A front expanding at unit F-speed from a point models the leading edge of a
spreading process (a fire line on a hillside): circles on level ground,
eggs stretched toward the downhill side on a slope.  Rays that reach the
strong-convexity boundary are truncated and reported.
"""

import numpy as np

from slopemetric import (
    SurfaceOfRevolution,
    flat_surface,
    gaussian_bump,
    paraboloid,
    slope_metric_F,
    wavefront,
)

print("=== level ground: concentric circles ===")
wf = wavefront(flat_surface(), (0.0, 0.0), total_time=0.5, n_rays=32, step=5e-3, n_fronts=2)
for front in wf.fronts:
    radii = np.hypot(front.points[:, 0], front.points[:, 1])
    print(f"t = {front.time:.2f}: radius {radii.mean():.6f} +- {radii.std():.1e}")

print("\n=== east slope of the hill: the front is an egg ===")
surf = SurfaceOfRevolution(paraboloid(100.0))
seed = (0.1, 0.0)
wf = wavefront(surf, seed, total_time=0.05, n_rays=64, step=1e-3)
front = wf.fronts[-1]
rel = front.points - np.asarray(seed)
down = np.linalg.norm(rel[0])    # ray 0 points +x, downhill here
up = np.linalg.norm(rel[32])     # ray 32 points -x, uphill
Fd = slope_metric_F(surf, *seed, (1.0, 0.0))
Fu = slope_metric_F(surf, *seed, (-1.0, 0.0))
print(f"reach downhill {down:.5f} vs uphill {up:.5f}: ratio {down / up:.4f}")
print(f"predicted from the metric, F(uphill)/F(downhill) = {Fu / Fd:.4f}")

print("\n=== bump surface: globally convex, every ray completes ===")
bump = SurfaceOfRevolution(gaussian_bump())
wf = wavefront(bump, (1.0, 0.0), total_time=0.5, n_rays=64, step=1e-3, n_fronts=3)
print(f"ray statuses: {sorted(set(wf.statuses))}")
for front in wf.fronts:
    print(f"t = {front.time:.3f}: front carries {len(front.ray_ids)}/64 rays, complete: {front.complete}")

print("\n=== near the convexity boundary rays drop out ===")
wf = wavefront(surf, (0.25, 0.0), total_time=0.3, n_rays=16, step=1e-3)
n_cut = sum(s != "complete" for s in wf.statuses)
print(f"{n_cut}/16 rays truncated at the boundary; final front carries "
      f"{len(wf.fronts[-1].ray_ids)} rays")
