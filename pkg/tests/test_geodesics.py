"""Geodesic tracing, conservation and convergence order, indicatrix
sampling with the limacon fit, and front propagation."""

import math

import numpy as np
import pytest

from slopemetric import (
    OutOfDomain,
    StepTooLarge,
    SurfaceOfRevolution,
    ZeroVector,
    cone,
    conservation_drift,
    geodesic_shoot,
    indicatrix,
    slope_metric_F,
    wavefront,
)

# slope cosine coefficient at the paraboloid point (0.1, 0):
# k = sqrt(q/(1+q)) with q = |grad f|^2 = 0.04
K_PARAB = 0.19611613513818402


class TestGeodesicShoot:
    def test_flat_straight_line(self, flat):
        path = geodesic_shoot(flat, (0.2, -0.1), (3.0, 4.0), length=1.0, step=1e-2)
        expected = np.array([0.2, -0.1]) + np.outer(path.t, [0.6, 0.8])
        assert np.max(np.abs(path.points - expected)) <= 1e-9
        assert path.status == "complete"

    def test_unit_speed_time_parametrization(self, parab_surface):
        path = geodesic_shoot(parab_surface, (0.1, 0.0), (0.0, 1.0), length=0.2, step=1e-3)
        np.testing.assert_allclose(path.F_values, 1.0, atol=1e-7)
        assert path.status == "complete"
        assert path.t[-1] == pytest.approx(0.2, abs=1e-12)

    def test_conservation_at_reference_step(self, parab_surface):
        path = geodesic_shoot(parab_surface, (0.1, 0.0), (0.0, 1.0), length=0.2, step=1e-3)
        assert path.status == "complete"
        assert conservation_drift(path) <= 1e-6

    def test_fourth_order_convergence(self, parab_surface):
        # halving in the truncation-dominated regime: expect ~16x
        d_coarse = conservation_drift(
            geodesic_shoot(parab_surface, (0.1, 0.0), (0.0, 1.0), length=0.2, step=2e-2)
        )
        d_fine = conservation_drift(
            geodesic_shoot(parab_surface, (0.1, 0.0), (0.0, 1.0), length=0.2, step=1e-2)
        )
        assert d_coarse / d_fine >= 8.0

    def test_stays_in_convex_domain(self, parab_surface):
        # shoot outward; path must halt before the boundary radius
        path = geodesic_shoot(parab_surface, (0.2, 0.0), (-1.0, 0.0), length=1.0, step=1e-3)
        assert path.status == "left_convex_domain"
        radii = np.hypot(path.points[:, 0], path.points[:, 1])
        assert np.all(radii < 1.0 / math.sqrt(12.0))
        assert path.t[-1] < 1.0

    def test_step_too_large(self, parab_surface):
        with pytest.raises(StepTooLarge):
            geodesic_shoot(parab_surface, (0.1, 0.0), (0.0, 1.0), length=0.5, step=5e-2)

    def test_start_outside_domain(self, parab_surface):
        with pytest.raises(OutOfDomain):
            geodesic_shoot(parab_surface, (0.4, 0.0), (0.0, 1.0), length=0.1)

    def test_zero_direction(self, parab_surface):
        with pytest.raises(ZeroVector):
            geodesic_shoot(parab_surface, (0.1, 0.0), (0.0, 0.0), length=0.1)

    def test_reversal_asymmetry(self, parab_surface):
        fwd = geodesic_shoot(parab_surface, (0.1, 0.0), (0.0, 1.0), length=0.3, step=1e-3)
        back = geodesic_shoot(
            parab_surface, fwd.points[-1], -fwd.velocities[-1], length=0.3, step=1e-3
        )
        mid_f = fwd.points[len(fwd.points) // 2]
        mid_b = back.points[len(back.points) // 2]
        # reversed path takes a different route on sloped ground
        assert np.linalg.norm(mid_f - mid_b) > 1e-3
        assert np.linalg.norm(back.points[-1] - fwd.points[0]) > 1e-3


class TestIndicatrix:
    def test_flat_unit_circle(self, flat):
        ind = indicatrix(flat, 0.0, 0.0, n=64)
        assert ind.fit.c0 == pytest.approx(1.0, abs=1e-9)
        assert ind.fit.c1 == pytest.approx(0.0, abs=1e-9)
        assert ind.fit.max_residual <= 1e-9
        assert ind.convex
        assert ind.frame is None
        radii = np.linalg.norm(ind.samples, axis=1)
        np.testing.assert_allclose(radii, 1.0, atol=1e-12)

    def test_unit_norm_residual(self, parab_surface):
        ind = indicatrix(parab_surface, 0.1, 0.0, n=256)
        assert ind.max_F_residual <= 1e-9

    def test_closure(self, parab_surface):
        ind = indicatrix(parab_surface, 0.1, 0.0, n=256)
        gap = np.linalg.norm(ind.samples[0] - ind.samples[-1])
        arc = 2 * math.pi / 256 * np.max(np.linalg.norm(ind.samples, axis=1))
        assert gap <= 1.5 * arc

    def test_limacon_fit_paraboloid(self, parab_surface):
        ind = indicatrix(parab_surface, 0.1, 0.0, n=256)
        assert ind.fit.max_residual <= 1e-6
        assert ind.fit.c0 == pytest.approx(1.0, abs=1e-6)
        assert ind.fit.c1 == pytest.approx(K_PARAB, abs=1e-9)
        assert ind.convex

    def test_max_radius_downhill(self, parab_surface):
        # gradient at (0.1, 0) points to -x, so downhill is +x
        ind = indicatrix(parab_surface, 0.1, 0.0, n=256)
        radii = np.linalg.norm(ind.samples, axis=1)
        best = ind.samples[np.argmax(radii)]
        assert best[0] > 0
        assert abs(best[1]) < 0.1 * best[0]
        # radius ratio downhill/uphill equals F_up/F_down
        Fd = slope_metric_F(parab_surface, 0.1, 0.0, (1.0, 0.0))
        Fu = slope_metric_F(parab_surface, 0.1, 0.0, (-1.0, 0.0))
        assert radii[0] / radii[128] == pytest.approx(Fu / Fd, rel=1e-12)

    def test_frame_orthonormal_in_a(self, parab_surface):
        from slopemetric import induced_metric

        ind = indicatrix(parab_surface, 0.3, -0.2, n=64)
        a = induced_metric(parab_surface, 0.3, -0.2)
        e1, e2 = ind.frame
        assert a.quad(e1) == pytest.approx(1.0, rel=1e-12)
        assert a.quad(e2) == pytest.approx(1.0, rel=1e-12)
        assert a.inner(e1, e2) == pytest.approx(0.0, abs=1e-13)
        # e1 points downhill: positive inner product with -grad
        fx, fy = parab_surface.gradient(0.3, -0.2)
        assert e1 @ np.array([-fx, -fy]) > 0

    def test_nonconvex_flag_steep_cone(self):
        surf = SurfaceOfRevolution(cone(0.7))
        ind = indicatrix(surf, 1.0, 0.0, n=256)
        assert not ind.convex

    def test_convex_flag_mild_cone(self):
        surf = SurfaceOfRevolution(cone(0.4))
        ind = indicatrix(surf, 1.0, 0.0, n=256)
        assert ind.convex


class TestWavefront:
    def test_flat_circles(self, flat):
        wf = wavefront(flat, (0.0, 0.0), total_time=0.5, n_rays=32, step=1e-2, n_fronts=2)
        for front in wf.fronts:
            radii = np.linalg.norm(front.points, axis=1)
            assert np.max(np.abs(radii - front.time)) <= 1e-9
            assert front.complete

    def test_paraboloid_egg_ratio(self, parab_surface):
        wf = wavefront(parab_surface, (0.1, 0.0), total_time=0.05, n_rays=64, step=1e-3)
        pts = wf.fronts[-1].points - np.array([0.1, 0.0])
        reach_down = np.linalg.norm(pts[0])    # ray 0 heads +x (downhill)
        reach_up = np.linalg.norm(pts[32])     # ray 32 heads -x (uphill)
        Fd = slope_metric_F(parab_surface, 0.1, 0.0, (1.0, 0.0))
        Fu = slope_metric_F(parab_surface, 0.1, 0.0, (-1.0, 0.0))
        assert reach_down / reach_up == pytest.approx(Fu / Fd, rel=0.05)
        assert reach_down > reach_up

    def test_gaussian_all_rays_complete(self, gauss_surface):
        # globally convex surface: no ray ever hits a boundary
        wf = wavefront(gauss_surface, (1.0, 0.0), total_time=0.5, n_rays=64, step=1e-3)
        assert all(s == "complete" for s in wf.statuses)
        assert wf.fronts[-1].complete
        assert len(wf.fronts[-1].ray_ids) == 64

    def test_truncated_rays_marked(self, parab_surface):
        wf = wavefront(parab_surface, (0.25, 0.0), total_time=0.3, n_rays=8, step=1e-3)
        assert any(s == "left_convex_domain" for s in wf.statuses)
        last = wf.fronts[-1]
        assert not last.complete
        assert len(last.ray_ids) < 8

    def test_seed_outside_domain(self, parab_surface):
        with pytest.raises(OutOfDomain):
            wavefront(parab_surface, (0.5, 0.0), total_time=0.1)
