"""Profile curves, inversion, and surface gradients."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slopemetric import (
    ApexSingularity,
    ConfigError,
    NotInvertible,
    OutOfDomain,
    OutOfRange,
    SurfaceOfRevolution,
    TrigProfile,
    cone,
    ellipsoid,
    eval_profile,
    gaussian_bump,
    invert_profile,
    one_sheet_hyperboloid,
    paraboloid,
    profile_derivative,
    profile_from_callable,
    surface_from_json,
    two_sheet_hyperboloid,
)
from conftest import interior_radii

GAUSS_PEAK = 0.20412414523193154  # 1/(2*sqrt(6))


class TestEvalProfile:
    def test_paraboloid_hilltop(self):
        assert eval_profile(paraboloid(100.0), 0.0) == 100.0

    def test_cone_apex(self):
        assert eval_profile(cone(1.0), 0.0) == 0.0

    def test_gaussian_peak(self):
        assert eval_profile(gaussian_bump(), 0.0) == pytest.approx(GAUSS_PEAK, abs=1e-15)

    def test_vectorized(self):
        z = eval_profile(paraboloid(100.0), np.array([0.0, 1.0, 2.0]))
        np.testing.assert_allclose(z, [100.0, 99.0, 96.0])

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            eval_profile(ellipsoid(1.0, 1.0), 1.0)  # half-open domain [0, a)
        with pytest.raises(OutOfDomain):
            eval_profile(paraboloid(100.0), -0.1)


class TestProfileDerivative:
    def test_paraboloid(self):
        assert profile_derivative(paraboloid(100.0), 1.0) == pytest.approx(-2.0, rel=1e-14)

    def test_cone_constant_slope(self):
        p = cone(0.5)
        for s in (0.1, 1.0, 17.3):
            assert profile_derivative(p, s) == pytest.approx(0.5, rel=1e-14)

    def test_ellipsoid_axis_symmetry(self):
        assert profile_derivative(ellipsoid(1.0, 1.0), 0.0) == 0.0

    def test_waist_edge_rejected(self):
        with pytest.raises(OutOfDomain):
            profile_derivative(one_sheet_hyperboloid(0.5, 1.0), 1.0)

    def test_closed_vs_central_difference(self, builtin_profile):
        # numeric twin: same curve, derivative by differences only
        numeric = profile_from_callable(
            builtin_profile.phi, builtin_profile.domain, dphi=None, fd_step=1e-5
        )
        for s in interior_radii(builtin_profile):
            d_closed = profile_derivative(builtin_profile, s)
            d_num = profile_derivative(numeric, s)
            assert d_num == pytest.approx(d_closed, rel=1e-6)

    def test_derivative_mode_tag(self):
        assert paraboloid(100.0).derivative_mode == "closed-form"
        numeric = profile_from_callable(lambda s: 1.0 + 0 * s, (0.0, 5.0))
        assert numeric.derivative_mode == "central-difference"


class TestInversion:
    def test_paraboloid_known_heights(self):
        p = paraboloid(100.0)
        assert invert_profile(p, 99.0) == pytest.approx(1.0, abs=1e-10)
        assert invert_profile(p, 100.0) == pytest.approx(0.0, abs=1e-12)

    def test_gaussian_against_independent_bisection(self):
        # oracle: straight bisection of exp(-s^2)/(2 sqrt 6) = u on [0, 5]
        u = math.exp(-0.5) / (2.0 * math.sqrt(6.0))
        lo, hi = 0.0, 5.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if math.exp(-mid * mid) / (2.0 * math.sqrt(6.0)) >= u:
                lo = mid
            else:
                hi = mid
        expected = 0.5 * (lo + hi)  # = 0.7071067811865475
        assert invert_profile(gaussian_bump(), u) == pytest.approx(expected, abs=1e-10)

    def test_gaussian_closed_form_branch(self):
        # second oracle: solving exp(-s^2)/(2 sqrt 6) = u by hand gives
        # s = sqrt(-2 ln(24 u^2)) / 2 on the positive branch
        trig = TrigProfile.from_profile(gaussian_bump())
        for u in (0.02, 0.05, 0.1, 0.15, 0.2):
            expected = math.sqrt(-2.0 * math.log(24.0 * u * u)) / 2.0
            assert trig.m(u) == pytest.approx(expected, abs=1e-10)

    def test_inverse_identity(self, builtin_profile):
        try:
            trig = TrigProfile.from_profile(builtin_profile)
        except NotInvertible:
            pytest.skip("profile not monotone on the default branch")
        for s in interior_radii(builtin_profile):
            u = eval_profile(builtin_profile, s)
            if not (trig.u_range[0] <= u <= trig.u_range[1]):
                continue
            m = trig.m(u)
            assert m == pytest.approx(s, abs=1e-8)
            d = profile_derivative(builtin_profile, s)
            if d != 0.0:
                assert trig.m_prime(u) * d == pytest.approx(1.0, abs=1e-8)

    def test_round_trip_residual(self):
        p = paraboloid(100.0)
        trig = TrigProfile.from_profile(p)
        for u in np.linspace(-50.0, 99.9, 13):
            assert eval_profile(p, trig.m(u)) == pytest.approx(u, abs=1e-8)

    def test_not_invertible(self):
        bump = profile_from_callable(lambda s: np.sin(s), (0.0, 6.0))
        with pytest.raises(NotInvertible):
            TrigProfile.from_profile(bump, (0.5, 4.0))

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            invert_profile(paraboloid(100.0), 101.0)

    def test_negative_branch_rejected(self):
        with pytest.raises((NotInvertible, OutOfDomain)):
            TrigProfile.from_profile(paraboloid(100.0), (-1.0, 1.0))


class TestGradient:
    def test_paraboloid_point(self, parab_surface):
        fx, fy = parab_surface.gradient(0.1, 0.0)
        assert fx == pytest.approx(-0.2, rel=1e-13)
        assert fy == pytest.approx(0.0, abs=1e-15)

    def test_cone_against_finite_differences(self):
        surf = SurfaceOfRevolution(cone(0.5))
        fx, fy = surf.gradient(3.0, 4.0)
        assert (fx, fy) == pytest.approx((0.3, 0.4), rel=1e-13)
        # independent oracle: central differences of (x, y) -> 0.5*hypot(x, y)
        h = 1e-6
        f = lambda x, y: 0.5 * math.hypot(x, y)
        fx_fd = (f(3.0 + h, 4.0) - f(3.0 - h, 4.0)) / (2 * h)
        fy_fd = (f(3.0, 4.0 + h) - f(3.0, 4.0 - h)) / (2 * h)
        assert fx == pytest.approx(fx_fd, abs=1e-9)
        assert fy == pytest.approx(fy_fd, abs=1e-9)

    def test_gradient_norm_matches_profile_slope(self, builtin_profile):
        surf = SurfaceOfRevolution(builtin_profile)
        rng = np.random.default_rng(7)
        for s in interior_radii(builtin_profile):
            th = rng.uniform(0, 2 * np.pi)
            fx, fy = surf.gradient(s * np.cos(th), s * np.sin(th))
            d = profile_derivative(builtin_profile, float(s))
            assert fx * fx + fy * fy == pytest.approx(d * d, rel=1e-12, abs=1e-15)

    def test_rotational_symmetry_closed_form(self, parab_surface):
        s = 0.37
        th = np.linspace(0, 2 * np.pi, 16, endpoint=False)
        fx, fy = parab_surface.gradient(s * np.cos(th), s * np.sin(th))
        q = fx**2 + fy**2
        assert np.max(np.abs(q - q[0])) <= 1e-12

    def test_rotational_symmetry_numeric_profile(self):
        numeric = profile_from_callable(lambda s: 100.0 - np.square(s), (0.0, math.inf))
        surf = SurfaceOfRevolution(numeric)
        s = 0.37
        th = np.linspace(0, 2 * np.pi, 16, endpoint=False)
        fx, fy = surf.gradient(s * np.cos(th), s * np.sin(th))
        q = fx**2 + fy**2
        assert np.max(np.abs(q - q[0])) <= 1e-6

    def test_smooth_axis(self, parab_surface, gauss_surface):
        assert parab_surface.gradient(0.0, 0.0) == (0.0, 0.0)
        assert gauss_surface.gradient(0.0, 0.0) == (0.0, 0.0)

    def test_cone_apex_raises(self):
        surf = SurfaceOfRevolution(cone(0.5))
        with pytest.raises(ApexSingularity):
            surf.gradient(0.0, 0.0)

    @settings(max_examples=30, deadline=None)
    @given(
        s=st.floats(min_value=0.05, max_value=3.0),
        th=st.floats(min_value=0.0, max_value=2 * math.pi),
    )
    def test_two_sheet_gradient_norm_property(self, s, th):
        p = two_sheet_hyperboloid(0.5, 1.0)
        surf = SurfaceOfRevolution(p)
        fx, fy = surf.gradient(s * math.cos(th), s * math.sin(th))
        d = profile_derivative(p, s)
        assert fx * fx + fy * fy == pytest.approx(d * d, rel=1e-12, abs=1e-15)


class TestSurfaceFromJson:
    def test_builtin_kinds(self):
        surf = surface_from_json({"kind": "paraboloid", "params": {"h": 100}})
        assert surf.kind == "paraboloid"
        assert surf.height(0.0, 0.0) == 100.0
        surf = surface_from_json('{"kind": "gaussian", "params": {}}')
        assert surf.height(0.0, 0.0) == pytest.approx(GAUSS_PEAK)

    def test_domain_override(self):
        surf = surface_from_json({"kind": "cone", "params": {"a": 0.5}, "domain": [0, 2]})
        assert surf.profile.domain == (0.0, 2.0)
        with pytest.raises(OutOfDomain):
            eval_profile(surf.profile, 3.0)

    def test_custom_table_cubic(self):
        s = np.linspace(0.0, 2.0, 80)
        table = [[float(a), float(100.0 - a * a)] for a in s]
        surf = surface_from_json({"kind": "custom", "params": {"table": table}})
        assert surf.height(0.5, 0.0) == pytest.approx(99.75, abs=1e-9)
        assert profile_derivative(surf.profile, 0.5) == pytest.approx(-1.0, abs=1e-7)

    def test_custom_table_too_short(self):
        table = [[0.0, 1.0], [1.0, 2.0]]
        with pytest.raises(ConfigError):
            surface_from_json({"kind": "custom", "params": {"table": table}})

    def test_custom_table_not_monotone(self):
        s = np.r_[np.linspace(0, 1, 40), np.linspace(0.9, 1.5, 30)]
        table = [[float(a), 0.0] for a in s]
        with pytest.raises(ConfigError):
            surface_from_json({"kind": "custom", "params": {"table": table}})

    def test_bad_descriptions(self):
        with pytest.raises(ConfigError):
            surface_from_json({"kind": "dodecahedron"})
        with pytest.raises(ConfigError):
            surface_from_json('{"kind": ')
        with pytest.raises(ConfigError):
            surface_from_json({"kind": "cone", "params": {"radius": 1.0}})
        with pytest.raises(ConfigError):
            surface_from_json(json.dumps({"kind": "cone", "params": {"a": -1.0}}))
