import numpy as np
import pytest

from slopemetric import (
    SurfaceOfRevolution,
    cone,
    ellipsoid,
    flat_surface,
    gaussian_bump,
    one_sheet_hyperboloid,
    paraboloid,
    two_sheet_hyperboloid,
)


@pytest.fixture
def parab_surface():
    return SurfaceOfRevolution(paraboloid(100.0))


@pytest.fixture
def flat():
    return flat_surface()


@pytest.fixture
def gauss_surface():
    return SurfaceOfRevolution(gaussian_bump())


def builtin_profiles():
    """All six builtin profiles with the parameter choices used throughout."""
    return [
        paraboloid(100.0),
        cone(0.5),
        ellipsoid(1.0, 1.0),
        two_sheet_hyperboloid(0.5, 1.0),
        one_sheet_hyperboloid(0.5, 1.0),
        gaussian_bump(),
    ]


def interior_radii(profile, n=7):
    """A few radii safely inside the profile domain, away from edges."""
    lo, hi = profile.domain
    hi_eff = min(hi, 5.0)
    pad = 0.05 * (hi_eff - lo)
    return np.linspace(lo + pad, hi_eff - pad, n)


@pytest.fixture(params=builtin_profiles(), ids=lambda p: p.kind)
def builtin_profile(request):
    return request.param
