import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import simpson

from adaptmc.integrands import (disc_indicator, gaussian, gaussian_integral_1d,
                                registry_lookup)


def simpson_gauss_1d(alpha, intervals=10**6):
    t = np.linspace(0.0, 1.0, intervals + 1)
    return simpson(np.exp(-alpha * t * t), x=t)


@pytest.mark.parametrize("x, expected", [((0.5, 0.5), 1.0), ((0.95, 0.95), 0.0), ((0.6, 0.8), 1.0)])
def test_disc_indicator(x, expected):
    assert disc_indicator(np.array(x)) == expected


def test_disc_is_binary():
    x = np.random.default_rng(0).random((1000, 2))
    assert set(np.unique(disc_indicator(x))) <= {0.0, 1.0}


def test_gaussian_origin():
    for alpha in (0.5, 5, 50, 100):
        assert gaussian(np.zeros(3), alpha) == 1.0


def test_gaussian_rejects_nonpositive_alpha():
    with pytest.raises(ValueError, match="positive alpha"):
        gaussian(np.zeros(2), -50)
    with pytest.raises(ValueError):
        registry_lookup("gauss2d", alpha=0)


@pytest.mark.parametrize("alpha", [5.0, 10.0, 50.0, 100.0])
def test_gaussian_exact_vs_simpson(alpha):
    assert gaussian_integral_1d(alpha) == pytest.approx(simpson_gauss_1d(alpha), abs=1e-10)


def test_gauss2d_registry_exact():
    f = registry_lookup("gauss2d", alpha=50)
    assert f.dim == 2
    assert f.exact_value == pytest.approx(simpson_gauss_1d(50.0) ** 2, abs=1e-10)
    assert registry_lookup("gauss3d", alpha=50).exact_value == pytest.approx(
        simpson_gauss_1d(50.0) ** 3, abs=1e-10)


@given(st.lists(st.floats(0, 0.999), min_size=3, max_size=3),
       st.lists(st.floats(0, 1), min_size=3, max_size=3), st.floats(0.1, 100))
def test_gaussian_radially_monotone(x, scale, alpha):
    x = np.array(x)
    y = x * np.array(scale)  # |y_k| <= |x_k|
    assert gaussian(y, alpha) >= gaussian(x, alpha)


def test_pure():
    x = np.random.default_rng(3).random((50, 2))
    for name in ("disc", "gauss2d", "const"):
        f = registry_lookup(name)
        assert np.array_equal(f(x), f(x))


def test_registry():
    d = registry_lookup("disc")
    assert d.dim == 2 and d.exact_value == math.pi / 4
    c = registry_lookup("const", c=7)
    assert c.exact_value == 7.0 and c(np.array([0.1, 0.2])) == 7.0
    g = registry_lookup("gaussNd", alpha=2.0, dim=4)
    assert g.dim == 4 and g.exact_value == pytest.approx(gaussian_integral_1d(2.0) ** 4)


def test_registry_unknown():
    with pytest.raises(ValueError, match="available: const, disc"):
        registry_lookup("sinc")
