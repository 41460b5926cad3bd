import math

import numpy as np
import pytest

from sphere_qed.exceptions import QuadratureError
from sphere_qed.quadrature import integrate


def test_polynomial_exact_on_one_panel():
    res = integrate(lambda x: 7 * x**13 - x**4 + 2, -1.0, 2.0)
    exact = 2**14 / 2 - 1 / 2 - (32 / 5 + 1 / 5) + 6
    assert res.value == pytest.approx(exact, rel=1e-14)
    assert res.panels == 1 and res.evaluations == 15


@pytest.mark.parametrize(
    "f,a,b,exact",
    [
        (np.sin, 0.0, math.pi, 2.0),
        (np.sqrt, 0.0, 1.0, 2 / 3),
        (lambda x: 1 / (1 + 1e4 * (x - 0.3) ** 2), 0.0, 1.0, (math.atan(70) + math.atan(30)) / 100),
        (lambda x: np.log(np.abs(x - 0.25)), 0.0, 1.0, 0.75 * math.log(0.75) + 0.25 * math.log(0.25) - 1),
    ],
)
def test_known_integrals(f, a, b, exact):
    res = integrate(f, a, b, points=(0.25,), atol=1e-11)
    assert abs(res.value - exact) <= 2e-11


def test_vector_valued_integrand():
    t = np.array([0.0, 1.0, 3.0])
    res = integrate(lambda w: np.exp(-1j * np.outer(w, t)), -1.0, 1.0, atol=1e-12)
    expected = np.array([2.0, 2 * math.sin(1.0), 2 * math.sin(3.0) / 3])
    assert np.allclose(res.value, expected, atol=1e-12, rtol=0)


def test_breakpoints_outside_are_ignored():
    res = integrate(lambda x: x, 0.0, 1.0, points=(-3.0, 0.0, 1.0, 7.0))
    assert res.panels == 1 and res.value == pytest.approx(0.5)


def test_failures_are_raised():
    with pytest.raises(QuadratureError):
        integrate(lambda x: 1 / x, 0.0, 1.0, atol=1e-10)
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.sin(1e6 * x), 0.0, 1.0, atol=1e-12, max_panels=100)
    with pytest.raises(ValueError):
        integrate(np.sin, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate(np.sin, 0.0, np.inf)


def test_relative_tolerance():
    res = integrate(lambda x: 1e12 * np.exp(x), 0.0, 1.0, atol=0.0, rtol=1e-13)
    assert res.value == pytest.approx(1e12 * (math.e - 1), rel=1e-13)
