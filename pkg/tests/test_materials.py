import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphere_qed.exceptions import ConfigError
from sphere_qed.materials import (
    SPEED_OF_LIGHT,
    Debye,
    Drude,
    Vacuum,
    characteristic_density,
    permittivity,
    reduced_permittivity,
    reference_wavenumber,
)


def test_drude_zero_at_plasma_frequency():
    assert permittivity(Drude(3e15), 3e15) == pytest.approx(0, abs=1e-15)


def test_debye_static_and_relaxation_limits():
    tau = 1e-14
    m = Debye(15.0, tau)
    assert permittivity(m, 1e-3) == pytest.approx(16.0, rel=1e-12)
    assert permittivity(m, 1 / tau) == pytest.approx(1 + 15 * (1 + 1j) / 2, rel=1e-14)


def test_vector_input_and_bad_frequency():
    w = np.array([1e14, 2e14])
    assert permittivity(Drude(1e15, 1e13), w).shape == (2,)
    with pytest.raises(ValueError):
        permittivity(Drude(1e15), 0.0)
    with pytest.raises(ValueError):
        permittivity(Debye(2.0), -1.0)


def test_invariants_rejected():
    with pytest.raises(ConfigError):
        Drude(-1.0)
    with pytest.raises(ConfigError):
        Drude(1.0, -0.1)
    with pytest.raises(ConfigError):
        Debye(0.0)
    with pytest.raises(ConfigError):
        Debye(1.0, -1.0)


def test_reference_wavenumbers():
    a = 50e-9
    assert reference_wavenumber(Drude(2e15), a) == pytest.approx(2e15 / SPEED_OF_LIGHT)
    assert reference_wavenumber(Debye(15.0), a) * a == pytest.approx(1 / math.sqrt(15), rel=1e-14)
    # commonly quoted rounded to 0.25
    assert reference_wavenumber(Debye(15.0), a) * a == pytest.approx(0.2582, abs=1e-4)
    assert reference_wavenumber(Vacuum(1e15), a) == pytest.approx(1e15 / SPEED_OF_LIGHT)


def test_characteristic_density_scales_with_dipole_squared():
    m, a = Drude(SPEED_OF_LIGHT / 50e-9), 50e-9
    n1 = characteristic_density(m, 1e-29, a)
    n2 = characteristic_density(m, 2e-29, a)
    assert n2.characteristic_density / n1.characteristic_density == pytest.approx(4.0, rel=1e-14)
    assert n1.size_parameter == pytest.approx(1.0, rel=1e-14)
    assert n1.coupling_strength == pytest.approx(n1.characteristic_density / n1.reference_frequency)


def test_reduced_permittivity_uses_reference_frequency():
    m, a = Drude(SPEED_OF_LIGHT / 50e-9, 0.01 * SPEED_OF_LIGHT / 50e-9), 50e-9
    assert reduced_permittivity(m, a, 1.0) == pytest.approx(1 - 1 / (1 + 0.01j), rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.floats(1e-4, 1.0), st.floats(0.1, 100), st.floats(1e-4, 10))
def test_passivity(w, nu, chi0, tau):
    assert permittivity(Drude(1.0, nu), w).imag >= 0
    assert permittivity(Debye(chi0, tau), w).imag >= 0


@pytest.mark.parametrize("nu", [0.0, 0.01, 0.3])
def test_drude_high_frequency_bound(nu):
    wp = 1.0
    w = 1e3 * wp
    eps = permittivity(Drude(wp, nu), w)
    assert abs(eps - 1) <= (1 + 1e-9) * ((wp / w) ** 2 + nu * wp**2 / w**3)
    assert abs(permittivity(Debye(15.0, 1.0), w) - 1) < 0.02
