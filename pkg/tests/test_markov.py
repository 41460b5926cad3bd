import math

import numpy as np
import pytest

from oracles import lamb_shift_symmetric_pairs
from sphere_qed.markov import damping_rate, lamb_shift, markov_report
from sphere_qed.resonances import plasmonic_resonance
from sphere_qed.thermal import ThermalConfig

W_Q = plasmonic_resonance(2, 1.0)


def lorentzian(w):
    w = np.asarray(w, dtype=float)
    return 0.05 / ((w - 0.6) ** 2 + 0.05**2) + 0.01 * np.abs(w)


@pytest.mark.parametrize("omega", [-2.5, -0.3, 0.0, 0.4, 1.7, 2.99])
def test_constant_density_closed_form(omega):
    W, c = 3.0, 0.7
    got = lamb_shift(lambda w: np.full_like(np.asarray(w, dtype=float), c), omega, W)
    assert got == pytest.approx(c * math.log(abs((omega + W) / (W - omega))), abs=1e-12)


@pytest.mark.parametrize("omega", [0.55, 0.6, 1.3, -0.8, 0.0])
def test_against_symmetric_hole_lattice(omega):
    want, _ = lamb_shift_symmetric_pairs(lambda _: lorentzian, omega, 3.0, points=200_000)
    got = lamb_shift(lorentzian, omega, 3.0, points=[0.6])
    assert got == pytest.approx(want, rel=1e-6)


def test_odd_density_about_omega_is_finite():
    omega = 0.4
    assert math.isfinite(lamb_shift(lambda w: np.asarray(w) - omega, omega, 2.0))


def test_window_checks():
    with pytest.raises(ValueError):
        lamb_shift(lorentzian, 3.0, 3.0)
    with pytest.raises(ValueError):
        damping_rate(lorentzian, lorentzian, 3.5, ThermalConfig(1.0, 1.0))


def test_damping_is_two_pi_effective_density(drude_baths):
    cfg = ThermalConfig(10.0, 10.0)
    eff = drude_baths.effective(cfg)
    for w in (-0.4, 0.2, W_Q):
        d = damping_rate(drude_baths.medium, drude_baths.scattering, w, cfg)
        assert d.total == pytest.approx(2 * math.pi * eff(np.array([w]))[0], rel=1e-12)
        assert d.total == pytest.approx(d.medium + d.scattering, rel=1e-15)
    cold = damping_rate(drude_baths.medium, drude_baths.scattering, -0.5, ThermalConfig.zero_temperature())
    assert cold.total == 0.0


def test_report_splits_and_ordering(drude_baths):
    cfg = ThermalConfig(10.0, 10.0)
    rep = markov_report(drude_baths, cfg, [W_Q, 0.3])
    assert rep.gamma_M[0] > rep.gamma_S[0]
    assert np.allclose(rep.gamma, rep.gamma_M + rep.gamma_S, rtol=1e-15)
    assert np.allclose(rep.shift, rep.shift_M + rep.shift_S, rtol=1e-15)
    direct = lamb_shift(drude_baths.effective(cfg), W_Q, 3.0, drude_baths.resonance_frequencies())
    assert rep.shift[0] == pytest.approx(direct, rel=1e-8)
    assert np.all(rep.gamma >= 0) and rep.cutoff == 3.0
