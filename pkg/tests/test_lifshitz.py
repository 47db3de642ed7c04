import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from casimir_modes.dielectric import DrudeLorentzModel, PerfectMirror, Vacuum, make_ohmic_bath
from casimir_modes.errors import DomainError
from casimir_modes.lifshitz import (EnergyResult, Route, energy_zero_T, free_energy_matsubara,
                                    free_energy_real_frequency, log_g_real_axis, pressure)
from casimir_modes.planar import TE, TM, PlanarCavity

CASIMIR = -math.pi ** 2 / 720


def brute_force_matsubara(wp, gamma, tau, L, l_max=2000, nk=10 ** 4, k_max=40.0):
    """Direct double sum: Matsubara index up to ``l_max``, trapezoid in ``k``."""
    k = np.linspace(0.0, k_max, nk)[1:]
    h = k[0]
    total = 0.0
    for l in range(l_max + 1):
        xi = l * tau
        kap = np.sqrt(k * k + xi * xi)
        if l == 0:
            # static limit: TE reflection vanishes, TM is one
            rte2, rtm2 = np.zeros_like(k), np.ones_like(k)
        else:
            e = 1 + wp ** 2 / (xi * (xi + gamma))
            km = np.sqrt(k * k + e * xi * xi)
            rte2 = ((kap - km) / (kap + km)) ** 2
            rtm2 = ((e * kap - km) / (e * kap + km)) ** 2
        decay = np.exp(-2 * kap * L)
        f = k * (np.log1p(-rte2 * decay) + np.log1p(-rtm2 * decay))
        # the k = 0 end contributes zero
        integral = h * (f.sum() - 0.5 * f[-1]) / (2 * math.pi)
        total += (0.5 if l == 0 else 1.0) * integral
    return tau / (2 * math.pi) * total


def test_energy_result_invariants():
    with pytest.raises(ValueError):
        EnergyResult(1.0, Route.ZERO_T, -1.0)
    assert EnergyResult(1.0, "matsubara").route is Route.MATSUBARA


# ------------------------------------------------------------- Matsubara

def test_matsubara_vacuum():
    assert free_energy_matsubara(PlanarCavity(1.0, Vacuum(), temperature_wavenumber=0.5)).value == 0


def test_matsubara_needs_temperature():
    with pytest.raises(DomainError):
        free_energy_matsubara(PlanarCavity(1.0, PerfectMirror()))


def test_matsubara_perfect_mirror_low_temperature():
    r = free_energy_matsubara(PlanarCavity(1.0, PerfectMirror(), temperature_wavenumber=0.01))
    assert abs(r.value / CASIMIR - 1) < 1e-3
    assert r.metadata["terms"] > 100


def test_matsubara_against_brute_force():
    wp, gamma, tau, L = 10.0, 0.1, 0.1, 1.0
    r = free_energy_matsubara(PlanarCavity(L, DrudeLorentzModel(wp, 0.0, gamma),
                                           temperature_wavenumber=tau))
    oracle = brute_force_matsubara(wp, gamma, tau, L)
    assert r.value < 0
    assert abs(r.value / oracle - 1) < 1e-5
    assert r.abs_error < 1e-8 * abs(r.value)


def test_matsubara_approaches_zero_temperature():
    m = DrudeLorentzModel(5.0, 0.0, 0.5)
    E0 = energy_zero_T(PlanarCavity(1.0, m)).value
    gaps = [abs(free_energy_matsubara(PlanarCavity(1.0, m, temperature_wavenumber=t)).value - E0)
            for t in (0.3, 0.1, 0.03)]
    assert gaps[0] > gaps[1] > gaps[2]


# ---------------------------------------------------------------- zero T

@pytest.mark.parametrize("L", [0.5, 1.0, 2.0])
def test_zero_t_perfect_mirror(L):
    r = energy_zero_T(PlanarCavity(L, PerfectMirror()))
    # oracle: -zeta(4) / (8 pi^2 L^3) with zeta(4) summed directly
    n = np.arange(1, 100001, dtype=float)
    z4 = np.sum(1 / n[::-1] ** 4) + 1 / (3 * 100000 ** 3)
    assert abs(r.value / (-z4 / (8 * math.pi ** 2 * L ** 3)) - 1) < 1e-6
    assert abs(r.value / (CASIMIR / L ** 3) - 1) < 1e-6


def test_zero_t_vacuum():
    assert energy_zero_T(PlanarCavity(1.0, Vacuum())).value == 0


def test_plasma_approaches_perfect_mirror():
    vals = [energy_zero_T(PlanarCavity(1.0, DrudeLorentzModel(wp))).value for wp in (10, 30, 100)]
    assert CASIMIR < vals[2] < vals[1] < vals[0] < 0


def test_plasma_scaling_law():
    lam = 2.5
    a = energy_zero_T(PlanarCavity(1.0, DrudeLorentzModel(6.0))).value
    b = energy_zero_T(PlanarCavity(lam, DrudeLorentzModel(6.0 / lam))).value
    assert abs(b * lam ** 3 / a - 1) < 1e-12


@given(st.floats(0.3, 5.0), st.floats(1.0, 30.0))
@settings(max_examples=10)
def test_scaling_law_property(lam, wp):
    a = energy_zero_T(PlanarCavity(1.0, DrudeLorentzModel(wp))).value
    b = energy_zero_T(PlanarCavity(lam, DrudeLorentzModel(wp / lam))).value
    assert abs(b * lam ** 3 / a - 1) < 1e-10


def test_slab_thickness_monotone():
    m = DrudeLorentzModel(5.0, 0.0, 0.5)
    bulk = energy_zero_T(PlanarCavity(1.0, m)).value
    gaps = [abs(energy_zero_T(PlanarCavity(1.0, m, slab_thickness=d)).value - bulk)
            for d in (0.1, 0.3, 1.0, 3.0)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_bath_slab_energy_negative():
    c = PlanarCavity(1.0, make_ohmic_bath(1.0, 50.0, 8, omega_p=10.0), slab_thickness=1.0)
    assert energy_zero_T(c).value < 0


def test_drude_plasma_ordering_is_reported():
    # logged, not asserted as a theorem
    plasma = energy_zero_T(PlanarCavity(1.0, DrudeLorentzModel(5.0))).value
    drude = energy_zero_T(PlanarCavity(1.0, DrudeLorentzModel(5.0, 0.0, 0.5))).value
    print(f"zero-T ratio Drude/plasma at wp L = 5, gamma = 0.1 wp: {drude / plasma:.6f}")
    assert drude < 0 and plasma < 0


# -------------------------------------------------------------- pressure

def test_pressure_perfect_mirror():
    for L in (0.7, 1.0):
        p = pressure(PlanarCavity(L, PerfectMirror()))
        assert abs(p / (-math.pi ** 2 / (240 * L ** 4)) - 1) < 1e-4


def test_pressure_vacuum():
    assert pressure(PlanarCavity(1.0, Vacuum())) == 0


def test_pressure_sign_audit():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = DrudeLorentzModel(rng.uniform(0.5, 30), rng.uniform(0, 3), rng.uniform(0, 3))
        c = PlanarCavity(rng.uniform(0.2, 3), m, temperature_wavenumber=0.0)
        assert pressure(c) < 0


def test_pressure_matsubara_route():
    c = PlanarCavity(1.0, DrudeLorentzModel(5.0, 0.0, 0.5), temperature_wavenumber=0.5)
    h = 1e-3
    F = [free_energy_matsubara(c.with_gap(1.0 + j * h)).value for j in (-1, 1)]
    assert abs(pressure(c) / (-(F[1] - F[0]) / (2 * h)) - 1) < 1e-5


# -------------------------------------------------------- real frequency

def test_real_frequency_vacuum():
    c = PlanarCavity(1.0, Vacuum(), temperature_wavenumber=1.0)
    assert free_energy_real_frequency(c).value == 0


def test_real_frequency_domain():
    with pytest.raises(DomainError):
        free_energy_real_frequency(PlanarCavity(1.0, PerfectMirror(), temperature_wavenumber=1.0))
    with pytest.raises(DomainError):
        free_energy_real_frequency(PlanarCavity(1.0, DrudeLorentzModel(5.0),
                                                temperature_wavenumber=1.0))


def test_perfect_mirror_staircase():
    L, k = 1.0, 0.5
    c = PlanarCavity(L, PerfectMirror())
    w = np.linspace(0.6, 12.0, 4001)
    q = np.sqrt(w * w - k * k)
    theta = np.mod(2 * q * L, 2 * math.pi)
    # 1 - exp(i theta) = 2 sin(theta/2) exp(i (theta - pi)/2)
    closed = 0.5 * (theta - math.pi)
    for p in (TE, TM):
        v = log_g_real_axis(c, p, k, w)
        assert np.max(np.abs(v.imag - closed)) < 1e-9
    # evanescent side: no phase
    assert log_g_real_axis(c, TE, 2.0, 1.0).imag == 0
    # one jump of -pi per resonance q L = n pi
    jumps = np.diff(log_g_real_axis(c, TE, k, w).imag)
    n_res = int(q[-1] * L / math.pi) - int(q[0] * L / math.pi)
    assert np.sum(jumps < -3) == n_res

