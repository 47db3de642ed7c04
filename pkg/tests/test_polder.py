import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from casimir_modes.dielectric import DrudeLorentzModel, PerfectMirror, Vacuum
from casimir_modes.errors import DomainError, GeometryError, StrongCouplingError
from casimir_modes.numerics import Rectangle, count_zeros
from casimir_modes.planar import TE, TM, TransverseChannel, fresnel
from casimir_modes.polder import (_log_argument, GaussianDipole, HalfSpaceGeometry, cp_energy_exact,
                                  cp_energy_perturbative, cp_force, dressed_polarizability,
                                  polarizability_denominator, radiative_damping,
                                  scattered_green_halfspace, vacuum_green_avg)

DIP = GaussianDipole(m0=1.0, K0=1.0, q=0.1, a=0.1)
# a weak, slow dipole: non-retarded below z0 ~ 0.4
WEAK = GaussianDipole(m0=1.0, K0=1.0, q=1e-4, a=1e-3)


def form_factor(k, a):
    return np.exp(-k * k * a * a / math.pi)


def green_oracle(dip, xi):
    """Isotropic <G0>(i xi): transverse k-integral plus the longitudinal constant."""
    a = dip.a
    trans = quad(lambda k: k * k * form_factor(k, a) / (k * k + xi * xi), 0, np.inf,
                 epsabs=0, epsrel=1e-13, limit=500)[0]
    longi = quad(lambda k: k * k * form_factor(k, a), 0, np.inf, epsabs=0, epsrel=1e-13)[0]
    return -(4 / (3 * math.pi)) * xi * xi * trans - (2 / (3 * math.pi)) * longi


def green_quad(model, xi, z0):
    """Scattered Green tensor by adaptive quadrature over kappa."""
    def r(kap, p):
        if isinstance(model, PerfectMirror):
            return -1.0 if p == TE else 1.0
        k = math.sqrt(max(kap * kap - xi * xi, 0.0))
        return fresnel(model, TransverseChannel(p, k), xi)
    opts = dict(epsabs=0, epsrel=1e-12, limit=500)
    xx = 0.5 * quad(lambda t: math.exp(-2 * t * z0) * (t * t * r(t, TM) - xi * xi * r(t, TE)),
                    xi, np.inf, **opts)[0]
    zz = quad(lambda t: math.exp(-2 * t * z0) * (t * t - xi * xi) * r(t, TM), xi, np.inf, **opts)[0]
    return xx, zz


# ------------------------------------------------------------------ types

def test_type_invariants():
    with pytest.raises(ValueError):
        GaussianDipole(1.0, 1.0, 0.1, 0.0)
    with pytest.raises(ValueError):
        GaussianDipole(1.0, -1e6, 0.1, 0.1)
    with pytest.raises(ValueError):
        HalfSpaceGeometry(PerfectMirror(), 0.0)


def test_renormalized_constants():
    assert DIP.m == pytest.approx(1.0 + 2 * 0.01 / 0.3, rel=1e-15)
    assert DIP.K == pytest.approx(1.0 + math.pi * 0.01 / (6 * 0.001), rel=1e-15)


# ------------------------------------------------------------ vacuum term

def test_green_static_limit():
    v = vacuum_green_avg(DIP, 0.0)
    assert v == -math.pi / (6 * DIP.a ** 3)
    # the Coulomb shift is the longitudinal integral of the form factor
    longi = quad(lambda k: k * k * form_factor(k, DIP.a), 0, np.inf, epsrel=1e-14)[0]
    assert abs(v.real / (-(2 / (3 * math.pi)) * longi) - 1) < 1e-13


@pytest.mark.parametrize("xi", [1e-3, 0.3, 3.0, 30.0, 300.0])
def test_green_imag_axis_oracle(xi):
    v = vacuum_green_avg(DIP, 1j * xi)
    o = green_oracle(DIP, xi)
    assert v.imag == 0
    assert abs(v.real - o) <= 1e-8 * abs(o)


@given(st.floats(-50, 50), st.floats(0, 50))
def test_green_crossing(x, y):
    z = complex(x, y)
    a = vacuum_green_avg(DIP, -z.conjugate())
    b = np.conj(vacuum_green_avg(DIP, z))
    assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


@given(st.floats(-20, 20), st.floats(0, 20))
def test_denominator_is_bare_minus_self_energy(x, y):
    z = complex(x, y)
    direct = -DIP.m0 * z * z + DIP.K0 - DIP.q ** 2 * vacuum_green_avg(DIP, z)
    den = polarizability_denominator(DIP, z)
    assert abs(den - direct) <= 1e-10 * max(1.0, abs(direct))


# -------------------------------------------------------- polarizability

def test_static_polarizability():
    assert abs(dressed_polarizability(DIP, 0.0) - DIP.q ** 2 / DIP.K) < 1e-16


def test_polarizability_imag_axis_monotone():
    xs = np.geomspace(1e-3, 1e4, 400)
    al = dressed_polarizability(DIP, 1j * xs)
    assert np.all(np.abs(al.imag) == 0) and np.all(al.real > 0)
    assert np.all(np.diff(al.real) < 0)


def test_static_constants_from_small_frequency_fit():
    w = np.linspace(1e-4, 1e-2, 21)
    den = (DIP.q ** 2 / dressed_polarizability(DIP, w)).real
    c = np.polyfit(w * w, den, 2)
    assert abs(c[2] / DIP.K - 1) < 1e-12
    assert abs(-c[1] / DIP.m - 1) < 1e-9


def test_acausal_point_limit():
    coef = []
    sizes = np.array([1e-2, 1e-3, 1e-4])
    for a in sizes:
        d = GaussianDipole(1.0, 1.0, 0.1, a)
        w = 0.1 * d.resonance
        coef.append((1j * (polarizability_denominator(d, w) - (-d.m * w * w + d.K)) / w ** 3).real)
    fit = np.polyfit(sizes, coef, 1)[1]
    assert abs(fit / (2 * 0.1 ** 2 / 3) - 1) < 0.01


def test_causality_scan():
    d = GaussianDipole(1.0, 1.0, 0.1, 1e-3)
    region = Rectangle(-10.0, 10.0, 1.0, 5000.0)
    assert count_zeros(lambda z: polarizability_denominator(d, z), region, 512) == 0
    # the point form -m w^2 + K - (2i/3) q^2 w^3 has its runaway root near i 3m/(2q^2)
    point = lambda z: -d.m * z * z + d.K - 2j / 3 * d.q ** 2 * z ** 3
    assert count_zeros(point, region, 512) == 1


# ---------------------------------------------------------------- damping

def test_damping_static():
    assert radiative_damping(DIP, 0.0) == 0


def test_damping_series():
    for w in (1e-3, 1e-2, 0.1):
        g = radiative_damping(DIP, w)
        leading = 2 * DIP.q ** 2 * w * w / 3
        assert abs(g.real / leading - 1) < 2 * (DIP.a * w) ** 2
        assert abs(g.real - leading * math.exp(-(DIP.a * w) ** 2 / math.pi)) < 1e-15


def test_damping_passive():
    rng = np.random.default_rng(1)
    for w in rng.uniform(-1e3, 1e3, 100):
        assert radiative_damping(DIP, w).real >= 0


# ------------------------------------------------------- scattered Green

@pytest.mark.parametrize("z0", [0.5, 2.0, 10.0])
def test_perfect_mirror_image_dipole(z0):
    xx, zz = scattered_green_halfspace(HalfSpaceGeometry(PerfectMirror(), z0), z0, 0.0)
    assert abs(xx * 8 * z0 ** 3 - 1) < 1e-12
    assert abs(zz * 4 * z0 ** 3 - 1) < 1e-12


def test_vacuum_green_zero():
    assert scattered_green_halfspace(HalfSpaceGeometry(Vacuum(), 1.0), 1.0, 0.5) == (0.0, 0.0)


def test_green_rejects_negative_xi():
    with pytest.raises(DomainError):
        scattered_green_halfspace(HalfSpaceGeometry(PerfectMirror(), 1.0), 1.0, -1.0)


@pytest.mark.parametrize("xi,z0", [(0.0, 1.0), (0.3, 1.0), (2.0, 0.2), (0.05, 5.0)])
def test_green_against_adaptive_quadrature(xi, z0):
    m = DrudeLorentzModel(2.0, 0.0, 0.1)
    got = scattered_green_halfspace(HalfSpaceGeometry(m, z0), z0, xi)
    ref = green_quad(m, xi, z0)
    for g, r in zip(got, ref):
        assert abs(g / r - 1) < 1e-6


def test_drude_green_approaches_perfect_mirror():
    z0, xi = 5.0, 0.1
    pm = scattered_green_halfspace(HalfSpaceGeometry(PerfectMirror(), z0), z0, xi)
    gaps = []
    for wp in (1.0, 10.0, 100.0):
        g = scattered_green_halfspace(HalfSpaceGeometry(DrudeLorentzModel(wp), z0), z0, xi)
        gaps.append(max(abs(a / b - 1) for a, b in zip(g, pm)))
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 0.01


# ---------------------------------------------------------------- energies

def test_vacuum_energies_zero():
    h = HalfSpaceGeometry(Vacuum(), 1.0)
    assert cp_energy_exact(DIP, h) == 0 and cp_energy_perturbative(DIP, h) == 0
    assert cp_force(DIP, h) == 0


def test_far_zone_perfect_mirror():
    a0 = DIP.static_polarizability
    z0 = 1e3 / DIP.resonance
    h = HalfSpaceGeometry(PerfectMirror(), z0)
    far = -3 * a0 / (8 * math.pi * z0 ** 4)
    assert abs(cp_energy_perturbative(DIP, h) / far - 1) < 0.01
    assert abs(cp_energy_exact(DIP, h) / far - 1) < 0.01


def test_exact_perturbative_convergence():
    rel = []
    for z0 in (0.025, 0.05, 0.1, 0.2):
        h = HalfSpaceGeometry(PerfectMirror(), z0)
        e, p = cp_energy_exact(WEAK, h), cp_energy_perturbative(WEAK, h)
        # multiple reflections deepen the attraction
        assert e < p < 0
        rel.append((abs(e - p), abs(p)))
    ratios = [d / p for d, p in rel]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    slope = np.polyfit(np.log([p for _, p in rel]), np.log([d for d, _ in rel]), 1)[0]
    assert abs(slope - 2) < 0.15


def test_geometry_guard():
    with pytest.raises(GeometryError):
        cp_energy_exact(DIP, HalfSpaceGeometry(PerfectMirror(), 1.0))


def test_strong_coupling_bound():
    # K >= pi q^2/(6a^3) caps alpha G at 6a^3/(4 pi z0^3), far below 1 once a < z0/20
    d = GaussianDipole(1.0, 1.0, 30.0, 1e-3)
    z0 = 0.021
    xx, zz = scattered_green_halfspace(HalfSpaceGeometry(PerfectMirror(), z0), z0, 0.0)
    assert d.static_polarizability * max(xx, zz) <= 6 * d.a ** 3 / (4 * math.pi * z0 ** 3)
    assert cp_energy_exact(d, HalfSpaceGeometry(PerfectMirror(), z0)) < 0


@pytest.mark.parametrize("alpha,g", [(1.0, 1.0), (2.0, 1.0), (1.0, float("nan"))])
def test_strong_coupling_guard(alpha, g):
    with pytest.raises(StrongCouplingError):
        _log_argument(alpha, g)


# ------------------------------------------------------------------ force

def _numeric_force(energy, dip, mirror, z0):
    h = 1e-3 * z0
    E = [energy(dip, HalfSpaceGeometry(mirror, z0 + j * h)) for j in (-2, -1, 1, 2)]
    return (E[0] - 8 * E[1] + 8 * E[2] - E[3]) / (12 * h)


@pytest.mark.parametrize("z0", [2.5, 5.0, 10.0, 30.0, 100.0])
def test_force_is_energy_derivative(z0):
    m = DrudeLorentzModel(2.0, 0.0, 0.1)
    F = cp_force(DIP, HalfSpaceGeometry(m, z0))
    assert abs(F / -_numeric_force(cp_energy_exact, DIP, m, z0) - 1) < 1e-5
    Fp = cp_force(DIP, HalfSpaceGeometry(m, z0), mode="perturbative")
    assert abs(Fp / -_numeric_force(cp_energy_perturbative, DIP, m, z0) - 1) < 1e-5


def test_force_attractive_to_perfect_mirror():
    for z0 in (2.5, 10.0, 100.0, 1000.0):
        assert cp_force(DIP, HalfSpaceGeometry(PerfectMirror(), z0)) < 0


def test_force_mode_validation():
    with pytest.raises(ValueError):
        cp_force(DIP, HalfSpaceGeometry(PerfectMirror(), 5.0), mode="other")
