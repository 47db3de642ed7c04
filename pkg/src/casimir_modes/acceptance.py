"""Acceptance suites shared by the test-suite and ``casimir-modes verify``.

Each criterion returns a :class:`CriterionResult` holding the measured
figures, so a failure reports how far off it was.
"""
from dataclasses import dataclass
import math
import time

import numpy as np

from .dielectric import DrudeLorentzModel, PerfectMirror, epsilon, epsilon_imag_axis, \
    make_ohmic_bath
from .lifshitz import energy_zero_T, free_energy_matsubara, free_energy_real_frequency
from .modes import (IdentityCase, contour_channel_energy, find_resonances,
                    generalized_mode_sum, identity_check, mode_energy_k_summed,
                    quasistatic_channel_energy, sum_over_modes_energy, sum_rule_residual)
from .numerics import Rectangle
from .planar import TE, TM, PlanarCavity, TransverseChannel
from .polder import (GaussianDipole, HalfSpaceGeometry, cp_energy_exact,
                     cp_energy_perturbative, cp_force, polarizability_denominator)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    detail: str

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number} {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _rel(a, b):
    return abs(a / b - 1)


def perfect_mirror_oracle(L, terms=20000):
    """``-sum 1/n^4 / (8 pi^2 L^3)`` summed directly with an integral tail."""
    n = np.arange(1, terms + 1, dtype=float)
    s = np.sum(1 / n[::-1] ** 4) + 1 / (3 * terms ** 3)
    return -s / (8 * math.pi ** 2 * L ** 3)


def criterion_1():
    worst = 0.0
    for L in (0.5, 1.0, 2.0):
        E = energy_zero_T(PlanarCavity(L, PerfectMirror())).value
        closed = -math.pi ** 2 / (720 * L ** 3)
        worst = max(worst, _rel(E, closed), _rel(E, perfect_mirror_oracle(L)))
    return worst < 1e-6, 5.0, f"max relative error {worst:.2e} (limit 1e-6)"


def criterion_2():
    c = PlanarCavity(1.0, DrudeLorentzModel(5.0, 0.0, 2.0), temperature_wavenumber=1.0)
    m = free_energy_matsubara(c).value
    r = free_energy_real_frequency(c).value
    e = _rel(r, m)
    return e < 1e-3, 60.0, f"real-frequency {r:.8g} vs Matsubara {m:.8g}, relative {e:.2e}"


def _bath_cavity(N, grid="linear"):
    m = make_ohmic_bath(1.0, 50.0, N, omega_p=10.0, grid=grid)
    return PlanarCavity(1.0, m, slab_thickness=1.0)


def criterion_3():
    c = _bath_cavity(16)
    worst = 0.0
    for pol, k in ((TE, 0.5), (TM, 0.5), (TE, 3.0)):
        ch = TransverseChannel(pol, k)
        s = sum_over_modes_energy(c, ch, 20.0).value
        o = contour_channel_energy(c, ch, 20.0)
        worst = max(worst, _rel(s, o))
    return worst < 1e-4, 120.0, f"max relative deviation {worst:.2e} over 3 channels (limit 1e-4)"


def drude_reference(L=1.0, L_ref=20.0):
    c = PlanarCavity(L, DrudeLorentzModel(10.0, 0.0, 1.0), slab_thickness=1.0)
    return energy_zero_T(c).value - energy_zero_T(c.with_gap(L_ref)).value


def criterion_4(sizes=(8, 16, 32)):
    ref = drude_reference()
    gaps = []
    for N in sizes:
        e = mode_energy_k_summed(_bath_cavity(N, "quadratic"), 20.0).value
        gaps.append(abs(e / ref - 1))
    mono = all(b < a for a, b in zip(gaps, gaps[1:]))
    ok = mono and gaps[-1] < 0.02
    txt = ", ".join(f"N={N}: {g:.3%}" for N, g in zip(sizes, gaps))
    return ok, 600.0, f"gap to Drude {txt}; monotone {mono}"


def criterion_5():
    m = DrudeLorentzModel(5.0, 0.0, 2.0)
    c = PlanarCavity(1.0, m)
    region = Rectangle(0.0, 20.0, -20.0, 0.0)
    dev = resid = lam = 0.0
    for k in (0.5, 1.0, 2.0):
        ch = TransverseChannel(TM, k)
        sL = find_resonances(c, ch, region)
        sR = find_resonances(c, ch, region, gap=math.inf)
        e1 = generalized_mode_sum(sL, sR, 10.0)
        e2 = generalized_mode_sum(sL, sR, 100.0)
        o = quasistatic_channel_energy(m, k, 1.0)
        dev = max(dev, _rel(e1, o))
        lam = max(lam, abs(e1 - e2) / abs(e1))
        resid = max(resid, sum_rule_residual(sL, sR))
    ok = dev < 1e-4 and resid < 1e-6 and lam < 1e-10
    return ok, 60.0, (f"oracle deviation {dev:.2e}, sum-rule residual {resid:.2e}, "
                      f"Lambda sensitivity {lam:.2e}")


def identity_sweep(n, seed):
    """``n`` random cases: principal-value, real-axis and fourth-quadrant poles."""
    rng = np.random.default_rng(seed)
    specs = ("rational2", "rational3", "half_rational2")
    out = []
    for i in range(n):
        kind = i % 5
        if kind == 0:
            w0 = complex(0.0, -rng.uniform(0.1, 5.0))
        elif kind == 1:
            w0 = complex(rng.uniform(0.1, 5.0), 0.0)
        else:
            w0 = complex(rng.uniform(0.05, 5.0), -rng.uniform(0.05, 5.0))
        out.append(IdentityCase(w0, specs[i % len(specs)]))
    return out


def criterion_6(n=50, seed=7):
    cases = identity_sweep(n, seed)
    gaps = [identity_check(c).gap for c in cases]
    pv = sum(1 for c in cases if c.omega_0.real == 0)
    real = [c for c in cases if c.omega_0.imag == 0]
    # the real-pole reduction: the rotated side alone must return f(w0)
    red = max(identity_check(c).gap for c in real)
    approach = identity_check(IdentityCase(complex(real[0].omega_0.real, -1e-6), real[0].f_spec))
    worst = max(gaps)
    ok = worst < 1e-7 and red < 1e-7 and approach.gap < 1e-7 and pv > 0
    return ok, 30.0, (f"max gap {worst:.2e} over {n} cases ({pv} principal-value, "
                      f"{len(real)} real-axis), near-axis gap {approach.gap:.2e}")


def criterion_7(samples=200, seed=11):
    rng = np.random.default_rng(seed)
    fails = {"crossing": 0, "above_one": 0, "parity": 0, "bath_convergence": 0}
    for _ in range(samples):
        wp, w0, g = rng.uniform(0.5, 20), rng.uniform(0, 5), rng.uniform(0.01, 3)
        dl = DrudeLorentzModel(wp, w0, g)
        z = complex(rng.uniform(-30, 30), rng.uniform(0, 30))
        if abs(epsilon(dl, -z.conjugate()) - np.conj(epsilon(dl, z))) > 1e-12 * abs(epsilon(dl, z)):
            fails["crossing"] += 1
        bath = make_ohmic_bath(g, rng.uniform(20, 100), int(rng.integers(1, 40)), omega_p=wp,
                               omega_0=w0)
        xi = rng.uniform(0, 50)
        if not (epsilon_imag_axis(dl, xi) > 1 and epsilon_imag_axis(bath, xi) > 1):
            fails["above_one"] += 1
        w = complex(rng.uniform(0.1, 30), rng.uniform(0.01, 5))
        if abs(epsilon(bath, -w) - epsilon(bath, w)) > 1e-12 * abs(epsilon(bath, w)):
            fails["parity"] += 1
        wc = rng.uniform(20, 100)
        xs = np.geomspace(0.05, wc / 2, 64)
        ref = 1 + wp ** 2 / (xs * xs + xs * (2 * g / math.pi) * np.arctan(wc / xs))
        errs = [np.max(np.abs(epsilon_imag_axis(make_ohmic_bath(g, wc, N, omega_p=wp), xs)
                              / ref - 1)) for N in (8, 16, 32, 64)]
        if not all(b < a for a, b in zip(errs, errs[1:])):
            fails["bath_convergence"] += 1
    ok = not any(fails.values())
    return ok, 10.0, "failures " + ", ".join(f"{k}={v}" for k, v in fails.items()) + \
        f" over {samples} samples"


def criterion_8():
    dip = GaussianDipole(m0=1.0, K0=1.0, q=0.1, a=0.1)
    a0 = dip.static_polarizability
    z_far = 1e3 / dip.resonance
    far = cp_energy_perturbative(dip, HalfSpaceGeometry(PerfectMirror(), z_far))
    ratio = far / (-3 * a0 / (8 * math.pi * z_far ** 4))
    mirror = DrudeLorentzModel(2.0, 0.0, 0.1)
    force_dev = 0.0
    for z0 in (2.5, 5.0, 10.0, 30.0, 100.0):
        F = cp_force(dip, HalfSpaceGeometry(mirror, z0))
        h = 1e-3 * z0
        E = [cp_energy_exact(dip, HalfSpaceGeometry(mirror, z0 + j * h)) for j in (-2, -1, 1, 2)]
        dEdz = (E[0] - 8 * E[1] + 8 * E[2] - E[3]) / (12 * h)
        force_dev = max(force_dev, _rel(F, -dEdz))
    # coefficient of the omega^3 term of the denominator, extrapolated to a -> 0
    sizes = np.array([1e-2, 1e-3, 1e-4])
    coef = []
    for a in sizes:
        d = GaussianDipole(1.0, 1.0, 0.1, a)
        w = 0.1 * d.resonance
        coef.append((1j * (polarizability_denominator(d, w) - (-d.m * w * w + d.K)) / w ** 3).real)
    fit = np.polyfit(sizes, coef, 1)[1]
    fit_dev = _rel(fit, 2 * dip.q ** 2 / 3)
    ok = abs(ratio - 1) < 0.01 and force_dev < 1e-5 and fit_dev < 0.01
    return ok, 60.0, (f"far-zone ratio {ratio:.6f}, force deviation {force_dev:.2e}, "
                      f"omega^3 coefficient deviation {fit_dev:.2e}")


CRITERIA = {
    1: ("perfect-mirror law", criterion_1),
    2: ("Wick-rotation equivalence", criterion_2),
    3: ("finite-N mode sum vs contour", criterion_3),
    4: ("continuum-limit convergence", criterion_4),
    5: ("complex-mode route", criterion_5),
    6: ("sum-over-poles identity", criterion_6),
    7: ("dielectric properties", criterion_7),
    8: ("Casimir-Polder", criterion_8),
}


def run(number):
    """Run one criterion; the runtime budget is part of the verdict."""
    name, fn = CRITERIA[number]
    t = time.perf_counter()
    ok, budget, detail = fn()
    dt = time.perf_counter() - t
    if dt > budget:
        detail += f"; over the {budget:.0f} s budget"
    return CriterionResult(number, name, bool(ok and dt <= budget), dt, detail)
