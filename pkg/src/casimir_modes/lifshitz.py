"""Imaginary- and real-frequency energy engines for the planar cavity.

All energies are per unit area with hbar = c = 1.  The integrand of every
route is ``ln G^p`` summed over both polarizations.
"""
from dataclasses import dataclass, field
import enum
import math
import warnings

import numpy as np
from scipy.integrate import quad_vec

from .dielectric import DrudeLorentzModel, PerfectMirror, Vacuum, epsilon
from .errors import AccuracyDegraded, DomainError
from .numerics import gauss_legendre_panels, matsubara_sum
from .planar import TE, TM, log_g_imag

RHO_DECAY = 40.0  # integrate kappa L up to this; exp(-80) is below double precision


class Route(str, enum.Enum):
    MATSUBARA = "matsubara"
    ZERO_T = "zero_T"
    REAL_FREQUENCY = "real_frequency"
    MODE_SUM = "mode_sum"
    COMPLEX_MODE_SUM = "complex_mode_sum"


@dataclass(frozen=True)
class EnergyResult:
    value: float
    route: Route
    abs_error: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.abs_error >= 0:
            raise ValueError("abs_error must be non-negative")
        object.__setattr__(self, "route", Route(self.route))

    def __float__(self):
        return float(self.value)


def _feature_scales(cavity):
    m = cavity.mirror
    out = []
    for name in ("omega_p", "omega_0", "gamma"):
        v = getattr(m, name, 0.0)
        if v and v > 0:
            out.append(v)
    if hasattr(m, "omega_j") and m.N:
        out.extend([m.omega_j[0], m.omega_j[-1]])
    if math.isfinite(cavity.slab_thickness):
        out.append(1.0 / cavity.slab_thickness)
    return out


def _radial_edges(scale_length, features, upper):
    base = [2.0 ** j / scale_length for j in range(-7, 7)]
    extra = [f * c for f in features for c in (0.5, 1.0, 2.0)]
    e = np.array([0.0, upper] + base + extra)
    return np.unique(e[(e >= 0) & (e <= upper)])


def _log_g_both(cavity, k, xi, gap):
    return (log_g_imag(cavity, TE, k, xi, gap) + log_g_imag(cavity, TM, k, xi, gap))


def _is_trivial(cavity):
    return isinstance(cavity.mirror, Vacuum) and math.isinf(cavity.slab_thickness)


def _zero_t_quadrature(cavity, gap, scale_length, n):
    rmax = RHO_DECAY / gap
    r, wr = gauss_legendre_panels(_radial_edges(scale_length, _feature_scales(cavity), rmax), n)
    # theta = (pi/2) t^2 absorbs the sqrt(xi) behaviour of lossy mirrors at xi -> 0
    t, wt = gauss_legendre_panels([0.0, 0.05, 0.15, 0.3, 0.5, 0.75, 1.0], n)
    th = 0.5 * np.pi * t * t
    wth = wt * np.pi * t
    R, TH = np.meshgrid(r, th, indexing="ij")
    k, xi = R * np.cos(TH), R * np.sin(TH)
    f = _log_g_both(cavity, k, xi, gap) * R * k
    return float(wr @ f @ wth) / (4 * np.pi ** 2)


def energy_zero_T(cavity, nodes=16, gap=None, scale_length=None):
    """Zero-temperature energy ``sum_p int k dk/2pi int dxi/2pi ln G^p(i xi)``.

    The quarter plane ``(k, xi)`` is integrated in polar coordinates with
    composite Gauss-Legendre rules; ``abs_error`` compares two orders.
    """
    L = cavity.gap if gap is None else gap
    s = scale_length or L
    if _is_trivial(cavity):
        return EnergyResult(0.0, Route.ZERO_T, 0.0, {"nodes": nodes})
    v1 = _zero_t_quadrature(cavity, L, s, nodes)
    v2 = _zero_t_quadrature(cavity, L, s, nodes + 8)
    return EnergyResult(v2, Route.ZERO_T, abs(v2 - v1), {"nodes": nodes + 8})


def _k_integral(cavity, xi, gap, scale_length, n):
    """``sum_p int_0^inf k dk/2pi ln G^p(i xi)`` via ``k dk = kappa dkappa``."""
    off = _radial_edges(scale_length, _feature_scales(cavity), RHO_DECAY / gap)
    kap, w = gauss_legendre_panels(xi + off, n)
    k = np.sqrt(np.maximum(kap * kap - xi * xi, 0.0))
    f = _log_g_both(cavity, k, np.full_like(k, xi), gap) * kap
    return float(w @ f) / (2 * np.pi)


def free_energy_matsubara(cavity, tol=1e-10, nodes=16, gap=None, scale_length=None):
    """Free energy ``(tau/2pi) sum'_l sum_p int k dk/2pi ln G^p(i l tau)``."""
    tau = cavity.temperature_wavenumber
    if not tau > 0:
        raise DomainError("the Matsubara route needs a positive temperature")
    L = cavity.gap if gap is None else gap
    s = scale_length or L
    if _is_trivial(cavity):
        return EnergyResult(0.0, Route.MATSUBARA, 0.0, {"terms": 0})
    pref = tau / (2 * np.pi)
    lo, _, _ = matsubara_sum(lambda l: _k_integral(cavity, l * tau, L, s, nodes), tau,
                             tol=tol, full_output=True)
    hi, n_terms, bound = matsubara_sum(lambda l: _k_integral(cavity, l * tau, L, s, nodes + 8),
                                       tau, tol=tol, full_output=True)
    err = pref * (abs(hi - lo) + bound)
    return EnergyResult(pref * hi, Route.MATSUBARA, err, {"terms": n_terms})


def free_energy_real_frequency(cavity, omega_max=None, tol=1e-3, nodes=8, panel_width=None):
    """Free energy from ``Im ln G`` on the real frequency axis.

    ``F = sum_p int k dk/2pi int_0^omega_max dw/2pi coth(pi w/tau) Im ln G^p(w + i0)``.

    Propagating momenta use ``q = t w`` with ``k dk = -q dq``; evanescent
    ones use ``k dk = kappa dkappa``.  Both inner integrals run adaptively
    and vectorized over all frequency nodes, since weakly damped guided
    resonances make the integrand sharply peaked.  The truncated tail
    oscillates, so the value is the centre of the band swept by the running
    integral over the last quarter of ``[0, omega_max]`` and ``abs_error``
    is its half-width.  The accuracy target is ``1e-3``.

    Warns
    -----
    AccuracyDegraded
        When that half-width exceeds ``tol`` relative, or positive and negative
        parts cancel by more than ``1/tol``.
    """
    m = cavity.mirror
    if isinstance(m, Vacuum):
        return EnergyResult(0.0, Route.REAL_FREQUENCY, 0.0, {})
    if not isinstance(m, DrudeLorentzModel) or m.gamma <= 0:
        raise DomainError("the real-frequency route needs a dissipative Drude-Lorentz mirror")
    L = cavity.gap
    tau = cavity.temperature_wavenumber
    wmax = omega_max or 16 * max(m.omega_p, m.omega_0, 1.0 / L)
    width = panel_width or min(0.1 / L, 0.25 * m.gamma)
    edges = np.linspace(0.0, wmax, int(math.ceil(wmax / width)) + 1)
    w, ww = gauss_legendre_panels(edges, nodes)
    th = 1.0 / np.tanh(np.pi * w / tau) if tau > 0 else np.ones_like(w)

    def both(k):
        return sum(log_g_real_axis(cavity, p, k, w, L).imag for p in (TE, TM))

    def prop(t):
        q = t * w
        return both(np.sqrt(w * w - q * q)) * q * w

    def evan(s):
        kap = s / (1 - s) / L
        return both(np.sqrt(w * w + kap * kap)) * kap / (L * (1 - s) ** 2)

    smax = RHO_DECAY / (RHO_DECAY + 1.0)
    opts = dict(epsabs=1e-7 / L ** 2, epsrel=1e-5, norm="max", limit=20000)
    fp, ep = quad_vec(prop, 0.0, 1.0, **opts)
    fe, ee = quad_vec(evan, 0.0, smax, **opts)
    g = (fp + fe) * th * ww / (4 * np.pi ** 2)
    run = np.cumsum(g)
    tail = run[w >= 0.75 * wmax]
    # centre of the oscillation band of the running integral
    value = 0.5 * float(tail.max() + tail.min())
    err = 0.5 * float(np.ptp(tail))
    loss = float(np.abs(g).sum() / max(abs(value), 1e-300))
    if loss > 1.0 / tol or err > tol * abs(value):
        warnings.warn(f"real-frequency route degraded (half-width {err:.3g}, cancellation {loss:.3g})",
                      AccuracyDegraded)
    return EnergyResult(value, Route.REAL_FREQUENCY, err,
                        {"omega_max": wmax, "nodes": int(w.size), "cancellation": loss,
                         "inner_quad_error": float(ep + ee)})


def log_g_real_axis(cavity, pol, k, omega, gap=None):
    """``ln G^p(omega + i0)`` for broadcast arrays of ``k`` and real ``omega``.

    For a perfect mirror the imaginary part is a staircase that jumps by
    ``pi`` at every cavity resonance ``kappa L = -i n pi``.
    """
    m = cavity.mirror
    gap = cavity.gap if gap is None else gap
    z = np.asarray(omega, complex)
    kap = np.sqrt(k * k - z * z + 0j)
    kap = np.where((kap.imag > 0) & (kap.real == 0), -kap, kap)
    if isinstance(m, PerfectMirror):
        rho2 = 1.0
    else:
        e = epsilon(m, z)
        km = np.sqrt(k * k - e * z * z)
        d = cavity.slab_thickness
        if pol == TE:
            a = kap
            t = km if math.isinf(d) else km * np.tanh(km * d)
        else:
            a = e * kap
            t = km if math.isinf(d) else km / np.tanh(km * d)
        rho2 = ((a - t) / (a + t)) ** 2
    return np.log1p(-rho2 * np.exp(-2 * kap * gap))


def pressure(cavity, step=1e-3, **kw):
    """``-dF/dL`` by a five-point central difference with ``h = step L``."""
    if _is_trivial(cavity):
        return 0.0
    L = cavity.gap
    h = step * L
    route = free_energy_matsubara if cavity.temperature_wavenumber > 0 else energy_zero_T
    F = [route(cavity, gap=L + j * h, scale_length=L, **kw).value for j in (-2, -1, 1, 2)]
    return -(F[0] - 8 * F[1] + 8 * F[2] - F[3]) / (12 * h)
