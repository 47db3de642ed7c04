"""Spectral functions of a cavity bounded by two identical slab mirrors.

Two slabs of thickness ``d`` sit a gap ``L`` apart.  The dispersion
functions ``D^p`` vanish on the cavity modes.  The ratio
``G^p = D^p / D^p(L -> inf) = 1 - rho_p^2 exp(-2 kappa L)`` is what the
energy routes consume.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _backend
from .dielectric import (DiscreteBathModel, DrudeLorentzModel, PerfectMirror, Vacuum,
                         epsilon)
from .errors import DomainError

BULK = math.inf
TE, TM = "TE", "TM"


@dataclass(frozen=True)
class PlanarCavity:
    gap: float
    mirror: object
    slab_thickness: float = BULK
    temperature_wavenumber: float = 0.0

    def __post_init__(self):
        if not self.gap > 0:
            raise ValueError("gap must be positive")
        if not self.slab_thickness > 0:
            raise ValueError("slab thickness must be positive")
        if self.temperature_wavenumber < 0:
            raise ValueError("temperature must be non-negative")

    def with_gap(self, gap):
        return PlanarCavity(gap, self.mirror, self.slab_thickness, self.temperature_wavenumber)


@dataclass(frozen=True)
class TransverseChannel:
    polarization: str
    k: float

    def __post_init__(self):
        if self.polarization not in (TE, TM):
            raise ValueError("polarization must be 'TE' or 'TM'")
        if not self.k >= 0:
            raise ValueError("k must be non-negative")


def material_params(model):
    """Flat kernel parameters ``(kind, wp, w0, gam, wj, rj)``."""
    empty = np.zeros(0)
    if isinstance(model, Vacuum):
        return 0, 0.0, 0.0, 0.0, empty, empty
    if isinstance(model, DrudeLorentzModel):
        return 1, model.omega_p, model.omega_0, model.gamma, empty, empty
    if isinstance(model, DiscreteBathModel):
        return 2, model.omega_p, model.omega_0, 0.0, model.omega_j, model.mass_ratio
    if isinstance(model, PerfectMirror):
        return 3, 0.0, 0.0, 0.0, empty, empty
    raise TypeError(f"unknown dielectric model {model!r}")


def _csqrt(w):
    """Principal square root; on the negative real axis the ``-i`` side."""
    w = np.asarray(w, complex)
    r = np.sqrt(w)
    cut = (w.imag == 0) & (w.real < 0)
    return np.where(cut, -1j * np.sqrt(-w.real), r) if w.ndim else (
        complex(-1j * math.sqrt(-w.real)) if cut else complex(r))


def kappa(k, zeta):
    """``sqrt(k^2 - zeta^2)`` with ``Re >= 0``; real positive for ``zeta = i xi``."""
    z = np.asarray(zeta, complex)
    return _csqrt(k * k - z * z)


def kappa_m(model, k, zeta, unphysical_sheet=False):
    """``sqrt(k^2 - eps(zeta) zeta^2)`` on the same branch as :func:`kappa`."""
    z = np.asarray(zeta, complex)
    e = epsilon(model, z, unphysical_sheet=unphysical_sheet)
    return _csqrt(k * k - e * z * z)


def _tanh_guard(X):
    X = np.asarray(X, complex)
    with np.errstate(over="ignore", invalid="ignore"):
        return np.where(X.real > 40, 1.0 + 0j, np.tanh(X))


def _slab_terms(cavity, channel, zeta, unphysical_sheet=False):
    """``(a, t)`` with ``rho = (a - t)/(a + t)``."""
    m = cavity.mirror
    z = np.asarray(zeta, complex)
    kap = kappa(channel.k, z)
    e = epsilon(m, z, unphysical_sheet=unphysical_sheet)
    km = _csqrt(channel.k ** 2 - e * z * z)
    d = cavity.slab_thickness
    X = km * d
    if channel.polarization == TE:
        if math.isinf(d):
            t = km
        else:
            small = np.abs(X) < 1e-4
            with np.errstate(invalid="ignore", divide="ignore"):
                t = np.where(small, km * km * d * (1 - X * X / 3), km * _tanh_guard(X))
        return kap, t
    if math.isinf(d):
        t = km
    else:
        small = np.abs(X) < 1e-4
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(small, 1 / d + km * km * d / 3, km / _tanh_guard(X))
    return e * kap, t


def reflection_rho(cavity, channel, zeta, unphysical_sheet=False):
    """Slab reflection amplitude ``rho_p(zeta)`` seen from the gap."""
    if isinstance(cavity.mirror, PerfectMirror):
        z = np.asarray(zeta, complex)
        return np.ones_like(z) if z.ndim else 1.0 + 0j
    a, t = _slab_terms(cavity, channel, zeta, unphysical_sheet)
    out = (a - t) / (a + t)
    return out if np.ndim(out) else complex(out)


def reflection_ratio_G(cavity, channel, zeta, unphysical_sheet=False):
    """``G^p = 1 - rho_p^2 exp(-2 kappa L)``."""
    rho = reflection_rho(cavity, channel, zeta, unphysical_sheet)
    kap = kappa(channel.k, zeta)
    out = 1 - rho * rho * np.exp(-2 * kap * cavity.gap)
    return out if np.ndim(out) else complex(out)


def dispersion_D(cavity, channel, omega, unphysical_sheet=False):
    """Dispersion function ``D^p``; its zeros are the cavity modes.

    ``D = e^{kappa L} (a + t)^2 - (a - t)^2 e^{-kappa L}`` where ``a`` is
    ``kappa`` (TE) or ``eps kappa`` (TM) and ``t`` is ``kappa_m tanh`` (TE)
    or ``kappa_m coth`` (TM) of ``kappa_m d``.  A perfect mirror gives
    ``2 sinh(kappa L)``.
    """
    if math.isinf(cavity.slab_thickness):
        raise DomainError("the dispersion function needs a finite slab")
    kap = kappa(channel.k, omega)
    L = cavity.gap
    if isinstance(cavity.mirror, PerfectMirror):
        out = 2 * np.sinh(kap * L)
    else:
        a, t = _slab_terms(cavity, channel, omega, unphysical_sheet)
        out = np.exp(kap * L) * (a + t) ** 2 - (a - t) ** 2 * np.exp(-kap * L)
    return out if np.ndim(out) else complex(out)


def fresnel(model, channel, xi):
    """Bulk Fresnel coefficient ``r^p(i xi)``, real with ``|r| <= 1``."""
    if xi < 0:
        raise DomainError("xi must be non-negative")
    if isinstance(model, PerfectMirror):
        return 1.0
    kind, wp, w0, gam, wj, rj = material_params(model)
    k = channel.k
    kap = math.hypot(k, xi)
    if kind == 0:
        return 0.0
    from ._core_py import _den_imag
    den = float(_den_imag(np.array(xi, float), kind, w0, gam, wj, rj))
    if den > 0:
        ratio = xi * xi / den
    else:
        ratio = 1.0 if (kind == 2 or gam == 0) else 0.0
    km = math.sqrt(k * k + xi * xi + wp * wp * ratio)
    if channel.polarization == TE:
        s = kap + km
        return (kap - km) / s if s > 0 else 0.0
    inv_eps = den / (den + wp * wp)
    s = kap + inv_eps * km
    return (kap - inv_eps * km) / s if s > 0 else 1.0


def log_g_imag(cavity, polarization, k, xi, gap=None):
    """Vectorized ``ln G^p(i xi)`` over broadcast arrays ``k`` and ``xi``."""
    kind, wp, w0, gam, wj, rj = material_params(cavity.mirror)
    L = cavity.gap if gap is None else gap
    return _backend.core.log_g_imag(k, xi, L, cavity.slab_thickness, polarization == TM,
                                    kind, wp, w0, gam, wj, rj)
