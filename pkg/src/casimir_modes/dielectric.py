"""Material response: Drude-Lorentz and discrete-bath permittivities.

Frequencies are wavenumbers (hbar = c = 1).  The polarizability is
normalized so that ``epsilon = 1 + alpha``; its prefactor is ``omega_p**2``.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, PoleHit


@dataclass(frozen=True)
class DrudeLorentzModel:
    omega_p: float
    omega_0: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("omega_p must be positive")
        if self.omega_0 < 0 or self.gamma < 0:
            raise ValueError("omega_0 and gamma must be non-negative")


@dataclass(frozen=True)
class DiscreteBathModel:
    omega_p: float
    omega_0: float = 0.0
    couplings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("omega_p must be positive")
        if self.omega_0 < 0:
            raise ValueError("omega_0 must be non-negative")
        c = tuple((float(w), float(r)) for w, r in self.couplings)
        object.__setattr__(self, "couplings", c)
        w = np.array([p[0] for p in c])
        if np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise ValueError("bath frequencies must be positive and strictly increasing")
        if any(r <= 0 for _, r in c):
            raise ValueError("mass ratios must be positive")

    @property
    def N(self):
        return len(self.couplings)

    @property
    def omega_j(self):
        return np.array([w for w, _ in self.couplings], float)

    @property
    def mass_ratio(self):
        return np.array([r for _, r in self.couplings], float)


@dataclass(frozen=True)
class PerfectMirror:
    """Unit reflectivity at all frequencies."""


@dataclass(frozen=True)
class Vacuum:
    """No mirror: epsilon is one everywhere."""


DielectricModel = (DrudeLorentzModel, DiscreteBathModel, PerfectMirror, Vacuum)


def _check_bath_poles(model, z2):
    w2 = model.omega_j ** 2
    if w2.size and np.any(np.abs(np.subtract.outer(np.atleast_1d(z2), w2)) <= 1e-14 * w2):
        raise PoleHit("frequency coincides with a bath oscillator")


def _bath_sum(model, z2):
    """``sum_j r_j w_j^2 / (w_j^2 - z2)`` broadcast over ``z2``."""
    w2 = model.omega_j ** 2
    z2 = np.asarray(z2)
    if w2.size == 0:
        return np.zeros_like(z2)
    return np.sum(model.mass_ratio * w2 / (w2 - z2[..., None]), axis=-1)


def epsilon(model, zeta, unphysical_sheet=False):
    """Relative permittivity at complex frequency ``zeta``.

    Parameters
    ----------
    model : DrudeLorentzModel, DiscreteBathModel or Vacuum
    zeta : complex or array_like
        Frequency.  Drude-Lorentz requires ``Im zeta >= 0`` unless
        ``unphysical_sheet`` is set.

    Raises
    ------
    DomainError
        Drude-Lorentz evaluated below the real axis, or a perfect mirror.
    PoleHit
        Discrete bath evaluated at a resonance.
    """
    z = np.asarray(zeta, complex)
    if isinstance(model, Vacuum):
        return np.ones_like(z) if z.ndim else complex(1.0)
    if isinstance(model, PerfectMirror):
        raise DomainError("a perfect mirror has no finite permittivity")
    if isinstance(model, DrudeLorentzModel):
        if not unphysical_sheet and np.any(z.imag < 0):
            raise DomainError("Drude-Lorentz permittivity requested in the lower half-plane")
        den = z * (z + 1j * model.gamma) - model.omega_0 ** 2
        if np.any(den == 0):
            raise PoleHit("Drude-Lorentz pole")
        out = 1 - model.omega_p ** 2 / den
    elif isinstance(model, DiscreteBathModel):
        z2 = z * z
        _check_bath_poles(model, z2)
        br = z2 - model.omega_0 ** 2 + z2 * _bath_sum(model, z2)
        if np.any(np.abs(br) <= 1e-14 * np.maximum(np.abs(z2), model.omega_p ** 2)):
            raise PoleHit("permittivity pole")
        out = 1 - model.omega_p ** 2 / br
    else:
        raise TypeError(f"unknown dielectric model {model!r}")
    return out if z.ndim else complex(out)


def epsilon_imag_axis(model, xi):
    """``epsilon(i xi)`` as a real number (or array) for ``xi >= 0``."""
    xi = np.asarray(xi, float)
    if isinstance(model, Vacuum):
        return np.ones_like(xi)
    if isinstance(model, DrudeLorentzModel):
        mu = model.gamma
    elif isinstance(model, DiscreteBathModel):
        mu = xi * _bath_sum(model, -xi * xi).real if model.N else 0.0
    else:
        raise DomainError("no permittivity for this model")
    with np.errstate(divide="ignore"):
        return 1 + model.omega_p ** 2 / (xi * xi + model.omega_0 ** 2 + xi * mu)


def mu_discrete(model, zeta):
    """Bath memory function ``-i zeta sum_j r_j w_j^2 / (w_j^2 - zeta^2)``."""
    z = np.asarray(zeta, complex)
    _check_bath_poles(model, z * z)
    out = -1j * z * _bath_sum(model, z * z)
    return out if z.ndim else complex(out)


def polarizability_generalized(model, zeta, prefactor=None):
    """``A / (-zeta^2 + omega_0^2 - i zeta mu(zeta))``.

    ``A`` defaults to ``omega_p**2`` so that ``epsilon = 1 + alpha``.
    """
    z = np.asarray(zeta, complex)
    A = model.omega_p ** 2 if prefactor is None else prefactor
    if isinstance(model, DrudeLorentzModel):
        mu = model.gamma
    elif isinstance(model, DiscreteBathModel):
        mu = mu_discrete(model, z)
    else:
        raise DomainError("polarizability needs an oscillator model")
    den = -z * z + model.omega_0 ** 2 - 1j * z * mu
    if np.any(den == 0):
        raise PoleHit("polarizability pole")
    out = A / den
    return out if z.ndim else complex(out)


def make_ohmic_bath(gamma, omega_c, N, omega_p=1.0, omega_0=0.0, grid="linear",
                    omega_min=None):
    """Discretize an ohmic bath with constant damping ``gamma`` up to ``omega_c``.

    Each oscillator carries the quadrature weight of the spectral density,
    ``m_j/m = 2 gamma dw_j / (pi w_j^2)``.

    Parameters
    ----------
    grid : {'linear', 'log', 'quadratic'}
        Midpoint rule in ``w``, in ``log w`` (from ``omega_min``, default
        ``1e-3 omega_c``), or in ``t`` with ``w = omega_c t^2``.
    """
    if gamma < 0 or not omega_c > 0 or N < 0:
        raise ValueError("need gamma >= 0, omega_c > 0, N >= 0")
    if N == 0 or gamma == 0:
        return DiscreteBathModel(omega_p, omega_0, ())
    if grid == "linear":
        dw = omega_c / N
        w = (np.arange(N) + 0.5) * dw
        dw = np.full(N, dw)
    elif grid == "log":
        lo = omega_min if omega_min is not None else 1e-3 * omega_c
        e = np.geomspace(lo, omega_c, N + 1)
        w = np.sqrt(e[:-1] * e[1:])
        dw = w * math.log(omega_c / lo) / N
    elif grid == "quadratic":
        t = (np.arange(N) + 0.5) / N
        w = omega_c * t * t
        dw = 2 * omega_c * t / N
    else:
        raise ValueError(f"unknown grid {grid!r}")
    r = 2 * gamma * dw / (math.pi * w * w)
    return DiscreteBathModel(omega_p, omega_0, tuple(zip(w, r)))


def bath_poles(model):
    """Positive real poles of ``epsilon_N``, ascending.

    They are the zeros of ``1 - omega_0^2/x + sum_j r_j w_j^2/(w_j^2 - x)``
    in ``x = omega^2``, which increases between consecutive ``w_j^2``.
    """
    w2 = model.omega_j ** 2
    r = model.mass_ratio

    def g(x):
        return 1 - model.omega_0 ** 2 / x + np.sum(r * w2 / (w2 - x))

    edges = [0.0] + list(w2)
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        lo, hi = (a * (1 + 1e-15) if a > 0 else 1e-300), b * (1 - 1e-15)
        if a == 0 and model.omega_0 == 0:
            continue
        if g(lo) < 0 < g(hi):
            out.append(brentq(g, lo, hi, xtol=1e-300, rtol=8.9e-16))
    top = w2[-1] if w2.size else 0.0
    if top > 0 or model.omega_0 > 0:
        lo = top * (1 + 1e-15) if top > 0 else 1e-300
        hi = max(2 * lo, 1.0)
        while g(hi) < 0:
            hi *= 2
        out.append(brentq(g, lo, hi, xtol=1e-300, rtol=8.9e-16))
    return np.sqrt(np.array(out, float))
