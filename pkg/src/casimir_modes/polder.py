"""Casimir-Polder interaction of a field-dressed Gaussian dipole with a half-space.

Gaussian units with hbar = c = 1.  The dipole is a charged oscillator
(bare mass ``m0``, spring ``K0``, coupling ``q``) smeared by the form
factor ``|rho(k)|^2 = exp(-k^2 a^2/pi)``.  Its self-interaction with the
vacuum field renormalizes mass and spring constant and adds a
frequency-dependent radiative damping.  The scattered Green tensor of the
half-space is diagonal, ``xx = yy`` and ``zz``.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import special

from ._core_py import _den_imag
from .dielectric import PerfectMirror, Vacuum
from .errors import DomainError, GeometryError, StrongCouplingError
from .numerics import integrate_finite
from .planar import material_params

SQRT_PI = math.sqrt(math.pi)
DECAY = 40.0  # exp(-2 kappa z0) is negligible beyond kappa z0 = DECAY
_ASYMPTOTIC_X = 12.0
_LAGUERRE = np.polynomial.laguerre.laggauss(80)


@dataclass(frozen=True)
class GaussianDipole:
    m0: float
    K0: float
    q: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("the form-factor radius a must be positive")
        if not self.m0 > 0:
            raise ValueError("bare mass must be positive")
        if not self.K > 0:
            raise ValueError("renormalized spring constant must be positive")

    @property
    def m(self):
        """Renormalized mass ``m0 + 2 q^2/(3a)``."""
        return self.m0 + 2 * self.q ** 2 / (3 * self.a)

    @property
    def K(self):
        """Shifted spring constant ``K0 + pi q^2/(6 a^3)``."""
        return self.K0 + math.pi * self.q ** 2 / (6 * self.a ** 3)

    @property
    def static_polarizability(self):
        return self.q ** 2 / self.K

    @property
    def resonance(self):
        return math.sqrt(self.K / self.m)


@dataclass(frozen=True)
class HalfSpaceGeometry:
    mirror: object
    distance: float

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError("distance must be positive")


def _one_minus_x_erfcx(x):
    """``1 - sqrt(pi) x erfcx(x)`` for ``x >= 0`` without cancellation."""
    x = np.asarray(x, float)
    out = np.empty_like(x)
    small = x < _ASYMPTOTIC_X
    out[small] = 1 - SQRT_PI * x[small] * special.erfcx(x[small])
    xl = x[~small]
    if xl.size:
        # 1 - sqrt(pi) x erfcx(x) = sum_{n>=1} (-1)^(n+1) (2n-1)!! / (2x^2)^n
        u = 1 / (2 * xl * xl)
        term = u.copy()
        acc = term.copy()
        for n in range(2, 40):
            term = -term * (2 * n - 1) * u
            acc += term
        out[~small] = acc
    return out


def _imag_axis(zeta):
    z = np.asarray(zeta, complex)
    return bool(np.all(z.real == 0) and np.all(z.imag >= 0)), z


def _bracket_imag(dipole, xi):
    """``1 - a xi erfcx(a xi/sqrt(pi))``; the bracket of the vacuum term at ``i xi``."""
    return _one_minus_x_erfcx(dipole.a * np.asarray(xi, float) / SQRT_PI)


def vacuum_green_avg(dipole, zeta):
    """Form-factor averaged free Green function ``<G0>`` (isotropic part).

    ``(2 w^2/3a) [1 + i a w W(a w/sqrt(pi))] - pi/(6 a^3)`` with the
    Faddeeva function ``W``.  On the imaginary axis the bracket is real and
    evaluated through the scaled complementary error function.
    """
    a = dipole.a
    imag, z = _imag_axis(zeta)
    if imag:
        xi = z.imag
        out = -(2 * xi * xi / (3 * a)) * _bracket_imag(dipole, xi) - math.pi / (6 * a ** 3)
        out = out + 0j
    else:
        out = (2 * z * z / (3 * a)) * (1 + 1j * a * z * special.wofz(a * z / SQRT_PI)) \
            - math.pi / (6 * a ** 3)
    return out if z.ndim else complex(out)


def radiative_damping(dipole, omega):
    """``Gamma(w) = (2 q^2 w^2/3) exp(-w^2 a^2/pi) (1 + erf(i a w/sqrt(pi)))``."""
    z = np.asarray(omega, complex)
    out = (2 * dipole.q ** 2 * z * z / 3) * special.wofz(dipole.a * z / SQRT_PI)
    return out if z.ndim else complex(out)


def polarizability_denominator(dipole, zeta):
    """``-m w^2 + K - i w Gamma(w)``; its zeros are the dipole resonances."""
    imag, z = _imag_axis(zeta)
    if imag:
        xi = z.imag
        # K + m0 xi^2 + (2 q^2 xi^2/3a)(1 - a xi erfcx): every term non-negative
        out = (dipole.K + dipole.m0 * xi * xi
               + (2 * dipole.q ** 2 * xi * xi / (3 * dipole.a)) * _bracket_imag(dipole, xi)) + 0j
    else:
        out = -dipole.m * z * z + dipole.K - 1j * z * radiative_damping(dipole, z)
    return out if z.ndim else complex(out)


def dressed_polarizability(dipole, zeta):
    """Vacuum-dressed polarizability ``q^2 / (-m w^2 + K - i w Gamma(w))``."""
    den = polarizability_denominator(dipole, zeta)
    out = dipole.q ** 2 / den
    return out if np.ndim(out) else complex(out)


def _reflection(model, kap, xi):
    """Half-space ``(r_TE, r_TM)`` at ``i xi``; a perfect mirror gives ``(-1, 1)``."""
    kap = np.asarray(kap, float)
    if isinstance(model, PerfectMirror):
        return -np.ones_like(kap), np.ones_like(kap)
    if isinstance(model, Vacuum):
        return np.zeros_like(kap), np.zeros_like(kap)
    kind, wp, w0, gam, wj, rj = material_params(model)
    den = float(_den_imag(np.array(xi, float), kind, w0, gam, wj, rj))
    if den > 0:
        ratio, inv_eps = xi * xi / den, den / (den + wp * wp)
    else:
        ratio, inv_eps = (1.0 if (kind == 2 or gam == 0) else 0.0), 0.0
    km = np.sqrt(kap * kap + wp * wp * ratio)
    # kappa - kappa_m = -wp^2 ratio/(kappa + kappa_m) avoids cancellation
    rte = -wp * wp * ratio / (kap + km) ** 2
    rtm = (kap - inv_eps * km) / (kap + inv_eps * km)
    return rte, rtm


def _green_terms(model, xi, z0, order):
    """``(xx, zz)`` of ``d^order/dz0^order`` of the scattered Green tensor."""
    # kappa = xi + s/(2 z0): the exponential becomes exp(-2 xi z0) exp(-s)
    s, w = _LAGUERRE
    kap = xi + s / (2 * z0)
    rte, rtm = _reflection(model, kap, xi)
    fac = w * math.exp(-2 * xi * z0) / (2 * z0) * (-2 * kap) ** order
    xx = 0.5 * np.sum(fac * (kap * kap * rtm - xi * xi * rte))
    zz = np.sum(fac * (kap * kap - xi * xi) * rtm)
    return float(xx), float(zz)


def scattered_green_halfspace(halfspace, z0, xi):
    """Scattered Green tensor at the dipole position, ``(xx, zz)`` at ``i xi``.

    ``xx = (1/2) int_xi^inf dkappa exp(-2 kappa z0) (kappa^2 r_TM - xi^2 r_TE)``
    and ``zz = int_xi^inf dkappa exp(-2 kappa z0) (kappa^2 - xi^2) r_TM``,
    using ``k dk = kappa dkappa``.  The integral runs as Gauss-Laguerre
    quadrature in ``2 (kappa - xi) z0``, accurate to about ``1e-7`` relative
    when the mirror scale is far below ``1/z0``.
    """
    if xi < 0:
        raise DomainError("xi must be non-negative")
    if not z0 > 0:
        raise ValueError("z0 must be positive")
    return _green_terms(halfspace.mirror, float(xi), float(z0), 0)


def _check_geometry(dipole, halfspace):
    if dipole.a >= halfspace.distance / 20:
        raise GeometryError("point evaluation of the Green tensor needs a < z0/20")


def _xi_edges(dipole, halfspace):
    z0 = halfspace.distance
    top = DECAY / z0
    feats = [c / z0 for c in (0.25, 1.0, 4.0, 16.0)]
    feats += [dipole.resonance * c for c in (0.5, 1.0, 2.0)]
    feats += [f * c for f in _mirror_scales(halfspace.mirror) for c in (0.5, 1.0, 2.0)]
    e = np.unique(np.array([0.0, top] + feats))
    return e[(e >= 0) & (e <= top)]


def _mirror_scales(model):
    return [v for v in (getattr(model, n, 0.0) for n in ("omega_p", "omega_0", "gamma"))
            if v and v > 0]


def _xi_integral(f, dipole, halfspace, tol):
    e = _xi_edges(dipole, halfspace)
    total = 0.0
    for lo, hi in zip(e[:-1], e[1:]):
        total += integrate_finite(f, lo, hi, tol=tol, limit=200).value
    return total / (2 * np.pi)


def _log_argument(alpha, g):
    arg = 1 - alpha * g
    if not arg > 0:
        raise StrongCouplingError(f"1 - alpha G = {arg:.3g} leaves the principal branch")
    return arg


def cp_energy_exact(dipole, halfspace, tol=1e-12):
    """``int_0^inf dxi/2pi tr ln[1 - alpha_d(i xi) <G_chi>(i xi, z0)]``.

    Raises
    ------
    StrongCouplingError
        If ``1 - alpha G`` is not positive on the integration ray.
    GeometryError
        If ``a >= z0/20``.
    """
    if isinstance(halfspace.mirror, Vacuum):
        return 0.0
    _check_geometry(dipole, halfspace)
    z0 = halfspace.distance

    def f(xi):
        al = dressed_polarizability(dipole, 1j * xi).real
        xx, zz = _green_terms(halfspace.mirror, xi, z0, 0)
        _log_argument(al, xx), _log_argument(al, zz)
        return 2 * math.log1p(-al * xx) + math.log1p(-al * zz)

    return _xi_integral(f, dipole, halfspace, tol)


def cp_energy_perturbative(dipole, halfspace, tol=1e-12):
    """First order ``-int_0^inf dxi/2pi tr[alpha_d(i xi) <G_chi>(i xi, z0)]``."""
    if isinstance(halfspace.mirror, Vacuum):
        return 0.0
    _check_geometry(dipole, halfspace)
    z0 = halfspace.distance

    def f(xi):
        al = dressed_polarizability(dipole, 1j * xi).real
        xx, zz = _green_terms(halfspace.mirror, xi, z0, 0)
        return -al * (2 * xx + zz)

    return _xi_integral(f, dipole, halfspace, tol)


def cp_force(dipole, halfspace, mode="exact", tol=1e-12):
    """Force ``-dE/dz0``; negative values attract the dipole to the surface.

    ``mode='exact'`` uses the polarizability dressed by the total field,
    ``alpha_d / (1 - alpha_d G)``; ``'perturbative'`` uses ``alpha_d``.
    """
    if mode not in ("exact", "perturbative"):
        raise ValueError("mode must be 'exact' or 'perturbative'")
    if isinstance(halfspace.mirror, Vacuum):
        return 0.0
    _check_geometry(dipole, halfspace)
    z0 = halfspace.distance

    def f(xi):
        al = dressed_polarizability(dipole, 1j * xi).real
        dxx, dzz = _green_terms(halfspace.mirror, xi, z0, 1)
        if mode == "perturbative":
            return al * (2 * dxx + dzz)
        xx, zz = _green_terms(halfspace.mirror, xi, z0, 0)
        return (2 * al / _log_argument(al, xx) * dxx + al / _log_argument(al, zz) * dzz)

    return _xi_integral(f, dipole, halfspace, tol)
