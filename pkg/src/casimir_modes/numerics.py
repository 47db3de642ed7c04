"""Shared numerical engines.

Quadrature wraps QUADPACK (``scipy.integrate.quad``), the error function
family comes from ``scipy.special``.  Root counting uses the argument
principle on rectangles with adaptive phase tracking.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import special
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from .errors import BoundaryZero, DomainError, NonConvergence


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")

    def __float__(self):
        return float(np.real(self.value))


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("degenerate rectangle")

    @property
    def diagonal(self):
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    @property
    def center(self):
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def contains(self, z, pad=0.0):
        return (self.re_min - pad <= z.real <= self.re_max + pad
                and self.im_min - pad <= z.imag <= self.im_max + pad)

    def dilate(self, frac):
        e = frac * self.diagonal
        return Rectangle(self.re_min - e, self.re_max + e, self.im_min - e, self.im_max + e)

    def split(self, offset=0.0):
        """Two halves along the longer side; ``offset`` shifts the cut."""
        t = 0.5 + offset
        if self.re_max - self.re_min >= self.im_max - self.im_min:
            c = self.re_min + t * (self.re_max - self.re_min)
            return (Rectangle(self.re_min, c, self.im_min, self.im_max),
                    Rectangle(c, self.re_max, self.im_min, self.im_max))
        c = self.im_min + t * (self.im_max - self.im_min)
        return (Rectangle(self.re_min, self.re_max, self.im_min, c),
                Rectangle(self.re_min, self.re_max, c, self.im_max))


# ---------------------------------------------------------------- quadrature

def _quad_real(f, a, b, tol, limit, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        out = quad(f, a, b, epsabs=tol, epsrel=tol, limit=limit, full_output=1, **kw)
    value, err, info = out[0], out[1], out[2]
    failed = len(out) > 3
    if failed and not err <= tol * max(1.0, abs(value)):
        raise NonConvergence(f"quadrature on [{a}, {b}] failed: {out[3]!s:.80}")
    return value, err, info["neval"]


def _integrate(f, a, b, tol, limit, complex_valued, **kw):
    if complex_valued:
        re = _quad_real(lambda x: np.real(f(x)), a, b, tol, limit, **kw)
        im = _quad_real(lambda x: np.imag(f(x)), a, b, tol, limit, **kw)
        return QuadratureResult(complex(re[0], im[0]), math.hypot(re[1], im[1]), re[2] + im[2])
    v, e, n = _quad_real(f, a, b, tol, limit, **kw)
    return QuadratureResult(v, e, n)


def integrate_finite(f, a, b, tol=1e-10, limit=500, complex_valued=False, points=None):
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``."""
    kw = {"points": points} if points is not None else {}
    return _integrate(f, a, b, tol, limit, complex_valued, **kw)


def integrate_semi_infinite(f, tol=1e-10, a=0.0, limit=500, complex_valued=False):
    """Integral of ``f`` over ``[a, inf)``.

    The infinite range is mapped onto a finite one inside QUADPACK (qagi).

    Raises
    ------
    NonConvergence
        If the subdivision budget is exhausted before ``tol`` is met.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _integrate(f, a, np.inf, tol, limit, complex_valued)


def integrate_principal_value(f, pole, upper=np.inf, tol=1e-10, limit=500):
    """PV of ``int_0^upper f(xi) * 2 xi0 / (xi^2 - xi0^2) dxi`` with ``xi0 = pole``."""
    x0 = float(pole)
    if x0 <= 0:
        raise DomainError("pole must be positive")
    if upper <= x0:
        g = lambda x: f(x) * 2 * x0 / (x * x - x0 * x0)
        return integrate_finite(g, 0.0, upper, tol, limit)
    c = min(2.0 * x0, upper)
    g = lambda x: f(x) * 2 * x0 / (x + x0)
    v1, e1, n1 = _quad_real(g, 0.0, c, tol, limit, weight="cauchy", wvar=x0)
    v2 = e2 = 0.0
    n2 = 0
    if upper > c:
        h = lambda x: f(x) * 2 * x0 / (x * x - x0 * x0)
        v2, e2, n2 = _quad_real(h, c, upper, tol, limit)
    return QuadratureResult(v1 + v2, e1 + e2, n1 + n2)


def gauss_legendre_panels(edges, n):
    """Composite Gauss-Legendre nodes and weights on consecutive panels."""
    x, w = np.polynomial.legendre.leggauss(n)
    edges = np.asarray(edges, float)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x[None, :] + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


# ----------------------------------------------------------------- Matsubara

def matsubara_sum(term, temperature_wavenumber, tol=1e-10, max_terms=10_000_000,
                  full_output=False):
    """Primed sum ``term(0)/2 + sum_{l>=1} term(l)``.

    Summation stops once a bound on the remainder drops below
    ``tol * |partial sum|``.  Geometric decay gives the bound
    ``|t_l| r / (1 - r)``; algebraic decay ``l^-p`` gives ``|t_l| l / (p - 1)``.
    """
    if not temperature_wavenumber > 0:
        raise DomainError("temperature wavenumber must be positive")
    s = 0.5 * term(0)
    prev = None
    zeros = 0
    bound = np.inf
    for l in range(1, max_terms + 1):
        t = term(l)
        s += t
        at = abs(t)
        if at == 0.0:
            zeros += 1
            if zeros >= 3:
                bound = 0.0
                break
        else:
            zeros = 0
        if prev is not None and prev > 0 and at > 0:
            r = at / prev
            if r < 0.95:
                bound = at * r / (1 - r)
            else:
                p = math.log(prev / at) / math.log(l / (l - 1))
                bound = at * l / (p - 1) if p > 1.05 else np.inf
            if bound <= tol * abs(s):
                break
        prev = at
    else:
        raise NonConvergence("Matsubara terms did not decay within the iteration budget")
    if full_output:
        return s, l, bound
    return s


# ------------------------------------------------------------------- roots

def find_real_roots(g, interval, scan_points):
    """All sign-change roots of ``g`` found on a uniform scan of ``interval``."""
    a, b = map(float, interval)
    if scan_points < 2:
        raise ValueError("scan_points must be >= 2")
    x = np.linspace(a, b, int(scan_points))
    v = _eval_real(g, x)
    roots = list(x[v == 0.0])
    s = np.sign(v)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    for i in idx:
        xt = 1e-15 * max(1.0, abs(x[i]))
        roots.append(brentq(g, x[i], x[i + 1], xtol=xt, rtol=8.9e-16))
    roots = np.sort(np.asarray(roots, float))
    if len(roots) > 1:
        keep = np.concatenate([[True], np.diff(roots) > 1e-14 * np.maximum(1.0, np.abs(roots[1:]))])
        roots = roots[keep]
    return roots


def _eval_real(g, x):
    try:
        v = np.asarray(g(x), float)
        if v.shape == x.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([g(xi) for xi in x], float)


def _eval_complex(h, z):
    try:
        v = np.asarray(h(z), complex)
        if v.shape == z.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([h(zi) for zi in z], complex)


def _side_winding(h, a, b, n, floor, max_depth=24):
    t = np.linspace(0.0, 1.0, n + 1)
    z = a + (b - a) * t
    v = _eval_complex(h, z)
    vmin = np.min(np.abs(v))
    if not vmin > floor:
        raise BoundaryZero("|h| below threshold on the boundary")
    d = np.angle(v[1:] / v[:-1])
    ok = np.abs(d) < np.pi / 4
    total = float(np.sum(d[ok]))
    stack = [(z[i], z[i + 1], v[i], v[i + 1], 0) for i in np.nonzero(~ok)[0]]
    while stack:
        z0, z1, v0, v1, depth = stack.pop()
        d = np.angle(v1 / v0)
        if abs(d) < np.pi / 4:
            total += d
            continue
        if depth >= max_depth:
            raise BoundaryZero(f"phase not resolved near {z0:.6g}")
        zm = 0.5 * (z0 + z1)
        vm = complex(_eval_complex(h, np.array([zm]))[0])
        vmin = min(vmin, abs(vm))
        if abs(vm) <= floor:
            raise BoundaryZero(f"|h| below threshold at {zm:.6g}")
        stack.append((zm, z1, vm, v1, depth + 1))
        stack.append((z0, zm, v0, vm, depth + 1))
    return total, vmin, np.max(np.abs(v))


def count_zeros(h, region, samples_per_side=128, threshold=1e-12):
    """Number of zeros of ``h`` inside ``region`` (argument principle).

    Raises
    ------
    BoundaryZero
        When ``|h|`` on the boundary falls below ``threshold`` times its
        typical size or the phase cannot be resolved.
    """
    r = region
    corners = [complex(r.re_min, r.im_min), complex(r.re_max, r.im_min),
               complex(r.re_max, r.im_max), complex(r.re_min, r.im_max)]
    probe = _eval_complex(h, np.array(corners + [r.center]))
    scale = float(np.max(np.abs(probe)))
    if not np.isfinite(scale):
        raise BoundaryZero("non-finite function value on the boundary")
    floor = threshold * scale
    total = 0.0
    for i in range(4):
        w, vmin, _ = _side_winding(h, corners[i], corners[(i + 1) % 4], samples_per_side, floor)
        if vmin <= floor:
            raise BoundaryZero("|h| below threshold on the boundary")
        total += w
    n = total / (2 * np.pi)
    k = int(round(n))
    if abs(n - k) > 0.05:
        raise BoundaryZero(f"non-integer winding {n:.4f}")
    return k


def _newton(h, z, tol, maxit=60):
    for _ in range(maxit):
        step = max(1e-7, 1e-7 * abs(z))
        hz = complex(_eval_complex(h, np.array([z]))[0])
        hp = (complex(_eval_complex(h, np.array([z + step]))[0])
              - complex(_eval_complex(h, np.array([z - step]))[0])) / (2 * step)
        if hp == 0 or not np.isfinite(hp):
            return None
        dz = hz / hp
        z = z - dz
        if abs(dz) <= tol:
            return z
    return None


def _count_retry(h, rect, samples):
    try:
        return count_zeros(h, rect, samples), rect
    except BoundaryZero:
        rect = rect.dilate(1e-6)
        return count_zeros(h, rect, samples), rect


def find_complex_roots(h, region, tol=1e-10, samples_per_side=128, min_size=None):
    """Locate every zero of ``h`` inside ``region``.

    Recursive bisection driven by :func:`count_zeros`, then Newton polishing
    with a central-difference derivative.  Roots closer than ``10 tol`` are
    merged.  The returned list is sorted by real part, then imaginary part.
    """
    total, region = _count_retry(h, region, samples_per_side)
    if total == 0:
        return []
    min_size = min_size if min_size is not None else 1e3 * tol
    roots = []
    stack = [(region, total)]
    while stack:
        rect, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            z = _newton(h, rect.center, tol)
            if z is not None and rect.contains(z, pad=1e-9 * rect.diagonal):
                roots.append(z)
                continue
        if rect.diagonal < min_size:
            z = _newton(h, rect.center, tol) if n == 1 else None
            roots.extend([z if z is not None else rect.center] * n)
            continue
        for off in (0.0, 0.0137, -0.0291, 0.0419):
            a, b = rect.split(off)
            try:
                na = count_zeros(h, a, samples_per_side)
                nb = count_zeros(h, b, samples_per_side)
            except BoundaryZero:
                continue
            if na + nb == n:
                stack.append((a, na))
                stack.append((b, nb))
                break
        else:
            raise NonConvergence("could not split rectangle cleanly")
    roots = _dedupe(roots, 10 * tol)
    if len(roots) != total:
        raise NonConvergence(f"found {len(roots)} roots, argument principle counts {total}")
    return sorted(roots, key=lambda z: (z.real, z.imag))


def _dedupe(roots, eps):
    out = []
    for z in roots:
        if all(abs(z - w) > eps for w in out):
            out.append(z)
    return out


# ------------------------------------------------------------ error function

def erf_real_line(x):
    """Error function on the real line."""
    return special.erf(x)


def erf_scaled_imag(y):
    """``exp(-z^2) (1 + erf(i z))`` at ``z = i y``, i.e. ``exp(y^2) erfc(y)``.

    This is the Faddeeva function on the imaginary axis; it stays finite
    for large positive ``y`` where the naive product overflows.
    """
    return special.erfcx(y)


def faddeeva(z):
    """``exp(-z^2) (1 + erf(i z))`` for complex ``z``."""
    return special.wofz(z)
