"""Pure-numpy kernels; reference implementation of the compiled ``_core``.

Material parameters are passed flat: ``kind`` (0 vacuum, 1 Drude-Lorentz,
2 discrete bath, 3 perfect mirror), ``wp``, ``w0``, ``gam`` and the bath
arrays ``wj``, ``rj``.  Slab thickness ``d = inf`` selects the bulk limit.
"""
import numpy as np

BACKEND = "python"

_HALF_PI = 0.5 * np.pi


def _den_imag(xi, kind, w0, gam, wj, rj):
    """``xi^2 + w0^2 + xi mu(i xi)``."""
    if kind == 2 and len(wj):
        w2 = np.asarray(wj) ** 2
        mu = xi * np.sum(np.asarray(rj) * w2 / (w2 + (xi * xi)[..., None]), axis=-1)
    elif kind == 1:
        mu = gam
    else:
        mu = 0.0
    return xi * xi + w0 * w0 + xi * mu


def log_g_imag(k, xi, L, d, tm, kind, wp, w0, gam, wj, rj):
    """``ln(1 - rho^2 exp(-2 kappa L))`` at ``zeta = i xi``, elementwise."""
    k = np.asarray(k, float)
    xi = np.asarray(xi, float)
    k, xi = np.broadcast_arrays(k, xi)
    kap = np.sqrt(k * k + xi * xi)
    if np.isinf(L):
        return np.zeros_like(kap)
    att = np.exp(-2 * kap * L)
    if kind == 3:
        with np.errstate(divide="ignore"):  # -inf at k = xi = 0 is integrable
            return np.log1p(-att)
    if kind == 0:
        ratio = np.zeros_like(xi)
        inv_eps = np.ones_like(xi)
    else:
        den = _den_imag(xi, kind, w0, gam, wj, rj)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(den > 0, xi * xi / np.where(den > 0, den, 1.0),
                             1.0 if (kind == 2 or gam == 0) else 0.0)
        inv_eps = den / (den + wp * wp)
    km = np.sqrt(k * k + xi * xi + wp * wp * ratio * (kind != 0))
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        X = km * d
        if tm:
            e2 = np.exp(-2 * X)
            cm1 = 2 * e2 / (1 - e2)
            small = X < 1e-4
            t = inv_eps * np.where(small, 1.0 / d + km * km * d / 3, km + km * cm1)
            num = np.where(small, kap - t, (kap - inv_eps * km) - inv_eps * km * cm1)
        else:
            # coth, tanh and kappa - kappa_m written without cancellation
            e2 = np.exp(-2 * X)
            omt = 2 * e2 / (1 + e2)
            dk = -wp * wp * ratio * (kind != 0) / (kap + km)
            small = X < 1e-4
            t = np.where(small, km * km * d * (1 - X * X / 3), km - km * omt)
            num = np.where(small, kap - t, dk + km * omt)
        s = kap + t
        rho = np.where(s > 0, num / np.where(s > 0, s, 1.0), 0.0)
        return np.log1p(-rho * rho * att)


def eps_real_bath(x, wp, w0, wj, rj):
    """Reversible permittivity at real ``omega`` given ``x = omega^2``."""
    x = np.asarray(x, float)
    w2 = np.asarray(wj, float) ** 2
    if w2.size:
        S = np.sum(np.asarray(rj) * w2 / (w2 - x[..., None]), axis=-1)
    else:
        S = 0.0
    br = x - w0 * w0 + x * S
    with np.errstate(divide="ignore"):
        return 1 - wp * wp / br


def _carctan(r, u):
    su, cu = np.sin(u), np.cos(u)
    return u + np.arctan2((r - 1) * su * cu, cu * cu + r * su * su)


def mode_levels(w, k, L, d, tm, wp, w0, wj, rj):
    """Continuous level functions whose integer crossings are the modes.

    Returns ``(l1, l2)``.  Above the light line ``l1`` is the propagating
    phase over ``pi`` and ``l2`` is NaN.  Below it ``l1``, ``l2`` belong to
    the odd and even cavity families.
    """
    w = np.asarray(w, float)
    x = w * w
    e = eps_real_bath(x, wp, w0, wj, rj)
    m2 = k * k - e * x
    z2 = k * k - x
    z = np.sqrt(np.abs(z2))
    s = np.sqrt(np.abs(m2))
    u = s * d
    with np.errstate(all="ignore"):
        if tm:
            a_s = _carctan(z * e / s, u)
            th = np.where(u > 1e-8, np.tanh(u) / np.where(s > 0, s, 1.0), d)
            a_k = np.arctan(z * e * th)
        else:
            a_s = _HALF_PI + _carctan(s / z, u)
            a_k = np.arctan2(z, s * np.tanh(u))
        a = np.where(m2 < 0, a_s, a_k)
        prop = z2 < 0
        kl = z * L / 2
        psi1 = -np.arctan(1 / np.tanh(kl))
        psi2 = -np.arctan(np.tanh(kl))
        l1 = np.where(prop, (z * L + 2 * a) / np.pi, (a - psi1) / np.pi)
        l2 = np.where(prop, np.nan, (a - psi2) / np.pi)
    return l1, l2


def solve_levels(lo, hi, n, which, k, L, d, tm, wp, w0, wj, rj, iters=64):
    """Bisection for ``level_which(w) = n`` inside each bracket ``[lo, hi]``."""
    lo = np.array(lo, float)
    hi = np.array(hi, float)
    n = np.asarray(n, float)
    f = lambda w: mode_levels(w, k, L, d, tm, wp, w0, wj, rj)[which] - n
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
        if np.all(hi - lo <= 4e-16 * hi):
            break
    return 0.5 * (lo + hi)
