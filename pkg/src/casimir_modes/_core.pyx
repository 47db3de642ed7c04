# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels.  Same signatures and semantics as ``_core_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, log1p, tanh, sin, cos, atan, atan2, fabs, isinf, NAN, M_PI

cnp.import_array()

BACKEND = "cython"


cdef inline double _bath_mu_imag(double xi, const double[::1] wj, const double[::1] rj) nogil:
    cdef Py_ssize_t j
    cdef double s = 0.0, w2
    for j in range(wj.shape[0]):
        w2 = wj[j] * wj[j]
        s += rj[j] * w2 / (w2 + xi * xi)
    return xi * s


cdef double _log_g_one(double k, double xi, double L, double d, bint tm, int kind,
                       double wp, double w0, double gam,
                       const double[::1] wj, const double[::1] rj) nogil:
    cdef double kap = sqrt(k * k + xi * xi)
    if isinf(L):
        return 0.0
    cdef double att = exp(-2.0 * kap * L)
    if kind == 3:
        return log1p(-att)
    cdef double ratio, inv_eps, den, mu, km, X, t, s, rho, num, e2, omt
    if kind == 0:
        ratio = 0.0
        inv_eps = 1.0
        km = kap
    else:
        if kind == 2:
            mu = _bath_mu_imag(xi, wj, rj)
        else:
            mu = gam
        den = xi * xi + w0 * w0 + xi * mu
        if den > 0:
            ratio = xi * xi / den
        elif kind == 2 or gam == 0:
            ratio = 1.0
        else:
            ratio = 0.0
        inv_eps = den / (den + wp * wp)
        km = sqrt(k * k + xi * xi + wp * wp * ratio)
    X = km * d
    if tm:
        if X < 1e-4:
            t = inv_eps * (1.0 / d + km * km * d / 3.0)
            num = kap - t
        else:
            e2 = exp(-2.0 * X)
            omt = 2.0 * e2 / (1.0 - e2)
            t = inv_eps * (km + km * omt)
            num = (kap - inv_eps * km) - inv_eps * km * omt
    else:
        # coth, tanh and kappa - kappa_m written without cancellation
        if X < 1e-4:
            t = km * km * d * (1.0 - X * X / 3.0)
            num = kap - t
        else:
            e2 = exp(-2.0 * X)
            omt = 2.0 * e2 / (1.0 + e2)
            t = km - km * omt
            num = km * omt
            if kind != 0:
                num -= wp * wp * ratio / (kap + km)
    s = kap + t
    rho = num / s if s > 0 else 0.0
    return log1p(-rho * rho * att)


def log_g_imag(k, xi, double L, double d, bint tm, int kind, double wp, double w0,
               double gam, wj, rj):
    kb, xb = np.broadcast_arrays(np.asarray(k, dtype=np.float64), np.asarray(xi, dtype=np.float64))
    shape = kb.shape
    cdef double[::1] kk = np.ascontiguousarray(kb).ravel()
    cdef double[::1] xx = np.ascontiguousarray(xb).ravel()
    cdef const double[::1] wv = np.ascontiguousarray(wj, dtype=np.float64).ravel()
    cdef const double[::1] rv = np.ascontiguousarray(rj, dtype=np.float64).ravel()
    out = np.empty(kk.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(kk.shape[0]):
            o[i] = _log_g_one(kk[i], xx[i], L, d, tm, kind, wp, w0, gam, wv, rv)
    return out.reshape(shape)


cdef inline double _eps_real(double x, double wp, double w0,
                             const double[::1] wj, const double[::1] rj) nogil:
    cdef Py_ssize_t j
    cdef double S = 0.0, w2
    for j in range(wj.shape[0]):
        w2 = wj[j] * wj[j]
        S += rj[j] * w2 / (w2 - x)
    return 1.0 - wp * wp / (x - w0 * w0 + x * S)


cdef inline double _carctan(double r, double u) nogil:
    cdef double su = sin(u), cu = cos(u)
    return u + atan2((r - 1.0) * su * cu, cu * cu + r * su * su)


cdef double _level(double w, int which, double k, double L, double d, bint tm,
                   double wp, double w0, const double[::1] wj, const double[::1] rj) nogil:
    cdef double x = w * w
    cdef double e = _eps_real(x, wp, w0, wj, rj)
    cdef double m2 = k * k - e * x
    cdef double z2 = k * k - x
    cdef double z = sqrt(fabs(z2))
    cdef double s = sqrt(fabs(m2))
    cdef double u = s * d
    cdef double a, th, kl
    if m2 < 0:
        if tm:
            a = _carctan(z * e / s, u)
        else:
            a = 0.5 * M_PI + _carctan(s / z, u)
    else:
        if tm:
            th = tanh(u) / s if u > 1e-8 else d
            a = atan(z * e * th)
        else:
            a = atan2(z, s * tanh(u))
    if z2 < 0:
        if which == 1:
            return NAN
        return (z * L + 2.0 * a) / M_PI
    kl = z * L / 2.0
    if which == 0:
        return (a + atan(1.0 / tanh(kl))) / M_PI
    return (a + atan(tanh(kl))) / M_PI


def eps_real_bath(x, double wp, double w0, wj, rj):
    xa = np.asarray(x, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(xa).ravel()
    cdef const double[::1] wv = np.ascontiguousarray(wj, dtype=np.float64).ravel()
    cdef const double[::1] rv = np.ascontiguousarray(rj, dtype=np.float64).ravel()
    out = np.empty(xv.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            o[i] = _eps_real(xv[i], wp, w0, wv, rv)
    return out.reshape(xa.shape)


def mode_levels(w, double k, double L, double d, bint tm, double wp, double w0, wj, rj):
    wa = np.asarray(w, dtype=np.float64)
    cdef double[::1] wv_ = np.ascontiguousarray(wa).ravel()
    cdef const double[::1] wv = np.ascontiguousarray(wj, dtype=np.float64).ravel()
    cdef const double[::1] rv = np.ascontiguousarray(rj, dtype=np.float64).ravel()
    l1 = np.empty(wv_.shape[0])
    l2 = np.empty(wv_.shape[0])
    cdef double[::1] a1 = l1
    cdef double[::1] a2 = l2
    cdef Py_ssize_t i
    with nogil:
        for i in range(wv_.shape[0]):
            a1[i] = _level(wv_[i], 0, k, L, d, tm, wp, w0, wv, rv)
            a2[i] = _level(wv_[i], 1, k, L, d, tm, wp, w0, wv, rv)
    return l1.reshape(wa.shape), l2.reshape(wa.shape)


def solve_levels(lo, hi, n, int which, double k, double L, double d, bint tm,
                 double wp, double w0, wj, rj, int iters=64):
    cdef double[::1] lv = np.array(lo, dtype=np.float64).ravel()
    cdef double[::1] hv = np.array(hi, dtype=np.float64).ravel()
    cdef double[::1] nv = np.ascontiguousarray(n, dtype=np.float64).ravel()
    cdef const double[::1] wv = np.ascontiguousarray(wj, dtype=np.float64).ravel()
    cdef const double[::1] rv = np.ascontiguousarray(rj, dtype=np.float64).ravel()
    out = np.empty(lv.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef int it
    cdef double a, b, fa, m, fm
    with nogil:
        for i in range(lv.shape[0]):
            a = lv[i]
            b = hv[i]
            fa = _level(a, which, k, L, d, tm, wp, w0, wv, rv) - nv[i]
            for it in range(iters):
                m = 0.5 * (a + b)
                fm = _level(m, which, k, L, d, tm, wp, w0, wv, rv) - nv[i]
                if (fm > 0) == (fa > 0) and (fm < 0) == (fa < 0):
                    a = m
                    fa = fm
                else:
                    b = m
                if b - a <= 4e-16 * b:
                    break
            o[i] = 0.5 * (a + b)
    return out
