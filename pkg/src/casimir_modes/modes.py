"""Mode sums: real spectra of reversible mirrors, complex resonances of lossy ones.

Real spectra
    A discrete-bath mirror has a real, even permittivity, so every cavity
    mode lies on the real axis.  Modes are the integer crossings of
    continuous level functions (see ``_core_py.mode_levels``).  Below each
    pole ``p`` of ``eps_N`` the modes accumulate; a window ``(p - delta, p)``
    is cut out and replaced by its asymptotic contribution.  The regulated
    zero-point sum uses the cutoff ``F(w) = (w/2) exp(-w/Omega)`` and is
    extrapolated in ``delta`` and ``Omega``.

Complex resonances
    For a dissipative mirror the modes move below the real axis and are
    summed with the logarithmic counterterm ``-(2i/pi) w ln(w/Lambda)``.
"""
from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy import special
from scipy.integrate import quad

from . import _backend
from .dielectric import DiscreteBathModel, DrudeLorentzModel, bath_poles, epsilon
from .errors import (ContinuationWarning, CountMismatch, DomainError, SumRuleViolation)
from .lifshitz import EnergyResult, Route
from .numerics import (Rectangle, count_zeros, find_complex_roots, find_real_roots,
                       gauss_legendre_panels, integrate_finite, integrate_principal_value,
                       integrate_semi_infinite)
from .planar import TE, TM, TransverseChannel, log_g_imag

LIGHT_LINE_OFFSET = 1e-13


# ------------------------------------------------------------------ types

@dataclass(frozen=True)
class ModeSpectrum:
    channel: TransverseChannel
    frequencies: np.ndarray
    omega_max: float
    gap: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        f = np.asarray(self.frequencies, float)
        if f.size and (np.any(np.diff(f) <= 0) or f[0] <= 0 or f[-1] > self.omega_max):
            raise ValueError("frequencies must be positive, increasing and below omega_max")
        object.__setattr__(self, "frequencies", f)


@dataclass(frozen=True)
class ResonanceSet:
    channel: TransverseChannel
    complex_pairs: tuple
    imaginary_modes: tuple
    region: Rectangle
    gap: float = math.inf

    def __post_init__(self):
        for z in self.complex_pairs:
            # Im = 0 only occurs for lossless mirrors
            if not (z.real > 0 and z.imag <= 0):
                raise ValueError(f"resonance {z} outside the fourth quadrant")
        if any(x <= 0 for x in self.imaginary_modes):
            raise ValueError("imaginary modes are stored as positive xi")

    def weighted(self):
        """Frequencies with their primed-sum weights."""
        z = [complex(w) for w in self.complex_pairs] + [-1j * x for x in self.imaginary_modes]
        wt = [1.0] * len(self.complex_pairs) + [0.5] * len(self.imaginary_modes)
        return np.array(z, complex), np.array(wt)

    def to_record(self):
        return {"polarization": self.channel.polarization, "k": self.channel.k, "L": self.gap,
                "complex": [[z.real, z.imag] for z in self.complex_pairs],
                "imaginary": list(self.imaginary_modes)}


@dataclass(frozen=True)
class IdentityCase:
    omega_0: complex
    f_spec: str = "rational2"
    scale: float = None
    tolerance: float = 1e-7

    def __post_init__(self):
        z = complex(self.omega_0)
        if z.real < 0 or z.imag > 0:
            raise ValueError("omega_0 must lie in the closed fourth quadrant")
        if self.f_spec not in TEST_FUNCTIONS:
            raise ValueError(f"unknown test function {self.f_spec!r}")


@dataclass(frozen=True)
class IdentityRecord:
    lhs: float
    rhs: float
    gap: float


# ------------------------------------------------------------ real spectra

def _bath_params(model):
    if isinstance(model, DiscreteBathModel):
        return model.omega_p, model.omega_0, model.omega_j, model.mass_ratio
    if isinstance(model, DrudeLorentzModel) and model.gamma == 0:
        return model.omega_p, model.omega_0, np.zeros(0), np.zeros(0)
    raise DomainError("real mode spectra need a reversible (discrete-bath or lossless) mirror")


def _poles(model):
    if isinstance(model, DiscreteBathModel):
        return bath_poles(model)
    return np.array([model.omega_0]) if model.omega_0 > 0 else np.zeros(0)


def _check_slab(cavity):
    if math.isinf(cavity.slab_thickness):
        raise DomainError("mode spectra need a finite slab thickness")


class _Solver:
    """Mode roots of one channel for one gap, with pole windows ``delta``."""

    def __init__(self, cavity, channel, gap, omega_top, delta):
        _check_slab(cavity)
        self.k = channel.k
        self.L = gap
        self.d = cavity.slab_thickness
        self.tm = channel.polarization == TM
        self.params = _bath_params(cavity.mirror)
        poles = _poles(cavity.mirror)
        self.poles = poles[poles < omega_top]
        self.delta = np.asarray(delta, float)
        self.top = omega_top

    def levels(self, w):
        wp, w0, wj, rj = self.params
        return _backend.core.mode_levels(np.atleast_1d(np.asarray(w, float)), self.k, self.L,
                                         self.d, self.tm, wp, w0, wj, rj)

    def roots(self):
        core = _backend.core
        wp, w0, wj, rj = self.params
        k, L, d = self.k, self.L, self.d
        marks = {0.0, self.top}
        marks.update(self.poles.tolist())
        if 0 < k < self.top:
            marks.add(k)
        marks = sorted(marks)
        pole_set = {float(p): float(dl) for p, dl in zip(self.poles, self.delta)}
        h = np.pi / (L + 2 * d) / 12
        out = []
        for a, b in zip(marks[:-1], marks[1:]):
            lo = a * (1 + LIGHT_LINE_OFFSET) if a > 0 else 1e-9 * b
            hi = b - pole_set[b] if b in pole_set else b * (1 - LIGHT_LINE_OFFSET)
            if hi <= lo:
                continue
            parts = [np.arange(lo, hi, h), [hi]]
            if b in pole_set:
                parts.append(b - np.geomspace(pole_set[b], max(b - lo, 1.0001 * pole_set[b]), 4000))
            if a in pole_set:
                parts.append(a + np.geomspace(1e-12 * a, b - a, 2000))
            g = np.unique(np.concatenate(parts))
            g = g[(g >= lo) & (g <= hi)]
            l1, l2 = core.mode_levels(g, k, L, d, self.tm, wp, w0, wj, rj)
            fams = [(0, l1)] if g[0] > k else [(0, l1), (1, l2)]
            for which, v in fams:
                fl = np.floor(v)
                jumps = np.nonzero(fl[1:] != fl[:-1])[0]
                if jumps.size == 0:
                    continue
                n0, n1 = fl[jumps], fl[jumps + 1]
                cnt = np.abs(n1 - n0).astype(int)
                idx = np.repeat(jumps, cnt)
                base = np.repeat(np.minimum(n0, n1), cnt)
                offs = np.concatenate([np.arange(1, c + 1) for c in cnt])
                out.append(core.solve_levels(g[idx], g[idx + 1], base + offs, which,
                                             k, L, d, self.tm, wp, w0, wj, rj))
        return np.sort(np.concatenate(out)) if out else np.zeros(0)


def real_mode_spectrum(cavity, channel, omega_max, pole_window=1e-6, verify=False):
    """Cavity modes of a reversible mirror in ``(0, omega_max)``.

    Modes accumulate below every pole ``p`` of ``eps_N``; the window
    ``(p - delta_p, p)`` with ``delta_p = pole_window (p - p_below)`` is
    left out.

    Parameters
    ----------
    verify : bool
        Cross-check the roots in chunks with the argument principle on thin
        rectangles; ``metadata['verified']`` counts the roots covered.

    Raises
    ------
    CountMismatch
        When the level-crossing count disagrees with the argument principle.
    """
    poles = _poles(cavity.mirror)
    delta = _pole_deltas(poles, pole_window)
    s = _Solver(cavity, channel, cavity.gap, omega_max, delta[poles < omega_max])
    roots = s.roots()
    meta = {"poles": s.poles, "pole_window": s.delta}
    if verify:
        meta["verified"] = _verify_counts(cavity, channel, roots, s)
    return ModeSpectrum(channel, roots, omega_max, cavity.gap, meta)


def _pole_deltas(poles, rel):
    below = np.concatenate([[0.0], poles[:-1]])
    return rel * (poles - below)


def _sinh_over(X, u, limit, scale):
    """``sinh(X)/u`` (``limit`` where ``X`` vanishes) and ``cosh X``, times ``scale``."""
    with np.errstate(over="ignore", invalid="ignore"):
        sh = 0.5 * (np.exp(X) - np.exp(-X))
        ch = 0.5 * (np.exp(X) + np.exp(-X))
        if scale is not None:
            sh = 0.5 * (np.exp(X - scale) - np.exp(-X - scale))
            ch = 0.5 * (np.exp(X - scale) + np.exp(-X - scale))
        small = np.abs(X) <= 1e-8
        lim = limit if scale is None else limit * np.exp(-scale)
        return np.where(small, lim, sh / np.where(small, 1, u)), ch


def regular_dispersion(cavity, channel, omega, gap=None, scaled=False):
    """``kappa D^p / P^2``: an entire function of ``kappa^2`` and ``kappa_m^2``.

    With ``t = Q/P`` (``P = cosh``, ``Q = kappa_m sinh`` for TE and
    ``P = eps sinh/kappa_m``, ``Q = cosh`` for TM, all of ``kappa_m d``) this
    is ``2 (Q^2 + kappa^2 P^2) sinh(kappa L)/kappa + 4 P Q cosh(kappa L)``.
    It vanishes exactly on the modes and carries no square-root branch.

    ``scaled`` multiplies by the positive factor ``exp(-2|Re kappa_m d| - |Re kappa L|)``,
    which avoids overflow and leaves zeros and winding numbers unchanged.
    """
    z = np.asarray(omega, complex)
    L = cavity.gap if gap is None else gap
    d = cavity.slab_thickness
    k = channel.k
    e = epsilon(cavity.mirror, z)
    m2 = k * k - e * z * z
    k2 = k * k - z * z
    km = np.sqrt(m2)
    X = km * d
    sh, ch = _sinh_over(X, km, d, np.abs(X.real) if scaled else None)
    if channel.polarization == TE:
        P, Q = ch, m2 * sh
    else:
        P, Q = e * sh, ch
    kap = np.sqrt(k2)
    Y = kap * L
    shc, chc = _sinh_over(Y, kap, L, np.abs(Y.real) if scaled else None)
    return 2 * (Q * Q + k2 * P * P) * shc + 4 * P * Q * chc


def _verify_counts(cavity, channel, roots, solver, chunk=64, min_sep=1e-9,
                   max_samples=200000):
    """Argument-principle check on thin rectangles holding ``chunk`` roots each.

    Roots closer than ``min_sep`` relative to their neighbours pile up
    against a pole and are beyond double precision; chunks that would need
    more than ``max_samples`` boundary points are skipped as well.
    Returns the number of roots checked.
    """
    if roots.size == 0:
        return 0
    fn = lambda z: regular_dispersion(cavity, channel, z, scaled=True)
    # boundaries halfway between roots, clipped to poles and windows
    walls = np.sort(np.concatenate([[0.0, solver.top], solver.poles,
                                    solver.poles - solver.delta]))
    mids = 0.5 * (roots[:-1] + roots[1:])
    left = np.concatenate([[0.5 * roots[0]], mids])
    right = np.concatenate([mids, [0.5 * (roots[-1] + solver.top)]])
    idx = np.searchsorted(walls, roots)
    left = np.maximum(left, 0.5 * (roots + walls[idx - 1]))
    right = np.minimum(right, 0.5 * (roots + walls[np.minimum(idx, walls.size - 1)]))
    wall_of = np.searchsorted(walls, roots)
    stack = []
    for w in np.unique(wall_of)[::-1]:
        ids = np.nonzero(wall_of == w)[0]
        stack.extend((ids[i], ids[min(i + chunk, ids.size) - 1])
                     for i in range(0, ids.size, chunk)[::-1])
    checked = 0
    while stack:
        i, j = stack.pop()
        r = roots[i:j + 1]
        lo, hi = left[i], right[j]
        sep = np.diff(np.concatenate([[lo], r, [hi]]))
        height = 0.25 * sep.min()
        # sample spacing must stay below the height or phase swings alias
        samples = int(math.ceil(4 * (hi - lo) / height))
        if sep.min() < min_sep * hi or samples > max_samples:
            if j > i:
                m = (i + j) // 2
                stack.extend([(m + 1, j), (i, m)])
            continue
        rect = Rectangle(lo, hi, -height, height)
        n = count_zeros(fn, rect, samples_per_side=max(256, samples))
        if n != r.size:
            raise CountMismatch(f"level count {r.size} vs argument principle {n} "
                                f"on [{lo:.6g}, {hi:.6g}]; refine the scan")
        checked += r.size
    return checked


# ------------------------------------------------------- regulated mode sum

def _F(w, Om):
    return 0.5 * w * np.exp(-w / Om)


def _bulk_density(k, Om):
    """``(1/pi) int_0^inf F(sqrt(k^2 + q^2)) dq`` in closed form."""
    if k == 0:
        return Om * Om / (2 * np.pi)
    x = k / Om
    return k * k / (2 * np.pi) * 0.5 * (special.kv(0, x) + special.kv(2, x))


def _P1(x):
    return x - np.floor(x) - 0.5


def _psi(which, kap, L):
    kl = kap * L / 2
    return -np.arctan(1 / np.tanh(kl)) if which == 0 else -np.arctan(np.tanh(kl))


def _window_corrections(sL, sR, k, Om, delta):
    """Asymptotic contribution of the pole windows for ``L`` minus ``L_ref``."""
    out = 0.0
    dL = sL.L - sR.L
    for p, dp in zip(sL.poles, delta):
        b = p - dp
        if b > k:
            qf = lambda w: _F(w, Om) * w / math.sqrt(w * w - k * k)
            out += dL / np.pi * quad(qf, b, p, epsabs=0, epsrel=1e-12)[0]
            out += _F(b, Om) * (_P1(sL.levels(b)[0][0]) - _P1(sR.levels(b)[0][0]))
            pp = p * (1 + 1e-13)
            out -= _F(p, Om) * (_P1(sL.levels(pp)[0][0]) - _P1(sR.levels(pp)[0][0]))
        else:
            lb_L, lb_R = sL.levels(b), sR.levels(b)
            kb, kp = math.sqrt(k * k - b * b), math.sqrt(max(k * k - p * p, 0.0))
            for which in (0, 1):
                out += _F(b, Om) * (_P1(lb_L[which][0]) - _P1(lb_R[which][0]))
                dpsi_R = _psi(which, kp, sR.L) - _psi(which, kb, sR.L)
                dpsi_L = _psi(which, kp, sL.L) - _psi(which, kb, sL.L)
                out += _F(p, Om) * (dpsi_R - dpsi_L) / np.pi
    return out


def sum_over_modes_energy(cavity, channel, L_ref, cutoff=None, pole_window=1e-5,
                          roots=None):
    """Regulated zero-point sum ``sum w/2`` at gap ``L`` minus gap ``L_ref``.

    The cutoff ``F(w) = (w/2) exp(-w/Omega)`` is evaluated at ``Omega``
    and ``2 Omega``, each with pole windows ``delta`` and ``delta/10``;
    two Richardson steps remove the ``O(delta)`` and ``O(Omega^-2)`` terms.
    The free-space term ``(L - L_ref) V_Omega`` is subtracted.

    Returns
    -------
    EnergyResult
        Route ``mode_sum``; ``abs_error`` is the size of the last
        Richardson correction.
    """
    L = cavity.gap
    if L == L_ref:
        return EnergyResult(0.0, Route.MODE_SUM, 0.0, {})
    Om = cutoff or 12.5 / L
    oms = (Om, 2 * Om)
    top = 40 * oms[-1]
    poles = _poles(cavity.mirror)
    poles = poles[poles < top]
    d_big = _pole_deltas(poles, pole_window)
    d_small = d_big / 10
    sL = _Solver(cavity, channel, L, top, d_small)
    sR = _Solver(cavity, channel, L_ref, top, d_small)
    rL, rR = sL.roots(), sR.roots()

    def masked(r, dl):
        keep = np.ones(r.size, bool)
        for p, x in zip(poles, dl):
            keep &= ~((r > p - x) & (r < p))
        return r[keep]

    k = channel.k
    S = {}
    for O in oms:
        V = _bulk_density(k, O)
        for tag, dl in (("big", d_big), ("small", d_small)):
            a, b = masked(rL, dl), masked(rR, dl)
            s = _F(a, O).sum() - _F(b, O).sum() - (L - L_ref) * V
            S[O, tag] = s + _window_corrections(sL, sR, k, O, dl)
    S0 = {O: (10 * S[O, "small"] - S[O, "big"]) / 9 for O in oms}
    val = (4 * S0[oms[1]] - S0[oms[0]]) / 3
    err = abs(val - S0[oms[1]]) + abs(S0[oms[1]] - S[oms[1], "small"])
    return EnergyResult(val, Route.MODE_SUM, err,
                        {"modes_L": int(rL.size), "modes_ref": int(rR.size), "cutoffs": oms,
                         "raw": {f"{o:g}/{t}": v for (o, t), v in S.items()}})


def contour_channel_energy(cavity, channel, L_ref, cutoff=None, tol=1e-12):
    """Per-channel imaginary-axis energy ``int dxi/2pi ln[G(L)/G(L_ref)]``.

    With ``cutoff`` the integrand carries ``cos x - x sin x`` at
    ``x = xi/cutoff``, the image of the exponential mode cutoff.
    """
    pol, k = channel.polarization, channel.k

    def f(xi):
        v = float(log_g_imag(cavity, pol, k, xi) - log_g_imag(cavity, pol, k, xi, gap=L_ref))
        if cutoff:
            x = xi / cutoff
            v *= math.cos(x) - x * math.sin(x)
        return v / (2 * np.pi)

    return integrate_semi_infinite(f, tol=tol, limit=1000).value


def mode_energy_k_summed(cavity, L_ref, k_edges=None, nodes=8, **kw):
    """``sum_p int k dk/2pi`` of the per-channel regulated mode sums."""
    L = cavity.gap
    edges = np.asarray(k_edges if k_edges is not None else
                       np.array([0.0, 0.3, 1.0, 2.0, 4.0, 7.0, 12.0]) / L)
    kn, wk = gauss_legendre_panels(edges, nodes)
    total = 0.0
    err = 0.0
    n_modes = 0
    for k, w in zip(kn, wk):
        for pol in (TE, TM):
            r = sum_over_modes_energy(cavity, TransverseChannel(pol, float(k)), L_ref, **kw)
            total += w * k * r.value / (2 * np.pi)
            err += w * k * r.abs_error / (2 * np.pi)
            n_modes += r.metadata.get("modes_L", 0)
    return EnergyResult(total, Route.MODE_SUM, err,
                        {"k_nodes": int(kn.size), "k_max": float(edges[-1]), "modes_L": n_modes})


# ------------------------------------------------------- complex resonances

def _quasistatic_terms(model, omega):
    A = omega * (omega + 1j * model.gamma) - model.omega_0 ** 2
    return 2 * A - model.omega_p ** 2, -model.omega_p ** 2 + 0 * omega


def _resonance_function(cavity, channel, gap, quasistatic):
    m = cavity.mirror
    k = channel.k
    if quasistatic:
        if channel.polarization != TM:
            # the quasistatic TE reflection vanishes: no L-dependent structure
            return None
        if math.isinf(gap):
            return lambda z: _quasistatic_terms(m, z)[0]
        att = math.exp(-2 * k * gap)
        return lambda z: (lambda n: n[0] ** 2 - n[1] ** 2 * att)(_quasistatic_terms(m, z))

    warnings.warn("retarded resonances continue eps into the unphysical sheet; experimental",
                  ContinuationWarning)

    def h(z):
        z = np.asarray(z, complex)
        e = epsilon(m, z, unphysical_sheet=True)
        kap = np.sqrt(k * k - z * z)
        km = np.sqrt(k * k - e * z * z)
        a = kap if channel.polarization == TE else e * kap
        if math.isinf(gap):
            return a + km
        return (a + km) ** 2 - (a - km) ** 2 * np.exp(-2 * kap * gap)
    return h


def find_resonances(cavity, channel, region, quasistatic=True, gap=None, tol=1e-12):
    """Zeros of the continued dispersion function in the lower half-plane.

    Complex zeros come from argument-principle subdivision of ``region``
    with its left edge moved off the imaginary axis.  Zeros on the negative
    imaginary axis ``w = -i xi`` come from a real scan in ``xi``, where the
    function is real.  ``gap = inf`` gives the reference (single-interface)
    set; in the quasistatic family its zeros are double and are listed twice.
    A lossless mirror has its resonances on the real axis; a real scan finds them.
    """
    m = cavity.mirror
    if not isinstance(m, DrudeLorentzModel) or not math.isinf(cavity.slab_thickness):
        raise DomainError("resonances are supported for bulk Drude-Lorentz mirrors")
    L = cavity.gap if gap is None else gap
    h = _resonance_function(cavity, channel, L, quasistatic)
    if h is None:
        return ResonanceSet(channel, (), (), region, L)
    mult = 2 if (quasistatic and math.isinf(L)) else 1
    xi_max = -region.im_min
    shift = 1e-7 * region.diagonal
    inner = Rectangle(max(region.re_min, shift), region.re_max, region.im_min,
                      min(region.im_max, -shift))
    cz = find_complex_roots(h, inner, tol=tol)
    cz = [z for z in cz if z.real > shift and z.imag < -shift]
    if m.gamma == 0:
        # lossless: h is real on the real axis and the resonances sit there
        gr = lambda x: np.real(h(np.asarray(x, float) + 0j))
        cz += [complex(x) for x in find_real_roots(gr, (shift, region.re_max), 4001)]
    g = lambda xi: np.real(h(-1j * np.asarray(xi, float)))
    xs = find_real_roots(g, (shift, xi_max), 4001)
    cz = tuple(z for z in cz for _ in range(mult))
    xs = tuple(float(x) for x in xs for _ in range(mult))
    return ResonanceSet(channel, cz, xs, region, L)


def _counterterm_sum(s, Lam):
    z, w = s.weighted()
    if z.size == 0:
        return 0j, 0j, 0.0
    f = z - 2j / np.pi * z * np.log(z / Lam)
    return (w * f).sum(), (w * z).sum(), float((w * np.abs(z)).sum())


def generalized_mode_sum(set_L, set_ref, Lambda, sum_rule_tol=1e-6):
    """``(1/2) Re sum'_K [w_K - (2i/pi) w_K ln(w_K/Lambda)]`` at ``L`` minus reference.

    Raises
    ------
    SumRuleViolation
        If ``|Im sum' w_K|`` after subtraction exceeds ``sum_rule_tol``
        times ``sum |w_K|``; the cutoff would then not drop out.
    """
    if not Lambda > 0:
        raise ValueError("Lambda must be positive")
    fL, zL, aL = _counterterm_sum(set_L, Lambda)
    fR, zR, aR = _counterterm_sum(set_ref, Lambda)
    resid = abs((zL - zR).imag)
    scale = max(aL + aR, 1e-300)
    if resid > sum_rule_tol * scale:
        raise SumRuleViolation(f"sum rule residual {resid:.3g} (relative {resid / scale:.3g})")
    return 0.5 * (fL - fR).real


def sum_rule_residual(set_L, set_ref):
    """Relative ``|Im sum' w_K|`` after subtraction."""
    _, zL, aL = _counterterm_sum(set_L, 1.0)
    _, zR, aR = _counterterm_sum(set_ref, 1.0)
    return abs((zL - zR).imag) / max(aL + aR, 1e-300)


def quasistatic_channel_energy(model, k, L):
    """``(1/2pi) int dxi ln(1 - r^2 exp(-2kL))`` with ``r = (eps-1)/(eps+1)`` at ``i xi``."""
    wp2 = model.omega_p ** 2

    def f(xi):
        r = wp2 / (2 * (xi * xi + model.gamma * xi + model.omega_0 ** 2) + wp2)
        return math.log1p(-(r * math.exp(-k * L)) ** 2)

    return integrate_semi_infinite(f, tol=1e-14, limit=1000).value / (2 * np.pi)


# ------------------------------------------------------- sum-over-poles identity

def _rational(n, half=False):
    c = 0.5 if half else 1.0
    return lambda z, s: c * z * (s / (z + s)) ** n


TEST_FUNCTIONS = {
    "rational2": _rational(2),
    "rational3": _rational(3),
    "half_rational2": _rational(2, half=True),
    "exponential": lambda z, s: z * np.exp(-z / s),
}
# cutoffs that decay along the negative imaginary axis, as the contour rotation needs
ROTATABLE = ("rational2", "rational3", "half_rational2")


def identity_check(case):
    """Both sides of the sum-over-poles identity for one pole pair.

    ``lhs = -(1/pi) int_0^inf f(w) Im[1/(w - w0) + 1/(w + w0*)] dw``
    ``rhs = Re f(w0) + (1/pi) int_0^inf Im f(i xi) Re[2 i w0/(xi^2 + w0^2)] dxi``

    For ``Re w0 = 0`` the second integral is a principal value.  The
    identity needs ``f`` to decay on the arc in the fourth quadrant; the
    rational family does, the exponential cutoff does not and is rejected.

    Raises
    ------
    DomainError
        For a test function outside ``ROTATABLE``.
    """
    if case.f_spec not in ROTATABLE:
        raise DomainError(f"{case.f_spec!r} does not decay on the imaginary axis")
    w0 = complex(case.omega_0)
    s = case.scale or 10 * max(abs(w0), 1.0)
    f = lambda z: TEST_FUNCTIONS[case.f_spec](z, s)
    tol = 1e-12
    a, b = w0.real, -w0.imag

    fa = float(np.real(f(a)))
    if b == 0:
        lhs = fa
    else:
        # the Lorentzian at a integrates to (1/2 + atan(a/b)/pi); only
        # f(w) - f(a) is left to quadrature, folded about a so that the odd
        # part cancels as b -> 0
        def core(w):
            return (float(np.real(f(w))) - fa) * b / ((w - a) ** 2 + b * b) / np.pi

        def image(w):
            return float(np.real(f(w))) * b / ((w + a) ** 2 + b * b) / np.pi

        split = 2 * a + 40 * b + s
        folded = 0.0
        if a > 0:
            pts = [b * 10.0 ** j for j in range(40) if b * 10.0 ** j < a] or None
            folded = integrate_finite(lambda t: core(a + t) + core(a - t), 0.0, a,
                                      tol=tol, limit=2000, points=pts).value
        rest = (integrate_finite(core, 2 * a, split, tol=tol, limit=2000).value
                + integrate_semi_infinite(core, tol=tol, a=split, limit=2000).value)
        mir = (integrate_finite(image, 0.0, split, tol=tol, limit=2000).value
               + integrate_semi_infinite(image, tol=tol, a=split, limit=2000).value)
        lhs = fa * (0.5 + math.atan(a / b) / np.pi) + folded + rest + mir

    imf = lambda xi: float(np.imag(f(1j * xi + 1e-300)))
    if a == 0:
        pv = integrate_principal_value(imf, b, tol=tol, limit=2000).value
        rhs = float(np.real(f(w0))) + pv / np.pi
    else:
        # 2 i w0/(xi^2 + w0^2) = 1/(xi - p) - 1/(xi + conj(p)) with p = b + i a; the
        # first kernel nears a principal value as a -> 0, so on [0, split] Im f(b)
        # times it is integrated in closed form and the remainder folded about b
        fb = imf(b) if b > 0 else 0.0

        def near(xi):
            d = xi - b
            den = d * d + a * a
            return (imf(xi) - fb) * d / den if den > 0 else 0.0

        def far(xi):
            return imf(xi) * (xi + b) / ((xi + b) * (xi + b) + a * a)

        def whole(xi):
            return imf(xi) * float(np.real(2j * w0 / (xi * xi + w0 * w0)))

        split = 2 * b + abs(w0) + s
        folded = 0.0
        if b > 0:
            # the kernel changes over a width a next to the fold
            pts = [a * 10.0 ** j for j in range(40) if 0 < a * 10.0 ** j < b] or None
            folded = integrate_finite(lambda t: near(b + t) + near(b - t), 0.0, b,
                                      tol=tol, limit=2000, points=pts).value
        # log-spaced breaks resolve the pole scale |w0| when it is far below split
        scale = abs(w0)
        breaks = [scale * 10.0 ** j for j in range(1, 40) if scale * 10.0 ** j < split]
        body = (folded
                + integrate_finite(near, 2 * b, split, tol=tol, limit=2000,
                                   points=[x for x in breaks if x > 2 * b] or None).value
                - integrate_finite(far, 0.0, split, tol=tol, limit=2000,
                                   points=breaks or None).value)
        lorentz = 0.5 * fb * math.log(((split - b) ** 2 + a * a) / (b * b + a * a))
        tail = integrate_semi_infinite(whole, tol=tol, a=split, limit=2000).value
        rhs = float(np.real(f(w0))) + (body + lorentz + tail) / np.pi
    return IdentityRecord(lhs, rhs, abs(lhs - rhs))
