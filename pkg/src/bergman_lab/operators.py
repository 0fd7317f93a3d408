"""Bergman projection, small Hankel operators and the V-transform.

Conventions (normalized area measure, kernel ``B_z(zeta) = sum c_n (conj(z) zeta)**n``
with ``c_n = 1 / (2 omega_{2n+1})``):

* ``P_omega f = sum_n c_n J_n(f) z**n`` where ``J_n(f) = int f conj(zeta)**n omega dA``;
* ``h_{conj f}(g)(z) = int conj(f) g B_z omega dA = sum_m conj(z)**m sum_j H[m, j] g_j``
  with ``H[m, j] = c_m conj(J_{m+j}(f))``;
* ``V_{omega,nu}(f)(z) = nu(z) sum_n J_n(f) z**n / (2 (omega nu)_{2n+1})``.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import optimize, special

from . import disc
from . import quadrature as quad
from .kernels import kernel_terms
from .reports import TREND_GROWTH, RatioReport, monotone_growth
from .symbols import (AnalyticCoeffs, _derived, _factor_values, analytic,
                      dilate)
from .weights import Modifier, RadialWeight, power_factor, profile_factor

#: Largest truncation accepted by ``hankel_norm``.
M_MAX = 256

#: Largest series length used for V-transforms of non-polynomial symbols.
SERIES_MAX = 2 ** 17

SERIES_TOL = 1e-12


class ModeError(ValueError):
    """Unsupported operator-norm mode."""


def _nu_factor(nu):
    """Modifier for a radial factor given as weight or modifier."""
    if isinstance(nu, Modifier):
        return nu
    if isinstance(nu, RadialWeight):
        return profile_factor(nu)
    raise TypeError("nu must be a RadialWeight or a Modifier")


def product_weight(w, nu):
    """The weight ``omega * nu`` (memoized per pair)."""
    return _derived(w, _nu_factor(nu))


def kernel_c(w, n_max):
    n = np.arange(n_max + 1, dtype=float)
    return 0.5 / w.moments(2.0 * n + 1.0)


def _support(f):
    """Largest ``n`` with possibly nonzero ``J_n``, or ``None`` if unbounded."""
    if f.zero:
        return 0
    if f.kind in ("analytic", "radial_analytic"):
        F = f.data if f.kind == "analytic" else f.data[1]
        return F.M
    if f.kind == "conj":
        return 0
    if f.kind == "mono":
        return max(max(a - b for _, a, b in f.data), 0)
    return None


def _as_symbol(f):
    return analytic(f) if isinstance(f, AnalyticCoeffs) else f


# -- projection -----------------------------------------------------------------------------

def project(w, f, M, force_quadrature=False):
    """Taylor coefficients ``0..M`` of ``P_omega f``.

    Monomial structures use ``int zeta**a conj(zeta)**b omega dA = delta_ab 2 omega_{2a+1}``;
    ``force_quadrature`` sends every symbol through the disc quadrature instead.
    """
    f = _as_symbol(f)
    if M < 0:
        raise ValueError("M must be >= 0")
    J = f.moments(w, int(M), force_quadrature=force_quadrature)
    return AnalyticCoeffs(kernel_c(w, int(M)) * J)


def _theta_nodes(f, r, minimum):
    """Angular rule on a circle: composite Gauss for piecewise symbols, else trapezoid."""
    if f is not None and f.theta_breaks:
        b = np.sort(np.mod(np.asarray(f.theta_breaks, dtype=float), 2 * np.pi))
        edges = np.append(b, b[0] + 2 * np.pi)
        per = max(4, int(math.ceil(minimum / (32.0 * b.size))))
        x, gw = quad.gauss_legendre(32)
        th, wt = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            t = np.linspace(lo, hi, per + 1)
            for a, c in zip(t[:-1], t[1:]):
                th.append(a + (c - a) * (x + 1) / 2)
                wt.append(gw * (c - a) / 2)
        return np.concatenate(th), np.concatenate(wt) / (2 * np.pi)
    n = int(2 ** math.ceil(math.log2(max(minimum, 64))))
    return 2 * np.pi * np.arange(n) / n, np.full(n, 1.0 / n)


def _kernel_on_circle(f, r, z, c, minimum):
    """Angular nodes on ``|zeta| = r`` with ``sum_n c_n (conj(z) zeta)**n`` at them.

    On a trapezoid rule the nodes are rotated by ``arg z`` so that
    ``conj(z) zeta`` sits on a uniform grid and the series is one FFT.
    """
    th, wt = _theta_nodes(f, r, minimum)
    if f.theta_breaks:
        zeta = r * np.exp(1j * th)
        return zeta, wt, np.polynomial.polynomial.polyval(np.conj(z) * zeta, c)
    zeta = r * np.exp(1j * (th + np.angle(z)))
    return zeta, wt, disc.power_series_on_circle(c, abs(z) * r, th.size)


def maximal_project_point(w, f, z, rtol=1e-8):
    """``int |f(zeta)| |B_z(zeta)| omega(zeta) dA(zeta)``."""
    f = _as_symbol(f)
    z = complex(z)
    c = kernel_terms(w, abs(z))

    def radial(rs):
        out = np.empty(rs.size)
        for i, r in enumerate(rs):
            zeta, wt, B = _kernel_on_circle(f, r, z, c, disc.theta_count(abs(z) * r, 32.0))
            out[i] = np.sum(wt * np.abs(f(zeta)) * np.abs(B))
        return out

    return float(disc.disc_integral(w, radial, rtol=rtol))


# -- Hankel operators --------------------------------------------------------------------------

@dataclass(frozen=True)
class HankelMatrix:
    """``h_{conj f}(zeta**j)(z) = sum_m entries[m, j] conj(z)**m``."""

    entries: np.ndarray
    weight: str
    symbol: str

    @property
    def shape(self):
        return self.entries.shape

    def apply(self, g):
        """Output coefficients (of ``conj(z)**m``) for input coefficients ``g``."""
        g = np.asarray(g.coefficients if isinstance(g, AnalyticCoeffs) else g, dtype=complex)
        n_in = self.entries.shape[1]
        gg = np.zeros(n_in, dtype=complex)
        gg[:min(n_in, g.size)] = g[:n_in]
        return self.entries @ gg


def hankel_matrix(w, f, M_in, M_out, force_quadrature=False):
    """Matrix of ``h_{conj f}`` in the monomial bases, ``(M_out + 1) x (M_in + 1)``."""
    f = _as_symbol(f)
    J = f.moments(w, int(M_in) + int(M_out), force_quadrature=force_quadrature)
    m = np.arange(M_out + 1)[:, None]
    j = np.arange(M_in + 1)[None, :]
    H = kernel_c(w, int(M_out))[:, None] * np.conj(J[m + j])
    return HankelMatrix(H, w.name, f.name)


def hankel_apply(w, f, g, z, method="series", rtol=1e-10):
    """``h_{conj f}(g)(z) = int conj(f) g B_z omega dA``.

    ``method="series"`` sums the matrix representation; ``"direct"``
    integrates the defining integral on the disc.
    """
    f = _as_symbol(f)
    g = g if isinstance(g, AnalyticCoeffs) else AnalyticCoeffs(g)
    z = complex(z)
    if method == "series":
        c = kernel_terms(w, abs(z))
        m_out = c.size - 1
        H = hankel_matrix(w, f, g.M, m_out)
        out = H.apply(g)
        return complex(disc.polyval(np.conj(z), out))
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    c = kernel_terms(w, abs(z))

    def radial(rs):
        out = np.empty(rs.size, dtype=complex)
        mag = np.empty(rs.size)
        for i, r in enumerate(rs):
            zeta, wt, B = _kernel_on_circle(f, r, z, c,
                                            max(disc.theta_count(abs(z) * r, 32.0), 4 * (g.M + c.size)))
            vals = np.conj(f(zeta)) * g(zeta) * B
            out[i] = np.sum(wt * vals)
            mag[i] = np.sum(wt * np.abs(vals))
        return out, mag

    return complex(disc.disc_integral(w, radial, rtol=rtol))


def _normalized(H, w):
    m_out, m_in = H.shape
    d_out = np.sqrt(2.0 * w.moments(2.0 * np.arange(m_out) + 1.0))
    d_in = np.sqrt(2.0 * w.moments(2.0 * np.arange(m_in) + 1.0))
    return d_out[:, None] * H / d_in[None, :]


def ap_norm(w, coeffs, p, rtol=1e-8):
    """``||F||_{A^p_omega}`` for ``F = sum a_n z**n`` (also for the conjugate)."""
    a = np.asarray(coeffs, dtype=complex)
    if not np.any(a):
        return 0.0
    if p == 2:
        return float(np.sqrt(np.sum(np.abs(a) ** 2 * 2.0 * w.moments(2.0 * np.arange(a.size) + 1.0))))
    n_theta = int(2 ** math.ceil(math.log2(max(64, 4 * a.size))))

    def radial(rs):
        return np.array([np.mean(np.abs(disc.power_series_on_circle(a, r, n_theta)) ** p) for r in rs])

    return float(disc.disc_integral(w, radial, rtol=rtol)) ** (1.0 / p)


def _kernel_power(a, gamma, M):
    """Coefficients of ``(1 - a zeta)**(-gamma)`` up to degree ``M``."""
    n = np.arange(M + 1, dtype=float)
    with np.errstate(under="ignore"):
        logc = special.gammaln(n + gamma) - special.gammaln(gamma) - special.gammaln(n + 1)
        return np.exp(logc) * complex(a) ** n


def lower_bound_family(M, degrees=(0, 1, 2, 4, 8), points=(0.0, 0.5, 0.8, 0.9), gammas=(1.0, 2.0, 3.0)):
    """Monomials and kernel powers used for lower bounds when ``p != 2``."""
    fam = []
    for d in degrees:
        if d <= M:
            c = np.zeros(M + 1, dtype=complex)
            c[d] = 1.0
            fam.append(c)
    for a in points:
        for g in gammas:
            if a:
                fam.append(_kernel_power(a, g, M))
    return fam


def hankel_norm(w, f, p=2.0, M=128, mode="exact2", family=None):
    """Norm of ``h_{conj f}: A^p_omega -> conj(A^p_omega)`` on degree ``<= M`` inputs.

    Returns
    -------
    estimate : float
    kind : str
        ``"truncated-exact"`` (``mode="exact2"``, largest singular value of the
        normalized truncated matrix) or ``"lower-bound"`` (``mode="lower_p"``).
    """
    f = _as_symbol(f)
    M = int(M)
    if not 1 <= M <= M_MAX:
        raise ValueError(f"M must lie in 1..{M_MAX}")
    if f.zero:
        return 0.0, "truncated-exact" if mode == "exact2" else "lower-bound"
    if mode == "exact2":
        if p != 2:
            raise ModeError("mode exact2 requires p = 2")
        H = hankel_matrix(w, f, M, M).entries
        return float(np.linalg.norm(_normalized(H, w), 2)), "truncated-exact"
    if mode != "lower_p":
        raise ModeError(f"unknown mode {mode!r}")
    if p <= 1:
        raise ValueError("lower_p needs p > 1")
    H = hankel_matrix(w, f, M, M)
    fam = lower_bound_family(M) if family is None else family
    q = p / (p - 1.0)
    best = 0.0
    outs = []
    for g in fam:
        ng = ap_norm(w, g, p)
        if ng == 0:
            continue
        out = H.apply(g)
        outs.append((out, ng))
        best = max(best, ap_norm(w, np.conj(out), p) / ng)
    # dual pairing with the same family normalized in the conjugate exponent
    duals = [(np.conj(G), ap_norm(w, G, q)) for G in fam]
    d = 2.0 * w.moments(2.0 * np.arange(M + 1) + 1.0)
    for out, ng in outs:
        for G, nG in duals:
            if nG:
                pair = abs(np.sum(out * np.conj(G[:out.size]) * d[:out.size]))
                best = max(best, pair / (ng * nG))
    return float(best), "lower-bound"


# -- V-transform -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class VTransform:
    """``V(z) = factor(|z|) * series(z)``."""

    series: AnalyticCoeffs
    factor: Modifier

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        # |r e^{it}| can round up to 1 for r = 1 - eps
        r = np.where((r >= 1) & (r <= 1 + 4e-16), np.nextafter(1.0, 0.0), r)
        return _factor_values(self.factor, r) * self.series(z)

    def on_circle(self, r, n_theta):
        return _factor_values(self.factor, np.array([r]))[0] * self.series.on_circle(r, n_theta)


def v_multiplier(w, nu, f):
    """Coefficient multiplier ``omega_{2n+1} / (omega nu)_{2n+1}`` applied to analytic ``f``."""
    f = f if isinstance(f, AnalyticCoeffs) else AnalyticCoeffs(f)
    n = 2.0 * np.arange(f.coefficients.size) + 1.0
    mult = w.moments(n) / product_weight(w, nu).moments(n)
    return VTransform(AnalyticCoeffs(f.coefficients * mult), _nu_factor(nu))


def v_series(w, nu, f, rho=0.999, tol=SERIES_TOL):
    """``V_{omega,nu}(f)`` with its series truncated for ``|z| <= rho``."""
    f = _as_symbol(f)
    fac = _nu_factor(nu)
    wn = product_weight(w, nu)
    if f.kind == "analytic":
        return v_multiplier(w, nu, f.data)
    top = _support(f)
    if top is not None:
        J = f.moments(w, top)
        b = J / (2.0 * wn.moments(2.0 * np.arange(top + 1) + 1.0))
        return VTransform(AnalyticCoeffs(b), fac)
    n_max = 256
    while True:
        J = f.moments(w, n_max)
        b = J / (2.0 * wn.moments(2.0 * np.arange(n_max + 1) + 1.0))
        with np.errstate(under="ignore"):
            mag = np.abs(b) * rho ** np.arange(n_max + 1)
        total = max(mag.sum(), 1e-300)
        quarter = mag[-(n_max // 4):]
        if quarter.max() * n_max < tol * total and mag[-1] <= quarter.max():
            return VTransform(AnalyticCoeffs(b), fac)
        if n_max >= SERIES_MAX:
            raise quad.QuadratureError(
                f"V-transform series of {f.name} not truncated by n = {SERIES_MAX}; "
                "reduce the largest radius")
        n_max *= 2


def v_transform(w, nu, f, z, method="series", rtol=1e-10):
    """``V_{omega,nu}(f)(z) = nu(z) int f conj(B^{omega nu}_z) omega dA``.

    ``method="direct"`` evaluates the integral on the disc with the kernel of
    the product weight.
    """
    f = _as_symbol(f)
    z = complex(z)
    if method == "series":
        return complex(v_series(w, nu, f, rho=max(abs(z), 0.5))(z))
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    wn = product_weight(w, nu)
    c = kernel_terms(wn, abs(z))
    pref = float(_factor_values(_nu_factor(nu), np.array([abs(z)]))[0])

    def radial(rs):
        out = np.empty(rs.size, dtype=complex)
        mag = np.empty(rs.size)
        for i, r in enumerate(rs):
            zeta, wt, B = _kernel_on_circle(f, r, z, c, max(disc.theta_count(abs(z) * r, 32.0), 4 * c.size))
            vals = f(zeta) * np.conj(B)
            out[i] = np.sum(wt * vals)
            mag[i] = np.sum(wt * np.abs(vals))
        return out, mag

    return pref * complex(disc.disc_integral(w, radial, rtol=rtol))


def default_radii(r_max=0.999):
    inner = np.linspace(0.0, 0.9, 19)
    outer = 1.0 - np.logspace(-1, np.log10(1.0 - r_max), 25)
    return np.unique(np.concatenate((inner, outer)))


@dataclass(frozen=True)
class SupResult:
    value: float
    point: complex
    grid_value: float = field(default=float("nan"))


def _sup_modulus(func, on_circle, radii, n_theta, polish):
    """Max of ``|func|`` on a polar grid, refined by local optimization."""
    radii = np.asarray(radii, dtype=float)
    vals = np.array([np.abs(on_circle(r, n_theta)) for r in radii])
    flat = np.argsort(vals, axis=None)[::-1]
    i, j = np.unravel_index(flat[0], vals.shape)
    best_v = float(vals[i, j])
    best_z = radii[i] * np.exp(2j * np.pi * j / n_theta)
    grid_best = best_v
    if polish and best_v > 0:
        r_lo, r_hi = float(radii.min()), float(radii.max())
        seen = 0
        for k in flat[:40]:
            if seen >= 5:
                break
            i, j = np.unravel_index(k, vals.shape)
            seen += 1
            x0 = np.array([radii[i], 2 * np.pi * j / n_theta])

            def neg(x):
                return -float(np.abs(func(np.clip(x[0], r_lo, r_hi) * np.exp(1j * x[1]))))

            res = optimize.minimize(neg, x0, method="Nelder-Mead",
                                    options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
            if -res.fun > best_v:
                best_v = -float(res.fun)
                best_z = complex(np.clip(res.x[0], r_lo, r_hi) * np.exp(1j * res.x[1]))
    return SupResult(best_v, complex(best_z), grid_best)


def v_sup_norm(w, nu, f, radii=None, n_theta=64, polish=True):
    """``sup |V_{omega,nu}(f)|`` over a polar grid (plus local refinement).

    The default grid reaches ``|z| = 0.999`` with 64 angles.
    """
    f = _as_symbol(f)
    radii = default_radii() if radii is None else np.asarray(radii, dtype=float)
    if n_theta < 16:
        raise ValueError("need at least 16 angles")
    if f.zero:
        return SupResult(0.0, 0j, 0.0)
    V = v_series(w, nu, f, rho=float(np.max(radii)))
    return _sup_modulus(V, V.on_circle, radii, n_theta, polish)


def bloch_norm(f, radii=None, n_theta=64, polish=True):
    """``|f(0)| + sup (1 - |z|**2) |f'(z)|`` over a polar grid."""
    f = f if isinstance(f, AnalyticCoeffs) else f.data
    radii = default_radii() if radii is None else np.asarray(radii, dtype=float)
    d = f.derivative()

    def func(z):
        return (1.0 - np.abs(z) ** 2) * d(z)

    def on_circle(r, n):
        return (1.0 - r * r) * d.on_circle(r, n)

    s = _sup_modulus(func, on_circle, radii, n_theta, polish)
    return abs(complex(f.coefficients[0])) + s.value


def omega_log_norm(w, f, n_theta=256, max_annuli=50):
    """``int |f| log(e/(1-|z|)) omega dA``; ``inf`` when the annulus sums do not decay.

    The integral is split into the dyadic annuli ``1 - 2**-k <= |z| < 1 - 2**-(k+1)``.
    """
    f = _as_symbol(f)
    if f.zero:
        return 0.0
    x, gw = quad.gauss_legendre(24)
    ln2 = math.log(2.0)
    pieces = []
    for k in range(max_annuli):
        a, b = k * ln2, (k + 1) * ln2
        if k == 0:
            sub = np.array([0.0, *(ln2 * 2.0 ** -np.arange(10, 0, -1))])
            sub = np.append(sub, ln2)
        else:
            sub = np.array([a, b])
        total = 0.0
        for lo, hi in zip(sub[:-1], sub[1:]):
            u = lo + (hi - lo) * (x + 1) / 2
            wt = gw * (hi - lo) / 2
            r = quad.r_of_u(u)
            means = np.array([np.mean(np.abs(f.on_circle(ri, n_theta))) for ri in r])
            dens = w.density_u(u) * np.exp(-u) * 2.0 * r * (1.0 + u)
            total += float(np.sum(wt * dens * means))
        pieces.append(total)
        if k >= 8:
            tail = np.array(pieces[-5:])
            if np.all(tail > 0) and np.all(tail[1:] / tail[:-1] >= 0.9):
                return math.inf
            s = sum(pieces)
            if tail[-1] <= 1e-14 * s:
                return s
            q = max(tail[1:] / np.maximum(tail[:-1], 1e-300))
            if q < 0.9 and tail[-1] * q / (1 - q) <= 1e-12 * s:
                return s + tail[-1] * q / (1 - q)
    return math.inf


def small_p_seminorm(w, f, p, radii=None, n_theta=64):
    """Growth seminorm used for small exponents.

    ``p = 1``: ``sup |f'(z)| (1-|z|) log(e/(1-|z|))``; ``0 < p < 1``:
    ``sup |f'(z)| (1-|z|) / (omega_hat(z)(1-|z|))**(1/p - 1)``.  Returns
    ``inf`` when the radial maxima grow monotonically by more than
    ``TREND_GROWTH`` across the top decade of ``1 - |z|``.
    """
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    f = f if isinstance(f, AnalyticCoeffs) else f.data
    radii = default_radii() if radii is None else np.asarray(radii, dtype=float)
    d = f.derivative()
    t = 1.0 - radii
    if p == 1:
        scale = t * np.log(math.e / t)
    else:
        scale = t / (w.tail(radii) * t) ** (1.0 / p - 1.0)
    maxima = np.array([np.max(np.abs(d.on_circle(r, n_theta))) for r in radii]) * scale
    if not np.any(maxima):
        return 0.0
    top = t <= 10.0 * t.min()
    run = maxima[top]
    if run.size >= 3 and np.all(np.diff(run) > 0) and run[-1] > TREND_GROWTH * run[0]:
        return math.inf
    return float(maxima.max())


# -- theorem reports -------------------------------------------------------------------------------

def default_n0(w):
    """``ceil(lambda) + 1`` with ``lambda`` estimated from the integral characterization."""
    from .weight_classes import lambda_estimate, n0_from_lambda
    lam, _ = lambda_estimate(w)
    return n0_from_lambda(lam), lam


def theorem1_report(w, symbols, p=2.0, n=None, M=128, radii=None, stability=True):
    """Hankel norm against ``sup |V_{omega,nu}(f)|`` with ``nu = (1-|z|)**n``.

    ``symbols`` is a sequence of ``(label, SymbolFunction)``.  For ``p = 2``
    the Hankel side is the truncated exact norm (and its change from ``M``
    to ``2M`` is recorded when ``stability``); otherwise it is a lower bound.
    """
    lam = None
    if n is None:
        n, lam = default_n0(w)
    nu = power_factor(n)
    rep = RatioReport("theorem1", meta={"weight": w.name, "p": float(p), "n": int(n),
                                        "lambda": lam, "M": int(M)})
    mode = "exact2" if p == 2 else "lower_p"
    for label, f in symbols:
        f = _as_symbol(f)
        if not f.bounded or f.kind in ("grid", "function"):
            if not math.isfinite(omega_log_norm(w, f)):
                rep.flags.append(f"{label}: symbol not in L^1 of omega_log; skipped")
                continue
        est, kind = hankel_norm(w, f, p, M, mode)
        extra = {"kind": kind, "symbol": label}
        if f.zero:
            rep.add(label, 0.0, 0.0, degenerate=True, **extra)
            rep.rows[-1].ratio = float("nan")
            continue
        if stability and p == 2:
            est2, _ = hankel_norm(w, f, p, min(2 * M, M_MAX), mode)
            extra["stability"] = abs(est2 - est) / est if est else 0.0
            extra["estimate_2M"] = est2
        vs = v_sup_norm(w, nu, f, radii)
        extra["argmax"] = [vs.point.real, vs.point.imag]
        rep.add(label, est, vs.value, **extra)
    return rep


def theorem2_report(w, functions, p=2.0, n=None, M=128, radii=None, nu_weight=None):
    """Bloch norm against ``sup |V_{omega, nu_hat}(f)|`` for analytic symbols.

    Rows hold ``bloch_norm`` (LHS) and ``v_sup_norm`` with ``nu_hat`` of
    ``nu_weight`` (RHS, default the tail of ``standard(0)``); extras record the
    sup with ``(1-|z|)**n`` and the Hankel norm.
    """
    from .weights import standard, tail_product
    nu_w = standard(0.0) if nu_weight is None else nu_weight
    nu_hat = tail_product(nu_w)
    lam = None
    if n is None:
        n, lam = default_n0(w)
    mode = "exact2" if p == 2 else "lower_p"
    rep = RatioReport("theorem2", meta={"weight": w.name, "nu": nu_w.name, "p": float(p),
                                        "n": int(n), "lambda": lam, "M": int(M)})
    for label, f in functions:
        F = f if isinstance(f, AnalyticCoeffs) else f.data
        sym = analytic(F)
        b = bloch_norm(F, radii)
        v_hat = v_sup_norm(w, nu_hat, sym, radii).value
        v_pow = v_sup_norm(w, power_factor(n), sym, radii).value
        h, kind = hankel_norm(w, sym, p, M, mode)
        rep.add(label, b, v_hat, v_sup_pow=v_pow, hankel=h, kind=kind, symbol=label)
    return rep


__all__ = [
    "HankelMatrix", "VTransform", "SupResult", "ModeError", "M_MAX", "product_weight",
    "project", "maximal_project_point", "hankel_matrix", "hankel_apply", "hankel_norm",
    "ap_norm", "lower_bound_family", "v_multiplier", "v_series", "v_transform", "v_sup_norm",
    "bloch_norm", "omega_log_norm", "small_p_seminorm", "dilate", "default_radii",
    "default_n0", "theorem1_report", "theorem2_report",
]
