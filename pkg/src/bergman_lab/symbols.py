"""Symbols of Hankel operators and analytic functions given by coefficients.

Everything the operators need from a symbol ``f`` is the sequence

    J_n(f) = int_D f(zeta) conj(zeta)**n omega(zeta) dA(zeta),   n >= 0,

since ``(P_omega f)^(n) = J_n / (2 omega_{2n+1})`` and the Hankel matrix has
entries ``conj(J_{m+j}) / (2 omega_{2m+1})``.  Symbols with a closed angular
structure (analytic, conjugate analytic, finite sums of ``z**a conj(z)**b``,
separable ``g(r) h(theta)``, ``nu(|z|) * analytic``) reduce ``J_n`` to moments;
grid tables and plain callables go through quadrature.
"""

from dataclasses import dataclass, field
import ast
import csv
import math

import numpy as np

from . import disc
from .quadrature import QuadratureError, gauss_legendre, u_of_r
from .weights import Modifier, RadialWeight, cut_factor, derive_weight, profile_factor

#: Degree of the truncated ``log(1/(1-z))`` symbol.
LOG_DEGREE = 200

_QUAD_RTOL = 1e-10


class SymbolError(ValueError):
    """Malformed symbol spec or unusable symbol data."""


@dataclass(frozen=True)
class AnalyticCoeffs:
    """``f(z) = sum_{n <= M} c_n z**n``."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0 or not np.all(np.isfinite(c)):
            raise SymbolError("coefficients must be a nonempty finite 1-d list")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def M(self):
        return self.coefficients.size - 1

    def __call__(self, z):
        smax = self.__dict__.get("_smax")
        if smax is None and self.coefficients.size > 32:
            smax = disc.suffix_max(self.coefficients)
            object.__setattr__(self, "_smax", smax)
        return disc.series_eval(self.coefficients, np.asarray(z, dtype=complex), smax=smax)

    def derivative(self):
        c = self.coefficients
        if c.size == 1:
            return AnalyticCoeffs([0.0])
        return AnalyticCoeffs(c[1:] * np.arange(1, c.size))

    def on_circle(self, r, n_theta):
        """Values at ``r e^{2 pi i j / n_theta}`` (exact up to rounding)."""
        return disc.power_series_on_circle(self.coefficients, r, n_theta)

    def padded(self, n):
        out = np.zeros(n, dtype=complex)
        k = min(n, self.coefficients.size)
        out[:k] = self.coefficients[:k]
        return out


def dilate(f, r):
    """``f_r(z) = f(r z)``: coefficient ``n`` scaled by ``r**n``."""
    if not 0 < r <= 1:
        raise ValueError("dilation radius must lie in (0, 1]")
    c = f.coefficients
    with np.errstate(under="ignore"):
        return AnalyticCoeffs(c * r ** np.arange(c.size))


@dataclass(frozen=True)
class GridTable:
    """Samples on a polar grid ``r_i x theta_j`` (theta uniform or not, periodic)."""

    r: np.ndarray
    theta: np.ndarray
    values: np.ndarray
    rule: tuple = None  # (weight name, level) when r holds disc-rule nodes

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        rr = np.clip(np.abs(z), self.r[0], self.r[-1])
        th = np.mod(np.angle(z), 2 * np.pi)
        # radial cell
        i = np.clip(np.searchsorted(self.r, rr, side="right") - 1, 0, max(self.r.size - 2, 0))
        if self.r.size == 1:
            tr = np.zeros_like(rr)
            i1 = i
        else:
            i1 = i + 1
            tr = (rr - self.r[i]) / (self.r[i1] - self.r[i])
        # periodic angular cell
        t_ext = np.append(self.theta, self.theta[0] + 2 * np.pi)
        j = np.clip(np.searchsorted(t_ext, th, side="right") - 1, 0, self.theta.size - 1)
        j1 = (j + 1) % self.theta.size
        tt = (th - t_ext[j]) / (t_ext[j + 1] - t_ext[j])
        # angles below the first node wrap around
        below = th < self.theta[0]
        if np.any(below):
            j = np.where(below, self.theta.size - 1, j)
            j1 = np.where(below, 0, j1)
            span = self.theta[0] + 2 * np.pi - self.theta[-1]
            tt = np.where(below, (th + 2 * np.pi - self.theta[-1]) / span, tt)
        v = self.values
        return ((1 - tr) * (1 - tt) * v[i, j] + (1 - tr) * tt * v[i, j1]
                + tr * (1 - tt) * v[i1, j] + tr * tt * v[i1, j1])


def read_grid(path):
    """Read a CSV table with columns ``r, theta, re, im`` (header optional)."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or not "".join(rec).strip():
                continue
            if len(rec) < 4:
                raise SymbolError(f"{path}: expected columns r, theta, re, im, got {rec!r}")
            try:
                rows.append([float(x) for x in rec[:4]])
            except ValueError:
                if rows:
                    raise SymbolError(f"{path}: non-numeric row {rec!r}")
                continue  # header
    if not rows:
        raise SymbolError(f"{path}: empty grid")
    a = np.array(rows)
    if a.shape[1] != 4:
        raise SymbolError(f"{path}: expected columns r, theta, re, im")
    r = np.unique(a[:, 0])
    th = np.unique(np.mod(a[:, 1], 2 * np.pi))
    if np.any(r < 0) or np.any(r >= 1):
        raise SymbolError(f"{path}: radii must lie in [0, 1)")
    vals = np.full((r.size, th.size), np.nan, dtype=complex)
    ir = np.searchsorted(r, a[:, 0])
    it = np.searchsorted(th, np.mod(a[:, 1], 2 * np.pi))
    vals[ir, it] = a[:, 2] + 1j * a[:, 3]
    if not np.all(np.isfinite(vals)):
        raise SymbolError(f"{path}: grid is incomplete or has non-finite values")
    return GridTable(r, th, vals)


def _radial_moments(w, factor, xs):
    """``int_0^1 r**x factor(r) omega(r) dr`` for a radial factor."""
    if factor is None:
        return w.moments(xs)
    if isinstance(factor, RadialWeight):
        factor = profile_factor(factor)
    return _derived(w, factor).moments(xs)


_DERIVED = {}


def _derived(w, modifier):
    key = (id(w), modifier.kind, modifier.beta, id(modifier.other), modifier.power)
    hit = _DERIVED.get(key)
    if hit is None or hit[0] is not w:
        hit = (w, modifier, derive_weight(w, modifier))
        _DERIVED[key] = hit
    return hit[2]


@dataclass(frozen=True)
class SymbolFunction:
    """A symbol on the disc.

    ``kind`` is one of ``analytic``, ``conj`` (conjugate analytic),
    ``mono`` (finite sum of ``c z**a conj(z)**b``), ``angular``
    (``g(|z|) h(arg z)`` with known Fourier coefficients of ``h``),
    ``radial_analytic`` (``nu(|z|) F(z)``), ``grid`` and ``function``.

    Use the constructors below rather than the raw fields.
    """

    kind: str
    name: str
    data: object = None
    func: object = field(default=None, compare=False)
    theta_breaks: tuple = ()
    bounded: bool = True
    zero: bool = False

    # -- pointwise values -------------------------------------------------

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "analytic":
            return self.data(z)
        if self.kind == "conj":
            return np.conj(self.data(z))
        if self.kind == "mono":
            out = np.zeros_like(z)
            for c, a, b in self.data:
                out = out + c * z ** a * np.conj(z) ** b
            return out
        if self.kind == "radial_analytic":
            factor, F = self.data
            return _factor_values(factor, np.abs(z)) * F(z)
        return np.asarray(self.func(z), dtype=complex)

    def on_circle(self, r, n_theta):
        """Values at ``r e^{2 pi i j / n_theta}``."""
        if self.kind == "analytic":
            return self.data.on_circle(r, n_theta)
        if self.kind == "conj":
            return np.conj(self.data.on_circle(r, n_theta))
        if self.kind == "radial_analytic":
            factor, F = self.data
            return _factor_values(factor, np.array([r]))[0] * F.on_circle(r, n_theta)
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        return self(r * np.exp(1j * theta))

    # -- moments J_n ------------------------------------------------------

    def exact_moments(self, w, n_max):
        """``J_n`` for ``n = 0..n_max`` by moment reduction, or ``None``."""
        n = np.arange(n_max + 1)
        J = np.zeros(n_max + 1, dtype=complex)
        if self.zero:
            return J
        if self.kind == "analytic":
            c = self.data.padded(n_max + 1)
            nz = np.nonzero(c)[0]
            J[nz] = c[nz] * 2.0 * w.moments(2.0 * nz + 1.0)
            return J
        if self.kind == "conj":
            J[0] = np.conj(self.data.coefficients[0]) * 2.0 * w.moment(1.0)
            return J
        if self.kind == "mono":
            for c, a, b in self.data:
                k = a - b
                if 0 <= k <= n_max:
                    J[k] += c * 2.0 * w.moment(2.0 * a + 1.0)
            return J
        if self.kind == "angular":
            coeff, factor = self.data
            h = np.asarray(coeff(n), dtype=complex)
            nz = np.nonzero(h)[0]
            if nz.size:
                J[nz] = h[nz] * 2.0 * _radial_moments(w, factor, nz + 1.0)
            return J
        if self.kind == "radial_analytic":
            factor, F = self.data
            c = F.padded(n_max + 1)
            nz = np.nonzero(c)[0]
            if nz.size:
                J[nz] = c[nz] * 2.0 * _radial_moments(w, factor, 2.0 * nz + 1.0)
            return J
        return None

    def moments(self, w, n_max, force_quadrature=False, rtol=_QUAD_RTOL):
        """``J_n(f)`` for ``n = 0..n_max``."""
        if not force_quadrature:
            J = self.exact_moments(w, n_max)
            if J is not None:
                return J
        return quadrature_moments(w, self, n_max, rtol)


def _factor_values(factor, r):
    r = np.asarray(r, dtype=float)
    if factor is None:
        return np.ones_like(r)
    if isinstance(factor, Modifier):
        return np.asarray(factor.factor(r), dtype=float)
    return np.asarray(factor(r), dtype=float)


# -- quadrature path -------------------------------------------------------------

def _angular_rule(sym, n_max):
    """Angular nodes and weights (mean over the circle)."""
    if sym.theta_breaks:
        b = np.sort(np.mod(np.asarray(sym.theta_breaks, dtype=float), 2 * np.pi))
        edges = np.append(b, b[0] + 2 * np.pi)
        per = max(2, int(math.ceil((n_max + 16) / (8.0 * b.size))))
        x, gw = gauss_legendre(32)
        th, wt = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            t = np.linspace(lo, hi, per + 1)
            for a, c in zip(t[:-1], t[1:]):
                th.append(a + (c - a) * (x + 1) / 2)
                wt.append(gw * (c - a) / 2)
        return np.concatenate(th), np.concatenate(wt) / (2 * np.pi), None
    n = max(256, int(2 ** math.ceil(math.log2(4 * (n_max + 1)))))
    return None, None, n


def _circle_fourier(sym, r, n_max, rule):
    """``F_n(r) = mean f(r e^{it}) e^{-int}`` for ``n = 0..n_max``."""
    th, wt, n_theta = rule
    if n_theta is not None:
        vals = sym.on_circle(r, n_theta)
        return np.fft.fft(vals)[:n_max + 1] / n_theta
    vals = sym(r * np.exp(1j * th)) * wt
    return np.exp(-1j * np.outer(np.arange(n_max + 1), th)) @ vals


def _on_grid_nodes(w, sym, n_max):
    """``J_n`` directly on the nodes of a grid tabulated on the rule of ``w``."""
    t = sym.data
    n_theta = t.theta.size
    r, W = disc.disc_rule(w, t.rule[1])
    ir = np.searchsorted(t.r, r)
    if (np.any(ir >= t.r.size) or not np.allclose(t.r[ir], r, rtol=0, atol=0)
            or not np.allclose(t.theta, 2 * np.pi * np.arange(n_theta) / n_theta)
            or n_max >= n_theta // 2):
        return None
    n = np.arange(n_max + 1)
    F = np.fft.fft(t.values[ir], axis=1)[:, :n_max + 1] / n_theta
    with np.errstate(under="ignore"):
        return ((W[:, None] * r[:, None] ** n[None, :]) * F).sum(axis=0)


def _radial_breaks(sym):
    """Jumps of a symbol's radial factor, in ``u``."""
    factor = sym.data[1] if sym.kind in ("angular", "radial_analytic") else None
    if isinstance(factor, Modifier) and factor.kind == "cut":
        return (float(u_of_r(factor.beta)),)
    return ()


def quadrature_moments(w, sym, n_max, rtol=_QUAD_RTOL):
    """``J_n`` by radial rule of ``w`` times an angular rule, refined until stable.

    Grid tables tabulated on the disc rule of ``w`` are integrated on their
    own nodes; other tables are limited by interpolation and use
    ``max(rtol, 1e-6)``.
    """
    if sym.kind == "grid":
        t = sym.data
        if t.rule is not None and t.rule[0] == w.name:
            J = _on_grid_nodes(w, sym, n_max)
            if J is not None:
                return J
        rtol = max(rtol, 1e-6)
    rule = _angular_rule(sym, n_max)
    n = np.arange(n_max + 1)
    breaks = _radial_breaks(sym)
    prev = None
    for level in range(4):
        r, W = disc.disc_rule(w, level, breaks)
        F = np.array([_circle_fourier(sym, ri, n_max, rule) for ri in r])
        with np.errstate(under="ignore"):
            J = ((W[:, None] * r[:, None] ** n[None, :]) * F).sum(axis=0)
        if prev is not None:
            scale = np.max(np.abs(J)) if np.any(J) else 1.0
            if np.max(np.abs(J - prev)) <= rtol * max(scale, 1e-300):
                return J
        prev = J
    raise QuadratureError("symbol moments did not converge",
                          achieved=float(np.max(np.abs(J - prev))))


# -- constructors ----------------------------------------------------------------------

def analytic(coeffs, name=None):
    f = coeffs if isinstance(coeffs, AnalyticCoeffs) else AnalyticCoeffs(coeffs)
    return SymbolFunction("analytic", name or f"poly:{_fmt_list(f.coefficients)}", f,
                          zero=not np.any(f.coefficients))


def conj_analytic(coeffs, name=None):
    f = coeffs if isinstance(coeffs, AnalyticCoeffs) else AnalyticCoeffs(coeffs)
    return SymbolFunction("conj", name or f"conj:poly:{_fmt_list(f.coefficients)}", f,
                          zero=not np.any(f.coefficients))


def monomial_mix(terms, name=None):
    """Finite sum of ``c z**a conj(z)**b`` given as ``[(c, a, b), ...]``."""
    clean = []
    for c, a, b in terms:
        a, b = int(a), int(b)
        if a < 0 or b < 0:
            raise SymbolError("monomial exponents must be nonnegative")
        clean.append((complex(c), a, b))
    label = name or "+".join(f"{_fmt_num(c)}*z^{a}*zbar^{b}" for c, a, b in clean)
    return SymbolFunction("mono", label, tuple(clean), zero=all(c == 0 for c, _, _ in clean))


def monomial(a, b=0, c=1.0):
    return monomial_mix([(c, a, b)], name=f"mono:a={a},b={b}")


def radial_times_analytic(factor, F, name=None):
    """``factor(|z|) F(z)`` with a ``Modifier``/``RadialWeight`` factor."""
    F = F if isinstance(F, AnalyticCoeffs) else AnalyticCoeffs(F)
    label = getattr(factor, "label", getattr(factor, "name", "factor"))
    return SymbolFunction("radial_analytic", name or f"{label}*analytic", (factor, F),
                          bounded=False, zero=not np.any(F.coefficients))


def separable(h_coeffs, h_func, radial=None, theta_breaks=(), name="angular"):
    """``g(|z|) h(arg z)`` with ``h = sum_m h_m e^{i m theta}``.

    ``h_coeffs(n)`` returns ``h_n`` for ``n >= 0`` (vectorized); ``h_func``
    evaluates ``h`` at angles.
    """
    def func(z):
        return _factor_values(radial, np.abs(z)) * h_func(np.angle(z))

    return SymbolFunction("angular", name, (h_coeffs, radial), func,
                          theta_breaks=tuple(theta_breaks))


def sign_pattern(m=1, cut=None):
    """``sign(Re z**m)``: Fourier coefficients ``(2/pi) (-1)**((k-1)/2) / k`` at ``n = k m``, ``k`` odd.

    With ``cut = R`` the symbol is set to zero on ``|z| >= R``.
    """
    m = int(m)
    if m < 1:
        raise SymbolError("sign pattern needs m >= 1")

    def coeffs(n):
        n = np.asarray(n)
        out = np.zeros(n.shape)
        k = n // m
        hit = (n % m == 0) & (k % 2 == 1)
        out[hit] = (2.0 / np.pi) * (-1.0) ** ((k[hit] - 1) // 2) / k[hit]
        return out

    breaks = tuple((np.pi / 2 + np.pi * j) / m for j in range(2 * m))
    name = "signre" if m == 1 else f"signre:m={m}"
    radial = None
    if cut is not None:
        radial = cut_factor(cut)
        name += f"*{radial.label}"
    return separable(coeffs, lambda t: np.sign(np.cos(m * t)), radial=radial,
                     theta_breaks=breaks, name=name)


def sign_re():
    """``sign(Re z)``."""
    return sign_pattern(1)


def from_function(func, name="function", theta_breaks=(), bounded=True):
    return SymbolFunction("function", name, None, func, theta_breaks=tuple(theta_breaks),
                          bounded=bounded)


def from_grid(table, name="grid"):
    t = table if isinstance(table, GridTable) else read_grid(table)
    return SymbolFunction("grid", name, t, t, bounded=True, zero=not np.any(t.values))


def sample_on_rule(sym, w, n_theta=256, level=1, name=None):
    """Grid symbol with radial nodes of the disc rule of ``w`` and uniform angles."""
    r, _ = disc.disc_rule(w, level)
    r = np.unique(np.concatenate(([0.0], r)))
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    vals = np.array([sym.on_circle(ri, n_theta) for ri in r])
    return from_grid(GridTable(r, theta, vals, rule=(w.name, level)),
                     name=name or f"grid({sym.name})")


def lacunary(K):
    """``sum_{k < K} z**(2**k)``."""
    K = int(K)
    if K < 1:
        raise SymbolError("lacunary needs K >= 1")
    c = np.zeros(2 ** (K - 1) + 1)
    c[2 ** np.arange(K)] = 1.0
    return AnalyticCoeffs(c)


def log_symbol(degree=LOG_DEGREE):
    """``log(1/(1 - z))`` truncated at ``degree``."""
    n = np.arange(degree + 1, dtype=float)
    c = np.zeros(degree + 1)
    c[1:] = 1.0 / n[1:]
    return AnalyticCoeffs(c)


# -- spec language -----------------------------------------------------------------------

def _fmt_num(c):
    c = complex(c)
    if c.imag == 0:
        v = c.real
        return repr(int(v)) if v == int(v) and abs(v) < 1e15 else repr(v)
    return repr(c)


def _fmt_list(c):
    return "[" + ",".join(_fmt_num(x) for x in c) + "]"


def _parse_analytic(spec):
    if spec.startswith("poly:"):
        body = spec[5:].strip()
        try:
            vals = ast.literal_eval(body)
        except (ValueError, SyntaxError):
            raise SymbolError(f"bad coefficient list in {spec!r}")
        if not isinstance(vals, (list, tuple)) or not vals:
            raise SymbolError(f"poly needs a nonempty list: {spec!r}")
        try:
            return AnalyticCoeffs([complex(v) for v in vals])
        except TypeError:
            raise SymbolError(f"non-numeric coefficient in {spec!r}")
    if spec.startswith("lacunary:"):
        body = spec[9:].strip()
        if not body.startswith("K="):
            raise SymbolError(f"expected lacunary:K=<int>, got {spec!r}")
        try:
            return lacunary(int(body[2:]))
        except ValueError:
            raise SymbolError(f"bad K in {spec!r}")
    if spec == "logsym":
        return log_symbol()
    raise SymbolError(f"not an analytic symbol: {spec!r}")


def parse_analytic(spec):
    """Parse ``poly:[...]``, ``lacunary:K=<int>`` or ``logsym``."""
    return _parse_analytic(spec.strip())


def parse_symbol(spec):
    """Parse the symbol mini-language into a ``SymbolFunction``.

    ``poly:[c0,c1,...]`` | ``lacunary:K=<int>`` | ``logsym`` |
    ``conj:<analytic>`` | ``mono:a=<int>,b=<int>`` | ``grid:<path>`` |
    ``signre`` (the symbol ``sign(Re z)``) | ``signre:m=<int>`` (``sign(Re z**m)``).
    """
    s = spec.strip()
    if s.startswith("conj:"):
        return conj_analytic(_parse_analytic(s[5:].strip()), name=s)
    if s.startswith("mono:"):
        parts = dict(p.split("=", 1) for p in s[5:].split(",") if "=" in p)
        if set(parts) != {"a", "b"}:
            raise SymbolError(f"expected mono:a=<int>,b=<int>, got {spec!r}")
        try:
            return monomial(int(parts["a"]), int(parts["b"]))
        except ValueError:
            raise SymbolError(f"bad exponent in {spec!r}")
    if s.startswith("grid:"):
        return from_grid(read_grid(s[5:].strip()), name=s)
    if s == "signre":
        return sign_re()
    if s.startswith("signre:m="):
        try:
            return sign_pattern(int(s[9:]))
        except ValueError:
            raise SymbolError(f"bad m in {spec!r}")
    return analytic(_parse_analytic(s), name=s)


__all__ = [
    "AnalyticCoeffs", "SymbolFunction", "GridTable", "SymbolError", "dilate", "read_grid",
    "analytic", "conj_analytic", "monomial_mix", "monomial", "radial_times_analytic",
    "separable", "sign_re", "sign_pattern", "from_function", "from_grid", "sample_on_rule", "lacunary",
    "log_symbol", "parse_analytic", "parse_symbol", "quadrature_moments", "LOG_DEGREE",
]
