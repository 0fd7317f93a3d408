"""Hyperbolic discs, weighted mean oscillation and ``P_omega : L^inf -> B`` checks.

The hyperbolic disc ``Delta(z, r) = {beta(z, zeta) < r}`` is a euclidean disc;
with ``s = tanh r`` its center is ``z (1 - s^2) / (1 - s^2 |z|^2)`` and its
radius ``s (1 - |z|^2) / (1 - s^2 |z|^2)``.  Averages over it use
Gauss-Legendre nodes in the local radius and the trapezoid rule in the local
angle, refined until two levels agree.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature as quad
from .operators import bloch_norm, default_radii, project
from .quadrature import QuadratureError
from .reports import BAND_WIDTH, RatioReport, monotone_growth
from .symbols import SymbolFunction, sign_pattern

#: Default hyperbolic radius of the oscillation discs.
DEFAULT_R = 1.0

#: Hyperbolic step of the default BO grid along each ray.
BO_STEP = 0.05

_MAX_LEVEL = 6


class DegenerateDiscError(ValueError):
    """``omega(Delta(z, r)) = 0``: the local mean is undefined."""


def hyp_distance(z, zeta):
    """Poincare distance ``1/2 log((1 + rho) / (1 - rho))``, ``rho`` pseudo-hyperbolic."""
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    rho = np.abs(z - zeta) / np.abs(1.0 - np.conj(zeta) * z)
    out = np.arctanh(np.minimum(rho, 1.0))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class HyperbolicDisc:
    """``Delta(z, r)`` with its euclidean center and radius."""

    z: complex
    r: float
    center: complex = field(init=False)
    radius: float = field(init=False)

    def __post_init__(self):
        z = complex(self.z)
        if abs(z) >= 1:
            raise ValueError("center must lie in the unit disc")
        if not self.r > 0 or not math.isfinite(self.r):
            raise ValueError("radius must be positive and finite")
        s = math.tanh(self.r)
        d = 1.0 - s * s * abs(z) ** 2
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "center", z * (1.0 - s * s) / d)
        object.__setattr__(self, "radius", s * (1.0 - abs(z) ** 2) / d)

    @classmethod
    def at_origin(cls, euclidean_radius):
        """The disc centered at 0 with the given euclidean radius."""
        if not 0 < euclidean_radius < 1:
            raise ValueError("euclidean radius must lie in (0, 1)")
        return cls(0.0, math.atanh(euclidean_radius))

    def boundary(self, n=8):
        phi = 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * phi)

    def check(self, n=8, tol=1e-10):
        """Containment and ``beta(z, .) = r`` on ``n`` boundary samples."""
        if abs(self.center) + self.radius >= 1:
            return False
        err = np.abs(hyp_distance(self.z, self.boundary(n)) - self.r)
        return bool(np.all(err <= tol * max(1.0, self.r)))

    def rule(self, level=0, theta_breaks=()):
        """Nodes and (unnormalized) area weights ``r dr dtheta`` on the disc.

        Global polar coordinates: each circle ``|zeta| = r`` meets the disc in
        an arc, integrated by Gauss pieces split at ``theta_breaks`` (rays where
        the integrand may jump).  The radial variable is ``r = m - h cos t``
        on the arc part, which removes the square-root ends of the arc length.
        """
        n = 8 * 2 ** level
        x, gw = quad.gauss_legendre(n)
        a, R = abs(self.center), self.radius
        phi0 = float(np.angle(self.center)) if a > 0 else 0.0
        breaks = np.sort(np.mod(np.asarray(theta_breaks, dtype=float), 2 * np.pi))
        rs, ws, los, his = [], [], [], []
        if R > a:
            r0 = R - a
            r = r0 * (x + 1) / 2
            rs.append(r)
            ws.append(gw * r0 / 2 * r)
            los.append(np.full(n, phi0 - np.pi))
            his.append(np.full(n, phi0 + np.pi))
        if a > 0:
            lo, hi = abs(a - R), a + R
            m, h = (lo + hi) / 2, (hi - lo) / 2
            # radii where a break ray crosses the boundary circle: kinks in r
            cuts = [0.0, np.pi]
            for b in breaks:
                p = (self.center * np.exp(-1j * b)).real
                disc_ = p * p - a * a + R * R
                if disc_ > 0:
                    for root in (p - math.sqrt(disc_), p + math.sqrt(disc_)):
                        if lo < root < hi:
                            cuts.append(math.acos(min(1.0, max(-1.0, (m - root) / h))))
            cuts = np.unique(cuts)
            for t0, t1 in zip(cuts[:-1], cuts[1:]):
                t = t0 + (t1 - t0) * (x + 1) / 2
                r = m - h * np.cos(t)
                cos_alpha = (r * r + a * a - R * R) / (2 * r * a)
                alpha = np.arccos(np.clip(cos_alpha, -1.0, 1.0))
                rs.append(r)
                ws.append(gw * (t1 - t0) / 2 * h * np.sin(t) * r)
                los.append(phi0 - alpha)
                his.append(phi0 + alpha)
        nodes, weights = [], []
        for r, wr, lo, hi in zip(np.concatenate(rs), np.concatenate(ws),
                                 np.concatenate(los), np.concatenate(his)):
            edges = [lo]
            if breaks.size:
                k0 = math.floor((lo - breaks[0]) / (2 * np.pi))
                cand = (breaks[None, :] + 2 * np.pi * np.arange(k0, k0 + 3)[:, None]).ravel()
                edges.extend(np.sort(cand[(cand > lo) & (cand < hi)]))
            edges.append(hi)
            edges = np.asarray(edges)
            A, B = edges[:-1], edges[1:]
            th = ((A + B)[:, None] + (B - A)[:, None] * x[None, :]) / 2
            nodes.append((r * np.exp(1j * th)).ravel())
            weights.append((wr * (B - A)[:, None] / 2 * gw[None, :]).ravel())
        return np.concatenate(nodes), np.concatenate(weights)


def _as_disc(z, r):
    return z if isinstance(z, HyperbolicDisc) else HyperbolicDisc(z, r)


def _weighted_rule(w, disc, level, theta_breaks=()):
    zeta, a = disc.rule(level, theta_breaks)
    u = -np.log1p(-np.abs(zeta))
    with np.errstate(divide="ignore"):
        logd = np.asarray(w.log_density_u(u), dtype=float)
    top = np.max(logd)
    if not np.isfinite(top):
        raise DegenerateDiscError(f"omega vanishes on the disc at z={disc.z}")
    return zeta, a * np.exp(logd - top)


def _stats(w, f, disc, p, level):
    zeta, W = _weighted_rule(w, disc, level, getattr(f, "theta_breaks", ()))
    vals = np.asarray(f(zeta), dtype=complex)
    mass = np.sum(W)
    mean = np.sum(W * vals) / mass
    dev = np.abs(vals - mean)
    mo = (np.sum(W * dev ** p) / mass) ** (1.0 / p)
    # roundoff floor: constant data give dev ~ 1e-16 |f|
    osc = max(np.sum(W * dev) / mass, 1e-13 * float(np.max(np.abs(vals), initial=0.0)))
    return mean, mo, osc


def _refined(w, f, disc, p, rtol, strict):
    prev = None
    for lev in range(_MAX_LEVEL):
        cur = _stats(w, f, disc, p, lev)
        if prev is not None:
            mean, mo, osc = cur
            if abs(mo - prev[1]) <= rtol * max(mo, osc) and \
                    abs(mean - prev[0]) <= rtol * max(abs(mean), osc):
                return cur, True
        prev = cur
    if strict:
        raise QuadratureError(f"disc average not converged to rtol={rtol:g}",
                              achieved=abs(cur[1] - prev[1]) / max(cur[1], 1e-300))
    return cur, False


def local_mean(w, f, z, r=DEFAULT_R, rtol=1e-10):
    """``int_Delta f omega dA / omega(Delta)`` over ``Delta(z, r)``.

    ``z`` may also be a ``HyperbolicDisc``.
    """
    (mean, _, _), _ = _refined(w, f, _as_disc(z, r), 2.0, rtol, True)
    return complex(mean)


def mo_point(w, f, z, p=2.0, r=DEFAULT_R, rtol=1e-10, strict=True):
    """Mean oscillation ``MO_{omega,p,r}(f)(z)``.

    With ``strict=False`` an unconverged average is returned instead of
    raising; the second value then tells whether refinement converged.
    """
    if not 1 <= p < math.inf:
        raise ValueError("p must lie in [1, inf)")
    (_, mo, _), ok = _refined(w, f, _as_disc(z, r), float(p), rtol, strict)
    return float(mo) if strict else (float(mo), ok)


def default_bmo_grid(radii=(0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99), n_angle=16):
    """Polar grid of disc centers (the origin once)."""
    pts = []
    for rad in radii:
        if rad == 0:
            pts.append(0j)
        else:
            pts.extend(rad * np.exp(2j * np.pi * np.arange(n_angle) / n_angle))
    return np.array(pts, dtype=complex)


@dataclass
class BMOResult:
    value: float
    point: complex
    dropped: int
    unconverged: int


def bmo_norm(w, f, p=2.0, r=DEFAULT_R, z_grid=None, rtol=1e-4, return_info=False):
    """``sup MO_{omega,p,r}(f)`` over ``z_grid``.

    Centers where ``omega(Delta) = 0`` are dropped and counted; averages that
    do not reach ``rtol`` keep their finest value and are counted too.
    """
    grid = default_bmo_grid() if z_grid is None else np.asarray(z_grid, dtype=complex)
    best, arg, dropped, loose = 0.0, 0j, 0, 0
    for z in grid:
        try:
            mo, ok = mo_point(w, f, complex(z), p, r, rtol, strict=False)
        except DegenerateDiscError:
            dropped += 1
            continue
        loose += not ok
        if mo > best:
            best, arg = mo, complex(z)
    if dropped == grid.size:
        raise DegenerateDiscError("omega vanishes on every disc of the grid")
    res = BMOResult(float(best), arg, dropped, loose)
    return res if return_info else res.value


def default_bo_grid(r_max=0.99, step=BO_STEP, n_angle=16):
    """Rays at ``n_angle`` angles with hyperbolic spacing ``step`` from the origin."""
    b = np.arange(step, math.atanh(r_max) + 1e-12, step)
    rad = np.tanh(b)
    pts = rad[:, None] * np.exp(2j * np.pi * np.arange(n_angle) / n_angle)[None, :]
    return np.concatenate(([0j], pts.ravel()))


def bo_seminorm(f, z_grid=None, chunk=512):
    """``sup |f(z) - f(zeta)|`` over grid pairs with ``beta(z, zeta) <= 1``."""
    grid = default_bo_grid() if z_grid is None else np.asarray(z_grid, dtype=complex)
    vals = np.asarray(f(grid), dtype=complex)
    best = 0.0
    for i in range(0, grid.size, chunk):
        z = grid[i:i + chunk, None]
        near = hyp_distance(z, grid[None, :]) <= 1.0 + 1e-12
        diff = np.abs(vals[i:i + chunk, None] - vals[None, :])
        if np.any(near):
            best = max(best, float(np.max(diff[near])))
    return best


def sup_modulus(f, radii=None, n_theta=256):
    """``sup |f|`` sampled on circles (``L^inf`` norm of a bounded symbol)."""
    radii = default_radii() if radii is None else radii
    vals = [np.max(np.abs(f.on_circle(float(r), n_theta) if isinstance(f, SymbolFunction)
                          else f(r * np.exp(2j * np.pi * np.arange(n_theta) / n_theta))))
            for r in radii]
    return float(max(vals))


def default_b_symbols():
    """Bounded symbols of the Theorem B band check."""
    from .symbols import analytic, conj_analytic, monomial, monomial_mix
    return [
        ("1", analytic([1.0])),
        ("z", analytic([0.0, 1.0])),
        ("conj(z)", conj_analytic([0.0, 1.0])),
        ("re(z)", monomial_mix([(0.5, 1, 0), (0.5, 0, 1)], name="re")),
        ("|z|^2 z", monomial(2, 1)),
        ("signre", sign_pattern(1)),
        ("signre:m=2", sign_pattern(2)),
        ("signre:m=4", sign_pattern(4)),
    ]


def _p_bloch(w, f, M):
    return bloch_norm(project(w, f, M))


def theoremB_report(w, symbols=None, p=2.0, r=DEFAULT_R, z_grid=None, M=2048,
                    compute_bmo=True, annotate=True):
    """Bloch norm of ``P_omega f`` against ``sup |f|`` and ``BMO`` for bounded ``f``.

    Rows hold ``lhs = ||P_omega f||_B``, ``rhs = ||f||_inf``; extras carry
    ``bmo`` and ``ratio_bmo``.  Symbols killed by ``P_omega`` give ratio 0,
    so the verdict ``meta["bounded"]`` is one-sided: every ratio at most
    ``BAND_WIDTH`` (the ``f = 1`` row has ratio 1) and no ``BMO > 2 sup|f|``
    flag.  ``annotate`` adds the moment doubling verdict
    of ``w`` to the meta data without gating anything.
    """
    symbols = default_b_symbols() if symbols is None else symbols
    rep = RatioReport("theoremB", meta={"weight": w.name, "p": float(p), "r": float(r),
                                        "M": int(M)})
    if annotate:
        from .weight_classes import m_report
        rep.meta["m_verdict"] = m_report(w).verdict
    for label, f in symbols:
        linf = sup_modulus(f)
        b = _p_bloch(w, f, M)
        extra = {"symbol": label}
        if compute_bmo:
            info = bmo_norm(w, f, p, r, z_grid, return_info=True)
            extra.update(bmo=info.value, ratio_bmo=b / info.value if info.value > 0 else None,
                         dropped=info.dropped, unconverged=info.unconverged)
            if info.value > 2 * linf * (1 + 1e-6):
                rep.flags.append(f"bmo above 2 sup|f| for {label}")
        rep.add(label, b, linf, **extra)
    rat = rep.ratios
    rep.meta["bounded"] = bool(np.all(np.isfinite(rat)) and rat.max() <= BAND_WIDTH
                               and not rep.flags)
    return rep


#: Largest truncation of the trend family; beyond it the moments of fast
#: decaying weights leave the double range.
TREND_M_MAX = 8192


def theoremB_trend(w, R_values=(0.5, 0.6, 0.7, 0.8, 0.85, 0.9), M=None, decay=1e-12):
    """``||P_omega s_R||_B / ||s_R||_inf`` for ``s_R = sign(Re z) 1_{|z| < R}``.

    A growing column signals that ``P_omega`` is unbounded on ``L^inf``.
    ``meta["monotone"]`` records strict increase along ``R``.  The default
    truncation is doubled (up to ``TREND_M_MAX``) until the last tenth of the
    Taylor coefficients of ``P_omega s_R`` lies below ``decay`` times the
    largest one; unresolved rows are flagged.

    For ``exp`` weights the coefficients of ``P_omega s_R`` peak near
    ``n ~ 1/(1 - R)**2``, which limits the usable ``R``.
    """
    rep = RatioReport("theoremB-trend", meta={"weight": w.name})
    for R in R_values:
        s = sign_pattern(1, cut=float(R))
        MM = max(256, int(math.ceil(40.0 / (1.0 - R)))) if M is None else int(M)
        F, resolved = None, False
        while True:
            try:
                F = project(w, s, MM)
            except QuadratureError:
                if F is None:
                    raise
                MM //= 2
                break
            a = np.abs(F.coefficients)
            resolved = a[int(0.9 * a.size):].max() <= decay * a.max()
            if M is not None or resolved or 2 * MM > TREND_M_MAX:
                break
            MM *= 2
        if not resolved:
            rep.flags.append(f"P s_R not resolved at R={R:g} with M={MM}")
        rep.add(float(R), bloch_norm(F), sup_modulus(s), M=MM, symbol=s.name,
                resolved=bool(resolved))
    rat = rep.ratios
    rep.meta["monotone"] = bool(np.all(np.diff(rat) > 0))
    rep.meta["growth"] = bool(monotone_growth(rat))
    return rep


__all__ = [
    "HyperbolicDisc", "DegenerateDiscError", "BMOResult", "DEFAULT_R", "BO_STEP", "TREND_M_MAX",
    "hyp_distance", "local_mean", "mo_point", "bmo_norm", "bo_seminorm", "sup_modulus",
    "default_bmo_grid", "default_bo_grid", "default_b_symbols",
    "theoremB_report", "theoremB_trend",
]
