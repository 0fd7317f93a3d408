"""Empirical diagnostics for the doubling classes of radial weights.

Membership in ``Dhat`` (tail doubling), ``Dcheck`` (reverse tail doubling),
``D = Dhat & Dcheck`` and ``M`` (reverse moment doubling) is an asymptotic
property.  On a finite grid we can only report whether the defining ratio
looks bounded and whether it drifts, so every verdict is of the form
``*-consistent`` together with a short trend note.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import special

from . import disc
from . import quadrature as quad
from .reports import BAND_WIDTH, TREND_GROWTH, TREND_POINTS, RatioReport, monotone_growth
from .weights import (TailUnderflowError, WeightError, derive_weight,
                      tail_product)

MEMBER = "member-consistent"
NON_MEMBER = "non-member-consistent"
INCONCLUSIVE = "inconclusive"

#: Reverse-doubling constants must exceed this to count as bounded away from 1.
REVERSE_MARGIN = 1.05

#: Candidate exponents for beta, eta and lambda scans.
EXPONENT_GRID = np.arange(0.0, 64.0 + 0.125, 0.25)

#: Growth of the scanned constant over the last grid extensions that still
#: counts as stable.
STABLE_GROWTH = 1.25

HL_ABS_TOL = 1e-3
HL_MAX_TERMS = 1_000_000

_TOP = 10


class InconclusiveError(ValueError):
    """No candidate exponent gives a stable constant on the sample."""


def default_r_grid(k_max=20):
    """``r_k = 1 - 2**-k`` for ``k = 1..k_max``."""
    return 1.0 - 2.0 ** -np.arange(1, k_max + 1)


def default_x_grid(j_max=14):
    """Moment indices ``x = 2**j``, ``j = 0..j_max``."""
    return 2.0 ** np.arange(0, j_max + 1)


@dataclass
class ClassReport:
    """Outcome of a class diagnostic on a finite grid.

    ``observed_constant`` is the sup (Dhat) or inf (Dcheck, M) of the
    defining ratio over the whole grid; ``observed_constant_top`` is the
    same over the last ten grid points.
    """

    class_name: str
    grid: list
    observed_constant: float
    verdict: str
    note: str
    ratios: list = field(default_factory=list)
    observed_constant_top: float = float("nan")
    auxiliary: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "class_name": self.class_name,
            "grid": [float(g) for g in self.grid],
            "ratios": [float(v) for v in self.ratios],
            "observed_constant": float(self.observed_constant),
            "observed_constant_top": float(self.observed_constant_top),
            "auxiliary": _plain(self.auxiliary),
            "verdict": self.verdict,
            "note": self.note,
            "flags": list(self.flags),
        }


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def _check_grid(r_grid, need_top=True):
    r = np.asarray(r_grid, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if np.any(r < 0) or np.any(r >= 1):
        raise ValueError("probe radii must lie in [0, 1)")
    if np.any(np.diff(r) <= 0):
        raise ValueError("probe radii must be strictly increasing")
    if need_top and r[-1] < 0.999:
        raise ValueError("grid must reach r >= 0.999")
    return r


def _tail_pairs(w, u, shift):
    """Tails at ``u`` and ``u + shift``, cut where either underflows."""
    lo = w.tail_u(u)
    hi = w.tail_u(u + shift)
    ok = (lo > 0) & (hi > 0) & np.isfinite(lo) & np.isfinite(hi)
    n = u.size if np.all(ok) else int(np.argmin(ok))
    return lo[:n], hi[:n], n


def _truncation_flags(w, r, n):
    if n == r.size:
        return []
    # distinguish a real underflow from a vanishing profile
    try:
        w.tail_u(quad.u_of_r(r[n:n + 1]), check=True)
        w.tail(min(1 - (1 - r[n]) / 2, np.nextafter(1.0, 0.0)))
    except TailUnderflowError:
        return [f"tail underflow: grid truncated at r = {float(r[n - 1]) if n else float('nan')!r}"]
    except WeightError:
        return [f"tail vanishes: grid truncated at r = {float(r[n - 1]) if n else float('nan')!r}"]
    return [f"grid truncated at r = {float(r[n - 1]) if n else float('nan')!r}"]


def dhat_report(w, r_grid=None):
    """Tail doubling ``omega_hat(r) <= C omega_hat((1 + r) / 2)``.

    Parameters
    ----------
    w : RadialWeight
    r_grid : array_like, optional
        Increasing probe radii in ``[0, 1)`` reaching 0.999.

    Returns
    -------
    ClassReport
        ``observed_constant`` is the maximal ratio.  The grid is cut (with
        a flag) where the tail underflows.
    """
    r = _check_grid(default_r_grid() if r_grid is None else r_grid)
    u = quad.u_of_r(r)
    lo, hi, n = _tail_pairs(w, u, math.log(2.0))
    flags = _truncation_flags(w, r, n)
    ratios = lo / hi
    if n == 0:
        return ClassReport("Dhat", [], float("nan"), INCONCLUSIVE,
                           "tail vanishes on the whole grid", [], flags=flags)
    grow = monotone_growth(ratios)
    if grow:
        verdict = NON_MEMBER
        note = f"ratio grows monotonically to {ratios[-1]:.4g} at the top of the grid"
    elif n < TREND_POINTS:
        verdict = INCONCLUSIVE
        note = f"only {n} usable grid points"
    else:
        verdict = MEMBER
        note = f"ratio bounded by {ratios.max():.4g} with no upward trend"
    return ClassReport("Dhat", list(r[:n]), float(ratios.max()), verdict, note,
                       list(ratios), float(ratios[-_TOP:].max()), flags=flags)


def _reverse_verdict(ratios, what):
    """Verdict for a reverse-doubling ratio that must stay above 1."""
    excess = ratios - 1.0
    c = float(ratios.min())
    if ratios.size < TREND_POINTS:
        return INCONCLUSIVE, f"only {ratios.size} usable {what}"
    if np.any(excess <= 0):
        return NON_MEMBER, f"ratio reaches {c:.4g} <= 1"
    # excess -> 0 is non-membership; borderline weights lose it only like
    # 1/log(1/(1-r)), so compare against the whole grid, not a short window
    tail = excess[-TREND_POINTS:]
    if np.all(np.diff(tail) < 0) and excess[-1] * TREND_GROWTH < excess.max():
        return NON_MEMBER, f"ratio decays toward 1 ({ratios[-1]:.4g} at the top)"
    if c <= REVERSE_MARGIN:
        return NON_MEMBER, f"ratio drops to {c:.4g}, not bounded away from 1"
    return MEMBER, f"ratio stays above {c:.4g}"


def _combine_reverse(name, grid, per_k, flags):
    """Pick the best K: a member-consistent one with the largest constant."""
    best = None
    for k, (ratios, verdict, note) in per_k.items():
        key = (verdict == MEMBER, verdict != NON_MEMBER, float(ratios.min()) if ratios.size else -1.0)
        if best is None or key > best[0]:
            best = (key, k, ratios, verdict, note)
    _, k, ratios, verdict, note = best
    aux = {"K": k, "C_by_K": {str(kk): (float(v[0].min()) if v[0].size else float("nan"))
                              for kk, v in per_k.items()},
           "C_top_by_K": {str(kk): (float(v[0][-_TOP:].min()) if v[0].size else float("nan"))
                          for kk, v in per_k.items()}}
    n = ratios.size
    return ClassReport(name, list(grid[:n]), float(ratios.min()) if n else float("nan"),
                       verdict, f"K={k:g}: {note}", list(ratios),
                       float(ratios[-_TOP:].min()) if n else float("nan"), aux, flags)


def dcheck_report(w, r_grid=None, K_candidates=(2.0, 4.0, 8.0, 16.0)):
    """Reverse tail doubling ``omega_hat(r) >= C omega_hat(1 - (1 - r)/K)``, ``C > 1``.

    For every ``K`` the minimal ratio over the grid is recorded; the verdict
    uses the most favourable ``K``.
    """
    ks = [float(k) for k in K_candidates]
    if not ks or any(k <= 1 for k in ks):
        raise ValueError("all K must exceed 1")
    r = _check_grid(default_r_grid() if r_grid is None else r_grid)
    u = quad.u_of_r(r)
    per_k, flags, n_min = {}, [], r.size
    for k in ks:
        lo, hi, n = _tail_pairs(w, u, math.log(k))
        ratios = lo / hi
        verdict, note = _reverse_verdict(ratios, "grid points")
        per_k[k] = (ratios, verdict, note)
        n_min = min(n_min, n)
    flags = _truncation_flags(w, r, n_min)
    return _combine_reverse("Dcheck", r, per_k, flags)


def m_report(w, x_grid=None, K_candidates=(2.0, 4.0)):
    """Reverse moment doubling ``omega_x >= C omega_{Kx}``, ``C > 1``, ``x >= 1``."""
    x = np.asarray(default_x_grid() if x_grid is None else x_grid, dtype=float)
    if np.any(x < 1):
        raise ValueError("moment indices must be >= 1")
    ks = [float(k) for k in K_candidates]
    if not ks or any(k <= 1 for k in ks):
        raise ValueError("all K must exceed 1")
    per_k = {}
    for k in ks:
        lo = w.moments(x)
        hi = w.moments(k * x)
        ratios = lo / hi
        per_k[k] = (ratios,) + _reverse_verdict(ratios, "moment indices")
    return _combine_reverse("M", x, per_k, [])


def d_report(w, r_grid=None, K_candidates=(2.0, 4.0, 8.0, 16.0)):
    """``D = Dhat & Dcheck``: member-consistent when both parts are."""
    a = dhat_report(w, r_grid)
    b = dcheck_report(w, r_grid, K_candidates)
    if a.verdict == MEMBER and b.verdict == MEMBER:
        verdict = MEMBER
    elif NON_MEMBER in (a.verdict, b.verdict):
        verdict = NON_MEMBER
    else:
        verdict = INCONCLUSIVE
    return ClassReport("D", a.grid, a.observed_constant, verdict,
                       f"Dhat: {a.note}; Dcheck: {b.note}", a.ratios,
                       a.observed_constant_top,
                       {"Dhat": a.to_dict(), "Dcheck": b.to_dict()}, a.flags + b.flags)


# -- exponent scans -----------------------------------------------------------

def _scan_exponent(log_ratio, log_scale, candidates, what):
    """Least exponent whose pair constant stops growing as the sample extends.

    ``log_ratio[i, j]`` and ``log_scale[i, j] >= 0`` are given for sample
    points ``i < j``; the constant for exponent ``b`` over the first ``J``
    points is ``max_{i<j<=J} exp(log_ratio - b * log_scale)``.
    """
    m = log_ratio.shape[0]
    if m < TREND_POINTS + 1:
        raise InconclusiveError(f"need at least {TREND_POINTS + 1} sample points for {what}")
    iu = np.triu_indices(m, k=1)
    keep = log_scale[iu] > 0
    i, j = iu[0][keep], iu[1][keep]
    lr, ls = log_ratio[i, j], log_scale[i, j]
    cand = np.asarray(candidates, dtype=float)
    for b in cand:
        vals = lr - b * ls
        running = np.full(m, -np.inf)
        np.maximum.at(running, j, vals)
        running = np.maximum.accumulate(running)
        top = running[-1]
        earlier = running[-TREND_POINTS]
        if np.isfinite(top) and top - earlier <= math.log(STABLE_GROWTH):
            return float(b), float(math.exp(top))
    raise InconclusiveError(f"no stable {what} below {cand[-1]:g}")


def dhat_beta_estimate(w, r_grid=None, candidates=EXPONENT_GRID):
    """Least ``beta`` with ``omega_hat(r) <= C ((1-r)/(1-t))**beta omega_hat(t)``.

    Pairs ``r <= t`` are taken from ``r_grid``; pairs with ``r = t`` carry
    no information and are skipped.

    Returns
    -------
    beta, C : float
    """
    r = _check_grid(default_r_grid() if r_grid is None else r_grid, need_top=False)
    u = quad.u_of_r(r)
    t = w.tail_u(u)
    ok = t > 0
    r, u, t = r[ok], u[ok], t[ok]
    lt = np.log(t)
    log_ratio = lt[:, None] - lt[None, :]
    log_scale = u[None, :] - u[:, None]
    return _scan_exponent(log_ratio, log_scale, candidates, "beta")


def moment_eta_estimate(w, x_grid=None, candidates=EXPONENT_GRID):
    """Least ``eta`` with ``omega_x <= C (y/x)**eta omega_y`` for ``x <= y``.

    Returns
    -------
    eta, C : float
    """
    x = np.asarray(default_x_grid() if x_grid is None else x_grid, dtype=float)
    x = np.unique(x)
    if np.any(x <= 0):
        raise ValueError("moment indices must be positive")
    lm = np.log(w.moments(x))
    lx = np.log(x)
    log_ratio = lm[:, None] - lm[None, :]
    log_scale = lx[None, :] - lx[:, None]
    return _scan_exponent(log_ratio, log_scale, candidates, "eta")


# -- integral characterization --------------------------------------------------

def poisson_power_mean(s, rho):
    """Angular mean of ``|1 - rho e^{i theta}|**(-s)``, i.e. ``2F1(s/2, s/2; 1; rho**2)``."""
    rho = np.asarray(rho, dtype=float)
    return special.hyp2f1(0.5 * s, 0.5 * s, 1.0, rho * rho)


def dhat_integral_ratio(w, lam, zeta_grid=None, rtol=disc.DISC_RTOL):
    """``int_D omega / |1 - conj(zeta) z|**(lam + 1) dA`` against ``omega_hat(zeta)/(1-|zeta|)**lam``.

    Only ``|zeta|`` matters since the weight is radial.  Points where the
    quadrature fails are dropped and flagged.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    zs = np.asarray(np.concatenate(([0.0], 1.0 - 2.0 ** -np.arange(1, 11)))
                    if zeta_grid is None else zeta_grid, dtype=float)
    if np.any(zs < 0) or np.any(zs >= 1):
        raise ValueError("|zeta| must lie in [0, 1)")
    rep = RatioReport("dhat_integral", meta={"weight": w.name, "lambda": float(lam)})
    s = lam + 1.0
    for z in zs:
        try:
            lhs = disc.disc_integral(w, lambda r, z=z: poisson_power_mean(s, z * r), rtol)
            rhs = w.tail(z) / (1.0 - z) ** lam
        except (quad.QuadratureError, WeightError) as exc:
            rep.flags.append(f"|zeta| = {float(z)!r} dropped: {exc}")
            continue
        rep.add(float(z), lhs, rhs)
    return rep


def lambda_estimate(w, zeta_grid=None, candidates=EXPONENT_GRID, width=BAND_WIDTH):
    """Least ``lambda`` on the candidate grid for which the integral ratio is two-sided."""
    for lam in candidates:
        rep = dhat_integral_ratio(w, lam, zeta_grid)
        if rep.two_sided(width):
            return float(lam), rep
    raise InconclusiveError(f"no lambda below {candidates[-1]:g} passes the band test")


def n0_from_lambda(lam):
    """Smallest admissible integer ``n0 > lambda`` used by the kernel expansion."""
    return int(math.ceil(lam)) + 1


# -- Hardy-Littlewood type sums ------------------------------------------------

def _hl_log_terms(w, p, alpha, s, n_prev=None):
    """Log-terms of the series, grown until the geometric tail bound is small."""
    n = 1024
    log_s = math.log(s)
    while True:
        k = np.arange(n, dtype=float)
        m = w.moments(2.0 * k + 1.0)
        lt = (alpha - 2.0) * np.log1p(k) - p * np.log(m) + k * log_s
        top = lt.max()
        partial = np.exp(lt - top).sum()
        # ratio of consecutive terms near the end bounds the tail geometrically
        q = float(np.exp(np.max(np.diff(lt[-64:]))))
        if q < 1.0:
            tail = math.exp(lt[-1] - top) * q / (1.0 - q)
            if tail < HL_ABS_TOL * partial:
                return top + math.log(partial), n
        if n >= HL_MAX_TERMS:
            raise quad.QuadratureError(
                f"series not truncated by n = {HL_MAX_TERMS}; use a smaller s_max")
        n = min(2 * n, HL_MAX_TERMS)


def hl_sum_ratio(w, p, alpha, s_grid=None):
    """Sum ``sum (n+1)**(alpha-2) s**n / omega_{2n+1}**p`` against its integral form.

    The right-hand side is ``int_0^s dt / (omega_hat(t)**p (1-t)**alpha) + 1``.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    ss = np.asarray((0.5, 0.9, 0.95, 0.99, 0.995, 0.999, 0.9995, 0.9999)
                    if s_grid is None else s_grid, dtype=float)
    if np.any(ss <= 0) or np.any(ss >= 1):
        raise ValueError("s must lie in (0, 1)")
    rep = RatioReport("hl_sum", meta={"weight": w.name, "p": float(p), "alpha": float(alpha)})

    def integrand(u):
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp((alpha - 1.0) * u - p * np.log(w.tail_u(u)))

    for s in ss:
        log_lhs, terms = _hl_log_terms(w, p, alpha, float(s))
        u_s = float(quad.u_of_r(s))
        rhs = quad.integrate_u(integrand, 0.0, u_s, rtol=1e-10) + 1.0
        rep.add(float(s), math.exp(log_lhs), rhs, terms=int(terms))
    return rep


# -- room lemma ------------------------------------------------------------------

def room_report(w, nu, gamma, r_grid=None):
    """Hat-product and tail-power comparisons for a pair of weights.

    Returns
    -------
    (RatioReport, RatioReport)
        ``omega_hat nu_hat`` against the tail of ``omega nu_hat`` (ratio at
        least 1), and ``int_r^1 omega / nu_hat**gamma`` against
        ``omega_hat / nu_hat**gamma``.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    r = _check_grid(default_r_grid() if r_grid is None else r_grid, need_top=False)
    prod = derive_weight(w, tail_product(nu))
    chochi = derive_weight(w, tail_product(nu, -float(gamma)))
    hat = RatioReport("hat_product", meta={"omega": w.name, "nu": nu.name})
    tp = RatioReport("tail_power", meta={"omega": w.name, "nu": nu.name, "gamma": float(gamma)})
    for x in r:
        try:
            wt, nt = w.tail(x), nu.tail(x)
            hat.add(float(x), wt * nt, prod.tail(x))
            tp.add(float(x), chochi.tail(x), wt / nt ** gamma)
        except WeightError as exc:
            hat.flags.append(f"r = {float(x)!r} dropped: {exc}")
            tp.flags.append(f"r = {float(x)!r} dropped: {exc}")
    return hat, tp


__all__ = [
    "ClassReport", "InconclusiveError", "MEMBER", "NON_MEMBER", "INCONCLUSIVE",
    "default_r_grid", "default_x_grid", "dhat_report", "dcheck_report", "m_report",
    "d_report", "dhat_beta_estimate", "moment_eta_estimate", "dhat_integral_ratio",
    "poisson_power_mean", "lambda_estimate", "n0_from_lambda", "hl_sum_ratio", "room_report",
]
