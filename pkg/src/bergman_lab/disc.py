"""Tensor quadrature on the unit disc for radial weights.

``int_D F(z) omega(z) dA(z)`` with the normalized area measure is written
as ``int_0^1 2 r omega(r) M_F(r) dr`` where ``M_F(r)`` is the angular mean
of ``F`` on the circle of radius ``r``.  The radial rule lives in the
variable ``u = -log(1 - r)``; everything beyond the last double below 1 is
lumped into one node.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import quadrature as quad
from .quadrature import QuadratureError

#: Default relative tolerance of disc integrals.
DISC_RTOL = 1e-8

_U_LUMP = 36.0
_ORDER = 16
_MAX_LEVEL = 4


def thread_count():
    """Worker threads from ``BERGMAN_LAB_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("BERGMAN_LAB_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(func, nodes, chunk=64):
    """Apply a vectorized ``func`` to chunks of ``nodes``; order is preserved.

    Chunks are concatenated in index order, so results do not depend on the
    number of threads.
    """
    nodes = np.asarray(nodes)
    parts = [nodes[i:i + chunk] for i in range(0, nodes.size, chunk)]
    threads = thread_count()
    if threads == 1 or len(parts) == 1:
        out = [func(x) for x in parts]
    else:
        with ThreadPoolExecutor(threads) as pool:
            out = list(pool.map(func, parts))
    return np.concatenate(out) if out else np.empty(0)


def disc_rule(w, level=0, breaks=()):
    """Radial nodes ``r`` and weights ``W`` with ``sum W M(r) ~ int_D F omega dA``.

    ``breaks`` adds panel edges (in ``u``) where the integrand, not the
    weight, has a radial jump.
    """
    near = 2.0 ** -np.arange(10, 0, -1)
    edges = np.concatenate(([0.0], near, np.arange(1.0, _U_LUMP + 0.5, 1.0)))
    bp = [b for b in (*w.breakpoints, *breaks) if 0 < b < _U_LUMP]
    if bp:
        edges = np.unique(np.concatenate((edges, bp)))
    a, b = edges[:-1], edges[1:]
    if level:
        k = 2 ** level
        t = np.linspace(0.0, 1.0, k + 1)
        a, b = ((a[:, None] + (b - a)[:, None] * t[:-1]).ravel(),
                (a[:, None] + (b - a)[:, None] * t[1:]).ravel())
    nodes, gw = quad.panel_nodes(a, b, _ORDER)
    u = nodes.ravel()
    r = quad.r_of_u(u)
    W = gw.ravel() * w.density_u(u) * np.exp(-u) * 2.0 * r
    lump = 2.0 * float(w.tail_u(_U_LUMP)[0])
    r = np.append(r, quad.r_of_u(_U_LUMP))
    W = np.append(W, lump)
    keep = W != 0
    return r[keep], W[keep]


def disc_integral(w, radial_mean, rtol=DISC_RTOL, level=0, return_level=False):
    """Integrate against ``omega dA`` given the angular mean ``radial_mean(r)``.

    ``radial_mean`` may also return a pair ``(means, abs_means)`` where the
    second entry holds angular means of ``|F|``; the tolerance is then
    relative to ``int |F| omega dA`` as well, which matters when the
    integral cancels to (nearly) zero.  The radial rule is refined until two
    successive levels agree.
    """
    prev = None
    for lev in range(level, level + _MAX_LEVEL):
        r, W = disc_rule(w, lev)
        out = radial_mean(r)
        if isinstance(out, tuple):
            vals, absvals = out
            floor = np.sum(W * absvals)
        else:
            vals, floor = out, 0.0
        value = np.sum(W * vals)
        if prev is not None and abs(value - prev) <= rtol * max(abs(value), floor, 1e-300):
            return (value, lev) if return_level else value
        prev = value
    raise QuadratureError(f"disc integral not converged to rtol={rtol:g}",
                          achieved=abs(value - prev) / max(abs(value), 1e-300))


def theta_count(rho, factor=40.0, minimum=64, maximum=2 ** 20):
    """Angular node count for a circle where features have width ``1 - rho``."""
    n = factor / max(1.0 - rho, 1e-12)
    n = int(2 ** np.ceil(np.log2(max(n, minimum))))
    return min(n, maximum)


def angular_mean(func, r, n_theta, offset=0.0):
    """Trapezoid mean of ``func(z)`` over the circle ``|z| = r``."""
    theta = offset + 2.0 * np.pi * np.arange(n_theta) / n_theta
    return np.mean(func(r * np.exp(1j * theta)))


def power_series_on_circle(coeffs, rho, n_theta):
    """Values of ``sum_n c_n (rho e^{i theta_j})**n`` at ``theta_j = 2 pi j / n``.

    Coefficients beyond ``n_theta`` are folded onto their aliases, which is
    exact at the nodes.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = np.arange(c.size)
    with np.errstate(under="ignore"):
        a = c * rho ** n
    pad = (-a.size) % n_theta
    if pad:
        a = np.concatenate((a, np.zeros(pad, dtype=complex)))
    folded = a.reshape(-1, n_theta).sum(axis=0)
    return np.fft.ifft(folded) * n_theta


def suffix_max(coeffs):
    """``S_n = max_{k >= n} |c_k|`` (for fast truncation of long series)."""
    a = np.abs(np.asarray(coeffs, dtype=complex))
    return np.maximum.accumulate(a[::-1])[::-1]


def series_eval(coeffs, z, chunk=2 ** 20, smax=None):
    """``sum_n c_n z**n`` for arrays ``z`` (vectorized, for long coefficient lists).

    The series is cut where ``S_n max|z|**n (len - n)`` drops below ``1e-17``
    of the largest term, with ``S_n`` the suffix maxima of ``|c|`` (pass
    ``smax`` to reuse them).
    """
    c = np.asarray(coeffs, dtype=complex)
    z = np.asarray(z, dtype=complex)
    if c.size <= 32:
        return np.polynomial.polynomial.polyval(z, c)
    rho = float(np.max(np.abs(z))) if z.size else 0.0
    if smax is None:
        smax = suffix_max(c)
    if rho == 0 or smax[0] == 0:
        return np.full(z.shape, c[0])
    # log(S_n) + n log(rho) + log(len - n) is nonincreasing, so bisect
    lr = math.log(rho) if rho < 1 else 0.0
    size = c.size
    with np.errstate(divide="ignore"):
        thresh = math.log(smax[0]) + math.log(1e-17)

        def bound(n):
            return math.log(smax[n]) + n * lr + math.log(size - n) if smax[n] > 0 else -math.inf

        if rho >= 1 or bound(size - 1) > thresh:
            cut = size
        else:
            lo, hi = 0, size - 1
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if bound(mid) > thresh:
                    lo = mid
                else:
                    hi = mid
            cut = hi
    c = c[:max(cut, 1)]
    n = np.arange(c.size)
    flat = z.ravel()
    out = np.empty(flat.size, dtype=complex)
    step = max(1, chunk // max(c.size, 1))
    with np.errstate(under="ignore"):
        for i in range(0, flat.size, step):
            zz = flat[i:i + step]
            out[i:i + step] = (zz[:, None] ** n[None, :]) @ c
    return out.reshape(z.shape)


def polyval(z, coeffs):
    """Argument order of ``numpy.polynomial.polynomial.polyval``."""
    return series_eval(coeffs, z)
