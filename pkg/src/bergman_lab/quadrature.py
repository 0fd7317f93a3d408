"""Composite Gauss-Legendre rules on [0, 1) clustered toward r = 1.

Radial integrals are computed in the logarithmic distance variable
``u = -log(1 - r)``, so that ``dr = exp(-u) du`` and the boundary r = 1 is
pushed to u = infinity.  Integrands that pile up mass near the boundary
(``r**x`` for large ``x``, slowly decaying tails) become smooth, slowly
varying functions of ``u`` on panels of bounded width, followed by
geometrically growing far panels.
"""

from functools import lru_cache

import numpy as np

#: Gauss-Legendre order on every panel.
GL_ORDER = 20

#: Width of the uniform panels in u.
PANEL_WIDTH = 0.5

#: End of the uniform part of the panel layout (r = 1 - 4e-18).
UNIFORM_END = 40.0

#: Largest u reachable from a double r < 1.
U_FLOAT_MAX = -np.log1p(-np.nextafter(1.0, 0.0))

MAX_FAR_PANELS = 1000
MAX_BISECTIONS = 12


class QuadratureError(ArithmeticError):
    """Raised when a quadrature does not reach its tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DivergentIntegralError(QuadratureError):
    """Raised when panel contributions do not decay (integrand not integrable)."""


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights of the ``n``-point rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(a, b, n=GL_ORDER):
    """Gauss-Legendre nodes and weights on each panel ``[a_i, b_i]``.

    ``a`` and ``b`` broadcast; the result has a trailing axis of length n.
    """
    x, w = gauss_legendre(n)
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def u_of_r(r):
    return -np.log1p(-np.asarray(r, dtype=float))


def r_of_u(u):
    return -np.expm1(-np.asarray(u, dtype=float))


def log_r(u):
    """``log(r)`` accurate both for r near 0 and for r near 1."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = u <= 0.7
    out[small] = np.log(-np.expm1(-u[small]))
    out[~small] = np.log1p(-np.exp(-u[~small]))
    return out


def one_minus_r_pow(u, y):
    """``1 - r**y`` for r = 1 - exp(-u), without cancellation."""
    return -np.expm1(y * log_r(u))


def base_edges(breakpoints=()):
    """Panel edges on [0, UNIFORM_END]: dyadic toward 0, uniform after.

    Extra ``breakpoints`` (in u) are inserted so that kinks of piecewise
    profiles fall on panel boundaries.
    """
    near_zero = PANEL_WIDTH * 2.0 ** -np.arange(30, 0, -1)
    uniform = np.arange(PANEL_WIDTH, UNIFORM_END + 0.5 * PANEL_WIDTH, PANEL_WIDTH)
    edges = np.concatenate(([0.0], near_zero, uniform))
    bp = [b for b in breakpoints if 0.0 < b < UNIFORM_END]
    if bp:
        edges = np.unique(np.concatenate((edges, bp)))
    return edges


def _gl(func, a, b, n=GL_ORDER):
    nodes, weights = panel_nodes(a, b, n)
    return float(np.sum(func(nodes.ravel()).reshape(nodes.shape) * weights))


def _resolve_panel(func, a, b, rtol, depth, out):
    whole = _gl(func, a, b)
    m = 0.5 * (a + b)
    left, right = _gl(func, a, m), _gl(func, m, b)
    halves = left + right
    scale = abs(halves)
    # integrands are exp(.) of an O(u) exponent, whose roundoff is ~ u * eps
    tol = max(rtol, 16 * np.finfo(float).eps * abs(b))
    if scale < 1e-300 or abs(whole - halves) <= tol * scale or depth >= MAX_BISECTIONS:
        out.append((a, b, halves))
        return
    _resolve_panel(func, a, m, rtol, depth + 1, out)
    _resolve_panel(func, m, b, rtol, depth + 1, out)


def resolve_panels(func, edges, rtol=1e-12):
    """Bisect the panels given by ``edges`` until each is resolved.

    Every panel is accurate relative to its *own* value, which keeps
    cumulative tail sums accurate even where the integrand is tiny.
    Returns a list of ``(a, b, value)``.
    """
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        _resolve_panel(func, float(a), float(b), rtol, 0, out)
    return out


def far_panels(func, start=UNIFORM_END, rtol=1e-12, significance_from=U_FLOAT_MAX,
               remainder_tol=1e-13):
    """Doubling panels ``[U, 2U]`` beyond ``start`` until the rest is negligible.

    The remaining integral past the last panel is estimated from the ratio
    of successive panel values (exact for power-law decay of the integrand
    in u).  Stops when three panels in a row vanish, or when the estimated
    remainder is below ``remainder_tol`` times the integral from
    ``significance_from`` on.

    Returns ``(panels, remainder)``.

    Raises
    ------
    DivergentIntegralError
        If panel values stop decaying.
    """
    panels = []
    zeros = 0
    growing = 0
    significant = 0.0
    a = float(start)
    prev = None
    for _ in range(MAX_FAR_PANELS):
        b = 2.0 * a
        chunk = resolve_panels(func, np.array([a, b]), rtol)
        panels.extend(chunk)
        value = sum(v for _, _, v in chunk)
        if a >= significance_from:
            significant += value
        else:
            significant += sum(v for lo, _, v in chunk if lo >= significance_from)
        if value == 0.0:
            zeros += 1
            if zeros >= 3:
                return panels, 0.0
            prev, a = value, b
            continue
        zeros = 0
        if prev:
            rho = value / prev
            growing = growing + 1 if rho >= 0.999 else 0
            if growing >= 3:
                raise DivergentIntegralError(
                    "panel contributions do not decay; integrand is not integrable",
                    achieved=value)
            if rho < 0.999:
                remainder = value * rho / (1.0 - rho)
                if remainder <= remainder_tol * significant:
                    return panels, remainder
        prev, a = value, b
    raise DivergentIntegralError(
        "far-field panels did not converge", achieved=prev)


def integrate_u(func, u_from=0.0, u_to=np.inf, rtol=1e-12, breakpoints=()):
    """Integrate ``func(u)`` over ``[u_from, u_to]``; ``u_to`` may be infinite."""
    edges = base_edges(breakpoints)
    if np.isfinite(u_to):
        edges = edges[(edges > u_from) & (edges < u_to)]
        edges = np.concatenate(([u_from], edges, [u_to]))
        if u_to > UNIFORM_END:
            extra = UNIFORM_END * 2.0 ** np.arange(1, 1100)
            extra = extra[extra < u_to]
            edges = np.unique(np.concatenate((edges, extra)))
        return sum(v for _, _, v in resolve_panels(func, edges, rtol))
    edges = edges[edges > u_from]
    edges = np.concatenate(([u_from], edges))
    total = sum(v for _, _, v in resolve_panels(func, edges, rtol))
    far, remainder = far_panels(func, start=max(UNIFORM_END, u_from), rtol=rtol)
    return total + sum(v for _, _, v in far) + remainder
