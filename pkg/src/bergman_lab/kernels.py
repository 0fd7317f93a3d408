"""Reproducing kernels of weighted Bergman spaces with radial weights.

With the normalized area measure ``int |z|**(2n) omega dA = 2 omega_{2n+1}``,
so the kernel of ``A^2_omega`` is

    B_z(zeta) = sum_n (conj(z) zeta)**n / (2 omega_{2n+1}).

Besides plain evaluation the module builds the exact symbolic expansion of
``2 (1 - w)**N B`` (``w = conj(z) zeta``) into a head polynomial plus finitely
many series whose coefficients are ratios of generalized moments, and it
compares ``||(1 - conj(z) .)**N B_z||^p_{A^p_nu}`` with its one-dimensional
majorant.
"""

from dataclasses import dataclass
import json
import math

import numpy as np
from scipy import special

from . import disc
from . import quadrature as quad
from .reports import RatioReport
from .weights import canonical_factors

#: Largest supported order of the modified-kernel expansion.
N_MAX = 6

#: Default absolute/relative tolerance of kernel sums.
KERNEL_TOL = 1e-12

MAX_TERMS = 1_000_000

_FIRST_CHUNK = 256


class KernelTruncationError(ArithmeticError):
    """The kernel series cannot be truncated within the term budget."""


class UnsupportedOrderError(ValueError):
    """Expansion order outside ``1..N_MAX``."""


# -- kernel series --------------------------------------------------------------

@dataclass(frozen=True)
class KernelSeries:
    """Coefficients ``c_n = 1 / (2 omega_{2n+1})``, ``n = 0..M``."""

    coefficients: np.ndarray
    M: int
    weight: str

    def __call__(self, q):
        """Truncated sum at ``q = conj(z) zeta`` (vectorized)."""
        return disc.polyval(np.asarray(q), self.coefficients)


def kernel_coefficients(w, M):
    """First ``M + 1`` kernel coefficients of ``w``.

    Examples
    --------
    >>> from bergman_lab.weights import standard
    >>> kernel_coefficients(standard(0), 3).coefficients
    array([1., 2., 3., 4.])
    """
    M = int(M)
    if M < 1:
        raise ValueError("M must be >= 1")
    n = np.arange(M + 1, dtype=float)
    c = 0.5 / w.moments(2.0 * n + 1.0)
    c.setflags(write=False)
    return KernelSeries(c, M, w.name)


def _tail_bound(c, rho):
    """Bound for ``sum_{n > M} c_n rho**n`` from the last coefficients.

    Growth beyond ``M`` is extrapolated from the local log-slope
    ``eta = dlog c / dlog n`` (doubled for safety), so that
    ``c_{M+j} <= c_M exp(eta j / M)``.
    """
    M = c.size - 1
    half = max(M // 2, 1)
    eta = max(math.log(c[M] / c[half]) / math.log(M / half), 0.0)
    q = rho * math.exp((2.0 * eta + 1.0) / M)
    if q >= 1.0:
        return math.inf
    with np.errstate(under="ignore"):
        return float(c[M] * rho ** M * q / (1.0 - q))


def kernel_terms(w, rho, tol=KERNEL_TOL):
    """Kernel coefficients long enough to sum the series at ``|q| <= rho``.

    The truncation is accepted once the tail bound is below
    ``tol * max(1, partial sum)`` (the partial sum at ``rho`` bounds every
    ``|B|`` on that disc).

    Raises
    ------
    KernelTruncationError
        If more than ``MAX_TERMS`` coefficients would be needed.
    """
    rho = float(rho)
    if not 0 <= rho < 1:
        raise ValueError("|conj(z) zeta| must be < 1")
    M = _FIRST_CHUNK
    while True:
        c = kernel_coefficients(w, M).coefficients
        if rho == 0:
            return c[:1]
        with np.errstate(under="ignore"):
            total = float(np.sum(c * rho ** np.arange(c.size)))
        bound = _tail_bound(c, rho)
        if bound < tol * max(1.0, total):
            # drop trailing coefficients that are below tolerance
            with np.errstate(under="ignore"):
                terms = c * rho ** np.arange(c.size)
            big = np.nonzero(terms > tol * 1e-3 * max(1.0, total))[0]
            keep = max(int(big[-1]) + 2 if big.size else 2, 2)
            return c[:min(keep, c.size)]
        if M >= MAX_TERMS:
            raise KernelTruncationError(
                f"kernel series at |q| = {rho!r} not truncated by n = {MAX_TERMS}; "
                "reduce |z| or |zeta|, or relax tol")
        M = min(2 * M, MAX_TERMS)


def kernel_eval(w, z, zeta, tol=KERNEL_TOL, return_M=False):
    """``B^omega_z(zeta)`` to tolerance ``tol``.

    Parameters
    ----------
    w : RadialWeight
    z, zeta : complex
        Points of the disc with ``|conj(z) zeta| < 1``.
    tol : float
        Tail bound target, relative to ``max(1, sum c_n |q|**n)``.  For fast
        decaying weights the majorant can exceed ``|B|`` by many orders of
        magnitude near the boundary, and so does the rounding error.
    return_M : bool
        Also return the number of terms used minus one.
    """
    q = np.conj(complex(z)) * complex(zeta)
    c = kernel_terms(w, abs(q), tol)
    value = complex(disc.polyval(q, c))
    return (value, c.size - 1) if return_M else value


def kernel_sum(w, q, tol=KERNEL_TOL):
    """Vectorized kernel values at ``q = conj(z) zeta`` (array)."""
    q = np.asarray(q, dtype=complex)
    c = kernel_terms(w, float(np.max(np.abs(q))) if q.size else 0.0, tol)
    return disc.polyval(q, c)


def modified_coefficients(c, N):
    """Taylor coefficients of ``(1 - q)**N sum c_n q**n`` (same truncation plus N)."""
    j = np.arange(N + 1)
    binom = special.comb(N, j, exact=False) * (-1.0) ** j
    return np.convolve(c, binom)


# -- symbolic expansion -----------------------------------------------------------

@dataclass(frozen=True)
class Slot:
    """Numerator factor ``(omega_F)_{2k+1-2 shift}`` of a series coefficient."""

    shift: int
    factors: tuple

    def to_json(self):
        return {"shift": self.shift, "factors": [list(f) for f in self.factors]}


@dataclass(frozen=True)
class SeriesTerm:
    """``sign * sum_{k >= N} coeff(k) w**k`` with

    ``coeff(k) = prod_slots (omega_F)_{2k+1-2s} / prod_{m=0}^{depth} omega_{2k+1-2m}``.
    """

    sign: int
    depth: int
    slots: tuple

    @property
    def structure(self):
        return (self.depth, self.slots)

    def to_json(self):
        return {"sign": self.sign, "depth": self.depth,
                "slots": [s.to_json() for s in self.slots]}


@dataclass(frozen=True)
class HeadAtom:
    """Coefficient of a term structure frozen at index ``k`` (a weight-free tag)."""

    depth: int
    slots: tuple
    k: int

    def tag(self):
        num = "*".join(
            "(w" + "".join(f"_({n},{y})" for n, y in s.factors) + f")_{2 * self.k + 1 - 2 * s.shift}"
            for s in self.slots)
        den = "*".join(f"w_{2 * self.k + 1 - 2 * m}" for m in range(self.depth + 1))
        return f"{num or '1'}/({den})"

    def to_json(self):
        return {"k": self.k, "depth": self.depth,
                "slots": [s.to_json() for s in self.slots], "tag": self.tag()}


def _shift(slot, by=1, extra=None):
    factors = slot.factors
    if extra is not None:
        factors = canonical_factors(factors + (extra,))
    return Slot(slot.shift + by, factors)


def _step(terms):
    """Multiply every series by ``(1 - w)`` and split into new series."""
    out = []
    for t in terms:
        for j in range(len(t.slots)):
            slots = tuple(
                _shift(s) if i < j else (_shift(s, extra=(1, 2)) if i == j else s)
                for i, s in enumerate(t.slots))
            out.append(SeriesTerm(-t.sign, t.depth, slots))
        new = tuple(_shift(s) for s in t.slots) + (
            Slot(t.depth + 1, ((1, 2 * t.depth + 2),)),)
        out.append(SeriesTerm(t.sign, t.depth + 1, new))
    return out


@dataclass(frozen=True)
class KernelExpansion:
    """``2 (1 - w)**N B = head(w) + sum_j sign_j sum_{k >= N} coeff_j(k) w**k``.

    ``head`` is a tuple of ``(power, integer coefficient, HeadAtom)``.
    """

    order: int
    head: tuple
    terms: tuple

    @property
    def M(self):
        """Number of series terms."""
        return len(self.terms)

    @property
    def L(self):
        """Largest ``y`` among the ``(n, y)`` factors."""
        ys = [y for t in self.terms for s in t.slots for _, y in s.factors]
        return max(ys) if ys else 0

    def check_constraints(self):
        """Raise ``AssertionError`` unless depth, factor-count and y bounds hold."""
        N = self.order
        for t in self.terms:
            assert t.depth <= N + 1, "depth bound"
            assert sum(n for s in t.slots for n, _ in s.factors) == N, "factor count"
            assert all(1 <= s.shift <= N for s in t.slots), "shift range"
            assert t.sign in (1, -1)
        assert self.L <= 2 * N
        assert all(0 <= p < N for p, _, _ in self.head)
        return True

    def to_json(self):
        obj = {
            "order": self.order,
            "M": self.M,
            "L": self.L,
            "head": [[p, {"coeff": c, **a.to_json()}] for p, c, a in self.head],
            "terms": [t.to_json() for t in self.terms],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)

        def slots(lst):
            return tuple(Slot(int(s["shift"]), tuple((int(n), int(y)) for n, y in s["factors"]))
                         for s in lst)

        head = tuple((int(p), int(h["coeff"]),
                      HeadAtom(int(h["depth"]), slots(h["slots"]), int(h["k"])))
                     for p, h in obj["head"])
        terms = tuple(SeriesTerm(int(t["sign"]), int(t["depth"]), slots(t["slots"]))
                      for t in obj["terms"])
        return cls(int(obj["order"]), head, terms)


def expand_modified(N):
    """Symbolic expansion of ``2 (1 - conj(z) zeta)**N B_z(zeta)``.

    Starting from ``2B = sum_{k >= 0} w**k / omega_{2k+1}`` each factor
    ``1 - w`` moves the first coefficient into the head, and splits every
    series by the telescoping identity for the difference of consecutive
    coefficients: one term per numerator slot (sign flipped, one extra
    ``(1, 2)`` factor) and one term with an extra ``(1, 2 depth + 2)`` slot
    and one more denominator moment.

    The result is weight independent; evaluate it with
    :func:`expansion_eval`.

    Raises
    ------
    UnsupportedOrderError
        Unless ``1 <= N <= N_MAX``.
    """
    N = int(N)
    if not 1 <= N <= N_MAX:
        raise UnsupportedOrderError(f"expansion order must be in 1..{N_MAX}, got {N}")
    terms = [SeriesTerm(1, 0, ())]
    head = {}
    for n in range(N):
        new_head = {}
        for (p, atom), c in head.items():
            new_head[(p, atom)] = new_head.get((p, atom), 0) + c
            new_head[(p + 1, atom)] = new_head.get((p + 1, atom), 0) - c
        for t in terms:
            key = (n, HeadAtom(t.depth, t.slots, n))
            new_head[key] = new_head.get(key, 0) + t.sign
        head = {k: v for k, v in new_head.items() if v}
        terms = _step(terms)
    head_t = tuple(sorted(((p, c, a) for (p, a), c in head.items()),
                          key=lambda e: (e[0], e[2].tag())))
    e = KernelExpansion(N, head_t, tuple(terms))
    e.check_constraints()
    return e


def _structure_values(w, depth, slots, x0):
    """``coeff`` at exponent base ``x0 = 2k + 1`` (vectorized over k)."""
    val = np.ones_like(x0)
    for s in slots:
        val = val * w.moments(x0 - 2 * s.shift, s.factors)
    for m in range(depth + 1):
        val = val / w.moments(x0 - 2 * m)
    return val


def head_coefficients(e, w):
    """Numeric coefficients of the head polynomial (length ``order``)."""
    out = np.zeros(e.order)
    for p, c, a in e.head:
        out[p] += c * _structure_values(w, a.depth, a.slots, np.array([2.0 * a.k + 1.0]))[0]
    return out


def term_coefficients(e, w, ks):
    """Signed coefficients ``sign_j coeff_j(k)``, shape ``(M, len(ks))``."""
    ks = np.asarray(ks, dtype=float)
    if np.any(ks < e.order):
        raise ValueError("series coefficients are defined for k >= N")
    x0 = 2.0 * ks + 1.0
    return np.array([t.sign * _structure_values(w, t.depth, t.slots, x0) for t in e.terms])


def expansion_eval(e, w, z, zeta, K_max=None, tol=KERNEL_TOL):
    """Numeric value of an expansion at ``w = conj(z) zeta``.

    ``K_max`` defaults to the truncation used by :func:`kernel_eval`.
    """
    q = np.conj(complex(z)) * complex(zeta)
    if abs(q) >= 1:
        raise ValueError("|conj(z) zeta| must be < 1")
    N = e.order
    if K_max is None:
        K_max = max(kernel_terms(w, abs(q), tol).size - 1 + N, N)
    if K_max < N:
        raise ValueError("K_max must be >= N")
    head = complex(disc.polyval(q, head_coefficients(e, w)))
    if q == 0:
        return head
    ks = np.arange(N, K_max + 1)
    total = term_coefficients(e, w, ks).sum(axis=0)
    series = complex(q ** N * disc.polyval(q, total))
    return head + series


def expansion_coeff_bound(e, w, k_range=None):
    """Normalized coefficients ``|coeff_j(k)| omega_{2k+1} k**N``.

    Rows hold the largest normalized value over ``j`` (LHS is
    ``max_j |coeff_j(k)|``, RHS ``1 / (omega_{2k+1} k**N)``); ``meta``
    keeps the per-term suprema.
    """
    N = e.order
    if k_range is None:
        k_range = np.unique(np.round(np.logspace(np.log10(N), 4, 40)).astype(int))
    ks = np.asarray(k_range, dtype=int)
    if ks.min() < N or ks.max() > 10 ** 4:
        raise ValueError("k_range must lie in [N, 1e4]")
    coeffs = np.abs(term_coefficients(e, w, ks))
    rhs = 1.0 / (w.moments(2.0 * ks + 1.0) * ks.astype(float) ** N)
    norm = coeffs / rhs
    rep = RatioReport("expansion_coeff_bound",
                      meta={"weight": w.name, "order": N, "terms": e.M,
                            "per_term_sup": [float(v) for v in norm.max(axis=1)]})
    j = norm.argmax(axis=0)
    for i, k in enumerate(ks):
        rep.add(int(k), coeffs[j[i], i], rhs[i], term=int(j[i]))
    return rep


# -- A^p_nu norms -------------------------------------------------------------------

def _circle_power_means(d, radii, p):
    """Angular means of ``|sum d_n (rho e^{it})**n|**p`` for each ``rho``."""
    out = np.empty(radii.size)
    for i, rho in enumerate(radii):
        n = disc.theta_count(rho, factor=32.0)
        vals = disc.power_series_on_circle(d, rho, n)
        out[i] = np.mean(np.abs(vals) ** p)
    return out


def modified_kernel_norm(w, nu, z, p=2.0, N=1, tol=1e-10):
    """``int_D |(1 - conj(z) zeta)**N B_z(zeta)|**p nu(zeta) dA(zeta)``.

    Radial nodes come from the boundary-clustered rule of ``nu``; on each
    circle the modified kernel is a power series in ``|z| r e^{it}`` and is
    sampled by FFT.
    """
    z = complex(z)
    if abs(z) >= 1:
        raise ValueError("|z| must be < 1")
    if p <= 0 or N < 0:
        raise ValueError("need p > 0 and N >= 0")
    a = abs(z)
    c = kernel_terms(w, a, tol)
    d = modified_coefficients(c, int(N))
    if a == 0:
        return float(abs(d[0]) ** p * 2.0 * nu.moment(1.0))

    def radial(r):
        return disc.parallel_map(lambda rr: _circle_power_means(d, a * rr, p), r)

    return float(disc.disc_integral(nu, radial, rtol=max(tol, 1e-9)))


def kernel_norm_bound(w, nu, z, p=2.0, N=1):
    """``int_0^{|z|} nu_hat(t) / (omega_hat(t)**p (1-t)**(p(1-N))) dt + 1``."""
    a = abs(complex(z))
    if a >= 1:
        raise ValueError("|z| must be < 1")
    if a == 0:
        return 1.0

    def integrand(u):
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp((p * (1 - N) - 1.0) * u + np.log(nu.tail_u(u)) - p * np.log(w.tail_u(u)))

    return float(quad.integrate_u(integrand, 0.0, float(quad.u_of_r(a)), rtol=1e-10)) + 1.0


def kernel_estimate_report(w, nu, p=2.0, N=1, z_grid=None, exploratory=False):
    """Ratios ``modified_kernel_norm / kernel_norm_bound`` over ``|z|`` values.

    ``p < 2`` lies outside the range where the estimate is established and
    is only accepted with ``exploratory=True`` (the report is flagged).
    """
    flags = []
    if p < 2:
        if not exploratory:
            raise ValueError("p < 2 is outside the supported range; pass exploratory=True")
        flags.append("unsupported regime: p < 2 (exploratory)")
    zs = np.asarray((0.0, 0.5, 0.75, 0.9, 0.95, 0.99, 0.995, 0.999)
                    if z_grid is None else z_grid, dtype=float)
    rep = RatioReport("kernel_estimate",
                      meta={"omega": w.name, "nu": nu.name, "p": float(p), "N": int(N)},
                      flags=flags)
    for a in zs:
        rep.add(float(a), modified_kernel_norm(w, nu, a, p, N), kernel_norm_bound(w, nu, a, p, N))
    return rep


__all__ = [
    "N_MAX", "KernelSeries", "KernelExpansion", "SeriesTerm", "Slot", "HeadAtom",
    "KernelTruncationError", "UnsupportedOrderError", "kernel_coefficients",
    "kernel_terms", "kernel_eval", "kernel_sum", "modified_coefficients",
    "expand_modified", "head_coefficients", "term_coefficients", "expansion_eval",
    "expansion_coeff_bound", "modified_kernel_norm", "kernel_norm_bound",
    "kernel_estimate_report",
]
