"""Radial weights on the unit disc: profiles, tails and moments.

A :class:`RadialWeight` stores its profile as a log-density in the
variable ``u = -log(1 - r)``; every integral over [0, 1) is then done on
the boundary-clustered panels of :mod:`bergman_lab.quadrature`.

Examples
--------
>>> w = parse_weight("standard:alpha=1")
>>> round(w.moment(1), 12)
0.5
>>> round(w.tail(0.5), 6)
0.416667
"""

import csv
import math
import re
import threading
from dataclasses import dataclass, field

import numpy as np

from . import quadrature as quad
from .quadrature import QuadratureError, DivergentIntegralError

#: Default relative tolerance of plain and generalized moments.
MOMENT_RTOL = 1e-10

_MAX_LEVEL = 3
_CHUNK = 4_000_000


class WeightError(ValueError):
    """Invalid weight construction or evaluation domain."""


class DegenerateWeightError(WeightError):
    """The tail integral vanishes at some r < 1."""


class TailUnderflowError(DegenerateWeightError):
    """The tail is positive but below the smallest representable double."""


@dataclass(frozen=True)
class GeneralizedMomentSpec:
    """Factors ``prod (1 - r**y_j)**n_j`` and an exponent ``x``.

    Factors with equal ``y`` are merged, so the spec string is canonical.
    """

    factors: tuple = ()
    x: float = 0.0

    def __post_init__(self):
        merged = {}
        for n, y in self.factors:
            n, y = int(n), int(y)
            if n < 1 or y < 1:
                raise WeightError(f"factor ({n}, {y}) must have n >= 1 and y >= 1")
            merged[y] = merged.get(y, 0) + n
        object.__setattr__(self, "factors", tuple((merged[y], y) for y in sorted(merged)))
        if self.x < 0:
            raise WeightError("moment exponent must be nonnegative")

    @property
    def order(self):
        return sum(n for n, _ in self.factors)


def canonical_factors(factors):
    return GeneralizedMomentSpec(tuple(factors)).factors


class MomentCache:
    """Memoized plain and generalized moments of one weight.

    Reads are lock-free dictionary lookups; inserts go through a lock and
    never overwrite an existing entry, so the first stored value wins.
    """

    def __init__(self, rtol=MOMENT_RTOL):
        self.rtol = rtol
        self.plain = {}
        self.generalized = {}
        self._lock = threading.Lock()

    def store(self, table, items):
        with self._lock:
            for key, value in items:
                table.setdefault(key, value)

    def __len__(self):
        return len(self.plain) + len(self.generalized)


class _Rule:
    """Flattened quadrature rule of a weight at one refinement level."""

    def __init__(self, weight, panels, level):
        a = np.array([p[0] for p in panels])
        b = np.array([p[1] for p in panels])
        if level:
            k = 2 ** level
            t = np.linspace(0.0, 1.0, k + 1)
            a, b = (a[:, None] + (b - a)[:, None] * t[:-1]).ravel(), \
                   (a[:, None] + (b - a)[:, None] * t[1:]).ravel()
        nodes, gw = quad.panel_nodes(a, b)
        self.u = nodes.ravel()
        with np.errstate(over="ignore", under="ignore"):
            self.w = (gw.ravel() * np.exp(weight.log_density_u(self.u) - self.u))
        self.log_r = quad.log_r(self.u)
        self._factor_w = {}

    def weights_for(self, factors):
        if not factors:
            return self.w
        cached = self._factor_w.get(factors)
        if cached is None:
            logf = np.zeros_like(self.u)
            with np.errstate(divide="ignore"):
                for n, y in factors:
                    logf += n * np.log(quad.one_minus_r_pow(self.u, y))
            cached = self.w * np.exp(logf)
            self._factor_w[factors] = cached
        return cached

    def moments(self, xs, factors=(), remainder=0.0):
        w = self.weights_for(factors)
        xs = np.asarray(xs, dtype=float)
        out = np.empty(xs.shape)
        step = max(1, _CHUNK // max(1, self.u.size))
        for i in range(0, xs.size, step):
            block = xs[i:i + step]
            with np.errstate(under="ignore"):
                out[i:i + step] = np.exp(np.outer(block, self.log_r)) @ w
        if not factors:
            out += remainder
        return out


class RadialWeight:
    """A radial weight ``omega(z) = omega(|z|)`` on the unit disc.

    Parameters
    ----------
    name : str
        Spec string; ``parse_weight(name)`` rebuilds the weight for the
        built-in families.
    family : str
        One of ``standard``, ``exp``, ``logpow``, ``table``, ``product``.
    params : dict
        Family parameters (kept for reports).
    log_density : callable
        Vectorized ``u -> log omega(1 - exp(-u))``; ``-inf`` where omega = 0.
    breakpoints : sequence of float
        Kinks of the profile in the u variable.
    continuous : bool
        Smoothness hint.
    """

    def __init__(self, name, family, params, log_density, breakpoints=(),
                 continuous=True, rtol=MOMENT_RTOL):
        self.name = name
        self.family = family
        self.params = dict(params)
        self._log_density = log_density
        self.breakpoints = tuple(sorted(float(b) for b in breakpoints))
        self.continuous = continuous
        self.cache = MomentCache(rtol)
        self._table = None
        self._rules = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"RadialWeight({self.name!r})"

    # -- profile -----------------------------------------------------------

    def log_density_u(self, u):
        with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
            return self._log_density(np.asarray(u, dtype=float))

    def density_u(self, u):
        with np.errstate(under="ignore", over="ignore"):
            return np.exp(self.log_density_u(u))

    def __call__(self, r):
        return eval_weight(self, r)

    # -- tail table --------------------------------------------------------

    def _integrand(self, u):
        with np.errstate(under="ignore", over="ignore"):
            return np.exp(self.log_density_u(u) - u)

    def _build_table(self):
        with self._lock:
            if self._table is not None:
                return self._table
            edges = quad.base_edges(self.breakpoints)
            panels = quad.resolve_panels(self._integrand, edges)
            try:
                far, remainder = quad.far_panels(self._integrand)
            except DivergentIntegralError as exc:
                raise WeightError(f"{self.name}: weight is not integrable near r = 1") from exc
            panels = panels + far
            a = np.array([p[0] for p in panels])
            b = np.array([p[1] for p in panels])
            v = np.array([p[2] for p in panels])
            cum = np.concatenate((np.cumsum(v[::-1])[::-1], [0.0])) + remainder
            if not cum[0] > 0 or not np.isfinite(cum[0]):
                raise DegenerateWeightError(f"{self.name}: total mass must be finite and positive")
            self._table = (a, b, cum, remainder, panels)
            return self._table

    def tail_u(self, u, check=False):
        """Tail integral as a function of ``u = -log(1 - r)`` (vectorized)."""
        a, b, cum, remainder, _ = self._build_table()
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty_like(u)
        idx = np.searchsorted(a, u, side="right") - 1
        inside = (idx >= 0) & (u < b[-1])
        idx_in = np.clip(idx, 0, a.size - 1)
        if np.any(inside):
            ui = u[inside]
            k = idx_in[inside]
            nodes, gw = quad.panel_nodes(ui, b[k])
            vals = self._integrand(nodes.ravel()).reshape(nodes.shape)
            out[inside] = np.sum(vals * gw, axis=-1) + cum[k + 1]
        out[~inside & (u < 0)] = np.nan
        out[~inside & (u >= b[-1])] = remainder
        if check:
            bad = ~(out > 0)
            if np.any(bad):
                u_bad = u[bad][0]
                logd = self.log_density_u(np.array([u_bad]))[0]
                r_bad = float(quad.r_of_u(u_bad))
                if np.isfinite(logd):
                    raise TailUnderflowError(
                        f"{self.name}: tail underflows at r = {r_bad!r}")
                raise DegenerateWeightError(
                    f"{self.name}: tail vanishes at r = {r_bad!r}")
        return out

    def tail(self, r):
        """Tail integral ``int_r^1 omega(s) ds``; scalar in, scalar out."""
        r_arr = _check_radius(r)
        out = self.tail_u(quad.u_of_r(r_arr), check=True)
        return float(out[0]) if np.ndim(r) == 0 else out.reshape(np.shape(r))

    @property
    def mass(self):
        """``tail(0) = int_0^1 omega``."""
        return float(self._build_table()[2][0])

    # -- moments -----------------------------------------------------------

    def _rule(self, level):
        rule = self._rules.get(level)
        if rule is None:
            panels = self._build_table()[4]
            rule = _Rule(self, panels, level)
            self._rules.setdefault(level, rule)
            rule = self._rules[level]
        return rule

    def _compute(self, xs, factors):
        remainder = self._build_table()[3]
        xs = np.asarray(xs, dtype=float)
        check = np.unique(np.concatenate((np.arange(0, xs.size, max(1, xs.size // 16)),
                                          [xs.size - 1])))
        for level in range(_MAX_LEVEL):
            coarse = self._rule(level).moments(xs, factors, remainder)
            fine = self._rule(level + 1).moments(xs[check], factors, remainder)
            err = np.abs(coarse[check] - fine) / np.abs(fine)
            if np.all(err <= self.cache.rtol) and np.all(coarse > 0):
                return coarse
        raise QuadratureError(
            f"{self.name}: moments not converged to rtol={self.cache.rtol:g}",
            achieved=float(np.max(err)))

    def moments(self, xs, factors=()):
        """Vectorized (generalized) moments, memoized per exponent."""
        factors = canonical_factors(factors)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if np.any(xs < 0):
            raise WeightError("moment exponent must be nonnegative")
        table = self.cache.plain if not factors else self.cache.generalized
        key = (lambda x: x) if not factors else (lambda x: (factors, x))
        missing = sorted({float(x) for x in xs if key(float(x)) not in table})
        if missing:
            values = self._compute(missing, factors)
            self.cache.store(table, ((key(x), float(v)) for x, v in zip(missing, values)))
        return np.array([table[key(float(x))] for x in xs])

    def moment(self, x):
        """``omega_x = int_0^1 r**x omega(r) dr``."""
        return float(self.moments([x])[0])

    def generalized_moment(self, spec):
        if not isinstance(spec, GeneralizedMomentSpec):
            spec = GeneralizedMomentSpec(*spec)
        return float(self.moments([spec.x], spec.factors)[0])


def _check_radius(r):
    arr = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(~((arr >= 0) & (arr < 1))):
        raise WeightError(f"radius must lie in [0, 1), got {r!r}")
    return arr


# -- operations ---------------------------------------------------------------

def eval_weight(w, r):
    """Profile value ``omega(r)`` for ``0 <= r < 1``."""
    r_arr = _check_radius(r)
    out = w.density_u(quad.u_of_r(r_arr))
    return float(out[0]) if np.ndim(r) == 0 else out.reshape(np.shape(r))


def tail(w, r):
    return w.tail(r)


def moment(w, x):
    return w.moment(x)


def generalized_moment(w, spec):
    return w.generalized_moment(spec)


# -- families -----------------------------------------------------------------

def _fmt(v):
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def standard(alpha=0.0):
    """``(alpha + 1) (1 - r**2)**alpha`` with ``alpha > -1``."""
    alpha = float(alpha)
    if not alpha > -1:
        raise WeightError("standard weight needs alpha > -1")
    c = math.log(alpha + 1.0)

    def logd(u):
        if alpha == 0:
            return np.zeros_like(u)
        # 1 - r^2 = (1 - r)(1 + r) = exp(-u) (2 - exp(-u))
        return c + alpha * (-u + np.log1p(-np.expm1(-u)))

    return RadialWeight(f"standard:alpha={_fmt(alpha)}", "standard", {"alpha": alpha}, logd)


def exponential(c=1.0, a=1.0):
    """``exp(-c / (1 - r)**a)``, which is not in the upper doubling class."""
    c, a = float(c), float(a)
    if not (c > 0 and a > 0):
        raise WeightError("exponential weight needs c > 0 and a > 0")
    return RadialWeight(f"exp:c={_fmt(c)},a={_fmt(a)}", "exp", {"c": c, "a": a},
                        lambda u: -c * np.exp(a * u))


def logpow(alpha=0.0, beta=0.0):
    """``(1 - r)**alpha (log(e / (1 - r)))**beta``."""
    alpha, beta = float(alpha), float(beta)
    return RadialWeight(f"logpow:alpha={_fmt(alpha)},beta={_fmt(beta)}", "logpow",
                        {"alpha": alpha, "beta": beta},
                        lambda u: -alpha * u + beta * np.log1p(u))


def table(r, values, name=None):
    """Piecewise-linear profile through samples ``(r_i, v_i)``.

    Outside the sampled range the nearest sample value is used; in
    particular the profile is constant from the last breakpoint to 1.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(values, dtype=float)
    order = np.argsort(r)
    r, v = r[order], v[order]
    if r.size < 2 or np.any(np.diff(r) <= 0):
        raise WeightError("table weight needs at least two distinct radii")
    if r[0] < 0 or r[-1] >= 1:
        raise WeightError("table radii must lie in [0, 1)")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise WeightError("table values must be finite and nonnegative")

    def logd(u):
        with np.errstate(divide="ignore"):
            return np.log(np.interp(quad.r_of_u(u), r, v))

    return RadialWeight(name or f"table:<{r.size} samples>", "table",
                        {"r": r.tolist(), "values": v.tolist()}, logd,
                        breakpoints=quad.u_of_r(r), continuous=True)


def read_table(path):
    """Load a ``r,value`` CSV (header optional) as a table weight."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not "".join(row).strip():
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if rows:
                    raise WeightError(f"{path}: malformed row {row!r}")
    if not rows:
        raise WeightError(f"{path}: no samples")
    rr, vv = zip(*rows)
    return table(rr, vv, name=f"table:{path}")


# -- derived weights ----------------------------------------------------------

@dataclass(frozen=True)
class Modifier:
    """A radial factor multiplying a base weight.

    ``kind`` is ``pow`` (``(1 - r)**beta``), ``tailof`` (tail of another
    weight), ``log`` (``log(e / (1 - r))``), ``times`` (profile of another
    weight) or ``cut`` (indicator of ``r < beta``).
    """

    kind: str
    beta: float = 0.0
    other: "RadialWeight" = field(default=None, compare=False)
    power: float = 1.0

    def log_factor_u(self, u):
        if self.kind == "pow":
            return -self.beta * u
        if self.kind == "log":
            return np.log1p(u)
        if self.kind == "tailof":
            with np.errstate(divide="ignore"):
                return self.power * np.log(self.other.tail_u(u))
        if self.kind == "times":
            return self.other.log_density_u(u)
        if self.kind == "cut":
            u = np.asarray(u, dtype=float)
            return np.where(u < quad.u_of_r(self.beta), 0.0, -np.inf)
        raise WeightError(f"unknown modifier {self.kind!r}")

    def factor(self, r):
        """Value of the radial factor at ``r`` (vectorized)."""
        u = quad.u_of_r(_check_radius(r))
        with np.errstate(under="ignore"):
            out = np.exp(self.log_factor_u(u))
        return float(out[0]) if np.ndim(r) == 0 else out.reshape(np.shape(r))

    @property
    def label(self):
        if self.kind == "pow":
            return f"pow({_fmt(self.beta)})"
        if self.kind == "log":
            return "log"
        if self.kind == "cut":
            return f"cut({_fmt(self.beta)})"
        if self.kind == "tailof" and self.power != 1.0:
            return f"tailof({self.other.name})^{_fmt(self.power)}"
        return f"{self.kind}({self.other.name})"


def power_factor(beta):
    return Modifier("pow", float(beta))


def tail_product(nu, power=1.0):
    """Factor ``nu_hat(r)**power``."""
    return Modifier("tailof", other=nu, power=float(power))


def cut_factor(R):
    """Indicator of the disc ``|z| < R``."""
    if not 0 < R < 1:
        raise WeightError("cut radius must lie in (0, 1)")
    return Modifier("cut", float(R))


def log_factor():
    return Modifier("log")


def profile_factor(nu):
    return Modifier("times", other=nu)


def derive_weight(w, modifier):
    """New weight ``w * modifier`` with its own moment cache.

    Raises
    ------
    WeightError
        If the product is not integrable (e.g. a too negative power).
    """
    base = w

    def logd(u):
        return base.log_density_u(u) + modifier.log_factor_u(u)

    bps = list(w.breakpoints)
    if modifier.other is not None:
        bps += list(modifier.other.breakpoints)
    if modifier.kind == "cut":
        bps.append(float(quad.u_of_r(modifier.beta)))
    derived = RadialWeight(f"{w.name}*{modifier.label}", "product",
                           {"base": w.name, "factor": modifier.label}, logd,
                           breakpoints=bps, continuous=w.continuous, rtol=w.cache.rtol)
    derived.base = w
    derived.modifier = modifier
    derived.mass  # integrability check
    return derived


# -- spec mini-language -------------------------------------------------------

_KV = re.compile(r"^\s*([A-Za-z_]+)\s*=\s*([-+0-9.eE]+)\s*$")


class SpecError(ValueError):
    """Malformed weight or symbol spec; ``token`` names the offending piece."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


def _split_top(spec, sep):
    parts, depth, cur = [], 0, []
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecError(f"unbalanced ')' in {spec!r}", token=spec)
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise SpecError(f"unbalanced '(' in {spec!r}", token=spec)
    parts.append("".join(cur))
    return parts


def _params(body, required, token):
    out = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        m = _KV.match(item)
        if not m:
            raise SpecError(f"bad parameter {item!r}", token=item)
        out[m.group(1)] = float(m.group(2))
    unknown = set(out) - set(required)
    if unknown:
        raise SpecError(f"unknown parameter(s) {sorted(unknown)} in {token!r}", token=token)
    missing = [k for k in required if k not in out]
    if missing:
        raise SpecError(f"missing parameter(s) {missing} in {token!r}", token=token)
    return out


def _parse_base(token):
    token = token.strip()
    head, _, body = token.partition(":")
    if head == "standard":
        return standard(**_params(body, ["alpha"], token))
    if head == "exp":
        return exponential(**_params(body, ["c", "a"], token))
    if head == "logpow":
        return logpow(**_params(body, ["alpha", "beta"], token))
    if head == "table":
        if not body:
            raise SpecError("table spec needs a path", token=token)
        return read_table(body)
    raise SpecError(f"unknown weight family {head!r}", token=token)


def _parse_modifier(token):
    token = token.strip()
    if token == "log":
        return log_factor()
    m = re.match(r"^(pow|tailof|times)\((.*)\)$", token, re.S)
    if not m:
        raise SpecError(f"unknown weight modifier {token!r}", token=token)
    kind, arg = m.groups()
    if kind == "pow":
        try:
            return power_factor(float(arg))
        except ValueError:
            raise SpecError(f"pow needs a number, got {arg!r}", token=token) from None
    inner = parse_weight(arg)
    return tail_product(inner) if kind == "tailof" else profile_factor(inner)


def parse_weight(spec):
    """Build a weight from the spec mini-language.

    ``standard:alpha=A`` | ``exp:c=C,a=A`` | ``logpow:alpha=A,beta=B`` |
    ``table:PATH`` | ``SPEC*pow(B)`` | ``SPEC*tailof(SPEC)`` | ``SPEC*log``
    (and ``SPEC*times(SPEC)`` for a product of two profiles).
    """
    if isinstance(spec, RadialWeight):
        return spec
    parts = _split_top(spec.strip(), "*")
    if not parts[0].strip():
        raise SpecError(f"empty weight spec in {spec!r}", token=spec)
    w = _parse_base(parts[0])
    for token in parts[1:]:
        w = derive_weight(w, _parse_modifier(token))
    return w
