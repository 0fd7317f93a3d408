import math

import numpy as np
import pytest
from scipy import integrate

from bergman_lab import operators as O
from bergman_lab import symbols as S
from bergman_lab import weights as W

BUILTIN = ["standard:alpha=0", "standard:alpha=1", "exp:c=1,a=1", "logpow:alpha=1,beta=1",
           "logpow:alpha=-1,beta=-2"]


@pytest.fixture(scope="module")
def w0():
    return W.standard(0)


def brute_pairing(w, f, g):
    """``int f conj(g) omega dA`` by nested adaptive quadrature in polar form."""
    def inner(r, part):
        val = integrate.quad(lambda t: part(f(r * np.exp(1j * t)) * np.conj(g(r * np.exp(1j * t)))),
                             0, 2 * np.pi, epsabs=1e-13, epsrel=1e-11, limit=200)[0]
        return val / np.pi * r * W.eval_weight(w, r)

    re = integrate.quad(lambda r: inner(r, np.real), 0, 1 - 1e-12, epsabs=1e-12, limit=200)[0]
    im = integrate.quad(lambda r: inner(r, np.imag), 0, 1 - 1e-12, epsabs=1e-12, limit=200)[0]
    return re + 1j * im


# -- projection -------------------------------------------------------------------

def test_project_examples(w0):
    g = [1, -2, 0.5j, 3]
    np.testing.assert_allclose(O.project(w0, S.analytic(g), 3).coefficients, g, rtol=1e-12)
    np.testing.assert_allclose(O.project(W.exponential(1, 1), S.conj_analytic([0, 1]), 5).coefficients, 0,
                               atol=1e-15)
    # (1 / 2 omega_3) * int |zeta|^4 dA = omega_5 / omega_3 = 2/3
    np.testing.assert_allclose(O.project(w0, S.monomial(2, 1), 3).coefficients, [0, 2 / 3, 0, 0],
                               atol=1e-14)


@pytest.mark.parametrize("spec", BUILTIN)
def test_reproducing_degree_64(spec):
    w = W.parse_weight(spec)
    rng = np.random.default_rng(7)
    g = rng.normal(size=65) + 1j * rng.normal(size=65)
    out = O.project(w, S.from_function(S.AnalyticCoeffs(g), name="g"), 64).coefficients
    np.testing.assert_allclose(out, g, atol=1e-8 * np.max(np.abs(g)))


@pytest.mark.slow
@pytest.mark.parametrize("spec", ["standard:alpha=0", "logpow:alpha=1,beta=1"])
def test_projection_symmetry(spec):
    w = W.parse_weight(spec)
    f = S.from_function(lambda z: np.exp(z.real) * np.conj(z) + np.abs(z), name="f")
    g = S.AnalyticCoeffs([0.5, 1j, -1])
    Pf = O.project(w, f, 2).coefficients
    lhs = np.sum(Pf * np.conj(g.coefficients) * 2 * w.moments(2 * np.arange(3) + 1.0))
    rhs = brute_pairing(w, f, g)
    assert abs(lhs - rhs) <= 1e-8 * max(1, abs(rhs))


def test_maximal_projection(w0):
    one = S.analytic([1])
    np.testing.assert_allclose(O.maximal_project_point(w0, one, 0), 1.0, rtol=1e-10)
    # angular mean of |1 - a e^{it}|^-2 is 1/(1 - a^2)
    a = 0.9
    np.testing.assert_allclose(O.maximal_project_point(w0, one, a), -math.log(1 - a * a) / (a * a),
                               rtol=1e-8)
    f = S.from_function(lambda z: 1 + z.real ** 2, name="pos")
    for z in (0.3, 0.7j):
        P = O.project(w0, f, 400)
        assert O.maximal_project_point(w0, f, z) >= abs(P(z)) * (1 - 1e-10)


# -- Hankel operators ----------------------------------------------------------------

def test_hankel_apply_constant_symbol(w0):
    g = S.AnalyticCoeffs([2.5, 1, -3])
    for z in (0.0, 0.4 - 0.3j):
        np.testing.assert_allclose(O.hankel_apply(w0, S.analytic([1]), g, z), 2.5, rtol=1e-12)


def test_hankel_apply_zeta_gives_conj_z(w0):
    # entry (k-j, j) of zeta^k is omega_{2k+1}/omega_{2(k-j)+1}; k=1, j=0 gives 1, so the
    # image of g = 1 is conj(z) itself (direct disc quadrature agrees)
    f = S.analytic([0, 1])
    for z in (0.5, 0.3 + 0.6j):
        np.testing.assert_allclose(O.hankel_apply(w0, f, [1], z), np.conj(z), rtol=1e-12)
        np.testing.assert_allclose(O.hankel_apply(w0, f, [1], z, method="direct"), np.conj(z), rtol=1e-8)


def test_hankel_apply_no_matching_monomial(w0):
    assert O.hankel_apply(w0, S.monomial(1), S.AnalyticCoeffs([0, 0, 1]), 0.5) == 0


@pytest.mark.parametrize("spec", ["standard:alpha=0", "standard:alpha=2"])
@pytest.mark.parametrize("k", [1, 2, 5])
def test_hankel_closed_form(spec, k):
    w = W.parse_weight(spec)
    H = O.hankel_matrix(w, S.analytic(np.eye(k + 1)[k]), 8, 8).entries
    ref = np.zeros_like(H)
    for j in range(k + 1):
        ref[k - j, j] = w.moment(2 * k + 1) / w.moment(2 * (k - j) + 1)
    np.testing.assert_allclose(H, ref, atol=1e-14)


def test_hankel_matrix_example(w0):
    H = O.hankel_matrix(w0, S.analytic([0, 0, 1]), 4, 4).entries
    np.testing.assert_allclose(H[1, 1], 2 / 3, rtol=1e-12)
    H1 = O.hankel_matrix(w0, S.analytic([1]), 4, 4).entries
    ref = np.zeros((5, 5))
    ref[0, 0] = 1
    np.testing.assert_allclose(H1, ref, atol=1e-15)


def test_hankel_matrix_grid_symbol(w0):
    for sym in (S.analytic([0, 1]), S.conj_analytic([0, 1]), S.monomial(3, 1)):
        grid = S.sample_on_rule(sym, w0, n_theta=64)
        np.testing.assert_allclose(O.hankel_matrix(w0, grid, 6, 6).entries,
                                   O.hankel_matrix(w0, sym, 6, 6).entries, atol=1e-10)


def test_hankel_matrix_reproduces_apply(w0):
    f = S.sign_re()
    g = S.AnalyticCoeffs([1, 0.5, -0.25j])
    rng = np.random.default_rng(1)
    zs = 0.6 * rng.uniform(0, 1, 5) * np.exp(2j * np.pi * rng.uniform(0, 1, 5))
    for z in zs:
        series = O.hankel_apply(w0, f, g, z)
        direct = O.hankel_apply(w0, f, g, z, method="direct", rtol=1e-9)
        assert abs(series - direct) <= 1e-7


@pytest.mark.parametrize("sym", [S.sign_re(), S.monomial(2, 1), S.from_function(lambda z: np.abs(z) ** 3, name="r3")])
def test_hankel_depends_on_projection_only(w0, sym):
    g = S.AnalyticCoeffs([1, -1, 0.5])
    P = O.project(w0, sym, 400)
    for z in (0.5, -0.2 + 0.4j):
        a = O.hankel_apply(w0, sym, g, z)
        b = O.hankel_apply(w0, S.analytic(P), g, z)
        assert abs(a - b) <= 1e-6 * max(1, abs(a))


def test_hankel_norm_examples(w0):
    z = S.analytic([0, 1])
    n64, kind = O.hankel_norm(w0, z, 2, 64)
    n128, _ = O.hankel_norm(w0, z, 2, 128)
    assert kind == "truncated-exact"
    assert abs(n64 - n128) <= 1e-6
    # rank two: g -> g_0 conj z + g_1, normalized singular value sqrt(omega_3 / omega_1)
    np.testing.assert_allclose(n64, math.sqrt(0.5), rtol=1e-12)
    np.testing.assert_allclose(O.hankel_norm(w0, S.analytic([1]), 2, 32)[0], 1.0, rtol=1e-12)
    assert O.hankel_norm(w0, S.analytic([0]), 2, 32)[0] == 0.0


def test_hankel_norm_modes(w0):
    with pytest.raises(O.ModeError):
        O.hankel_norm(w0, S.analytic([1]), 3, 16)
    with pytest.raises(O.ModeError):
        O.hankel_norm(w0, S.analytic([1]), 2, 16, mode="bogus")
    with pytest.raises(ValueError):
        O.hankel_norm(w0, S.analytic([1]), 2, O.M_MAX + 1)
    est, kind = O.hankel_norm(w0, S.analytic([0, 1]), 3, 16, mode="lower_p")
    assert kind == "lower-bound" and est > 0


def test_lower_bound_below_exact_at_p2(w0):
    f = S.analytic([0, 1, 0.5])
    exact, _ = O.hankel_norm(w0, f, 2, 32)
    lower, _ = O.hankel_norm(w0, f, 2, 32, mode="lower_p")
    assert lower <= exact * (1 + 1e-10)


# -- V-transform -----------------------------------------------------------------

def test_v_transform_examples(w0):
    nu = W.power_factor(1)
    for z in (0.0, 0.4, 0.7j):
        np.testing.assert_allclose(O.v_transform(w0, nu, S.analytic([1]), z), 3 * (1 - abs(z)), rtol=1e-10)
        np.testing.assert_allclose(O.v_transform(w0, nu, S.analytic([1]), z, method="direct"),
                                   3 * (1 - abs(z)), rtol=1e-8)
    v = W.exponential(1, 1)
    assert O.v_transform(v, nu, S.conj_analytic([0, 1]), 0.5) == 0
    # z = 0: nu(0) * int f omega dA / (2 (omega nu)_1)
    f = S.monomial(1, 1)
    wn = W.derive_weight(w0, nu)
    np.testing.assert_allclose(O.v_transform(w0, nu, f, 0), 2 * w0.moment(3) / (2 * wn.moment(1)), rtol=1e-10)


def test_v_multiplier_examples(w0):
    nu = W.power_factor(1)
    V = O.v_multiplier(w0, nu, [0, 1])
    np.testing.assert_allclose(V.series.coefficients, [0, 5], rtol=1e-10)
    V = O.v_multiplier(W.standard(1), nu, np.eye(6)[4])
    wn = W.derive_weight(W.standard(1), nu)
    np.testing.assert_allclose(V.series.coefficients[4], W.standard(1).moment(9) / wn.moment(9), rtol=1e-12)


@pytest.mark.parametrize("f", [S.analytic([1, 0.5, -0.2j]), S.monomial(2, 1), S.sign_re()])
def test_v_series_vs_quadrature(w0, f):
    nu = W.power_factor(2)
    rng = np.random.default_rng(5)
    zs = 0.9 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
    for z in zs:
        a = O.v_transform(w0, nu, f, z)
        b = O.v_transform(w0, nu, f, z, method="direct", rtol=1e-10)
        assert abs(a - b) <= 1e-8 * max(1, abs(a))


@pytest.mark.parametrize("f", [S.analytic([1]), S.conj_analytic([0, 1]), S.monomial(2, 1),
                               S.monomial_mix([(1.0, 3, 1), (0.5j, 0, 2)])])
def test_projection_of_v_transform(w0, f):
    nu = W.power_factor(2)
    V = O.v_series(w0, nu, f, rho=0.999)
    as_symbol = S.sample_on_rule(S.from_function(V, name="V"), w0, n_theta=256)
    np.testing.assert_allclose(O.project(w0, as_symbol, 8).coefficients,
                               O.project(w0, f, 8).coefficients, atol=1e-6)


def test_v_sup_norm_examples(w0):
    nu = W.power_factor(1)
    s = O.v_sup_norm(w0, nu, S.analytic([1]))
    np.testing.assert_allclose(s.value, 3.0, rtol=1e-10)
    assert abs(s.point) < 1e-8
    assert O.v_sup_norm(w0, nu, S.analytic([0])).value == 0
    vals = [O.v_sup_norm(w0, W.power_factor(2), S.analytic(S.lacunary(K))).value for K in (4, 6, 8)]
    assert max(vals) / min(vals) < 1.1
    with pytest.raises(ValueError):
        O.v_sup_norm(w0, nu, S.analytic([1]), n_theta=8)


def test_dilation_monotone(w0):
    nu_hat = W.tail_product(W.standard(0))
    f = S.AnalyticCoeffs([0.3, 1, -0.5, 0.25, 1j])
    full = O.v_sup_norm(w0, nu_hat, S.analytic(f)).value
    for r in (0.5, 0.9, 0.99):
        assert O.v_sup_norm(w0, nu_hat, S.analytic(S.dilate(f, r))).value <= full * (1 + 1e-6)


# -- norms ------------------------------------------------------------------------

def test_bloch_examples():
    assert O.bloch_norm(S.AnalyticCoeffs([0, 1])) == pytest.approx(1.0, abs=1e-12)
    assert O.bloch_norm(S.AnalyticCoeffs([-2.5])) == 2.5
    # f'(r) = (1 - r^200)/(1 - r): the sup of (1 - r^2) f'(r) is max (1 + r)(1 - r^200)
    r = np.linspace(0.9, 1, 200001)
    ref = np.max((1 + r) * (1 - r ** 200))
    np.testing.assert_allclose(O.bloch_norm(S.log_symbol()), ref, rtol=1e-8)
    assert ref < 2


def test_omega_log_norm(w0):
    np.testing.assert_allclose(O.omega_log_norm(w0, S.analytic([1])), 2.5, rtol=1e-9)
    assert O.omega_log_norm(w0, S.analytic([0])) == 0.0
    r = np.concatenate((np.linspace(0, 0.5, 6), 1 - 2.0 ** -np.arange(2, 51)))
    th = 2 * np.pi * np.arange(8) / 8
    vals = np.repeat((1 / (1 - r))[:, None], th.size, axis=1).astype(complex)
    grid = S.from_grid(S.GridTable(r, th, vals))
    assert O.omega_log_norm(w0, grid) == math.inf


def test_small_p_seminorm(w0):
    z = S.AnalyticCoeffs([0, 1])
    np.testing.assert_allclose(O.small_p_seminorm(w0, z, 1.0), 1.0, rtol=1e-12)
    assert O.small_p_seminorm(w0, S.AnalyticCoeffs([4]), 1.0) == 0
    assert O.small_p_seminorm(w0, z, 0.5) == math.inf
    with pytest.raises(ValueError):
        O.small_p_seminorm(w0, z, 1.5)


# -- theorem reports ---------------------------------------------------------------

def test_theorem1_examples(w0):
    syms = [("one", S.analytic([1])), ("zero", S.analytic([0]))] + [
        (f"z^{k}", S.analytic(np.eye(k + 1)[k])) for k in (1, 2, 4, 8)]
    rep = O.theorem1_report(w0, syms, p=2, n=2, M=64)
    one = rep.rows[0]
    assert 0 < one.lhs < math.inf and 0 < one.rhs < math.inf
    zero = rep.rows[1]
    assert zero.extra["degenerate"] and math.isnan(zero.ratio)
    assert rep.ratios.size == 5
    powers = rep.ratios[1:]
    assert powers.max() / powers.min() <= 50


def test_theorem2_examples(w0):
    fns = [("z", S.AnalyticCoeffs([0, 1])), ("lac10", S.lacunary(10)), ("log", S.log_symbol())]
    rep = O.theorem2_report(w0, fns, n=2, M=64)
    z = rep.rows[0]
    assert z.lhs == pytest.approx(1.0, abs=1e-12)
    assert z.rhs > 0 and z.extra["hankel"] > 0 and z.extra["v_sup_pow"] > 0
    assert 1 <= rep.rows[1].lhs <= 3
    assert rep.band <= 50
