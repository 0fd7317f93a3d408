import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bergman_lab import weights as W
from bergman_lab import weight_classes as C
from bergman_lab.reports import BAND_WIDTH, is_divergent, monotone_growth


@pytest.fixture(scope="module")
def w0():
    return W.standard(0)


def test_dhat_standard0_ratio_is_two(w0):
    rep = C.dhat_report(w0)
    np.testing.assert_allclose(rep.ratios, 2.0, rtol=1e-12)
    assert rep.verdict == C.MEMBER
    assert rep.observed_constant > 0 and math.isfinite(rep.observed_constant)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5, 6.0])
def test_dhat_standard_family(alpha):
    rep = C.dhat_report(W.standard(alpha))
    assert rep.verdict == C.MEMBER
    # (1-r)^(alpha+1) asymptotics: ratio tends to 2^(alpha+1)
    np.testing.assert_allclose(rep.ratios[-1], 2 ** (alpha + 1), rtol=1e-4)


def test_dhat_exponential_not_member():
    rep = C.dhat_report(W.exponential(1, 1))
    assert rep.verdict == C.NON_MEMBER
    assert any("underflow" in f for f in rep.flags)


def test_dhat_grid_validation(w0):
    with pytest.raises(ValueError):
        C.dhat_report(w0, [0.1, 0.5, 0.9])
    with pytest.raises(ValueError):
        C.dhat_report(w0, [0.5, 0.4, 0.9995])


def test_dcheck_examples(w0):
    rep = C.dcheck_report(w0, K_candidates=(2.0,))
    np.testing.assert_allclose(rep.ratios, 2.0, rtol=1e-12)
    assert rep.verdict == C.MEMBER
    assert C.dcheck_report(W.standard(1)).verdict == C.MEMBER
    # tail ~ 1/log(e/(1-r)), so the reverse ratio tends to 1
    rep = C.dcheck_report(W.logpow(-1, -2))
    assert rep.verdict == C.NON_MEMBER
    assert np.all(np.diff(rep.ratios) < 0)


def test_dcheck_rejects_bad_K(w0):
    with pytest.raises(ValueError):
        C.dcheck_report(w0, K_candidates=(1.0,))


def test_m_examples(w0):
    rep = C.m_report(w0, K_candidates=(2.0,))
    x = C.default_x_grid()
    np.testing.assert_allclose(rep.ratios, (2 * x + 1) / (x + 1), rtol=1e-9)
    assert rep.observed_constant >= 1.5 * (1 - 1e-12)
    assert rep.verdict == C.MEMBER
    rep = C.m_report(W.exponential(1, 1), K_candidates=(2.0,))
    assert rep.verdict == C.MEMBER
    assert monotone_growth(rep.ratios)


@pytest.mark.parametrize("spec", ["standard:alpha=0", "standard:alpha=1", "standard:alpha=2.5",
                                  "logpow:alpha=1,beta=1", "logpow:alpha=1,beta=0",
                                  "exp:c=1,a=1", "logpow:alpha=-1,beta=-2"])
def test_class_algebra(spec):
    w = W.parse_weight(spec)
    dh, dc = C.dhat_report(w), C.dcheck_report(w)
    if dh.verdict == C.MEMBER and dc.verdict == C.MEMBER:
        assert C.m_report(w).verdict == C.MEMBER
        assert C.d_report(w).verdict == C.MEMBER


def test_dhat_constant_grows_with_grid():
    for spec in ("logpow:alpha=-1,beta=-2", "standard:alpha=0.3", "exp:c=1,a=1"):
        w = W.parse_weight(spec)
        full = C.default_r_grid()
        consts = [C.dhat_report(w, full[:k]).observed_constant
                  for k in range(10, 21) if full[k - 1] >= 0.999]
        assert np.all(np.diff(consts) >= 0)


def test_room_closure():
    w, nu = W.standard(1), W.logpow(1, 1)
    derived = W.derive_weight(w, W.tail_product(nu))
    assert C.d_report(derived).verdict == C.MEMBER


def test_beta_estimates(w0):
    beta, c = C.dhat_beta_estimate(w0)
    assert beta == 1.0
    np.testing.assert_allclose(c, 1.0, rtol=1e-12)
    assert C.dhat_beta_estimate(W.standard(2))[0] == 3.0
    assert C.dhat_beta_estimate(W.logpow(1, 0))[0] == 2.0


def test_eta_estimates(w0):
    assert C.moment_eta_estimate(w0)[0] == 1.0
    assert C.moment_eta_estimate(W.standard(2))[0] == 3.0
    # repeated indices carry no information and must be ignored
    eta, _ = C.moment_eta_estimate(w0, np.repeat(C.default_x_grid(), 2))
    assert eta == 1.0


def test_estimate_inconclusive():
    with pytest.raises(C.InconclusiveError):
        C.dhat_beta_estimate(W.exponential(1, 1), candidates=np.arange(0, 4.25, 0.25))


def test_integral_ratio_examples(w0):
    rep = C.dhat_integral_ratio(w0, 0.0, [0.0])
    np.testing.assert_allclose(rep.rows[0].lhs, 1.0, rtol=1e-10)
    np.testing.assert_allclose(rep.rows[0].ratio, 1.0, rtol=1e-10)
    rep = C.dhat_integral_ratio(w0, 2.0, [0.5, 0.9, 0.99])
    # int dA / |1 - conj(zeta) z|^3 is comparable to 1/(1 - |zeta|)
    assert rep.band < 2.0


def test_integral_ratio_exponential_drifts():
    rep = C.dhat_integral_ratio(W.exponential(1, 1), 2.0)
    assert rep.divergent()
    assert rep.flags


def test_lambda_and_n0(w0):
    lam, rep = C.lambda_estimate(w0)
    assert rep.two_sided()
    assert C.n0_from_lambda(lam) > lam
    assert C.n0_from_lambda(1.0) == 2


def test_hl_example(w0):
    rep = C.hl_sum_ratio(w0, 1.0, 0.0, [0.99])
    row = rep.rows[0]
    np.testing.assert_allclose(row.lhs, -2 * math.log(0.01) / 0.99, rtol=1e-3)
    np.testing.assert_allclose(row.rhs, 1 - math.log(0.01), rtol=1e-9)
    np.testing.assert_allclose(row.ratio, 1.66, atol=5e-3)


def test_hl_small_s(w0):
    rep = C.hl_sum_ratio(w0, 1.0, 0.0, [1e-6])
    # n = 0 term 1/omega_1 = 2 against rhs 1 + O(s)
    np.testing.assert_allclose(rep.rows[0].ratio, 2.0, rtol=1e-5)


@pytest.mark.slow
@pytest.mark.parametrize("spec", ["standard:alpha=0", "standard:alpha=1", "logpow:alpha=1,beta=1"])
@pytest.mark.parametrize("p", [1.0, 2.0])
@pytest.mark.parametrize("alpha", [-2.0, 0.0, 2.0])
def test_hl_band(spec, p, alpha):
    rep = C.hl_sum_ratio(W.parse_weight(spec), p, alpha)
    assert rep.band <= BAND_WIDTH
    assert not rep.divergent()


def test_hl_errors(w0):
    with pytest.raises(ValueError):
        C.hl_sum_ratio(w0, 0.0, 0.0)
    with pytest.raises(ValueError):
        C.hl_sum_ratio(w0, 1.0, 0.0, [1.0])


def test_room_examples(w0):
    hat, tp = C.room_report(w0, w0, 0.5)
    np.testing.assert_allclose(hat.ratios, 2.0, rtol=1e-9)
    np.testing.assert_allclose(tp.ratios, 2.0, rtol=1e-9)
    assert hat.rows[0].param == 0.5
    hat0, _ = C.room_report(w0, w0, 0.5, [0.0])
    assert math.isfinite(hat0.rows[0].ratio)


def test_room_gamma_validation(w0):
    with pytest.raises(ValueError):
        C.room_report(w0, w0, 0.0)


@given(st.lists(st.floats(0.5, 2.0), min_size=6, max_size=20))
def test_bounded_noise_not_divergent(values):
    # values inside a factor 4 band can never trip the divergence test
    assert not is_divergent(values)


def test_divergence_rule():
    assert is_divergent([1, 2, 3, 4, 5, 9])
    assert not is_divergent([1, 2, 3, 4, 5, 8])  # growth exactly 4 in the window
    assert not is_divergent([1, 1.1, 1.2, 1.3, 1.4, 1.5])
    assert is_divergent([100, 50, 20, 10, 5])
    assert not is_divergent([1, 2, 1, 8, 9, 40])


def test_report_serializes(w0):
    d = C.dhat_report(w0).to_dict()
    assert d["class_name"] == "Dhat"
    assert set(d) >= {"grid", "observed_constant", "verdict", "note", "auxiliary"}
