import numpy as np
import pytest
from hypothesis import given, strategies as st

from bergman_lab import disc
from bergman_lab import weights as W


@pytest.mark.parametrize("spec", ["standard:alpha=0", "standard:alpha=2", "exp:c=1,a=1",
                                  "logpow:alpha=-1,beta=-2"])
def test_rule_integrates_moments(spec):
    w = W.parse_weight(spec)
    r, Wt = disc.disc_rule(w)
    assert np.all((r >= 0) & (r < 1)) and np.all(Wt > 0)
    np.testing.assert_allclose(np.sum(Wt), 2 * w.moment(1), rtol=1e-10)
    for x in (3.0, 11.0, 41.0):
        np.testing.assert_allclose(np.sum(Wt * r ** (x - 1)), 2 * w.moment(x), rtol=1e-9)


def test_rule_breaks_add_nodes():
    w = W.standard(0)
    r0, _ = disc.disc_rule(w)
    r1, W1 = disc.disc_rule(w, breaks=(0.7,))
    assert r1.size > r0.size
    np.testing.assert_allclose(np.sum(W1), 1.0, rtol=1e-12)


def test_disc_integral_examples():
    w = W.standard(0)
    # int |z|^4 dA = 1/3
    np.testing.assert_allclose(disc.disc_integral(w, lambda r: r ** 4), 1 / 3, rtol=1e-10)
    val, lev = disc.disc_integral(w, lambda r: np.ones_like(r), return_level=True)
    assert val == pytest.approx(1.0, rel=1e-12) and lev == 1


def test_disc_integral_cancellation_uses_abs_floor():
    w = W.standard(0)
    val = disc.disc_integral(w, lambda r: (np.zeros_like(r), np.ones_like(r)))
    assert val == 0.0


def test_theta_count():
    assert disc.theta_count(0.0) == 64
    assert disc.theta_count(0.99) == 4096
    assert disc.theta_count(1 - 1e-14) == 2 ** 20


def test_power_series_on_circle_matches_pointwise():
    rng = np.random.default_rng(2)
    c = rng.normal(size=300) + 1j * rng.normal(size=300)
    n = 64
    z = 0.9 * np.exp(2j * np.pi * np.arange(n) / n)
    np.testing.assert_allclose(disc.power_series_on_circle(c, 0.9, n),
                               np.polynomial.polynomial.polyval(z, c), rtol=1e-10, atol=1e-10)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=60), st.floats(0, 0.95), st.floats(0, 6.3))
def test_series_eval_matches_polyval(c, r, t):
    z = np.array([r * np.exp(1j * t), -r, 0.5 * r])
    ref = np.polynomial.polynomial.polyval(z, c)
    np.testing.assert_allclose(disc.series_eval(c, z), ref, atol=1e-12 * (1 + np.sum(np.abs(c))))


def test_series_eval_truncates_long_tails():
    c = np.ones(100000)
    np.testing.assert_allclose(disc.series_eval(c, np.array([0.5])), [2.0], rtol=1e-14)
    assert disc.suffix_max([1, 3, 2, 0]).tolist() == [3, 3, 2, 0]


def test_parallel_map_is_deterministic(monkeypatch):
    x = np.linspace(0, 1, 1000)
    f = lambda a: np.sin(a) * np.exp(a)
    monkeypatch.setenv("BERGMAN_LAB_THREADS", "1")
    one = disc.parallel_map(f, x, chunk=37)
    monkeypatch.setenv("BERGMAN_LAB_THREADS", "4")
    four = disc.parallel_map(f, x, chunk=37)
    assert np.array_equal(one, four)
    monkeypatch.setenv("BERGMAN_LAB_THREADS", "junk")
    assert disc.thread_count() == 1
