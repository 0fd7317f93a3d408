"""Acceptance criteria 1-13.

Every test records one line ``criterion N: PASS|FAIL  details`` that is
printed at the end of the session, whatever the outcome.
"""

import math

import numpy as np

from bergman_lab import bmo as B
from bergman_lab import kernels as K
from bergman_lab import operators as O
from bergman_lab import symbols as S
from bergman_lab import weight_classes as C
from bergman_lab import weights as W
from bergman_lab.reports import BAND_WIDTH, is_divergent

RESULTS = {}


def record(number, checks):
    """``checks`` is a list of ``(description, ok)``; fails the test unless all hold."""
    ok = all(c for _, c in checks)
    bad = [d for d, c in checks if not c]
    shown = bad if bad else [d for d, _ in checks][:4]
    if not bad and len(checks) > 4:
        shown.append(f"+{len(checks) - 4} more checks")
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  " + "; ".join(shown)
    RESULTS[number] = line
    print(line)
    assert ok, line


def rel(a, b):
    return abs(a - b) / abs(b)


def builtin_families():
    """One weight of each built-in family."""
    r = np.linspace(0, 0.99, 100)
    return [
        W.standard(0.5),
        W.exponential(1, 1),
        W.logpow(1, 1),
        W.table(r, (1 - r) ** 1.5 + 0.1 * r),
        W.parse_weight("standard:alpha=0*pow(2)"),
    ]


def test_criterion_01_classical_kernel():
    rho = np.linspace(0, math.sqrt(0.9), 10)
    z = rho * np.exp(1j * np.linspace(0, 2 * np.pi, 10, endpoint=False))
    zeta = rho[::-1] * np.exp(0.37j + 1j * np.linspace(0, 2 * np.pi, 10, endpoint=False))
    checks = []
    for alpha in (0.0, 1.0, 2.5):
        w = W.standard(alpha)
        worst = 0.0
        for a in z:
            for b in zeta:
                ref = (1 - np.conj(a) * b) ** -(2 + alpha)
                worst = max(worst, rel(K.kernel_eval(w, a, b), ref))
        checks.append((f"alpha={alpha:g} max rel err {worst:.1e}", worst <= 1e-8))
    record(1, checks)


def test_criterion_02_reproducing():
    rng = np.random.default_rng(2)
    g = rng.normal(size=21) + 1j * rng.normal(size=21)
    checks = []
    for w in builtin_families():
        for forced in (False, True):
            out = O.project(w, S.analytic(g), 20, force_quadrature=forced).coefficients
            err = float(np.max(np.abs(out - g)))
            tag = "quadrature" if forced else "exact"
            checks.append((f"{w.name} ({tag}) err {err:.1e}", err <= 1e-8))
    record(2, checks)


def test_criterion_03_expansion_identity():
    rng = np.random.default_rng(3)
    rad = np.sqrt(0.95) * np.sqrt(rng.uniform(size=(25, 2)))
    ang = 2 * np.pi * rng.uniform(size=(25, 2))
    pts = rad * np.exp(1j * ang)
    checks = []
    for spec in ("standard:alpha=0", "standard:alpha=1", "logpow:alpha=1,beta=1"):
        w = W.parse_weight(spec)
        for N in (1, 2, 3, 4):
            e = K.expand_modified(N)
            worst = 0.0
            for z, zeta in pts:
                direct = 2 * (1 - np.conj(z) * zeta) ** N * K.kernel_eval(w, z, zeta)
                worst = max(worst, abs(K.expansion_eval(e, w, z, zeta) - direct) / abs(direct))
            checks.append((f"{spec} N={N} rel err {worst:.1e}", worst <= 1e-6))
    w0 = W.standard(0)
    e1 = K.expand_modified(1)
    head = K.head_coefficients(e1, w0)
    terms = K.term_coefficients(e1, w0, np.arange(1, 200)).sum(axis=0)
    ok = np.allclose(head, [2.0], rtol=1e-10) and np.allclose(terms, 2.0, rtol=1e-10)
    checks.append(("N=1 standard(0) coefficients (2; 2, 2, ...)", bool(ok)))
    record(3, checks)


def test_criterion_04_coefficient_bound():
    checks = []
    for spec in ("standard:alpha=0", "standard:alpha=1", "logpow:alpha=1,beta=1"):
        w = W.parse_weight(spec)
        for N in (1, 2, 3, 4):
            rep = K.expansion_coeff_bound(K.expand_modified(N), w)
            k = np.array([r.param for r in rep.rows])
            last = rep.ratios[k >= 1000]
            ok = (np.isfinite(rep.max_ratio) and rep.upper_bounded()
                  and not is_divergent(last, points=last.size))
            checks.append((f"{spec} N={N} sup {rep.max_ratio:.3g}", bool(ok)))
    rep = K.expansion_coeff_bound(K.expand_modified(1), W.standard(0))
    k = np.array([r.param for r in rep.rows], dtype=float)
    ok = np.allclose(rep.ratios, k / (k + 1), rtol=1e-9) and rep.max_ratio <= 1 + 1e-12
    checks.append(("standard(0) N=1 equals k/(k+1)", bool(ok)))
    record(4, checks)


def dhat_builtins():
    cands = [W.standard(0), W.standard(1), W.standard(2.5), W.logpow(1, 1), W.logpow(1, 0),
             W.logpow(-1, -2), W.exponential(1, 1), W.parse_weight("standard:alpha=0*pow(2)")]
    return [w for w in cands if C.dhat_report(w).verdict == C.MEMBER]


def test_criterion_05_hl_lemma():
    w0 = W.standard(0)
    row = C.hl_sum_ratio(w0, 1.0, 0.0, [0.99]).rows[0]
    checks = [
        (f"ratio at s=0.99 {row.ratio:.4f}", abs(row.ratio - 1.660) <= 0.01),
        ("closed forms", rel(row.lhs, -2 * math.log(0.01) / 0.99) <= 1e-3
         and rel(row.rhs, 1 - math.log(0.01)) <= 1e-9),
    ]
    ws = dhat_builtins()
    checks.append((f"{len(ws)} D-hat weights", len(ws) >= 5))
    for w in ws:
        for p in (1.0, 2.0):
            for alpha in (-2.0, 0.0, 2.0):
                rep = C.hl_sum_ratio(w, p, alpha)
                checks.append((f"{w.name} p={p:g} alpha={alpha:g} band {rep.band:.3g}",
                               rep.band <= BAND_WIDTH and not rep.divergent()))
    record(5, checks)


def test_criterion_06_kernel_norm():
    w0 = W.standard(0)
    lhs = K.modified_kernel_norm(w0, w0, 0.9)
    rhs = K.kernel_norm_bound(w0, w0, 0.9)
    checks = [(f"LHS {lhs:.4f}", abs(lhs - 2.050) <= 0.005), (f"RHS {rhs:.4f}", abs(rhs - 3.303) <= 0.005)]
    nus = [W.standard(0), W.parse_weight("standard:alpha=0*pow(2)")]
    for w in (W.standard(0), W.standard(1)):
        for nu in nus:
            for p in (2.0, 3.0):
                for N in (1, 2):
                    rep = K.kernel_estimate_report(w, nu, p, N)
                    checks.append((f"{w.name} nu={nu.name} p={p:g} N={N} band {rep.band:.3g}",
                                   rep.two_sided()))
    for w in (W.standard(0), W.standard(1)):
        rep = K.kernel_estimate_report(w, W.exponential(1, 1), 2.0, 1)
        checks.append((f"{w.name} nu=exp upper bound", rep.upper_bounded()))
    record(6, checks)


def test_criterion_07_class_diagnostics():
    checks = []
    for alpha in (0.0, 1.0, 2.5):
        w = W.standard(alpha)
        for name, fn in (("Dhat", C.dhat_report), ("Dcheck", C.dcheck_report), ("M", C.m_report)):
            checks.append((f"standard({alpha:g}) {name} member", fn(w).verdict == C.MEMBER))
    ratios = C.dhat_report(W.standard(0)).ratios
    checks.append(("standard(0) Dhat ratio 2", bool(np.allclose(ratios, 2.0, rtol=1e-12))))
    e = W.exponential(1, 1)
    checks.append(("exp Dhat non-member", C.dhat_report(e).verdict == C.NON_MEMBER))
    checks.append(("exp M member", C.m_report(e).verdict == C.MEMBER))
    checks.append(("logpow(-1,-2) Dcheck non-member",
                   C.dcheck_report(W.logpow(-1, -2)).verdict == C.NON_MEMBER))
    record(7, checks)


def test_criterion_08_identities():
    symbols = [("1", S.analytic([1])), ("conj z", S.conj_analytic([0, 1])),
               ("|z|^2 z", S.monomial(2, 1)), ("signre", S.sign_re())]
    g = S.AnalyticCoeffs([1, -0.5, 0.25j])
    zs = [0.3, -0.5 + 0.4j, 0.8j]
    checks = []
    for w in (W.standard(0), W.standard(1)):
        nu = W.power_factor(O.default_n0(w)[0])
        for label, f in symbols:
            V = O.v_series(w, nu, f, rho=0.999)
            grid = S.sample_on_rule(S.radial_times_analytic(V.factor, V.series), w, n_theta=16384)
            err_v = float(np.max(np.abs(O.project(w, grid, 8).coefficients
                                        - O.project(w, f, 8).coefficients)))
            Pf = S.analytic(O.project(w, f, 400))
            # direct disc integral with f against the series of P f
            err_h = max(abs(O.hankel_apply(w, f, g, z, method="direct", rtol=1e-9)
                            - O.hankel_apply(w, Pf, g, z)) for z in zs)
            checks.append((f"{w.name} {label} V err {err_v:.1e}, Hankel err {err_h:.1e}",
                           err_v <= 1e-6 and err_h <= 1e-6))
    P = O.project(W.standard(0), S.monomial(2, 1), 4).coefficients
    err = float(np.max(np.abs(P - [0, 2 / 3, 0, 0, 0])))
    checks.append((f"P(|z|^2 z) = 2z/3 err {err:.1e}", err <= 1e-8))
    record(8, checks)


def test_criterion_09_hankel_closed_form():
    checks = []
    for w in (W.standard(0), W.standard(1)):
        worst = 0.0
        for k in range(9):
            H = O.hankel_matrix(w, S.analytic(np.eye(k + 1)[k]), 12, 12).entries
            ref = np.zeros_like(H)
            for j in range(k + 1):
                ref[k - j, j] = w.moment(2 * k + 1) / w.moment(2 * (k - j) + 1)
            worst = max(worst, float(np.max(np.abs(H - ref))))
        checks.append((f"{w.name} z^k, k<=8, err {worst:.1e}", worst <= 1e-8))
        H1 = O.hankel_matrix(w, S.analytic([1]), 12, 12).entries
        rank_one = abs(H1[0, 0] - 1) <= 1e-12 and np.count_nonzero(np.abs(H1) > 1e-14) == 1
        norm, _ = O.hankel_norm(w, S.analytic([1]), 2, 64)
        checks.append((f"{w.name} f=1 rank one, norm {norm:.12f}", rank_one and abs(norm - 1) <= 1e-10))
    record(9, checks)


def test_criterion_10_theorem1_band():
    symbols = [("1", S.analytic([1])), ("z", S.analytic([0, 1])), ("z^2", S.analytic([0, 0, 1])),
               ("z^4", S.analytic([0, 0, 0, 0, 1])), ("|z|^2 z", S.monomial(2, 1)),
               ("signre", S.sign_re())]
    ratios, checks = [], []
    for w in (W.standard(0), W.standard(1)):
        rep = O.theorem1_report(w, symbols, p=2.0, M=128)
        ratios.extend(rep.ratios)
        powers = [r.ratio for r in rep.rows if r.param in ("z", "z^2", "z^4")]
        checks.append((f"{w.name} no trend in k", not is_divergent(powers, points=len(powers))))
        for r in rep.rows:
            s = r.extra["stability"]
            checks.append((f"{w.name} {r.param} M->2M change {s:.1e}", s <= 1e-4))
    ratios = np.asarray(ratios)
    band = ratios.max() / ratios.min()
    checks.insert(0, (f"band {band:.3g}", bool(np.all(ratios > 0) and band <= BAND_WIDTH)))
    record(10, checks)


def test_criterion_11_theorem2_band():
    fns = [("z", S.AnalyticCoeffs([0, 1])), ("lacunary10", S.lacunary(10)), ("log", S.log_symbol())]
    ratios, checks = [], []
    for w in (W.standard(0), W.standard(1)):
        rep = O.theorem2_report(w, fns, M=128)
        ratios.extend(rep.ratios)
        checks.append((f"{w.name} Bloch(z) = {rep.rows[0].lhs!r}", rep.rows[0].lhs == 1.0))
    ratios = np.asarray(ratios)
    band = ratios.max() / ratios.min()
    checks.insert(0, (f"band {band:.3g}", bool(np.all(ratios > 0) and band <= BAND_WIDTH)))
    record(11, checks)


def test_criterion_12_dilation_monotone():
    nu_hat = W.tail_product(W.standard(0))
    fns = [("z", S.AnalyticCoeffs([0, 1])), ("lacunary10", S.lacunary(10)), ("log", S.log_symbol())]
    checks = []
    for w in (W.standard(0), W.standard(1)):
        for label, f in fns:
            full = O.v_sup_norm(w, nu_hat, S.analytic(f)).value
            dil = [O.v_sup_norm(w, nu_hat, S.analytic(S.dilate(f, r))).value for r in (0.5, 0.9, 0.99)]
            worst = max(dil) / full - 1
            checks.append((f"{w.name} {label} max excess {worst:.1e}", worst <= 1e-6))
    record(12, checks)


def test_criterion_13_bmo():
    w0 = W.standard(0)
    re = S.monomial_mix([(0.5, 1, 0), (0.5, 0, 1)], name="re")
    mo = B.mo_point(w0, re, B.HyperbolicDisc.at_origin(0.5))
    checks = [(f"MO(Re z) at R=0.5 {mo:.9f}", abs(mo - 0.25) <= 1e-6)]
    for w in (W.standard(0), W.standard(1)):
        rep = B.theoremB_report(w)
        emb = all(r.extra["bmo"] <= 2 * r.rhs * (1 + 1e-6) for r in rep.rows)
        checks.append((f"{w.name} BMO <= 2 Linf", emb))
        checks.append((f"{w.name} bounded verdict, max ratio {rep.max_ratio:.3g}", rep.meta["bounded"]))
    tr = B.theoremB_trend(W.exponential(1, 1))
    checks.append((f"exp trend {np.round(tr.ratios, 3).tolist()} increasing",
                   bool(tr.meta["monotone"] and np.all(np.diff(tr.ratios) > 0))))
    record(13, checks)
