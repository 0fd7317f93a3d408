"""Hankel operators with bounded symbols and the matching oscillation norms.

``hankel_norm(w, f)`` measures ``h_{conj f}``, so an antianalytic ``f``
gives the zero operator and a constant gives the coanalytic projection.

Run with ``python3 demos/hankel_and_bmo.py``.
"""
from bergman_lab import bmo as B
from bergman_lab import operators as O
from bergman_lab import symbols as S
from bergman_lab import weights as W

w = W.standard(1)
for f in (S.analytic([1]), S.monomial(0, 1), S.sign_re()):
    h2, kind = O.hankel_norm(w, f, p=2.0, M=128)
    print(f"{f.name:14s} ||h|| ~ {h2:.6f} ({kind})   BMO norm {B.bmo_norm(w, f):.6f}")

# the weighted norm ratio should stay in a band as the truncation grows
rep = O.theorem1_report(w, [("signre", S.sign_re()), ("lacunary", S.parse_symbol("lacunary:K=10"))],
                        p=2.0, M=64)
for row in rep.rows:
    print(f"{row.param:10s} ratio {row.ratio:.4f}")
print(rep.summary())
