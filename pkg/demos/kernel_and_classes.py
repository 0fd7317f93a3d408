"""Reproducing kernels and weight class diagnostics for a few radial weights.

Run with ``python3 demos/kernel_and_classes.py``.
"""
import numpy as np

from bergman_lab import kernels as K
from bergman_lab import weight_classes as C
from bergman_lab import weights as W

weights = {
    "standard(0)": W.standard(0),
    "standard(2)": W.standard(2),
    "logpow(1,1)": W.parse_weight("logpow:alpha=1,beta=1"),
    "exp(1,1)": W.exponential(1, 1),
}

# the unweighted Bergman kernel is 1/(1 - conj(z) zeta)**2
z = 0.7 + 0.2j
for zeta in (0.5, -0.3j, 0.9 * np.exp(0.4j)):
    b, M = K.kernel_eval(W.standard(0), z, zeta, return_M=True)
    exact = 1 / (1 - np.conj(z) * zeta) ** 2
    print(f"B_z({zeta:.3f}) = {b:.12f}  exact {exact:.12f}  terms {M + 1}")

print()
for label, w in weights.items():
    rep = C.dhat_report(w)
    print(f"{label:12s} Dhat verdict {rep.verdict:24s} constant {rep.observed_constant:.4g}")
