"""Fibonacci and Ising from the inside: fusion rules, dimensions, S and T, and the coherence checks.

Run: python3 demos/01_fusion_and_coherence.py
"""
import numpy as np

from lrcat import check_hexagon, check_pentagon, fibonacci, ising, su2_level_k
from lrcat.category import perturb_F

np.set_printoptions(precision=4, suppress=True)

# Fibonacci has one nontrivial label, tau, with tau x tau = 1 + tau.
fib = fibonacci()
print("labels:", fib.ring.labels)
print("tau x tau ->", fib.N[1, 1])
print("dims:", fib.dims, " global dimension w =", round(fib.ring.w, 6))

# The modular data follows from the braiding: S is unitary and (ST)^3 is proportional to S^2.
md = fib.modular
print("S =\n", md.S)
print("twists:", np.round(np.diag(md.T), 6))
S, T = md.S, md.T
print("S S^dagger = 1:", np.allclose(S @ S.conj().T, np.eye(2)))
ST3 = np.linalg.matrix_power(S @ T, 3)
ratio = ST3[0, 0] / (S @ S)[0, 0]
print("(ST)^3 = c S^2 with c =", np.round(ratio, 6), ":", np.allclose(ST3, ratio * (S @ S)))

# Pentagon and hexagon residuals sit at machine precision for the builtins...
for cat in (fib, ising(), su2_level_k(4)):
    print(f"{cat.name:>12}: pentagon {check_pentagon(cat).residual:.1e}, hexagon {check_hexagon(cat).residual:.1e}")

# ...and a perturbation of one F entry is caught immediately.
bad = perturb_F(fib, (1, 1, 1, 1, 1, 1), 1e-3)
print("perturbed fibonacci: pentagon residual", f"{check_pentagon(bad).residual:.2e}")
