"""Search the commutant of S and T at su2 level 10 for every physical modular invariant.

Run: python3 demos/04_e6_search.py
"""
import math
import time

from lrcat import su2_level_k
from lrcat.search import e6_identity_check

t = time.time()
r = e6_identity_check(entry_bound=2)
print(f"search over {r.search.free_parameters} free parameters, {r.search.candidates} candidates, "
      f"{time.time() - t:.2f} s, exhaustive: {r.search.complete}")
print(f"{len(r.invariants)} invariants found")

# The exceptional one pairs 0-6, 3-7 and 4-10.
cat = su2_level_k(10)
Z = r.e6
blocks = sorted({tuple(sorted(int(j) for j in range(11) if Z[i, j])) for i in range(11) if Z[i].any()})
print("E6 blocks:", blocks)
print(f"sum_lam d_lam Z_lam0 = {r.vacuum_sum:.12f}   3 + sqrt 3 = {3 + math.sqrt(3):.12f}")
print("d_6 =", round(cat.dims[6], 12), "(the vacuum block is 0 + 6, so the sum is 1 + d_6)")
