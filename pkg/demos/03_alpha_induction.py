"""Extend the base labels through a Q-system with both braidings and read off the coupling matrix Z.

Run: python3 demos/03_alpha_induction.py
"""
from lrcat import build_induced_system, ising, pointed_cyclic, su2_level_k, subgroup_qsystem
from lrcat.induction import alpha_induce, hom_dim, ising_fermion_qsystem, pointed_invariant


def show(title, sys):
    print(f"== {title}")
    print("Z =")
    for row in sys.Z.tolist():
        print("   ", row)
    print(f"simples: full {len(sys.full)}, chiral+ {len(sys.chiral_plus)}, "
          f"chiral- {len(sys.chiral_minus)}, ambichiral {len(sys.ambichiral)}")
    ic = sys.identity_chain()
    print("global dimensions and ratios:", {k: round(v, 9) for k, v in ic["values"].items()})


# D4 inside su2 level 4: label 4 has twist 1, the algebra 0 + 4 is commutative, and every ratio
# in the chain equals d_theta = 2. Z has a doubled middle entry.
show("su2_4 with 0+4", build_induced_system(subgroup_qsystem(su2_level_k(4), [0, 4])))

# A Z2 subgroup of Z4. Every nondegenerate form gives the label 2 twist -1, so this algebra is not
# commutative, Z comes out as charge conjugation (agreeing with the direct group count), and
# the ratios collapse to 1 while d_theta stays 2.
cat = pointed_cyclic(4, 1)
q = subgroup_qsystem(cat, [0, 2])
sys = build_induced_system(q)
show("Z4 with subgroup {0, 2}", sys)
print("matches group count:", (sys.Z == pointed_invariant(cat, [0, 2])).all())
print("Hom(a+_1, a-_1) =", hom_dim(alpha_induce(1, 1, q), alpha_induce(-1, 1, q)),
      " Hom(a+_1, a-_3) =", hom_dim(alpha_induce(1, 1, q), alpha_induce(-1, 3, q)))

# Ising with 1 + psi: psi is a fermion, so again nothing local survives and Z is the identity.
show("Ising with 1 + psi", build_induced_system(ising_fermion_qsystem(ising())))
