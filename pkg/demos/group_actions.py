"""
Group actions, twisted products and a spectral sequence
=======================================================

Z/2 acts on CIRC (two parallel arrows x -> y) by swapping the arrows.
The Grothendieck construction of the action is a splitting fibration
over the one-object category Z/2.
"""

from cofibred import corpus
from cofibred.fibration import grothendieck
from cofibred.homology import (Bicomplex, coefficient_homology, fiber_homology_module,
                               simplicial_homology, spectral_sequence)
from cofibred.nerves import cleaved_nerve, cleaved_to_tcp
from cofibred.simplicial import nerve

F = corpus.swap_action_on_circ()
p, c = grothendieck(F)
print(p.dom, "->", p.cod)

# diagonal of the cleaved nerve against the twisted cartesian product
f, dN, T = cleaved_to_tcp(F, 3)
print("sizes", dN.sizes(), T.sizes(), "bijective:", f.is_levelwise_bijection())

# group homology of Z/2, the classical answer
BG = nerve(corpus.z2(), 5)
print("H_*(Z/2) =", [str(simplicial_homology(BG, k)) for k in range(5)])

# H_1 of the fiber, as a Z/2-module: the swap acts by -1
A = fiber_homology_module(c, 1, cap=4)
print("action on H_1(CIRC):", A.maps[1])
print("H_*(Z/2; H_1) =", [str(g) for g in coefficient_homology(A.category, A, cap=4)])

# spectral sequence over F2 and over Q
B = Bicomplex(cleaved_nerve(c, 4))
for k in ("F2", "Q"):
    ss = spectral_sequence(B, k)
    print(k, "E2:", {mn: v for mn, v in sorted(ss.page(2).items()) if v})
    print(k, "collapses at", ss.collapses_at(), "totals", ss.total)

print("H_*(total) =", [str(simplicial_homology(nerve(p.dom, 4), k)) for k in range(4)])
