"""
Diagrams of categories and the homotopy colimit
===============================================

A diagram F: B -> Cat gives two bisimplicial sets, the cleaved nerve of
its Grothendieck construction and the Bousfield-Kan hc of N F.  They
agree levelwise.
"""

from cofibred import corpus
from cofibred.homology import eilenberg_zilber_check
from cofibred.nerves import cleaved_to_hc, kbar
from cofibred.simplicial import codiagonal

for name, F in corpus.diagrams().items():
    f, nc, H = cleaved_to_hc(F, 3)
    table = [[len(nc.level(m, n)) for n in range(4 - m)] for m in range(4)]
    print(f"{name:12s} iso: {f.is_levelwise_bijection()}  sizes {table}")

# codiagonal of N_c against the nerve of the total category
F = corpus.circ_collapse_diagram()
f, nc, H = cleaved_to_hc(F, 3)
cK = codiagonal(nc)
print("kbar is a bijection:", kbar(nc, cK).is_levelwise_bijection())

# Tot and the diagonal have the same homology
res = eilenberg_zilber_check(nc)
for k, (tot, diag) in res["degrees"].items():
    print(f"H{k}: Tot {tot}, diagonal {diag}")
