"""
Cleavages, closedness and the fibred nerve
==========================================

Two small fibrations over ordinals.  STAIR has a single cleavage and it
is closed.  LOOP3 has four; for the non-closed one the cleaved nerve
picks up a spurious loop.
"""

from cofibred import corpus
from cofibred.fibration import certify_fibration, enumerate_cleavages
from cofibred.homology import simplicial_homology
from cofibred.nerves import cleaved_nerve, fibred_nerve
from cofibred.simplicial import diagonal, nerve

# STAIR: [2] -> [1], 1 and 2 both go to 1
p = corpus.stair()
cert = certify_fibration(p)
print(cert.kind)
for c in enumerate_cleavages(cert):
    print(sorted(a for a in c.arrows if not p.dom.is_identity(a)), "closed:", c.is_closed)

# LOOP3 has 2 ≅ 3 over the top object, so lifts into the top fiber can
# land on either copy
q = corpus.loop3()
cert = certify_fibration(q)
cleavages = list(enumerate_cleavages(cert))
print(len(cleavages), "normal cleavages")
for c in cleavages:
    print("  lift(0, 0->2) =", c.lift[(0, (0, 2))], " lift(1, 1->2) =", c.lift[(1, (1, 2))],
          " closed:", c.is_closed)

# The one containing 0->3 and 1->2 is not closed: 1->2 after 0->1 is 0->2
bad = corpus.loop3_bad_cleavage(cert)
D = 3
dNc = diagonal(cleaved_nerve(bad, D))
dNf = diagonal(fibred_nerve(cert, D))
NE = nerve(q.dom, D)
for label, X in [("N E", NE), ("d N_f E", dNf), ("d N_c E", dNc)]:
    print(f"{label:8s}", [str(simplicial_homology(X, k)) for k in range(D)])
