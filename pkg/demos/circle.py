"""A circle of circumference 2L as two arcs between antipodal points a and a'."""
from fractions import Fraction

from magnihom import (AdmissibleSet, boundary, build_gamma_cycle, enumerate_geodesics,
                      h2_rank_geodesic, nonbranching_rank, pi0_geodesics)
from magnihom.graph import circle_graph, path_tree

L = 3
c = circle_graph(L)
A, B = c.vertex(0), c.vertex(1)
print("d(a, a') =", c.distance(A, B))
print("geodesics:", len(enumerate_geodesics(c, A, B)),
      "classes:", len(pi0_geodesics(c, A, B).classes),
      "rank H^L_2(a, a'):", h2_rank_geodesic(c, A, B))

for q in (1, 2, 3):
    print(f"l = {q}L: rank over anchor chains starting at a =",
          nonbranching_rank(c, q * L, q, [A, B], start=A))

# a Gamma-cycle for q = 2: stretches a -> a' -> a with one point per arc in each;
# the second pair sits farther from a' than the first sits from a
frame = [A, B, A]
half = Fraction(1, 2)
adm = AdmissibleSet([(c.point(0, 1), c.point(1, 1)), (c.point(0, half), c.point(1, half))])
gamma = build_gamma_cycle(c, frame, adm)
for chain, k in gamma.items():
    print(f"  {k:+d}", "<" + ", ".join(c.name(p) for p in chain) + ">")
print("boundary is zero:", not boundary(gamma, c.distance))
print("swapping a slot negates:", build_gamma_cycle(c, frame, adm.swapped(0)) == -gamma)

t = path_tree([1, 2, Fraction(1, 2)])
verts = [t.vertex(i) for i in range(4)]
print("tree ranks for l = 1..6, q = 1..3:",
      {nonbranching_rank(t, ell, q, verts) for ell in range(1, 7) for q in (1, 2, 3)})
