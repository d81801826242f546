"""The cube's 1-skeleton: geodesics between opposite corners, one geodesic
class, and the invariant nu_f detecting a nonzero class on vertex chains."""
import random
from fractions import Fraction

from magnihom import FormalSum, boundary, chain_boundary, enumerate_geodesics, nu_f, pi0_geodesics
from magnihom.graph import cube_graph

g = cube_graph(1)
V = lambda i: g.vertex(i - 1)  # noqa: E731
a, b = V(1), V(8)

paths = enumerate_geodesics(g, a, b)
print(f"{len(paths)} geodesics from 1 to 8:")
for p in paths:
    print("  ", "-".join(g.labels[v] for v in p.vertices(g)))
print("geodesic classes:", len(pi0_geodesics(g, a, b).classes))

f = next(p for p in paths if p.vertices(g) == [0, 1, 6, 7])
terms = [((2, 7), 1), ((3, 7), -1), ((3, 5), 1), ((4, 5), -1), ((4, 6), 1), ((2, 6), -1)]
gamma = FormalSum(((a, V(x), V(y), b), k) for (x, y), k in terms)
print("gamma is a cycle:", not boundary(gamma, g.distance))
for (x, y), k in terms:
    part = nu_f(g, f, FormalSum.of((a, V(x), V(y), b)))
    print(f"  {k:+d} <1,{x},{y},8>  contributes {k * part:+d}")
print("nu_f(gamma) =", nu_f(g, f, gamma))

# nu_f vanishes on boundaries, so gamma is not one
rng = random.Random(0)
pool = [g.vertex(i) for i in range(8)] + [g.point(k, Fraction(1, 3)) for k in range(12)]
seen = 0
while seen < 5:
    x, y, z = rng.sample(pool, 3)
    c = (a, x, y, z, b)
    if len(set(c)) == 5 and sum(g.distance(u, v) for u, v in zip(c, c[1:])) == 3:
        print("nu_f(boundary of", ",".join(g.name(p) for p in c) + ") =",
              nu_f(g, f, chain_boundary(c, g.distance)))
        seen += 1
