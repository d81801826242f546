"""Direct homology of random finite metric spaces next to the A(a, b),
B^l(a, b) and spectral-sequence models."""
from collections import Counter

from magnihom import homology, random_metric
from magnihom.oracles import all_oracle_rows

m = random_metric(5, 7)
print("labels:", m.labels)
for row in m.dist:
    print("  ", " ".join(f"{str(x):>3}" for x in row))

rows = all_oracle_rows(m, max_n=3)
tally = Counter((r["oracle"], r["match"]) for r in rows)
for (name, ok), k in sorted(tally.items()):
    print(f"{name:9} {'match' if ok else 'MISMATCH'}: {k}")

nonzero = [r for r in rows if r["oracle"] == "B" and r["direct"]["rank"]]
for r in nonzero[:5]:
    print(f"H^{r['length']}_2({r['a']}, {r['b']}) has rank {r['direct']['rank']}")
print("H^2_2(0, 1):", homology(m, 2, 2, 0, 1))
