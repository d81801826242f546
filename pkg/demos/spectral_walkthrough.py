"""Pages of the smoothness spectral sequence on the 4-cycle a-x-b-y."""
from magnihom import FiniteMetricSpace, convergence_check, homology
from magnihom.spectral import e_infinity_02_quotient

m = FiniteMetricSpace([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]], ["a", "x", "b", "y"])
a, b = 0, 2
for ell in (2, 4):
    rep = convergence_check(m, ell, a, b, max_n=3)
    print(f"l = {ell}")
    for page in rep.pages:
        nonzero = {k: page.group(*k) for k in sorted(page.entries) if not page.group(*k).is_zero}
        print(f"  E^{page.r}:", {f"{p},{q}": str(h) for (p, q), h in nonzero.items()} or "0")
    for row in rep.rows:
        print(f"  n={row['n']}: E^inf ranks {row['e_inf_ranks']}, H = {row['direct']}")
    print("  E^inf_{0,2} from chains:", e_infinity_02_quotient(m, ell, a, b),
          " H_2:", homology(m, 2, ell, a, b))
