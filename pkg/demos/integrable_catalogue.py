"""Screen quadratic maps with three matched F-point pairs.

For every m-set the secular polynomial det(Lambda) is expanded, the equal-m
rows are aggregated where the coefficients allow it, and the result is
classified exactly by cyclotomic trial division.  Rows with polynomial or
bounded growth are the candidates for integrable families; larger m values
mostly leave the unit circle.
"""

from collections import Counter

from cremona.recurrence import enumerate_candidates, stratum_dimension

rows = enumerate_candidates(n=2, sigma1=3, m_max=4)
print(f"{len(rows)} m-sets, each a stratum of dimension {stratum_dimension(3)} among quadratic maps\n")
print(f"{'m':>9}  {'class':<12} {'aggregated polynomial'}")
for c in rows:
    g = c.growth
    cls = g.cls if g.cls != "Polynomial" else f"k^{g.degree}"
    print(f"{str(c.ms):>9}  {cls:<12} {c.reduced_poly}")
print()
print(Counter(c.growth.cls for c in rows))
