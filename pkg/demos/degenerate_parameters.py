"""Why lambda = 2, d = 1 is a special member of the first example's family.

For generic (lambda, d) the conjugated cubic has five ordinary F-points and
d(k) = k + 2 for k >= 1.  When 1 - lambda + d = 0 two of them collide, one
becomes infinitely near, and the degree sequence changes to 1,3,3,5,5,...
"""

from cremona import analyze
from cremona.errors import InfinitelyNearSuspected
from cremona.mapcore import degrees_within_budget
from cremona.parsing import load_fixture

generic = load_fixture("ex1_phi3_generic")
print("generic parameters:", generic.parameters)
rep = analyze(generic, kmax=12)
print("  minimal recurrence:", rep.minimal)
print("  d(k):", rep.forward.d)
print("  closed form:", rep.closed, f"(k >= {rep.closed.start})")

special = load_fixture("ex1_phi3")
print("\nspecial parameters:", special.parameters)
print("  oracle d(k):", list(degrees_within_budget(special.birat_map(), 600, kmax=12)))
try:
    analyze(special)
except InfinitelyNearSuspected as exc:
    print("  base-point analysis:", exc)
