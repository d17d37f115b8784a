"""From a map with infinitely near F-points to its degree recurrence.

The raw quadratic map of the second example has two F-points sitting on
top of each other, so the base-point analysis refuses it.  Conjugating by
a quadratic map V separates them; the conjugate has only ordinary F-points
and the full pipeline runs.
"""

from cremona import analyze, conjugate, validate
from cremona.errors import InfinitelyNearSuspected
from cremona.parsing import load_fixture, map_to_file

raw = load_fixture("ex2_raw")
print("raw map:", raw.forward)
try:
    analyze(raw)
except InfinitelyNearSuspected as exc:
    print("analysis refused:", exc)

v = load_fixture("ex2_psi").birat_map()
star = conjugate(raw.birat_map(), v)
validate(star)
print("\nconjugate V^-1 o map o V:", map_to_file(star).forward)

rep = analyze(star, name="ex2 conjugated")
print()
print(rep.summary())
