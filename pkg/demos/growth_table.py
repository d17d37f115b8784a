"""Degree growth measured twice: by iterating the map and by the recursion.

The oracle composes the map with itself and cancels common factors (switching
to a line-restriction count modulo large primes once degrees get big).  The
recursion only needs the F-point data.  Both columns should agree, and the
ratio d(k+1)/d(k) approaches the dominant root of the secular polynomial.
"""

import math

from cremona import analyze
from cremona.mapcore import degrees_within_budget
from cremona.parsing import load_fixture

for name in ("ex4", "ex2_star", "ex3"):
    mf = load_fixture(name)
    rep = analyze(mf, kmax=14)
    oracle = degrees_within_budget(mf.birat_map(), budget=2000, kmax=14)
    print(f"{name}: {rep.growth.describe()}")
    print(f"  {'k':>3} {'oracle':>8} {'recursion':>10} {'ratio':>8}  method")
    for k, (a, meth) in enumerate(zip(oracle.values, oracle.methods)):
        b = rep.forward.d[k]
        ratio = "" if k == 0 else f"{b / rep.forward.d[k - 1]:.4f}"
        print(f"  {k:>3} {a:>8} {b:>10} {ratio:>8}  {meth}")
    if rep.growth.entropy is not None:
        print(f"  entropy log(root) = {rep.growth.entropy:.12f}, exp = {math.exp(rep.growth.entropy):.12f}")
    print()
