"""End-to-end analysis of one map: base geometry, orbit decomposition,
recurrences, growth and the independent degree oracle, with every exact
consistency check recorded."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .basegeom import BaseData, analyze_base, lsc_invariants
from .mapcore import DEFAULT_BUDGET, BiratMap, DegreeSequence, ValidationReport, degrees_within_budget, validate
from .orbits import DEFAULT_HORIZON, Decomposition, decompose, verify_pairs
from .parsing import MapFile
from .polyring import to_string
from .recurrence import (
    ClosedForm,
    DynamicsData,
    ForwardRun,
    GrowthReport,
    Recurrence,
    classify_growth,
    closed_form,
    forward_d,
    lumped_secular,
    minimal_recurrence,
    recurrence_check,
    secular,
)

DEFAULT_KMAX = 20


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AnalysisReport:
    name: str
    validation: ValidationReport
    base: BaseData
    decomposition: Decomposition
    data: DynamicsData
    secular: Recurrence
    lumped: Recurrence
    minimal: Recurrence
    growth: GrowthReport
    closed: ClosedForm | None
    forward: ForwardRun
    oracle: DegreeSequence
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def caveats(self) -> list[str]:
        dec = self.decomposition
        out = []
        for label, tags in (("O", dec.classes), ("O^(-1)", dec.inv_classes)):
            for k, t in sorted(tags.items()):
                if t == "inf":
                    out.append(f"{label}_{k} unresolved within horizon {dec.horizon}")
                elif t == "anomalous":
                    out.append(f"{label}_{k} orbit blocked without a match")
        return out

    @property
    def exit_code(self) -> int:
        if self.violations:
            return 1
        return 2 if self.caveats else 0

    @property
    def agreement(self) -> int:
        """Largest k such that the oracle and the forward recursion agree on 0..k."""
        k = -1
        for a, b in zip(self.oracle, self.forward.d):
            if a != b:
                break
            k += 1
        return k

    def to_dict(self) -> dict:
        b = self.base
        dec = self.decomposition

        def pts(ps):
            return [{"index": p.index, "coords": [str(c) for c in p.coords.coords], "mult": p.mult} for p in ps]

        def rec(r: Recurrence):
            return {
                "order": r.order,
                "coefficients": list(r.coefficients),
                "char_poly": str(r.char_poly),
                "equation": str(r),
            }

        out = {
            "name": self.name,
            "validation": {
                "degree": self.validation.n,
                "cofactor_degree": self.validation.cofactor_degree,
            },
            "characteristic": str(b.characteristic),
            "points": pts(b.points),
            "inverse_points": pts(b.inv_points),
            "principal_curves": [{"curve": to_string(c.poly), "degree": c.degree, "target": c.target.index} for c in b.curves],
            "char_matrix": [list(r) for r in b.matrix.entries],
            "decomposition": {
                "pairs": [list(p) for p in dec.pair_tuples()],
                "classes": {str(k): v for k, v in sorted(dec.classes.items())},
                "inverse_classes": {str(k): v for k, v in sorted(dec.inv_classes.items())},
                "horizon": dec.horizon,
            },
            "recurrence": {
                "secular": rec(self.secular),
                "lumped": rec(self.lumped),
                "minimal": rec(self.minimal),
            },
            "growth": self.growth.to_dict(),
            "closed_form": str(self.closed) if self.closed is not None else None,
            "degrees": {
                "forward": self.forward.d,
                "oracle": list(self.oracle),
                "oracle_methods": list(self.oracle.methods),
                "agreement": self.agreement,
            },
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "caveats": self.caveats,
            "exit_code": self.exit_code,
        }
        if self.forward.diagnostics:
            out["diagnostics"] = {str(a): g for a, g in sorted(self.forward.diagnostics.items())}
        return out

    def summary(self) -> str:
        b = self.base
        lines = [
            f"map {self.name or '(unnamed)'}: degree {self.validation.n}, characteristic {b.characteristic}",
            "i_ab matrix: " + " ".join("".join(str(x) for x in r) for r in b.matrix.entries),
            f"pairs (alpha, beta, m): {self.decomposition.pair_tuples()}",
            f"det(Lambda) = {self.secular.char_poly}",
            f"aggregated: {self.lumped.char_poly}",
            f"minimal: {self.minimal}",
            f"growth: {self.growth.describe()}",
        ]
        if self.closed is not None:
            tail = f" for k >= {self.closed.start}" if self.closed.start else ""
            lines.append(f"d(k) = {self.closed}{tail}")
        lines.append(f"d(k): {self.forward.d}")
        lines.append(f"oracle agrees for k <= {self.agreement} ({len(self.oracle)} terms)")
        for c in self.checks:
            lines.append(f"[{'ok' if c.passed else 'FAIL'}] {c.name}{': ' + c.detail if c.detail else ''}")
        for c in self.caveats:
            lines.append(f"[caveat] {c}")
        return "\n".join(lines)


def analyze(
    source: MapFile | BiratMap,
    horizon: int = DEFAULT_HORIZON,
    budget: int = DEFAULT_BUDGET,
    kmax: int = DEFAULT_KMAX,
    diagnostics: bool = False,
    hints: dict | None = None,
    name: str = "",
) -> AnalysisReport:
    """Run the full pipeline.  Structural errors (not birational, infinitely
    near points, ...) propagate; consistency failures land in ``checks``."""
    t0 = time.perf_counter()
    if isinstance(source, MapFile):
        mf = source
        if hints:
            mf = MapFile.from_dict({**mf.to_dict(), "hints": {**mf.hints, **hints}})
        m = mf.birat_map()
        ph, iph, ch = mf.point_hints(), mf.inverse_point_hints(), mf.curve_hints()
        name = name or mf.name
    else:
        m, ph, iph, ch = source, None, None, None
    checks: list[Check] = []
    val = validate(m)
    checks.append(Check("round trip", True, f"cofactor degree {val.cofactor_degree}"))
    base = analyze_base(m, ph, iph, ch)
    checks.append(Check("Noether relations", True, "sums, column and row relations, symmetry"))
    n = m.n
    for side, pts in (("forward", base.points), ("inverse", base.inv_points)):
        inv = lsc_invariants(n, [p.mult for p in pts]) if n > 1 else None
        ok = inv is None or (inv.grade == 1 and inv.virtual_genus == 0 and inv.virtual_dim == 2)
        checks.append(Check(f"homaloidal net ({side})", ok, "" if inv is None else f"grade {inv.grade}, genus {inv.virtual_genus}, dim {inv.virtual_dim}"))
    dec = decompose(m, base, horizon)
    checks.append(Check("pairs re-evaluated exactly", verify_pairs(m, base, dec.pairs)))

    data = DynamicsData.from_analysis(base, dec)
    sec = secular(data)
    lum = lumped_secular(data)
    run = forward_d(data, max(kmax, 2 * sec.order + 4), diagnostics)
    for label, r in (("det(Lambda)", sec), ("aggregated", lum)):
        ok, bad = recurrence_check(r, run.d)
        checks.append(Check(f"{label} recurrence on d(k)", ok, "" if ok else f"first failure at k={bad}"))
    mini = minimal_recurrence(run.d)
    checks.append(Check("minimal | aggregated | det", mini.char_poly.divides(lum.char_poly) and lum.char_poly.divides(sec.char_poly)))
    growth = classify_growth(mini)

    closed = closed_form(mini, run.d[: mini.order])
    if closed.exact:
        ok = all(closed.evaluate(k) == run.d[k] for k in range(closed.start, len(run.d)))
    else:
        ok = all(abs(closed.evaluate(k) - run.d[k]) <= 1e-6 * max(1, run.d[k]) for k in range(closed.start, min(len(run.d), 30)))
    checks.append(Check("closed form reproduces d(k)", ok, "exact" if closed.exact else "floating point"))

    oracle = degrees_within_budget(m, budget, kmax=len(run.d) - 1)
    agree = all(a == b for a, b in zip(oracle, run.d))
    checks.append(Check("oracle agrees with the recursion", agree, f"k <= {len(oracle) - 1}, budget {budget}"))
    rep = AnalysisReport(name, val, base, dec, data, sec, lum, mini, growth, closed, run, oracle, checks)
    rep.seconds = time.perf_counter() - t0
    return rep
