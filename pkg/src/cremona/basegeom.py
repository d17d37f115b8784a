"""Fundamental points, principal curves and the characteristic numbers of
a plane Cremona map, with the Noether relations as hard checks."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    InfinitelyNearSuspected,
    IrrationalBasePoint,
    MissingFactor,
    NoetherViolation,
    UnassignedFactor,
)
from .mapcore import BiratMap, jacobian
from .polyring import HomPoly, ProjPoint, compose, factor, gcd, gcd_many, multiplicity_at

log = logging.getLogger(__name__)

SAMPLE_SEED = 20240611


@dataclass(frozen=True)
class BasePoint:
    coords: ProjPoint
    mult: int
    index: int

    def __str__(self) -> str:
        return f"O_{self.index}{self.coords} mult {self.mult}"


@dataclass(frozen=True)
class Characteristic:
    n: int
    mults: tuple[int, ...]

    def __str__(self) -> str:
        return "{" + f"{self.n}; " + ",".join(map(str, self.mults)) + "}"


@dataclass(frozen=True)
class PrincipalCurve:
    """A curve ``{poly = 0}`` blown down by the map onto ``target``."""

    poly: HomPoly
    target: BasePoint
    components: int = 1

    @property
    def degree(self) -> int:
        return self.poly.degree


@dataclass(frozen=True)
class CharMatrix:
    """Characteristic numbers ``i_ab`` = multiplicity of ``J_b`` at ``O_a``.

    ``nu_inv[b]`` counts the components of ``J_b``; ``nu_fwd[a]`` those of
    the inverse map's principal curve through ``O_a``.
    """

    entries: tuple[tuple[int, ...], ...]
    i_fwd: tuple[int, ...]
    i_inv: tuple[int, ...]
    nu_inv: tuple[int, ...]
    nu_fwd: tuple[int, ...]

    def __getitem__(self, a):
        return self.entries[a]

    def __len__(self) -> int:
        return len(self.entries)

    def column(self, b: int) -> list[int]:
        return [row[b] for row in self.entries]

    def verify(self, n: int) -> None:
        """Raise :class:`NoetherViolation` naming the first failed identity."""
        i, j, e = self.i_fwd, self.i_inv, self.entries
        _check_sums(n, i, "forward")
        _check_sums(n, j, "inverse")
        sa, sb = len(i), len(j)
        for b in range(sb):
            col = self.column(b)
            nu = self.nu_inv[b]
            if sum(col) != 3 * j[b] - nu:
                raise NoetherViolation(f"column sum for J_{b + 1}: {sum(col)} != 3*{j[b]} - {nu}")
            if sum(i[a] * col[a] for a in range(sa)) != j[b] * n:
                raise NoetherViolation(f"weighted column sum for J_{b + 1} != {j[b]}*{n}")
            for c in range(sb):
                other = self.column(c)
                lhs = sum(col[a] * other[a] for a in range(sa))
                rhs = j[b] * j[c] + (nu if b == c else 0)
                if lhs != rhs:
                    raise NoetherViolation(f"column products ({b + 1},{c + 1}): {lhs} != {rhs}")
        for a in range(sa):
            row = e[a]
            nu = self.nu_fwd[a]
            if sum(row) != 3 * i[a] - nu:
                raise NoetherViolation(f"row sum for O_{a + 1}: {sum(row)} != 3*{i[a]} - {nu}")
            if sum(j[b] * row[b] for b in range(sb)) != i[a] * n:
                raise NoetherViolation(f"weighted row sum for O_{a + 1} != {i[a]}*{n}")
            for c in range(sa):
                lhs = sum(row[b] * e[c][b] for b in range(sb))
                rhs = i[a] * i[c] + (nu if a == c else 0)
                if lhs != rhs:
                    raise NoetherViolation(f"row products ({a + 1},{c + 1}): {lhs} != {rhs}")


@dataclass(frozen=True)
class LscInvariants:
    grade: int
    virtual_genus: int
    genus: int
    virtual_dim: int
    dim: int
    superabundance: int
    components: int
    breakup: int


@dataclass(frozen=True)
class BaseData:
    """Everything the orbit decomposition and the recurrence need.

    ``curves[b]`` is ``J_b`` (blown down onto ``inv_points[b]``) and
    ``inv_curves[a]`` is the inverse map's curve blown down onto ``points[a]``.
    """

    n: int
    points: tuple[BasePoint, ...]
    inv_points: tuple[BasePoint, ...]
    curves: tuple[PrincipalCurve, ...]
    inv_curves: tuple[PrincipalCurve, ...]
    matrix: CharMatrix
    characteristic: Characteristic = field(default=None)


def _check_sums(n: int, mults: Sequence[int], side: str) -> None:
    if sum(mults) != 3 * (n - 1):
        raise NoetherViolation(f"{side}: sum of multiplicities {sum(mults)} != 3(n-1) = {3 * (n - 1)}")
    if sum(m * m for m in mults) != n * n - 1:
        raise NoetherViolation(
            f"{side}: sum of squared multiplicities {sum(m * m for m in mults)} != n^2-1 = {n * n - 1}"
        )
    if n > 1 and len(mults) > 2 * n - 1:
        raise NoetherViolation(f"{side}: {len(mults)} F-points exceed the bound 2n-1 = {2 * n - 1}")


# -- base points ------------------------------------------------------------


def _random_combination(triple, rng) -> HomPoly:
    return sum((p * rng.randint(-97, 97) for p in triple[1:]), triple[0] * rng.randint(1, 97))


def _random_frame(rng) -> list[list[int]]:
    while True:
        t = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        det = (
            t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1])
            - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
            + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])
        )
        if det:
            return t


def _rational_roots_binary(f: HomPoly, keep: int) -> tuple[list[tuple[Fraction, Fraction]], list[HomPoly]]:
    """Roots of a binary form in the two variables other than ``z_{drop}``.

    ``keep`` is the pair of variable indices (as a 2-tuple) carrying ``f``.
    Returns rational roots and the irreducible factors of degree > 1.
    """
    a_idx, b_idx = keep
    if f.is_constant():
        return [], []
    _, facs = factor(f)
    roots, residual = [], []
    for h, _ in facs:
        if h.degree == 1:
            t = h.terms
            ca = t.get(tuple(1 if k == a_idx else 0 for k in range(3)), Fraction(0))
            cb = t.get(tuple(1 if k == b_idx else 0 for k in range(3)), Fraction(0))
            # ca*x_a + cb*x_b = 0  ->  (x_a : x_b) = (cb : -ca)
            roots.append((cb, -ca))
        else:
            residual.append(h)
    return roots, residual


def _common_zeros(triple: Sequence[HomPoly], seed: int) -> list[ProjPoint]:
    n = triple[0].degree if not triple[0].is_zero() else next(p.degree for p in triple if not p.is_zero())
    if n <= 1:
        return []
    rng = random.Random(seed)
    for _attempt in range(8):
        t = _random_frame(rng)
        frame = [HomPoly.linear(*t[i]) for i in range(3)]
        psi = [compose(p, frame) for p in triple]
        a, b, c = (_random_combination(psi, rng) for _ in range(3))
        if a.terms.get((n, 0, 0), 0) == 0 or b.terms.get((n, 0, 0), 0) == 0 or c.terms.get((n, 0, 0), 0) == 0:
            continue
        r1 = HomPoly._wrap(a.flint.resultant(b.flint, "z1"))
        r2 = HomPoly._wrap(a.flint.resultant(c.flint, "z1"))
        g = gcd(r1, r2)
        roots, residual = _rational_roots_binary(g, (1, 2))
        if residual:
            raise IrrationalBasePoint(residual[0])
        points = []
        ok = True
        for w2, w3 in roots:
            line = [HomPoly.var(0), HomPoly.var(2) * w2, HomPoly.var(2) * w3]
            fiber = gcd_many([compose(p, line) for p in psi])
            z_roots, z_res = _rational_roots_binary(fiber, (0, 2))
            if z_res:
                raise IrrationalBasePoint(z_res[0])
            if len(z_roots) != 1:
                ok = False  # two base points on one projection line; retry in a new frame
                break
            w1, s = z_roots[0]
            w = (w1, w2 * s, w3 * s)
            z = [sum(Fraction(t[i][k]) * w[k] for k in range(3)) for i in range(3)]
            points.append(ProjPoint(z))
        if ok and len(set(points)) == len(points):
            return points
    raise RuntimeError("could not find a generic projection for the base locus")


def point_multiplicity(triple: Sequence[HomPoly], point: ProjPoint, seed: int = SAMPLE_SEED) -> int:
    """Multiplicity of a point on the net spanned by ``triple``."""
    m = min(multiplicity_at(p, point) for p in triple if not p.is_zero())
    generic = multiplicity_at(_random_combination(list(triple), random.Random(seed)), point)
    if generic != m:
        log.warning("generic multiplicity %d disagrees with component minimum %d at %s", generic, m, point)
        return generic
    return m


def find_base_points(
    triple: Sequence[HomPoly],
    hints: Sequence[ProjPoint] | None = None,
    seed: int = SAMPLE_SEED,
) -> list[BasePoint]:
    """All rational common zeros of a coprime triple with their multiplicities.

    ``hints`` fixes the labelling: hinted points come first, in order.  Every
    hint is verified to be a base point.  Raises :class:`IrrationalBasePoint`
    or :class:`InfinitelyNearSuspected` when the Noether sums fail.
    """
    triple = list(triple)
    n = next(p.degree for p in triple if not p.is_zero())
    found = _common_zeros(triple, seed)
    ordered: list[ProjPoint] = []
    for h in hints or ():
        h = ProjPoint(h)
        if any(p(h.coords) != 0 for p in triple):
            raise ValueError(f"hinted point {h} is not a common zero of the triple")
        if h not in found:
            raise ValueError(f"hinted point {h} was not found among the base points")
        ordered.append(h)
    mults = {p: point_multiplicity(triple, p, seed) for p in found}
    rest = sorted((p for p in found if p not in ordered), key=lambda p: (-mults[p], p.coords))
    points = [BasePoint(p, mults[p], k + 1) for k, p in enumerate(ordered + rest)]
    ms = [bp.mult for bp in points]
    if sum(ms) != 3 * (n - 1) or sum(m * m for m in ms) != n * n - 1:
        raise InfinitelyNearSuspected(
            points,
            f"rational base points give sum {sum(ms)} (want {3 * (n - 1)}) and square sum "
            f"{sum(m * m for m in ms)} (want {n * n - 1}); the map probably has infinitely near "
            "F-points -- conjugate it to a map with ordinary F-points first",
        )
    return points


def characteristic_of(points: Sequence[BasePoint | int], n: int) -> Characteristic:
    mults = tuple(sorted((p.mult if isinstance(p, BasePoint) else int(p) for p in points), reverse=True))
    _check_sums(n, mults, "characteristic")
    return Characteristic(n, mults)


# -- principal curves ---------------------------------------------------------


def blows_down_to(triple: Sequence[HomPoly], curve: HomPoly, point: ProjPoint) -> bool:
    """True when ``triple`` maps the generic point of ``{curve = 0}`` to ``point``.

    Checked exactly: ``curve`` must divide every 2x2 minor of (triple, point).
    """
    p = point.coords
    for i in range(3):
        for j in range(i + 1, 3):
            minor = triple[i] * p[j] - triple[j] * p[i]
            if not minor.is_zero() and not curve.divides(minor):
                return False
    return True


def sample_curve_points(line: HomPoly, count: int = 3, seed: int = SAMPLE_SEED) -> list[ProjPoint]:
    """Random rational points on a line (used for the sampled blow-down test)."""
    rng = random.Random(seed)
    t = line.terms
    a, b, c = (t.get(e, Fraction(0)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    u = (b, -a, Fraction(0)) if (a or b) else (Fraction(1), Fraction(0), Fraction(0))
    v = (c, Fraction(0), -a) if (a or c) else (Fraction(0), Fraction(1), Fraction(0))
    if a == 0:
        u, v = (Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), c, -b)
    pts = []
    while len(pts) < count:
        s, r = rng.randint(-50, 50), rng.randint(-50, 50)
        xyz = tuple(s * u[i] + r * v[i] for i in range(3))
        if any(xyz):
            pts.append(ProjPoint(xyz))
    return pts


def principal_curves(
    m: BiratMap,
    fwd_points: Sequence[BasePoint],
    inv_points: Sequence[BasePoint],
    hints: Sequence[HomPoly] | None = None,
) -> list[PrincipalCurve]:
    """Principal curves of ``m``, one per inverse F-point, in ``inv_points`` order.

    The Jacobian is factored over Q and every irreducible factor is assigned
    to the inverse F-point it blows down to.  ``hints`` are extra candidate
    curves; each must divide the Jacobian and blow down to an F-point.
    """
    jac = jacobian(m)
    _, facs = factor(jac)
    candidates = [(h, e) for h, e in facs if h.degree > 0]
    for h in hints or ():
        h = h.primitive()
        if not h.divides(jac):
            raise UnassignedFactor(f"hinted curve {h} does not divide the Jacobian")
        if not any(h == c for c, _ in candidates):
            candidates.append((h, 1))
    assigned: dict[int, list[tuple[HomPoly, int]]] = {b: [] for b in range(len(inv_points))}
    for h, e in candidates:
        targets = [b for b, pt in enumerate(inv_points) if blows_down_to(m.forward, h, pt.coords)]
        if not targets:
            raise UnassignedFactor(f"Jacobian factor {h} is not blown down onto any inverse F-point")
        assigned[targets[0]].append((h, e))
    curves = []
    for b, pt in enumerate(inv_points):
        parts = assigned[b]
        if not parts:
            raise MissingFactor(f"no principal curve found for O^(-1)_{pt.index} = {pt.coords}")
        poly = HomPoly.constant(1)
        for h, e in parts:
            poly = poly * h ** e
        poly = poly.primitive()
        if poly.degree != pt.mult:
            raise NoetherViolation(
                f"principal curve {poly} for O^(-1)_{pt.index} has degree {poly.degree}, expected {pt.mult}"
            )
        curves.append(PrincipalCurve(poly, pt, components=len(parts)))
    return curves


def char_matrix(
    fwd_points: Sequence[BasePoint],
    inv_curves: Sequence[PrincipalCurve],
    n: int,
    fwd_curves: Sequence[PrincipalCurve] | None = None,
    inv_points: Sequence[BasePoint] | None = None,
) -> CharMatrix:
    """Build ``i_ab`` and verify every Noether relation.

    ``inv_curves`` are the ``J_b``.  When the inverse map's curves and
    F-points are supplied too, the symmetry ``i_ab = i^(-1)_ba`` is checked
    and their component counts enter the row relations.
    """
    entries = tuple(
        tuple(multiplicity_at(c.poly, p.coords) for c in inv_curves) for p in fwd_points
    )
    nu_fwd = tuple(c.components for c in fwd_curves) if fwd_curves else (1,) * len(fwd_points)
    cm = CharMatrix(
        entries=entries,
        i_fwd=tuple(p.mult for p in fwd_points),
        i_inv=tuple(c.target.mult for c in inv_curves),
        nu_inv=tuple(c.components for c in inv_curves),
        nu_fwd=nu_fwd,
    )
    if fwd_curves is not None and inv_points is not None:
        for a, ca in enumerate(fwd_curves):
            for b, pb in enumerate(inv_points):
                sym = multiplicity_at(ca.poly, pb.coords)
                if sym != entries[a][b]:
                    raise NoetherViolation(f"symmetry i_{a + 1}{b + 1} = {entries[a][b]} but i^(-1)_{b + 1}{a + 1} = {sym}")
    cm.verify(n)
    return cm


def lsc_invariants(mu: int, mults: Sequence[int], s: int = 0, c: int = 1, nu: int = 1) -> LscInvariants:
    """Grade, genus and dimension of a linear system of degree ``mu``."""
    if mu < 1:
        raise ValueError("degree must be positive")
    D = mu * mu - sum(r * r for r in mults)
    P = (mu - 1) * (mu - 2) // 2 - sum(r * (r - 1) // 2 for r in mults)
    K = mu * (mu + 3) // 2 - sum(r * (r + 1) // 2 for r in mults)
    return LscInvariants(D, P, P + c - 1, K, K + s, s, c, nu)


def analyze_base(
    m: BiratMap,
    point_hints: Sequence[ProjPoint] | None = None,
    inv_point_hints: Sequence[ProjPoint] | None = None,
    curve_hints: Sequence[HomPoly] | None = None,
) -> BaseData:
    """Run the whole base-geometry pipeline on a validated map."""
    n = m.n
    points = find_base_points(m.forward, point_hints)
    inv_points = find_base_points(m.inverse, inv_point_hints)
    curves = principal_curves(m, points, inv_points, curve_hints)
    inv_curves = principal_curves(m.inverse_map(), inv_points, points)
    matrix = char_matrix(points, curves, n, fwd_curves=inv_curves, inv_points=inv_points)
    return BaseData(
        n=n,
        points=tuple(points),
        inv_points=tuple(inv_points),
        curves=tuple(curves),
        inv_curves=tuple(inv_curves),
        matrix=matrix,
        characteristic=characteristic_of(points, n),
    )
