"""Orbits of fundamental points and the decomposition of the F-point sets
into matched pairs, cycles, tails and unresolved (presumably infinite) orbits."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

from .basegeom import BaseData
from .errors import HitsInverseFPoint
from .mapcore import BiratMap
from .polyring import ProjPoint

log = logging.getLogger(__name__)

DEFAULT_HORIZON = 50

Direction = Literal["forward", "inverse"]


@dataclass(frozen=True)
class Matched:
    target: int
    steps: int


@dataclass(frozen=True)
class Cycle:
    """The orbit re-enters itself.  ``entry_offset`` > 0 means the start
    point sits on a tail of that length leading into the cycle."""

    period: int
    entry_offset: int


@dataclass(frozen=True)
class Unresolved:
    horizon: int


@dataclass(frozen=True)
class Blocked:
    """The orbit reached a point where the map is undefined without a match."""

    point: ProjPoint
    steps: int


@dataclass
class OrbitRecord:
    start: int | None
    trajectory: list[ProjPoint]
    status: Matched | Cycle | Unresolved | Blocked
    visits: dict[int, int] = field(default_factory=dict)  # other F-point label -> step
    certified: str = "exact"  # or "modular": event seen modulo both primes only

    @property
    def exact_trajectory(self) -> list[ProjPoint]:
        """The leading part of the trajectory that is known exactly."""
        out = []
        for p in self.trajectory:
            if p is None:
                break
            out.append(p)
        return out


@dataclass(frozen=True)
class Pair:
    alpha: int
    beta: int
    m: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.m)


@dataclass
class Decomposition:
    """Matched pairs sorted by ``m`` plus a class tag for every F-point.

    Tags are ``int``, ``cycle``, ``tails``, ``inf`` (unresolved at the horizon)
    and ``anomalous`` (orbit blocked without a match).
    """

    pairs: list[Pair]
    classes: dict[int, str]
    inv_classes: dict[int, str]
    horizon: int
    records: dict[int, OrbitRecord] = field(default_factory=dict)
    inv_records: dict[int, OrbitRecord] = field(default_factory=dict)

    @property
    def sigma1(self) -> int:
        return len(self.pairs)

    @property
    def unresolved(self) -> bool:
        return any(t == "inf" for t in (*self.classes.values(), *self.inv_classes.values()))

    @property
    def anomalies(self) -> list[str]:
        out = [f"O_{a}" for a, t in self.classes.items() if t == "anomalous"]
        return out + [f"O^(-1)_{b}" for b, t in self.inv_classes.items() if t == "anomalous"]

    def pair_tuples(self) -> list[tuple[int, int, int]]:
        return [p.as_tuple() for p in self.pairs]


MODULI = (2305843009213693951, 4611686018427387847)  # 2^61 - 1 and a 62-bit prime
HEIGHT_CAP = 4096  # bits; exact coordinates are dropped beyond this


def _step(triple, point: ProjPoint) -> ProjPoint:
    vals = tuple(p(point.coords) for p in triple)
    if not any(vals):
        raise HitsInverseFPoint(f"map undefined at {point}")
    return ProjPoint(vals)


def step_inverse(m: BiratMap, point: ProjPoint) -> ProjPoint:
    """One exact step of the inverse map."""
    return _step(m.inverse, point)


def step_forward(m: BiratMap, point: ProjPoint) -> ProjPoint:
    return _step(m.forward, point)


def _height(p: ProjPoint) -> int:
    return max(max(c.numerator.bit_length(), c.denominator.bit_length()) for c in p.coords)


def _mod_point(p: ProjPoint, q: int) -> tuple[int, int, int] | None:
    den = 1
    for c in p.coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coords]
    g = math.gcd(*ints)
    return _mod_normalize([(x // g) % q for x in ints], q)


def _mod_normalize(v, q) -> tuple[int, int, int] | None:
    for x in v:
        if x:
            inv = pow(x, -1, q)
            return tuple(y * inv % q for y in v)
    return None


class _ModTriple:
    """A polynomial triple reduced modulo ``q`` for fast point evaluation."""

    def __init__(self, triple, q: int):
        self.q = q
        self.polys = []
        for p in triple:
            terms = []
            for e, c in p.terms.items():
                if c.denominator % q == 0:
                    raise ValueError(f"modulus {q} divides a coefficient denominator")
                terms.append((e, c.numerator * pow(c.denominator, -1, q) % q))
            self.polys.append(terms)

    def __call__(self, v):
        q = self.q
        return _mod_normalize(
            [sum(c * pow(v[0], e[0], q) * pow(v[1], e[1], q) * pow(v[2], e[2], q) for e, c in terms) % q
             for terms in self.polys],
            q,
        )


class _Walker:
    """Exact orbit while heights stay below the cap, plus residues mod two primes.

    Reduction commutes with evaluation unless the reduced image vanishes,
    which is reported as blocked; so an event absent modulo a prime is
    absent over Q.  Events are confirmed exactly whenever possible.
    """

    def __init__(self, triple, start: ProjPoint, height_cap: int = HEIGHT_CAP):
        self.triple = triple
        self.mods = [_ModTriple(triple, q) for q in MODULI]
        self.exact: ProjPoint | None = start
        self.res = tuple(_mod_point(start, q) for q in MODULI)
        self.cap = height_cap

    def key(self):
        return self.res

    def step(self) -> bool:
        """Advance one step; False when the map is undefined at the point."""
        if self.exact is not None:
            vals = tuple(p(self.exact.coords) for p in self.triple)
            if not any(vals):
                return False
            nxt = ProjPoint(vals)
            self.res = tuple(_mod_point(nxt, q) for q in MODULI)
            self.exact = nxt if _height(nxt) <= self.cap else None
            return True
        res = tuple(f(r) for f, r in zip(self.mods, self.res))
        if any(r is None for r in res):
            # undefined modulo a prime: genuinely undefined or an unlucky prime
            if all(r is None for r in res):
                return False
            raise RuntimeError("modular orbit reduction failed for one prime only")
        self.res = res
        return True

    def same(self, point: ProjPoint, key) -> bool | None:
        """Exact comparison when possible; None means certified modulo primes only."""
        if key != self.res:
            return False
        if self.exact is not None:
            return self.exact == point
        return None


def _keys(points: Mapping[ProjPoint, int]) -> dict:
    return {tuple(_mod_point(p, q) for q in MODULI): (p, lab) for p, lab in points.items()}


def orbit_of(
    m: BiratMap,
    point: ProjPoint,
    direction: Direction = "inverse",
    horizon: int = DEFAULT_HORIZON,
    targets: Mapping[ProjPoint, int] | None = None,
    landmarks: Mapping[ProjPoint, int] | None = None,
    start: int | None = None,
) -> OrbitRecord:
    """Follow ``point`` under the inverse (default) or forward map.

    The walk stops on reaching one of ``targets`` (Matched), on revisiting a
    point (Cycle), where the map is undefined (Blocked) or after ``horizon``
    steps (Unresolved).  Passing through one of ``landmarks`` is recorded.
    The trajectory keeps exact points only while their height stays small.
    """
    triple = m.inverse if direction == "inverse" else m.forward
    tkeys = _keys(targets or {})
    lkeys = _keys(landmarks or {})
    w = _Walker(triple, ProjPoint(point))
    traj = [w.exact]
    seen = {w.key(): 0}
    visits: dict[int, int] = {}
    certified = "exact"
    t = 0
    while True:
        k = w.key()
        if k in tkeys:
            pt, lab = tkeys[k]
            ok = w.same(pt, k)
            if ok is not False:
                certified = "exact" if ok else "modular"
                return OrbitRecord(start, traj, Matched(lab, t), visits, certified)
        if t and k in lkeys and lkeys[k][1] != start and w.same(*lkeys[k]) is not False:
            visits.setdefault(lkeys[k][1], t)
        if t == horizon:
            return OrbitRecord(start, traj, Unresolved(horizon), visits, certified)
        if not w.step():
            return OrbitRecord(start, traj, Blocked(traj[-1], t), visits, certified)
        t += 1
        traj.append(w.exact)
        k = w.key()
        if k in seen:
            first = seen[k]
            if w.exact is None or traj[first] is None or traj[first] == w.exact:
                cert = "exact" if w.exact is not None and traj[first] is not None else "modular"
                return OrbitRecord(start, traj, Cycle(period=t - first, entry_offset=first), visits, cert)
        seen[k] = t


def _tag(rec: OrbitRecord) -> str:
    st = rec.status
    if isinstance(st, Cycle):
        return "cycle" if st.entry_offset == 0 and not rec.visits else "tails"
    if isinstance(st, Unresolved):
        return "tails" if rec.visits else "inf"
    if isinstance(st, Blocked):
        return "anomalous"
    return "int"


def decompose(m: BiratMap, base: BaseData, horizon: int = DEFAULT_HORIZON) -> Decomposition:
    """Iterative refinement of the F-point sets.

    At step k every still-unpaired ``O_a`` is pushed k times through the
    inverse map; landing on a still-unpaired ``O^(-1)_b`` records the pair
    ``(a, b, k)`` and removes both from their pools.  Unpaired points are
    then classified by their orbit records.
    """
    fwd = {bp.coords: bp.index for bp in base.points}
    inv = {bp.coords: bp.index for bp in base.inv_points}
    fkeys, ikeys = _keys(fwd), _keys(inv)
    pool_a = sorted(fwd.values())
    pool_b = set(inv.values())
    walkers = {bp.index: _Walker(m.inverse, bp.coords) for bp in base.points}
    traj: dict[int, list] = {a: [w.exact] for a, w in walkers.items()}
    seen: dict[int, dict] = {a: {w.key(): 0} for a, w in walkers.items()}
    visits: dict[int, dict[int, int]] = {a: {} for a in pool_a}
    done: dict[int, OrbitRecord] = {}
    pairs: list[Pair] = []
    for k in range(horizon + 1):
        if not pool_a:
            break
        for a in list(pool_a):
            w, path = walkers[a], traj[a]
            if k > 0:
                if not w.step():
                    done[a] = OrbitRecord(a, path, Blocked(path[-1], k - 1), visits[a])
                    pool_a.remove(a)
                    continue
                path.append(w.exact)
                key = w.key()
                if key in seen[a]:
                    first = seen[a][key]
                    if w.exact is None or path[first] is None or path[first] == w.exact:
                        cert = "exact" if w.exact is not None and path[first] is not None else "modular"
                        done[a] = OrbitRecord(a, path, Cycle(k - first, first), visits[a], cert)
                        pool_a.remove(a)
                        continue
                seen[a][key] = k
                if key in fkeys and fkeys[key][1] != a and w.same(*fkeys[key]) is not False:
                    visits[a].setdefault(fkeys[key][1], k)
            key = w.key()
            if key in ikeys:
                pt, b = ikeys[key]
                ok = w.same(pt, key)
                if ok is False:
                    continue
                cert = "exact" if ok else "modular"
                if b in pool_b:
                    pairs.append(Pair(a, b, k))
                    pool_b.discard(b)
                    done[a] = OrbitRecord(a, path, Matched(b, k), visits[a], cert)
                else:
                    done[a] = OrbitRecord(a, path, Blocked(pt, k), visits[a], cert)
                pool_a.remove(a)
    for a in pool_a:
        done[a] = OrbitRecord(a, traj[a], Unresolved(horizon), visits[a])
    classes = {a: _tag(done[a]) for a in sorted(done)}

    matched_b = {p.beta: p for p in pairs}
    inv_records: dict[int, OrbitRecord] = {}
    inv_classes: dict[int, str] = {}
    for bp in base.inv_points:
        b = bp.index
        if b in matched_b:
            pr = matched_b[b]
            # dual check: the forward orbit of O^(-1)_b returns to O_a after m steps
            rec = orbit_of(m, bp.coords, "forward", pr.m, targets={base.points[pr.alpha - 1].coords: pr.alpha}, start=b)
            if not (isinstance(rec.status, Matched) and rec.status.steps == pr.m):
                log.warning("forward orbit of O^(-1)_%d does not return to O_%d in %d steps", b, pr.alpha, pr.m)
            inv_records[b] = rec
            inv_classes[b] = "int"
            continue
        rec = orbit_of(m, bp.coords, "forward", horizon, landmarks=inv, start=b)
        inv_records[b] = rec
        inv_classes[b] = _tag(rec)

    pairs.sort(key=lambda p: (p.m, p.alpha))
    dec = Decomposition(pairs, classes, inv_classes, horizon, done, inv_records)
    for label in dec.anomalies:
        log.warning("orbit of %s is blocked at an F-point without a match", label)
    for rec in (*done.values(), *inv_records.values()):
        if rec.certified == "modular":
            log.warning("orbit event of F-point %s certified modulo two primes only", rec.start)
    return dec


def verify_pairs(m: BiratMap, base: BaseData, pairs: Sequence[Pair]) -> bool:
    """Re-evaluate every pair exactly: Phi^(-m)(O_a) == O^(-1)_b."""
    for pr in pairs:
        p = base.points[pr.alpha - 1].coords
        for _ in range(pr.m):
            p = step_inverse(m, p)
        if p != base.inv_points[pr.beta - 1].coords:
            return False
    return True
