"""Degree dynamics: the Lambda matrix, its secular polynomial, the d(k)/gamma(k)
forward recursion, minimal recurrences, exact growth classification,
closed forms and the screening of candidate parameter sets.

All polynomials in lambda are :class:`UniPoly` with integer coefficients.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import flint
import numpy as np

from .errors import InsufficientData, SingularSystem
from .polyring import UniPoly, unipoly_det

LAM = UniPoly.x()


# --------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class DynamicsData:
    """Inputs of the difference equations.

    ``pairs`` are 1-based (alpha_j, beta_j, m_j) sorted by m; ``i_fwd[j]`` is
    the multiplicity of O_{alpha_j}, ``i_inv[l]`` that of O^{-1}_{beta_l} and
    ``i_cross[j][l]`` the characteristic number i_{alpha_j beta_l}.
    ``extra`` maps each unpaired alpha to (i_alpha, (i_{alpha beta_l})_l);
    it only feeds the optional diagnostics.
    """

    n: int
    pairs: tuple[tuple[int, int, int], ...] = ()
    i_fwd: tuple[int, ...] = ()
    i_inv: tuple[int, ...] = ()
    i_cross: tuple[tuple[int, ...], ...] = ()
    extra: tuple[tuple[int, int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        # coerce (flint integers and lists are accepted on input)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "pairs", tuple(tuple(int(x) for x in p) for p in self.pairs))
        object.__setattr__(self, "i_fwd", tuple(int(x) for x in self.i_fwd))
        object.__setattr__(self, "i_inv", tuple(int(x) for x in self.i_inv))
        object.__setattr__(self, "i_cross", tuple(tuple(int(x) for x in r) for r in self.i_cross))
        object.__setattr__(
            self, "extra", tuple((int(a), int(i), tuple(int(x) for x in row)) for a, i, row in self.extra)
        )
        s = len(self.pairs)
        if self.n < 1:
            raise ValueError("degree n must be positive")
        if len(self.i_fwd) != s or len(self.i_inv) != s or len(self.i_cross) != s:
            raise ValueError("i-data does not match the number of pairs")
        if any(len(row) != s for row in self.i_cross):
            raise ValueError("i_cross must be sigma1 x sigma1")
        vals = [*self.i_fwd, *self.i_inv, *itertools.chain.from_iterable(self.i_cross)]
        vals += [p[2] for p in self.pairs]
        if any(int(v) != v or v < 0 for v in vals):
            raise ValueError("i-data and m must be non-negative integers")
        ms = [p[2] for p in self.pairs]
        if ms != sorted(ms):
            raise ValueError("pairs must be sorted by m")

    @property
    def sigma1(self) -> int:
        return len(self.pairs)

    @property
    def ms(self) -> tuple[int, ...]:
        return tuple(p[2] for p in self.pairs)

    @classmethod
    def from_analysis(cls, base, decomposition) -> DynamicsData:
        """Assemble the data from a :class:`BaseData` and a decomposition."""
        pairs = sorted(decomposition.pair_tuples(), key=lambda p: (p[2], p[0]))
        mat = base.matrix
        i_fwd = tuple(mat.i_fwd[a - 1] for a, _, _ in pairs)
        i_inv = tuple(mat.i_inv[b - 1] for _, b, _ in pairs)
        cross = tuple(tuple(mat[a - 1][b - 1] for _, b, _ in pairs) for a, _, _ in pairs)
        paired = {a for a, _, _ in pairs}
        extra = tuple(
            (a, mat.i_fwd[a - 1], tuple(mat[a - 1][b - 1] for _, b, _ in pairs))
            for a in range(1, len(mat.i_fwd) + 1)
            if a not in paired
        )
        return cls(base.n, tuple(pairs), i_fwd, i_inv, cross, extra)

    @classmethod
    def canonical_quadratic(cls, ms: Sequence[int], pairing: Sequence[int] | None = None) -> DynamicsData:
        """n=2 data with i=1 everywhere and i_{ab} = 1 - delta_{ab}.

        ``pairing[j]`` is beta_j for alpha_j = j+1 (identity by default)."""
        s = len(ms)
        if s > 3:
            raise ValueError("a quadratic map has at most three F-points")
        betas = list(pairing) if pairing is not None else list(range(1, s + 1))
        if sorted(betas) != sorted(set(betas)) or len(betas) != s:
            raise ValueError("pairing must list distinct beta labels")
        order = sorted(range(s), key=lambda j: (ms[j], j))
        pairs = tuple((j + 1, betas[j], int(ms[j])) for j in order)
        cross = tuple(tuple(0 if a == b else 1 for _, b, _ in pairs) for a, _, _ in pairs)
        return cls(2, pairs, (1,) * s, (1,) * s, cross)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pairs": [list(p) for p in self.pairs],
            "i_fwd": list(self.i_fwd),
            "i_inv": list(self.i_inv),
            "i_cross": [list(r) for r in self.i_cross],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> DynamicsData:
        pairs = doc.get("pairs")
        s = len(doc.get("i_fwd", []))
        if pairs is None:
            ms = doc.get("m", [0] * s)
            pairs = [(j + 1, j + 1, m) for j, m in enumerate(ms)]
        return cls(
            int(doc["n"]),
            tuple(tuple(int(x) for x in p) for p in pairs),
            tuple(doc.get("i_fwd", ())),
            tuple(doc.get("i_inv", ())),
            tuple(tuple(r) for r in doc.get("i_cross", ())),
        )

    def with_ms(self, ms: Sequence[int]) -> DynamicsData:
        """Same i-data, different m-list (re-sorted consistently)."""
        order = sorted(range(self.sigma1), key=lambda j: (ms[j], j))
        pairs = tuple((self.pairs[j][0], self.pairs[j][1], int(ms[j])) for j in order)
        return DynamicsData(
            self.n,
            pairs,
            tuple(self.i_fwd[j] for j in order),
            tuple(self.i_inv[j] for j in order),
            tuple(tuple(self.i_cross[j][l] for l in order) for j in order),
        )


@dataclass(frozen=True)
class Recurrence:
    """d(k+m) + sum_i a_i d(k+i) = 0 with characteristic polynomial
    lambda^m + sum_i a_i lambda^i."""

    order: int
    coefficients: tuple[int, ...]
    char_poly: UniPoly

    @classmethod
    def from_poly(cls, p: UniPoly) -> Recurrence:
        if p.lc != 1:
            raise ValueError(f"characteristic polynomial {p} is not monic")
        return cls(p.degree, p.coeffs[:-1], p)

    def delay(self) -> int:
        """Multiplicity a of the root lambda = 0."""
        a = 0
        while a < len(self.char_poly.coeffs) and self.char_poly.coeffs[a] == 0:
            a += 1
        return a

    def reduced(self) -> tuple[int, Recurrence]:
        """Strip lambda^a; the result holds on the sequence from k = a on."""
        a = self.delay()
        return a, Recurrence.from_poly(UniPoly(self.char_poly.coeffs[a:]))

    def __str__(self) -> str:
        terms = [(1, self.order)] + [(c, i) for i, c in reversed(list(enumerate(self.coefficients))) if c]
        out = ""
        for c, i in terms:
            body = ("" if abs(c) == 1 else f"{abs(c)}*") + ("d(k)" if i == 0 else f"d(k+{i})")
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += f" {'-' if c < 0 else '+'} {body}"
        return out + " = 0"


# --------------------------------------------------------------------------
# Lambda and the secular polynomial


def build_lambda(data: DynamicsData) -> list[list[UniPoly]]:
    s = data.sigma1
    top = [LAM - data.n] + [UniPoly.const(v) for v in data.i_inv]
    rows = [top]
    for j in range(s):
        row = [UniPoly.const(-data.i_fwd[j])]
        for l in range(s):
            e = UniPoly.const(data.i_cross[j][l])
            if l == j:
                e = e + UniPoly.monomial(data.pairs[j][2] + 1)
            row.append(e)
        rows.append(row)
    return rows


def secular(data: DynamicsData) -> Recurrence:
    """Recurrence read off det(Lambda); its order is sum m + sigma1 + 1."""
    return Recurrence.from_poly(unipoly_det(build_lambda(data)))


@dataclass(frozen=True)
class LumpedSystem:
    """Aggregated system: pairs with equal m whose coefficients allow it are
    replaced by the sum of their gamma's.

    ``groups`` lists the pair indices (0-based) of each aggregate; the
    matrix has the same shape as Lambda with one row and column per group.
    """

    groups: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[UniPoly, ...], ...]

    @property
    def char_poly(self) -> UniPoly:
        return unipoly_det([list(r) for r in self.matrix])


def _lump_ok(data: DynamicsData, groups) -> tuple[bool, int]:
    """Check that every column group carries constant i_inv and constant
    column sums over every row group; return the first offending group."""
    M = data.i_cross
    for h, H in enumerate(groups):
        if len({data.i_inv[l] for l in H}) > 1:
            return False, h
        for G in groups:
            if len({sum(M[j][l] for j in G) for l in H}) > 1:
                return False, h
    return True, -1


def lump(data: DynamicsData) -> LumpedSystem:
    """Reduce the order of the system by aggregating equal-m pairs.

    Summing the gamma-equations over a group G of pairs with a common m gives
    an equation for S_G = sum gamma whenever the coefficients in front of the
    gammas of every group H are constant across H.  Groups violating this are
    split until the condition holds (singletons always satisfy it), so the
    reduced system produces exactly the same d(k).
    """
    s = data.sigma1
    by_m: dict[int, list[int]] = {}
    for j, p in enumerate(data.pairs):
        by_m.setdefault(p[2], []).append(j)
    groups = [tuple(v) for v in by_m.values()]
    while True:
        ok, bad = _lump_ok(data, groups)
        if ok:
            break
        H = groups.pop(bad)
        groups[bad:bad] = [(j,) for j in H]
    groups = tuple(groups)
    M = data.i_cross
    top = [LAM - data.n] + [UniPoly.const(data.i_inv[H[0]]) for H in groups]
    rows = [tuple(top)]
    for g, G in enumerate(groups):
        row = [UniPoly.const(-sum(data.i_fwd[j] for j in G))]
        for h, H in enumerate(groups):
            e = UniPoly.const(sum(M[j][H[0]] for j in G))
            if g == h:
                e = e + UniPoly.monomial(data.pairs[G[0]][2] + 1)
            row.append(e)
        rows.append(tuple(row))
    assert sum(len(G) for G in groups) == s
    return LumpedSystem(groups, tuple(rows))


def lumped_secular(data: DynamicsData) -> Recurrence:
    """Recurrence of the aggregated system; divides the secular polynomial."""
    return Recurrence.from_poly(lump(data).char_poly)


# --------------------------------------------------------------------------
# forward recursion


@dataclass
class ForwardRun:
    d: list[int]
    gamma: dict[int, list[int]]  # alpha -> gamma_alpha(0..kmax)
    diagnostics: dict[int, list[int]] = field(default_factory=dict)  # unpaired alpha


def forward_d(data: DynamicsData, kmax: int, diagnostics: bool = False) -> ForwardRun:
    """Run the difference equations for d(k), gamma(k), k = 0..kmax."""
    s = data.sigma1
    ms = data.ms
    d = [1]
    g = [[0] for _ in range(s)]  # g[j][k]

    def past(l, k):
        k -= ms[l] + 1
        return g[l][k] if k >= 0 else 0

    for k in range(1, kmax + 1):
        d.append(data.n * d[k - 1] - sum(data.i_inv[l] * past(l, k) for l in range(s)))
        new = [data.i_fwd[j] * d[k - 1] - sum(data.i_cross[j][l] * past(l, k) for l in range(s)) for j in range(s)]
        for j in range(s):
            g[j].append(new[j])
    run = ForwardRun(d, {data.pairs[j][0]: g[j] for j in range(s)})
    if diagnostics:
        for a, ia, row in data.extra:
            run.diagnostics[a] = [0] + [
                ia * d[k - 1] - sum(row[l] * past(l, k) for l in range(s)) for k in range(1, kmax + 1)
            ]
    return run


def recurrence_check(r: Recurrence, seq: Iterable[int]) -> tuple[bool, int | None]:
    """Check every window; returns (ok, first failing k)."""
    seq = list(seq)
    m = r.order
    if len(seq) < m + 1:
        raise InsufficientData(f"need at least {m + 1} terms, got {len(seq)}")
    for k in range(len(seq) - m):
        if seq[k + m] + sum(a * seq[k + i] for i, a in enumerate(r.coefficients)):
            return False, k
    return True, None


def minimal_recurrence(seq: Iterable[int]) -> Recurrence:
    """Shortest linear recurrence with constant coefficients (Berlekamp-Massey
    over the rationals), returned with its integer characteristic polynomial.

    The answer is only trusted when ``len(seq) >= 2*order + 2``."""
    s = [Fraction(x) for x in seq]
    C, B = [Fraction(1)], [Fraction(1)]
    L, shift, b = 0, 1, Fraction(1)
    for i in range(len(s)):
        delta = s[i] + sum(C[j] * s[i - j] for j in range(1, L + 1))
        if delta == 0:
            shift += 1
            continue
        coef = delta / b
        T = list(C)
        C = C + [Fraction(0)] * max(0, len(B) + shift - len(C))
        for j, x in enumerate(B):
            C[j + shift] -= coef * x
        if 2 * L <= i:
            L, B, b, shift = i + 1 - L, T, delta, 1
        else:
            shift += 1
    if len(s) < 2 * L + 2:
        raise InsufficientData(f"{len(s)} terms cannot certify a recurrence of order {L}")
    C = (C + [Fraction(0)] * (L + 1))[: L + 1]
    if any(c.denominator != 1 for c in C):
        raise InsufficientData("the shortest recurrence has non-integer coefficients")
    # C(x) = 1 + c1 x + ... + cL x^L  <->  lambda^L + c1 lambda^(L-1) + ... + cL
    return Recurrence.from_poly(UniPoly(int(C[L - i]) for i in range(L + 1)))


# --------------------------------------------------------------------------
# growth


def totient(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


_CYCLO: dict[int, UniPoly] = {}


def cyclotomic(N: int) -> UniPoly:
    """Phi_N by dividing x^N - 1 by Phi_d for the proper divisors d."""
    if N not in _CYCLO:
        p = UniPoly.monomial(N) - 1
        for e in range(1, N):
            if N % e == 0:
                p = p // cyclotomic(e)
        _CYCLO[N] = p
    return _CYCLO[N]


def totient_inverse(deg: int) -> list[int]:
    """All N with phi(N) <= deg (phi(N) >= sqrt(N/2), so N <= 2 deg^2)."""
    cap = max(3 * deg * deg, 2)
    return [N for N in range(1, cap + 1) if totient(N) <= deg]


def _sturm(p: list[Fraction]) -> list[list[Fraction]]:
    """Sturm chain of a polynomial given by Fraction coefficients (low first)."""

    def trim(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def rem(a, b):
        a = list(a)
        while len(a) >= len(b) and a:
            c = a[-1] / b[-1]
            sh = len(a) - len(b)
            for i, x in enumerate(b):
                a[sh + i] -= c * x
            trim(a)
        return a

    chain = [trim(list(p)), trim([i * c for i, c in enumerate(p)][1:])]
    while chain[-1] and len(chain[-1]) > 1:
        r = rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x: Fraction) -> int:
    vals = []
    for q in chain:
        v = Fraction(0)
        for c in reversed(q):
            v = v * x + c
        if v:
            vals.append(v > 0)
    return sum(1 for a, b in zip(vals, vals[1:]) if a != b)


def real_root_count(p: UniPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in (lo, hi]."""
    chain = _sturm([Fraction(c) for c in p.coeffs])
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def largest_real_root(p: UniPoly, width: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction] | None:
    """Interval (lo, hi] of width <= ``width`` containing the largest real
    root, found by Sturm counts at rational points only."""
    if p.degree < 1:
        return None
    bound = Fraction(1 + max(abs(c) for c in p.coeffs[:-1]), abs(p.lc)) + 1
    chain = _sturm([Fraction(c) for c in p.coeffs])
    lo, hi = -bound, bound
    if _sign_changes(chain, lo) - _sign_changes(chain, hi) == 0:
        return None
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) - _sign_changes(chain, hi) > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


@dataclass(frozen=True)
class GrowthReport:
    """``cls`` is Bounded, Polynomial or Exponential.

    char_poly = lambda^delay * unit_factor * residual exactly; ``cyclotomic``
    lists (N, multiplicity of Phi_N) inside the unit factor.
    """

    cls: str
    degree: int | None
    entropy: float | None
    dominant_root: tuple[Fraction, Fraction] | None
    delay: int
    unit_factor: UniPoly
    residual: UniPoly
    cyclotomic: tuple[tuple[int, int], ...] = ()

    def describe(self) -> str:
        if self.cls == "Exponential":
            lo, hi = self.dominant_root
            return f"Exponential, dominant root in [{float(lo):.12f}, {float(hi):.12f}], entropy {self.entropy:.12f}"
        if self.cls == "Polynomial":
            return f"Polynomial of degree {self.degree}"
        return "Bounded"

    def to_dict(self) -> dict:
        out = {
            "class": self.cls,
            "delay": self.delay,
            "unit_factor": str(self.unit_factor),
            "residual": str(self.residual),
            "cyclotomic": [{"N": N, "multiplicity": e} for N, e in self.cyclotomic],
        }
        if self.cls == "Exponential":
            lo, hi = self.dominant_root
            out["entropy"] = self.entropy
            out["dominant_root"] = [float(lo), float(hi)]
        else:
            out["degree"] = self.degree
        return out


def classify_growth(r: Recurrence | UniPoly) -> GrowthReport:
    """Exact Kronecker classification of a characteristic polynomial.

    The residual after removing lambda^a and every cyclotomic factor is
    trivial iff all roots lie on the unit circle; otherwise it has a root
    of modulus > 1 and the largest real root is bracketed by Sturm bisection.
    """
    p = r.char_poly if isinstance(r, Recurrence) else r
    if p.lc != 1:
        raise ValueError("characteristic polynomial must be monic")
    a = 0
    while p.coeffs[a] == 0:
        a += 1
    rest = UniPoly(p.coeffs[a:])
    unit = UniPoly.const(1)
    found = []
    for N in totient_inverse(rest.degree):
        phi = cyclotomic(N)
        if phi.degree > rest.degree:
            continue
        e = 0
        while rest.degree >= phi.degree and phi.divides(rest):
            rest = rest // phi
            unit = unit * phi
            e += 1
        if e:
            found.append((N, e))
    if rest.degree == 0:
        deg = max((e for _, e in found), default=1) - 1
        return GrowthReport("Bounded" if deg == 0 else "Polynomial", deg, None, None, a, unit, rest, tuple(found))
    box = largest_real_root(rest)
    if box is None or box[1] <= 1:
        # dominant pair is complex; bracket its modulus numerically
        mod = max(abs(z) for z in np.roots([float(c) for c in reversed(rest.coeffs)]))
        box = (Fraction(mod) - Fraction(1, 10**9), Fraction(mod) + Fraction(1, 10**9))
    mid = (box[0] + box[1]) / 2
    return GrowthReport("Exponential", None, math.log(mid), box, a, unit, rest, tuple(found))


# --------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class Root:
    factor: UniPoly  # irreducible factor over Z carrying the root
    value: object  # Fraction when rational, complex otherwise
    multiplicity: int
    interval: tuple[Fraction, Fraction] | None = None  # real irrational roots

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)


@dataclass(frozen=True)
class ClosedForm:
    """d(k) = sum_i root_i^k * sum_j c_ij k^j for k >= ``start``."""

    roots: tuple[Root, ...]
    coefficients: tuple[tuple[object, ...], ...]
    start: int = 0
    exact: bool = True

    def evaluate(self, k: int):
        if k < self.start:
            raise ValueError(f"the closed form holds from k = {self.start}")
        total = Fraction(0) if self.exact else 0j
        for root, cs in zip(self.roots, self.coefficients):
            pw = root.value**k
            total += pw * sum(c * k**j for j, c in enumerate(cs))
        if self.exact:
            return total
        return float(total.real)

    def __str__(self) -> str:
        parts = []
        for root, cs in zip(self.roots, self.coefficients):
            for j, c in enumerate(cs):
                if not c:
                    continue
                if self.exact:
                    kpart = "" if j == 0 else ("k" if j == 1 else f"k^{j}")
                    rpart = "" if root.value == 1 else f"({root.value})^k"
                    body = "*".join(x for x in (kpart, rpart) if x)
                    if not body:
                        parts.append(str(c))
                    else:
                        parts.append(body if c == 1 else ("-" + body if c == -1 else f"{c}*{body}"))
                else:
                    z, c = complex(root.value), complex(c)
                    if abs(c) < 1e-12:
                        continue
                    kpart = "" if j == 0 else ("*k" if j == 1 else f"*k^{j}")
                    rpart = "" if abs(z - 1) < 1e-15 else f"*{_fmt_complex(z)}^k"
                    parts.append(f"{_fmt_complex(c)}{rpart}{kpart}")
        s = " + ".join(parts) if parts else "0"
        return s.replace("+ -", "- ")


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
        return f"{z.real:.12g}" if z.real >= 0 else f"({z.real:.12g})"
    return f"({z.real:.12g}{z.imag:+.12g}i)"


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise SingularSystem("closed-form system is singular")
        a[c], a[piv] = a[piv], a[c]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def closed_form(r: Recurrence, initials: Sequence[int]) -> ClosedForm:
    """Solve for the constants c_ij from d(0..m-1).

    A factor lambda^a only delays the solution, so the formula is fitted on
    d(a..m-1) and holds from k = a on.  Irrational roots are handled in
    floating point, with real ones also bracketed exactly.
    """
    m = r.order
    if len(initials) != m:
        raise ValueError(f"need exactly {m} initial values")
    a, red = r.reduced()
    p = red.char_poly
    vals = list(initials[a:])
    _, facs = flint.fmpz_poly(list(p.coeffs)).factor()
    roots: list[Root] = []
    for f, e in facs:
        fu = UniPoly(int(x) for x in f.coeffs())
        if fu.lc < 0:
            fu = -fu
        if fu.degree == 1:
            roots.append(Root(fu, Fraction(-fu.coeffs[0], fu.coeffs[1]), e))
            continue
        for z in np.roots([float(c) for c in reversed(fu.coeffs)]):
            box = None
            if abs(z.imag) < 1e-9:
                box = _isolate(fu, float(z.real))
            roots.append(Root(fu, complex(z), e, box))
    roots.sort(key=lambda t: (not t.exact, -abs(complex(t.value)), complex(t.value).imag))
    exact = all(t.exact for t in roots)
    cols = [(i, j) for i, t in enumerate(roots) for j in range(t.multiplicity)]
    ks = range(a, a + len(cols))
    if exact:
        rows = [[roots[i].value ** k * Fraction(k) ** j for i, j in cols] for k in ks]
        sol = _solve(rows, [Fraction(v) for v in vals])
    else:
        rows = np.array([[complex(roots[i].value) ** k * k**j for i, j in cols] for k in ks])
        if abs(np.linalg.det(rows)) < 1e-300:
            raise SingularSystem("closed-form system is singular")
        sol = list(np.linalg.solve(rows, np.array(vals, dtype=complex)))
    coeffs = []
    it = iter(sol)
    for t in roots:
        coeffs.append(tuple(next(it) for _ in range(t.multiplicity)))
    return ClosedForm(tuple(roots), tuple(coeffs), a, exact)


def _isolate(p: UniPoly, approx: float) -> tuple[Fraction, Fraction] | None:
    """Exact bracket of width 1e-12 around the real root near ``approx``."""
    lo, hi = Fraction(approx) - Fraction(1, 10**6), Fraction(approx) + Fraction(1, 10**6)
    if real_root_count(p, lo, hi) != 1:
        return None
    while hi - lo > Fraction(1, 10**12):
        mid = (lo + hi) / 2
        if real_root_count(p, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


# --------------------------------------------------------------------------
# screening


@dataclass(frozen=True)
class Candidate:
    ms: tuple[int, ...]
    char_poly: UniPoly  # det(Lambda)
    reduced_poly: UniPoly  # aggregated system
    growth: GrowthReport  # of the aggregated system

    def to_dict(self) -> dict:
        return {
            "m": list(self.ms),
            "det": str(self.char_poly),
            "det_coefficients": list(self.char_poly.coeffs),
            "reduced": str(self.reduced_poly),
            "reduced_coefficients": list(self.reduced_poly.coeffs),
            "growth": self.growth.to_dict(),
        }


def stratum_dimension(sigma1: int, sigma: int = 3) -> int:
    """Dimension 2*sigma + 8 - 2*sigma1 of the parameter stratum of quadratic
    maps with sigma1 matched pairs (codimension 2*sigma1)."""
    return 2 * sigma + 8 - 2 * sigma1


def enumerate_candidates(
    n: int = 2,
    sigma1: int = 3,
    m_max: int = 5,
    pairing: Sequence[int] | None = None,
    i_data: DynamicsData | None = None,
) -> list[Candidate]:
    """All m-sets 0 <= m_1 <= ... <= m_sigma1 <= m_max in lexicographic order.

    Without ``i_data`` the canonical quadratic data are used (n must be 2
    unless sigma1 = 0); ``pairing`` permutes the beta labels.
    """
    if i_data is None:
        if sigma1 and n != 2:
            raise ValueError("canonical i-data exist only for quadratic maps; pass i_data")
        base = DynamicsData(n) if sigma1 == 0 else None
    else:
        if i_data.sigma1 != sigma1 or i_data.n != n:
            raise ValueError("i_data does not match n and sigma1")
        base = i_data
    out = []
    for ms in itertools.combinations_with_replacement(range(m_max + 1), sigma1):
        if base is None:
            data = DynamicsData.canonical_quadratic(ms, pairing)
        else:
            data = base.with_ms(ms) if sigma1 else base
        det = secular(data).char_poly
        red = lump(data).char_poly
        out.append(Candidate(tuple(ms), det, red, classify_growth(red)))
    return out
