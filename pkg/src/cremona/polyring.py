"""Exact polynomial arithmetic for birational plane maps.

Three kinds of objects live here:

* :class:`HomPoly` -- a homogeneous polynomial in ``z1, z2, z3`` with
  rational coefficients.  Arithmetic, gcd, factorisation and substitution
  are delegated to FLINT's ``fmpq_mpoly`` (via ``python-flint``); the class
  adds the homogeneity contract and canonical forms.
* :class:`UniPoly` -- a univariate polynomial with integer coefficients,
  used for the entries of the secular matrix and for growth classification.
* :class:`ProjPoint` -- a rational point of the projective plane in
  canonical form.

Rational numbers are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import DegreeMismatch

Rat = Fraction
Triple = tuple[int, int, int]

VARS = ("z1", "z2", "z3")
_CTX = flint.fmpq_mpoly_ctx.get(VARS, "lex")


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _frac(c) -> Fraction:
    c = flint.fmpq(c)
    return Fraction(int(c.p), int(c.q))


class HomPoly:
    """Homogeneous polynomial in three variables over the rationals.

    Instances are immutable.  The zero polynomial has ``degree is None``.
    """

    __slots__ = ("_p", "_deg")

    def __init__(self, terms: dict[Triple, object] | None = None):
        p = _CTX.from_dict({tuple(e): _fmpq(c) for e, c in (terms or {}).items() if c != 0})
        self._set(p)

    def _set(self, p) -> None:
        self._p = p
        if p.is_zero():
            self._deg = None
            return
        degs = {int(sum(m)) for m in p.monoms()}
        if len(degs) != 1:
            raise DegreeMismatch(f"not homogeneous: total degrees {sorted(degs)}")
        self._deg = degs.pop()

    @classmethod
    def _wrap(cls, p) -> HomPoly:
        obj = cls.__new__(cls)
        obj._set(p)
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> HomPoly:
        return cls._wrap(_CTX.from_dict({}))

    @classmethod
    def constant(cls, c) -> HomPoly:
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, i: int) -> HomPoly:
        """The coordinate ``z_{i+1}`` (0-based index)."""
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @classmethod
    def linear(cls, a, b, c) -> HomPoly:
        return cls({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    # -- basic accessors ----------------------------------------------------

    @property
    def degree(self) -> int | None:
        return self._deg

    @property
    def terms(self) -> dict[Triple, Fraction]:
        return {tuple(int(x) for x in m): _frac(c) for m, c in self._p.terms()}

    @property
    def flint(self):
        return self._p

    def is_zero(self) -> bool:
        return self._deg is None

    def is_constant(self) -> bool:
        return self._deg == 0

    def __len__(self) -> int:
        return len(self._p)

    def leading_term(self) -> tuple[Triple, Fraction]:
        """Lexicographically largest exponent triple and its coefficient."""
        e, c = max(self._p.terms(), key=lambda t: tuple(t[0]))
        return tuple(e), _frac(c)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> HomPoly | None:
        if isinstance(other, HomPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return HomPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self._deg is not None and other._deg is not None and self._deg != other._deg:
            raise DegreeMismatch(f"cannot add degrees {self._deg} and {other._deg}")
        return HomPoly._wrap(self._p + other._p)

    __radd__ = __add__

    def __neg__(self) -> HomPoly:
        return HomPoly._wrap(-self._p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HomPoly._wrap(self._p * _fmpq(other))
        if isinstance(other, HomPoly):
            return HomPoly._wrap(self._p * other._p)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> HomPoly:
        if k < 0:
            raise ValueError("negative exponent")
        return HomPoly._wrap(self._p ** k)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._p == other._p

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"HomPoly({self})"

    def __str__(self) -> str:
        return to_string(self)

    # -- algebra ------------------------------------------------------------

    def scale(self, c) -> HomPoly:
        return self * Fraction(c)

    def derivative(self, i: int) -> HomPoly:
        return HomPoly._wrap(self._p.derivative(VARS[i]))

    def __call__(self, *point) -> Fraction:
        if len(point) == 1:
            point = tuple(point[0])
        return _frac(self._p(*[_fmpq(x) for x in point]))

    def compose(self, subst: Sequence[HomPoly]) -> HomPoly:
        return compose(self, subst)

    def divides(self, other: HomPoly) -> bool:
        if self.is_zero():
            return other.is_zero()
        _, r = divmod(other._p, self._p)
        return r.is_zero()

    def exact_div(self, other: HomPoly) -> HomPoly:
        """Quotient ``self / other``; raises ``ArithmeticError`` if inexact."""
        q, r = divmod(self._p, other._p)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return HomPoly._wrap(q)

    def content(self) -> Fraction:
        """Positive rational c with ``self / c`` integral and primitive."""
        if self.is_zero():
            return Fraction(0)
        cs = self.terms.values()
        den = math.lcm(*(c.denominator for c in cs))
        num = math.gcd(*(c.numerator for c in cs))
        return Fraction(num, den)

    def primitive(self) -> HomPoly:
        """Canonical representative of the line ``Q * self``.

        Coefficients become coprime integers and the coefficient of the
        lexicographically largest exponent triple is positive.
        """
        if self.is_zero():
            return self
        c = self.content()
        _, lc = self.leading_term()
        if lc < 0:
            c = -c
        return HomPoly._wrap(self._p / _fmpq(c))

    def is_proportional(self, other: HomPoly) -> bool:
        return self.primitive() == other.primitive()

    def dehomogenize(self, i: int) -> dict[tuple[int, int], Fraction]:
        """Affine chart ``z_{i+1} = 1`` as a map from the two remaining exponents."""
        out: dict[tuple[int, int], Fraction] = {}
        for e, c in self.terms.items():
            key = tuple(x for j, x in enumerate(e) if j != i)
            out[key] = out.get(key, 0) + c
        return out


# -- module-level operations ------------------------------------------------


def add(a: HomPoly, b: HomPoly) -> HomPoly:
    return a + b


def mul(a: HomPoly, b: HomPoly) -> HomPoly:
    return a * b


def compose(f: HomPoly, subst: Sequence[HomPoly]) -> HomPoly:
    """Substitute ``z_i -> subst[i]`` into ``f``.

    The three substituted polynomials must share one degree (zero entries
    are allowed).
    """
    if len(subst) != 3:
        raise ValueError("substitution needs exactly three polynomials")
    degs = {s.degree for s in subst if not s.is_zero()}
    if len(degs) > 1:
        raise DegreeMismatch(f"substitution triple has degrees {sorted(degs)}")
    return HomPoly._wrap(f.flint.compose(*(s.flint for s in subst)))


def gcd(a: HomPoly, b: HomPoly) -> HomPoly:
    """Greatest common divisor in canonical (primitive) normalisation."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return HomPoly._wrap(a.flint.gcd(b.flint)).primitive()


def gcd_many(polys: Iterable[HomPoly]) -> HomPoly:
    g = None
    for p in polys:
        if p.is_zero():
            continue
        g = p.primitive() if g is None else gcd(g, p)
        if g.is_constant():
            return HomPoly.constant(1)
    if g is None:
        raise ValueError("gcd of zero polynomials is undefined")
    return g


def factor(a: HomPoly) -> tuple[Fraction, list[tuple[HomPoly, int]]]:
    """Irreducible factorisation over Q: ``a = c * prod(f**e)``, factors primitive."""
    if a.is_zero():
        raise ValueError("cannot factor zero")
    c, facs = a.flint.factor()
    out = []
    c = _frac(c)
    for f, e in facs:
        h = HomPoly._wrap(f)
        p = h.primitive()
        c *= (h.leading_term()[1] / p.leading_term()[1]) ** int(e)
        out.append((p, int(e)))
    out.sort(key=lambda fe: (fe[0].degree, sorted(fe[0].terms.items(), reverse=True)), reverse=True)
    return c, out


def squarefree_decomposition(a: HomPoly) -> list[tuple[HomPoly, int]]:
    """Parts grouped by multiplicity: ``a ~ prod(part**m)``, parts coprime and squarefree."""
    if a.is_zero():
        raise ValueError("cannot decompose zero")
    _, facs = a.flint.factor_squarefree()
    grouped: dict[int, HomPoly] = {}
    for f, e in facs:
        e = int(e)
        h = HomPoly._wrap(f)
        grouped[e] = grouped[e] * h if e in grouped else h
    return [(grouped[e].primitive(), e) for e in sorted(grouped)]


def linear_factors(a: HomPoly) -> tuple[list[HomPoly], HomPoly]:
    """Rational lines dividing ``a`` (repeated by multiplicity) and the cofactor.

    The remainder is primitive and has no rational linear factor.
    """
    _, facs = factor(a)
    lines: list[HomPoly] = []
    rest = HomPoly.constant(1)
    for f, e in facs:
        if f.degree == 1:
            lines.extend([f] * e)
        else:
            rest = rest * f ** e
    return lines, rest.primitive()


def multiplicity_at(f: HomPoly, point: ProjPoint) -> int:
    """Order of vanishing of ``f`` at ``point`` (0 when ``f(point) != 0``)."""
    if f.is_zero():
        raise ValueError("multiplicity of the zero polynomial is undefined")
    coords = point.coords
    if f(coords) != 0:
        return 0
    j = next(i for i, c in enumerate(coords) if c != 0)
    zj = HomPoly.var(j)
    shift = [HomPoly.var(i) + zj * coords[i] if i != j else zj for i in range(3)]
    g = compose(f, shift)
    return min(sum(e) - e[j] for e in g.terms)


def jacobian_det(triple: Sequence[HomPoly]) -> HomPoly:
    m = [[p.derivative(i) for i in range(3)] for p in triple]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def to_string(p: HomPoly) -> str:
    """Canonical text form, parseable by :func:`cremona.parsing.parse_poly`."""
    if p.is_zero():
        return "0"
    parts = []
    for e, c in sorted(p.terms.items(), reverse=True):
        mono = "*".join(
            VARS[i] if k == 1 else f"{VARS[i]}^{k}" for i, k in enumerate(e) if k
        )
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- projective points ------------------------------------------------------


@dataclass(frozen=True)
class ProjPoint:
    """Rational point of CP^2, first nonzero coordinate scaled to 1."""

    coords: tuple[Fraction, Fraction, Fraction]

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = tuple(coords[0])
        if len(coords) != 3:
            raise ValueError("a projective point needs three coordinates")
        cs = [Fraction(c) for c in coords]
        lead = next((c for c in cs if c != 0), None)
        if lead is None:
            raise ValueError("(0, 0, 0) is not a projective point")
        object.__setattr__(self, "coords", tuple(c / lead for c in cs))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"ProjPoint{self}"


def evaluate_triple(triple: Sequence[HomPoly], point: ProjPoint) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(p(point.coords) for p in triple)


# -- univariate integer polynomials -----------------------------------------


def _trim(cs: Iterable[int]) -> tuple[int, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class UniPoly:
    """Polynomial in one variable with integer coefficients, low degree first."""

    coeffs: tuple[int, ...] = ()

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = _trim(int(c) for c in coeffs)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def x(cls) -> UniPoly:
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> UniPoly:
        return cls([0] * k + [c])

    @classmethod
    def const(cls, c: int) -> UniPoly:
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def _c(self, other) -> UniPoly:
        return other if isinstance(other, UniPoly) else UniPoly((other,))

    def __add__(self, other):
        other = self._c(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        other = self._c(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> UniPoly:
        out = UniPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod_exact(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        """Integer long division; raises ``ArithmeticError`` if a quotient
        coefficient is not an integer."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        q = [0] * max(len(r) - len(other.coeffs) + 1, 0)
        d, lc = other.degree, other.lc
        for k in range(len(q) - 1, -1, -1):
            c = r[k + d]
            if c == 0:
                continue
            if c % lc:
                raise ArithmeticError(f"{other} does not divide {self} over the integers")
            t = c // lc
            q[k] = t
            for i, b in enumerate(other.coeffs):
                r[k + i] -= t * b
        return UniPoly(q), UniPoly(r)

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        q, r = self.divmod_exact(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: UniPoly) -> bool:
        try:
            _, r = other.divmod_exact(self)
        except ArithmeticError:
            return False
        return r.is_zero()

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> UniPoly:
        if self.is_zero():
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return UniPoly(x // c for x in self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def unipoly_det(matrix: Sequence[Sequence[UniPoly]]) -> UniPoly:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n == 0:
        return UniPoly.const(1)
    a = [[e if isinstance(e, UniPoly) else UniPoly.const(e) for e in row] for row in matrix]
    sign = 1
    prev = UniPoly.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return UniPoly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def cofactor_det(matrix: Sequence[Sequence[UniPoly]]) -> UniPoly:
    """Leibniz expansion; exponential cost, used only as a cross-check."""
    n = len(matrix)
    total = UniPoly()
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = UniPoly.const(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * matrix[i][j]
        total = total + term
    return total
