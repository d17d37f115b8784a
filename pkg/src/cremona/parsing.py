"""Polynomial expressions and JSON map files.

Grammar (no implicit multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*       divisor must be a nonzero constant
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INT)?
    atom   := INT | z1 | z2 | z3 | NAME | '(' expr ')'

so ``a/b`` literals are ordinary constant divisions.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import flint

from .errors import DegreeMismatch, ExpressionSyntaxError, NonHomogeneous, UnboundParameter
from .mapcore import BiratMap
from .polyring import VARS, HomPoly, ProjPoint, to_string

_CTX = flint.fmpq_mpoly_ctx.get(VARS, "lex")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\^|\*|/|\+|-|\(|\)))")


def parse_rational(text) -> Fraction:
    """Integer or ``a/b`` literal (also accepts ints and Fractions)."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = str(text).strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ExpressionSyntaxError("not a rational literal", s, 0)
    return Fraction(s)


class _Parser:
    def __init__(self, text: str, params: Mapping[str, object]):
        self.text = text
        self.params = {k: parse_rational(v) for k, v in params.items()}
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", text, start)
            num, name, op = m.groups()
            start = m.start(m.lastindex)
            kind = "int" if num else "name" if name else "op"
            self.toks.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg):
        raise ExpressionSyntaxError(msg, self.text, self.peek()[2])

    def expect(self, op):
        if self.peek()[1] != op or self.peek()[0] != "op":
            self.error(f"expected {op!r}")
        self.take()

    def parse(self):
        if not self.toks:
            self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected token (implicit multiplication is not allowed)")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self):
        e = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                e = e * rhs
                continue
            if rhs.total_degree() > 0:
                raise ExpressionSyntaxError("can only divide by a constant", self.text, pos)
            if rhs.is_zero():
                raise ExpressionSyntaxError("division by zero", self.text, pos)
            e = e / rhs.leading_coefficient()
        return e

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, _ = self.peek()
            if kind != "int":
                self.error("exponent must be a non-negative integer")
            self.take()
            return base ** int(val)
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return _CTX.from_dict({(0, 0, 0): int(val)})
        if kind == "name":
            self.take()
            if val in VARS:
                return _CTX.gens()[VARS.index(val)]
            if val not in self.params:
                raise UnboundParameter(val)
            c = self.params[val]
            return _CTX.from_dict({(0, 0, 0): flint.fmpq(c.numerator, c.denominator)})
        if (kind, val) == ("op", "("):
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        self.error("expected a number, variable, parameter or '('")


def parse_expr(text: str, params: Mapping[str, object] | None = None):
    """Parse to a (possibly inhomogeneous) python-flint polynomial."""
    return _Parser(text, params or {}).parse()


def parse_poly(text: str, params: Mapping[str, object] | None = None) -> HomPoly:
    """Parse a homogeneous polynomial; raises :class:`NonHomogeneous` otherwise."""
    p = parse_expr(text, params)
    try:
        return HomPoly._wrap(p)
    except DegreeMismatch as exc:
        raise NonHomogeneous(f"{text!r}: {exc}") from None


def parse_triple(texts, params=None, what="triple") -> tuple[HomPoly, HomPoly, HomPoly]:
    if len(texts) != 3:
        raise ValueError(f"{what} needs exactly three expressions")
    polys = tuple(parse_poly(t, params) for t in texts)
    degs = {p.degree for p in polys if not p.is_zero()}
    if len(degs) > 1:
        raise NonHomogeneous(f"{what} components have different degrees {sorted(degs)}")
    return polys


def parse_constant(text, params: Mapping[str, object] | None = None) -> Fraction:
    """A constant expression such as ``-d/(d-lambda)``."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    p = parse_expr(str(text), params)
    if p.total_degree() > 0:
        raise ExpressionSyntaxError("expected a constant", str(text), 0)
    if p.is_zero():
        return Fraction(0)
    c = p.leading_coefficient()
    return Fraction(int(c.p), int(c.q))


def _point(coords, params=None) -> ProjPoint:
    return ProjPoint(tuple(parse_constant(c, params) for c in coords))


@dataclass
class MapFile:
    forward: list[str]
    inverse: list[str]
    parameters: dict[str, str] = field(default_factory=dict)
    hints: dict = field(default_factory=dict)
    name: str = ""
    description: str = ""
    variables: list[str] = field(default_factory=lambda: list(VARS))

    @classmethod
    def from_dict(cls, doc: dict) -> MapFile:
        if doc.get("variables", list(VARS)) != list(VARS):
            raise ValueError("variables must be exactly z1, z2, z3")
        for key in ("forward", "inverse"):
            if key not in doc:
                raise ValueError(f"map file lacks {key!r}")
        return cls(
            forward=list(doc["forward"]),
            inverse=list(doc["inverse"]),
            parameters={k: str(v) for k, v in doc.get("parameters", {}).items()},
            hints=dict(doc.get("hints", {})),
            name=doc.get("name", ""),
            description=doc.get("description", ""),
        )

    def to_dict(self) -> dict:
        out = {"variables": self.variables, "forward": self.forward, "inverse": self.inverse}
        if self.name:
            out = {"name": self.name, **out}
        if self.description:
            out["description"] = self.description
        if self.parameters:
            out["parameters"] = self.parameters
        if self.hints:
            out["hints"] = self.hints
        return out

    def birat_map(self) -> BiratMap:
        return BiratMap(
            parse_triple(self.forward, self.parameters, "forward"),
            parse_triple(self.inverse, self.parameters, "inverse"),
        )

    def point_hints(self) -> list[ProjPoint] | None:
        pts = self.hints.get("points")
        return [_point(p, self.parameters) for p in pts] if pts else None

    def inverse_point_hints(self) -> list[ProjPoint] | None:
        pts = self.hints.get("inverse_points")
        return [_point(p, self.parameters) for p in pts] if pts else None

    def curve_hints(self) -> list[HomPoly] | None:
        cs = self.hints.get("curves")
        return [parse_poly(c, self.parameters) for c in cs] if cs else None


def load_map_file(path) -> MapFile:
    with open(path, encoding="utf-8") as fh:
        return MapFile.from_dict(json.load(fh))


def map_to_file(m: BiratMap, name: str = "", description: str = "") -> MapFile:
    """Serialise a map canonically (parameters already substituted)."""
    c = m.canonical()
    return MapFile(
        forward=[to_string(p) for p in c.forward],
        inverse=[to_string(p) for p in c.inverse],
        name=name,
        description=description,
    )


def dump_map_file(mf: MapFile) -> str:
    return json.dumps(mf.to_dict(), indent=2) + "\n"


def read_hints_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_fixture(name: str) -> MapFile:
    """One of the bundled example maps (see ``cremona/data``)."""
    here = Path(__file__).with_name("data") / f"{name}.json"
    if not here.exists():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return load_map_file(here)


def fixture_names() -> list[str]:
    return sorted(p.stem for p in (Path(__file__).with_name("data")).glob("*.json"))
