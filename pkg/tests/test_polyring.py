from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cremona.errors import DegreeMismatch
from cremona.polyring import (
    HomPoly,
    ProjPoint,
    UniPoly,
    add,
    cofactor_det,
    compose,
    gcd,
    gcd_many,
    jacobian_det,
    linear_factors,
    mul,
    multiplicity_at,
    squarefree_decomposition,
    unipoly_det,
)

from conftest import P, fixture_map

z1, z2, z3 = (HomPoly.var(i) for i in range(3))
I_S = (z2 * z3, z1 * z3, z1 * z2)


def test_add_cancels_and_merges():
    assert add(z1**2, -(z1**2)).is_zero()
    assert add(z1 * z2, z1 * z2) == 2 * z1 * z2
    s = add(z2 * z3, z1 * z3)
    assert len(s) == 2 and s.degree == 2


def test_add_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        add(z1, z1 * z2)


def test_mul_examples():
    assert mul(z1, z2**2) == z1 * z2 * z2
    assert mul(z2 + z3, z2 - z3) == z2**2 - z3**2
    assert mul(2 * 3 * z1, z2**2) == P("6*z1*z2^2")


def test_compose_examples():
    assert compose(z1, I_S) == z2 * z3
    assert compose(z1 * z2 * z3, (z1, z2, z3)) == z1 * z2 * z3
    assert compose(z1 + z2 + z3, I_S) == z2 * z3 + z1 * z3 + z1 * z2


def test_gcd_examples():
    assert gcd(z1**2 * z2, z1 * z3) == z1
    assert gcd(z2**2 - z3**2, z2 + z3) == z2 + z3
    raw = [compose(p, I_S) for p in I_S]
    # oracle: each raw component is z_i * z1 z2 z3
    for i, p in enumerate(raw):
        assert p == (z1, z2, z3)[i] * z1 * z2 * z3
    assert gcd_many(raw) == z1 * z2 * z3


def test_squarefree_examples():
    assert squarefree_decomposition(z1 * z2**2) == [(z1, 1), (z2, 2)]
    jac1 = jacobian_det(fixture_map("ex1_raw").forward)
    parts = dict((str(p), e) for p, e in squarefree_decomposition(jac1))
    assert parts == {"z1": 1, "z2": 2}
    f = (z2 + z3) ** 2 * (z3 - z2)
    got = squarefree_decomposition(f)
    assert [e for _, e in got] == [1, 2]
    assert got[1][0] == z2 + z3
    assert got[0][0].is_proportional(z3 - z2)


def test_linear_factors_examples():
    lines, rest = linear_factors(z2**2 - z3**2)
    assert sorted(map(str, lines)) == sorted(["z2 + z3", "z2 - z3"]) and rest.is_constant()
    conic = z2**2 - z1 * z3
    lines, rest = linear_factors(conic)
    assert lines == [] and rest.is_proportional(conic)
    jac = jacobian_det(fixture_map("ex4").forward)
    lines, rest = linear_factors(jac)
    assert len(lines) == 4
    assert rest.is_proportional(P("z3^2 - 2*z1*z3 - 2*z2*z3 - 4*z2^2"))
    for line in ["2*z2 - 3*z3", "z3 + 2*z2", "2*z2 + 3*z3", "z3 - 2*z2"]:
        assert any(l.is_proportional(P(line)) for l in lines), line


def test_multiplicity_examples():
    assert multiplicity_at(z1 * z2**2, ProjPoint(1, 0, 0)) == 2
    assert multiplicity_at(z2 + z3, ProjPoint(1, 0, 0)) == 1
    assert multiplicity_at(z2 + z3, ProjPoint(1, 1, 1)) == 0


def test_projpoint_canonical():
    assert ProjPoint(2, 4, 6) == ProjPoint(Fraction(1, 3), Fraction(2, 3), 1)
    assert ProjPoint(0, -3, 6).coords == (0, 1, -2)
    with pytest.raises(ValueError):
        ProjPoint(0, 0, 0)


def test_unipoly_det_small():
    x = UniPoly.x()
    assert unipoly_det([[x - 3]]) == x - 3
    m = [[x - 2, UniPoly.const(1)], [UniPoly.const(-3), x**3 + 2]]
    assert unipoly_det(m) == cofactor_det(m) == x**4 - 2 * x**3 + 2 * x - 1


def test_unipoly_division():
    x = UniPoly.x()
    p = (x - 1) ** 3 * (x + 1)
    assert p // (x - 1) == (x - 1) ** 2 * (x + 1)
    assert (x + 1).divides(p)
    assert not (x + 2).divides(p)
    assert str(x**2 - 2 * x + 1) == "x^2 - 2*x + 1"


# -- properties -------------------------------------------------------------


def _poly(deg):
    exps = [(a, b, deg - a - b) for a in range(deg + 1) for b in range(deg + 1 - a)]
    return st.lists(st.integers(-4, 4), min_size=len(exps), max_size=len(exps)).map(
        lambda cs: HomPoly({e: c for e, c in zip(exps, cs)})
    )


@given(_poly(2), _poly(2), _poly(1))
def test_mul_degree_and_gcd_divides(a, b, c):
    if a.is_zero() or c.is_zero():
        return
    assert (a * c).degree == a.degree + c.degree
    if not b.is_zero():
        g = gcd(a * c, b * c)
        assert g.divides(a * c) and g.divides(b * c)
        assert c.divides(g)


@given(_poly(2), _poly(2), _poly(2), _poly(2), _poly(2))
def test_compose_is_ring_homomorphism(f, g, s1, s2, s3):
    S = (s1, s2, s3)
    if any(s.is_zero() for s in S):
        return
    assert compose(f * g, S) == compose(f, S) * compose(g, S)
    assert compose(f + g, S) == compose(f, S) + compose(g, S)


@given(_poly(1), _poly(1), _poly(2))
def test_squarefree_reassembles(a, b, c):
    f = a * a * b * c
    if f.is_zero():
        return
    parts = squarefree_decomposition(f)
    prod = HomPoly.constant(1)
    for p, e in parts:
        prod = prod * p**e
    assert prod.is_proportional(f)
    for i, (p, _) in enumerate(parts):
        for q, _ in parts[i + 1 :]:
            assert gcd(p, q).is_constant()


@given(_poly(2), _poly(1), st.sampled_from([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (2, -1, 3)]))
def test_multiplicity_additive(f, g, pt):
    if f.is_zero() or g.is_zero():
        return
    p = ProjPoint(pt)
    assert multiplicity_at(f * g, p) == multiplicity_at(f, p) + multiplicity_at(g, p)


@given(_poly(2), st.integers(-5, 5).filter(bool), st.integers(1, 5))
def test_canonical_forms_unique(f, num, den):
    if f.is_zero():
        return
    assert (f * Fraction(num, den)).primitive().terms == f.primitive().terms
    a = ProjPoint(1, 2, 3)
    b = ProjPoint(Fraction(num, den), Fraction(2 * num, den), Fraction(3 * num, den))
    assert a.coords == b.coords
