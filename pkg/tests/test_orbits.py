from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cremona.errors import HitsInverseFPoint
from cremona.orbits import Cycle, Matched, Unresolved, decompose, orbit_of, step_forward, step_inverse, verify_pairs
from cremona.parsing import load_fixture
from cremona.polyring import ProjPoint

from conftest import ORDINARY, fixture_base, fixture_map


@pytest.fixture(scope="module")
def decomps(bases):
    return {name: decompose(fixture_map(name), bases[name], 30) for name in ORDINARY}


def test_ex4_decomposition(decomps):
    d = decomps["ex4"]
    assert d.pair_tuples() == [(2, 3, 0), (4, 5, 0), (1, 1, 1)]
    assert d.classes == {1: "int", 2: "int", 3: "inf", 4: "int", 5: "inf"}
    assert d.inv_classes == {1: "int", 2: "inf", 3: "int", 4: "inf", 5: "int"}


def test_ex3_decomposition(decomps, bases):
    d = decomps["ex3"]
    assert d.pair_tuples() == [(1, 1, 2), (2, 3, 2), (3, 2, 2)]
    assert not d.unresolved
    # two inverse steps take O_1 onto O^(-1)_1
    m, b = fixture_map("ex3"), bases["ex3"]
    p = step_inverse(m, step_inverse(m, b.points[0].coords))
    assert p == b.inv_points[0].coords


def test_ex2_star_decomposition(decomps):
    d = decomps["ex2_star"]
    assert d.pair_tuples() == [(3, 3, 1)]
    assert d.classes[1] == d.classes[2] == "inf"


def test_ex1_generic_fixed_point(decomps, bases):
    m, b = fixture_map("ex1_phi3_generic"), bases["ex1_phi3_generic"]
    o2 = b.points[1].coords
    assert step_inverse(m, o2) == o2
    assert decomps["ex1_phi3_generic"].classes[2] == "cycle"
    assert decomps["ex1_phi3_generic"].pair_tuples() == [(1, 1, 0), (3, 2, 0)]


def test_standard_quadratic(decomps):
    m = fixture_map("std_quadratic")
    assert step_forward(m, ProjPoint(1, 1, 1)) == ProjPoint(1, 1, 1)
    assert decomps["std_quadratic"].pair_tuples() == [(1, 1, 0), (2, 2, 0), (3, 3, 0)]
    rec = orbit_of(m, ProjPoint(1, 1, 1), horizon=5)
    assert rec.status == Cycle(period=1, entry_offset=0)


def test_identity_has_no_f_points(decomps):
    d = decomps["identity"]
    assert d.pairs == [] and d.classes == {}


def test_step_at_f_point_raises():
    with pytest.raises(HitsInverseFPoint):
        step_inverse(fixture_map("ex1_phi3_generic"), ProjPoint(0, 0, 1))


@pytest.mark.parametrize("lam, d", [(2, 1), (3, 1), (2, 5), (Fraction(1, 2), 3), (-3, 2)])
def test_ex1_raw_inverse_orbit_formula(lam, d):
    mf = load_fixture("ex1_raw")
    mf.parameters.update({"lambda": str(lam), "d": str(d)})
    m = mf.birat_map()
    p = ProjPoint(1, 0, 0)
    lam = Fraction(lam)
    for k in range(1, 8):
        p = step_inverse(m, p)
        assert p == ProjPoint(lam**k, -d * (lam**k - 1) / (lam - 1), 0)


@pytest.mark.parametrize("name", ORDINARY)
def test_pairs_verified_exactly(name, decomps, bases):
    assert verify_pairs(fixture_map(name), bases[name], decomps[name].pairs)


def test_orbit_targets_and_horizon(bases):
    m, b = fixture_map("ex3"), bases["ex3"]
    targets = {bp.coords: bp.index for bp in b.inv_points}
    rec = orbit_of(m, b.points[0].coords, targets=targets, horizon=10, start=1)
    assert rec.status == Matched(target=1, steps=2)
    short = orbit_of(m, b.points[0].coords, targets=targets, horizon=1, start=1)
    assert short.status == Unresolved(1)


@given(st.integers(1, 40))
def test_horizon_monotone_and_deterministic(h):
    # pairs found at a short horizon persist at a longer one
    m = fixture_map("ex4")
    b = fixture_base("ex4")
    a = decompose(m, b, h)
    again = decompose(m, b, h)
    longer = decompose(m, b, h + 5)
    assert a.pair_tuples() == again.pair_tuples()
    assert set(a.pair_tuples()) <= set(longer.pair_tuples())
