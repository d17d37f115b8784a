import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cremona.errors import InsufficientData
from cremona.orbits import decompose
from cremona.polyring import UniPoly
from cremona.recurrence import (
    DynamicsData,
    Recurrence,
    build_lambda,
    classify_growth,
    closed_form,
    cyclotomic,
    enumerate_candidates,
    forward_d,
    largest_real_root,
    lump,
    lumped_secular,
    minimal_recurrence,
    recurrence_check,
    secular,
    stratum_dimension,
    totient,
    totient_inverse,
)

from conftest import ORDINARY, fixture_map

x = UniPoly.x()
TRIB = x**3 - x**2 - x - 1


def data_of(name, bases):
    return DynamicsData.from_analysis(bases[name], decompose(fixture_map(name), bases[name], 30))


def rec(p):
    return Recurrence.from_poly(p)


# -- Lambda and det --------------------------------------------------------


def test_sigma_zero():
    d = DynamicsData(3)
    assert build_lambda(d) == [[x - 3]]
    assert secular(d).char_poly == x - 3
    assert forward_d(d, 5).d == [3**k for k in range(6)]


def test_ex4_secular(bases):
    d = data_of("ex4", bases)
    assert d.ms == (0, 0, 1)
    assert secular(d).char_poly == (x - 1) ** 2 * TRIB
    assert lumped_secular(d).char_poly == (x - 1) * TRIB


@pytest.mark.parametrize("m2, m3", [(a, b) for b in range(1, 9) for a in range(1, b)])
def test_set1_expansion(m2, m3):
    d = DynamicsData.canonical_quadratic((0, m2, m3))
    assert secular(d).char_poly == (x - 1) ** 2 * (x ** (m2 + m3 + 2) - 1)


def test_sets_2_to_4_literal():
    for ms, want in [
        ((1, 2, 3), (x - 1) ** 3 * (x + 1) * ((x**9 + 1) // (x**3 + 1))),
        ((1, 2, 4), (x - 1) ** 3 * (((x**15 + 1) * (x + 1)) // ((x**5 + 1) * (x**3 + 1)))),
        ((1, 2, 5), (x - 1) ** 3 * (x + 1) * (x**5 - 1) * (x**3 - 1)),
    ]:
        assert secular(DynamicsData.canonical_quadratic(ms)).char_poly == want


@pytest.mark.parametrize("m", range(1, 7))
def test_set5_aggregated(m):
    d = DynamicsData.canonical_quadratic((0, m, m))
    want = (x - 1) ** 2 * (x ** (m + 1) + 1)
    assert lumped_secular(d).char_poly == want
    assert want.divides(secular(d).char_poly)


def test_sets_6_to_8_aggregated():
    for ms, want in [
        ((1, 2, 2), (x - 1) ** 2 * ((x**6 + 1) // (x**2 + 1))),
        ((1, 1, 1), (x - 1) * ((x**3 + 1) // (x + 1))),
        ((2, 2, 2), (x - 1) ** 3 * (x + 1)),
    ]:
        d = DynamicsData.canonical_quadratic(ms)
        assert lumped_secular(d).char_poly == want
        assert want.divides(secular(d).char_poly)


def _random_data(draw_ms, draw_i, s, n):
    return DynamicsData(
        n,
        tuple((j + 1, j + 1, m) for j, m in enumerate(sorted(draw_ms))),
        tuple(draw_i[:s]),
        tuple(draw_i[s : 2 * s]),
        tuple(tuple(draw_i[2 * s + j * s : 2 * s + (j + 1) * s]) for j in range(s)),
    )


data_strategy = st.integers(0, 3).flatmap(
    lambda s: st.builds(
        _random_data,
        st.lists(st.integers(0, 4), min_size=s, max_size=s),
        st.lists(st.integers(0, 3), min_size=2 * s + s * s, max_size=2 * s + s * s),
        st.just(s),
        st.integers(1, 4),
    )
)


@given(data_strategy)
def test_order_identity(d):
    assert secular(d).order == sum(d.ms) + d.sigma1 + 1
    assert secular(d).char_poly.degree == sum(d.ms) + d.sigma1 + 1


@given(data_strategy)
def test_forward_secular_consistency(d):
    run = forward_d(d, 2 * secular(d).order + 6)
    assert recurrence_check(secular(d), run.d) == (True, None)
    lr = lumped_secular(d)
    assert recurrence_check(lr, run.d) == (True, None)
    assert lr.char_poly.divides(secular(d).char_poly)
    # minimal divides aggregated
    mini = minimal_recurrence(run.d)
    assert mini.char_poly.divides(lr.char_poly)


@given(data_strategy)
def test_lump_groups_are_consistent(d):
    L = lump(d)
    assert sum(len(g) for g in L.groups) == d.sigma1
    assert L.char_poly.degree <= secular(d).order


@pytest.mark.parametrize("name", ORDINARY)
def test_fixture_recurrences(name, bases):
    d = data_of(name, bases)
    run = forward_d(d, 2 * secular(d).order + 6)
    assert recurrence_check(secular(d), run.d)[0]
    mini = minimal_recurrence(run.d)
    assert mini.char_poly.divides(lumped_secular(d).char_poly)


# -- forward recursion -----------------------------------------------------


def test_forward_standard_quadratic():
    d = DynamicsData.canonical_quadratic((0, 0, 0))
    assert forward_d(d, 6).d == [1, 2, 1, 2, 1, 2, 1]


def test_forward_ex3(bases):
    run = forward_d(data_of("ex3", bases), 10)
    assert run.d[:8] == [1, 2, 4, 8, 13, 20, 28, 38]
    for k, v in enumerate(run.d):
        assert Fraction(3, 4) * k * k - Fraction(1, 8) * (-1) ** k + Fraction(9, 8) == v


def test_forward_ex4(bases):
    d = data_of("ex4", bases)
    run = forward_d(d, 8)
    assert run.d == [1, 3, 7, 13, 25, 47, 87, 161, 297]
    # d(2) = 3*3 - gamma_2(1) - gamma_4(1) - 2*gamma_1(0)
    g = run.gamma
    assert run.d[2] == 3 * 3 - g[2][1] - g[4][1] - 2 * g[1][0]


def test_forward_diagnostics(bases):
    run = forward_d(data_of("ex4", bases), 6, diagnostics=True)
    assert set(run.diagnostics) == {3, 5}


# -- recurrence checks -----------------------------------------------------


def test_recurrence_check_examples():
    ex2 = rec(x**3 - 2 * x**2 + 1)
    assert recurrence_check(ex2, [1, 2, 4, 7, 12, 20, 33]) == (True, None)
    ex1 = rec((x - 1) ** 2)
    assert recurrence_check(ex1, [1, 3, 5, 7, 9]) == (True, None)
    wrong = rec(x**2 - 2 * x + 2)
    assert recurrence_check(wrong, [1, 3, 5, 7, 9]) == (False, 0)
    with pytest.raises(InsufficientData):
        recurrence_check(ex2, [1, 2, 4])


def test_recurrence_text():
    assert str(rec(x**4 - 2 * x**3 + 2 * x - 1)) == "d(k+4) - 2*d(k+3) + 2*d(k+1) - d(k) = 0"


def test_minimal_recurrence_examples():
    assert minimal_recurrence([1, 2, 4, 8, 13, 20, 28, 38, 49, 62]).char_poly == x**4 - 2 * x**3 + 2 * x - 1
    assert minimal_recurrence([2**k for k in range(6)]).char_poly == x - 2
    assert minimal_recurrence([1, 2] * 4).char_poly == x**2 - 1
    with pytest.raises(InsufficientData):
        minimal_recurrence([1, 2, 4, 8, 13])


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_minimal_recurrence_recovers_generator(cs, init):
    p = UniPoly([*cs, 1])
    r = rec(p)
    seq = list(init[: r.order])
    while len(seq) < 2 * r.order + 8:
        k = len(seq) - r.order
        seq.append(-sum(a * seq[k + i] for i, a in enumerate(r.coefficients)))
    mini = minimal_recurrence(seq)
    assert mini.char_poly.divides(p)
    assert recurrence_check(mini, seq)[0]


# -- growth ----------------------------------------------------------------


def test_cyclotomics():
    assert cyclotomic(1) == x - 1
    assert cyclotomic(6) == x**2 - x + 1
    assert cyclotomic(12) == x**4 - x**2 + 1
    assert [totient(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert totient_inverse(4)[-1] >= 12 and 5 in totient_inverse(4)


def test_classify_tribonacci():
    g = classify_growth((x - 1) ** 2 * TRIB)
    assert g.cls == "Exponential"
    lo, hi = g.dominant_root
    assert Fraction(1839286, 10**6) <= lo and hi <= Fraction(1839288, 10**6) and hi - lo <= Fraction(1, 10**12)
    assert g.entropy == pytest.approx(0.609378, abs=1e-6)
    assert g.unit_factor == (x - 1) ** 2 and g.residual == TRIB


def test_classify_polynomial_and_bounded():
    g = classify_growth((x - 1) ** 3 * (x + 1) * (x**5 - 1) * (x**3 - 1))
    assert (g.cls, g.degree) == ("Polynomial", 4)
    assert classify_growth(x**2 - 1).cls == "Bounded"
    g = classify_growth(x**3 * (x - 1) ** 2)
    assert (g.cls, g.degree, g.delay) == ("Polynomial", 1, 3)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_classify_pure_power(n):
    g = classify_growth(x - n)
    assert g.cls == "Exponential" and g.entropy == pytest.approx(math.log(n), abs=1e-11)


def test_classify_complex_dominant_pair():
    # roots of x^2 + 4 have modulus 2 and no real root
    g = classify_growth(x**2 + 4)
    assert g.cls == "Exponential" and g.entropy == pytest.approx(math.log(2), abs=1e-8)


@given(st.lists(st.sampled_from([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12]), min_size=1, max_size=5))
def test_classify_cyclotomic_products(ns):
    p = UniPoly.const(1)
    for N in ns:
        p = p * cyclotomic(N)
    g = classify_growth(p)
    assert g.cls in ("Bounded", "Polynomial") and g.residual.degree == 0
    mult = max(ns.count(N) for N in set(ns))
    assert g.degree == mult - 1
    assert classify_growth(p * TRIB).cls == "Exponential"


def test_largest_real_root():
    lo, hi = largest_real_root(x**2 - 2)
    assert lo <= Fraction(14142135623730, 10**13) <= hi + Fraction(1, 10**12)
    assert largest_real_root(x**2 + 1) is None


# -- closed forms ----------------------------------------------------------


def test_closed_form_ex1():
    cf = closed_form(rec((x - 1) ** 2), [1, 3])
    assert cf.exact and [cf.evaluate(k) for k in range(6)] == [2 * k + 1 for k in range(6)]
    assert str(cf) == "1 + 2*k"


def test_closed_form_ex3():
    cf = closed_form(rec(x**4 - 2 * x**3 + 2 * x - 1), [1, 2, 4, 8])
    assert cf.exact
    for k in range(30):
        assert cf.evaluate(k) == Fraction(3, 4) * k * k - Fraction(1, 8) * (-1) ** k + Fraction(9, 8)


def test_closed_form_ex2_golden():
    cf = closed_form(rec(x**3 - 2 * x**2 + 1), [1, 2, 4])
    assert not cf.exact
    seq = [1, 2, 4]
    while len(seq) < 25:
        seq.append(2 * seq[-1] - seq[-3])
    for k, v in enumerate(seq):
        assert cf.evaluate(k) == pytest.approx(v, rel=1e-9)
    phi = next(r for r in cf.roots if r.interval is not None and r.interval[0] > 1)
    assert phi.interval[0] <= Fraction(1618033988749, 10**12) <= phi.interval[1] + Fraction(1, 10**12)


def test_closed_form_with_delay():
    # lambda * (lambda - 1): the sequence is constant from k = 1
    cf = closed_form(rec(x * (x - 1)), [1, 5])
    assert cf.start == 1 and cf.evaluate(3) == 5
    with pytest.raises(ValueError):
        cf.evaluate(0)


# -- screening -------------------------------------------------------------


def test_enumerate_candidates_catalogue():
    rows = {c.ms: c for c in enumerate_candidates(2, 3, 5)}
    assert len(rows) == 56  # multisets of size 3 from {0..5}
    assert rows[(2, 2, 2)].reduced_poly == (x - 1) ** 3 * (x + 1)
    assert rows[(1, 2, 3)].char_poly == (x - 1) ** 3 * (x + 1) * ((x**9 + 1) // (x**3 + 1))
    assert rows[(1, 1, 1)].growth.cls != "Exponential"
    assert rows[(2, 2, 2)].growth.degree == 2
    assert list(rows) == sorted(rows)
    assert stratum_dimension(3) == 8


def test_enumerate_custom_i_data(bases):
    d = data_of("ex4", bases)
    rows = enumerate_candidates(3, 3, 1, i_data=d)
    by_ms = {c.ms: c for c in rows}
    assert by_ms[(0, 0, 1)].char_poly == (x - 1) ** 2 * TRIB


@pytest.mark.parametrize(
    "ms", [(0, 1, 2), (0, 2, 5), (1, 2, 3), (1, 2, 4), (1, 2, 5), (0, 3, 3), (1, 2, 2), (1, 1, 1), (2, 2, 2)]
)
def test_polynomial_bound_empirical(ms):
    d = DynamicsData.canonical_quadratic(ms)
    g = classify_growth(lumped_secular(d))
    assert g.cls != "Exponential"
    seq = forward_d(d, 200).d
    ratios = [abs(v) / (k + 1) ** g.degree for k, v in enumerate(seq)]
    # bounded by C * k^degree: the ratio does not keep growing
    assert max(ratios[100:]) <= 1.5 * max(ratios[:100])
