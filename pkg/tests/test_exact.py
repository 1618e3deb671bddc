from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from obsmorph.exact import (AlgebraicTime, DegenerateSegment, Intersection, QuadraticPoly, ZeroPolynomial,
                            eval_at, format_rational, moving_orientation, on_segment, orientation,
                            parse_rational, qsign, real_roots, roots_in_unit_interval, segments_intersect)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=12)
points = st.tuples(rats, rats)
polys = st.builds(QuadraticPoly, rats, rats, rats)


@given(points, points, points)
def test_orientation_antisymmetry_and_rotation(a, b, c):
    assert orientation(a, b, c) == -orientation(b, a, c)
    assert orientation(a, b, c) == orientation(b, c, a)


@given(rats)
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1.5.2", 1.5, None])
def test_malformed_rationals(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_integers_canonicalise():
    assert type(parse_rational("6/3")) is int and format_rational(2) == "2/1"


def test_segment_cases():
    assert segments_intersect((0, 0), (2, 2), (0, 2), (2, 0)) == Intersection.PROPER
    assert segments_intersect((0, 0), (2, 0), (1, 0), (1, 5)) == Intersection.TOUCHING
    assert segments_intersect((0, 0), (1, 0), (2, 0), (3, 0)) == Intersection.DISJOINT
    with pytest.raises(DegenerateSegment):
        on_segment((0, 0), (1, 1), (1, 1))


@given(points, points, points, points)
def test_intersection_is_symmetric(a, b, c, d):
    assume(a != b and c != d)
    assert segments_intersect(a, b, c, d) == segments_intersect(c, d, a, b)
    assert segments_intersect(a, b, c, d) == segments_intersect(b, a, d, c)


@given(polys)
def test_real_roots_are_exact_zeros(f):
    assume(not f.is_zero())
    rs = real_roots(f)
    assert rs == sorted(rs)
    for t in rs:
        assert qsign(eval_at(f, t)) == 0


def test_zero_polynomial_has_no_root_set():
    with pytest.raises(ZeroPolynomial):
        real_roots(QuadraticPoly(0))


def test_irrational_roots_and_unit_interval():
    rs = real_roots(QuadraticPoly(Fraction(-1, 2), 0, 1))  # t^2 = 1/2
    assert [round(float(t), 12) for t in rs] == [round(-0.5 ** 0.5, 12), round(0.5 ** 0.5, 12)]
    assert roots_in_unit_interval(QuadraticPoly(Fraction(-1, 2), 0, 1)) == rs[1:]


@given(rats, rats, st.integers(1, 30), rats, rats, st.integers(1, 30))
def test_algebraic_compare_matches_float_when_separated(p1, q1, d1, p2, q2, d2):
    a, b = AlgebraicTime.make(p1, q1, 1, d1), AlgebraicTime.make(p2, q2, 1, d2)
    fa, fb = float(a), float(b)
    assert a.compare(a) == 0
    assert a.compare(b) == -b.compare(a)
    if abs(fa - fb) > 1e-9:
        assert a.compare(b) == (1 if fa > fb else -1)


def test_algebraic_normalisation():
    assert AlgebraicTime.make(1, 1, 2, 8) == AlgebraicTime.make(1, 2, 2, 2)
    assert AlgebraicTime.make(0, 1, 1, 4) == 2
    assert AlgebraicTime.make(1, 1, 1, 2) != AlgebraicTime.make(1, 1, 1, 3)


@given(rats, rats, st.integers(0, 40), st.fractions(min_value=1, max_value=9))
def test_algebraic_json_round_trip(p, q, d, r):
    t = AlgebraicTime.make(p, q, r, d)
    assert AlgebraicTime.from_json(t.to_json()) == t


@given(points, points, points, points, points, points, st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_moving_orientation_matches_static(a0, a1, b0, b1, c0, c1, t):
    f = moving_orientation(a0, a1, b0, b1, c0, c1)

    def at(p, q):
        return (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)
    a, b, c = at(a0, a1), at(b0, b1), at(c0, c1)
    assert f(t) == (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
