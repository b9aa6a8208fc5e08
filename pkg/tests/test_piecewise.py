"""
Tests for piecewise exponential-polynomial functions
"""

import math

import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import integrate as quadrature

from src.errors import DivergentTail
from src.tools.piecewise import INF, PiecewiseExpPoly

quarters = st.integers(min_value=-8, max_value=8).map(lambda n: n / 4)
rates = st.integers(min_value=-4, max_value=4).map(lambda n: n / 4)
points = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def _anchor(lo, hi):
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi
    if math.isinf(hi):
        return lo
    return 0.5 * (lo + hi)


def reference_value(breakpoints, pieces, x):
    """Direct evaluation of the raw (coeff, degree, rate) description"""
    i = sum(1 for b in breakpoints if b <= x)
    lo = breakpoints[i - 1] if i > 0 else -INF
    hi = breakpoints[i] if i < len(breakpoints) else INF
    t = x - _anchor(lo, hi)
    return math.fsum(c * t ** n * math.exp(r * t) for c, n, r in pieces[i])


@st.composite
def descriptions(draw, decaying=False):
    breakpoints = sorted(draw(st.sets(st.integers(min_value=-4, max_value=4),
                                      min_size=1 if decaying else 0, max_size=3)))
    breakpoints = [b / 2 for b in breakpoints]
    pieces = []
    for i in range(len(breakpoints) + 1):
        count = draw(st.integers(min_value=0 if not decaying else 1, max_value=2))
        terms = []
        for _ in range(count):
            rate = draw(rates)
            if decaying and i == 0:
                rate = draw(st.integers(min_value=1, max_value=4).map(lambda n: n / 4))
            elif decaying and i == len(breakpoints):
                rate = draw(st.integers(min_value=-4, max_value=-1).map(lambda n: n / 4))
            terms.append((draw(quarters), draw(st.integers(min_value=0, max_value=2)), rate))
        pieces.append(terms)
    return breakpoints, pieces


def build(description):
    return PiecewiseExpPoly.from_pieces(*description)


class TestEvaluation:
    @given(description=descriptions(), x=points)
    @settings(max_examples=100, deadline=None)
    def test_matches_raw_description(self, description, x):
        assert math.isclose(build(description)(x), reference_value(*description, x),
                            rel_tol=1e-9, abs_tol=1e-9)

    def test_breakpoint_takes_the_right_piece(self):
        f = PiecewiseExpPoly.from_pieces((1.0,), ([(1, 0, 0)], [(2, 0, 0)]))
        assert f(1.0) == 2.0
        assert f(0.999) == 1.0

    def test_equal_constant_pieces_merge(self):
        f = PiecewiseExpPoly.from_pieces((0.0, 1.0), ([(3, 0, 0)], [(3, 0, 0)], [(1, 1, -1)]))
        assert f.breakpoints == (1.0,)

    def test_describe(self):
        f = PiecewiseExpPoly.from_pieces((0.0,), ([], [(1, 1, -1)]))
        assert f.describe().splitlines()[0] == "(-inf, 0): 0"
        assert "exp(-1*x)" in f.describe()


class TestAlgebra:
    @given(f=descriptions(), g=descriptions(), x=points)
    @settings(max_examples=100, deadline=None)
    def test_sum(self, f, g, x):
        expected = reference_value(*f, x) + reference_value(*g, x)
        assert math.isclose((build(f) + build(g))(x), expected, rel_tol=1e-9, abs_tol=1e-7)

    @given(f=descriptions(), g=descriptions(), x=points)
    @settings(max_examples=100, deadline=None)
    def test_product(self, f, g, x):
        expected = reference_value(*f, x) * reference_value(*g, x)
        assert math.isclose((build(f) * build(g))(x), expected, rel_tol=1e-9, abs_tol=1e-6)

    @given(f=descriptions(), c=quarters, x=points)
    @settings(max_examples=100, deadline=None)
    def test_shift(self, f, c, x):
        assert math.isclose(build(f).shift(c)(x), reference_value(*f, x + c), rel_tol=1e-9, abs_tol=1e-7)

    @given(f=descriptions(), lo=quarters, width=st.integers(min_value=1, max_value=8), x=points)
    @settings(max_examples=100, deadline=None)
    def test_clamp(self, f, lo, width, x):
        hi = lo + width / 4
        assume(x not in (lo, hi))
        expected = reference_value(*f, x) if lo < x < hi else 0.0
        assert math.isclose(build(f).clamp(lo, hi)(x), expected, rel_tol=1e-9, abs_tol=1e-7)

    def test_empty_clamp_is_zero(self):
        f = PiecewiseExpPoly.constant(2.0)
        assert f.clamp(1.0, 1.0).term_count == 0

    def test_scale(self):
        f = PiecewiseExpPoly.from_pieces((0.0,), ([(1, 0, 1)], [(1, 2, -1)]))
        assert f.scale(3.0)(1.5) == pytest.approx(3.0 * f(1.5))
        assert f.scale(0.0).term_count == 0


class TestIntegration:
    def test_gamma_two(self):
        f = PiecewiseExpPoly.from_pieces((0.0,), ([], [(1, 1, -1)]))
        assert f.integrate() == pytest.approx(1.0, rel=1e-12)

    def test_two_sided_moments(self):
        # x e^x on (-inf, 0) integrates to -1, 2 x^2 e^{-x/2} on (0, inf) to 32
        f = PiecewiseExpPoly.from_pieces((0.0,), ([(1, 1, 1)], [(2, 2, -0.5)]))
        assert f.integrate() == pytest.approx(31.0, rel=1e-12)
        assert f.integrate(-INF, 0.0) == pytest.approx(-1.0, rel=1e-12)

    def test_unit_density(self):
        density = PiecewiseExpPoly.from_pieces((1.0,), ([(1, 0, 2)], [(1, 0, -2)]))
        assert density.integrate() == pytest.approx(1.0, rel=1e-12)

    def test_divergent_tail(self):
        with pytest.raises(DivergentTail):
            PiecewiseExpPoly.constant(1.0).integrate()
        with pytest.raises(DivergentTail):
            PiecewiseExpPoly.from_pieces((0.0,), ([], [(1, 1, 0.5)])).integrate_upper()

    def test_finite_range_of_a_constant(self):
        assert PiecewiseExpPoly.constant(2.0).integrate(-1.0, 2.5) == pytest.approx(7.0)
        assert PiecewiseExpPoly.constant(2.0).integrate(2.5, -1.0) == pytest.approx(-7.0)

    @given(f=descriptions(), lo=quarters, width=st.integers(min_value=1, max_value=12))
    @settings(max_examples=50, deadline=None)
    def test_matches_quadrature(self, f, lo, width):
        hi = lo + width / 4
        inside = [b for b in f[0] if lo < b < hi]
        expected, _ = quadrature.quad(lambda x: reference_value(*f, x), lo, hi,
                                      points=inside or None, epsabs=1e-11, epsrel=1e-11)
        assert math.isclose(build(f).integrate(lo, hi), expected, rel_tol=1e-7, abs_tol=1e-7)

    @given(f=descriptions(decaying=True), c=points)
    @settings(max_examples=50, deadline=None)
    def test_additivity(self, f, c):
        g = build(f)
        total = g.integrate()
        assert g.integrate(-INF, c) + g.integrate(c, INF) == pytest.approx(total, rel=1e-9, abs=1e-9)

    @given(f=descriptions(decaying=True), x=points)
    @settings(max_examples=50, deadline=None)
    def test_upper_and_lower_integrals(self, f, x):
        g = build(f)
        upper, lower = g.integrate_upper(), g.integrate_lower()
        assert upper(x) == pytest.approx(g.integrate(x, INF), rel=1e-9, abs=1e-9)
        assert lower(x) == pytest.approx(g.integrate(-INF, x), rel=1e-9, abs=1e-9)
        assert upper(x) + lower(x) == pytest.approx(g.integrate(), rel=1e-9, abs=1e-9)
