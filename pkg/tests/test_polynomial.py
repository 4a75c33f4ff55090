import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teleclone.polynomial import MAX_DEGREE, Polynomial, gaussian_moment

coeff = st.floats(-3.0, 3.0, allow_nan=False)


@st.composite
def polynomials(draw, nvars=3, max_terms=5, max_exp=3):
    n = draw(st.integers(1, max_terms))
    exps = draw(st.lists(st.lists(st.integers(0, max_exp), min_size=nvars, max_size=nvars), min_size=n, max_size=n))
    coeffs = draw(st.lists(coeff, min_size=n, max_size=n))
    return Polynomial(np.array(exps), np.array(coeffs), nvars)


@st.composite
def covariances(draw, n=3):
    a = np.array(draw(st.lists(st.floats(-1.0, 1.0), min_size=n * n, max_size=n * n))).reshape(n, n)
    return a @ a.T + 0.2 * np.eye(n)


POINTS = np.random.default_rng(0).normal(size=(6, 3))


def test_constructors():
    x = Polynomial.variable(0, 2)
    assert x.degree == 1
    assert Polynomial.zero(2).is_zero()
    assert Polynomial.constant(2.5, 2).constant_term() == 2.5
    lin = Polynomial.linear([1.0, -2.0], 3.0)
    assert lin.evaluate([1.0, 1.0]) == pytest.approx(2.0)
    d = {(1, 0): 2.0, (0, 2): -1.0}
    assert Polynomial.from_dict(d, 2).to_dict() == d


def test_duplicate_monomials_merge():
    p = Polynomial(np.array([[1, 0], [1, 0], [0, 1]]), np.array([1.0, -1.0, 2.0]), 2)
    assert p.to_dict() == {(0, 1): 2.0}


@given(polynomials(), polynomials())
@settings(max_examples=60)
def test_arithmetic_matches_evaluation(p, q):
    pv, qv = p.evaluate(POINTS), q.evaluate(POINTS)
    assert np.allclose((p + q).evaluate(POINTS), pv + qv)
    assert np.allclose((p - q).evaluate(POINTS), pv - qv)
    assert np.allclose((p * q).evaluate(POINTS), pv * qv, rtol=1e-9, atol=1e-9)
    assert np.allclose((p**2).evaluate(POINTS), pv**2, rtol=1e-9, atol=1e-9)


@given(polynomials())
@settings(max_examples=40)
def test_derivative_by_finite_difference(p):
    h = 1e-6
    step = np.zeros(3)
    step[1] = h
    fd = (p.evaluate(POINTS + step) - p.evaluate(POINTS - step)) / (2 * h)
    assert np.allclose(p.diff(1).evaluate(POINTS), fd, rtol=1e-5, atol=1e-4)


@given(polynomials(), covariances())
@settings(max_examples=40)
def test_expectation_matches_isserlis(p, cov):
    direct = sum(c * gaussian_moment(cov, e) for e, c in zip(p.exps, p.coeffs))
    assert p.expectation(cov) == pytest.approx(direct, rel=1e-9, abs=1e-9)


@given(polynomials(), st.lists(coeff, min_size=6, max_size=6), st.lists(coeff, min_size=3, max_size=3))
@settings(max_examples=40)
def test_substitute_matches_composition(p, mat, shift):
    a = np.array(mat).reshape(3, 2)
    z = POINTS[:, :2]
    expected = p.evaluate(z @ a.T + np.array(shift))
    assert np.allclose(p.substitute(a, shift).evaluate(z), expected, rtol=1e-8, atol=1e-8)


def test_smooth_is_heat_flow():
    # E[(y + u)^4] = y^4 + 6 y^2 s + 3 s^2
    p = Polynomial.variable(0, 1) ** 4
    s = p.smooth([[0.5]])
    assert s.to_dict() == pytest.approx({(4,): 1.0, (2,): 3.0, (0,): 0.75})


def test_isserlis_values():
    g = np.array([[2.0, 0.5], [0.5, 1.0]])
    assert gaussian_moment(g, (4, 0)) == pytest.approx(12.0)
    assert gaussian_moment(g, (2, 2)) == pytest.approx(2.0 + 2 * 0.25)
    assert gaussian_moment(g, (1, 0)) == 0.0
    assert gaussian_moment(g, (0, 0)) == 1.0
    with pytest.raises(ValueError):
        gaussian_moment(g, (1,))
    with pytest.raises(OverflowError):
        gaussian_moment(g, (MAX_DEGREE + 2, 0))


def test_embed_restrict_roundtrip():
    p = Polynomial.from_dict({(2, 1): 1.5}, 2)
    big = p.embed(4, [3, 1])
    assert big.to_dict() == {(0, 1, 0, 2): 1.5}
    assert big.restrict([3, 1]).to_dict() == p.to_dict()
    with pytest.raises(ValueError):
        big.restrict([3])


def test_variable_count_mismatch():
    with pytest.raises(ValueError):
        Polynomial.variable(0, 2) + Polynomial.variable(0, 3)
