import numpy as np
import pytest

from teleclone.search import maximize


def test_interior_maximum():
    res = maximize(lambda x: -(x - 0.3) ** 2, 0.0, 1.0)
    assert res.location == pytest.approx(0.3, abs=1e-6)
    assert res.value == pytest.approx(0.0, abs=1e-12)
    assert not res.degenerate
    assert res.bracket[0] <= res.location <= res.bracket[1]


def test_boundary_maximum():
    res = maximize(lambda x: x, 0.0, 2.0)
    assert res.location == pytest.approx(2.0, abs=1e-6)
    assert maximize(lambda x: -x, 0.0, 2.0).location == pytest.approx(0.0, abs=1e-6)


def test_flat_function_is_degenerate():
    res = maximize(lambda x: 0.5, 0.0, 1.0)
    assert res.degenerate
    assert res.bracket == (0.0, 1.0)


def test_known_optimum():
    # argmax of 4/(5 + 3 cosh 2r - 2 sqrt2 sinh 2r) is atanh(2 sqrt2 / 3) / 2
    f = lambda r: 4 / (5 + 3 * np.cosh(2 * r) - 2 * np.sqrt(2) * np.sinh(2 * r))  # noqa: E731
    res = maximize(f, 0.0, 1.0)
    assert res.location == pytest.approx(0.5 * np.arctanh(2 * np.sqrt(2) / 3), abs=1e-6)
    assert res.value == pytest.approx(2 / 3, abs=1e-12)


def test_argument_checks():
    with pytest.raises(ValueError):
        maximize(lambda x: x, 1.0, 1.0)
    with pytest.raises(ValueError):
        maximize(lambda x: x, 0.0, 1.0, grid=2)
    with pytest.raises(FloatingPointError):
        maximize(lambda x: np.nan, 0.0, 1.0)
