import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatcw import dual as dl
from fatcw.dual import Dual

finite = st.floats(-5, 5, allow_nan=False)


def fd(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.mark.parametrize(
    "f",
    [
        lambda x: x * x + 3 * x,
        lambda x: 1.0 / (2.0 + x * x),
        lambda x: dl.sin(x) * dl.cos(x),
        lambda x: dl.exp(-x * x),
        lambda x: dl.sqrt(1.0 + x * x),
        lambda x: (1.0 + x * x) ** 1.5,
        lambda x: 2.0 - x / (3.0 + dl.sin(x)),
    ],
)
@given(x=finite)
@settings(max_examples=40, deadline=None)
def test_matches_central_difference(f, x):
    d = f(Dual.variable(x))
    assert np.isclose(d.val, f(x), rtol=1e-12, atol=1e-12)
    assert np.isclose(d.der, fd(f, x), rtol=1e-6, atol=1e-6)


def test_vectorised_and_mixed_with_arrays():
    x = Dual.variable(np.array([0.5, 1.0, 2.0]))
    y = np.array([1.0, 2.0, 3.0]) * x + x * x
    np.testing.assert_allclose(y.val, [0.75, 3.0, 10.0])
    np.testing.assert_allclose(y.der, [2.0, 4.0, 7.0])


def test_reflected_ops():
    x = Dual.variable(2.0)
    assert (1.0 - x).der == -1.0
    assert (1.0 / x).der == pytest.approx(-0.25)
    assert (-x).val == -2.0


def test_absolute_and_where():
    x = Dual.variable(np.array([-2.0, 3.0]))
    a = dl.absolute(x)
    np.testing.assert_array_equal(a.der, [-1.0, 1.0])
    w = dl.where(x.val > 0, x * x, 0.0)
    np.testing.assert_array_equal(w.val, [0.0, 9.0])
    np.testing.assert_array_equal(w.der, [0.0, 6.0])


def test_chain_and_helpers():
    x = Dual.variable(0.3)
    y = dl.chain(x, np.tanh(0.3), 1 - np.tanh(0.3) ** 2)
    assert y.der == pytest.approx(1 - np.tanh(0.3) ** 2)
    assert dl.chain(0.3, 1.0, 5.0) == 1.0
    assert dl.value(2.0) == 2.0 and dl.derivative(2.0) == 0.0
    assert dl.is_dual(x) and not dl.is_dual(0.3)


def test_dual_exponent_rejected():
    with pytest.raises(TypeError):
        Dual.variable(1.0) ** Dual.variable(1.0)
