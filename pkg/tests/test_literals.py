import numpy as np
import pytest

from slicecauchy import build_clifford, parse_element, parse_polynomial
from slicecauchy.literals import LiteralError

from conftest import close


@pytest.mark.parametrize("text,coeffs", [
    ("(i+j)/sqrt2", [0, 2 ** -0.5, 2 ** -0.5, 0, 0, 0, 0, 0]),
    ("2+3i", [2, 3, 0, 0, 0, 0, 0, 0]),
    ("k(ij)", [0, 0, 0, 0, 0, 0, 0, 1]),
    ("−ij/√2", [0, 0, 0, -(2 ** -0.5), 0, 0, 0, 0]),
    ("sqrt(2) i", [0, 2 ** 0.5, 0, 0, 0, 0, 0, 0]),
    ("1.5e-1", [0.15, 0, 0, 0, 0, 0, 0, 0]),
    ("i*j", [0, 0, 0, 1, 0, 0, 0, 0]),
    ("k i", [0, 0, 0, 0, 0, -1, 0, 0]),
])
def test_element_literals(O, text, coeffs):
    assert np.allclose(parse_element(text, O).coeffs, coeffs)


def test_clifford_names_beat_exponents():
    c = build_clifford(3, 0)
    x = parse_element("e12 + 2e1 - 0.5e123", c)
    assert close(x, c.basis("e12") + 2 * c.basis("e1") - 0.5 * c.basis("e123"))


def test_symbols(H):
    J = H.basis("j")
    assert close(parse_element("1 + 2J", H, {"J": J}), 1 + 2 * J)


def test_polynomials(H):
    i = H.basis("i")
    p = parse_polynomial("z*i", H)
    assert np.allclose(p, [np.zeros(4), i.coeffs])
    assert np.allclose(parse_polynomial("i z", H), p)  # the variable commutes with coefficients
    q = parse_polynomial("(z - J)^2", H, {"J": i})
    assert np.allclose(q, [(-H.one()).coeffs, (-2 * i).coeffs, H.one().coeffs])
    assert parse_polynomial("3", H).shape == (1, 4)


@pytest.mark.parametrize("bad", ["i/j", "(i", "2+", "q", "i^j", "sqrt(-1)", "1/0"])
def test_errors(H, bad):
    with pytest.raises(LiteralError):
        parse_element(bad, H)


def test_variable_clash():
    c = build_clifford(0, 1)
    with pytest.raises(LiteralError):
        parse_polynomial("x", c, variables=("e1",))
