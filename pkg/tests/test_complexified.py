import numpy as np

from slicecauchy.complexified import ComplexElement, c_conj, embed, embed_scalar, scalar_mul


def _rand(alg, rng):
    return ComplexElement(alg.random_element(rng), alg.random_element(rng))


def test_imaginary_unit_squares_to_minus_one(H):
    u = embed_scalar(1j, H)
    assert (u * u).allclose(embed(-H.one()))


def test_zero_divisor(H):
    i, j = H.basis("i"), H.basis("j")
    v = ComplexElement(i, j)
    w = v * v
    assert w.allclose(ComplexElement(H.zero(), H.zero()))


def test_embedding_is_multiplicative(O):
    rng = np.random.default_rng(0)
    x, y = O.random_element(rng), O.random_element(rng)
    assert (embed(x) * embed(y)).allclose(embed(x * y))


def test_conjugation(H):
    rng = np.random.default_rng(1)
    v, w = _rand(H, rng), _rand(H, rng)
    assert c_conj(c_conj(v)).allclose(v)
    assert c_conj(v * w).allclose(c_conj(v) * c_conj(w), 1e-12)


def test_scalar_action(H):
    rng = np.random.default_rng(2)
    v = _rand(H, rng)
    assert scalar_mul(1j, v).allclose(ComplexElement(-v.im, v.re))
    assert scalar_mul(1.0, v).allclose(v)
    z1, z2 = 0.3 - 1.2j, -2 + 0.5j
    assert scalar_mul(z1 * z2, v).allclose(scalar_mul(z1, scalar_mul(z2, v)), 1e-12)
    assert scalar_mul(z1, v).allclose(embed_scalar(z1, H) * v, 1e-12)
