"""Randomized invariants driven by hypothesis."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from slicecauchy import (
    build_octonions,
    build_quaternions,
    decompose,
    phi_J,
    sample_sphere,
    sigma_metric,
    slice_product,
    star_product,
)
from slicecauchy.algebra import Element
from slicecauchy.cauchy import cauchy_kernel
from slicecauchy.cone import in_quadratic_cone
from slicecauchy.slices import Poly, SliceFunction, polynomial

H = build_quaternions()
O = build_octonions()

coef = st.floats(-2, 2, allow_nan=False, allow_infinity=False)


def elements(alg):
    return st.lists(coef, min_size=alg.dim, max_size=alg.dim).map(lambda c: Element(alg, c))


def cone_elements(alg):
    @st.composite
    def build(draw):
        r = draw(st.floats(-1.5, 1.5))
        s = draw(st.floats(0.05, 1.5))
        seed = draw(st.integers(0, 2 ** 20))
        return phi_J(complex(r, s), sample_sphere(alg, seed=seed)[0])
    return build()


@settings(max_examples=50, deadline=None)
@given(elements(O), elements(O), elements(O))
def test_bilinear_and_involution(x, y, z):
    assert ((x + y) * z).allclose(x * z + y * z, 1e-12)
    assert x.conj().conj() == x
    assert (x * y).conj().allclose(y.conj() * x.conj(), 1e-12)


@settings(max_examples=50, deadline=None)
@given(cone_elements(O))
def test_cone_roundtrip_and_norm(x):
    d = decompose(x)
    assert d.reconstruct().allclose(x, 1e-12)
    n = float((x * x.conj()).coeffs[0])
    assert abs(n - np.dot(x.coeffs, x.coeffs)) <= 1e-10 * max(1.0, n)
    p = x
    for _ in range(5):
        p = p * x
        assert in_quadratic_cone(p)


@settings(max_examples=30, deadline=None)
@given(st.lists(elements(O), min_size=1, max_size=4), st.lists(elements(O), min_size=1, max_size=4),
       cone_elements(O))
def test_star_equals_slice_product(p, q, x):
    lhs = polynomial(star_product(p, q))(x)
    rhs = slice_product(polynomial(p), polynomial(q))(x)
    scale = max(1.0, np.linalg.norm(lhs.coeffs))
    assert np.linalg.norm((lhs - rhs).coeffs) <= 1e-12 * scale


@settings(max_examples=50, deadline=None)
@given(cone_elements(O), cone_elements(O))
def test_kernel_inverts_linear(y, x):
    dz = decompose(x).z
    w = decompose(y).z
    if abs((dz - w) * (dz - w.conjugate())) < 0.1:
        return
    lin = SliceFunction(Poly(np.stack([y.coeffs, -O.one().coeffs])), O)
    val = slice_product(cauchy_kernel(y), lin)(x)
    assert val.allclose(O.one(), 1e-12)


@settings(max_examples=50, deadline=None)
@given(cone_elements(H), cone_elements(H))
def test_sigma_dominates_euclidean(x, y):
    assert sigma_metric(x, y) >= np.linalg.norm((x - y).coeffs) - 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(elements(O), min_size=1, max_size=5), cone_elements(O))
def test_well_posed_under_sign_flip(coeffs, x):
    f = polynomial(coeffs)
    d = decompose(x)
    F = f.stem.evaluate(np.array(d.z), O)
    G = f.stem.evaluate(np.array(d.z.conjugate()), O)
    a = Element(O, F[0]) + d.unit * Element(O, F[1])
    b = Element(O, G[0]) + (-d.unit) * Element(O, G[1])
    assert a.allclose(b, 1e-12 * max(1.0, np.linalg.norm(a.coeffs)))
