import json

import numpy as np
import pytest

from slicecauchy import (
    CapabilityError,
    DomainError,
    PlanarDomain,
    SliceFunction,
    StemSymmetryError,
    conjugation,
    constant,
    decompose,
    eval_stem,
    half_plane_function,
    is_slice_preserving,
    is_slice_regular,
    phi_J,
    polynomial,
    representation_formula,
    sample_sphere,
    slice_derivatives,
    slice_product,
    star_product,
    stem_from_plane_values,
)
from slicecauchy.cauchy import characteristic_poly
from slicecauchy.complexified import ComplexElement
from slicecauchy.slices import (
    Const,
    ConjVar,
    Poly,
    Product,
    RationalRealDen,
    Sampler,
    Sum,
    stem_from_dict,
    stem_symmetry_defect,
)

from conftest import close, cone_points


def test_eval_stem_examples(H):
    i = H.basis("i")
    F = Poly(np.stack([H.zero().coeffs, i.coeffs]))
    v = eval_stem(F, 2j, H)
    assert v.re == H.zero()
    assert v.im == 2 * i
    c = Const((1 + i).coeffs)
    assert eval_stem(c, 0.3 - 4j, H).allclose(ComplexElement(1 + i, H.zero()))
    v = eval_stem(ConjVar(), 1 + 2j, H)
    assert v.re == H.one() and v.im == -2 * H.one()


def test_eval_slice_examples(H):
    i, j, k = (H.basis(n) for n in "ijk")
    f = polynomial([H.zero(), i])
    assert f(j) == -k


def test_half_plane_function(H):
    J = H.basis("i")
    f = half_plane_function(J)
    for x in cone_points(H, 20, seed=2):
        d = decompose(x)
        assert close(f(x), H.one() - d.unit * J)
    assert close(f(phi_J(0.3 + 0.5j, J)), 2 * H.one())
    assert close(f(phi_J(0.3 - 0.5j, J)), H.zero())
    with pytest.raises(DomainError):
        f(H.one())


def test_real_points_ignore_default_unit(O):
    rng = np.random.default_rng(0)
    f = SliceFunction(Poly(rng.standard_normal((4, 8))), O)
    x = 0.7 * O.one()
    expected = sum((0.7 ** n * f.stem.coeffs[n] for n in range(4)), np.zeros(8))
    assert np.allclose(f(x).coeffs, expected, atol=1e-14)


def test_well_posedness(O):
    rng = np.random.default_rng(1)
    f = SliceFunction(Poly(rng.standard_normal((5, 8))), O)
    for x in cone_points(O, 20, seed=3):
        d = decompose(x)
        F = eval_stem(f.stem, d.z, O)
        G = eval_stem(f.stem, d.z.conjugate(), O)
        assert close(F.re + d.unit * F.im, G.re + (-d.unit) * G.im)


def test_stem_from_plane_values(H):
    i, j = H.basis("i"), H.basis("j")
    stem = stem_from_plane_values(lambda y: y * i, j)
    ref = Poly(np.stack([H.zero().coeffs, i.coeffs]))
    z = np.array([0.3 + 1j, -1 + 0.2j, 2j])
    assert np.allclose(stem.evaluate(z, H)[0], ref.evaluate(z, H)[0], atol=1e-12)
    assert np.allclose(stem.evaluate(z, H)[1], ref.evaluate(z, H)[1], atol=1e-12)
    c = 1 + j
    s2 = stem_from_plane_values(lambda y: c, j)
    v = eval_stem(s2, 0.5 + 0.5j, H)
    assert close(v.re, c) and close(v.im, H.zero())


def test_representation_formula(O):
    i, j, k = (O.basis(n) for n in "ijk")
    J = (i + j) / np.sqrt(2)
    one = O.one()
    xJ, xJc = one + 2 * J, one - 2 * J
    for I in sample_sphere(O, seed=0, count=5):
        assert close(representation_formula(xJ, xJc, J, I), one + 2 * I)
    assert close(representation_formula(xJ, xJc, J, J), xJ)
    f = polynomial([O.zero(), i])
    rep = representation_formula(f(k), f(-k), k, k)
    assert close(rep, f(k))
    # the value at k from data on C_J
    rep = representation_formula(f(J), f(-J), J, k)
    assert close(rep, k * i)


def test_slice_product_examples(H):
    i, j, k = (H.basis(n) for n in "ijk")
    f, g = polynomial([H.zero(), i]), polynomial([H.zero(), j])
    fg = slice_product(f, g)
    assert close(fg(j), -k)
    assert close(f(j) * g(j), k)
    a, b = constant(1 + i), constant(j - k)
    assert close(slice_product(a, b)(0.3 + k), (1 + i) * (j - k))
    for x in cone_points(H, 5):
        assert close(slice_product(f, constant(H.one()))(x), f(x))


def test_star_product(H):
    i, j, k = (H.basis(n) for n in "ijk")
    assert [c for c in star_product([H.zero(), i], [H.zero(), j])] == [H.zero(), H.zero(), k]
    p = [i, j + k]
    assert star_product(p, [H.one()]) == p


def test_slice_product_matches_pointwise_on_plane_for_plane_valued(O):
    J = sample_sphere(O, seed=4)[0]
    rng = np.random.default_rng(4)
    # stems with coefficients in C_J
    def plane_poly():
        c = rng.standard_normal((3, 2))
        return polynomial([a * O.one() + b * J for a, b in c])
    f, g, h = plane_poly(), plane_poly(), plane_poly()
    other = SliceFunction(Poly(rng.standard_normal((2, 8))), O)
    for z in (0.3 + 0.2j, -1 + 0.7j):
        x = phi_J(z, J)
        assert close(slice_product(f, other)(x), f(x) * other(x))
        assert close(slice_product(f, g)(x), slice_product(g, f)(x))
        assert close(slice_product(slice_product(f, g), h)(x), slice_product(f, slice_product(g, h))(x))


def test_derivatives(H):
    rng = np.random.default_rng(2)
    f = SliceFunction(Poly(rng.standard_normal((4, 4))), H)
    d, dbar = slice_derivatives(f)
    x = cone_points(H, 1)[0]
    expected = polynomial([H.element(n * f.stem.coeffs[n]) for n in range(1, 4)])(x)
    assert close(d(x), expected, 1e-12)
    assert close(dbar(x), H.zero())
    _, dc = slice_derivatives(conjugation(H))
    assert close(dc(x), H.one())


def test_finite_difference_matches_analytic(H):
    f = polynomial([H.basis("j"), H.basis("i"), H.one()])

    def fn(z):
        return eval_stem(f.stem, z, H)

    sampled = SliceFunction(Sampler(fn), H)
    d_fd, dbar_fd = slice_derivatives(sampled)
    d, _ = slice_derivatives(f)
    for x in cone_points(H, 5, seed=8):
        ref = d(x)
        assert np.linalg.norm((d_fd(x) - ref).coeffs) <= 1e-6 * np.linalg.norm(ref.coeffs)
        assert np.linalg.norm(dbar_fd(x).coeffs) <= 1e-6


def test_non_differentiable_sampler(H):
    s = Sampler(lambda z: ComplexElement(H.one(), H.zero()), differentiable=False)
    with pytest.raises(CapabilityError):
        s.d_dz()


def test_regularity_predicates(H):
    rng = np.random.default_rng(3)
    f = SliceFunction(Poly(rng.standard_normal((4, 4))), H)
    assert is_slice_regular(f)
    assert not is_slice_regular(conjugation(H))
    y = 1 + 2 * H.basis("j")
    assert is_slice_preserving(characteristic_poly(y))
    assert not is_slice_preserving(polynomial([H.zero(), H.basis("i")]))
    with pytest.raises(ValueError):
        is_slice_regular(f, samples=0)


def test_regular_times_preserving_regular(O):
    rng = np.random.default_rng(6)
    p = characteristic_poly(1 + O.basis("k"))
    g = SliceFunction(Poly(rng.standard_normal((3, 8))), O)
    assert is_slice_regular(slice_product(p, g))


def test_symmetry_violation_detected(H):
    bad = Sampler(lambda z: ComplexElement(z.imag * H.one(), H.zero()))
    with pytest.raises(StemSymmetryError):
        SliceFunction(bad, H, PlanarDomain.disk(0, 1))


def test_structural_symmetry(O):
    rng = np.random.default_rng(7)
    y = cone_points(O, 1)[0]
    t, n = 2 * y.coeffs[0], float((y * y.conj()).coeffs[0])
    stem = Sum((
        Product(Poly(rng.standard_normal((3, 8))), ConjVar()),
        RationalRealDen(Poly(rng.standard_normal((2, 8))), (n, -t, 1.0)),
    ))
    z = np.array([0.2 + 0.3j, -1.1 + 0.5j, 0.4 - 0.9j])
    assert stem_symmetry_defect(stem, O, z) <= 1e-12


def test_stem_serialization_roundtrip(O):
    rng = np.random.default_rng(8)
    stem = Sum((Product(Poly(rng.standard_normal((3, 8))), ConjVar()),
                RationalRealDen(Const(rng.standard_normal(8)), (2.0, 0.0, 1.0))))
    again = stem_from_dict(json.loads(json.dumps(stem.to_dict())))
    z = np.array([0.2 + 0.3j, -0.5 + 1j])
    for a, b in zip(stem.evaluate(z, O), again.evaluate(z, O)):
        assert np.array_equal(a, b)
    with pytest.raises(CapabilityError):
        Sampler(lambda z: None).to_dict()


def test_domain_checks(H):
    ident = Poly(np.array([np.zeros(4), H.one().coeffs]))
    f = SliceFunction(ident, H, PlanarDomain.disk(0, 1))
    with pytest.raises(DomainError):
        f(3 * H.basis("i"))
    g = SliceFunction(ident, H, PlanarDomain.disk_pair(2j, 0.5))
    x = 2 * H.basis("j")
    assert close(g(x), x)
    with pytest.raises(DomainError):
        slice_product(f, g)
