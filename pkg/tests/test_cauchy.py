import numpy as np
import pytest

from slicecauchy import (
    Contour,
    ConeError,
    GeometryError,
    PlanarDomain,
    PoleError,
    QuadratureParams,
    SliceFunction,
    cauchy_formula_regular,
    cauchy_kernel,
    cauchy_pompeiu,
    cauchy_pompeiu_terms,
    characteristic_poly,
    conjugation,
    constant,
    contour_integral,
    decompose,
    phi_J,
    pointwise_cauchy_formula,
    polynomial,
    sample_sphere,
    slice_product,
)
from slicecauchy.cauchy import evaluate_record, kernel_times_constant, pairwise_sum
from slicecauchy.slices import Poly

from conftest import close, cone_points


def test_characteristic_poly(H):
    i, j = H.basis("i"), H.basis("j")
    d = characteristic_poly(i)
    assert close(d(j), H.zero())
    assert d.stem.coeffs == (1.0, 0.0, 1.0)
    assert characteristic_poly(2 + 3 * i).stem.coeffs == (13.0, -4.0, 1.0)


def test_characteristic_poly_is_product_of_linear(O):
    y = cone_points(O, 1, seed=2)[0]
    lin = SliceFunction(Poly(np.stack([y.coeffs, -O.one().coeffs])), O)
    linc = SliceFunction(Poly(np.stack([y.conj().coeffs, -O.one().coeffs])), O)
    prod = slice_product(lin, linc)
    for x in cone_points(O, 10, seed=3):
        assert close(prod(x), characteristic_poly(y)(x), 1e-12)


def test_characteristic_poly_rejects_non_cone(cl20):
    with pytest.raises(ConeError):
        characteristic_poly(cl20.basis("e1"))


def test_kernel_in_plane(H):
    i = H.basis("i")
    assert close(cauchy_kernel(2 * i)(i), -i, 1e-15)


def test_kernel_two_paths(O):
    i, j, k = (O.basis(n) for n in "ijk")
    J = (i + j) / np.sqrt(2)
    y = 2 * J
    delta = characteristic_poly(y)(k)
    direct = (delta.conj() / float((delta * delta.conj()).coeffs[0])) * (y.conj() - k)
    assert close(cauchy_kernel(y)(k), direct, 1e-14)


def test_kernel_pole(H):
    with pytest.raises(PoleError):
        cauchy_kernel(H.basis("i"))(H.basis("j"))


def test_contour_integral_residues(H):
    J = H.basis("i")
    c = Contour.circle(0, 1, 64)

    def integrand(power):
        def f(y, dy):
            z = y[:, 0] + 1j * y[:, 1]
            vals = np.zeros_like(y)
            # y^{-power} J^{-1} dy computed in C_J
            w = (dy[:, 0] + 1j * dy[:, 1]) * (-1j) / z ** power
            vals[:, 0], vals[:, 1] = w.real, w.imag
            return vals / (2 * np.pi)
        return f

    assert close(contour_integral(integrand(1), c, J), H.one())
    assert close(contour_integral(integrand(2), c, J), H.zero())
    with pytest.raises(ValueError):
        contour_integral(lambda y, dy: y * np.nan, c, J)


def test_constant_reproduced(O):
    c = O.basis("jk") - 2 * O.one()
    J = sample_sphere(O, seed=1)[0]
    x = cone_points(O, 1, radius=0.5)[0]
    assert close(cauchy_formula_regular(constant(c), Contour.circle(0, 1, 256), J, x), c, 1e-10)


def test_octonion_counterexample(O):
    i, j, k = (O.basis(n) for n in "ijk")
    J = (i + j) / np.sqrt(2)
    f = polynomial([O.zero(), i])
    c = Contour.circle(0, 2, 2048)
    assert close(cauchy_formula_regular(f, c, J, k), k * i, 1e-8)
    assert close(pointwise_cauchy_formula(f, c, J, k), 0.5 * (k * i + k * j), 1e-8)


def test_formulas_agree_on_plane(O):
    rng = np.random.default_rng(4)
    f = SliceFunction(Poly(rng.standard_normal((4, 8))), O)
    J = sample_sphere(O, seed=5)[0]
    c = Contour.circle(0, 2, 512)
    for z in (0.3 + 0.4j, -1 - 0.5j, 0.9):
        x = phi_J(z, J)
        assert close(cauchy_formula_regular(f, c, J, x), pointwise_cauchy_formula(f, c, J, x), 1e-10)


def test_pointwise_reproduces_over_quaternions(H):
    rng = np.random.default_rng(5)
    f = SliceFunction(Poly(rng.standard_normal((5, 4))), H)
    J = H.basis("j")
    c = Contour.circle(0, 2, 1024)
    for x in cone_points(H, 10, seed=6):
        assert close(pointwise_cauchy_formula(f, c, J, x), f(x), 1e-8 * np.linalg.norm(f(x).coeffs))


def test_node_formula_matches_stem_tree(O):
    """The direct F1 a + I (F2 a) assembly equals the slice product tree per node."""
    rng = np.random.default_rng(7)
    y, x = cone_points(O, 2, seed=8)
    a = O.element(rng.standard_normal(8))
    d = decompose(x)
    tree = kernel_times_constant(y, a)(x)
    F = cauchy_kernel(y).stem.evaluate(np.array(d.z), O)
    direct = O.element(O.mul_arrays(F[0], a.coeffs)) + d.unit * O.element(O.mul_arrays(F[1], a.coeffs))
    assert close(tree, direct, 1e-13)


def test_winding_precheck(H):
    f = polynomial([H.one()])
    with pytest.raises(GeometryError):
        cauchy_formula_regular(f, Contour.circle(0, 1), H.basis("i"), 3 * H.basis("j"))
    # upper-half contour misses the conjugate plane trace
    with pytest.raises(GeometryError):
        cauchy_formula_regular(f, Contour.circle(1j, 0.5), H.basis("i"), H.basis("j"))


def test_pole_guard(H):
    c = Contour.circle(0, 1, 4)
    f = polynomial([H.one()])
    with pytest.raises(GeometryError):
        cauchy_formula_regular(f, c, H.basis("i"), 0.999999999999 * H.basis("j"))


def test_determinism(O):
    f = polynomial([O.zero(), O.basis("i"), O.basis("jk")])
    J = sample_sphere(O, seed=3)[0]
    x = cone_points(O, 1)[0]
    c = Contour.circle(0, 2, 1000)
    a = cauchy_formula_regular(f, c, J, x).coeffs
    b = cauchy_formula_regular(f, c, J, x).coeffs
    assert a.tobytes() == b.tobytes()


def test_pairwise_sum():
    v = np.arange(7.0)[:, None]
    assert pairwise_sum(v)[0] == 21.0
    assert pairwise_sum(np.zeros((0, 3))).shape == (3,)


def test_pompeiu_conjugation(H):
    D = PlanarDomain.disk(0, 2)
    f = conjugation(H, D)
    J = H.basis("i")
    for x in cone_points(H, 5, seed=9) + [0.7 * H.one()]:
        val = cauchy_pompeiu(f, D, J, x)
        assert np.linalg.norm((val - x.conj()).coeffs) <= 1e-4 * np.linalg.norm(x.coeffs)


def test_pompeiu_regular_area_vanishes(O):
    D = PlanarDomain.disk(0, 2)
    rng = np.random.default_rng(3)
    f = SliceFunction(Poly(rng.standard_normal((3, 8))), O, D)
    J = sample_sphere(O, seed=2)[0]
    x = cone_points(O, 1, seed=4)[0]
    b, a = cauchy_pompeiu_terms(f, D, J, x, QuadratureParams(area_nodes=(64, 128)))
    assert np.linalg.norm(a.coeffs) <= 1e-8
    assert close(b, f(x), 1e-8 * np.linalg.norm(f(x).coeffs))


def test_pompeiu_nonpolynomial_stem(H):
    """f(x) = x x^c on an annulus: area term and both boundary circles matter."""
    from slicecauchy.slices import ConjVar, Product

    D = PlanarDomain.annulus(0, 0.5, 2)
    f = SliceFunction(Product(Poly(np.stack([np.zeros(4), H.one().coeffs])), ConjVar()), H, D)
    J = H.basis("k")
    for x in cone_points(H, 3, seed=12, radius=1.4):
        if abs(decompose(x).z) < 0.7:
            continue
        val = cauchy_pompeiu(f, D, J, x, QuadratureParams(area_nodes=(256, 512)))
        assert np.linalg.norm((val - f(x)).coeffs) <= 1e-4 * np.linalg.norm(f(x).coeffs)


def test_cartesian_scheme_is_rougher(H):
    D = PlanarDomain.disk(0, 2)
    f = conjugation(H, D)
    x = cone_points(H, 1, seed=5)[0]
    val = cauchy_pompeiu(f, D, H.basis("i"), x, QuadratureParams(area_scheme="cartesian", area_nodes=(400, 400)))
    assert np.linalg.norm((val - x.conj()).coeffs) <= 5e-2


def test_record(O):
    D = PlanarDomain.disk(0, 2)
    i, j, k = (O.basis(n) for n in "ijk")
    rec = evaluate_record("slice", polynomial([O.zero(), i]), D, (i + j) / np.sqrt(2), k, QuadratureParams(2048))
    d = rec.to_dict()
    assert set(d) == {"x", "value_coeffs", "N", "scheme", "residual_estimates"}
    assert np.allclose(d["value_coeffs"], (k * i).coeffs, atol=1e-8)
    assert d["residual_estimates"]["halved_N_difference"] < 1e-10


def test_params_validation():
    with pytest.raises(ValueError):
        QuadratureParams(boundary_nodes=0)
    with pytest.raises(ValueError):
        QuadratureParams(area_scheme="adaptive")
