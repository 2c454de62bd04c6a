"""Reproduction checks behind ``slicecauchy verify-paper``.

Each check returns a :class:`CheckResult` with the measured error and the
tolerance it was held to.  ``quick=True`` halves the boundary node counts.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from .algebra import (
    Algebra,
    Element,
    build_clifford,
    build_octonions,
    build_quaternions,
    build_sedenions,
    validate_alternative,
    validate_involution,
)
from .cauchy import (
    QuadratureParams,
    cauchy_formula_regular,
    cauchy_kernel,
    cauchy_pompeiu_terms,
    pointwise_cauchy_formula,
)
from .cone import decompose, phi_J, sample_sphere
from .geometry import Contour, PlanarDomain
from .series import (
    convergence_report,
    eval_truncated_series_batch,
    power_coefficients,
    sample_region,
    spherical_coefficients,
)
from .slices import (
    Poly,
    SliceFunction,
    conjugation,
    half_plane_function,
    polynomial,
    representation_formula,
    slice_product,
    star_product,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured {self.measured:.3e} (tol {self.tolerance:.1e})"


# -- shared sampling helpers ------------------------------------------------------


def random_polynomial(algebra: Algebra, rng: np.random.Generator, degree: int) -> SliceFunction:
    return SliceFunction(Poly(rng.standard_normal((degree + 1, algebra.dim))), algebra)


def random_cone_points(algebra: Algebra, rng: np.random.Generator, count: int, radius: float,
                       seed: int = 0) -> list[Element]:
    """Points ``Re z + Im z I`` with ``|z| <= radius`` and random units ``I``."""
    units = sample_sphere(algebra, seed=seed, count=count)
    rho = radius * np.sqrt(rng.uniform(0, 1, count))
    th = rng.uniform(0, np.pi, count)
    z = rho * np.exp(1j * th)
    return [phi_J(zz, u) for zz, u in zip(z, units)]


def _rel(err: Element, exact: Element) -> float:
    return float(np.linalg.norm(err.coeffs) / max(np.linalg.norm(exact.coeffs), 1e-300))


# -- checks ---------------------------------------------------------------------------


def check_octonion_counterexample(quick: bool = False) -> list[CheckResult]:
    O = build_octonions()
    i, j, k = (O.basis(n) for n in ("i", "j", "k"))
    J = (i + j) / np.sqrt(2.0)
    f = polynomial([O.zero(), i])
    contour = Contour.circle(0, 2.0, 1024 if quick else 2048)
    t0 = time.perf_counter()
    pw = pointwise_cauchy_formula(f, contour, J, k)
    sl = cauchy_formula_regular(f, contour, J, k)
    dt = time.perf_counter() - t0
    e_pw = float(np.linalg.norm((pw - 0.5 * (k * i + k * j)).coeffs))
    e_sl = float(np.linalg.norm((sl - k * i).coeffs))
    return [
        CheckResult("octonion pointwise formula at k equals (ki+kj)/2", e_pw <= 1e-8, e_pw, 1e-8,
                    {"value": pw.coeffs.tolist()}, dt),
        CheckResult("octonion slice formula at k equals ki", e_sl <= 1e-8, e_sl, 1e-8,
                    {"value": sl.coeffs.tolist()}, dt),
        CheckResult("octonion counterexample runtime", dt < 2.0, dt, 2.0, {"timing": True}),
    ]


def _example_f():
    H = build_quaternions()
    J = H.basis("i")
    return H, J, half_plane_function(J)


def check_power_coefficients(quick: bool = False) -> CheckResult:
    H, J, f = _example_f()
    res = power_coefficients(f, Contour.circle(1j, 0.5, 512 if quick else 1024), J, J, 6)
    err0 = float(np.linalg.norm(res.coefficients[0].coeffs - 2 * H.one().coeffs))
    rest = max(float(np.linalg.norm(a.coeffs)) for a in res.coefficients[1:])
    m = max(err0, rest)
    return CheckResult("half-plane example power coefficients a0=2, a1..a6=0", m <= 1e-8, m, 1e-8,
                       {"coefficients": [a.coeffs.tolist() for a in res.coefficients]})


def spherical_closed_form(J: Element, k: int) -> Element:
    """``s_0 = 2``; otherwise ``4^{-n} binom(2n, n)`` times ``-J`` (odd k) or 1 (even k)."""
    if k == 0:
        return 2.0 * J.algebra.one()
    n = k // 2
    c = comb(2 * n, n) / 4 ** n
    return c * (-J) if k % 2 else c * J.algebra.one()


def check_spherical_coefficients(quick: bool = False) -> list[CheckResult]:
    H, J, f = _example_f()
    res = spherical_coefficients(f, Contour.circle(1j, 0.5, 512 if quick else 1024), J, J, 24)
    err = max(float(np.linalg.norm((res.coefficients[k] - spherical_closed_form(J, k)).coeffs))
              for k in range(6))
    z, units = sample_region("spherical", J, J, 0.3, 20, seed=1)
    partial = eval_truncated_series_batch(res, z, units)[24]
    exact = H.one().coeffs[None, :] - H.mul_arrays(units, np.broadcast_to(J.coeffs, units.shape))
    s_err = float(np.max(np.linalg.norm(partial - exact, axis=-1)))
    return [
        CheckResult("half-plane example spherical coefficients s0..s5", err <= 1e-8, err, 1e-8,
                    {"coefficients": [c.coeffs.tolist() for c in res.coefficients[:6]]}),
        CheckResult("truncated spherical series at n=24 on u<=0.3", s_err <= 1e-6, s_err, 1e-6),
    ]


def check_cauchy_reproduction(quick: bool = False, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    contour = Contour.circle(0, 2.0, 512 if quick else 1024)
    out = []
    for alg in (build_quaternions(), build_octonions()):
        J1, J2 = sample_sphere(alg, seed=seed + 7, count=2)
        worst = agree = 0.0
        for p in range(5):
            f = random_polynomial(alg, rng, int(rng.integers(0, 6)))
            for x in random_cone_points(alg, rng, 20, 1.5, seed=seed + p):
                exact = f(x)
                v1 = cauchy_formula_regular(f, contour, J1, x)
                v2 = cauchy_formula_regular(f, contour, J2, x)
                worst = max(worst, _rel(v1 - exact, exact))
                agree = max(agree, _rel(v1 - v2, exact))
        out.append(CheckResult(f"Cauchy reproduction of polynomials over {alg.name}", worst <= 1e-8, worst, 1e-8))
        out.append(CheckResult(f"J-independence over {alg.name}", agree <= 1e-8, agree, 1e-8))
    return out


def check_cauchy_pompeiu(quick: bool = False, seed: int = 0) -> list[CheckResult]:
    H = build_quaternions()
    rng = np.random.default_rng(seed)
    D = PlanarDomain.disk(0, 2.0)
    J = H.basis("i")
    nodes = (128, 256) if quick else (256, 512)
    params = QuadratureParams(512 if quick else 1024, "polar", nodes)
    f = conjugation(H, D)
    worst = 0.0
    for x in random_cone_points(H, rng, 50, 1.5, seed=seed):
        b, a = cauchy_pompeiu_terms(f, D, J, x, params)
        worst = max(worst, _rel(b + a - x.conj(), x.conj()))
    g = random_polynomial(H, rng, 3)
    g = SliceFunction(g.stem, H, D)
    area = max(float(np.linalg.norm(cauchy_pompeiu_terms(g, D, J, x, params)[1].coeffs))
               for x in random_cone_points(H, rng, 5, 1.5, seed=seed + 1))
    return [
        CheckResult("Cauchy-Pompeiu reproduces x^c over H", worst <= 1e-4, worst, 1e-4),
        CheckResult("Cauchy-Pompeiu area term vanishes for regular f", area <= 1e-8, area, 1e-8),
    ]


def property_algebras() -> list[Algebra]:
    algs = [build_quaternions(), build_octonions()]
    for n in range(1, 5):
        for p in range(n + 1):
            algs.append(build_clifford(p, n - p))
    return algs


def check_algebraic_properties(quick: bool = False, seed: int = 0) -> list[CheckResult]:
    samples = 2000 if quick else 10_000
    out = []
    alt = inv = 0.0
    for alg in property_algebras():
        alt = max(alt, validate_alternative(alg, samples=samples, seed=seed).max_violation)
        inv = max(inv, validate_involution(alg, samples=samples, seed=seed).max_violation)
    out.append(CheckResult("alternativity of H, O, Cl(p,q) with p+q<=4", alt <= 1e-12, alt, 1e-12))
    out.append(CheckResult("involution axioms", inv <= 1e-12, inv, 1e-12))
    sed = validate_alternative(build_sedenions(), samples=samples, seed=seed).max_violation
    out.append(CheckResult("sedenions flagged as non-alternative", sed > 0.1, sed, 0.1))

    O = build_octonions()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        p = [Element(O, c) for c in rng.standard_normal((int(rng.integers(1, 5)), 8))]
        q = [Element(O, c) for c in rng.standard_normal((int(rng.integers(1, 5)), 8))]
        star = polynomial(star_product(p, q))
        prod = slice_product(polynomial(p), polynomial(q))
        for x in random_cone_points(O, rng, 4, 1.0, seed=int(rng.integers(1 << 30))):
            worst = max(worst, float(np.linalg.norm((star(x) - prod(x)).coeffs)))
    out.append(CheckResult("star product equals slice product", worst <= 1e-12, worst, 1e-12))

    worst = 0.0
    count = 0
    while count < (200 if quick else 1000):
        y, x = random_cone_points(O, rng, 2, 1.5, seed=int(rng.integers(1 << 30)))
        if abs(_delta_scale(x, y)) < 0.1:
            continue
        lin = SliceFunction(Poly(np.stack([y.coeffs, -O.one().coeffs])), O)
        val = slice_product(cauchy_kernel(y), lin)(x)
        worst = max(worst, float(np.linalg.norm((val - O.one()).coeffs)))
        count += 1
    out.append(CheckResult("Cauchy kernel is the slice inverse of y-x", worst <= 1e-12, worst, 1e-12))

    worst = 0.0
    for _ in range(200 if quick else 1000):
        f = random_polynomial(O, rng, int(rng.integers(0, 5)))
        x, = random_cone_points(O, rng, 1, 1.0, seed=int(rng.integers(1 << 30)))
        J, = sample_sphere(O, seed=int(rng.integers(1 << 30)))
        d = decompose(x)
        xJ, xJc = phi_J(d.z, J), phi_J(d.z.conjugate(), J)
        rep = representation_formula(f(xJ), f(xJc), J, d.unit)
        worst = max(worst, float(np.linalg.norm((rep - f(x)).coeffs)))
    out.append(CheckResult("representation formula consistency", worst <= 1e-12, worst, 1e-12))
    return out


def _delta_scale(x: Element, y: Element) -> float:
    """``|Delta_y|`` at the plane trace of ``x``, a distance to the sphere of ``y``."""
    z, w = decompose(x).z, decompose(y).z
    return abs((z - w) * (z - w.conjugate()))


def check_convergence(quick: bool = False) -> list[CheckResult]:
    H, J, f = _example_f()
    rep = convergence_report(f, J, J, 0.3, 0.8, n_max=16,
                             params=QuadratureParams(512 if quick else 1024), kind="spherical")
    ratio = rep.fitted_ratio if rep.fitted_ratio is not None else float("nan")
    a0 = power_coefficients(f, Contour.circle(1j, 0.5, 128), J, J, 0).coefficients[0]
    e128 = float(np.linalg.norm(a0.coeffs - 2 * H.one().coeffs))
    return [
        CheckResult("spherical expansion fitted ratio <= r/r' + 0.05", rep.passed and rep.fitted_ratio is not None,
                    ratio, rep.bound, {"rows": rep.rows}),
        CheckResult("boundary quadrature self-convergence at N=128", e128 <= 1e-10, e128, 1e-10),
    ]


def run_all(quick: bool = False, seed: int = 0) -> list[CheckResult]:
    results: list[CheckResult] = []
    steps = [
        lambda: check_octonion_counterexample(quick),
        lambda: [check_power_coefficients(quick)],
        lambda: check_spherical_coefficients(quick),
        lambda: check_cauchy_reproduction(quick, seed),
        lambda: check_cauchy_pompeiu(quick, seed),
        lambda: check_algebraic_properties(quick, seed),
        lambda: check_convergence(quick),
    ]
    for step in steps:
        t0 = time.perf_counter()
        batch = step()
        dt = time.perf_counter() - t0
        for r in batch:
            r.seconds = r.seconds or dt
        results.extend(batch)
    return results
