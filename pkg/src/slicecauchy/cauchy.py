"""Characteristic polynomial, Cauchy kernel and the Cauchy-type formulas.

All quadratures run in the plane model: a contour node ``zeta`` stands for
``y = phi_J(zeta)`` and its weight ``alpha'(t) dt`` for ``dy``.  Node sums go
through :func:`pairwise_sum`, so results are bit-identical across runs.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .algebra import Element, norm_sq, trace
from .cone import decompose, in_quadratic_cone, phi_arrays, _require_unit
from .errors import ConeError, DomainError, GeometryError
from .geometry import Contour, PlanarDomain
from .slices import Const, Poly, Product, RationalRealDen, RealPoly, SliceFunction

POLE_GUARD = 1e-8
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class QuadratureParams:
    """Discretization knobs.

    Attributes:
        boundary_nodes: Trapezoid nodes on each smooth closed contour piece.
        area_scheme: ``"polar"`` (centered at the singular point) or ``"cartesian"``.
        area_nodes: ``(n_r, n_theta)`` for polar, ``(n_x, n_y)`` for cartesian.
        exclusion: Radius of the disk skipped around the singularity (cartesian only).
    """

    boundary_nodes: int = 1024
    area_scheme: str = "polar"
    area_nodes: tuple[int, int] = (256, 512)
    exclusion: float = 1e-3

    def __post_init__(self):
        if self.boundary_nodes < 1 or min(self.area_nodes) < 1 or self.exclusion <= 0:
            raise ValueError("quadrature parameters must be positive")
        if self.area_scheme not in ("polar", "cartesian"):
            raise ValueError(f"unknown area scheme {self.area_scheme!r}")


DEFAULT_PARAMS = QuadratureParams()


def pairwise_sum(values: np.ndarray) -> np.ndarray:
    """Sum along axis 0 by repeated halving; the order depends only on the length."""
    v = np.asarray(values, dtype=float)
    if v.shape[0] == 0:
        return np.zeros(v.shape[1:])
    while v.shape[0] > 1:
        if v.shape[0] % 2:
            v = np.concatenate([v, np.zeros((1,) + v.shape[1:])])
        v = v[0::2] + v[1::2]
    return v[0]


def _real_trace_norm(y: Element) -> tuple[float, float]:
    if not in_quadratic_cone(y):
        raise ConeError(f"{y!r} is not in the quadratic cone")
    return float(trace(y).coeffs[0]), float(norm_sq(y).coeffs[0])


def characteristic_poly(y: Element) -> SliceFunction:
    """``Delta_y(x) = x^2 - x t(y) + n(y)``."""
    t, n = _real_trace_norm(y)
    return SliceFunction(RealPoly((n, -t, 1.0)), y.algebra)


def cauchy_kernel(y: Element) -> SliceFunction:
    """``C_y(x) = Delta_y(x)^{-1} (y^c - x)``, the slice inverse of ``y - x``."""
    t, n = _real_trace_norm(y)
    a = y.algebra
    num = Poly(np.stack([y.conj().coeffs, -a.one().coeffs]))
    return SliceFunction(RationalRealDen(num, (n, -t, 1.0)), a)


def contour_integral(integrand: Callable[[np.ndarray, np.ndarray], np.ndarray], contour: Contour,
                     J: Element) -> Element:
    """``sum integrand(y, dy)`` over the quadrature nodes of ``contour`` mapped into ``C_J``.

    ``integrand`` receives coefficient arrays of shape ``(n, dim)`` for the
    nodes ``y`` and the weighted differentials ``dy``, and returns ``(n, dim)``.
    """
    _require_unit(J)
    zeta, w = contour.quadrature()
    y = phi_arrays(zeta, J.coeffs)
    dy = phi_arrays(w, J.coeffs)
    vals = np.asarray(integrand(y, dy), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand produced non-finite values on the contour")
    return Element(J.algebra, pairwise_sum(vals))


def _plane_trace(x: Element, J: Element):
    """``(z_x, I_x)`` with ``x = Re z + Im z I`` and ``Im z >= 0``."""
    dec = decompose(x, default_J=J)
    return dec.z, dec.unit, dec.is_real


def _check_enclosed(contour: Contour, z: complex) -> None:
    for w in {z, z.conjugate()}:
        if contour.winding_number(w) != 1:
            raise GeometryError(f"plane trace {w} is not enclosed once by the contour")


def _boundary_data(f: SliceFunction, contour: Contour, J: Element):
    """Nodes and the constants ``a = J^{-1} dy f(y)`` at each node."""
    zeta, w = contour.quadrature()
    fy = f.plane_values(zeta, J.coeffs)
    if not np.all(np.isfinite(fy)):
        raise ValueError("function produced non-finite values on the contour")
    a = f.algebra.mul_arrays(phi_arrays(-1j * w, J.coeffs), fy)
    return zeta, a


def _pole_guard(q: np.ndarray, zeta: np.ndarray, z: complex) -> None:
    scale = np.abs(zeta) ** 2 + abs(z) ** 2 + 1.0
    if np.any(np.abs(q) < POLE_GUARD * scale):
        raise GeometryError(f"evaluation point {z} is within the pole guard of a contour node")


def cauchy_formula_regular(f: SliceFunction, contour: Contour, J: Element, x: Element,
                           params: QuadratureParams | None = None) -> Element:
    """Boundary Cauchy formula with the slice product in ``x``.

    At each node the kernel stem ``F`` of ``C_y`` is evaluated at ``z_x`` and
    applied to the node constant ``a`` as ``F1(z_x) a + I_x (F2(z_x) a)``.
    """
    _require_unit(J)
    if params is not None:
        contour = contour.with_nodes(params.boundary_nodes)
    z, I, _ = _plane_trace(x, J)
    _check_enclosed(contour, z)
    zeta, a = _boundary_data(f, contour, J)
    alg = f.algebra
    # kernel stem (y^c - z) / (z^2 - z t(y) + n(y)) at z, per node
    q = z * z - 2.0 * zeta.real * z + np.abs(zeta) ** 2
    _pole_guard(q, zeta, z)
    wq = 1.0 / q
    re = phi_arrays(np.conj(zeta), J.coeffs)
    re[:, 0] -= z.real
    im = np.zeros_like(re)
    im[:, 0] = -z.imag
    F1 = wq.real[:, None] * re - wq.imag[:, None] * im
    F2 = wq.real[:, None] * im + wq.imag[:, None] * re
    A1 = pairwise_sum(alg.mul_arrays(F1, a))
    A2 = pairwise_sum(alg.mul_arrays(F2, a))
    return (Element(alg, A1) + I * Element(alg, A2)) / TWO_PI


def pointwise_cauchy_formula(f: SliceFunction, contour: Contour, J: Element, x: Element,
                             params: QuadratureParams | None = None) -> Element:
    """Boundary formula with ``C_y(x)`` computed in the algebra and multiplied pointwise.

    Agrees with :func:`cauchy_formula_regular` on ``C_J`` and, over associative
    algebras, everywhere; over the octonions it differs off the plane.
    """
    _require_unit(J)
    if params is not None:
        contour = contour.with_nodes(params.boundary_nodes)
    z, _, _ = _plane_trace(x, J)
    _check_enclosed(contour, z)
    zeta, a = _boundary_data(f, contour, J)
    alg = f.algebra
    q = z * z - 2.0 * zeta.real * z + np.abs(zeta) ** 2
    _pole_guard(q, zeta, z)
    xc = x.coeffs
    x2 = alg.mul_arrays(xc, xc)
    # Delta_y(x) = x^2 - t(y) x + n(y), one row per node
    delta = x2[None, :] - 2.0 * zeta.real[:, None] * xc[None, :]
    delta[:, 0] += np.abs(zeta) ** 2
    dconj = alg.conj_arrays(delta)
    nd = alg.mul_arrays(delta, dconj)[:, 0]
    num = phi_arrays(np.conj(zeta), J.coeffs) - xc[None, :]
    kernel = alg.mul_arrays(dconj / nd[:, None], num)
    return Element(alg, pairwise_sum(alg.mul_arrays(kernel, a))) / TWO_PI


# -- Cauchy-Pompeiu --------------------------------------------------------------


def _polar_nodes(domain: PlanarDomain, w: complex, n_r: int, n_theta: int):
    """Nodes ``zeta`` and ``d rho d theta`` weights of a polar grid centered at ``w``."""
    theta = TWO_PI * np.arange(n_theta) / n_theta
    seg = domain.ray_segments(w, theta)  # (n_theta, 2, 2)
    t = (np.arange(n_r) + 0.5) / n_r
    lo = seg[:, :, 0][..., None]
    hi = seg[:, :, 1][..., None]
    h = hi - lo
    rho = lo + h * t  # (n_theta, 2, n_r)
    weight = np.broadcast_to(h / n_r * (TWO_PI / n_theta), rho.shape)
    th = np.broadcast_to(theta[:, None, None], rho.shape)
    zeta = w + rho * np.exp(1j * th)
    keep = weight > 0
    return zeta[keep], weight[keep], th[keep]


def _area_term_at(g: SliceFunction, domain: PlanarDomain, J: Element, w: complex,
                  params: QuadratureParams) -> np.ndarray:
    """``-(1/pi) int_D phi_J(1/(zeta - w)) G(zeta) dA`` as a coefficient array."""
    alg = g.algebra
    if params.area_scheme == "polar":
        zeta, weight, th = _polar_nodes(domain, w, *params.area_nodes)
        # polar Jacobian rho cancels the 1/rho of the kernel
        kern = np.exp(-1j * th) * weight
    else:
        x0, x1, y0, y1 = domain.bounding_box()
        nx, ny = params.area_nodes
        hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
        gx = x0 + (np.arange(nx) + 0.5) * hx
        gy = y0 + (np.arange(ny) + 0.5) * hy
        zeta = (gx[:, None] + 1j * gy[None, :]).ravel()
        zeta = zeta[domain.contains(zeta) & (np.abs(zeta - w) > params.exclusion)]
        kern = hx * hy / (zeta - w)
    G = g.plane_values(zeta, J.coeffs)
    vals = alg.mul_arrays(phi_arrays(kern, J.coeffs), G)
    return -pairwise_sum(vals) / np.pi


def cauchy_pompeiu_terms(f: SliceFunction, domain: PlanarDomain, J: Element, x: Element,
                         params: QuadratureParams | None = None) -> tuple[Element, Element]:
    """``(boundary, area)`` parts of the Cauchy-Pompeiu formula at ``x``.

    The area integrand in the ``C_J`` model has singularities at both plane
    traces ``z_x`` and ``conj(z_x)``.  The area term is therefore computed at
    those two plane points, each with a polar grid centered on it, and moved
    to ``x`` with the representation formula.
    """
    params = params or DEFAULT_PARAMS
    _require_unit(J)
    if not domain.conj_symmetric:
        raise DomainError("Cauchy-Pompeiu needs a conjugation-symmetric domain")
    z, I, is_real = _plane_trace(x, J)
    if not domain.contains(z):
        raise DomainError(f"{x!r} is outside Omega_D")
    contour = domain.boundary(params.boundary_nodes)
    boundary = cauchy_formula_regular(f, contour, J, x)
    g = SliceFunction(f.stem.d_dzbar(), f.algebra, f.domain)
    alg = f.algebra
    a_up = Element(alg, _area_term_at(g, domain, J, z, params))
    if is_real:
        return boundary, a_up
    a_dn = Element(alg, _area_term_at(g, domain, J, z.conjugate(), params))
    area = 0.5 * (a_up + a_dn) - 0.5 * (I * (J * (a_up - a_dn)))
    return boundary, area


def cauchy_pompeiu(f: SliceFunction, domain: PlanarDomain, J: Element, x: Element,
                   params: QuadratureParams | None = None) -> Element:
    """Boundary term plus area term; reproduces any ``C^1`` slice function."""
    boundary, area = cauchy_pompeiu_terms(f, domain, J, x, params)
    return boundary + area


# -- records -----------------------------------------------------------------------


@dataclass
class CauchyRecord:
    """Serializable result of one formula evaluation."""

    x: list[float]
    value_coeffs: list[float]
    N: int
    scheme: str
    residual_estimates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate_record(mode: str, f: SliceFunction, domain: PlanarDomain, J: Element, x: Element,
                    params: QuadratureParams | None = None) -> CauchyRecord:
    """Run one formula and estimate its discretization error by halving ``N``.

    ``mode`` is ``"slice"``, ``"pointwise"`` or ``"pompeiu"``.
    """
    params = params or DEFAULT_PARAMS
    half = QuadratureParams(max(params.boundary_nodes // 2, 1), params.area_scheme,
                            tuple(max(n // 2, 1) for n in params.area_nodes), params.exclusion)

    def run(p: QuadratureParams) -> Element:
        if mode == "slice":
            return cauchy_formula_regular(f, domain.boundary(p.boundary_nodes), J, x)
        if mode == "pointwise":
            return pointwise_cauchy_formula(f, domain.boundary(p.boundary_nodes), J, x)
        if mode == "pompeiu":
            return cauchy_pompeiu(f, domain, J, x, p)
        raise ValueError(f"unknown mode {mode!r}")

    value = run(params)
    coarse = run(half)
    est = {"halved_N_difference": float(np.linalg.norm(value.coeffs - coarse.coeffs))}
    if mode == "pompeiu":
        _, area = cauchy_pompeiu_terms(f, domain, J, x, params)
        est["area_term_norm"] = float(np.linalg.norm(area.coeffs))
    scheme = {"slice": "trapezoid", "pointwise": "trapezoid",
              "pompeiu": f"trapezoid+{params.area_scheme}{list(params.area_nodes)}"}[mode]
    return CauchyRecord(x.coeffs.tolist(), value.coeffs.tolist(), params.boundary_nodes, scheme, est)


def kernel_times_constant(y: Element, a: Element) -> SliceFunction:
    """Stem-tree form of ``C_y . a``; used to cross-check the direct node formula."""
    k = cauchy_kernel(y)
    return SliceFunction(Product(k.stem, Const(a.coeffs)), y.algebra)
