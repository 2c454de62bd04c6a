"""Power and spherical expansions of slice regular functions.

Coefficients come from contour integrals evaluated entirely inside ``C_J``
(a commutative plane), and truncated series are evaluated with the slice
product ``F1(z_x) c + I_x (F2(z_x) c)``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .algebra import Algebra, Element, euclidean_norm, norm_sq, trace
from .cauchy import DEFAULT_PARAMS, QuadratureParams, pairwise_sum
from .cone import (
    decompose,
    in_plane,
    in_quadratic_cone,
    phi_arrays,
    plane_coordinate,
    sample_sphere,
    _require_unit,
)
from .errors import ConeError, GeometryError
from .geometry import Contour
from .slices import Poly, SliceFunction, star_product

PLANE_TOL = 1e-10
KERNEL_GUARD = 1e-12

PlaneEvaluator = Callable[[np.ndarray], np.ndarray]


def _require_cone(*xs: Element) -> None:
    for x in xs:
        if not in_quadratic_cone(x):
            raise ConeError(f"{x!r} is not in the quadratic cone")


def _imag_norm(x: Element) -> float:
    return float(np.linalg.norm(x.coeffs - 0.5 * trace(x).coeffs))


def sigma_metric(x: Element, x0: Element) -> float:
    """Euclidean distance inside the plane of ``x0``; across planes
    ``sqrt(|Re x - Re x0|^2 + (|Im x| + |Im x0|)^2)``."""
    _require_cone(x, x0)
    d0 = decompose(x0)
    if d0.is_real or in_plane(x, d0.unit, PLANE_TOL):
        return euclidean_norm(x - x0)
    dr = 0.5 * (trace(x).coeffs[0] - trace(x0).coeffs[0])
    return float(math.hypot(dr, _imag_norm(x) + _imag_norm(x0)))


def _delta(x: Element, x0: Element) -> Element:
    t = float(trace(x0).coeffs[0])
    n = float(norm_sq(x0).coeffs[0])
    return x * x - t * x + n * x.algebra.one()


def cassini_pseudometric(x: Element, x0: Element) -> float:
    """``u(x, x0) = sqrt(|Delta_{x0}(x)|)``."""
    _require_cone(x, x0)
    return math.sqrt(euclidean_norm(_delta(x, x0)))


def slice_power(x0: Element, k: int) -> SliceFunction:
    """``(x - x0)^{.k}``: the stem ``(z - x0)^k`` as a polynomial."""
    _require_cone(x0)
    if k < 0:
        raise ValueError("k must be non-negative")
    a = x0.algebra
    p = [a.one()]
    lin = [-x0, a.one()]
    for _ in range(k):
        p = star_product(p, lin)
    return SliceFunction(Poly(np.array([c.coeffs for c in p])), a)


def spherical_poly(x0: Element, n: int) -> SliceFunction:
    """``S_{x0,2m} = Delta^m`` and ``S_{x0,2m+1} = Delta^m (x - x0)``."""
    _require_cone(x0)
    if n < 0:
        raise ValueError("n must be non-negative")
    a = x0.algebra
    t = float(trace(x0).coeffs[0])
    nn = float(norm_sq(x0).coeffs[0])
    real = np.polynomial.polynomial.polypow([nn, -t, 1.0], n // 2)
    one = a.one().coeffs
    coeffs = real[:, None] * one[None, :]
    if n % 2:
        shifted = np.zeros((len(real) + 1, a.dim))
        shifted[1:] += coeffs
        shifted[:-1] -= real[:, None] * x0.coeffs[None, :]
        coeffs = shifted
    return SliceFunction(Poly(coeffs), a)


# -- coefficient extraction ---------------------------------------------------------


@dataclass
class ExpansionResult:
    """Coefficients of a power or spherical expansion around ``center``."""

    kind: str
    center: Element
    J: Element
    coefficients: list[Element]
    contour: dict
    residual_norms: list[float] = field(default_factory=list)

    @property
    def K(self) -> int:
        return len(self.coefficients) - 1

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "algebra": self.center.algebra.name,
            "center": self.center.coeffs.tolist(),
            "J": self.J.coeffs.tolist(),
            "coefficients": [c.coeffs.tolist() for c in self.coefficients],
            "contour": self.contour,
            "residual_norms": list(self.residual_norms),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict, algebra: Algebra) -> ExpansionResult:
        return cls(
            data["kind"],
            Element(algebra, data["center"]),
            Element(algebra, data["J"]),
            [Element(algebra, c) for c in data["coefficients"]],
            data.get("contour", {}),
            list(data.get("residual_norms", [])),
        )


def plane_evaluator(f: Union[SliceFunction, PlaneEvaluator], J: Element) -> PlaneEvaluator:
    """``zeta -> f(phi_J(zeta))`` as coefficient arrays."""
    if isinstance(f, SliceFunction):
        return lambda zeta: f.plane_values(zeta, J.coeffs)
    return f


def _coefficients(kind: str, f, contour: Contour, x0: Element, J: Element, K: int,
                  params: QuadratureParams | None) -> ExpansionResult:
    _require_unit(J)
    if K < 0:
        raise ValueError("K must be non-negative")
    if params is not None:
        contour = contour.with_nodes(params.boundary_nodes)
    w0 = plane_coordinate(x0, J, PLANE_TOL)
    if contour.winding_number(w0) != 1:
        raise GeometryError(f"contour does not wind once around the center {w0}")
    zeta, w = contour.quadrature()
    fy = plane_evaluator(f, J)(zeta)
    if not np.all(np.isfinite(fy)):
        raise ValueError("function produced non-finite values on the contour")
    alg = J.algebra
    lin = zeta - w0
    delta = lin * (zeta - np.conj(w0))
    coeffs = []
    acc = np.ones_like(zeta)
    for k in range(K + 1):
        # (zeta - w0)^{k+1}, or S_{x0,k+1}(zeta) in the plane
        if kind == "spherical":
            acc = delta ** ((k + 1) // 2) * (lin if k % 2 == 0 else 1.0)
        else:
            acc = acc * lin
        if np.min(np.abs(acc)) < KERNEL_GUARD * np.max(np.abs(acc)):
            raise GeometryError("expansion kernel vanishes on the contour")
        scal = (-1j * w) / acc
        vals = alg.mul_arrays(phi_arrays(scal, J.coeffs), fy)
        coeffs.append(Element(alg, pairwise_sum(vals) / (2.0 * np.pi)))
    return ExpansionResult(kind, x0, J, coeffs, contour.describe())


def power_coefficients(f, contour: Contour, x0: Element, J: Element, K: int,
                       params: QuadratureParams | None = None) -> ExpansionResult:
    """``a_k = (1/2pi) int (y - x0)^{-k-1} J^{-1} dy f(y)`` for ``k = 0..K``."""
    return _coefficients("power", f, contour, x0, J, K, params)


def spherical_coefficients(f, contour: Contour, x0: Element, J: Element, K: int,
                           params: QuadratureParams | None = None) -> ExpansionResult:
    """``s_k = (1/2pi) int S_{x0,k+1}(y)^{-1} J^{-1} dy f(y)`` for ``k = 0..K``."""
    return _coefficients("spherical", f, contour, x0, J, K, params)


def default_contour(x0: Element, J: Element, r: float, r_prime: float,
                    nodes: int = DEFAULT_PARAMS.boundary_nodes) -> Contour:
    """Circle of radius ``(r + r')/2`` about the plane trace of ``x0``."""
    return Contour.circle(plane_coordinate(x0, J, PLANE_TOL), 0.5 * (r + r_prime), nodes)


# -- truncated series ----------------------------------------------------------------


def _basis_function(result: ExpansionResult, k: int) -> SliceFunction:
    if result.kind == "power":
        return slice_power(result.center, k)
    return spherical_poly(result.center, k)


def eval_truncated_series(result: ExpansionResult, x: Element, n: int) -> Element:
    """``sum_{k<=n} B_k . c_k`` at ``x`` with ``B_k`` the slice power or spherical polynomial."""
    if n > result.K:
        raise ValueError(f"n={n} exceeds the number of coefficients K={result.K}")
    alg = result.center.algebra
    dec = decompose(x)
    z = dec.z
    total = alg.zero()
    for k in range(n + 1):
        b = _basis_function(result, k)
        re, im = b.stem.evaluate(np.array(z), alg)
        c = result.coefficients[k].coeffs
        F1c = Element(alg, alg.mul_arrays(re, c))
        F2c = Element(alg, alg.mul_arrays(im, c))
        total = total + F1c + dec.unit * F2c
    return total


def eval_truncated_series_batch(result: ExpansionResult, z: np.ndarray, units: np.ndarray) -> np.ndarray:
    """All partial sums at points ``Re z + Im z I``; returns ``(K+1, n_points, dim)``."""
    alg = result.center.algebra
    out = np.zeros((result.K + 1, len(z), alg.dim))
    acc = np.zeros((len(z), alg.dim))
    for k in range(result.K + 1):
        re, im = _basis_function(result, k).stem.evaluate(z, alg)
        c = np.broadcast_to(result.coefficients[k].coeffs, re.shape)
        acc = acc + alg.mul_arrays(re, c) + alg.mul_arrays(units, alg.mul_arrays(im, c))
        out[k] = acc
    return out


# -- convergence reporting ---------------------------------------------------------------


@dataclass
class ConvergenceReport:
    """Measured sup residuals per truncation order with a fitted geometric ratio."""

    kind: str
    r: float
    r_prime: float
    rows: list[tuple[int, float]]
    fitted_ratio: float | None
    bound: float
    diverged: bool
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.diverged:
            return False
        return self.fitted_ratio is None or self.fitted_ratio <= self.bound

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "sup_residual", "fitted_ratio"])
        ratio = "" if self.fitted_ratio is None else repr(self.fitted_ratio)
        for n, res in self.rows:
            w.writerow([n, repr(res), ratio])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "r": self.r, "r_prime": self.r_prime,
            "rows": [list(r) for r in self.rows], "fitted_ratio": self.fitted_ratio,
            "bound": self.bound, "diverged": self.diverged, "passed": self.passed, "note": self.note,
        }


def fit_ratio(residuals: list[float], floor: float = 1e-13) -> float | None:
    """Least-squares geometric ratio over the last half of the orders above ``floor``."""
    n_max = len(residuals) - 1
    start = n_max - math.ceil(n_max / 2)
    pts = [(n, r) for n, r in enumerate(residuals) if n >= start and r > floor]
    if len(pts) < 2:
        return None
    n = np.array([p[0] for p in pts], dtype=float)
    y = np.log([p[1] for p in pts])
    slope = np.polyfit(n, y, 1)[0]
    return float(np.exp(slope))


def sample_region(kind: str, x0: Element, J: Element, r: float, count: int, seed: int = 0,
                  plane_only: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Points of ``Sigma(x0, r)`` (power) or ``U(x0, r)`` (spherical).

    Returns plane traces ``z`` with ``Im z >= 0`` and the matching units as an
    ``(count, dim)`` array.  With ``plane_only`` every unit is ``J``.
    """
    alg = x0.algebra
    rng = np.random.default_rng(seed)
    w0 = plane_coordinate(x0, J, PLANE_TOL)
    units = sample_sphere(alg, seed=seed, count=8)
    zs: list[complex] = []
    us: list[np.ndarray] = []
    for _ in range(200):
        m = 4 * count
        if kind == "power":
            # plane ball around w0, mirrored to the upper half with the unit flipped
            rho = r * np.sqrt(rng.uniform(0, 1, m))
            zc = w0 + rho * np.exp(2j * np.pi * rng.uniform(0, 1, m))
            flip = zc.imag < 0
            for zz, fl in zip(zc, flip):
                zs.append(np.conj(zz) if fl else zz)
                us.append(-J.coeffs if fl else J.coeffs)
            if not plane_only and r > abs(w0.imag):
                # off-plane points with |dRe|^2 + (s + |Im w0|)^2 < r^2
                s_max = r - abs(w0.imag)
                s = s_max * rng.uniform(0, 1, m)
                dr = np.sqrt(np.maximum(r * r - (s + abs(w0.imag)) ** 2, 0)) * rng.uniform(-1, 1, m)
                pick = rng.integers(0, len(units), m)
                for zz, p in zip(w0.real + dr + 1j * s, pick):
                    zs.append(zz)
                    us.append(units[p].coeffs)
        else:
            # every point of the oval is within r of w0 or of its conjugate
            rho = r * np.sqrt(rng.uniform(0, 1, m))
            zc = w0 + rho * np.exp(2j * np.pi * rng.uniform(0, 1, m))
            zc = np.where(rng.uniform(0, 1, m) < 0.5, zc, np.conj(zc))
            zc = np.where(zc.imag < 0, np.conj(zc), zc)
            ok = np.abs((zc - w0) * (zc - np.conj(w0))) < r * r
            pick = rng.integers(0, len(units), m)
            for zz, p in zip(zc[ok], pick[ok]):
                zs.append(zz)
                us.append(J.coeffs if plane_only else units[p].coeffs)
        if len(zs) >= count:
            break
    if len(zs) < count:
        raise GeometryError("could not sample the convergence region")
    order = rng.permutation(len(zs))[:count]
    return np.array(zs)[order], np.array(us)[order]


def convergence_report(f: SliceFunction, x0: Element, J: Element, r: float, r_prime: float,
                       n_max: int = 16, params: QuadratureParams | None = None, kind: str = "spherical",
                       samples: int = 100, seed: int = 0, plane_only: bool = False,
                       contour: Contour | None = None) -> ConvergenceReport:
    """Sup residuals of the truncated series over sampled points, ``n = 0..n_max``."""
    if not 0 < r < r_prime:
        raise ValueError("need 0 < r < r'")
    params = params or DEFAULT_PARAMS
    contour = contour or default_contour(x0, J, r, r_prime, params.boundary_nodes)
    if kind == "power":
        result = power_coefficients(f, contour, x0, J, n_max, params)
    elif kind == "spherical":
        result = spherical_coefficients(f, contour, x0, J, n_max, params)
    else:
        raise ValueError(f"unknown expansion kind {kind!r}")
    z, units = sample_region(kind, x0, J, r, samples, seed, plane_only)
    alg = f.algebra
    exact = []
    for zz, u in zip(z, units):
        re, im = f.stem.evaluate(np.array(zz), alg)
        exact.append(re + alg.mul_arrays(u, im))
    exact = np.array(exact)
    partial = eval_truncated_series_batch(result, z, units)
    residuals = [float(np.max(np.linalg.norm(partial[k] - exact, axis=-1))) for k in range(n_max + 1)]
    result.residual_norms = residuals
    ratio = fit_ratio(residuals)
    note = ""
    if ratio is None:
        note = "residual reached the floor; ratio test skipped"
    tail = residuals[len(residuals) // 2:]
    diverged = bool(len(tail) > 1 and tail[-1] > 10 * max(tail[0], 1e-300) and tail[-1] > 1e-10)
    if diverged:
        note = "residuals grow with n"
    return ConvergenceReport(kind, r, r_prime, list(enumerate(residuals)), ratio,
                             r / r_prime + 0.05, diverged, note)
