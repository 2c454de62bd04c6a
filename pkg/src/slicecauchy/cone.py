"""Quadratic cone, the ``r + sJ`` decomposition and the plane maps.

Every element ``x`` of the quadratic cone lies in a plane ``C_J = <1, J>``
for a square root of minus one ``J``; :func:`decompose` returns the canonical
``(r, s, J)`` with ``s >= 0``.  :func:`phi_J` embeds the complex plane into
``C_J`` and :func:`psi_J` maps the complexified algebra onto the algebra.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import Algebra, Element, norm_sq, trace
from .complexified import ComplexElement
from .errors import ConeError, ExhaustionError

CONE_TOL = 1e-10
UNIT_TOL = 1e-10
MAX_REJECTIONS = 10_000


def _cone_parts(x: Element):
    t = trace(x).coeffs
    n = norm_sq(x).coeffs
    return t, n


def in_quadratic_cone(x: Element, tol: float = CONE_TOL) -> bool:
    """Membership in the quadratic cone, with tolerances relative to ``|x|``.

    ``x`` counts as real when its non-unit coefficients are below
    ``tol * max(1, |x|)``.  Otherwise ``t(x)`` and ``n(x)`` must be real up
    to ``tol * (1 + |x|^2)`` and the discriminant ``t^2 - 4n`` must be
    negative beyond ``(tol * (1 + |x|))^2``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = x.coeffs
    size = float(np.linalg.norm(c))
    if np.max(np.abs(c[1:]), initial=0.0) <= tol * max(1.0, size):
        return True
    t, n = _cone_parts(x)
    scale = 1.0 + size * size
    if np.max(np.abs(t[1:]), initial=0.0) > tol * scale:
        return False
    if np.max(np.abs(n[1:]), initial=0.0) > tol * scale:
        return False
    disc = t[0] * t[0] - 4.0 * n[0]
    return bool(disc < -(tol * (1.0 + size)) ** 2)


def is_imaginary_unit(J: Element, tol: float = UNIT_TOL) -> bool:
    """``J`` is in the cone and ``J^2 = -1``."""
    sq = J * J
    target = -J.algebra.one()
    return bool(np.max(np.abs(sq.coeffs - target.coeffs)) <= tol) and in_quadratic_cone(J)


def _require_unit(J: Element) -> None:
    if not is_imaginary_unit(J):
        raise ConeError(f"{J!r} is not a square root of -1 in the quadratic cone")


@dataclass(frozen=True)
class ConeDecomposition:
    """``x = r + s J`` with ``s >= 0``; ``is_real`` marks ``s == 0``."""

    real_part: float
    spherical_part: float
    unit: Element
    is_real: bool

    def reconstruct(self) -> Element:
        one = self.unit.algebra.one()
        return self.real_part * one + self.spherical_part * self.unit

    @property
    def z(self) -> complex:
        """Plane trace ``r + s i`` in the upper half plane."""
        return complex(self.real_part, self.spherical_part)


def decompose(x: Element, default_J: Element | None = None, tol: float = CONE_TOL) -> ConeDecomposition:
    if not in_quadratic_cone(x, tol):
        raise ConeError(f"{x!r} is not in the quadratic cone")
    a = x.algebra
    c = x.coeffs
    if np.max(np.abs(c[1:]), initial=0.0) <= tol * max(1.0, float(np.linalg.norm(c))):
        J = default_J if default_J is not None else default_imaginary_unit(a)
        return ConeDecomposition(float(c[0]), 0.0, J, True)
    r = 0.5 * trace(x).coeffs[0]
    im = 0.5 * (x - x.conj())
    s = float(np.sqrt(norm_sq(im).coeffs[0]))
    return ConeDecomposition(float(r), s, im / s, False)


def invert(x: Element) -> Element:
    """``x^{-1} = n(x)^{-1} x^c`` for nonzero cone elements."""
    if not np.any(x.coeffs):
        raise ZeroDivisionError("cannot invert zero")
    if not in_quadratic_cone(x):
        raise ConeError(f"{x!r} is not in the quadratic cone")
    n = norm_sq(x).coeffs[0]
    return x.conj() / n


@lru_cache(maxsize=None)
def anticommuting_units(algebra: Algebra) -> tuple[int, ...]:
    """Greedy set of basis indices ``k`` with ``e_k^2 = -1``, ``e_k^c = -e_k``
    and pairwise anticommuting.  Any unit combination of them squares to -1."""
    eye = np.eye(algebra.dim)
    chosen: list[int] = []
    for k in range(1, algebra.dim):
        e = eye[k]
        if not np.array_equal(algebra.mul_arrays(e, e), -eye[0]):
            continue
        if not np.array_equal(algebra.conj_arrays(e), -e):
            continue
        if all(
            np.array_equal(algebra.mul_arrays(e, eye[h]), -algebra.mul_arrays(eye[h], e))
            for h in chosen
        ):
            chosen.append(k)
    return tuple(chosen)


def sample_sphere(algebra: Algebra, seed: int = 0, count: int = 1) -> list[Element]:
    """Random square roots of -1.

    Uses normalized combinations of pairwise anticommuting imaginary basis
    units when the algebra has any; otherwise projects random elements
    ``x -> Im(x) / sqrt(n(Im x))`` and rejects failures.
    """
    rng = np.random.default_rng(seed)
    units = anticommuting_units(algebra)
    out: list[Element] = []
    if units:
        for _ in range(count):
            w = rng.standard_normal(len(units))
            c = np.zeros(algebra.dim)
            c[list(units)] = w / np.linalg.norm(w)
            out.append(Element(algebra, c))
        return out
    misses = 0
    while len(out) < count:
        x = algebra.random_element(rng)
        im = 0.5 * (x - x.conj())
        n = norm_sq(im).coeffs
        if n[0] > 0 and np.max(np.abs(n[1:]), initial=0.0) <= CONE_TOL * (1 + n[0]):
            J = im / float(np.sqrt(n[0]))
            if is_imaginary_unit(J):
                out.append(J)
                misses = 0
                continue
        misses += 1
        if misses >= MAX_REJECTIONS:
            raise ExhaustionError(
                f"no square root of -1 found in {MAX_REJECTIONS} consecutive draws in {algebra.name}"
            )
    return out


@lru_cache(maxsize=None)
def default_imaginary_unit(algebra: Algebra) -> Element:
    """First imaginary basis element that squares to -1 in the cone, else a sampled one."""
    for k in range(1, algebra.dim):
        e = algebra.basis(k)
        if is_imaginary_unit(e):
            return e
    return sample_sphere(algebra, seed=0, count=1)[0]


def in_plane(x: Element, J: Element, tol: float = CONE_TOL) -> bool:
    """Whether ``x`` lies in ``C_J`` (least-squares residual test)."""
    basis = np.stack([x.algebra.one().coeffs, J.coeffs], axis=1)
    coef, *_ = np.linalg.lstsq(basis, x.coeffs, rcond=None)
    resid = x.coeffs - basis @ coef
    return float(np.linalg.norm(resid)) <= tol * max(1.0, float(np.linalg.norm(x.coeffs)))


def plane_coordinate(x: Element, J: Element, tol: float = CONE_TOL) -> complex:
    """``z`` with ``phi_J(z) = x``; raises if ``x`` is not in ``C_J``."""
    if not in_plane(x, J, tol):
        raise ConeError(f"{x!r} does not lie in the plane of {J!r}")
    basis = np.stack([x.algebra.one().coeffs, J.coeffs], axis=1)
    coef, *_ = np.linalg.lstsq(basis, x.coeffs, rcond=None)
    return complex(coef[0], coef[1])


def phi_J(z: complex, J: Element) -> Element:
    """``r + s i -> r + s J``."""
    _require_unit(J)
    z = complex(z)
    return z.real * J.algebra.one() + z.imag * J


def psi_J(v: ComplexElement, J: Element) -> Element:
    """``a + b i -> a + J b``."""
    _require_unit(J)
    return v.re + J * v.im


def phi_arrays(z: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Batched :func:`phi_J` on raw coefficient arrays (no checks)."""
    z = np.asarray(z, dtype=complex)
    out = np.multiply.outer(z.imag, J)
    out[..., 0] += z.real
    return out
