"""Stem functions, the slice functions they induce, and the slice product.

A stem ``F = F1 + F2 i`` maps a conjugation-invariant planar set ``D`` into
the complexified algebra with ``F(conj z) = conj F(z)``.  It induces the
slice function ``f(r + sJ) = F1(r + si) + J F2(r + si)``.

Stems are immutable expression trees.  Each node evaluates on arrays of
complex points and knows its ``d/dz`` and ``d/dzbar`` stems, so symmetry
and derivatives are structural for every node except opaque samplers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import Algebra, Element
from .complexified import ComplexElement, cmul_arrays, scale_arrays
from .cone import (
    decompose,
    default_imaginary_unit,
    phi_J,
    sample_sphere,
)
from .errors import CapabilityError, DomainError, PoleError, StemSymmetryError
from .geometry import PlanarDomain

FD_STEP = 1e-6
POLE_TOL = 1e-14
SYMMETRY_SAMPLES = 200
SYMMETRY_TOL = 1e-10


def _zeros(z: np.ndarray, dim: int):
    shape = np.shape(z) + (dim,)
    return np.zeros(shape), np.zeros(shape)


class Stem:
    """Base class of stem expression nodes."""

    opaque = False

    def evaluate(self, z, algebra: Algebra) -> tuple[np.ndarray, np.ndarray]:
        """``(F1, F2)`` coefficient arrays of shape ``z.shape + (dim,)``."""
        raise NotImplementedError

    def d_dz(self) -> Stem:
        raise NotImplementedError

    def d_dzbar(self) -> Stem:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def children(self) -> tuple[Stem, ...]:
        return ()

    @property
    def has_opaque(self) -> bool:
        return self.opaque or any(c.has_opaque for c in self.children())

    def __add__(self, other: Stem) -> Stem:
        return Sum((self, other))

    def __mul__(self, other: Stem) -> Stem:
        return Product(self, other)


@dataclass(frozen=True, eq=False)
class Const(Stem):
    """Constant stem ``c + 0 i``; a float value means ``value * 1``."""

    value: np.ndarray | float

    def evaluate(self, z, algebra):
        re, im = _zeros(z, algebra.dim)
        if np.ndim(self.value) == 0:
            re[..., 0] = float(self.value)
        else:
            re[...] = np.asarray(self.value, dtype=float)
        return re, im

    def d_dz(self):
        return ZERO

    def d_dzbar(self):
        return ZERO

    def to_dict(self):
        v = self.value
        return {"node": "const", "value": float(v) if np.ndim(v) == 0 else np.asarray(v).tolist()}


ZERO = Const(0.0)
ONE = Const(1.0)


@dataclass(frozen=True, eq=False)
class Poly(Stem):
    """``sum_k z^k c_k`` with algebra coefficients ``c_k`` (rows of ``coeffs``)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] == 0:
            raise ValueError("Poly coefficients must be a non-empty (degree+1, dim) array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def evaluate(self, z, algebra):
        z = np.asarray(z, dtype=complex)
        re = np.broadcast_to(self.coeffs[-1], z.shape + (algebra.dim,)).copy()
        im = np.zeros_like(re)
        for c in self.coeffs[-2::-1]:
            re, im = scale_arrays(z, re, im)
            re = re + c
        return re, im

    def d_dz(self):
        if len(self.coeffs) == 1:
            return ZERO
        k = np.arange(1, len(self.coeffs))[:, None]
        return Poly(k * self.coeffs[1:])

    def d_dzbar(self):
        return ZERO

    def to_dict(self):
        return {"node": "poly", "coeffs": self.coeffs.tolist()}


@dataclass(frozen=True, eq=False)
class RealPoly(Stem):
    """``p(z) 1`` for a polynomial ``p`` with real coefficients (ascending)."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def scalar(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def evaluate(self, z, algebra):
        p = self.scalar(z)
        re, im = _zeros(z, algebra.dim)
        re[..., 0] = p.real
        im[..., 0] = p.imag
        return re, im

    def d_dz(self):
        if len(self.coeffs) <= 1:
            return ZERO
        return RealPoly(tuple(np.polynomial.polynomial.polyder(self.coeffs)))

    def d_dzbar(self):
        return ZERO

    def to_dict(self):
        return {"node": "real_poly", "coeffs": list(self.coeffs)}


@dataclass(frozen=True, eq=False)
class ConjVar(Stem):
    """The stem ``z -> conj(z) 1`` inducing ``x -> x^c``."""

    def evaluate(self, z, algebra):
        z = np.asarray(z, dtype=complex)
        re, im = _zeros(z, algebra.dim)
        re[..., 0] = z.real
        im[..., 0] = -z.imag
        return re, im

    def d_dz(self):
        return ZERO

    def d_dzbar(self):
        return ONE

    def to_dict(self):
        return {"node": "conj_var"}


@dataclass(frozen=True, eq=False)
class Sum(Stem):
    terms: tuple[Stem, ...]

    def evaluate(self, z, algebra):
        re, im = _zeros(z, algebra.dim)
        for t in self.terms:
            a, b = t.evaluate(z, algebra)
            re = re + a
            im = im + b
        return re, im

    def children(self):
        return tuple(self.terms)

    def d_dz(self):
        return Sum(tuple(t.d_dz() for t in self.terms))

    def d_dzbar(self):
        return Sum(tuple(t.d_dzbar() for t in self.terms))

    def to_dict(self):
        return {"node": "sum", "terms": [t.to_dict() for t in self.terms]}


@dataclass(frozen=True, eq=False)
class Product(Stem):
    """Pointwise product of stems in the complexified algebra."""

    left: Stem
    right: Stem

    def evaluate(self, z, algebra):
        a = self.left.evaluate(z, algebra)
        b = self.right.evaluate(z, algebra)
        return cmul_arrays(algebra, *a, *b)

    def children(self):
        return (self.left, self.right)

    def d_dz(self):
        return Sum((Product(self.left.d_dz(), self.right), Product(self.left, self.right.d_dz())))

    def d_dzbar(self):
        return Sum((Product(self.left.d_dzbar(), self.right), Product(self.left, self.right.d_dzbar())))

    def to_dict(self):
        return {"node": "product", "left": self.left.to_dict(), "right": self.right.to_dict()}


@dataclass(frozen=True, eq=False)
class RationalRealDen(Stem):
    """``q(z)^{-1} N(z)`` with ``q`` real-coefficient (ascending) and ``N`` a stem."""

    numerator: Stem
    denominator: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "denominator", tuple(float(c) for c in self.denominator))

    def evaluate(self, z, algebra):
        z = np.asarray(z, dtype=complex)
        q = np.polynomial.polynomial.polyval(z, self.denominator)
        scale = np.polynomial.polynomial.polyval(np.abs(z), np.abs(self.denominator))
        if np.any(np.abs(q) <= POLE_TOL * np.maximum(scale, 1.0)):
            raise PoleError("denominator of rational stem vanishes at the evaluation point")
        re, im = self.numerator.evaluate(z, algebra)
        return scale_arrays(1.0 / q, re, im)

    def children(self):
        return (self.numerator,)

    def d_dz(self):
        q = self.denominator
        dq = tuple(np.polynomial.polynomial.polyder(q)) or (0.0,)
        q2 = tuple(np.polynomial.polynomial.polymul(q, q))
        num = Sum((Product(RealPoly(q), self.numerator.d_dz()),
                   Product(RealPoly(tuple(-c for c in dq)), self.numerator)))
        return RationalRealDen(num, q2)

    def d_dzbar(self):
        return RationalRealDen(self.numerator.d_dzbar(), self.denominator)

    def to_dict(self):
        return {"node": "rational_real_den", "num": self.numerator.to_dict(), "den": list(self.denominator)}


@dataclass(frozen=True, eq=False)
class HalfPlane(Stem):
    """``a + sign(Im z) b i``; undefined on the real axis.

    Locally constant, hence holomorphic off the real axis.
    """

    a: np.ndarray | float
    b: np.ndarray

    def evaluate(self, z, algebra):
        z = np.asarray(z, dtype=complex)
        if np.any(z.imag == 0):
            raise DomainError("half-plane stem is undefined on the real axis")
        re, im = _zeros(z, algebra.dim)
        if np.ndim(self.a) == 0:
            re[..., 0] = float(self.a)
        else:
            re[...] = np.asarray(self.a, dtype=float)
        im[...] = np.sign(z.imag)[..., None] * np.asarray(self.b, dtype=float)
        return re, im

    def d_dz(self):
        return ZERO

    def d_dzbar(self):
        return ZERO

    def to_dict(self):
        a = self.a
        return {"node": "half_plane", "a": float(a) if np.ndim(a) == 0 else np.asarray(a).tolist(),
                "b": np.asarray(self.b).tolist()}


@dataclass(frozen=True, eq=False)
class Sampler(Stem):
    """Opaque stem ``fn(z) -> ComplexElement``.

    ``fn`` must be free of side effects.  Without derivative hooks, the
    derivatives use central differences when ``differentiable`` is true.
    """

    fn: Callable[[complex], ComplexElement]
    dz: Callable[[complex], ComplexElement] | None = None
    dzbar: Callable[[complex], ComplexElement] | None = None
    differentiable: bool = True
    name: str = "sampler"

    opaque = True

    def evaluate(self, z, algebra):
        z = np.asarray(z, dtype=complex)
        re, im = _zeros(z, algebra.dim)
        for idx in np.ndindex(z.shape):
            v = self.fn(complex(z[idx]))
            re[idx] = v.re.coeffs
            im[idx] = v.im.coeffs
        return re, im

    def _derivative(self, hook, kind):
        if hook is not None:
            return Sampler(hook, name=f"{self.name}'", differentiable=self.differentiable)
        if not self.differentiable:
            raise CapabilityError(f"sampler {self.name!r} has no derivative hook and is not differentiable")
        return FiniteDifference(self, kind)

    def d_dz(self):
        return self._derivative(self.dz, "z")

    def d_dzbar(self):
        return self._derivative(self.dzbar, "zbar")

    def to_dict(self):
        raise CapabilityError("opaque sampler stems cannot be serialized")


@dataclass(frozen=True, eq=False)
class FiniteDifference(Stem):
    """Central-difference ``d/dz`` or ``d/dzbar`` of a stem, step ``1e-6 (1 + |z|)``."""

    base: Stem
    kind: str

    opaque = True

    def evaluate(self, z, algebra):
        z = np.asarray(z, dtype=complex)
        h = (FD_STEP * (1.0 + np.abs(z)))[..., None]
        f = self.base.evaluate
        rp, ip = f(z + h[..., 0], algebra)
        rm, im_ = f(z - h[..., 0], algebra)
        sp, tp = f(z + 1j * h[..., 0], algebra)
        sm, tm = f(z - 1j * h[..., 0], algebra)
        dr_re, dr_im = (rp - rm) / (2 * h), (ip - im_) / (2 * h)
        ds_re, ds_im = (sp - sm) / (2 * h), (tp - tm) / (2 * h)
        if self.kind == "zbar":
            return 0.5 * (dr_re - ds_im), 0.5 * (dr_im + ds_re)
        return 0.5 * (dr_re + ds_im), 0.5 * (dr_im - ds_re)

    def children(self):
        return (self.base,)

    def d_dz(self):
        return FiniteDifference(self, "z")

    def d_dzbar(self):
        return FiniteDifference(self, "zbar")

    def to_dict(self):
        raise CapabilityError("finite-difference stems cannot be serialized")


# -- serialization -----------------------------------------------------------


def stem_to_dict(stem: Stem) -> dict:
    return stem.to_dict()


def stem_from_dict(data: dict) -> Stem:
    node = data.get("node")
    if node == "const":
        v = data["value"]
        return Const(float(v) if np.ndim(v) == 0 else np.asarray(v, dtype=float))
    if node == "poly":
        return Poly(np.asarray(data["coeffs"], dtype=float))
    if node == "real_poly":
        return RealPoly(tuple(data["coeffs"]))
    if node == "conj_var":
        return ConjVar()
    if node == "sum":
        return Sum(tuple(stem_from_dict(t) for t in data["terms"]))
    if node == "product":
        return Product(stem_from_dict(data["left"]), stem_from_dict(data["right"]))
    if node == "rational_real_den":
        return RationalRealDen(stem_from_dict(data["num"]), tuple(data["den"]))
    if node == "half_plane":
        a = data["a"]
        return HalfPlane(float(a) if np.ndim(a) == 0 else np.asarray(a, dtype=float), np.asarray(data["b"], dtype=float))
    raise ValueError(f"unknown stem node {node!r}")


# -- stem evaluation and symmetry ---------------------------------------------


def eval_stem(stem: Stem, z: complex, algebra: Algebra, domain: PlanarDomain | None = None) -> ComplexElement:
    z = complex(z)
    if domain is not None and not domain.contains(z):
        raise DomainError(f"{z} is outside the stem's domain")
    re, im = stem.evaluate(np.array(z), algebra)
    return ComplexElement(Element(algebra, re), Element(algebra, im))


def stem_symmetry_defect(stem: Stem, algebra: Algebra, z: np.ndarray) -> float:
    """Largest ``|F(conj z) - conj F(z)|`` over the given points."""
    re, im = stem.evaluate(z, algebra)
    re_c, im_c = stem.evaluate(np.conj(z), algebra)
    return float(max(np.max(np.abs(re_c - re)), np.max(np.abs(im_c + im))))


def check_stem_symmetry(stem: Stem, algebra: Algebra, domain: PlanarDomain, samples: int = SYMMETRY_SAMPLES,
                        seed: int = 0, tol: float = SYMMETRY_TOL) -> float:
    rng = np.random.default_rng(seed)
    z = domain.sample(rng, samples)
    z = z[domain.contains(np.conj(z))]
    defect = stem_symmetry_defect(stem, algebra, z)
    if defect > tol:
        raise StemSymmetryError(f"stem violates F(conj z) = conj F(z) by {defect:.3e}")
    return defect


# -- slice functions -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SliceFunction:
    """The slice function induced by ``stem`` on ``Omega_D`` (``D`` = ``domain``).

    ``domain=None`` means the whole plane (minus wherever the stem itself is
    undefined).  Opaque stems on a bounded domain get a sampled symmetry check.
    """

    stem: Stem
    algebra: Algebra
    domain: PlanarDomain | None = None

    def __post_init__(self):
        if self.stem.has_opaque and self.domain is not None and self.domain.conj_symmetric:
            check_stem_symmetry(self.stem, self.algebra, self.domain)

    def __call__(self, x: Element) -> Element:
        return eval_slice(self, x)

    def plane_values(self, zeta: np.ndarray, J: np.ndarray) -> np.ndarray:
        """Batched ``f(phi_J(zeta)) = Psi_J(F(zeta))`` as coefficient arrays."""
        re, im = self.stem.evaluate(zeta, self.algebra)
        return re + self.algebra.mul_arrays(np.broadcast_to(J, im.shape), im)

    def at_plane_point(self, z: complex, I: Element) -> Element:
        """``F1(z) + I F2(z)``: the value at ``Re z + Im z * I``."""
        v = eval_stem(self.stem, z, self.algebra, None)
        return v.re + I * v.im

    def derivatives(self) -> tuple[SliceFunction, SliceFunction]:
        return slice_derivatives(self)

    def to_dict(self) -> dict:
        return {"algebra": self.algebra.name, "stem": self.stem.to_dict()}


def _locate(f: SliceFunction, x: Element):
    """``(z, J, is_real)`` with ``z`` in ``D`` and ``x = Re z + Im z J``."""
    dec = decompose(x)
    z = dec.z
    J = dec.unit
    if f.domain is not None:
        if f.domain.contains(z):
            pass
        elif f.domain.contains(z.conjugate()):
            z, J = z.conjugate(), -J
        else:
            raise DomainError(f"{x!r} is outside Omega_D")
    return z, J, dec.is_real


def eval_slice(f: SliceFunction, x: Element) -> Element:
    """``f(r + sJ) = F1(r + si) + J F2(r + si)``."""
    if x.algebra is not f.algebra and not x.algebra.same_tables(f.algebra):
        raise ValueError("point and function live in different algebras")
    z, J, is_real = _locate(f, x)
    v = eval_stem(f.stem, z, f.algebra)
    if is_real:
        return v.re
    return v.re + J * v.im


def stem_from_plane_values(g: Callable[[Element], Element], J: Element,
                           domain: PlanarDomain | None = None) -> Stem:
    """The unique stem whose slice function agrees with ``g`` on ``C_J``.

    ``F1(z) = (g(x_J) + g(x_J^c)) / 2`` and ``F2(z) = -J (g(x_J) - g(x_J^c)) / 2``
    where ``x_J = phi_J(z)``.
    """
    phi_J(0.0, J)  # validates J

    def fn(z: complex) -> ComplexElement:
        if domain is not None and not domain.contains(z):
            raise DomainError(f"{z} is outside the stem's domain")
        a = g(phi_J(z, J))
        b = g(phi_J(z.conjugate(), J))
        return ComplexElement(0.5 * (a + b), -0.5 * (J * (a - b)))

    return Sampler(fn, name="plane_values")


def representation_formula(f_at_xJ: Element, f_at_xJc: Element, J: Element, I: Element) -> Element:
    """Value at ``r + sI`` from the values at ``r + sJ`` and ``r - sJ``."""
    mean = 0.5 * (f_at_xJ + f_at_xJc)
    return mean - 0.5 * (I * (J * (f_at_xJ - f_at_xJc)))


def _same_domain(f: SliceFunction, g: SliceFunction) -> None:
    if f.domain is not g.domain:
        raise DomainError("slice product needs functions on the same domain")
    if f.algebra is not g.algebra and not f.algebra.same_tables(g.algebra):
        raise ValueError("slice product needs functions on the same algebra")


def slice_product(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """The slice function induced by the pointwise product of the stems."""
    _same_domain(f, g)
    return SliceFunction(Product(f.stem, g.stem), f.algebra, f.domain)


def slice_sum(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    _same_domain(f, g)
    return SliceFunction(Sum((f.stem, g.stem)), f.algebra, f.domain)


def star_product(p: Sequence[Element], q: Sequence[Element]) -> list[Element]:
    """Product of right-coefficient polynomials with ``x`` commuting with coefficients."""
    if not p or not q:
        return []
    out = [p[0].algebra.zero() for _ in range(len(p) + len(q) - 1)]
    for k, c in enumerate(p):
        for h, d in enumerate(q):
            out[k + h] = out[k + h] + c * d
    return out


def polynomial(coeffs: Sequence[Element], domain: PlanarDomain | None = None) -> SliceFunction:
    """``x -> sum_k x^k c_k``."""
    algebra = coeffs[0].algebra
    return SliceFunction(Poly(np.array([c.coeffs for c in coeffs])), algebra, domain)


def constant(c: Element, domain: PlanarDomain | None = None) -> SliceFunction:
    return SliceFunction(Const(c.coeffs), c.algebra, domain)


def conjugation(algebra: Algebra, domain: PlanarDomain | None = None) -> SliceFunction:
    """``x -> x^c``."""
    return SliceFunction(ConjVar(), algebra, domain)


def half_plane_function(J: Element) -> SliceFunction:
    """``r + sI -> 1 - IJ`` for ``s > 0``; equals 2 on the upper half of ``C_J`` and 0 on the lower."""
    return SliceFunction(HalfPlane(1.0, -J.coeffs), J.algebra, None)


def slice_derivatives(f: SliceFunction) -> tuple[SliceFunction, SliceFunction]:
    """``(df/dx, df/dx^c)`` induced by ``dF/dz`` and ``dF/dzbar``."""
    return (SliceFunction(f.stem.d_dz(), f.algebra, f.domain),
            SliceFunction(f.stem.d_dzbar(), f.algebra, f.domain))


def _sample_points(f: SliceFunction, samples: int, rng) -> np.ndarray:
    if f.domain is not None:
        return f.domain.sample(rng, samples)
    r = 2.0 * np.sqrt(rng.uniform(0, 1, samples))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, samples))


def is_slice_regular(f: SliceFunction, samples: int = SYMMETRY_SAMPLES, tol: float = 1e-8, seed: int = 0) -> bool:
    """Sup of the ``d/dzbar`` stem over sampled points is at most ``tol``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    z = _sample_points(f, samples, np.random.default_rng(seed))
    re, im = f.stem.d_dzbar().evaluate(z, f.algebra)
    sup = max(np.max(np.linalg.norm(re, axis=-1)), np.max(np.linalg.norm(im, axis=-1)))
    return bool(sup <= tol)


def is_slice_preserving(f: SliceFunction, samples: int = SYMMETRY_SAMPLES, tol: float = 1e-10, seed: int = 0,
                        units: int = 8) -> bool:
    """Sampled check that ``f`` maps every sampled ``C_J`` into itself."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    a = f.algebra
    Js = [default_imaginary_unit(a)] + sample_sphere(a, seed=seed, count=units)
    z = _sample_points(f, samples, rng)
    one = a.one().coeffs
    for J in Js:
        vals = f.plane_values(z, J.coeffs)
        basis = np.stack([one, J.coeffs], axis=1)
        coef, *_ = np.linalg.lstsq(basis, vals.T, rcond=None)
        resid = vals - (basis @ coef).T
        scale = np.maximum(1.0, np.linalg.norm(vals, axis=-1))
        if np.max(np.linalg.norm(resid, axis=-1) / scale) > tol:
            return False
    return True


def default_unit_for(f: SliceFunction) -> Element:
    return default_imaginary_unit(f.algebra)
