"""The complexified algebra ``A_C = A + A i``.

Elements are pairs ``(re, im)`` of algebra elements standing for
``re + im i``.  The complex numbers act by
``(r + s i)(x + y i) = (r x - s y) + (r y + s x) i``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Element
from .errors import AlgebraMismatchError


@dataclass(frozen=True, eq=False)
class ComplexElement:
    re: Element
    im: Element

    def __post_init__(self):
        if self.re.algebra is not self.im.algebra and not self.re.algebra.same_tables(self.im.algebra):
            raise AlgebraMismatchError("real and imaginary parts live in different algebras")

    @property
    def algebra(self) -> Algebra:
        return self.re.algebra

    @classmethod
    def from_arrays(cls, algebra: Algebra, re, im) -> ComplexElement:
        return cls(Element(algebra, re), Element(algebra, im))

    def __add__(self, other: ComplexElement) -> ComplexElement:
        return c_add(self, other)

    def __sub__(self, other: ComplexElement) -> ComplexElement:
        return c_sub(self, other)

    def __mul__(self, other: ComplexElement) -> ComplexElement:
        return c_mul(self, other)

    def __neg__(self) -> ComplexElement:
        return ComplexElement(-self.re, -self.im)

    def conj(self) -> ComplexElement:
        return c_conj(self)

    def allclose(self, other: ComplexElement, atol: float = 1e-12) -> bool:
        return self.re.allclose(other.re, atol) and self.im.allclose(other.im, atol)

    def __repr__(self):
        return f"ComplexElement(re={self.re!r}, im={self.im!r})"


def embed(x: Element) -> ComplexElement:
    """``x -> x + 0 i``."""
    return ComplexElement(x, x.algebra.zero())


def embed_scalar(z: complex, algebra: Algebra) -> ComplexElement:
    """``r + s i -> r 1 + s 1 i``."""
    z = complex(z)
    return ComplexElement(algebra.real(z.real), algebra.real(z.imag))


def c_add(v: ComplexElement, w: ComplexElement) -> ComplexElement:
    return ComplexElement(v.re + w.re, v.im + w.im)


def c_sub(v: ComplexElement, w: ComplexElement) -> ComplexElement:
    return ComplexElement(v.re - w.re, v.im - w.im)


def c_mul(v: ComplexElement, w: ComplexElement) -> ComplexElement:
    """``(x + y i)(x' + y' i) = (x x' - y y') + (x y' + y x') i``."""
    return ComplexElement(v.re * w.re - v.im * w.im, v.re * w.im + v.im * w.re)


def c_conj(v: ComplexElement) -> ComplexElement:
    return ComplexElement(v.re, -v.im)


def scalar_mul(z: complex, v: ComplexElement) -> ComplexElement:
    z = complex(z)
    r, s = z.real, z.imag
    return ComplexElement(r * v.re - s * v.im, r * v.im + s * v.re)


# -- batched helpers on (re, im) coefficient arrays --------------------------


def cmul_arrays(algebra: Algebra, a_re, a_im, b_re, b_im):
    m = algebra.mul_arrays
    return m(a_re, b_re) - m(a_im, b_im), m(a_re, b_im) + m(a_im, b_re)


def scale_arrays(z, re, im):
    """Complex-scalar action with ``z`` broadcast over the trailing axis."""
    z = np.asarray(z, dtype=complex)[..., None]
    r, s = z.real, z.imag
    return r * re - s * im, r * im + s * re
