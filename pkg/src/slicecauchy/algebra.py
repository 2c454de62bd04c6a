"""Finite-dimensional real alternative *-algebras given by structure constants.

An :class:`Algebra` stores the multiplication table as a structure tensor
``mul_table[i, j, k]`` (the ``k``-th coefficient of ``e_i e_j``) together with
the matrix of the *-involution.  :class:`Element` is a thin immutable wrapper
around a coefficient vector; heavy lifting (quadrature, validators) goes
through the batched array helpers on :class:`Algebra` instead.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import AlgebraError, AlgebraMismatchError, SizeError

CLIFFORD_MAX_GENERATORS = 8


@dataclass(frozen=True, eq=False)
class Algebra:
    """A real unital algebra with a linear involution, in a fixed basis.

    Attributes:
        name: Human readable name.
        basis_names: Names of the basis elements; ``basis_names[0] == "1"``.
        mul_table: Structure tensor of shape ``(dim, dim, dim)``.
        conj_matrix: Matrix of ``x -> x^c`` acting on coefficient vectors.
    """

    name: str
    basis_names: tuple[str, ...]
    mul_table: np.ndarray = field(repr=False)
    conj_matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        table = np.array(self.mul_table, dtype=float)
        conj = np.array(self.conj_matrix, dtype=float)
        n = len(self.basis_names)
        if n < 1:
            raise AlgebraError("algebra needs at least one basis element")
        if table.shape != (n, n, n):
            raise AlgebraError(f"mul_table has shape {table.shape}, expected {(n, n, n)}")
        if conj.shape != (n, n):
            raise AlgebraError(f"conj_matrix has shape {conj.shape}, expected {(n, n)}")
        if not (np.all(np.isfinite(table)) and np.all(np.isfinite(conj))):
            raise AlgebraError("tables must not contain NaN or Inf")
        eye = np.eye(n)
        for k in range(n):
            if not np.array_equal(table[0, k], eye[k]):
                raise AlgebraError(f"unit axiom fails: e0*e{k} != e{k} (index {k})")
            if not np.array_equal(table[k, 0], eye[k]):
                raise AlgebraError(f"unit axiom fails: e{k}*e0 != e{k} (index {k})")
        square = conj @ conj
        bad = np.argwhere(square != eye)
        if len(bad):
            i, j = bad[0]
            raise AlgebraError(
                f"conj_matrix is not an involution: (C^2)[{i}][{j}] = {square[i, j]!r}"
            )
        table.setflags(write=False)
        conj.setflags(write=False)
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        object.__setattr__(self, "mul_table", table)
        object.__setattr__(self, "conj_matrix", conj)

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    # -- elements ---------------------------------------------------------

    def element(self, coeffs) -> Element:
        return Element(self, coeffs)

    def zero(self) -> Element:
        return Element(self, np.zeros(self.dim))

    def one(self) -> Element:
        return self.real(1.0)

    def real(self, value: float) -> Element:
        c = np.zeros(self.dim)
        c[0] = value
        return Element(self, c)

    def basis(self, key: int | str) -> Element:
        """Basis element by index or by name."""
        if isinstance(key, str):
            try:
                key = self.basis_names.index(key)
            except ValueError:
                raise KeyError(f"{key!r} is not a basis name of {self.name}") from None
        c = np.zeros(self.dim)
        c[key] = 1.0
        return Element(self, c)

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> Element:
        return Element(self, scale * rng.standard_normal(self.dim))

    # -- batched array arithmetic ----------------------------------------

    def mul_arrays(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of coefficient arrays; leading axes broadcast."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        d = self.dim
        outer = x[..., :, None] * y[..., None, :]
        return outer.reshape(x.shape[:-1] + (d * d,)) @ self._flat_table

    @cached_property
    def _flat_table(self) -> np.ndarray:
        return self.mul_table.reshape(self.dim * self.dim, self.dim)

    def conj_arrays(self, x: np.ndarray) -> np.ndarray:
        return x @ self.conj_matrix.T

    @cached_property
    def left_mul_matrices(self) -> np.ndarray:
        """``L[i]`` is the matrix of ``y -> e_i y``."""
        return np.transpose(self.mul_table, (0, 2, 1))

    def left_mul_matrix(self, x: np.ndarray) -> np.ndarray:
        return np.tensordot(x, self.left_mul_matrices, axes=(0, 0))

    def to_dict(self) -> dict:
        """Algebra-spec document (see :func:`load_algebra`)."""
        return {
            "name": self.name,
            "dim": self.dim,
            "basis_names": list(self.basis_names),
            "mul_table": self.mul_table.tolist(),
            "conj_matrix": self.conj_matrix.tolist(),
        }

    def same_tables(self, other: Algebra) -> bool:
        return (
            self.basis_names == other.basis_names
            and np.array_equal(self.mul_table, other.mul_table)
            and np.array_equal(self.conj_matrix, other.conj_matrix)
        )


class Element:
    """Immutable element of an :class:`Algebra` (coefficient vector)."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs):
        c = np.array(coeffs, dtype=float).reshape(-1)
        if c.shape != (algebra.dim,):
            raise ValueError(f"expected {algebra.dim} coefficients, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValueError("element coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def _check(self, other: Element) -> None:
        if other.algebra is not self.algebra and not self.algebra.same_tables(other.algebra):
            raise AlgebraMismatchError(
                f"operands live in different algebras ({self.algebra.name}, {other.algebra.name})"
            )

    def _new(self, coeffs) -> Element:
        return Element(self.algebra, coeffs)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = self.algebra.real(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return self._new(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = self.algebra.real(other)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return self._new(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return self.algebra.real(other) - self
        return NotImplemented

    def __neg__(self):
        return self._new(-self.coeffs)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self._new(float(other) * self.coeffs)
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return self._new(self.algebra.mul_arrays(self.coeffs, other.coeffs))

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self._new(float(other) * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self._new(self.coeffs / float(other))
        return NotImplemented

    def conj(self) -> Element:
        return self._new(self.algebra.conj_matrix @ self.coeffs)

    @property
    def real_part(self) -> float:
        return float(self.coeffs[0])

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs[1:]) <= tol))

    def allclose(self, other: Element, atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (other.algebra is self.algebra or self.algebra.same_tables(other.algebra)) and np.array_equal(
            self.coeffs, other.coeffs
        )

    __hash__ = None

    def __repr__(self):
        terms = []
        for name, c in zip(self.algebra.basis_names, self.coeffs):
            if c == 0:
                continue
            num = f"{c:.12g}"
            terms.append(num if name == "1" else f"{num}*{name}")
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        return f"<{self.algebra.name}: {body}>"


# -- arithmetic front doors ------------------------------------------------


def mul(x: Element, y: Element) -> Element:
    return x * y


def add(x: Element, y: Element) -> Element:
    return x + y


def sub(x: Element, y: Element) -> Element:
    return x - y


def scalar_mul(r: float, x: Element) -> Element:
    return float(r) * x


def conjugate(x: Element) -> Element:
    return x.conj()


def trace(x: Element) -> Element:
    """``t(x) = x + x^c`` (returned as an element; it need not be real)."""
    return x + x.conj()


def norm_sq(x: Element) -> Element:
    """``n(x) = x x^c`` (returned as an element; it need not be real)."""
    return x * x.conj()


def euclidean_norm(x: Element) -> float:
    return float(np.linalg.norm(x.coeffs))


def associator(x: Element, y: Element, z: Element) -> Element:
    return (x * y) * z - x * (y * z)


# -- builders --------------------------------------------------------------

_HAMILTON = {
    # (a, b): (sign, c) for e_a e_b = sign * e_c, indices 1=i 2=j 3=k
    (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
    (1, 2): (1, 3), (2, 1): (-1, 3),
    (2, 3): (1, 1), (3, 2): (-1, 1),
    (3, 1): (1, 2), (1, 3): (-1, 2),
}


def build_quaternions() -> Algebra:
    table = np.zeros((4, 4, 4))
    for k in range(4):
        table[0, k, k] = table[k, 0, k] = 1.0
    for (a, b), (sign, c) in _HAMILTON.items():
        table[a, b, c] = sign
    conj = np.diag([1.0, -1.0, -1.0, -1.0])
    return Algebra("quaternions", ("1", "i", "j", "k"), table, conj)


def cayley_dickson_double(base: Algebra, name: str, basis_names: Sequence[str] | None = None) -> Algebra:
    """Double ``base`` with ``(a,b)(c,d) = (ac - d^c b, da + b c^c)``.

    The new basis is ``(e_0,0), ..., (e_{n-1},0), (0,e_0), ..., (0,e_{n-1})``
    and the involution is ``(a,b)^c = (a^c, -b)``.
    """
    n = base.dim
    table = np.zeros((2 * n, 2 * n, 2 * n))
    eye = np.eye(2 * n)
    for p in range(2 * n):
        for q in range(2 * n):
            table[p, q] = _cd_mul(eye[p], eye[q], base)
    conj = np.zeros((2 * n, 2 * n))
    conj[:n, :n] = base.conj_matrix
    conj[n:, n:] = -np.eye(n)
    if basis_names is None:
        basis_names = ["1"] + [f"e{k}" for k in range(1, 2 * n)]
    return Algebra(name, tuple(basis_names), table, conj)


def _cd_mul(x: np.ndarray, y: np.ndarray, base: Algebra) -> np.ndarray:
    n = base.dim
    a, b = x[:n], x[n:]
    c, d = y[:n], y[n:]
    m, cj = base.mul_arrays, base.conj_arrays
    return np.concatenate([m(a, c) - m(cj(d), b), m(d, a) + m(b, cj(c))])


OCTONION_BASIS = ("1", "i", "j", "ij", "k", "ik", "jk", "k(ij)")


def build_octonions() -> Algebra:
    """Octonions in the basis ``1, i, j, ij, k, ik, jk, k(ij)``.

    ``i, j`` generate a quaternion subalgebra and ``k`` is the doubling unit;
    the remaining basis elements are the indicated products.
    """
    h = build_quaternions()
    cd = cayley_dickson_double(h, "cd8")
    e = np.eye(8)
    i, j, k = e[1], e[2], e[4]

    def m(x, y):
        return cd.mul_arrays(x, y)

    columns = [e[0], i, j, m(i, j), k, m(i, k), m(j, k), m(k, m(i, j))]
    p = np.array(columns).T
    p_inv = np.linalg.inv(p)
    table = np.einsum("ia,jb,ijk,ck->abc", p, p, cd.mul_table, p_inv)
    conj = p_inv @ cd.conj_matrix @ p
    table = np.round(table, 12) + 0.0
    conj = np.round(conj, 12) + 0.0
    return Algebra("octonions", OCTONION_BASIS, table, conj)


def build_sedenions() -> Algebra:
    """Cayley-Dickson double of the octonions; not alternative."""
    o = build_octonions()
    names = list(OCTONION_BASIS) + [f"({b})l" if b != "1" else "l" for b in OCTONION_BASIS]
    return cayley_dickson_double(o, "sedenions", names)


def _blade_name(blade: tuple[int, ...]) -> str:
    if not blade:
        return "1"
    if all(g < 10 for g in blade):
        return "e" + "".join(str(g) for g in blade)
    return "e" + "_".join(str(g) for g in blade)


def _blade_product(a: tuple[int, ...], b: tuple[int, ...], squares: dict[int, int]) -> tuple[int, tuple[int, ...]]:
    seq = list(a + b)
    sign = 1
    # bubble sort counting transpositions of distinct anticommuting generators
    for end in range(len(seq) - 1, 0, -1):
        for t in range(end):
            if seq[t] > seq[t + 1]:
                seq[t], seq[t + 1] = seq[t + 1], seq[t]
                sign = -sign
    out: list[int] = []
    for g in seq:
        if out and out[-1] == g:
            out.pop()
            sign *= squares[g]
        else:
            out.append(g)
    return sign, tuple(out)


def build_clifford(p: int, q: int, max_generators: int = CLIFFORD_MAX_GENERATORS) -> Algebra:
    """Clifford algebra ``R_{p,q}`` with Clifford conjugation as involution.

    Generators ``e_1..e_p`` square to ``+1`` and ``e_{p+1}..e_{p+q}`` to ``-1``.
    Basis blades are sorted by grade, then lexicographically.
    """
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    n_gen = p + q
    if n_gen > max_generators:
        raise SizeError(f"p+q = {n_gen} exceeds the cap {max_generators} (dim {2 ** max_generators})")
    squares = {g: (1 if g <= p else -1) for g in range(1, n_gen + 1)}
    blades = [c for r in range(n_gen + 1) for c in itertools.combinations(range(1, n_gen + 1), r)]
    index = {b: t for t, b in enumerate(blades)}
    dim = len(blades)
    table = np.zeros((dim, dim, dim))
    for a, ba in enumerate(blades):
        for b, bb in enumerate(blades):
            sign, res = _blade_product(ba, bb, squares)
            table[a, b, index[res]] = sign
    signs = [(-1) ** (len(b) * (len(b) + 1) // 2) for b in blades]
    conj = np.diag(np.array(signs, dtype=float))
    return Algebra(f"Cl({p},{q})", tuple(_blade_name(b) for b in blades), table, conj)


def build_complex() -> Algebra:
    return build_clifford(0, 1)


BUILTINS = {
    "quaternions": build_quaternions,
    "H": build_quaternions,
    "octonions": build_octonions,
    "O": build_octonions,
    "sedenions": build_sedenions,
    "complex": build_complex,
}


def builtin_algebra(name: str) -> Algebra:
    """Resolve ``quaternions``, ``octonions``, ``sedenions`` or ``clifford:p,q``."""
    key = name.strip()
    if key.lower().startswith(("clifford:", "cl:")):
        p, q = key.split(":", 1)[1].split(",")
        return build_clifford(int(p), int(q))
    try:
        return BUILTINS[key]()
    except KeyError:
        raise KeyError(f"unknown builtin algebra {name!r}") from None


# -- algebra-spec documents -----------------------------------------------


def load_algebra(document: dict | str | Path) -> Algebra:
    """Build an :class:`Algebra` from an algebra-spec document.

    ``document`` is a parsed JSON object or a path to one::

        {"name": str, "dim": n, "basis_names": [...],
         "mul_table": n x n array of length-n arrays, "conj_matrix": n x n}
    """
    if not isinstance(document, dict):
        with open(document, encoding="utf-8") as fh:
            document = json.load(fh)
    required = ("name", "dim", "basis_names", "mul_table", "conj_matrix")
    missing = [key for key in required if key not in document]
    if missing:
        raise AlgebraError(f"algebra spec missing keys: {missing}")
    dim = document["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise AlgebraError(f"dim must be a positive integer, got {dim!r}")
    names = document["basis_names"]
    if not isinstance(names, list) or len(names) != dim or not all(isinstance(s, str) for s in names):
        raise AlgebraError("basis_names must be a list of dim strings")
    if names[0] != "1":
        raise AlgebraError('basis_names[0] must be "1"')
    try:
        table = np.array(document["mul_table"], dtype=float)
        conj = np.array(document["conj_matrix"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise AlgebraError(f"tables are not numeric arrays: {exc}") from None
    if table.shape != (dim, dim, dim):
        raise AlgebraError(f"mul_table has shape {table.shape}, expected {(dim, dim, dim)}")
    if conj.shape != (dim, dim):
        raise AlgebraError(f"conj_matrix has shape {conj.shape}, expected {(dim, dim)}")
    for idx in np.argwhere(~np.isfinite(table)):
        raise AlgebraError(f"mul_table entry {tuple(int(v) for v in idx)} is not finite")
    for idx in np.argwhere(~np.isfinite(conj)):
        raise AlgebraError(f"conj_matrix entry {tuple(int(v) for v in idx)} is not finite")
    return Algebra(str(document["name"]), tuple(names), table, conj)


def dump_algebra(algebra: Algebra, path: str | Path | None = None) -> str:
    text = json.dumps(algebra.to_dict())
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# -- validators -------------------------------------------------------------


@dataclass
class ValidationReport:
    """Outcome of a sampled axiom check."""

    property: str
    samples: int
    max_violation: float
    tolerance: float
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "samples": self.samples,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "witnesses": self.witnesses,
        }


MAX_WITNESSES = 5


def _dyadic_samples(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    # Quarter-integers keep every product in these checks exact in binary64,
    # so associative algebras report exactly zero.
    x = rng.integers(-8, 9, size=(count, dim)) / 4.0
    zero = ~np.any(x, axis=1)
    x[zero, 0] = 1.0
    return x


def _norms(x: np.ndarray) -> np.ndarray:
    return np.linalg.norm(x, axis=-1)


def validate_alternative(algebra: Algebra, samples: int = 10_000, seed: int = 0, tol: float = 1e-12) -> ValidationReport:
    """Check that the associator is alternating on random triples.

    Tested relations: ``A(x,x,y) = A(x,y,y) = A(x,y,x) = 0`` and sign change of
    ``A(x,y,z)`` under the transpositions ``x<->y`` and ``y<->z``.  Violations
    are Euclidean norms divided by the product of the argument norms.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    n = algebra.dim
    x, y, z = (_dyadic_samples(rng, samples, n) for _ in range(3))
    m = algebra.mul_arrays

    def assoc(a, b, c):
        return m(m(a, b), c) - m(a, m(b, c))

    nx, ny, nz = _norms(x), _norms(y), _norms(z)
    axyz = assoc(x, y, z)
    checks = {
        "A(x,x,y)": (assoc(x, x, y), nx * nx * ny),
        "A(x,y,y)": (assoc(x, y, y), nx * ny * ny),
        "A(x,y,x)": (assoc(x, y, x), nx * ny * nx),
        "A(x,y,z)+A(y,x,z)": (axyz + assoc(y, x, z), nx * ny * nz),
        "A(x,y,z)+A(x,z,y)": (axyz + assoc(x, z, y), nx * ny * nz),
    }
    worst = np.zeros(samples)
    witnesses = []
    for label, (value, scale) in checks.items():
        v = _norms(value) / scale
        worst = np.maximum(worst, v)
        for t in np.flatnonzero(v > tol)[: MAX_WITNESSES - len(witnesses)]:
            witnesses.append(
                {"relation": label, "violation": float(v[t]),
                 "x": x[t].tolist(), "y": y[t].tolist(), "z": z[t].tolist()}
            )
    return ValidationReport("alternativity", samples, float(worst.max()), tol, witnesses)


def validate_involution(algebra: Algebra, samples: int = 10_000, seed: int = 0, tol: float = 1e-12) -> ValidationReport:
    """Check ``(x^c)^c = x``, ``(xy)^c = y^c x^c`` and ``1^c = 1``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    n = algebra.dim
    x = _dyadic_samples(rng, samples, n)
    y = _dyadic_samples(rng, samples, n)
    cj, m = algebra.conj_arrays, algebra.mul_arrays
    nx, ny = _norms(x), _norms(y)
    checks = {
        "(x^c)^c = x": _norms(cj(cj(x)) - x) / nx,
        "(xy)^c = y^c x^c": _norms(cj(m(x, y)) - m(cj(y), cj(x))) / (nx * ny),
    }
    unit = float(np.linalg.norm(algebra.conj_matrix[:, 0] - np.eye(n)[0]))
    worst = max(unit, *(float(v.max()) for v in checks.values()))
    witnesses = []
    if unit > tol:
        witnesses.append({"relation": "1^c = 1", "violation": unit})
    for label, v in checks.items():
        for t in np.flatnonzero(v > tol)[: MAX_WITNESSES - len(witnesses)]:
            witnesses.append({"relation": label, "violation": float(v[t]),
                              "x": x[t].tolist(), "y": y[t].tolist()})
    return ValidationReport("involution", samples, worst, tol, witnesses)


def estimate_C1(algebra: Algebra, samples: int = 10_000, seed: int = 0) -> float:
    """Largest observed ``|xy| / (|x| |y|)``: a lower bound for the best constant."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, algebra.dim))
    y = rng.standard_normal((samples, algebra.dim))
    ratios = _norms(algebra.mul_arrays(x, y)) / (_norms(x) * _norms(y))
    return float(ratios.max())


def validate_norm_submultiplicativity(algebra: Algebra, bound: float, samples: int = 10_000, seed: int = 0,
                                      tol: float = 1e-12) -> ValidationReport:
    """Check ``|xy| <= bound |x| |y|`` on random pairs."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, algebra.dim))
    y = rng.standard_normal((samples, algebra.dim))
    excess = _norms(algebra.mul_arrays(x, y)) / (_norms(x) * _norms(y)) - bound
    excess = np.maximum(excess, 0.0)
    witnesses = [{"x": x[t].tolist(), "y": y[t].tolist(), "violation": float(excess[t])}
                 for t in np.flatnonzero(excess > tol)[:MAX_WITNESSES]]
    return ValidationReport("norm_submultiplicativity", samples, float(excess.max()), tol, witnesses)
