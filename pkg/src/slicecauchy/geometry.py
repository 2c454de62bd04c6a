"""Planar domains and closed contours in the complex model plane.

Contours live in ``C`` and are carried into a plane ``C_J`` by ``phi_J`` at
use time.  Smooth closed loops (circles) use the periodic trapezoidal rule;
straight pieces of polygons use Gauss-Legendre nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import CapabilityError, GeometryError

DEFAULT_BOUNDARY_NODES = 1024
GAUSS_NODES_PER_PIECE = 32


@dataclass(frozen=True)
class ContourPiece:
    """One piece ``alpha: [0, 1] -> C`` of a contour.

    ``periodic`` pieces are closed smooth loops integrated with the periodic
    trapezoidal rule; the others are open arcs integrated with Gauss-Legendre.
    """

    alpha: Callable[[np.ndarray], np.ndarray]
    dalpha: Callable[[np.ndarray], np.ndarray]
    periodic: bool
    descriptor: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Contour:
    """Counterclockwise boundary made of one or more pieces.

    ``nodes`` is the node count of each periodic piece and ``gauss_nodes`` the
    node count of each open piece.
    """

    pieces: tuple[ContourPiece, ...]
    nodes: int = DEFAULT_BOUNDARY_NODES
    gauss_nodes: int = GAUSS_NODES_PER_PIECE

    def __post_init__(self):
        if self.nodes < 1 or self.gauss_nodes < 1:
            raise ValueError("node counts must be positive")
        for piece in self.pieces:
            if piece.periodic:
                ends = piece.alpha(np.array([0.0, 1.0]))
                if abs(ends[1] - ends[0]) > 1e-12 * max(1.0, abs(ends[0])):
                    raise GeometryError("periodic contour piece is not closed")

    # -- constructors ---------------------------------------------------

    @classmethod
    def circle(cls, center: complex, radius: float, nodes: int = DEFAULT_BOUNDARY_NODES,
               clockwise: bool = False) -> Contour:
        if radius <= 0:
            raise GeometryError("circle radius must be positive")
        c = complex(center)
        sgn = -1.0 if clockwise else 1.0
        piece = ContourPiece(
            alpha=lambda t: c + radius * np.exp(sgn * 2j * np.pi * t),
            dalpha=lambda t: sgn * 2j * np.pi * radius * np.exp(sgn * 2j * np.pi * t),
            periodic=True,
            descriptor={"type": "circle", "center": [c.real, c.imag], "radius": radius,
                        "orientation": "cw" if clockwise else "ccw"},
        )
        return cls((piece,), nodes=nodes)

    @classmethod
    def polygon(cls, vertices, gauss_nodes: int = GAUSS_NODES_PER_PIECE) -> Contour:
        v = [complex(p) for p in vertices]
        if len(v) < 3:
            raise GeometryError("a polygon needs at least three vertices")
        pieces = []
        for a, b in zip(v, v[1:] + v[:1]):
            pieces.append(ContourPiece(
                alpha=lambda t, a=a, b=b: a + (b - a) * t,
                dalpha=lambda t, a=a, b=b: (b - a) * np.ones_like(t, dtype=complex),
                periodic=False,
                descriptor={"type": "segment", "start": [a.real, a.imag], "end": [b.real, b.imag]},
            ))
        return cls(tuple(pieces), gauss_nodes=gauss_nodes)

    @classmethod
    def from_parametrization(cls, alpha, dalpha, nodes: int = DEFAULT_BOUNDARY_NODES) -> Contour:
        """A smooth closed loop given by vectorized ``alpha`` and ``alpha'`` on ``[0, 1]``."""
        piece = ContourPiece(alpha, dalpha, True, {"type": "parametrized"})
        return cls((piece,), nodes=nodes)

    def __add__(self, other: Contour) -> Contour:
        return Contour(self.pieces + other.pieces, self.nodes, self.gauss_nodes)

    def with_nodes(self, nodes: int) -> Contour:
        return replace(self, nodes=nodes)

    # -- quadrature -------------------------------------------------------

    def quadrature(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``zeta`` and complex weights ``w`` with ``int g dzeta ~ sum g(zeta) w``."""
        zs, ws = [], []
        for piece in self.pieces:
            if piece.periodic:
                t = np.arange(self.nodes) / self.nodes
                dt = np.full(self.nodes, 1.0 / self.nodes)
            else:
                x, w = np.polynomial.legendre.leggauss(self.gauss_nodes)
                t = 0.5 * (x + 1.0)
                dt = 0.5 * w
            zs.append(piece.alpha(t))
            ws.append(piece.dalpha(t) * dt)
        return np.concatenate(zs), np.concatenate(ws)

    @property
    def node_count(self) -> int:
        return sum(self.nodes if p.periodic else self.gauss_nodes for p in self.pieces)

    def winding_number(self, w: complex) -> int:
        """Winding number about ``w``; exact for circles and polygons."""
        w = complex(w)
        total = 0.0
        for piece in self.pieces:
            d = piece.descriptor
            if d.get("type") == "circle":
                c = complex(*d["center"])
                if abs(w - c) == d["radius"]:
                    raise GeometryError(f"point {w} lies on the contour")
                if abs(w - c) < d["radius"]:
                    total += -1.0 if d["orientation"] == "cw" else 1.0
                continue
            t = np.linspace(0.0, 1.0, 4097 if piece.periodic else 2)
            pts = piece.alpha(t) - w
            if np.any(np.abs(pts) == 0):
                raise GeometryError(f"point {w} lies on the contour")
            total += float(np.sum(np.angle(pts[1:] / pts[:-1]))) / (2 * np.pi)
        return int(round(total))

    def min_distance(self, w: complex) -> float:
        zeta, _ = self.quadrature()
        return float(np.min(np.abs(zeta - complex(w))))

    def describe(self) -> dict:
        return {"pieces": [p.descriptor for p in self.pieces], "nodes": self.nodes,
                "gauss_nodes": self.gauss_nodes}


def _ray_disk(w: complex, u: np.ndarray, c: complex, r: float) -> np.ndarray:
    """Parameter interval ``[rho_a, rho_b]`` of ``w + rho u`` (``rho >= 0``) inside a disk."""
    d = w - c
    b = np.real(d * np.conj(u))
    disc = b * b - (abs(d) ** 2 - r * r)
    root = np.sqrt(np.maximum(disc, 0.0))
    lo = np.maximum(-b - root, 0.0)
    hi = np.maximum(-b + root, 0.0)
    empty = disc <= 0
    lo = np.where(empty, 0.0, lo)
    hi = np.where(empty, 0.0, np.maximum(hi, lo))
    return np.stack([lo, hi], axis=-1)


@dataclass(frozen=True, eq=False)
class PlanarDomain:
    """A bounded open set ``D`` in the complex plane.

    Kinds: ``disk`` (any center), ``disk_pair`` (a disk in the upper half
    plane together with its mirror image), ``annulus`` (real center) and
    ``custom`` (indicator plus boundary contour).
    """

    kind: str
    center: complex = 0j
    radius: float = 1.0
    inner_radius: float = 0.0
    indicator: Callable[[np.ndarray], np.ndarray] | None = None
    boundary_contour: Contour | None = None
    symmetric: bool | None = None

    def __post_init__(self):
        if self.kind not in ("disk", "disk_pair", "annulus", "custom"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind != "custom" and self.radius <= 0:
            raise GeometryError("radius must be positive")
        if self.kind == "annulus":
            if not 0 < self.inner_radius < self.radius:
                raise GeometryError("annulus needs 0 < inner_radius < radius")
            if complex(self.center).imag != 0:
                raise GeometryError("annulus center must be real")
        if self.kind == "disk_pair" and complex(self.center).imag <= self.radius:
            raise GeometryError("disk_pair needs disjoint mirrored disks (Im center > radius)")
        if self.kind == "custom":
            if self.indicator is None or self.boundary_contour is None:
                raise GeometryError("custom domains need an indicator and a boundary contour")
            if self.symmetric:
                rng = np.random.default_rng(0)
                z = self._box_samples(rng, 200)
                if not np.array_equal(self.indicator(z), self.indicator(np.conj(z))):
                    raise GeometryError("indicator is not invariant under conjugation")

    @classmethod
    def disk(cls, center: complex = 0j, radius: float = 1.0) -> PlanarDomain:
        return cls("disk", complex(center), float(radius))

    @classmethod
    def disk_pair(cls, center: complex, radius: float) -> PlanarDomain:
        return cls("disk_pair", complex(center), float(radius))

    @classmethod
    def annulus(cls, center: float, inner_radius: float, radius: float) -> PlanarDomain:
        return cls("annulus", complex(center), float(radius), float(inner_radius))

    @classmethod
    def custom(cls, indicator, boundary: Contour, conj_symmetric: bool) -> PlanarDomain:
        return cls("custom", indicator=indicator, boundary_contour=boundary, symmetric=conj_symmetric)

    @property
    def conj_symmetric(self) -> bool:
        if self.kind == "disk":
            return complex(self.center).imag == 0
        if self.kind in ("disk_pair", "annulus"):
            return True
        return bool(self.symmetric)

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        c = complex(self.center)
        if self.kind == "disk":
            return np.abs(z - c) < self.radius
        if self.kind == "disk_pair":
            return (np.abs(z - c) < self.radius) | (np.abs(z - np.conj(c)) < self.radius)
        if self.kind == "annulus":
            d = np.abs(z - c)
            return (d < self.radius) & (d > self.inner_radius)
        return np.asarray(self.indicator(z), dtype=bool)

    def boundary(self, nodes: int = DEFAULT_BOUNDARY_NODES) -> Contour:
        c = complex(self.center)
        if self.kind == "disk":
            return Contour.circle(c, self.radius, nodes)
        if self.kind == "disk_pair":
            return Contour.circle(c, self.radius, nodes) + Contour.circle(np.conj(c), self.radius, nodes)
        if self.kind == "annulus":
            return Contour.circle(c, self.radius, nodes) + Contour.circle(c, self.inner_radius, nodes, clockwise=True)
        return self.boundary_contour

    def bounding_box(self) -> tuple[float, float, float, float]:
        c = complex(self.center)
        if self.kind == "disk_pair":
            return (c.real - self.radius, c.real + self.radius, -c.imag - self.radius, c.imag + self.radius)
        if self.kind in ("disk", "annulus"):
            return (c.real - self.radius, c.real + self.radius, c.imag - self.radius, c.imag + self.radius)
        zeta, _ = self.boundary_contour.quadrature()
        return (zeta.real.min(), zeta.real.max(), zeta.imag.min(), zeta.imag.max())

    def _box_samples(self, rng, count):
        x0, x1, y0, y1 = self.bounding_box()
        return rng.uniform(x0, x1, count) + 1j * rng.uniform(y0, y1, count)

    def sample(self, rng: np.random.Generator, count: int, shrink: float = 1.0) -> np.ndarray:
        """Uniform points of ``D`` (rejection from the bounding box).

        ``shrink < 1`` keeps disks and annuli away from their outer rim by
        sampling the concentric disk of radius ``shrink * radius``.
        """
        out = []
        while sum(len(a) for a in out) < count:
            z = self._box_samples(rng, 4 * count)
            keep = self.contains(z)
            if shrink < 1.0 and self.kind != "custom":
                c = complex(self.center)
                near = np.abs(z - c) < shrink * self.radius
                if self.kind == "disk_pair":
                    near |= np.abs(z - np.conj(c)) < shrink * self.radius
                keep &= near
            out.append(z[keep])
        return np.concatenate(out)[:count]

    def ray_segments(self, w: complex, theta: np.ndarray) -> np.ndarray:
        """Intervals ``[rho_a, rho_b]`` of ``w + rho e^{i theta}`` inside ``D``.

        Returns an array of shape ``(len(theta), 2, 2)``: up to two intervals
        per ray, empty ones have zero length.
        """
        u = np.exp(1j * np.asarray(theta, dtype=float))
        c = complex(self.center)
        out = np.zeros(u.shape + (2, 2))
        if self.kind == "disk":
            out[:, 0] = _ray_disk(w, u, c, self.radius)
        elif self.kind == "disk_pair":
            out[:, 0] = _ray_disk(w, u, c, self.radius)
            out[:, 1] = _ray_disk(w, u, np.conj(c), self.radius)
        elif self.kind == "annulus":
            outer = _ray_disk(w, u, c, self.radius)
            inner = _ray_disk(w, u, c, self.inner_radius)
            has_hole = inner[:, 1] > inner[:, 0]
            out[:, 0, 0] = outer[:, 0]
            out[:, 0, 1] = np.where(has_hole, np.clip(inner[:, 0], outer[:, 0], outer[:, 1]), outer[:, 1])
            out[:, 1, 0] = np.where(has_hole, np.clip(inner[:, 1], outer[:, 0], outer[:, 1]), 0.0)
            out[:, 1, 1] = np.where(has_hole, outer[:, 1], 0.0)
        else:
            raise CapabilityError("custom domains have no analytic radial extent; use the cartesian area scheme")
        return out

    def describe(self) -> dict:
        c = complex(self.center)
        d = {"kind": self.kind, "center": [c.real, c.imag], "radius": self.radius}
        if self.kind == "annulus":
            d["inner_radius"] = self.inner_radius
        return d
