"""Polygons on a euclidean cone with prescribed side directions.

The cone is glued from wedges A_1..A_n. Nothing is stored in a global chart:
every vertex and every length is computed in the development of one pair of
adjacent wedges A_i and A_{i+1}, where the ray R_i points along +x, R_{i-1}
sits at angle -alpha_i and R_{i+1} at angle +alpha_{i+1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angles import CLOSED, AngleVector
from .circle import build_closed, find_violation
from .errors import DomainError, InputError

__all__ = [
    "ConePolygon",
    "ConeWedges",
    "build_polygon",
    "edge_lengths",
    "improve_polygon",
    "isoperimetric_deficit",
    "polygon_to_json",
]

# accept a step in improve_polygon once every side is at least this fraction of the longest side of 1
CONVEXITY_MARGIN = 1e-8


@dataclass(frozen=True)
class ConeWedges:
    angles: AngleVector
    cumulative: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.angles.mode != CLOSED:
            raise InputError("cone wedges need a closed-mode angle vector")
        object.__setattr__(self, "cumulative", self.angles.cumulative())

    @classmethod
    def from_angles(cls, angles) -> "ConeWedges":
        if isinstance(angles, AngleVector):
            return cls(angles)
        return cls(AngleVector(tuple(angles)))

    @property
    def n(self) -> int:
        return len(self.angles)

    @property
    def omega(self) -> float:
        return self.angles.total()

    def chart_normals(self, i: int) -> np.ndarray:
        """Unit vectors nu_{i-1}, nu_i, nu_{i+1} in the development of A_i and A_{i+1}."""
        a = self.angles.angles
        n = self.n
        before, after = a[i], a[(i + 1) % n]
        return np.array([
            [math.cos(before), -math.sin(before)],
            [1.0, 0.0],
            [math.cos(after), math.sin(after)],
        ])


@dataclass(frozen=True)
class ConePolygon:
    """Polygon with support numbers ``support``.

    ``vertices[i]`` holds (p_i, p_{i+1}), the two ends of side i in chart i.
    ``perimeter`` and ``area`` are the sums over ``edge_lengths``; the
    ``geometric_*`` fields are measured from the developed vertices.
    """

    support: np.ndarray
    edge_lengths: np.ndarray
    vertices: np.ndarray
    perimeter: float
    area: float
    geometric_perimeter: float
    geometric_area: float
    convex: bool


def _check_support(wedges: ConeWedges, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (wedges.n,):
        raise InputError(f"support vector must have length {wedges.n}")
    if not np.all(np.isfinite(x)):
        raise InputError("support vector must be finite")
    return x


def edge_lengths(wedges: ConeWedges, x) -> np.ndarray:
    """Signed side lengths l_i(x) from neighbouring support numbers."""
    x = _check_support(wedges, x)
    a = wedges.angles.array
    nxt = np.roll(a, -1)
    if np.min(np.abs(np.sin(a))) < 1e-12:
        raise InputError("degenerate wedge angle")
    prev_x, next_x = np.roll(x, 1), np.roll(x, -1)
    return (prev_x - x * np.cos(a)) / np.sin(a) + (next_x - x * np.cos(nxt)) / np.sin(nxt)


def _intersect(nu1, c1, nu2, c2) -> np.ndarray:
    return np.linalg.solve(np.array([nu1, nu2]), np.array([c1, c2]))


def build_polygon(wedges: ConeWedges, h) -> ConePolygon:
    h = _check_support(wedges, h)
    n = wedges.n
    ell = edge_lengths(wedges, h)
    verts = np.empty((n, 2, 2))
    g_len = np.empty(n)
    g_area = np.empty(n)
    tangent = np.array([0.0, 1.0])  # side i runs from A_i into A_{i+1}
    for i in range(n):
        nu = wedges.chart_normals(i)
        if abs(math.sin(wedges.angles.angles[i])) < 1e-12:
            raise DomainError("degenerate wedge angle")
        hp, hc, hn = h[(i - 1) % n], h[i], h[(i + 1) % n]
        p_start = _intersect(nu[0], hp, nu[1], hc)
        p_end = _intersect(nu[1], hc, nu[2], hn)
        verts[i, 0], verts[i, 1] = p_start, p_end
        g_len[i] = float(np.dot(p_end - p_start, tangent))
        g_area[i] = 0.5 * (p_start[0] * p_end[1] - p_start[1] * p_end[0])
    return ConePolygon(
        support=h,
        edge_lengths=ell,
        vertices=verts,
        perimeter=math.fsum(ell),
        area=0.5 * math.fsum(h * ell),
        geometric_perimeter=math.fsum(g_len),
        geometric_area=math.fsum(g_area),
        convex=bool(np.all(ell > 0)),
    )


def perimeter(wedges: ConeWedges, h) -> float:
    """L(h) = <M h, 1>."""
    m = build_closed(wedges.angles).matrix
    return float(np.sum(m @ _check_support(wedges, h)))


def area(wedges: ConeWedges, h) -> float:
    """A(h) = 1/2 <M h, h>."""
    h = _check_support(wedges, h)
    m = build_closed(wedges.angles).matrix
    return 0.5 * float(h @ (m @ h))


def isoperimetric_deficit(wedges: ConeWedges, h) -> float:
    """A(h*) - A(h), with h* the circumscribed polygon of the same perimeter."""
    h = _check_support(wedges, h)
    m = build_closed(wedges.angles).matrix
    one = np.ones(wedges.n)
    scale = float(np.sum(m @ h)) / float(np.sum(m @ one))
    h_star = scale * one
    return 0.5 * float(h_star @ m @ h_star) - 0.5 * float(h @ m @ h)


def improve_polygon(wedges: ConeWedges) -> np.ndarray | None:
    """Support numbers beating the circumscribed polygon at equal perimeter.

    Only exists for omega > 2 pi. Moves from 1 along a violating direction v
    (so the perimeter is unchanged) by the largest halving of
    ``t0 = min(w) / (2 ||M v||_inf)`` that keeps every side clearly positive
    and every support number positive.
    """
    v = find_violation(wedges.angles)
    if v is None:
        return None
    wm = build_closed(wedges.angles)
    mv = wm.matrix @ v
    ell_one = wm.weights  # l(1) = M 1 = w
    floor = CONVEXITY_MARGIN * float(ell_one.max())
    t = float(ell_one.min()) / (2.0 * float(np.abs(mv).max()))
    for _ in range(200):
        h = 1.0 + t * v
        if np.min(h) > 0 and np.min(edge_lengths(wedges, h)) >= floor:
            return h
        t *= 0.5
    raise DomainError("could not find a convex improving polygon")


def polygon_to_json(wedges: ConeWedges, poly: ConePolygon) -> dict:
    return {
        "angles": wedges.angles.to_json(),
        "support": poly.support.tolist(),
        "edge_lengths": poly.edge_lengths.tolist(),
        "perimeter": poly.perimeter,
        "area": poly.area,
        "geometric_perimeter": poly.geometric_perimeter,
        "geometric_area": poly.geometric_area,
        "convex": poly.convex,
        "vertices": [
            {"wedge_pair": [i + 1, (i + 1) % wedges.n + 1],
             "start": poly.vertices[i, 0].tolist(),
             "end": poly.vertices[i, 1].tolist()}
            for i in range(wedges.n)
        ],
    }
