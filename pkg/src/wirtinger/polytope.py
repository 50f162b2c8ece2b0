"""Surface area of 3D polytopes with fixed facet normals as a quadratic form.

For unit normals nu_1..nu_n in general position, P(h) = {x : <x, nu_i> <= h_i}
keeps its combinatorics for h near 1, and W_1(P(h)) = area(P(h)) / 3 is an
exact quadratic form <M h, h> there. Vertices of P(1) are dual to the
triangles of conv(nu_1..nu_n), which is how the combinatorics are found.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import spectral
from .errors import DomainError, InputError
from .spectral import Signature

__all__ = [
    "NormalFan3",
    "QuermassForm",
    "HyperplaneFormReport",
    "build_fan",
    "combinatorics_ok",
    "cube_normals",
    "estimate_valid_radius",
    "quermass_matrix",
    "random_fan",
    "support_polytope",
    "surface_area",
    "tetrahedron_normals",
    "translation_vectors",
    "verify_hyperplane_form",
]

UNIT_TOL = 1e-12
COPLANAR_TOL = 1e-9
# strict-containment margin for vertices w.r.t. non-incident facet planes
VERTEX_MARGIN = 1e-10


@dataclass(frozen=True)
class NormalFan3:
    """Facet normals plus the combinatorics of P(1).

    ``vertex_triples[v]`` are the facets meeting at vertex v; ``facet_cycles[i]``
    lists the vertices of facet i counterclockwise seen from outside.
    """

    normals: np.ndarray
    facet_adjacency: tuple[tuple[int, int], ...]
    vertex_triples: np.ndarray
    theta: dict
    facet_cycles: tuple[tuple[int, ...], ...]
    frames: np.ndarray

    @property
    def n(self) -> int:
        return len(self.normals)

    def counts(self) -> tuple[int, int, int]:
        """(facets, edges, vertices)."""
        return self.n, len(self.facet_adjacency), len(self.vertex_triples)


def cube_normals() -> np.ndarray:
    """+e1, -e1, +e2, -e2, +e3, -e3."""
    eye = np.eye(3)
    return np.array([s * eye[c] for c in range(3) for s in (1, -1)])


def tetrahedron_normals() -> np.ndarray:
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return -v / math.sqrt(3)


def _frame(nu: np.ndarray) -> np.ndarray:
    # orthonormal rows (e1, e2, nu), right-handed
    helper = np.eye(3)[int(np.argmin(np.abs(nu)))]
    e1 = np.cross(helper, nu)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(nu, e1)
    return np.array([e1, e2, nu])


def build_fan(normals) -> NormalFan3:
    """Validate the normals and compute the combinatorics of P(1)."""
    nrm = np.asarray(normals, dtype=float)
    if nrm.ndim != 2 or nrm.shape[1] != 3:
        raise InputError("normals must be an array of 3-vectors")
    n = len(nrm)
    if n < 4:
        raise InputError(f"need at least 4 normals, got {n}")
    if not np.all(np.isfinite(nrm)):
        raise InputError("normals must be finite")
    bad = np.flatnonzero(np.abs(np.linalg.norm(nrm, axis=1) - 1) > UNIT_TOL)
    if bad.size:
        raise InputError("normals not of unit length: " + ", ".join(map(str, bad)))
    for i, j in itertools.combinations(range(n), 2):
        if np.linalg.norm(nrm[i] - nrm[j]) < COPLANAR_TOL:
            raise InputError(f"repeated normals: {i}, {j}")
    try:
        hull = ConvexHull(nrm)
    except QhullError as exc:
        raise InputError(f"normals do not span R^3: {exc}".splitlines()[0]) from None
    missing = sorted(set(range(n)) - set(int(v) for v in hull.vertices))
    if missing:
        raise InputError("normals not on the hull: " + ", ".join(map(str, missing)))
    offsets = hull.equations[:, 3]
    if np.max(offsets) > -COPLANAR_TOL:
        raise InputError("normals lie in a closed half-space; P(h) is unbounded")
    # each hull triangle must be a genuine facet with exactly three normals on it
    dist = np.abs(nrm @ hull.equations[:, :3].T + offsets[None, :])
    for k, simplex in enumerate(hull.simplices):
        on = np.flatnonzero(dist[:, k] <= COPLANAR_TOL)
        if len(on) > 3:
            raise InputError("degenerate position: normals "
                             + ", ".join(map(str, on)) + " are coplanar on the hull")
    triples = np.sort(hull.simplices, axis=1)
    triples = triples[np.lexsort(triples.T[::-1])]

    edges = set()
    for t in triples:
        for a, b in itertools.combinations(t, 2):
            edges.add((int(a), int(b)))
    adjacency = tuple(sorted(edges))
    theta = {e: float(np.arccos(np.clip(nrm[e[0]] @ nrm[e[1]], -1, 1))) for e in adjacency}

    fan_frames = np.array([_frame(v) for v in nrm])
    verts = _solve_vertices(nrm, triples, np.ones(n))
    cycles = []
    for i in range(n):
        vs = np.flatnonzero(np.any(triples == i, axis=1))
        if len(vs) < 3:
            raise InputError(f"normal {i} does not give a facet of P(1)")
        local = verts[vs] @ fan_frames[i][:2].T
        centre = local.mean(axis=0)
        ang = np.arctan2(local[:, 1] - centre[1], local[:, 0] - centre[0])
        cycles.append(tuple(int(v) for v in vs[np.argsort(ang)]))
    fan = NormalFan3(nrm, adjacency, triples, theta, tuple(cycles), fan_frames)
    if not combinatorics_ok(fan, np.ones(n)):
        raise InputError("degenerate position: a vertex of P(1) lies on more than 3 facets")
    return fan


def _solve_vertices(normals: np.ndarray, triples: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Vertices for one support vector (n,) or a batch (k, n)."""
    h = np.asarray(h, dtype=float)
    rhs = h[..., triples]                      # (..., V, 3)
    return np.linalg.solve(normals[triples], rhs[..., None])[..., 0]


def _cycle_edges(fan: NormalFan3) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    owner, start, end = [], [], []
    for i, cyc in enumerate(fan.facet_cycles):
        owner.extend([i] * len(cyc))
        start.extend(cyc)
        end.extend(cyc[1:] + cyc[:1])
    return np.array(owner), np.array(start), np.array(end)


def _facet_areas(fan: NormalFan3, verts: np.ndarray) -> np.ndarray:
    """Signed facet areas, shoelace in the plane of each facet seen from outside.

    ``verts`` is (V, 3) or a batch (k, V, 3).
    """
    owner, start, end = _cycle_edges(fan)
    cross = np.cross(verts[..., start, :], verts[..., end, :])
    contrib = 0.5 * np.einsum("...ec,ec->...e", cross, fan.normals[owner])
    out = np.zeros(verts.shape[:-2] + (fan.n,))
    for i in range(fan.n):
        out[..., i] = contrib[..., owner == i].sum(axis=-1)
    return out


def _combinatorics_mask(fan: NormalFan3, h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    verts = _solve_vertices(fan.normals, fan.vertex_triples, h)
    slack = verts @ fan.normals.T - h[..., None, :]
    incident = np.zeros(slack.shape[-2:], dtype=bool)
    incident[np.arange(len(fan.vertex_triples))[:, None], fan.vertex_triples] = True
    slack = np.where(incident, -np.inf, slack)
    ok = np.max(slack, axis=(-2, -1)) < -VERTEX_MARGIN
    areas = _facet_areas(fan, verts)
    ok &= np.all(areas > 0, axis=-1)
    return ok, areas


def combinatorics_ok(fan: NormalFan3, h) -> bool:
    """True when P(h) has the same combinatorics as P(1)."""
    ok, _ = _combinatorics_mask(fan, np.asarray(h, dtype=float))
    return bool(ok)


def continued_areas(fan: NormalFan3, hs) -> np.ndarray:
    """Area polynomial of the cell of h = 1, evaluated anywhere (no admissibility check).

    Inside the cell this is the true surface area; outside it is the unique
    quadratic continuation of the same formula.
    """
    hs = np.atleast_2d(np.asarray(hs, dtype=float))
    verts = _solve_vertices(fan.normals, fan.vertex_triples, hs)
    return np.array([math.fsum(row) for row in _facet_areas(fan, verts)])


def surface_areas(fan: NormalFan3, hs) -> np.ndarray:
    """Surface areas for a batch of support vectors (k, n); all must be admissible."""
    hs = np.atleast_2d(np.asarray(hs, dtype=float))
    ok, areas = _combinatorics_mask(fan, hs)
    if not np.all(ok):
        raise DomainError("combinatorics of P(h) differ from P(1); shrink the perturbation")
    return np.array([math.fsum(row) for row in areas])


@dataclass(frozen=True)
class PolytopeData:
    support: np.ndarray
    vertices: np.ndarray
    facets: tuple[tuple[int, ...], ...]
    facet_areas: np.ndarray

    @property
    def surface_area(self) -> float:
        return math.fsum(self.facet_areas)


def support_polytope(fan: NormalFan3, h) -> PolytopeData:
    h = np.asarray(h, dtype=float)
    if h.shape != (fan.n,):
        raise InputError(f"support vector must have length {fan.n}")
    if not combinatorics_ok(fan, h):
        raise DomainError("combinatorics of P(h) differ from P(1); shrink the perturbation")
    verts = _solve_vertices(fan.normals, fan.vertex_triples, h)
    return PolytopeData(h, verts, fan.facet_cycles, _facet_areas(fan, verts))


def surface_area(fan: NormalFan3, h) -> float:
    return support_polytope(fan, h).surface_area


def estimate_valid_radius(fan: NormalFan3, n_random: int = 20, seed: int = 0,
                          r_max: float = 1.0, iterations: int = 40) -> float:
    """Conservative sup-norm radius around 1 with unchanged combinatorics.

    Bisects along +-e_i and ``n_random`` random directions and keeps the minimum.
    """
    n = fan.n
    one = np.ones(n)
    rng = np.random.default_rng(seed)
    dirs = [s * e for e in np.eye(n) for s in (1.0, -1.0)]
    for _ in range(n_random):
        d = rng.uniform(-1, 1, size=n)
        dirs.append(d / np.abs(d).max())
    dirs = np.array(dirs)
    ok, _ = _combinatorics_mask(fan, one + r_max * dirs)
    if np.all(ok):
        return r_max
    lo = np.where(ok, r_max, 0.0)
    hi = np.full(len(dirs), r_max)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        good, _ = _combinatorics_mask(fan, one + mid[:, None] * dirs)
        lo = np.where(good, mid, lo)
        hi = np.where(good, hi, mid)
    best = float(lo.min())
    return best


@dataclass(frozen=True)
class QuermassForm:
    M: np.ndarray
    fan: NormalFan3
    valid_radius: float
    step: float


def quermass_matrix(fan: NormalFan3, valid_radius: float | None = None,
                    step: float = 1.0) -> QuermassForm:
    """M with <M h, h> = area(P(h)) / 3 near h = 1.

    Second differences of the cell's area polynomial at h = 1. The polynomial
    is exactly quadratic, so any step gives the same M up to rounding; a unit
    step avoids the cancellation that in-cell steps (often ~1e-4) would cause.
    """
    r = estimate_valid_radius(fan) if valid_radius is None else valid_radius
    if r <= 0:
        raise DomainError("no admissible neighbourhood of h = 1")
    d = float(step)
    n = fan.n
    eye = np.eye(n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    offsets = [np.zeros(n)]
    offsets += [d * eye[i] for i in range(n)] + [-d * eye[i] for i in range(n)]
    for i, j in pairs:
        offsets += [d * (eye[i] + eye[j]), d * (eye[i] - eye[j]),
                    d * (eye[j] - eye[i]), -d * (eye[i] + eye[j])]
    values = continued_areas(fan, 1.0 + np.array(offsets))
    base, plus, minus = values[0], values[1:n + 1], values[n + 1:2 * n + 1]
    mixed = values[2 * n + 1:].reshape(-1, 4)
    m = np.zeros((n, n))
    m[np.diag_indices(n)] = (plus - 2 * base + minus) / (d * d)
    for (i, j), (pp, pm, mp, mm) in zip(pairs, mixed):
        m[i, j] = m[j, i] = (pp - pm - mp + mm) / (4 * d * d)
    return QuermassForm(m / 6.0, fan, r, d)


def translation_vectors(fan: NormalFan3) -> np.ndarray:
    """Rows t^(c) with t^(c)_i = <e_c, nu_i>: support changes of a translation."""
    return fan.normals.T.copy()


@dataclass(frozen=True)
class HyperplaneFormReport:
    signature: Signature
    expected_signature: tuple[int, int, int]
    signature_matches: bool
    w1_of_one: float
    surface_area_of_one: float
    translation_residual: float
    restricted_eigenvalues: np.ndarray
    restricted_zero_count: int
    restricted_max: float
    kernel_basis: np.ndarray
    kernel_angle: float
    sampled_max: float
    samples: int
    adjacent_offdiag_positive: bool
    tolerance: float

    @property
    def holds(self) -> bool:
        return (self.sampled_max <= self.tolerance
                and self.restricted_max <= self.tolerance
                and self.restricted_zero_count == 3
                and self.kernel_angle <= 1e-6)


def _max_principal_angle(a: np.ndarray, b: np.ndarray) -> float:
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    if qa.shape[1] != qb.shape[1]:
        return math.pi / 2
    # sine of the largest angle, accurate for nearly equal subspaces
    residual = qa - qb @ (qb.T @ qa)
    return float(np.arcsin(min(1.0, np.linalg.norm(residual, 2))))


def verify_hyperplane_form(form: QuermassForm, samples: int = 1000, seed: int = 0,
                           tol: float | None = None) -> HyperplaneFormReport:
    """Check <Mx, x> <= 0 on {<Mx, 1> = 0} and that equality means a translation."""
    m = form.M
    fan = form.fan
    n = fan.n
    norm = spectral.spectral_norm(np.linalg.eigvalsh(m))
    if tol is None:
        tol = 1e-9 * max(1.0, norm)
    sig = spectral.signature(m, tol)
    expected = (1, 3, n - 4)
    one = np.ones(n)
    m1 = m @ one
    t = translation_vectors(fan)
    resid = float(max(np.linalg.norm(m @ tc) for tc in t))

    dec = spectral.restricted_eigh(m, m1)
    zero = np.abs(dec.eigenvalues) <= tol
    kernel = dec.eigenvectors[:, zero]
    angle = _max_principal_angle(kernel, t.T) if kernel.shape[1] else math.pi / 2

    rng = np.random.default_rng(seed)
    basis = spectral.hyperplane_basis(m1)
    ys = rng.standard_normal((samples, basis.shape[1]))
    xs = ys @ basis.T
    xs /= np.linalg.norm(xs, axis=1)[:, None]
    values = np.einsum("ij,jk,ik->i", xs, m, xs)

    adjacent_positive = all(m[i, j] > 0 for i, j in fan.facet_adjacency)
    area_one = surface_area(fan, one)
    return HyperplaneFormReport(
        signature=sig,
        expected_signature=expected,
        signature_matches=sig.as_tuple() == expected,
        w1_of_one=float(one @ m1),
        surface_area_of_one=area_one,
        translation_residual=resid,
        restricted_eigenvalues=dec.eigenvalues,
        restricted_zero_count=int(np.count_nonzero(zero)),
        restricted_max=float(dec.eigenvalues.max()),
        kernel_basis=kernel,
        kernel_angle=angle,
        sampled_max=float(values.max()),
        samples=samples,
        adjacent_offdiag_positive=adjacent_positive,
        tolerance=float(tol),
    )


def random_fan(rng: np.random.Generator, count: int, min_radius: float = 1e-6,
               max_tries: int = 1000) -> NormalFan3:
    """Uniform random normals on the sphere, rejecting degenerate configurations.

    Fans whose combinatorics break within ``min_radius`` of h = 1 are rejected
    as numerically too close to a degenerate position.
    """
    for _ in range(max_tries):
        v = rng.standard_normal((count, 3))
        v /= np.linalg.norm(v, axis=1)[:, None]
        try:
            fan = build_fan(v)
        except InputError:
            continue
        if estimate_valid_radius(fan, r_max=min_radius) >= min_radius:
            return fan
    raise ValueError(f"no general-position fan of {count} normals found")
