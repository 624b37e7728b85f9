"""Finite metric spaces: validated construction, canonical sample generators,
covering numbers and approximate midpoints.

A space is a symmetric matrix of pairwise distances with opaque labels.  All
other modules treat it as an immutable value; every operation here is a pure
function of its inputs.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    AsymmetricMatrix,
    BadDimensions,
    DisconnectedGraph,
    DuplicatePoint,
    ExactSearchTooLarge,
    NegativeEntry,
    NoMidpointWithinTolerance,
    NonpositiveWeight,
    TooFewPoints,
    TriangleViolation,
)

TRIANGLE_TOL = 1e-9
EXACT_COVER_THRESHOLD = 64


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite metric space given by its full distance matrix.

    Invariants (enforced by :func:`from_distance_matrix`): zero diagonal,
    symmetry, strictly positive off-diagonal entries, triangle inequality
    within an additive 1e-9.
    """

    dist: np.ndarray
    labels: tuple[str, ...]
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def d(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    def diameter(self) -> float:
        return float(self.dist.max())

    def resolution(self) -> float:
        """Max nearest-neighbor gap h; the unit for all reported tolerances."""
        if self.n <= 1:
            return 0.0
        d = self.dist + np.diag([np.inf] * self.n)
        return float(d.min(axis=1).max())

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n}, diameter={self.diameter():g})"


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in range(n))


def from_distance_matrix(matrix, labels=None, meta=None) -> FiniteMetricSpace:
    """Validate a square matrix as a metric and wrap it.

    Raises AsymmetricMatrix, NegativeEntry, DuplicatePoint or
    TriangleViolation(i, j, k, amount) on the first failing check.
    """
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise BadDimensions(f"matrix shape {d.shape} is not square")
    if not np.all(np.isfinite(d)):
        raise BadDimensions("matrix has non-finite entries")
    n = d.shape[0]

    asym = np.abs(d - d.T)
    if asym.max(initial=0.0) > TRIANGLE_TOL:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise AsymmetricMatrix(int(i), int(j), float(d[i, j]), float(d[j, i]))
    d = (d + d.T) / 2.0

    if np.abs(np.diag(d)).max(initial=0.0) > TRIANGLE_TOL:
        i = int(np.argmax(np.abs(np.diag(d))))
        raise BadDimensions(f"dist[{i}][{i}] = {d[i, i]!r} is not 0")
    np.fill_diagonal(d, 0.0)

    neg = d < 0
    if neg.any():
        i, j = np.argwhere(neg)[0]
        raise NegativeEntry(int(i), int(j), float(d[i, j]))

    off = d + np.diag([np.inf] * n)
    dup = off <= 0
    if dup.any():
        i, j = np.argwhere(dup)[0]
        raise DuplicatePoint(int(i), int(j))

    # d[i,k] <= d[i,j] + d[j,k] + tol, checked one intermediate j at a time.
    for j in range(n):
        slack = d - (d[:, j][:, None] + d[j][None, :])
        if slack.max() > TRIANGLE_TOL:
            i, k = np.unravel_index(np.argmax(slack), slack.shape)
            raise TriangleViolation(int(i), int(j), int(k), float(slack[i, k]))

    if labels is None:
        labels = _default_labels(n)
    elif len(labels) != n:
        raise BadDimensions(f"{len(labels)} labels for {n} points")
    if meta is None:
        digest = hashlib.sha256(np.ascontiguousarray(d).tobytes()).hexdigest()[:16]
        meta = {"generator": "matrix", "digest": digest}
    d.setflags(write=False)
    return FiniteMetricSpace(dist=d, labels=tuple(labels), meta=dict(meta))


def sample_circle(circumference: float, n: int) -> FiniteMetricSpace:
    """n equally spaced points on a geodesic circle, arc-length metric."""
    if n < 3:
        raise TooFewPoints(f"need n >= 3, got {n}")
    if circumference <= 0:
        raise BadDimensions("circumference must be positive")
    idx = np.arange(n)
    steps = np.abs(idx[:, None] - idx[None, :])
    steps = np.minimum(steps, n - steps)
    d = steps * (circumference / n)
    return from_distance_matrix(
        d,
        labels=[f"c{i}" for i in range(n)],
        meta={"generator": "circle", "circumference": circumference, "n": n},
    )


def sample_flat_torus(a: float, b: float, nx: int, ny: int) -> FiniteMetricSpace:
    """Grid sample of the flat torus with side lengths 3a x 3b.

    Distances use wrapped coordinates: sqrt(dx^2 + dy^2) with dx, dy reduced
    to the shorter way around each period.
    """
    if not (0 < 3 * a <= 3 * b):
        raise BadDimensions(f"need 0 < 3a <= 3b, got a={a}, b={b}")
    if nx < 2 or ny < 2:
        raise BadDimensions(f"need nx, ny >= 2, got {nx}x{ny}")
    wx, wy = 3.0 * a, 3.0 * b
    xs = np.arange(nx) * (wx / nx)
    ys = np.arange(ny) * (wy / ny)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    px, py = gx.ravel(), gy.ravel()
    dx = np.abs(px[:, None] - px[None, :])
    dx = np.minimum(dx, wx - dx)
    dy = np.abs(py[:, None] - py[None, :])
    dy = np.minimum(dy, wy - dy)
    d = np.hypot(dx, dy)
    labels = [f"t{i}_{j}" for i in range(nx) for j in range(ny)]
    return from_distance_matrix(
        d, labels=labels,
        meta={"generator": "torus", "a": a, "b": b, "nx": nx, "ny": ny},
    )


def from_weighted_graph(n_vertices: int, edges, subdivision_spacing: float,
                        labels=None) -> FiniteMetricSpace:
    """Realize a weighted graph as a finite sample of its geodesic metric.

    Each edge (i, j, w) is cut into ceil(w / spacing) equal segments with new
    interior points; the metric is all-pairs shortest path on the subdivided
    graph.  Parallel edges are allowed and keep their own interior points.
    """
    if subdivision_spacing <= 0:
        raise BadDimensions("subdivision_spacing must be positive")
    edges = list(edges)
    for e in edges:
        if len(e) != 3:
            raise BadDimensions(f"edge {e!r} is not (i, j, weight)")
        if e[2] <= 0:
            raise NonpositiveWeight(e)
        if not (0 <= e[0] < n_vertices and 0 <= e[1] < n_vertices):
            raise BadDimensions(f"edge {e!r} references unknown vertex")

    if labels is None:
        labels = [f"v{i}" for i in range(n_vertices)]
    names = list(labels)
    rows, cols, vals = [], [], []

    def link(u, v, w):
        rows.append(u)
        cols.append(v)
        vals.append(w)
        rows.append(v)
        cols.append(u)
        vals.append(w)

    for e_id, (i, j, w) in enumerate(edges):
        k = max(1, math.ceil(w / subdivision_spacing - 1e-12))
        seg = w / k
        prev = i
        for m in range(1, k):
            names.append(f"e{e_id}({i}-{j})/{m}")
            node = len(names) - 1
            link(prev, node, seg)
            prev = node
        link(prev, j, seg)

    n = len(names)
    graph = csr_matrix((vals, (rows, cols)), shape=(n, n))
    ncomp, _ = connected_components(graph, directed=False)
    if ncomp != 1:
        raise DisconnectedGraph(f"graph has {ncomp} components")
    d = shortest_path(graph, method="D", directed=False)
    return from_distance_matrix(
        d, labels=names,
        meta={"generator": "graph", "n_vertices": n_vertices,
              "edges": [list(map(float, (i, j, w))) for i, j, w in edges],
              "spacing": subdivision_spacing},
    )


def multiedge_graph(num_edges: int, length: float,
                    spacing: float) -> FiniteMetricSpace:
    """Two points joined by num_edges equal arcs, subdivided at spacing."""
    if num_edges < 1:
        raise BadDimensions("need at least one edge")
    return from_weighted_graph(2, [(0, 1, length)] * num_edges, spacing)


def simplex_skeleton(n_vertices: int, edge_length: float,
                     spacing: float) -> FiniteMetricSpace:
    """Geodesic 1-skeleton of a regular simplex: complete graph, equal edges."""
    if n_vertices < 2:
        raise BadDimensions("need at least two vertices")
    edges = [(i, j, edge_length)
             for i in range(n_vertices) for j in range(i + 1, n_vertices)]
    return from_weighted_graph(n_vertices, edges, spacing)


@dataclass(frozen=True)
class CoveringNumberResult:
    s: float
    count: int
    centers: tuple[int, ...]
    exact: bool


def _ball_masks(space, s, targets=None):
    """Open s-ball membership as bitmasks over the target set."""
    n = space.n
    if targets is None:
        targets = range(n)
    targets = list(targets)
    pos = {p: k for k, p in enumerate(targets)}
    masks = []
    for c in range(n):
        m = 0
        for p in targets:
            if space.dist[c, p] < s:
                m |= 1 << pos[p]
        masks.append(m)
    full = (1 << len(targets)) - 1
    return masks, full, targets


def _greedy_cover(masks, full):
    covered = 0
    centers = []
    while covered != full:
        best, best_gain = -1, -1
        for c, m in enumerate(masks):
            gain = bin(m & ~covered).count("1")
            if gain > best_gain:
                best, best_gain = c, gain
        if best_gain <= 0:
            raise DisconnectedGraph("some point lies in no ball")
        centers.append(best)
        covered |= masks[best]
    return centers


def _exact_cover(masks, full, upper):
    """Branch and bound for minimum set cover; `upper` from greedy."""
    best = upper[:]

    order = sorted(range(len(masks)), key=lambda c: -bin(masks[c]).count("1"))

    def recurse(covered, chosen):
        nonlocal best
        if covered == full:
            if len(chosen) < len(best):
                best = chosen[:]
            return
        if len(chosen) + 1 >= len(best):
            # any completion needs at least one more ball
            return
        # branch on the lowest uncovered point
        missing = full & ~covered
        pt = (missing & -missing).bit_length() - 1
        for c in order:
            if masks[c] >> pt & 1:
                recurse(covered | masks[c], chosen + [c])

    recurse(0, [])
    return best


def covering_number(space, s: float, mode: str = "greedy",
                    exact_threshold: int = EXACT_COVER_THRESHOLD,
                    targets=None) -> CoveringNumberResult:
    """Number of open s-balls (centered at sample points) covering the space.

    `targets` restricts the set that must be covered (used for the
    ball-restricted variant); centers always range over all points.
    """
    if s <= 0:
        raise BadDimensions("radius must be positive")
    masks, full, _ = _ball_masks(space, s, targets)
    greedy = _greedy_cover(masks, full)
    if mode == "greedy":
        return CoveringNumberResult(s, len(greedy), tuple(sorted(greedy)), False)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if space.n > exact_threshold:
        raise ExactSearchTooLarge(space.n, exact_threshold)
    centers = _exact_cover(masks, full, greedy)
    return CoveringNumberResult(s, len(centers), tuple(sorted(centers)), True)


def covering_number_in_ball(space, basepoint: int, r: float, s: float,
                            mode: str = "greedy",
                            exact_threshold: int = EXACT_COVER_THRESHOLD
                            ) -> CoveringNumberResult:
    """Covering number of the closed r-ball around a basepoint by open s-balls."""
    targets = [p for p in range(space.n)
               if space.dist[basepoint, p] <= r + TRIANGLE_TOL]
    return covering_number(space, s, mode=mode, exact_threshold=exact_threshold,
                           targets=targets)


def approx_midpoint(space, i: int, j: int, tol: float) -> tuple[int, float]:
    """Best available midpoint between points i and j.

    Returns (index, deviation) where deviation = max(d(i,m), d(m,j)) - d(i,j)/2.
    Succeeds iff the deviation is within tol; ties break to the smallest index.
    """
    if tol < 0:
        raise BadDimensions("tol must be non-negative")
    if i == j:
        return i, 0.0
    half = space.dist[i, j] / 2.0
    worst = np.maximum(space.dist[i], space.dist[j])
    m = int(np.argmin(worst))
    deviation = float(worst[m] - half)
    if deviation > tol + 1e-12:
        raise NoMidpointWithinTolerance(deviation)
    return m, max(deviation, 0.0)
