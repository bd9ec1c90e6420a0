"""Rectangles, uniform sampling and pair-distance statistics.

The scene is a large rectangle (the plane that contains everything) with a
smaller "community" rectangle inside it, both centered on the origin.  The
quantities of interest are the mean Euclidean distances between independent
uniform points drawn inside / outside the community, which feed the analytic
mobility formulas and the coverage estimators.
"""

import heapq
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConvergenceError


class RegionTag(Enum):
    INSIDE = "in"
    OUTSIDE = "out"


class RegionPair(Enum):
    IN_IN = "ii"
    OUT_IN = "oi"
    OUT_OUT = "oo"


@dataclass(frozen=True)
class Rect:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("degenerate rectangle: need x_min < x_max and y_min < y_max")

    @property
    def width(self):
        return self.x_max - self.x_min

    @property
    def height(self):
        return self.y_max - self.y_min

    def area(self):
        return self.width * self.height

    @property
    def diagonal(self):
        return math.hypot(self.width, self.height)

    def contains(self, x, y):
        """Closed-rectangle membership (boundary counts as inside)."""
        return (self.x_min <= x <= self.x_max) and (self.y_min <= y <= self.y_max)

    def contains_mask(self, pts):
        pts = np.asarray(pts, dtype=float)
        return (
            (pts[..., 0] >= self.x_min)
            & (pts[..., 0] <= self.x_max)
            & (pts[..., 1] >= self.y_min)
            & (pts[..., 1] <= self.y_max)
        )

    def sample(self, rng, size):
        pts = rng.random((size, 2))
        pts[:, 0] = self.x_min + pts[:, 0] * self.width
        pts[:, 1] = self.y_min + pts[:, 1] * self.height
        return pts

    def shifted(self, dx, dy):
        return Rect(self.x_min + dx, self.x_max + dx, self.y_min + dy, self.y_max + dy)

    def scaled(self, c):
        return Rect(self.x_min * c, self.x_max * c, self.y_min * c, self.y_max * c)


def _centered_rect(area, aspect):
    # aspect = width / height
    h = math.sqrt(area / aspect)
    w = aspect * h
    return Rect(-w / 2, w / 2, -h / 2, h / 2)


@dataclass(frozen=True)
class Layout:
    """Community rectangle strictly inside the total rectangle, both centered at the origin."""

    total: Rect
    community: Rect

    def __post_init__(self):
        t, c = self.total, self.community
        for r in (t, c):
            if abs(r.x_min + r.x_max) > 1e-9 * r.width or abs(r.y_min + r.y_max) > 1e-9 * r.height:
                raise ValueError("layout rectangles must be centered at the origin")
        strictly_inside = (
            t.x_min < c.x_min and c.x_max < t.x_max and t.y_min < c.y_min and c.y_max < t.y_max
        )
        if not strictly_inside:
            raise ValueError("community must lie strictly inside the total rectangle")

    @classmethod
    def from_areas(cls, s_total, s_community, aspect_total=1.0, aspect_community=1.0):
        if not (0 < s_community < s_total):
            raise ValueError("need 0 < community area < total area")
        return cls(
            total=_centered_rect(s_total, aspect_total),
            community=_centered_rect(s_community, aspect_community),
        )

    @property
    def s_total(self):
        return self.total.area()

    @property
    def s_community(self):
        return self.community.area()

    @property
    def s_outside(self):
        return self.s_total - self.s_community

    @property
    def area_ratio(self):
        return self.s_community / self.s_total

    def outside_bands(self):
        """Partition of the outside region into 4 axis-aligned rectangles.

        Top and bottom bands span the full width; left and right bands fill the
        remaining middle strip.  The pieces are disjoint and cover the frame.
        """
        t, c = self.total, self.community
        return [
            Rect(t.x_min, t.x_max, c.y_max, t.y_max),
            Rect(t.x_min, t.x_max, t.y_min, c.y_min),
            Rect(t.x_min, c.x_min, c.y_min, c.y_max),
            Rect(c.x_max, t.x_max, c.y_min, c.y_max),
        ]


def point_in_region(point, layout):
    """Tag a point as INSIDE/OUTSIDE the community (closed community boundary).

    Raises ValueError if the point lies outside the total rectangle.
    """
    x, y = float(point[0]), float(point[1])
    if not layout.total.contains(x, y):
        raise ValueError(f"point {(x, y)} lies outside the total rectangle")
    return RegionTag.INSIDE if layout.community.contains(x, y) else RegionTag.OUTSIDE


def sample_point_total(layout, rng, size=None):
    """Uniform point(s) on the full total rectangle."""
    pts = layout.total.sample(rng, size if size is not None else 1)
    return pts if size is not None else pts[0]


def sample_uniform(region, layout, rng, size=None):
    """Uniform point(s) on the chosen region.

    OUTSIDE uses rejection from the total rectangle (acceptance probability
    s_outside / s_total), so draws stay exactly uniform on the frame.
    """
    n = size if size is not None else 1
    if region is RegionTag.INSIDE:
        pts = layout.community.sample(rng, n)
    else:
        out = np.empty((n, 2))
        got = 0
        accept = max(layout.s_outside / layout.s_total, 1e-12)
        while got < n:
            need = n - got
            cand = layout.total.sample(rng, int(need / accept) + 8)
            keep = cand[~layout.community.contains_mask(cand)][:need]
            out[got : got + keep.shape[0]] = keep
            got += keep.shape[0]
        pts = out
    return pts if size is not None else pts[0]


def sample_pair_distance(pair, layout, rng, size=None):
    """Draw |u - v| with u, v independent uniform on the pair's regions."""
    n = size if size is not None else 1
    if pair is RegionPair.IN_IN:
        u = sample_uniform(RegionTag.INSIDE, layout, rng, n)
        v = sample_uniform(RegionTag.INSIDE, layout, rng, n)
    elif pair is RegionPair.OUT_IN:
        u = sample_uniform(RegionTag.OUTSIDE, layout, rng, n)
        v = sample_uniform(RegionTag.INSIDE, layout, rng, n)
    else:
        u = sample_uniform(RegionTag.OUTSIDE, layout, rng, n)
        v = sample_uniform(RegionTag.OUTSIDE, layout, rng, n)
    d = np.sqrt(((u - v) ** 2).sum(axis=1))
    return d if size is not None else float(d[0])


# ---------------------------------------------------------------------------
# Deterministic mean pair distance: adaptive tensor-product Gauss quadrature
# over 4-D boxes (x_u, y_u, x_v, y_v), refining wherever |u - v| is least
# smooth (the touching or overlapping parts of the two rectangles).
# ---------------------------------------------------------------------------

_G_LO = leggauss(4)
_G_HI = leggauss(8)


@dataclass(frozen=True)
class QuadratureSpec:
    """Absolute tolerance (meters) and refinement budget for mean distances.

    tol=None resolves to 1e-3 times the layout diagonal at call time.
    """

    tol: float | None = None
    max_cells: int = 60000


def _cell_mean(cu, cv, nodes, weights, inv_measure):
    # Mean of |u - v| over the 4-D cell, weighted by the *full* pair measure,
    # so cell contributions sum to the overall mean.
    def mapped(lo, hi):
        half = 0.5 * (hi - lo)
        return half * nodes + 0.5 * (hi + lo), half * weights

    xu, wxu = mapped(cu[0], cu[1])
    yu, wyu = mapped(cu[2], cu[3])
    xv, wxv = mapped(cv[0], cv[1])
    yv, wyv = mapped(cv[2], cv[3])
    dx2 = (xu[:, None] - xv[None, :]) ** 2
    dy2 = (yu[:, None] - yv[None, :]) ** 2
    wx = wxu[:, None] * wxv[None, :]
    wy = wyu[:, None] * wyv[None, :]
    d = np.sqrt(dx2[:, :, None, None] + dy2[None, None, :, :])
    return inv_measure * np.einsum("ij,kl,ijkl->", wx, wy, d)


def _mean_rect_pair(rect_a, rect_b, tol, max_cells):
    """E|u - v| for u uniform on rect_a, v uniform on rect_b."""
    inv_measure = 1.0 / (rect_a.area() * rect_b.area())
    cell_a = (rect_a.x_min, rect_a.x_max, rect_a.y_min, rect_a.y_max)
    cell_b = (rect_b.x_min, rect_b.x_max, rect_b.y_min, rect_b.y_max)

    def estimate(cu, cv):
        hi = _cell_mean(cu, cv, _G_HI[0], _G_HI[1], inv_measure)
        lo = _cell_mean(cu, cv, _G_LO[0], _G_LO[1], inv_measure)
        return hi, abs(hi - lo)

    value, err = estimate(cell_a, cell_b)
    heap = [(-err, 0, cell_a, cell_b, value)]
    total_v, total_e = value, err
    n_cells, uid = 1, 1
    while total_e > tol and n_cells < max_cells:
        neg_e, _, cu, cv, v = heapq.heappop(heap)
        total_v -= v
        total_e -= -neg_e
        extents = (cu[1] - cu[0], cu[3] - cu[2], cv[1] - cv[0], cv[3] - cv[2])
        k = int(np.argmax(extents))
        box, off = (cu, 0) if k < 2 else (cv, 2)
        lo_i, hi_i = (0, 1) if (k - off) == 0 else (2, 3)
        mid = 0.5 * (box[lo_i] + box[hi_i])
        for piece in ((box[lo_i], mid), (mid, box[hi_i])):
            child = list(box)
            child[lo_i], child[hi_i] = piece
            child = tuple(child)
            pair = (child, cv) if k < 2 else (cu, child)
            v_c, e_c = estimate(*pair)
            heapq.heappush(heap, (-e_c, uid, pair[0], pair[1], v_c))
            uid += 1
            total_v += v_c
            total_e += e_c
        n_cells += 1
    if total_e > tol:
        raise ConvergenceError(
            f"pair-distance quadrature stalled at {n_cells} cells "
            f"(error bound {total_e:.3e} > tol {tol:.3e})",
            estimate=total_v,
            error_bound=total_e,
        )
    return total_v, total_e


def mean_pair_distance(pair, layout, quad=None):
    """Deterministic E[d] for the selected region pair, by adaptive quadrature.

    The outside region is decomposed into four bands; OUT_IN and OUT_OUT means
    are exact area-weighted sums of per-band rectangle-pair integrals.
    """
    quad = quad or QuadratureSpec()
    tol = quad.tol if quad.tol is not None else 1e-3 * layout.total.diagonal
    if pair is RegionPair.IN_IN:
        value, _ = _mean_rect_pair(layout.community, layout.community, tol, quad.max_cells)
        return value
    bands = layout.outside_bands()
    weights = [b.area() / layout.s_outside for b in bands]
    if pair is RegionPair.OUT_IN:
        total = 0.0
        for band, w in zip(bands, weights):
            v, _ = _mean_rect_pair(band, layout.community, tol, quad.max_cells)
            total += w * v
        return total
    total = 0.0
    for i, (bi, wi) in enumerate(zip(bands, weights)):
        for j, (bj, wj) in enumerate(zip(bands, weights)):
            if j < i:
                continue
            v, _ = _mean_rect_pair(bi, bj, tol, quad.max_cells)
            total += (wi * wj) * v * (1 if i == j else 2)
    return total
