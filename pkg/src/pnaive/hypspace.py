"""Metric plumbing over every model: distances, geodesics, Gromov products,
four-point hyperbolicity estimates and shadows.

Tree models return exact integers (Gromov products are :class:`~fractions.Fraction`);
the half-plane model returns floats and marks results approximate.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Set, Union

import numpy as np

from .errors import DomainError, ModelMismatch, UnsupportedModel
from .models import derive_seed
from .points import Cylinder, EndPoint, Site

Dist = Union[int, Fraction, float]
INF = math.inf

__all__ = [
    "Site",
    "Dist",
    "INF",
    "distance",
    "gromov_product",
    "geodesic",
    "Geodesic",
    "delta_estimate",
    "DeltaEstimate",
    "shadow",
    "diameter",
]


def _same_model(*sites: Site):
    key = sites[0].model.key
    for s in sites[1:]:
        if s.model.key != key:
            raise ModelMismatch(f"sites from {key} and {s.model.key}")
    return sites[0].model


def distance(x: Site, y: Site) -> Dist:
    model = _same_model(x, y)
    if model.is_tree:
        return model.distance_addr(x.coords, y.coords)
    return model.distance_coords(x.coords, y.coords)


def gromov_product(x: Site, y: Site, z: Site) -> Dist:
    """``(x . y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2``."""
    model = _same_model(x, y, z)
    dxz, dyz, dxy = distance(x, z), distance(y, z), distance(x, y)
    if model.is_tree:
        return Fraction(dxz + dyz - dxy, 2)
    return 0.5 * (dxz + dyz - dxy)


class Geodesic(list):
    """A list of sites with an ``approximate`` flag (set for sampled paths)."""

    approximate = False


def geodesic(x: Site, y: Site, samples: int = 16) -> Geodesic:
    """Vertices of ``[x, y]`` in order; on the half-plane, ``samples`` points of the arc."""
    model = _same_model(x, y)
    out = Geodesic()
    if model.is_tree:
        a, b = x.coords, y.coords
        n = 0
        for u, v in zip(a, b):
            if u != v:
                break
            n += 1
        for k in range(len(a), n - 1, -1):
            out.append(Site(model, a[:k]))
        for k in range(n + 1, len(b) + 1):
            out.append(Site(model, b[:k]))
        return out
    out.approximate = True
    z1, z2 = complex(*x.coords), complex(*y.coords)
    for k in range(samples + 1):
        out.append(_plane_geodesic_point(model, z1, z2, k / samples))
    return out


def _plane_geodesic_point(model, z1: complex, z2: complex, s: float) -> Site:
    # move z1 to i and z2 onto the imaginary axis, interpolate, move back
    d = model.distance_coords((z1.real, z1.imag), (z2.real, z2.imag))
    if d == 0:
        return Site(model, (z1.real, z1.imag))
    w = (z2 - z1) / (z2 - z1.conjugate())  # disk coordinate of z2 seen from z1
    u = w / abs(w) * math.tanh(s * d / 2)
    z = (z1 - z1.conjugate() * u) / (1 - u)
    return Site(model, (z.real, z.imag))


def diameter(sites: Iterable[Site]) -> Dist:
    """Largest pairwise distance (0 for fewer than two sites)."""
    sites = list(sites)
    best = 0
    for i, p in enumerate(sites):
        for q in sites[i + 1:]:
            d = distance(p, q)
            if d > best:
                best = d
    return best


@dataclass(frozen=True)
class DeltaEstimate:
    """Supremum of the four-point defect over the examined quadruples.

    Always a lower bound for the true hyperbolicity constant.
    """

    value: Dist
    quadruples: int
    exhaustive: bool
    approximate: bool

    def __float__(self):
        return float(self.value)


def _four_point_exhaustive(dm: np.ndarray) -> int:
    # defect(x,y,z;w) = min((x.z)_w, (y.z)_w) - (x.y)_w, maximised over all quadruples;
    # distances are doubled so the Gromov products stay integral
    n = dm.shape[0]
    best = 0
    for w in range(n):
        g = dm[:, w][:, None] + dm[:, w][None, :] - dm  # 2 * Gromov products at w
        for x in range(n):
            m = np.minimum(g[x][None, :], g).max(axis=1)  # over z, for each y
            d = int((m - g[x]).max())
            if d > best:
                best = d
    return best


def delta_estimate(model, sample_radius: int, sample_count: Optional[int] = None, seed=0) -> DeltaEstimate:
    """Four-point hyperbolicity defect over quadruples of the ball of ``sample_radius``.

    With ``sample_count=None`` on a tree model every quadruple of the ball is
    examined (exact, 0 on trees). Otherwise ``sample_count`` random quadruples
    are drawn deterministically from ``seed``.
    """
    if sample_radius < 1:
        raise DomainError("sample_radius must be >= 1")
    if model.is_tree:
        sites = model.ball(sample_radius)
        n = len(sites)
        if sample_count is None or sample_count >= n ** 4:
            dm = np.array([[model.distance_addr(p.coords, q.coords) for q in sites] for p in sites], dtype=np.int64)
            return DeltaEstimate(Fraction(_four_point_exhaustive(dm), 2), n ** 4, True, False)
        rng = random.Random(derive_seed("delta", model.key, sample_radius, sample_count, seed))
        best = Fraction(0)
        for _ in range(sample_count):
            q = [sites[rng.randrange(n)] for _ in range(4)]
            best = max(best, _four_point_defect(q))
        return DeltaEstimate(best, sample_count, False, False)
    if sample_count is None:
        raise DomainError("the half-plane model needs an explicit sample_count")
    pts = model.sample_ball(sample_radius, 4 * sample_count, seed)
    best = 0.0
    for i in range(sample_count):
        best = max(best, _four_point_defect(pts[4 * i: 4 * i + 4]))
    return DeltaEstimate(best, sample_count, False, True)


def _four_point_defect(q: List[Site]) -> Dist:
    x, y, z, w = q
    s = sorted(
        [distance(x, y) + distance(z, w), distance(x, z) + distance(y, w), distance(x, w) + distance(y, z)],
        reverse=True,
    )
    diff = s[0] - s[1]
    return Fraction(diff, 2) if isinstance(diff, int) else diff / 2


def shadow(s: Iterable[Site], x0: Optional[Site] = None, depth: int = 1) -> Set[Cylinder]:
    """Cylinders whose ends pass within ``5 delta`` of some member of ``s``.

    On trees (delta = 0) the shadow of a vertex ``v`` seen from the basepoint is
    exactly the cylinder of rays through ``v``. It is returned as the depth-``d``
    cylinders it contains, or as ``v``'s own cylinder when ``v`` is deeper.
    Only the basepoint is supported as viewpoint ``x0``.
    """
    s = list(s)
    if not s:
        return set()
    model = s[0].model
    if not model.is_tree:
        raise UnsupportedModel("shadows are only computed on tree models")
    if x0 is not None and (x0.model.key != model.key or x0.coords != ()):
        raise DomainError("shadow viewpoint must be the model basepoint")
    out: Set[Cylinder] = set()
    for v in s:
        _same_model(v, model.basepoint)
        if len(v.coords) >= depth:
            out.add(Cylinder(v.coords))
            continue
        level = [v.coords]
        for _ in range(depth - len(v.coords)):
            level = [a + (c,) for a in level for c in model.children(a)]
        out.update(Cylinder(a) for a in level)
    return out


def end_gromov_product(model, xi: EndPoint, zeta: EndPoint) -> int:
    """``(xi . zeta)_{x0}`` on a tree: length of the common initial segment of the rays."""
    n = 0
    while xi.head(n + 1) == zeta.head(n + 1):
        n += 1
        if n > len(xi.prefix) + len(zeta.prefix) + 2 * len(xi.period) * len(zeta.period) + 2:
            return INF
    return n
