"""Classification of isometries, translation lengths, quasi-axes, fixed ends,
quasi-fixed-point sets and an acylindricity probe.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import DomainError, ModelMismatch, SubgroupTooLarge, UnsupportedModel
from .hypspace import Dist, distance, geodesic
from .models import GroupElement
from .points import Cylinder, EndPoint, Site

SUBGROUP_CAP = 64


class IsometryClass(enum.Enum):
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class IsometryReport:
    element: GroupElement
    kind: IsometryClass
    translation_length: Dist
    axis_sample: Tuple[Site, ...]
    ends: Optional[Tuple[EndPoint, EndPoint]] = None
    r: Dist = 0
    approximate: bool = False

    @property
    def loxodromic(self) -> bool:
        return self.kind is IsometryClass.LOXODROMIC


@dataclass(frozen=True)
class FixSet:
    """Sites of the ball moved at most ``K`` by every element of a finite subgroup."""

    subgroup_generators: Tuple[GroupElement, ...]
    elements: Tuple[GroupElement, ...]
    K: Dist
    region_radius: int
    sites: FrozenSet[Site]
    depth: int
    boundary_closure: FrozenSet[Cylinder]

    def closure_contains(self, end: EndPoint) -> bool:
        return Cylinder(end.head(self.depth)) in self.boundary_closure


def _tree_model(g: GroupElement):
    if not g.model.is_tree:
        raise UnsupportedModel(f"{g.model.key} is not a tree model")
    return g.model


def displacement(g: GroupElement, x: Site) -> Dist:
    return distance(x, g.model.act(g, x))


def _min_displacement_vertex(g: GroupElement) -> Tuple[Dist, Site]:
    model = g.model
    x0 = model.basepoint
    best = None
    for v in geodesic(x0, model.act(g, x0)):
        d = displacement(g, v)
        if best is None or d < best[0]:
            best = (d, v)
    return best


def translation_length(g: GroupElement) -> Dist:
    """Minimal displacement of ``g``.

    On trees this is the minimum of ``d(v, gv)`` over the vertices of
    ``[x0, g x0]``, which always meets the axis (or the fixed set). On the
    half-plane it is ``2 arccosh(|tr| / 2)`` (approximate).
    """
    model = g.model
    if model.is_tree:
        return _min_displacement_vertex(g)[0]
    tr = abs(float(model.float_matrix(g).trace()))
    return 2 * math.acosh(tr / 2) if tr > 2 else 0.0


def translation_length_formula(g: GroupElement, x: Optional[Site] = None) -> Dist:
    """Cross-check ``max(0, d(x, g^2 x) - d(x, g x))`` (exact on trees without inversions)."""
    model = _tree_model(g)
    x = x or model.basepoint
    return max(0, distance(x, model.act(g * g, x)) - distance(x, model.act(g, x)))


def classify(g: GroupElement) -> IsometryReport:
    """Elliptic or loxodromic, with translation length, axis sample and fixed ends."""
    model = g.model
    if not model.is_tree:
        ell = translation_length(g)
        kind = IsometryClass.LOXODROMIC if ell > 1e-9 else IsometryClass.ELLIPTIC
        return IsometryReport(g, kind, ell, (), None, 0, True)
    ell, v = _min_displacement_vertex(g)
    axis = tuple(u for u in geodesic(model.basepoint, model.act(g, model.basepoint)) if displacement(g, u) == ell)
    if ell > 0:
        return IsometryReport(g, IsometryClass.LOXODROMIC, ell, axis, fixed_ends(g), 0)
    return IsometryReport(g, IsometryClass.ELLIPTIC, 0, axis, None, 0)


def is_loxodromic(g: GroupElement) -> bool:
    return translation_length(g) > 0


def quasi_axis(g: GroupElement, r: Dist = 0, region_radius: int = 4) -> List[Site]:
    """Sites of the ball with ``d(x, gx) <= translation_length(g) + r``."""
    model = _tree_model(g)
    ell = translation_length(g)
    if ell == 0:
        raise DomainError(f"{g} is elliptic; quasi-axes need a loxodromic")
    return [x for x in model.ball(region_radius) if displacement(g, x) <= ell + r]


def fixed_ends(g: GroupElement) -> Tuple[EndPoint, EndPoint]:
    """``(attracting, repelling)`` ends of a loxodromic tree isometry."""
    return _attracting_end(g), _attracting_end(~g)


def _attracting_end(g: GroupElement) -> EndPoint:
    model = _tree_model(g)
    ell, v = _min_displacement_vertex(g)
    if ell == 0:
        raise DomainError(f"{g} is elliptic; it has no fixed ends")
    # addresses of g^n v eventually grow by one fixed block of length ell
    n = (len(v.coords) + 2 * len(g.nf) + 2) // ell + 2
    gn = g ** n
    a = model.act(gn, v).coords
    while True:
        b = model.act(g, Site(model, a)).coords
        c = model.act(g, Site(model, b)).coords
        if b[: len(a)] == a and c[: len(b)] == b and len(b) - len(a) == ell and b[len(a):] == c[len(b):]:
            return EndPoint.make(a, b[len(a):])
        a = b


def enumerate_subgroup(gens: Sequence[GroupElement], cap: int = SUBGROUP_CAP) -> Tuple[GroupElement, ...]:
    """All elements of the subgroup generated by ``gens`` (shortlex sorted).

    Raises :class:`SubgroupTooLarge` once more than ``cap`` elements appear,
    which is how infinite (hence non-elliptic on these spaces) subgroups show up.
    """
    gens = list(gens)
    if not gens:
        return ()
    model = gens[0].model
    for h in gens:
        if h.model.key != model.key:
            raise ModelMismatch("subgroup generators from different models")
    seen = {model.identity}
    frontier = [model.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for h in gens:
                for y in (x * h, x * ~h):
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > cap:
                            raise SubgroupTooLarge(
                                f"subgroup generated by {[str(h) for h in gens]} exceeds {cap} elements: not finite"
                            )
        frontier = nxt
    return tuple(sorted(seen))


def fix_set(H: Sequence[GroupElement], K: Dist = 0, region_radius: int = 4, depth: int = 3,
            model=None, cap: int = SUBGROUP_CAP) -> FixSet:
    """Quasi-fixed-point set of a finite subgroup inside the ball, with its boundary trace.

    A depth-``depth`` cylinder belongs to ``boundary_closure`` when the fix set
    contains the whole path from the cylinder's root vertex out to the sphere
    of radius ``region_radius`` inside that cylinder: a ray of the fix set leaves
    the ball through it.
    """
    H = list(H)
    model = model or (H[0].model if H else None)
    if model is None:
        raise DomainError("fix_set of an empty generator list needs an explicit model")
    if not model.is_tree:
        raise UnsupportedModel("fix sets are computed on tree models")
    if depth > region_radius:
        raise DomainError("depth must not exceed region_radius")
    elements = enumerate_subgroup(H, cap) if H else (model.identity,)
    moving = [h for h in elements if not h.is_identity]
    sites = frozenset(x for x in model.ball(region_radius) if all(displacement(h, x) <= K for h in moving))
    addrs = {x.coords for x in sites}
    closure = set()
    for x in sites:
        a = x.coords
        if len(a) == region_radius and all(a[:k] in addrs for k in range(depth, region_radius)):
            closure.add(Cylinder(a[:depth]))
    return FixSet(tuple(H), tuple(elements), K, region_radius, sites, depth, frozenset(closure))


def acylindricity_probe(model, epsilon: Dist, M: Dist, region_radius: int, word_length_cap: int) -> int:
    """Largest number of elements (length <= cap) that epsilon-fix two sites at distance >= M.

    A lower bound for the acylindricity constant N, never a proof.
    """
    if not model.is_tree:
        raise UnsupportedModel("acylindricity is probed on tree models")
    if M > 2 * region_radius:
        raise DomainError("M must be at most 2 * region_radius")
    sites = model.ball(region_radius)
    elements = list(model.elements(word_length_cap))
    quasi_fixers: Dict[Site, FrozenSet[GroupElement]] = {
        x: frozenset(g for g in elements if displacement(g, x) <= epsilon) for x in sites
    }
    best = 0
    for i, x in enumerate(sites):
        fx = quasi_fixers[x]
        if len(fx) <= best:
            continue
        for y in sites[i:]:
            if distance(x, y) >= M:
                n = len(fx & quasi_fixers[y])
                if n > best:
                    best = n
    return best
