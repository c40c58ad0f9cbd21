"""Boundary dynamics on tree ends at cylinder resolution.

Finite-support probability measures on ends are pushed around by the group,
pulled toward a Dirac mass (strong proximality), orbits are steered into
every cylinder (minimality), and fixed-end sets are probed for interior
(topological freeness). All masses are exact rationals.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import DomainError, SearchFailure, UnsupportedModel
from .isometry import classify, fixed_ends, translation_length
from .models import GroupElement, derive_seed
from .partner import loa_construct
from .points import Cylinder, EndPoint


@dataclass(frozen=True)
class EndMeasure:
    """Probability measure with finitely many atoms on the ends of a tree."""

    atoms: Tuple[Tuple[EndPoint, Fraction], ...]

    @classmethod
    def make(cls, atoms) -> "EndMeasure":
        merged: Dict[EndPoint, Fraction] = {}
        for end, w in atoms:
            w = Fraction(w)
            if w <= 0:
                raise DomainError("atom weights must be positive")
            merged[end] = merged.get(end, Fraction(0)) + w
        if sum(merged.values()) != 1:
            raise DomainError("atom weights must sum to 1")
        return cls(tuple(sorted(merged.items(), key=lambda kv: (kv[0].prefix, kv[0].period))))

    @classmethod
    def dirac(cls, end: EndPoint) -> "EndMeasure":
        return cls(((end, Fraction(1)),))

    @property
    def total(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    def mass(self, cyl: Cylinder) -> Fraction:
        return sum((w for e, w in self.atoms if e in cyl), Fraction(0))

    def to_record(self) -> list:
        return [{"prefix": list(e.prefix), "period": list(e.period), "weight": str(w)} for e, w in self.atoms]


def push_measure(g: GroupElement, mu: EndMeasure) -> EndMeasure:
    """Image measure ``g_* mu``; weights are carried along unchanged."""
    if g.is_identity:
        return mu
    act = g.model.act_end
    return EndMeasure.make((act(g, e), w) for e, w in mu.atoms)


def steer(model, xi: EndPoint, cyl: Cylinder, max_length: int) -> Optional[GroupElement]:
    """Shortlex-least ``h`` with ``h . xi`` in ``cyl`` (None if none up to ``max_length``)."""
    for h in model.elements(max_length):
        if model.act_end(h, xi) in cyl:
            return h
    return None


@dataclass(frozen=True)
class ProximalityTrace:
    """Elements ``t_1 .. t_n`` and the target-cylinder masses of both pushed measures."""

    elements: Tuple[GroupElement, ...]
    masses: Tuple[Tuple[Fraction, Fraction], ...]
    target: Cylinder
    repelling_cylinder: Optional[Cylinder]
    loxodromic: Optional[GroupElement]

    def __len__(self):
        return len(self.elements)

    def to_record(self) -> dict:
        return {
            "target": list(self.target.prefix),
            "repelling_cylinder": None if self.repelling_cylinder is None else list(self.repelling_cylinder.prefix),
            "loxodromic": None if self.loxodromic is None else str(self.loxodromic),
            "steps": [
                {"element": str(g), "mass_mu1": str(m1), "mass_mu2": str(m2)}
                for g, (m1, m2) in zip(self.elements, self.masses)
            ],
        }


def _low_mass_cylinder(model, measures, avoid: Cylinder, max_depth: int) -> Cylinder:
    # the neighbourhood U of a point carrying (here: exactly) no mass
    for d in range(1, max_depth + 1):
        for cyl in model.cylinders(d):
            if cyl.meets(avoid):
                continue
            if all(mu.mass(cyl) == 0 for mu in measures):
                return cyl
    raise SearchFailure(f"every cylinder of depth <= {max_depth} carries mass")


def _base_loxodromics(model, max_length):
    for g in model.elements(max_length, 1):
        if translation_length(g) > 0:
            yield g


def proximality_run(model, mu1: EndMeasure, mu2: EndMeasure, zeta: EndPoint, depth: int, tol=Fraction(1, 100),
                    budget: int = 20, steer_length: int = 6, max_exp: int = 10) -> ProximalityTrace:
    """Drive both measures into the depth-``depth`` cylinder ``V`` of ``zeta``.

    A cylinder ``U`` free of atoms and disjoint from ``V`` plays the small
    neighbourhood of the proof. Conjugates of a base loxodromic are steered to
    have attracting end in ``V`` and repelling end in ``U``, combined by
    :func:`~pnaive.partner.loa_construct`, and the result is raised to the powers
    ``1, 2, ...`` until both pushed measures put ``>= 1 - tol`` of their mass in
    ``V``. The returned elements are those powers (at most ``budget``).
    """
    tol = Fraction(tol)
    if not model.is_tree:
        raise UnsupportedModel("boundary dynamics are computed on tree models")
    V = Cylinder(zeta.head(depth))
    if mu1.mass(V) >= 1 - tol and mu2.mass(V) >= 1 - tol:
        return ProximalityTrace((), (), V, None, None)
    U = _low_mass_cylinder(model, (mu1, mu2), V, depth + 4)
    gamma2 = None
    for g0 in _base_loxodromics(model, 4):
        plus0, minus0 = fixed_ends(g0)
        h1 = steer(model, plus0, V, steer_length)
        h2 = steer(model, minus0, U, steer_length)
        if h1 is None or h2 is None:
            continue
        a, b = g0.conj(h1), g0.conj(h2)
        if set(fixed_ends(a)) & set(fixed_ends(b)):
            continue
        try:
            gamma2 = loa_construct(a, b, U, V, max_exp)
            break
        except SearchFailure:
            continue
    if gamma2 is None:
        raise SearchFailure("no loxodromic with repelling end in U and attracting end in V")
    elements, masses = [], []
    for n in range(1, budget + 1):
        t = gamma2 ** n
        m = (push_measure(t, mu1).mass(V), push_measure(t, mu2).mass(V))
        elements.append(t)
        masses.append(m)
        if m[0] >= 1 - tol and m[1] >= 1 - tol:
            return ProximalityTrace(tuple(elements), tuple(masses), V, U, gamma2)
    raise SearchFailure(f"mass target not reached within {budget} elements")


@dataclass(frozen=True)
class MinimalityReport:
    passed: bool
    depth: int
    witnesses: Tuple[Tuple[Cylinder, GroupElement], ...]
    uncovered: Tuple[Cylinder, ...]

    def to_record(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "depth": self.depth,
            "witnesses": [{"cylinder": list(c.prefix), "element": str(g)} for c, g in self.witnesses],
            "uncovered": [list(c.prefix) for c in self.uncovered],
        }


def minimality_check(model, xi: EndPoint, depth: int, budget: int = 8) -> MinimalityReport:
    """For every depth-``depth`` cylinder find ``g`` (length <= ``budget``) moving ``xi`` into it."""
    if not model.is_tree:
        raise UnsupportedModel("minimality is checked on tree models")
    witnesses, uncovered = [], []
    for cyl in model.cylinders(depth):
        h = steer(model, xi, cyl, budget)
        if h is None:
            uncovered.append(cyl)
        else:
            witnesses.append((cyl, h))
    return MinimalityReport(not uncovered, depth, tuple(witnesses), tuple(uncovered))


def _periods(model, prefix, length):
    # valid words w of length <= ``length`` such that prefix + w^k stays reduced
    out, level = [], [()]
    for _ in range(length):
        level = [w + (c,) for w in level for c in model.children(prefix + w)]
        out.extend(w for w in level if model.valid_address(prefix + w * 3))
    return out


def random_end(model, seed, prefix_length: int = 3, period_length: int = 2) -> EndPoint:
    """A seeded eventually periodic end: random reduced prefix, then a random valid period."""
    rng = random.Random(derive_seed("end", model.key, seed, prefix_length, period_length))
    pre = ()
    for _ in range(prefix_length):
        pre = pre + (rng.choice(list(model.children(pre))),)
    periods = [w for w in _periods(model, pre, period_length) if len(w) == period_length]
    if not periods:
        periods = _periods(model, pre, period_length)
    return EndPoint.make(pre, rng.choice(periods))


def sample_ends(model, cyl: Cylinder, period_length: int = 2) -> List[EndPoint]:
    """Eventually periodic test ends inside ``cyl``: one more step, then a short period."""
    out = set()
    for c in model.children(cyl.prefix):
        pre = cyl.prefix + (c,)
        for w in _periods(model, pre, period_length):
            out.add(EndPoint.make(pre, w))
    return sorted(out, key=lambda e: (len(e.prefix) + len(e.period), e.prefix, e.period))


@dataclass(frozen=True)
class FreenessReport:
    passed: bool
    element: GroupElement
    depth: int
    loxodromic: bool
    fixed_cylinders: Tuple[Cylinder, ...]
    interior_cylinders: Tuple[Cylinder, ...]
    samples: int

    def to_record(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "element": str(self.element),
            "depth": self.depth,
            "loxodromic": self.loxodromic,
            "fixed_cylinders": [list(c.prefix) for c in self.fixed_cylinders],
            "interior_cylinders": [list(c.prefix) for c in self.interior_cylinders],
            "samples": self.samples,
        }


def topological_freeness_check(g: GroupElement, depth: int) -> FreenessReport:
    """Empty interior of the fixed-end set of ``g`` at cylinder resolution ``depth``.

    Every depth-``depth`` cylinder must contain a sample end moved by ``g``. For a
    loxodromic ``g`` the fixed sample ends must also lie in the cylinders of
    ``g+`` and ``g-``, and both of those ends must really be fixed.
    """
    if g.is_identity:
        raise DomainError("topological freeness concerns nontrivial elements")
    model = g.model
    if not model.is_tree:
        raise UnsupportedModel("topological freeness is checked on tree models")
    rep = classify(g)
    allowed = set()
    ok = True
    if rep.loxodromic:
        plus, minus = rep.ends
        ok = model.act_end(g, plus) == plus and model.act_end(g, minus) == minus
        allowed = {Cylinder(plus.head(depth)), Cylinder(minus.head(depth))}
    fixed_cyls, interior, count = [], [], 0
    for cyl in model.cylinders(depth):
        ends = sample_ends(model, cyl)
        count += len(ends)
        fixed = [e for e in ends if model.act_end(g, e) == e]
        if fixed:
            fixed_cyls.append(cyl)
            if cyl not in allowed:
                ok = False
        if len(fixed) == len(ends):
            interior.append(cyl)
            ok = False
    return FreenessReport(ok, g, depth, rep.loxodromic, tuple(fixed_cyls), tuple(interior), count)
