"""Finding ping-pong partners.

The pipeline mirrors the constructive argument:

1. :func:`loa_construct` -- products ``g1^n g2^k`` whose attracting end lies in a
   prescribed cylinder ``V`` and repelling end in ``U`` (bounded search, every
   answer re-verified).
2. :func:`escape_search` -- a loxodromic whose fixed ends avoid the boundary
   traces of the subgroups' quasi-fixed sets and whose fixed pair no
   nontrivial subgroup element preserves.
3. :func:`pingpong_power` -- the constants ``Delta``, ``C`` and the power ``N``.
4. :func:`pnaive_pipeline` -- all of the above plus freeness certificates.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from .certify import FreenessCertificate, freeness_certificate
from .errors import (
    CapabilityError,
    CertificateFailure,
    DomainError,
    FiniteNormalSubgroupError,
    NeedsEllipticization,
    SearchFailure,
    SubgroupTooLarge,
)
from .hypspace import Dist, diameter
from .isometry import (
    FixSet,
    classify,
    enumerate_subgroup,
    fix_set,
    fixed_ends,
    quasi_axis,
    translation_length,
)
from .models import GroupElement, derive_seed
from .points import Cylinder, EndPoint


@dataclass(frozen=True)
class SearchBudget:
    max_exp: int = 6
    max_candidates: int = 400
    max_length: int = 8
    conjugator_length: int = 2


@dataclass(frozen=True)
class SubgroupEvidence:
    subgroup: Tuple[GroupElement, ...]
    D_observed: Dist
    Dprime_observed: Dist
    axis_avoidance_evidence: dict
    pair_preservation_checked: bool

    def to_record(self) -> dict:
        return {
            "subgroup": [str(h) for h in self.subgroup],
            "D_observed": str(self.D_observed),
            "Dprime_observed": str(self.Dprime_observed),
            "axis_avoidance_evidence": self.axis_avoidance_evidence,
            "pair_preservation_checked": self.pair_preservation_checked,
        }


@dataclass(frozen=True)
class PartnerResult:
    gamma: GroupElement
    power_N: int
    Delta: Dist
    C: Dist
    per_subgroup: Tuple[SubgroupEvidence, ...]
    region_radius: int
    translation_length: Dist
    Dprime_observed: Dist

    @property
    def gammaN(self) -> GroupElement:
        return self.gamma ** self.power_N

    def to_record(self) -> dict:
        return {
            "gamma": str(self.gamma),
            "power_N": self.power_N,
            "gammaN": str(self.gammaN),
            "translation_length_gamma": str(self.translation_length),
            "Delta": str(self.Delta),
            "C": str(self.C),
            "Dprime_observed": str(self.Dprime_observed),
            "region_radius": self.region_radius,
            "per_subgroup": [e.to_record() for e in self.per_subgroup],
        }


# -- placing the ends of a product ---------------------------------------

def _check_loxodromic(g: GroupElement, name: str):
    if not classify(g).loxodromic:
        raise DomainError(f"{name} = {g} is not loxodromic")


def loa_construct(g1: GroupElement, g2: GroupElement, U: Cylinder, V: Cylinder, max_exp: int = 10) -> GroupElement:
    """Least ``(n, k)`` (lexicographic, ``1 <= n, k <= max_exp``) such that
    ``g1^n g2^k`` is loxodromic with attracting end in ``V`` and repelling end in ``U``.
    """
    _check_loxodromic(g1, "g1")
    _check_loxodromic(g2, "g2")
    p1, m1 = fixed_ends(g1)
    p2, m2 = fixed_ends(g2)
    if {p1, m1} & {p2, m2}:
        raise DomainError("g1 and g2 must have disjoint fixed pairs")
    if p1 not in V:
        raise DomainError("the attracting end of g1 must lie in V")
    if m2 not in U:
        raise DomainError("the repelling end of g2 must lie in U")
    for n in range(1, max_exp + 1):
        a = g1 ** n
        for k in range(1, max_exp + 1):
            g = a * g2 ** k
            if translation_length(g) == 0:
                continue
            plus, minus = fixed_ends(g)
            if plus in V and minus in U:
                return g
    raise SearchFailure(f"no g1^n g2^k with n, k <= {max_exp} has its ends in (V, U)")


# -- escape search ------------------------------------------------------------

@dataclass(frozen=True)
class EscapeResult:
    gamma: GroupElement
    construction: str
    chain: Tuple[str, ...]
    closures: Tuple[FixSet, ...]


def _loxodromic_stream(model, seed, budget: SearchBudget) -> Iterator[GroupElement]:
    """Seeded random loxodromics of growing length (deterministic in ``seed``)."""
    per_length = max(1, budget.max_candidates // budget.max_length)
    seen = set()
    for i in range(budget.max_candidates):
        length = 1 + min(i // per_length, budget.max_length - 1)
        g = model.random_element(length, (seed, i))
        if g in seen:
            continue
        seen.add(g)
        if translation_length(g) > 0:
            yield g


def _subgroup_data(model, subgroups, region_radius, depth):
    groups = []
    for gens in subgroups:
        gens = [model.parse(h) for h in gens]
        for h in gens:
            if classify(h).loxodromic:
                raise DomainError(f"subgroup generator {h} is loxodromic; the subgroup is not elliptic")
        try:
            groups.append(enumerate_subgroup(gens) if gens else (model.identity,))
        except SubgroupTooLarge as exc:
            raise DomainError(f"subgroup generated by {[str(h) for h in gens]} is not elliptic: {exc}") from exc
    ball_size = len(model.ball(region_radius))
    K = 50 * model.delta
    closures = []
    for H in groups:
        if len(H) == 1:
            # the trivial subgroup fixes everything and constrains nothing
            closures.append(None)
            continue
        fs = fix_set(list(H), K, region_radius, depth, model=model)
        for h in H:
            if h.is_identity:
                continue
            fh = fix_set([h], K, region_radius, depth, model=model)
            if len(fh.sites) == ball_size:
                raise FiniteNormalSubgroupError(
                    f"<{h}> quasi-fixes the entire ball of radius {region_radius}; "
                    "the group appears to have a nontrivial finite normal subgroup"
                )
        closures.append(fs)
    return groups, closures


def _escapes(gamma: GroupElement, closures: Sequence[FixSet], idx: Sequence[int]) -> bool:
    if translation_length(gamma) == 0:
        return False
    ends = fixed_ends(gamma)
    return all(not closures[i].closure_contains(e) for e in ends for i in idx if closures[i] is not None)


def preserves_pair(h: GroupElement, gamma: GroupElement) -> bool:
    plus, minus = fixed_ends(gamma)
    act = gamma.model.act_end
    return {act(h, plus), act(h, minus)} == {plus, minus}


def _pair_free(gamma: GroupElement, groups) -> bool:
    return not any(preserves_pair(h, gamma) for H in groups for h in H if not h.is_identity)


def escape_search(model, subgroups: Sequence[Sequence], region_radius: int = 6, depth: int = 3,
                  budget: Optional[SearchBudget] = None, seed=0) -> EscapeResult:
    """A loxodromic whose ends avoid every subgroup's quasi-fixed boundary trace and
    whose fixed pair is preserved by no nontrivial subgroup element.

    The chain ``gamma_0 = g^n gamma^n``, ``gamma_j = gamma_{j-1}^n g^n`` handles the
    subgroups one at a time. If the result still has a pair-preserving subgroup
    element, the free exponent families of the last step (or, when the chain
    stopped at a single element ``g``, the conjugate family
    ``(g^n h^-1 g^n h)^n g^-n``) are scanned and the shortlex-least valid
    member is returned.
    """
    budget = budget or SearchBudget()
    groups, closures = _subgroup_data(model, subgroups, region_radius, depth)
    k = len(groups)
    stream = _loxodromic_stream(model, seed, budget)

    def fresh(condition):
        for g in stream:
            if condition(g):
                return g
        raise SearchFailure("candidate budget exhausted while looking for a loxodromic")

    gamma = fresh(lambda g: True)
    chain = [f"start {gamma}"]
    last_pair = None  # factors of the last combination step
    combined = False
    for i in range(k):
        if _escapes(gamma, closures, range(i + 1)):
            continue
        g = fresh(lambda c: _escapes(c, closures, [i]))
        chain.append(f"escape H{i}: {g}")
        if _escapes(g, closures, range(k)):
            gamma, last_pair = g, None
            chain.append(f"replace by {g}")
            continue
        first = not combined
        for n in range(1, budget.max_exp + 1):
            cand = (g ** n) * (gamma ** n) if first else (gamma ** n) * (g ** n)
            if _escapes(cand, closures, range(i + 1)):
                last_pair = (g, gamma) if first else (gamma, g)
                gamma, combined = cand, True
                chain.append(f"combine n={n}: {cand}")
                break
        else:
            raise SearchFailure(f"no combination escapes subgroup {i} within exponent {budget.max_exp}")
    if _pair_free(gamma, groups):
        return EscapeResult(gamma, "chain", tuple(chain), tuple(closures))
    candidates = []
    if last_pair is not None:
        A, B = last_pair
        construction = "independent exponents"
        for n in range(1, budget.max_exp + 1):
            for n2 in range(1, budget.max_exp + 1):
                candidates.append(A ** n * B ** n2)
    else:
        construction = "conjugate family"
        g = gamma
        for h in model.elements(budget.conjugator_length, 1):
            for n in range(1, budget.max_exp + 1):
                gn = g ** n
                candidates.append((gn * ~h * gn * h) ** n * ~gn)
    good = [c for c in set(candidates) if _escapes(c, closures, range(k)) and _pair_free(c, groups)]
    if not good:
        raise SearchFailure(f"{construction}: no candidate avoids pair preservation")
    best = min(good)
    chain.append(f"{construction}: {best}")
    return EscapeResult(best, construction, tuple(chain), tuple(closures))


# -- ping-pong power ----------------------------------------------------------

def _projection_diameter(axis_a, axis_b) -> Dist:
    # closest-point projection between two tree axes: their overlap, or a point
    return diameter(set(axis_a) & set(axis_b))


def pingpong_power(gamma: GroupElement, subgroups: Sequence[Sequence], region_radius: int = 6,
                   conjugator_length: int = 2) -> PartnerResult:
    """Observed constants ``D``, ``D'`` inside the ball, then ``Delta``, ``C`` and ``N``.

    ``Delta = max(D, D', 1000 delta, K1, K2^2)``, ``C = 10 Delta + 1000 delta`` and
    ``N`` is minimal with ``N * l(gamma) >= C``. Trivial subgroups contribute
    ``D = 0`` (nothing to play ping-pong against).
    """
    model = gamma.model
    delta = model.delta
    ell = translation_length(gamma)
    if ell == 0:
        raise DomainError(f"{gamma} is not loxodromic")
    groups = [enumerate_subgroup([model.parse(h) for h in gens]) if gens else (model.identity,) for gens in subgroups]
    axis = quasi_axis(gamma, 10 * delta, region_radius)
    pair = set(fixed_ends(gamma))
    conjugators = set(model.elements(conjugator_length, 1))
    for H in groups:
        conjugators.update(h for h in H if not h.is_identity)
    Dprime = 0
    for h in sorted(conjugators):
        c = gamma.conj(h)
        if set(fixed_ends(c)) == pair:
            continue
        Dprime = max(Dprime, _projection_diameter(axis, quasi_axis(c, 10 * delta, region_radius)))
    evidence = []
    D = 0
    for H, fs_gens in zip(groups, subgroups):
        nontrivial = [h for h in H if not h.is_identity]
        if nontrivial:
            fs = fix_set(nontrivial, 50 * delta, region_radius, model=model)
            d_i = diameter(set(axis) & fs.sites)
            plus, minus = fixed_ends(gamma)
            avoid = {
                "plus_cylinder": list(plus.head(fs.depth)),
                "minus_cylinder": list(minus.head(fs.depth)),
                "closure_cylinders": len(fs.boundary_closure),
                "plus_avoids": not fs.closure_contains(plus),
                "minus_avoids": not fs.closure_contains(minus),
                "depth": fs.depth,
            }
            checked = all(not preserves_pair(h, gamma) for h in nontrivial)
        else:
            d_i, avoid, checked = 0, {"trivial_subgroup": True}, True
        D = max(D, d_i)
        evidence.append(SubgroupEvidence(tuple(H), d_i, Dprime, avoid, checked))
    Delta = max(D, Dprime, 1000 * delta, model.K1, model.K2 ** 2)
    C = 10 * Delta + 1000 * delta
    N = max(1, math.ceil(C / ell))
    if translation_length(gamma ** N) < C:
        raise SearchFailure("translation length of gamma^N fell short of C (inconsistent model)")
    return PartnerResult(gamma, N, Delta, C, tuple(evidence), region_radius, ell, Dprime)


# -- full pipeline ---------------------------------------------------------

@dataclass(frozen=True)
class PipelineParams:
    region_radius: int = 6
    depth: int = 3
    syllable_bound: int = 8
    exponent_bound: int = 3
    seed: int = 0
    budget: SearchBudget = field(default_factory=SearchBudget)


@dataclass(frozen=True)
class PipelineResult:
    partner: PartnerResult
    certificates: Tuple[FreenessCertificate, ...]
    escape: EscapeResult

    def __iter__(self):
        return iter((self.partner, list(self.certificates)))


def pnaive_pipeline(model, subgroups: Sequence[Sequence], params: Optional[PipelineParams] = None,
                    workers: Optional[int] = None) -> PipelineResult:
    """Find ``gamma^N`` with ``<gamma^N, H_i> = <gamma^N> * H_i`` for every subgroup.

    Subgroups are generator lists (strings or elements); a single element
    ``h`` stands for ``<h>``. Loxodromic inputs raise
    :class:`NeedsEllipticization`: making them elliptic requires coning off
    their axes, which these models do not do.
    """
    params = params or PipelineParams()
    if not model.certificate_capable:
        raise CapabilityError(f"{model.key} is approximate; the pipeline produces certificates")
    subgroups = [[model.parse(h) for h in gens] for gens in subgroups]
    for gens in subgroups:
        for h in gens:
            if classify(h).loxodromic:
                raise NeedsEllipticization(
                    f"{h} is loxodromic on the {model.key} tree; it must first be made elliptic by coning off"
                )
    esc = escape_search(model, subgroups, params.region_radius, params.depth, params.budget, params.seed)
    result = pingpong_power(esc.gamma, subgroups, params.region_radius, params.budget.conjugator_length)
    certs = []
    # with no subgroups at all, a single vacuous certificate against {1} is still issued
    targets = [list(ev.subgroup) if gens else [] for gens, ev in zip(subgroups, result.per_subgroup)] or [[]]
    for H in targets:
        cert = freeness_certificate(result.gammaN, H, params.syllable_bound, params.exponent_bound, workers=workers)
        if not cert.passed:
            raise CertificateFailure(f"certificate failed for subgroup {[str(h) for h in H]}", cert)
        certs.append(cert)
    return PipelineResult(result, tuple(certs), esc)
