"""Brute-force verification.

Freeness certificates for ``<gamma^N> * H``, the broken-path geodesity check
behind the ping-pong argument, the (*) and no-loops word checks used for
group-ring primitivity, E(u) helpers, and the relative metric of a factor.

Every exhaustive check refuses (:class:`~pnaive.errors.Refusal`) rather than
truncating when its enumeration would exceed the configured cap, so a Pass
always means the stated window was covered completely.
"""
from __future__ import annotations

import itertools
import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .errors import CapabilityError, DomainError, OracleDisagreement, Refusal, UnsupportedModel
from .hypspace import INF, Dist, distance
from .isometry import classify, displacement, enumerate_subgroup, fixed_ends, translation_length
from .models import FreeGroup, FreeProduct, GroupElement, IDENTITY, mat_mul, mat_pow, projective
from .points import Site

ENUMERATION_CAP = 10 ** 7
WORKERS_ENV = "PNAIVE_WORKERS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


# -- freeness certificates --------------------------------------------------

@dataclass(frozen=True)
class FreenessCertificate:
    """Exhaustive evidence that ``<gammaN> * H -> G`` is injective on a window.

    ``witness`` is ``None`` on Pass; on Fail it is the least word (syllable
    count, then total |t-exponent|, then lexicographic) that evaluates to 1.
    Syllables are group elements of ``H`` or integer exponents of ``t = gammaN``.
    """

    gammaN: GroupElement
    subgroup: Tuple[GroupElement, ...]
    syllable_bound: int
    exponent_bound: int
    words_checked: int
    witness: Optional[Tuple[Union[GroupElement, int], ...]]
    oracles: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        return self.witness is None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def witness_str(self) -> Optional[str]:
        if self.witness is None:
            return None
        return " . ".join(f"t^{s}" if isinstance(s, int) else f"[{s}]" for s in self.witness)

    def to_record(self) -> dict:
        return {
            "gammaN": str(self.gammaN),
            "subgroup": [str(h) for h in self.subgroup],
            "syllable_bound": self.syllable_bound,
            "exponent_bound": self.exponent_bound,
            "words_checked": self.words_checked,
            "status": self.status,
            "witness": self.witness_str(),
            "oracles": list(self.oracles),
        }


def _t_exponents(e: int) -> List[int]:
    out = []
    for k in range(1, e + 1):
        out += [k, -k]
    return out


def _count_words(m: int, e2: int, k: int) -> int:
    """Alternating words with ``k`` syllables (``m`` subgroup choices, ``e2`` t-choices)."""
    if k == 0:
        return 0
    a = m ** ((k + 1) // 2) * e2 ** (k // 2)  # starting with a subgroup syllable
    b = e2 ** ((k + 1) // 2) * m ** (k // 2)
    return a + b


def estimate_words(h_nontrivial: int, exponent_bound: int, syllable_bound: int) -> int:
    return sum(_count_words(h_nontrivial, 2 * exponent_bound, k) for k in range(1, syllable_bound + 1))


class _Evaluator:
    """Evaluates alternating words by normal form and, when available, exact matrices."""

    def __init__(self, gammaN: GroupElement, H: Sequence[GroupElement], exponent_bound: int):
        self.model = gammaN.model
        self.H = list(H)
        self.exps = _t_exponents(exponent_bound)
        self.t_nf = {l: self.model.pow_nf(gammaN.nf, l) for l in self.exps}
        self.h_nf = [h.nf for h in self.H]
        self.use_matrix = self.model.has_matrices
        if self.use_matrix:
            tm = self.model.matrix_eval(gammaN)
            self.t_mat = {l: mat_pow(tm, l) for l in self.exps}
            self.h_mat = [self.model.matrix_eval(h) for h in self.H]

    def syllables(self, kind: str):
        if kind == "h":
            return [("h", i) for i in range(len(self.H))]
        return [("t", l) for l in self.exps]

    def step(self, state, syl):
        nf, mat = state
        kind, v = syl
        nf2 = self.model.mul_nf(nf, self.h_nf[v] if kind == "h" else self.t_nf[v])
        mat2 = None
        if self.use_matrix:
            mat2 = mat_mul(mat, self.h_mat[v] if kind == "h" else self.t_mat[v])
        return nf2, mat2

    def is_identity(self, state, word) -> bool:
        nf, mat = state
        by_nf = not nf
        if self.use_matrix:
            by_mat = projective(mat) == IDENTITY
            if by_mat != by_nf:
                raise OracleDisagreement(f"normal form says {by_nf}, matrix says {by_mat} for word {word}")
        return by_nf


def _syllable_key(syl):
    kind, v = syl
    return (0, v) if kind == "h" else (1, abs(v), v < 0)


def _word_key(word):
    return (len(word), sum(abs(v) for k, v in word if k == "t"), tuple(_syllable_key(s) for s in word))


def _scan_partition(args):
    """Check every word of exactly ``level`` syllables that starts with ``first``."""
    gammaN, H, exponent_bound, first, level = args
    ev = _Evaluator(gammaN, H, exponent_bound)
    start = ((), IDENTITY)
    count = 0
    best = None
    stack = [(ev.step(start, first), (first,))]
    while stack:
        state, word = stack.pop()
        if len(word) == level:
            count += 1
            if ev.is_identity(state, word):
                if best is None or _word_key(word) < _word_key(best):
                    best = word
            continue
        nxt = "t" if word[-1][0] == "h" else "h"
        for syl in ev.syllables(nxt):
            stack.append((ev.step(state, syl), word + (syl,)))
    return count, best


def freeness_certificate(gammaN: GroupElement, H: Sequence[GroupElement], syllable_bound: int = 8,
                         exponent_bound: int = 3, cap: int = ENUMERATION_CAP,
                         workers: Optional[int] = None) -> FreenessCertificate:
    """Evaluate every nontrivial reduced word of ``H * <t>`` (t -> gammaN) within the bounds.

    ``H`` may be given by generators; it is closed up to a finite subgroup.
    Words alternate nontrivial elements of ``H`` with powers ``t^l``,
    ``0 < |l| <= exponent_bound``, and have at most ``syllable_bound``
    syllables. Levels are scanned in increasing syllable count, so a Fail
    reports the least witness of the smallest failing level.
    """
    model = gammaN.model
    if not model.certificate_capable:
        raise CapabilityError(f"{model.key} is approximate; certificates need exact arithmetic")
    if syllable_bound < 1 or exponent_bound < 1:
        raise DomainError("bounds must be positive")
    elements = enumerate_subgroup(list(H)) if H else (model.identity,)
    nontrivial = [h for h in elements if not h.is_identity]
    est = estimate_words(len(nontrivial), exponent_bound, syllable_bound)
    if est > cap:
        raise Refusal(f"certificate would evaluate {est} words (cap {cap})", estimate=est)
    ev = _Evaluator(gammaN, nontrivial, exponent_bound)
    firsts = ev.syllables("h") + ev.syllables("t")
    workers = workers or worker_count()
    oracles = ("normal_form",) + (("exact_matrix_mod_sign",) if ev.use_matrix else ())
    total = 0
    witness = None
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for level in range(1, syllable_bound + 1):
            jobs = [(gammaN, nontrivial, exponent_bound, f, level) for f in firsts]
            results = list(pool.map(_scan_partition, jobs)) if pool else [_scan_partition(j) for j in jobs]
            found = [w for _, w in results if w is not None]
            total += sum(c for c, _ in results)
            if found:
                witness = min(found, key=_word_key)
                break
    finally:
        if pool:
            pool.shutdown()
    if witness is not None:
        witness = tuple(nontrivial[v] if k == "h" else v for k, v in witness)
    return FreenessCertificate(gammaN, tuple(elements), syllable_bound, exponent_bound, total, witness, oracles)


# -- broken-path geodesity ------------------------------------------------

@dataclass(frozen=True)
class _TreePoint:
    """The point at distance ``a`` from ``u`` on the tree geodesic ``[u, v]``."""

    u: Site
    v: Site
    a: Fraction

    @staticmethod
    def vertex(x: Site) -> "_TreePoint":
        return _TreePoint(x, x, Fraction(0))


def _dist_to_vertex(p: _TreePoint, w: Site) -> Fraction:
    duw, dvw, duv = distance(p.u, w), distance(p.v, w), distance(p.u, p.v)
    c = Fraction(duw + duv - dvw, 2)  # distance from u to the branch point toward w
    return duw - p.a if p.a <= c else (p.a - c) + (duw - c)


def _tree_point_distance(p: _TreePoint, q: _TreePoint) -> Fraction:
    # d(p, q) with q on [u', v']: same branching formula, measured from q's ends
    dpu, dpv, duv = _dist_to_vertex(p, q.u), _dist_to_vertex(p, q.v), distance(q.u, q.v)
    c = (dpu + duv - dpv) / 2  # along [u', v'], where the geodesic to p branches off
    return dpu - q.a if q.a <= c else (q.a - c) + (dpu - c)


@dataclass(frozen=True)
class PathReport:
    points: Tuple[Site, ...]
    segment_lengths: Tuple[int, ...]
    gromov_checks: Tuple[dict, ...]
    bounds_ok: bool
    chain_length: Fraction
    endpoint_distance: Fraction
    geodesic: bool

    @property
    def ok(self) -> bool:
        return self.bounds_ok and self.geodesic

    def to_record(self) -> dict:
        return {
            "segment_lengths": list(self.segment_lengths),
            "gromov_checks": [dict(c) for c in self.gromov_checks],
            "bounds_ok": self.bounds_ok,
            "chain_length": str(self.chain_length),
            "endpoint_distance": str(self.endpoint_distance),
            "geodesic": self.geodesic,
        }


def fixed_base(H: Sequence[GroupElement], radius: int = 8) -> Site:
    """Nearest vertex to the basepoint fixed by every element of ``H``."""
    model = H[0].model if H else None
    if model is None:
        raise DomainError("need at least one subgroup element to locate a fixed vertex")
    elements = enumerate_subgroup(list(H))
    for x in model.ball(radius):
        if all(displacement(h, x) == 0 for h in elements):
            return x
    raise DomainError(f"no vertex within {radius} of the basepoint is fixed by the subgroup")


def path_quasigeodesic_check(gammaN: GroupElement, H: Sequence[GroupElement],
                             word: Sequence[Union[GroupElement, int]], base: Optional[Site] = None,
                             Delta: Dist = 1) -> PathReport:
    """Build the broken path of the ping-pong argument for ``word`` and test it.

    ``word`` alternates elements of ``H`` and integer powers of ``t = gammaN``;
    a word starting with a power of ``t`` gets an implicit leading identity.
    Points: ``x_{2j-1} = g1 t^l1 ... gj x0`` and ``x_{2j} = ... gj t^lj x0``.
    For odd ``i`` the Gromov product ``(x_{i+1} . x_{i-2})_{x_i}`` is compared
    with ``|p_i|/2 - 2 Delta + 100 delta`` and ``|p_{i-2}|/2 - 2 Delta + 100 delta``
    (skipped at a trailing ``t^0``).
    The chain through the midpoints of the odd segments is geodesic exactly
    when its length equals the distance between its endpoints.
    """
    model = gammaN.model
    if not model.is_tree:
        raise UnsupportedModel("the path check runs on tree models")
    delta = model.delta
    H = list(H)
    if base is None:
        base = fixed_base(H) if H and any(not h.is_identity for h in H) else model.basepoint
    items = list(word)
    if items and isinstance(items[0], int):
        items.insert(0, model.identity)
    # normalise to (g1, l1, g2, l2, ..., gk, lk) with lk possibly 0
    syl: List[Tuple[GroupElement, int]] = []
    i = 0
    while i < len(items):
        g = items[i]
        if not isinstance(g, GroupElement):
            raise DomainError("word must alternate subgroup elements and integer exponents")
        l = items[i + 1] if i + 1 < len(items) else 0
        if not isinstance(l, int):
            raise DomainError("word must alternate subgroup elements and integer exponents")
        syl.append((g, l))
        i += 2
    xs = [base]
    prefix = model.identity
    for g, l in syl:
        prefix = prefix * g
        xs.append(model.act(prefix, base))
        prefix = prefix * gammaN ** l
        xs.append(model.act(prefix, base))
    # xs[0] = x0, xs[2j-1] after g_j, xs[2j] after t^{l_j}
    seg = [distance(xs[i], xs[i + 1]) for i in range(len(xs) - 1)]
    checks = []
    ok = True
    for i in range(3, len(xs) - 1, 2):
        if syl[(i - 1) // 2][1] == 0:
            continue  # a trailing subgroup element has no t-segment to compare against
        gp = Fraction(distance(xs[i + 1], xs[i]) + distance(xs[i - 2], xs[i]) - distance(xs[i + 1], xs[i - 2]), 2)
        b1 = Fraction(seg[i], 2) - 2 * Delta + 100 * delta
        b2 = Fraction(seg[i - 2], 2) - 2 * Delta + 100 * delta
        good = gp <= b1 and gp <= b2
        ok = ok and good
        checks.append({"i": i, "gromov_product": str(gp), "bound_current": str(b1), "bound_previous": str(b2), "ok": good})
    # midpoint chain m_{-1} = x0, m_{2j-1} = midpoint of [x_{2j-1}, x_{2j}], last = h x0
    chain = [_TreePoint.vertex(xs[0])]
    for j in range(1, len(syl) + 1):
        u, v = xs[2 * j - 1], xs[2 * j]
        chain.append(_TreePoint(u, v, Fraction(distance(u, v), 2)))
    chain.append(_TreePoint.vertex(xs[-1]))
    length = sum((_tree_point_distance(chain[k], chain[k + 1]) for k in range(len(chain) - 1)), Fraction(0))
    end_dist = _tree_point_distance(chain[0], chain[-1])
    return PathReport(tuple(xs), tuple(seg), tuple(checks), ok, length, end_dist, length == end_dist)


# -- E(u), no-loops and property (*) ---------------------------------------

@dataclass(frozen=True)
class ElementaryClosure:
    """E(u): the stabiliser of the fixed pair of a loxodromic ``u``.

    ``root`` generates the translation part (the primitive root of ``u``);
    ``flip``, when present, is a finite-order element swapping the two ends.
    """

    u: GroupElement
    root: GroupElement
    flip: Optional[GroupElement]

    def __contains__(self, g: GroupElement) -> bool:
        if g.model.key != self.u.model.key:
            return False
        plus, minus = fixed_ends(self.u)
        act = g.model.act_end
        return {act(g, plus), act(g, minus)} == {plus, minus}

    def describe(self) -> str:
        gens = [str(self.root)] + ([str(self.flip)] if self.flip is not None else [])
        return "<" + ", ".join(gens) + ">"


def _cyclic_split(model, nf):
    """``nf = w c w^-1`` with ``c`` cyclically reduced; returns (w, c)."""
    k = 0
    if isinstance(model, FreeGroup):
        while 2 * k + 1 < len(nf) and nf[k] == -nf[-1 - k]:
            k += 1
        return nf[:k], nf[k: len(nf) - k]
    # free product: strip syllables that cancel against their mirror, then merge a
    # remaining pair of same-factor end syllables
    while 2 * k + 1 < len(nf) and nf[k][0] == nf[-1 - k][0] and (nf[k][1] + nf[-1 - k][1]) % model.orders[nf[k][0]] == 0:
        k += 1
    w, c = nf[:k], nf[k: len(nf) - k]
    if len(c) >= 3 and c[0][0] == c[-1][0]:
        w = w + (c[0],)
        c = model.mul_nf(c[1:], (c[0],))
    return w, c


def primitive_root(u: GroupElement) -> GroupElement:
    """Shortest ``r`` with ``u = r^k`` for some ``k >= 1`` (up to the conjugating prefix)."""
    model = u.model
    if not isinstance(model, (FreeGroup, FreeProduct)):
        raise UnsupportedModel(f"root extraction is not available on {model.key}")
    w, c = _cyclic_split(model, u.nf)
    n = len(c)
    for d in range(1, n + 1):
        if n % d == 0 and c[:d] * (n // d) == c:
            c = c[:d]
            break
    W = GroupElement(model, w)
    return W * GroupElement(model, c) * ~W


def elementary_closure(u: GroupElement) -> ElementaryClosure:
    """Maximal virtually cyclic subgroup containing a loxodromic ``u``.

    The root is extracted from the cyclic normal form. A flip is searched among
    the vertex stabilisers along one period of the axis: a tree isometry
    swapping the two ends fixes a vertex of the axis.
    """
    model = u.model
    if not isinstance(model, (FreeGroup, FreeProduct)):
        raise UnsupportedModel(f"E(u) is not available on {model.key}")
    rep = classify(u)
    if not rep.loxodromic:
        raise DomainError(f"{u} is not loxodromic")
    root = primitive_root(u)
    flip = None
    if isinstance(model, FreeProduct):
        plus, minus = rep.ends
        ell = translation_length(root)
        v = rep.axis_sample[0]
        walk = [v]
        x = v
        # one period of the axis starting at v
        for _ in range(ell):
            nxt = [y for y in _neighbours(model, x.coords) if displacement(root, Site(model, y)) == ell and Site(model, y) not in walk]
            if not nxt:
                break
            x = Site(model, nxt[0])
            walk.append(x)
        for x in walk:
            for h in model.vertex_stabilizer(x.coords):
                if h.is_identity:
                    continue
                if model.act_end(h, plus) == minus and model.act_end(h, minus) == plus:
                    flip = min(flip, h) if flip is not None else h
            if flip is not None:
                break
    return ElementaryClosure(u, root, flip)


def _neighbours(model, addr):
    out = [addr + (c,) for c in model.children(addr)]
    if addr:
        out.append(addr[:-1])
    return out


@dataclass(frozen=True)
class WordCheck:
    """Outcome of an exhaustive word check; ``witness`` is None on pass."""

    passed: bool
    cases: int
    witness: Optional[tuple] = None

    def to_record(self) -> dict:
        w = None
        if self.witness is not None:
            w = [str(x) if isinstance(x, GroupElement) else (list(map(str, x)) if isinstance(x, tuple) else x) for x in self.witness]
        return {"status": "pass" if self.passed else "fail", "cases": self.cases, "witness": w}


def noloops_check(u: GroupElement, gs: Sequence[GroupElement], N: int, exp_bound: int,
                  cap: int = ENUMERATION_CAP) -> WordCheck:
    """Check ``u^n0 g1 u^n1 ... gk u^nk != 1`` for all ``N <= |ni| <= exp_bound``.

    The witness on failure is the least violating exponent tuple, ordered by
    total magnitude and then lexicographically.
    """
    if N < 1 or exp_bound < N:
        raise DomainError("need 1 <= N <= exp_bound")
    gs = list(gs)
    if gs:
        E = elementary_closure(u)
        bad = [str(g) for g in gs if g in E]
        if bad:
            raise DomainError(f"elements {bad} lie in E({u}) = {E.describe()}")
    elif not classify(u).loxodromic:
        raise DomainError(f"{u} is not loxodromic")
    exps = sorted([n for k in range(N, exp_bound + 1) for n in (k, -k)], key=lambda n: (abs(n), n < 0))
    cases = len(exps) ** (len(gs) + 1)
    if cases > cap:
        raise Refusal(f"no-loops window has {cases} cases (cap {cap})", estimate=cases)
    model = u.model
    upow = {n: model.pow_nf(u.nf, n) for n in exps}
    best = None
    for tup in itertools.product(exps, repeat=len(gs) + 1):
        nf = upow[tup[0]]
        for g, n in zip(gs, tup[1:]):
            nf = model.mul_nf(model.mul_nf(nf, g.nf), upow[n])
        if not nf:
            key = (sum(map(abs, tup)), tup)
            if best is None or key < best[0]:
                best = (key, tup)
    return WordCheck(best is None, cases, None if best is None else best[1])


def noloops_bound(u: GroupElement, M: Sequence[GroupElement], k: int, exp_bound_factor: int = 3,
                  N_max: int = 8) -> int:
    """Least ``N`` such that no-loops holds on the window ``[N, factor*N]`` for all
    sequences of at most ``k`` elements of ``M``.

    Adequacy is only confirmed inside the checked window.
    """
    M = list(M)
    for N in range(1, N_max + 1):
        if all(
            noloops_check(u, gs, N, exp_bound_factor * N).passed
            for r in range(1, k + 1)
            for gs in itertools.product(M, repeat=r)
        ):
            return N
    raise DomainError(f"no N <= {N_max} passes the no-loops window")


def star_property_check(M: Sequence[GroupElement], m: int, u: Optional[GroupElement] = None,
                        N: Optional[int] = None, triple: Optional[Sequence[GroupElement]] = None,
                        cap: int = ENUMERATION_CAP) -> WordCheck:
    """Exhaustive check of the (*) condition for one ``m``.

    With ``a, b, c = u^N, u^2N, u^3N`` (or an explicit ``triple``): for every
    ``(g1..gm)`` in ``M^m`` and every ``(x1..xm)`` in ``{a,b,c}^m`` with
    ``x_i != x_{i+1}`` for all ``i``, the product ``(x1^-1 g1 x1)...(xm^-1 gm xm)``
    must not be 1. The witness is ``(g-tuple, x-index-tuple)``.
    """
    M = list(M)
    if any(g.is_identity for g in M):
        raise DomainError("elements of M must be nontrivial")
    if triple is None:
        if u is None or N is None:
            raise DomainError("give u and N, or an explicit triple")
        if not u.model.certificate_capable:
            raise CapabilityError(f"{u.model.key} is approximate")
        if not classify(u).loxodromic:
            raise DomainError(f"{u} is not loxodromic")
        triple = [u ** (N * j) for j in (1, 2, 3)]
    triple = list(triple)
    if len(triple) != 3 or len(set(triple)) != 3:
        raise DomainError("the triple must consist of three distinct elements")
    if not M:
        return WordCheck(True, 0)
    cases = len(M) ** m * 3 * 2 ** (m - 1)
    if cases > cap:
        raise Refusal(f"(*) check has {cases} cases (cap {cap})", estimate=cases)
    model = M[0].model
    conj = {(gi, xi): (~triple[xi] * M[gi] * triple[xi]).nf for gi in range(len(M)) for xi in range(3)}
    count = 0
    for xs in itertools.product(range(3), repeat=m):
        if any(xs[i] == xs[i + 1] for i in range(m - 1)):
            continue
        for gs in itertools.product(range(len(M)), repeat=m):
            count += 1
            nf = ()
            for gi, xi in zip(gs, xs):
                nf = model.mul_nf(nf, conj[(gi, xi)])
            if not nf:
                return WordCheck(False, count, (tuple(M[g] for g in gs), xs))
    return WordCheck(True, count)


@dataclass(frozen=True)
class StarRun:
    u: GroupElement
    N: int
    results: Tuple[Tuple[int, WordCheck], ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for _, r in self.results)


def star_partner(M: Sequence[GroupElement], max_length: int = 6) -> GroupElement:
    """Shortlex-least loxodromic ``u`` with no element of ``M`` in E(u)."""
    M = list(M)
    model = M[0].model
    for u in model.elements(max_length, 1):
        if not classify(u).loxodromic:
            continue
        E = elementary_closure(u)
        if not any(g in E for g in M):
            return u
    raise DomainError(f"no partner of length <= {max_length}")


def star_run(M: Sequence[GroupElement], ms: Sequence[int] = (2, 3), u: Optional[GroupElement] = None,
             N: Optional[int] = None) -> StarRun:
    """Pick ``u`` avoiding E(u) for all of ``M``, fix ``N`` by the no-loops window,
    and run the (*) check for every ``m`` in ``ms``."""
    u = u or star_partner(M)
    N = N or noloops_bound(u, M, max(ms))
    return StarRun(u, N, tuple((m, star_property_check(M, m, u, N)) for m in ms))


# -- relative metric -------------------------------------------------------

def rel_metric(model, factor: Optional[int], h1: GroupElement, h2: GroupElement, ball: int) -> Dist:
    """Relative distance between elements of a factor subgroup.

    BFS in the Cayley graph on ``X`` (the other factor's generator) together
    with all of ``H``, restricted to elements with at most ``ball`` syllables,
    with the edges of the complete graph on ``H`` removed. ``factor=None``
    means the trivial subgroup. Returns ``inf`` when no path exists in the ball.
    """
    if not isinstance(model, FreeProduct):
        raise UnsupportedModel("the relative metric is defined for free-product models")
    if factor is None:
        H = [model.identity]
    else:
        H = [GroupElement(model, ((factor, e),) if e else ()) for e in range(model.orders[factor])]
    Hset = set(H)
    for h in (h1, h2):
        if h not in Hset:
            raise DomainError(f"{h} is not in the subgroup")
    if h1 == h2:
        return 0
    labels = [g for g in H if not g.is_identity]
    if factor is not None:
        other = 1 - factor
        x = GroupElement(model, ((other, 1),))
        labels += sorted({x, ~x})
    dist = {h1: 0}
    queue = deque([h1])
    while queue:
        g = queue.popleft()
        for lab in labels:
            y = g * lab
            if len(y) > ball or y in dist:
                continue
            if g in Hset and y in Hset and lab in Hset:
                continue
            dist[y] = dist[g] + 1
            if y == h2:
                return dist[y]
            queue.append(y)
    return INF
