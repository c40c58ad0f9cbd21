import itertools
import math

import pytest
from hypothesis import given, strategies as st

from pnaive.certify import (
    elementary_closure,
    estimate_words,
    fixed_base,
    freeness_certificate,
    noloops_bound,
    noloops_check,
    path_quasigeodesic_check,
    primitive_root,
    rel_metric,
    star_property_check,
    star_run,
)
from pnaive.errors import CapabilityError, DomainError, Refusal
from pnaive.isometry import classify, fixed_ends
from pnaive.models import HalfPlane
from pnaive.partner import PipelineParams, pnaive_pipeline


def evaluate(witness, gammaN):
    g = gammaN.model.identity
    for syl in witness:
        g = g * (gammaN ** syl if isinstance(syl, int) else syl)
    return g


@pytest.fixture(scope="module")
def z2z3_partner(Z2Z3):
    return pnaive_pipeline(Z2Z3, [["s"], ["t"]], PipelineParams(syllable_bound=3)).partner


def test_planted_elliptic_fails(Z2Z3):
    s = Z2Z3.parse("s")
    cert = freeness_certificate(s, [s])
    assert not cert.passed
    assert len(cert.witness) <= 4
    assert evaluate(cert.witness, s).is_identity
    assert cert.oracles == ("normal_form", "exact_matrix_mod_sign")


def test_pipeline_partner_passes(Z2Z3, z2z3_partner):
    cert = freeness_certificate(z2z3_partner.gammaN, [Z2Z3.parse("s")], 8, 3)
    assert cert.passed and cert.words_checked == estimate_words(1, 3, 8)


def test_trivial_subgroup_is_vacuous(F2):
    cert = freeness_certificate(F2.parse("ab"), [], 5, 3)
    assert cert.passed and cert.words_checked == 6


def test_witness_is_least(Z2Z3):
    # t s t^-1 has order 2: t^2 = 1 is found before anything longer
    g = Z2Z3.parse("t s t^2")
    cert = freeness_certificate(g, [Z2Z3.parse("t")])
    assert not cert.passed and cert.witness == (2,)


def test_certificate_refusal(Z2Z3):
    with pytest.raises(Refusal) as info:
        freeness_certificate(Z2Z3.parse("t s"), [Z2Z3.parse("t")], 12, 6, cap=1000)
    assert info.value.estimate > 1000


def test_certificate_on_plane_is_refused():
    H = HalfPlane([[[2, 1], [1, 1]], [[1, 1], [1, 2]]])
    with pytest.raises(CapabilityError):
        freeness_certificate(H.parse("a"), [])


def test_worker_counts_agree(Z2Z3, z2z3_partner):
    t = Z2Z3.parse("t")
    a = freeness_certificate(z2z3_partner.gammaN, [t], 6, 3, workers=1)
    b = freeness_certificate(z2z3_partner.gammaN, [t], 6, 3, workers=3)
    assert a == b
    s = Z2Z3.parse("s")
    assert freeness_certificate(s, [s], 6, 3, workers=1) == freeness_certificate(s, [s], 6, 3, workers=2)


def test_estimate_words_counts_alternating_words():
    # brute count of alternating words over m h-letters and 2e t-letters
    def brute(m, e, k):
        total = 0
        for n in range(1, k + 1):
            for start in (0, 1):
                kinds = [(start + i) % 2 for i in range(n)]
                total += math.prod(m if x == 0 else 2 * e for x in kinds)
        return total
    for m, e, k in itertools.product((1, 2), (1, 3), (1, 4, 7)):
        assert estimate_words(m, e, k) == brute(m, e, k)


def test_path_check(Z2Z3, z2z3_partner):
    g, s = z2z3_partner.gammaN, Z2Z3.parse("s")
    rep = path_quasigeodesic_check(g, [s], [s, 1, s, 1], Delta=z2z3_partner.Delta)
    assert rep.ok and rep.endpoint_distance == rep.chain_length
    assert path_quasigeodesic_check(g, [s], [1]).ok
    fake = path_quasigeodesic_check(Z2Z3.parse("t"), [s], [s, 1, s, 1])
    assert not fake.bounds_ok


def test_fixed_base(Z2Z3):
    assert fixed_base([Z2Z3.parse("s")]).coords == ()
    assert fixed_base([Z2Z3.parse("t")]).coords == (0,)


def test_primitive_root(F2, Z2Z3):
    assert str(primitive_root(F2.parse("ababab"))) == "ab"
    assert primitive_root(F2.parse("a")) == F2.parse("a")
    w = F2.parse("b")
    assert primitive_root(w * F2.parse("ababab") * ~w) == w * F2.parse("ab") * ~w


@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=5), st.integers(1, 4))
def test_root_power_roundtrip(F2, letters, k):
    g = F2.reduce(letters)
    if not classify(g).loxodromic:
        return
    r = primitive_root(g)
    assert any(r ** j == g for j in range(1, len(g) + 1))
    assert primitive_root(g ** k) == r


def test_elementary_closure(F2, Z2Z3):
    a = F2.parse("a")
    assert elementary_closure(a).describe() == "<a>"
    assert a in elementary_closure(a * a)
    assert F2.parse("b") not in elementary_closure(a)
    u = Z2Z3.parse("t s t^2 s")
    E = elementary_closure(u)
    # an elliptic element reverses this axis: E(u) is strictly bigger than <root>
    assert E.flip == Z2Z3.parse("s") and E.flip * u * ~E.flip == ~u
    with pytest.raises(DomainError):
        elementary_closure(Z2Z3.parse("s"))


def test_closure_membership_is_pair_stabilizer(Z2Z3):
    for u in Z2Z3.elements(6, 1):
        if not classify(u).loxodromic:
            continue
        E = elementary_closure(u)
        plus, minus = fixed_ends(u)
        for g in Z2Z3.elements(4):
            moved = {Z2Z3.act_end(g, plus), Z2Z3.act_end(g, minus)}
            assert (g in E) == (moved == {plus, minus})


def test_noloops_examples(F2, Z2Z3):
    ab, a = F2.parse("ab"), F2.parse("a")
    assert noloops_check(ab, [a], 1, 3).passed
    assert noloops_check(ab, [], 1, 3).passed
    with pytest.raises(DomainError):
        noloops_check(a, [a * a], 1, 3)
    with pytest.raises(DomainError):
        noloops_check(Z2Z3.parse("s"), [], 1, 2)


def test_noloops_finds_loops(F2):
    # neither b nor a^-1 b^-1 lies in E(a), yet a . b . a . a^-1 b^-1 . a^-1 = 1
    u, g, h = F2.parse("a"), F2.parse("b"), F2.parse("AB")
    res = noloops_check(u, [g, h], 1, 2)
    assert not res.passed
    n0, n1, n2 = res.witness
    assert (u ** n0 * g * u ** n1 * h * u ** n2).is_identity
    assert sum(map(abs, res.witness)) == 3


def test_star_examples(F2, Z2Z3):
    a, b, ab = F2.parse("a"), F2.parse("b"), F2.parse("ab")
    N = noloops_bound(ab, [a, b], 2)
    assert star_property_check([a, b, ab], 2, ab, N).passed
    assert star_property_check([], 2, ab, N).passed
    with pytest.raises(DomainError):
        star_property_check([a], 2, Z2Z3.parse("s"), 1)


def test_star_broken_triple(F2):
    a, b = F2.parse("a"), F2.parse("b")
    res = star_property_check([a, ~a], 2, triple=[F2.identity, a, b])
    assert not res.passed
    gs, xs = res.witness
    triple = [F2.identity, a, b]
    prod = F2.identity
    for g, x in zip(gs, xs):
        prod = prod * (~triple[x] * g * triple[x])
    assert prod.is_identity and all(x != y for x, y in zip(xs, xs[1:]))


def test_star_run(F2):
    M = [F2.parse(w) for w in ("a", "b", "ab", "Ab")]
    run = star_run(M, (2,))
    assert run.passed
    assert not any(g in elementary_closure(run.u) for g in M)


def test_rel_metric(Z2Z3):
    t = Z2Z3.parse("t")
    assert rel_metric(Z2Z3, 1, t, t, 6) == 0
    assert rel_metric(Z2Z3, 1, Z2Z3.identity, t, 6) == math.inf
    assert rel_metric(Z2Z3, None, Z2Z3.identity, Z2Z3.identity, 6) == 0
    with pytest.raises(DomainError):
        rel_metric(Z2Z3, 1, Z2Z3.identity, Z2Z3.parse("s"), 6)
