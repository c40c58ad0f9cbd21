import itertools

import pytest
from hypothesis import given, strategies as st

from pnaive.errors import DomainError, ModelMismatch, UnsupportedModel
from pnaive.models import FreeGroup, FreeProduct, HalfPlane, model_from_description, projective

from oracles import free_reduce, is_pm_identity, product_reduce, psl_eval

letters = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=14)
syllables = st.lists(st.tuples(st.integers(0, 1), st.integers(-4, 4)), max_size=10)

SANOV = [[[1, 2], [0, 1]], [[1, 0], [2, 1]]]


def test_reduce_examples(F2, Z2Z3):
    assert str(F2.reduce([1, -1, 2])) == "b"
    assert Z2Z3.parse("s s").is_identity
    assert Z2Z3.parse("t t t t") == Z2Z3.parse("t")
    assert F2.parse("aA").is_identity
    assert str(F2.parse("a^3 B^2")) == "aaaBB"


@given(letters)
def test_free_reduction_matches_stack_oracle(F2, w):
    assert list(F2.reduce(w).nf) == free_reduce(w)


@given(letters, letters)
def test_free_group_axioms(F2, x, y):
    g, h = F2.reduce(x), F2.reduce(y)
    assert (g * h) * ~h == g
    assert g * ~g == F2.identity
    assert ~(g * h) == ~h * ~g


@given(syllables)
def test_product_reduction_matches_oracle(Z2Z3, syl):
    word = " ".join(f"{'st'[f]}^{e}" for f, e in syl) or "1"
    g = Z2Z3.parse(word)
    assert [(f, e) for f, e in g.nf] == product_reduce(syl, (2, 3))


@given(syllables)
def test_matrix_of_product_matches_oracle(Z2Z3, syl):
    word = " ".join(f"{'st'[f]}^{e}" for f, e in syl) or "1"
    g = Z2Z3.parse(word)
    assert Z2Z3.matrix_eval(g) == projective(tuple(map(tuple, psl_eval(syl))))


def test_matrix_examples(Z2Z3):
    s, t = Z2Z3.parse("s"), Z2Z3.parse("t")
    assert Z2Z3.matrix_eval(Z2Z3.identity) == ((1, 0), (0, 1))
    assert Z2Z3.matrix_eval(s * s) == ((1, 0), (0, 1))
    st_ = s * t
    m = Z2Z3.matrix_eval(st_)
    assert abs(m[0][0] + m[1][1]) >= 2
    for k in range(1, 13):
        assert Z2Z3.matrix_eval(st_ ** k) != ((1, 0), (0, 1))


def test_sanov_images_are_faithful_oracle():
    F = FreeGroup(2, SANOV)
    for g in F.elements(6, 1):
        assert F.matrix_eval(g) != ((1, 0), (0, 1))


def test_matrix_missing_raises(F2):
    with pytest.raises(UnsupportedModel):
        F2.matrix_eval(F2.parse("a"))


def test_act_examples(F2, Z2Z3):
    assert F2.act(F2.parse("ab"), F2.basepoint).coords == (1, 2)
    x = F2.site((2, 1))
    assert F2.act(F2.identity, x) == x
    assert Z2Z3.act(Z2Z3.parse("s"), Z2Z3.basepoint) == Z2Z3.basepoint


@given(letters, letters)
def test_action_is_a_left_action(F2, x, y):
    g, h = F2.reduce(x), F2.reduce(y)
    v = F2.site((2, 2, -1))
    assert F2.act(g * h, v) == F2.act(g, F2.act(h, v))


@given(syllables, syllables)
def test_product_action_is_a_left_action(Z2Z3, x, y):
    g = Z2Z3.parse(" ".join(f"{'st'[f]}^{e}" for f, e in x) or "1")
    h = Z2Z3.parse(" ".join(f"{'st'[f]}^{e}" for f, e in y) or "1")
    for v in Z2Z3.ball(2):
        assert Z2Z3.act(g * h, v) == Z2Z3.act(g, Z2Z3.act(h, v))


def test_vertex_stabilizers(Z2Z3):
    assert [str(g) for g in Z2Z3.vertex_stabilizer(())] == ["1", "s"]
    assert [str(g) for g in Z2Z3.vertex_stabilizer((0,))] == ["1", "t", "t^2"]


def test_random_element_lengths(F2, Z2Z3):
    assert F2.random_element(0, 1).is_identity
    g = F2.random_element(3, 7)
    assert len(g) == 3 and F2.random_element(3, 7) == g
    h = Z2Z3.random_element(4, 7)
    assert len(h.nf) == 4
    assert all(h.nf[i][0] != h.nf[i + 1][0] for i in range(3))


def test_elements_are_shortlex_and_complete(F2, Z2Z3):
    els = list(F2.elements(3))
    assert els == sorted(els)
    assert len(els) == 1 + 4 + 12 + 36
    assert len(set(Z2Z3.elements(4))) == len(list(Z2Z3.elements(4)))
    # syllable counts of Z/2*Z/3: 1, 3, 4, 6, 8, ...
    assert [Z2Z3.count_elements(n) for n in range(5)] == [1, 3, 4, 6, 8]


def test_model_mismatch(F2, Z2Z3):
    with pytest.raises(ModelMismatch):
        F2.parse("a") * Z2Z3.parse("s")


def test_parse_errors(F2):
    with pytest.raises(DomainError):
        F2.parse("ac")


def test_model_descriptions():
    assert isinstance(model_from_description({"kind": "free_group", "rank": 3}), FreeGroup)
    P = model_from_description({"kind": "free_product", "orders": [2, 3]})
    assert P.has_matrices
    H = model_from_description({"kind": "half_plane", "generators": [[[2, 1], [1, 1]], [[1, 1], [1, 2]]]})
    assert isinstance(H, HalfPlane) and not H.certificate_capable
    with pytest.raises(DomainError):
        model_from_description({"kind": "torus"})


def test_half_plane_is_approximate():
    H = HalfPlane([[[2, 1], [1, 1]], [[1, 1], [1, 2]]])
    with pytest.raises(UnsupportedModel):
        H.ball(2)
    g = H.parse("a")
    x = H.basepoint
    assert H.act(g * ~g, x).coords == pytest.approx(x.coords)


def test_oracles_agree_exhaustively_small(Z2Z3):
    for n in range(7):
        for syl in itertools.product([(0, 1), (1, 1), (1, 2)], repeat=n):
            g = Z2Z3.parse(" ".join(f"{'st'[f]}^{e}" for f, e in syl) or "1")
            assert g.is_identity == is_pm_identity(psl_eval(syl))
