import pytest

from pnaive.errors import DomainError, SubgroupTooLarge
from pnaive.isometry import (
    IsometryClass,
    acylindricity_probe,
    classify,
    displacement,
    enumerate_subgroup,
    fix_set,
    fixed_ends,
    quasi_axis,
    translation_length,
    translation_length_formula,
)
from pnaive.points import EndPoint


def ball_min_displacement(g, radius):
    return min(displacement(g, x) for x in g.model.ball(radius))


def test_translation_length_examples(F2, Z2Z3):
    assert translation_length(F2.parse("ab")) == 2
    assert translation_length(F2.identity) == 0
    assert translation_length(Z2Z3.parse("s")) == 0


@pytest.mark.parametrize("model_name,length,radius", [("F2", 4, 4), ("Z2Z3", 6, 6)])
def test_translation_length_matches_ball_search(request, model_name, length, radius):
    model = request.getfixturevalue(model_name)
    for g in model.elements(length):
        ell = translation_length(g)
        assert ell == ball_min_displacement(g, radius)
        assert ell == translation_length_formula(g)


def test_translation_length_conjugation_and_powers(Z2Z3):
    h = Z2Z3.parse("t s t^2")
    for g in Z2Z3.elements(5, 1):
        ell = translation_length(g)
        assert translation_length(g.conj(h)) == ell
        assert translation_length(g ** 3) == 3 * ell


def test_classify_examples(F2, Z2Z3):
    rep = classify(Z2Z3.parse("s t"))
    assert rep.kind is IsometryClass.LOXODROMIC and rep.translation_length == 2
    assert classify(Z2Z3.parse("t")).kind is IsometryClass.ELLIPTIC
    rep = classify(F2.parse("a"))
    assert rep.loxodromic and rep.translation_length == 1


def test_finite_order_is_elliptic(Z2Z3):
    for g in Z2Z3.elements(7):
        order_finite = any((g ** k).is_identity for k in (1, 2, 3))
        assert order_finite == (not classify(g).loxodromic)


def test_quasi_axis_examples(F2, Z2Z3):
    axis = {x.coords for x in quasi_axis(F2.parse("ab"), 0, 3)}
    assert axis == {(), (1,), (1, 2), (1, 2, 1), (-2,), (-2, -1), (-2, -1, -2)}
    assert len(quasi_axis(F2.parse("ab"), 6, 3)) == len(F2.ball(3))
    line = quasi_axis(Z2Z3.parse("s t"), 0, 4)
    g = Z2Z3.parse("s t")
    coords = {x.coords for x in line}
    # the axis is a line: every vertex has at most two axis neighbours, translates stay on it
    for x in line:
        y = Z2Z3.act(g, x)
        if len(y.coords) <= 4:
            assert y.coords in coords
    with pytest.raises(DomainError):
        quasi_axis(Z2Z3.parse("s"))


def test_fixed_ends_examples(F2, Z2Z3):
    a = F2.parse("a")
    plus, minus = fixed_ends(a)
    assert plus == EndPoint.make((), (1,)) and minus == EndPoint.make((), (-1,))
    g = Z2Z3.parse("s t")
    p, m = fixed_ends(g)
    assert fixed_ends(~g) == (m, p)
    assert translation_length(g) % len(p.period) == 0


def test_fixed_ends_are_fixed(F2, Z2Z3):
    for model in (F2, Z2Z3):
        for g in model.elements(5, 1):
            if translation_length(g) == 0:
                continue
            p, m = fixed_ends(g)
            assert p != m
            assert model.act_end(g, p) == p and model.act_end(g, m) == m
            # attracting: a far axis vertex moves toward p
            assert fixed_ends(~g) == (m, p)


def test_fix_set_examples(Z2Z3, F2):
    s, t = Z2Z3.parse("s"), Z2Z3.parse("t")
    assert {x.coords for x in fix_set([s], 0, 4, 3).sites} == {()}
    assert {x.coords for x in fix_set([t], 0, 4, 3).sites} == {(0,)}
    assert len(fix_set([], 5, 3, 2, model=F2).sites) == len(F2.ball(3))
    assert fix_set([s], 0, 4, 3).boundary_closure == frozenset()


def test_fix_set_of_conjugates(Z2Z3):
    s = Z2Z3.parse("s")
    for h in Z2Z3.elements(3):
        fs = fix_set([s.conj(h)], 0, 6, 3)
        assert {x.coords for x in fs.sites} == {Z2Z3.act(h, Z2Z3.basepoint).coords}


def test_enumerate_subgroup(Z2Z3, F2):
    assert len(enumerate_subgroup([Z2Z3.parse("t")])) == 3
    with pytest.raises(SubgroupTooLarge):
        enumerate_subgroup([F2.parse("a")])
    with pytest.raises(SubgroupTooLarge):
        enumerate_subgroup([Z2Z3.parse("s"), Z2Z3.parse("t")])


def test_acylindricity_probe_examples(F2, Z2Z3):
    assert acylindricity_probe(F2, 0, 2, 3, 6) == 1
    assert acylindricity_probe(Z2Z3, 0, 4, 3, 8) == 1
    assert acylindricity_probe(Z2Z3, 0, 0, 3, 8) == 3
    with pytest.raises(DomainError):
        acylindricity_probe(F2, 0, 10, 3, 2)
