from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pnaive.boundary import (
    EndMeasure,
    minimality_check,
    proximality_run,
    push_measure,
    random_end,
    sample_ends,
    topological_freeness_check,
)
from pnaive.errors import DomainError
from pnaive.isometry import fixed_ends
from pnaive.points import Cylinder, EndPoint

words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=6)


def test_push_examples(F2):
    mu = EndMeasure.dirac(F2.end((), (2,)))
    assert push_measure(F2.identity, mu) == mu
    assert push_measure(F2.parse("a"), mu) == EndMeasure.dirac(F2.end((1,), (2,)))


@given(words, st.integers(0, 1000))
def test_push_conserves_mass_and_composes(F2, w, seed):
    g = F2.reduce(w)
    h = F2.parse("bA")
    ends = [random_end(F2, (seed, i)) for i in range(3)]
    mu = EndMeasure.make(zip(ends, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))))
    nu = push_measure(g, mu)
    assert nu.total == 1
    assert push_measure(g * h, mu) == push_measure(g, push_measure(h, mu))


def test_measure_validation(F2):
    with pytest.raises(DomainError):
        EndMeasure.make([(F2.end((), (1,)), Fraction(1, 2))])
    with pytest.raises(DomainError):
        EndMeasure.make([(F2.end((), (1,)), 0), (F2.end((), (2,)), 1)])


def test_proximality_dirac(F2):
    e = F2.end((2,), (2,))
    zeta = F2.end((1, 1), (-2,))
    mu = EndMeasure.dirac(e)
    tr = proximality_run(F2, mu, mu, zeta, 3)
    assert tr.masses[-1] == (1, 1)
    plus, minus = fixed_ends(tr.loxodromic)
    assert plus in tr.target and minus in tr.repelling_cylinder


def test_proximality_already_there(F2):
    zeta = F2.end((1, 2), (1,))
    tr = proximality_run(F2, EndMeasure.dirac(zeta), EndMeasure.dirac(zeta), zeta, 3)
    assert len(tr) == 0


def test_proximality_two_atoms_tol_zero(F2):
    e = [F2.end((1,), (1,)), F2.end((2,), (2,)), F2.end((-1,), (-2,)), F2.end((-2, -1), (2,))]
    mu1 = EndMeasure.make([(e[0], Fraction(1, 2)), (e[1], Fraction(1, 2))])
    mu2 = EndMeasure.make([(e[2], Fraction(1, 3)), (e[3], Fraction(2, 3))])
    tr = proximality_run(F2, mu1, mu2, F2.end((2, 1), (1,)), 2, tol=0, budget=10)
    assert tr.masses[-1] == (1, 1)
    for g, (m1, m2) in zip(tr.elements, tr.masses):
        assert push_measure(g, mu1).mass(tr.target) == m1
        assert push_measure(g, mu2).mass(tr.target) == m2


def test_proximality_on_bass_serre_tree(Z2Z3):
    ends = [random_end(Z2Z3, i) for i in range(4)]
    mu1 = EndMeasure.make([(ends[0], Fraction(1, 2)), (ends[1], Fraction(1, 2))])
    mu2 = EndMeasure.make([(ends[2], Fraction(1, 2)), (ends[3], Fraction(1, 2))])
    tr = proximality_run(Z2Z3, mu1, mu2, random_end(Z2Z3, 99), 3)
    assert min(tr.masses[-1]) >= Fraction(99, 100)


def test_minimality_examples(F2, Z2Z3):
    rep = minimality_check(F2, F2.end((), (1,)), 1)
    assert rep.passed
    assert {c.prefix for c, _ in rep.witnesses} == {(1,), (-1,), (2,), (-2,)}
    assert minimality_check(F2, F2.end((), (1,)), 0).passed
    assert minimality_check(Z2Z3, random_end(Z2Z3, 4), 2).passed


def test_minimality_reports_uncovered_with_small_budget(F2):
    rep = minimality_check(F2, F2.end((), (1,)), 3, budget=1)
    assert not rep.passed and rep.uncovered


def test_minimality_is_equivariant(F2):
    xi = random_end(F2, 5)
    g = F2.parse("abA")
    assert minimality_check(F2, xi, 2).passed == minimality_check(F2, F2.act_end(g, xi), 2).passed


def test_freeness_examples(F2, Z2Z3):
    rep = topological_freeness_check(F2.parse("a"), 4)
    assert rep.passed
    assert {c.prefix for c in rep.fixed_cylinders} == {(1, 1, 1, 1), (-1, -1, -1, -1)}
    with pytest.raises(DomainError):
        topological_freeness_check(F2.identity, 3)
    assert topological_freeness_check(Z2Z3.parse("s"), 3).passed


def test_sample_ends_lie_in_their_cylinder(F2, Z2Z3):
    for model in (F2, Z2Z3):
        for cyl in model.cylinders(2):
            ends = sample_ends(model, cyl)
            assert ends and all(e in cyl for e in ends)


def test_random_end_is_seeded(F2):
    assert random_end(F2, 3) == random_end(F2, 3)
    assert isinstance(random_end(F2, 3), EndPoint)
