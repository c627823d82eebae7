"""Hasse property, PGL2 classification, block-sum checker, subgroup lattice."""

import random

import pytest

from hassecheck.hasse import (
    classify_pgl2,
    enumerate_subgroups,
    global_fixed_points,
    is_hasse,
    lemma31_check,
)
from hassecheck.matgrp import (
    ProjGroup,
    closure,
    identity,
    matrix,
    projectivize,
    standard_constructors,
)


def d6_group(p=7):
    return closure([matrix([[2, 0], [0, 1]], p), matrix([[0, 1], [1, 0]], p)])


def test_trivial_group_not_hasse():
    res = is_hasse(projectivize(closure([identity(2, 7)])))
    assert not res.is_hasse
    assert res.global_fixed_point is not None


def test_d6_is_hasse():
    assert is_hasse(projectivize(d6_group())).is_hasse


def test_full_pgl2_not_hasse_with_violator():
    res = is_hasse(projectivize(standard_constructors("gl2", 7)))
    assert not res.is_hasse
    v = res.violating_element
    assert v is not None
    # the witness genuinely fixes nothing
    from hassecheck.matgrp import Matrix, fixed_points

    assert fixed_points(Matrix(v, 2, 7)) == set()


def test_classify_d6():
    cls = classify_pgl2(projectivize(d6_group()))
    assert cls.dickson_label == "dihedral(6)"
    assert cls.stabilized_pair == "split"
    s = cls.sutherland
    assert s.cond1_dihedral_odd_n and s.cond2_ell_3mod4
    assert s.cond3_split_cartan_normalizer and s.cond4_index2_fixes
    assert s.predicted_hasse


def test_classify_split_cartan_normalizer():
    cls = classify_pgl2(projectivize(standard_constructors("split_cartan_normalizer", 7)))
    assert cls.dickson_label == "dihedral(12)"
    assert not cls.sutherland.cond1_dihedral_odd_n  # n = 6 is even


def test_classify_trivial():
    cls = classify_pgl2(projectivize(closure([identity(2, 7)])))
    assert cls.dickson_label == "cyclic(1)"
    assert not cls.sutherland.cond1_dihedral_odd_n


def test_classify_nonsplit_pair():
    cls = classify_pgl2(projectivize(standard_constructors("nonsplit_cartan", 7)))
    assert cls.stabilized_pair == "nonsplit"


def test_conjugation_invariance():
    rng = random.Random(5)
    base = projectivize(d6_group())
    gl = sorted(projectivize(standard_constructors("gl2", 7)).elements)
    for _ in range(100):
        c = gl[rng.randrange(len(gl))]
        cinv = base.inv(c)
        conj = frozenset(base.mul(base.mul(c, h), cinv) for h in base.elements)
        gens = tuple(base.mul(base.mul(c, g), cinv) for g in base.generators)
        grp = ProjGroup(gens, 2, 7, conj)
        assert is_hasse(grp).is_hasse == is_hasse(base).is_hasse


def test_lemma31_examples():
    g = d6_group()
    g2 = closure([matrix([[0, -3], [1, 1]], 7)])  # companion of x^2 - x + 3
    out = lemma31_check(g, g2)
    assert out["predicted"] and out["brute_force"].is_hasse

    triv = closure([identity(2, 7)])
    out = lemma31_check(triv, triv)
    assert not out["predicted"] and not out["brute_force"].is_hasse
    assert out["brute_force"].global_fixed_point is not None

    borel = standard_constructors("borel", 7)
    out = lemma31_check(borel, borel)
    assert not out["predicted"] and not out["brute_force"].is_hasse


def test_enumerate_pgl2_f2():
    ambient = projectivize(standard_constructors("gl2", 2))
    assert ambient.order() == 6
    subs = enumerate_subgroups(ambient)
    assert len(subs) == 4  # 1, C2, C3, S3
    assert sorted(s.order() for s in subs) == [1, 2, 3, 6]
    assert not any(is_hasse(s).is_hasse for s in subs)


def test_enumerate_bound_enforced():
    ambient = projectivize(standard_constructors("gl2", 7))
    with pytest.raises(ValueError):
        enumerate_subgroups(ambient, bound=100)


def test_global_fixed_points_of_borel():
    borel = projectivize(standard_constructors("borel", 7))
    pts = global_fixed_points(borel)
    assert len(pts) == 1
