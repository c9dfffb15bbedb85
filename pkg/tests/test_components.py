"""Symbolic component systems against the truncation oracle."""

import random

import pytest

from omegagraph.components import (
    NotASubsetError,
    NotCriticalError,
    NotNestedError,
    TailSeg,
    UnknownComponentError,
    YContainedInXError,
    bonding_c,
    crit_of,
    cx_minus,
    delete,
    family,
    is_critical,
    materialize,
    oracle_mismatch,
    unique_component_meeting,
)
from omegagraph.ids import core, stripv
from omegagraph.oracle import components_after_deletion, count_by_neighborhood
from omegagraph.pattern import UnknownVertexError, truncate
from conftest import FIXTURE_NAMES, random_deletion, random_pattern


def _Y(*vs):
    return frozenset(vs)


# ---------------------------------------------------------------------------
# delete

def test_delete_thetafan_both_attachments(fixtures):
    cs = delete(fixtures["thetafan"], {core("a"), core("b")})
    assert len(cs.descriptors) == 1
    d = cs.descriptors[0]
    assert d.kind == "family"
    assert d.handle() == ("fan", "f1")
    assert d.excluded() == frozenset()
    assert d.neighborhood == _Y(core("a"), core("b"))
    # oracle: m copies yield m singleton components with that neighborhood
    for m in (3, 6):
        comps = components_after_deletion(truncate(fixtures["thetafan"], 0, m), cs.X)
        assert len(comps) == m
        assert all(c.neighborhood == d.neighborhood for c in comps)


def test_delete_ray_empty(fixtures):
    cs = delete(fixtures["ray"], set())
    assert len(cs.descriptors) == 1
    d = cs.descriptors[0]
    assert d.kind == "big"
    assert d.tails == (TailSeg("s1", 0),)
    assert d.neighborhood == frozenset()


def test_delete_domray_prefix(fixtures):
    X = {core("d")} | {stripv("s1", t, "p") for t in range(4)}
    cs = delete(fixtures["domray"], X)
    assert len(cs.descriptors) == 1
    d = cs.descriptors[0]
    assert d.kind == "big"
    assert d.vertices == frozenset()
    assert d.tails == (TailSeg("s1", 4),)
    assert d.neighborhood == _Y(stripv("s1", 3, "p"), core("d"))
    assert oracle_mismatch(cs, 8, 8) is None


def test_delete_unknown_vertex(fixtures):
    with pytest.raises(UnknownVertexError):
        delete(fixtures["ray"], {core("zz")})


# ---------------------------------------------------------------------------
# family / crit_of / cx_minus

def test_family_thetafan(fixtures):
    cs = delete(fixtures["thetafan"], {core("a"), core("b")})
    fam = family(cs, {core("a"), core("b")})
    assert fam.is_infinite() and not fam.explicit
    assert family(cs, {core("a")}).is_empty()
    with pytest.raises(NotASubsetError):
        family(cs, {core("a"), core("zzz")})


def test_family_empty_deletion_collects_everything(fixtures):
    for name in FIXTURE_NAMES:
        g = fixtures[name] if isinstance(fixtures, dict) else None
        cs = delete(g, set())
        got = family(cs, frozenset())
        assert len(got.explicit) + len(got.families) == len(cs.descriptors)


def test_crit_of(fixtures):
    assert crit_of(delete(fixtures["thetafan"], {core("a"), core("b")})) == {
        _Y(core("a"), core("b"))
    }
    assert crit_of(delete(fixtures["thetafan"], {core("a")})) == frozenset()
    cs = delete(fixtures["comb"], {stripv("s1", 0, "p"), stripv("s1", 1, "p")})
    assert crit_of(cs) == {_Y(stripv("s1", 0, "p")), _Y(stripv("s1", 1, "p"))}


def test_cx_minus(fixtures):
    assert cx_minus(delete(fixtures["thetafan"], {core("a"), core("b")})) == ()
    cs_ray = delete(fixtures["ray"], {stripv("s1", 0, "p")})
    assert [d.tails for d in cx_minus(cs_ray)] == [(TailSeg("s1", 1),)]
    # the comb tail from period 1 has neighborhood {p0}, which is critical,
    # so it belongs to that family and not to the leftover set
    cs_comb = delete(fixtures["comb"], {stripv("s1", 0, "p")})
    assert cx_minus(cs_comb) == ()
    tail = cs_comb.tail_descriptor("s1")
    assert tail in family(cs_comb, {stripv("s1", 0, "p")}).explicit


def test_is_critical(fixtures):
    assert is_critical(fixtures["star"], {core("c")})
    assert is_critical(fixtures["comb"], {stripv("s1", 17, "p")})
    assert not is_critical(fixtures["comb"], {stripv("s1", 0, "p"), stripv("s1", 1, "p")})
    assert not is_critical(fixtures["ray"], {stripv("s1", 0, "p")})
    assert not is_critical(fixtures["thetafan"], {core("a")})
    assert is_critical(fixtures["combo"], {core("a"), core("b")})


# ---------------------------------------------------------------------------
# bonding_c

def test_bonding_identity(fixtures):
    cs = delete(fixtures["comb"], {stripv("s1", 0, "p")})
    for d in cs.descriptors:
        assert bonding_c(cs, cs, d) is d


def test_bonding_thetafan_family_collapses(fixtures):
    g = fixtures["thetafan"]
    cs_small = delete(g, {core("a")})
    cs_big = delete(g, {core("a"), core("b")})
    fam_desc = cs_big.descriptors[0]
    image = bonding_c(cs_small, cs_big, fam_desc)
    assert image.kind == "big"
    assert core("b") in image.vertices


def test_bonding_comb_tails(fixtures):
    g = fixtures["comb"]
    cs_small = delete(g, {stripv("s1", 0, "p")})
    cs_big = delete(g, {stripv("s1", 0, "p"), stripv("s1", 1, "p")})
    tail_big = cs_big.tail_descriptor("s1")
    assert tail_big.tails == (TailSeg("s1", 2),)
    image = bonding_c(cs_small, cs_big, tail_big)
    assert image.tails == (TailSeg("s1", 1),)


def test_bonding_not_nested(fixtures):
    g = fixtures["comb"]
    cs1 = delete(g, {stripv("s1", 0, "p")})
    cs2 = delete(g, {stripv("s1", 1, "p")})
    with pytest.raises(NotNestedError):
        bonding_c(cs1, cs2, cs2.descriptors[0])


def test_bonding_unknown_component(fixtures):
    g = fixtures["comb"]
    cs1 = delete(g, {stripv("s1", 0, "p")})
    cs2 = delete(g, {stripv("s1", 0, "p"), stripv("s1", 1, "p")})
    with pytest.raises(UnknownComponentError):
        bonding_c(cs1, cs2, cs1.descriptors[0])


@pytest.mark.parametrize("seed", range(10))
def test_bonding_functoriality_and_refinement(seed):
    g = random_pattern(seed)
    rng = random.Random(seed + 99)
    X1 = random_deletion(g, rng, 2)
    X2 = X1 | random_deletion(g, rng, 2)
    X3 = X2 | random_deletion(g, rng, 2)
    cs1, cs2, cs3 = delete(g, X1), delete(g, X2), delete(g, X3)
    bound = max(cs1.stabilization_bound, cs2.stabilization_bound, cs3.stabilization_bound) + 2
    for d in cs3.descriptors:
        direct = bonding_c(cs1, cs3, d)
        via = bonding_c(cs1, cs2, bonding_c(cs2, cs3, d))
        assert direct == via
        # refinement: the component's material is included in its image's
        pieces = materialize(cs3, d, bound, bound)
        target = materialize(cs1, direct, bound, bound)
        if direct.kind == "family":
            # each piece sits inside one member copy of the image family
            assert all(any(p <= m for m in target) for p in pieces)
        else:
            whole = target[0]
            assert all(p <= whole for p in pieces)


# ---------------------------------------------------------------------------
# unique_component_meeting

def test_unique_component_meeting_thetafan(fixtures):
    g = fixtures["thetafan"]
    cs = delete(g, {core("a")})
    d = unique_component_meeting(cs, {core("a"), core("b")})
    assert core("b") in d.vertices


def test_unique_component_meeting_comb(fixtures):
    g = fixtures["comb"]
    cs0 = delete(g, set())
    d = unique_component_meeting(cs0, {stripv("s1", 3, "p")})
    assert d is cs0.descriptors[0]
    cs = delete(g, {stripv("s1", 0, "p"), stripv("s1", 1, "p")})
    d2 = unique_component_meeting(cs, {stripv("s1", 5, "p")})
    assert d2.tails == (TailSeg("s1", 2),)


def test_unique_component_meeting_errors(fixtures):
    g = fixtures["comb"]
    cs = delete(g, {stripv("s1", 0, "p")})
    with pytest.raises(NotCriticalError):
        unique_component_meeting(cs, {stripv("s1", 1, "p"), stripv("s1", 2, "p")})
    with pytest.raises(YContainedInXError):
        unique_component_meeting(cs, {stripv("s1", 0, "p")})


# ---------------------------------------------------------------------------
# Oracle equivalence invariants

def _fixture_cases(fixtures, per_fixture, seed0):
    for i, name in enumerate(FIXTURE_NAMES):
        g = fixtures[name]
        rng = random.Random(1000 * i + seed0)
        for _ in range(per_fixture):
            yield name, g, random_deletion(g, rng)


def test_exactness_vs_oracle_fixtures(fixtures):
    for name, g, X in _fixture_cases(fixtures, 6, seed0=1):
        cs = delete(g, X)
        b = cs.stabilization_bound
        assert oracle_mismatch(cs, b + 2, b + 2) is None, (name, sorted(map(str, X)))


@pytest.mark.parametrize("seed", range(14))
def test_exactness_vs_oracle_random_patterns(seed):
    g = random_pattern(seed)
    rng = random.Random(seed * 31 + 5)
    for _ in range(4):
        X = random_deletion(g, rng)
        cs = delete(g, X)
        b = cs.stabilization_bound
        assert oracle_mismatch(cs, b + 2, b + 2) is None, sorted(map(str, X))


def test_partition_law_on_truncations(fixtures):
    # every oracle component clear of the truncation boundary sits in
    # exactly one neighborhood family, matching neighborhoods
    for name, g, X in _fixture_cases(fixtures, 4, seed0=2):
        cs = delete(g, X)
        b = cs.stabilization_bound + 2
        fg = truncate(g, b, b)
        for comp in components_after_deletion(fg, X):
            if comp.vertices & fg.boundary:
                continue
            assert comp.neighborhood <= X
            fam = family(cs, comp.neighborhood)
            pieces = [
                p
                for d in fam.explicit + fam.families
                for p in materialize(cs, d, b, b)
            ]
            assert pieces.count(comp.vertices) == 1, (name, sorted(map(str, comp.vertices)))


def test_crit_formula_against_growing_counts(fixtures):
    for name, g, X in _fixture_cases(fixtures, 4, seed0=3):
        cs = delete(g, X)
        b = cs.stabilization_bound
        candidates = None
        for m in (b + 2, b + 4, b + 6):
            counts = count_by_neighborhood(components_after_deletion(truncate(g, m, m), X))
            found = {
                Y
                for Y, n in counts.items()
                if Y <= X and n >= m - len(X)
            }
            candidates = found if candidates is None else candidates & found
        assert candidates == crit_of(cs), (name, sorted(map(str, X)))
