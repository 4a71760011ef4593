from itertools import combinations_with_replacement

import pytest

from orthoposet.constructs import (
    FIXTURES,
    blocks_of,
    boolean_algebra,
    boolean_block_report,
    chain2,
    fig2_sets,
    fixture,
    gen_fig2,
    horizontal_components,
    horizontal_sum,
    mo,
)
from orthoposet.errors import EmptyFamilyError, UnknownFixtureError
from orthoposet.ortho import check_gom, check_om, classify, is_boolean, validate_orthoposet
from orthoposet.poset import canonical_form, is_distributive


def test_mo2():
    hs = horizontal_sum([boolean_algebra(2), boolean_algebra(2)])
    assert hs.result.n == 6 and hs.blocks == 2
    assert hs.result.labels == ("0", "1:a", "1:b", "2:a", "2:b", "1")


def test_empty_family():
    with pytest.raises(EmptyFamilyError):
        horizontal_sum([])


def test_single_part_is_isomorphic():
    for name in ("fig1", "fig3", "fig7_o6"):
        op = fixture(name)
        r = horizontal_sum([op]).result
        assert canonical_form(r.poset, r.prime) == canonical_form(op.poset, op.prime)


def test_sum_structure_invariants():
    parts = [fixture("fig6"), boolean_algebra(3), fixture("fig1")]
    hs = horizontal_sum(parts)
    op = hs.result
    assert op.n == sum(q.n - 2 for q in parts) + 2
    assert validate_orthoposet(op.poset, op.prime).verdict
    for x in range(op.n):
        for y in range(op.n):
            if not hs.same_block(x, y):
                assert not op.poset.comparable(x, y)
    inner = hs.block_of[1:-1]
    assert list(inner) == sorted(inner) and hs.block_of[0] is hs.block_of[-1] is None


def test_fig6_plus_fig3():
    hs = horizontal_sum([fixture("fig6"), fixture("fig3")])
    op = hs.result
    assert op.n == 26
    c = classify(op)
    assert c["gom"] and not c["om"] and not c["distributive"] and not c["lattice"]
    assert not boolean_block_report(op).verdict


def test_components_recover_blocks():
    hs = horizontal_sum([fixture("fig6"), fixture("fig1"), boolean_algebra(2)])
    comps = horizontal_components(hs.result)
    assert len(comps) == 3
    for i, comp in enumerate(comps):
        assert all(hs.block_of[x] == i for x in range(hs.result.n) if comp >> x & 1)
    assert [b.n for b in blocks_of(hs.result)] == [10, 12, 4]


def test_sums_of_gom_parts_are_gom():
    goms = [op for op in (fixture(n) for n in FIXTURES) if check_gom(op).verdict]
    for a, b in combinations_with_replacement(range(len(goms)), 2):
        assert check_gom(horizontal_sum([goms[a], goms[b]]).result).verdict


def test_sums_of_boolean_parts_are_gom_not_distributive():
    pool = [boolean_algebra(2), boolean_algebra(3), fixture("fig1"), fixture("fig6")]
    for a, b in combinations_with_replacement(range(len(pool)), 2):
        op = horizontal_sum([pool[a], pool[b]]).result
        assert check_gom(op).verdict
        rep = is_distributive(op.poset)
        assert not rep.verdict
        assert boolean_block_report(op).verdict


def test_cross_block_distributivity_witness():
    op = mo(2)
    p = op.poset
    a, b = p.index("1:a"), p.index("2:a")
    pm = op.prime.map
    lhs = p.lower_mask(p.upper_mask(1 << a | 1 << pm[a]) | 1 << b)
    rhs = p.lower_mask(p.upper_mask((p.down[a] & p.down[b]) | (p.down[pm[a]] & p.down[b])))
    assert lhs != rhs


def test_fig2():
    op = gen_fig2()
    assert op.n == 20
    sets = fig2_sets()
    assert sets[op.index("a")] == {1, 4} and sets[op.index("b")] == {1, 5}
    assert sets[op.prime(op.index("a"))] == {2, 3, 5, 6}
    c = classify(op)
    assert c["omp"] and not c["lattice"]
    assert fixture("fig2") is fixture("fig2")


def test_fixture_sanity(fixtures):
    for op in fixtures.values():
        assert validate_orthoposet(op.poset, op.prime).verdict
    assert check_om(fixtures["fig2"]).verdict and check_om(fixtures["fig3"]).verdict
    assert is_boolean(fixtures["fig1"]).verdict and is_boolean(fixtures["fig6"]).verdict


def test_fig3_shape():
    op = fixture("fig3")
    p = op.poset
    atoms = [x for x in range(p.n) if x != p.bottom and p.down[x] == (1 << x | 1 << p.bottom)]
    coatoms = [x for x in range(p.n) if x != p.top and p.up[x] == (1 << x | 1 << p.top)]
    assert len(atoms) == 8 and len(coatoms) == 8
    h = p.index("h'")
    below = {p.labels[u] for u, v in p.covers() if v == h}
    assert below == {"a", "b", "c", "d"}
    # 8 + 24 + 8 covers
    assert len(p.covers()) == 40


def test_fig3_not_sum_of_boolean_blocks():
    op = fixture("fig3")
    assert len(horizontal_components(op)) == 1
    assert not boolean_block_report(op).verdict


def test_fig6_and_fig7_shape():
    p = fixture("fig6").poset
    for x in "abcd":
        ups = [v for u, v in p.covers() if u == p.index(x)]
        assert len(ups) == 3
    o6 = fixture("fig7_o6").poset
    assert o6.leq(o6.index("a"), o6.index("b'")) and o6.leq(o6.index("b"), o6.index("a'"))
    assert len(o6.covers()) == 6


def test_unknown_fixture():
    with pytest.raises(UnknownFixtureError):
        fixture("fig4")
    with pytest.raises(KeyError):
        fixture("nope")


def test_chain2():
    assert chain2().n == 2 and is_boolean(chain2()).verdict
