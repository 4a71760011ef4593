import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthoposet.constructs import boolean_algebra, chain2, fixture, mo
from orthoposet.errors import BoundsError, CycleError, OrderError
from orthoposet.poset import (
    Poset,
    Subset,
    build_from_covers,
    canonical_form,
    check_distributivity_variants,
    is_distributive,
    is_distributive_lattice_law,
    is_lattice,
    join,
    lower_cone,
    max_elements,
    meet,
    min_elements,
    upper_cone,
)


def names(p, subset):
    return set(p.names(subset.mask))


def test_two_chain():
    p = build_from_covers(2, 0, 1, [(0, 1)])
    assert p.n == 2 and p.leq(0, 1) and not p.leq(1, 0)
    assert is_lattice(p).verdict
    assert is_distributive(p).verdict


def test_cycle_rejected():
    with pytest.raises(CycleError):
        build_from_covers(2, 0, 1, [(0, 1), (1, 0)])


def test_bounds_rejected():
    # 0 < 1, 0 < 2: element 1 is not a top
    with pytest.raises(BoundsError):
        build_from_covers(3, 0, 1, [(0, 1), (0, 2)])


def test_bad_cover_pair():
    with pytest.raises(OrderError):
        build_from_covers(2, 0, 1, [(0, 0)])


def test_matrix_constructor_checks_transitivity():
    leq = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    with pytest.raises(OrderError):
        Poset(leq)
    p = Poset([[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    assert (p.bottom, p.top) == (0, 2)


def test_fig3_join_b_c():
    p = fixture("fig3").poset
    assert p.labels[join(p, p.index("b"), p.index("c"))] == "h'"
    assert p.labels[join(p, p.index("a"), p.index("d"))] == "h'"


def test_cones_fig3():
    p = fixture("fig3").poset
    assert names(p, lower_cone(p, ["a'", "b'"])) == {"0", "g", "h"}
    u = upper_cone(p, ["g", "h"])
    assert names(p, u) == {"b'", "a'", "1"}
    assert names(p, min_elements(p, u)) == {"a'", "b'"}


def test_cones_fig1():
    p = fixture("fig1").poset
    assert names(p, upper_cone(p, ["a", "c"])) == {"d'", "b'", "1"}
    assert join(p, p.index("a"), p.index("c")) is None


def test_cone_edge_cases():
    p = fixture("fig3").poset
    assert lower_cone(p, []).mask == p.full
    assert upper_cone(p, []).mask == p.full
    assert names(p, lower_cone(p, ["0"])) == {"0"}
    assert names(p, upper_cone(p, ["1"])) == {"1"}
    assert len(min_elements(p, Subset(0, p.n))) == 0
    assert names(p, min_elements(p, Subset(p.full, p.n))) == {"0"}
    assert names(p, max_elements(p, Subset(p.full, p.n))) == {"1"}


def test_subset_width_mismatch():
    p = fixture("fig3").poset
    with pytest.raises(ValueError):
        lower_cone(p, Subset(1, 4))
    with pytest.raises(ValueError):
        Subset(1, 4) | Subset(1, 5)


def test_join_with_bottom(corpus):
    for op in corpus[:20]:
        p = op.poset
        for x in range(p.n):
            assert join(p, x, p.bottom) == x
            assert meet(p, x, p.top) == x


def test_join_matches_min_of_upper_cone(corpus):
    for op in corpus:
        p = op.poset
        for x in range(p.n):
            for y in range(p.n):
                mins = p.min_mask(p.up[x] & p.up[y])
                j = join(p, x, y)
                if bin(mins).count("1") == 1:
                    assert j is not None and mins == 1 << j
                    assert p.up[x] & p.up[y] & ~p.up[j] == 0
                else:
                    assert j is None


def test_lattice_witnesses():
    rep = is_lattice(fixture("fig3").poset)
    assert not rep.verdict
    p = fixture("fig3").poset
    assert [p.labels[i] for i in rep.witnesses[0].elements] == ["a", "b"]
    rep = is_lattice(fixture("fig2").poset)
    p = fixture("fig2").poset
    assert [p.labels[i] for i in rep.witnesses[0].elements] == ["a", "b"]


def test_distributivity_examples():
    assert is_distributive(fixture("fig1").poset).verdict
    v = check_distributivity_variants(fixture("fig1").poset)
    assert list(v.details["identities"].values()) == [True] * 4
    v = check_distributivity_variants(mo(2).poset)
    assert list(v.details["identities"].values()) == [False] * 4
    assert check_distributivity_variants(chain2().poset).verdict


def test_distributivity_variants_agree(corpus):
    for op in corpus:
        v = check_distributivity_variants(op.poset)
        assert v.details["agree"]
        assert v.verdict == is_distributive(op.poset).verdict


def test_distributive_lattice_law(corpus):
    for op in corpus:
        law = is_distributive_lattice_law(op.poset)
        if law is None:
            assert not is_lattice(op.poset).verdict
        else:
            assert law == is_distributive(op.poset).verdict


# -- Galois properties ---------------------------------------------------------

POSETS = [fixture("fig3").poset, fixture("fig1").poset, fixture("fig6").poset, boolean_algebra(3).poset]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(POSETS), st.data())
def test_galois_closure(p, data):
    a = data.draw(st.integers(0, p.full))
    b = data.draw(st.integers(0, p.full))
    A, B = Subset(a, p.n), Subset(b, p.n)
    L, U = (lambda s: lower_cone(p, s)), (lambda s: upper_cone(p, s))
    assert A <= L(U(A))
    assert A <= U(L(A))
    assert L(U(L(A))) == L(A)
    assert U(L(U(A))) == U(A)
    if A <= B:
        assert L(B) <= L(A)
        assert U(B) <= U(A)
    if a:
        assert len(min_elements(p, A)) >= 1


# -- canonical form --------------------------------------------------------------


@pytest.mark.parametrize("name", ["fig1", "fig2", "fig3", "fig5", "fig6", "fig7_o6"])
def test_canonical_form_invariant_under_relabeling(name, rng):
    op = fixture(name)
    base = canonical_form(op.poset, op.prime)
    plain = canonical_form(op.poset)
    perm = list(range(op.n))
    for i in range(1000):
        rng.shuffle(perm)
        q = op.relabel(perm)
        assert canonical_form(q.poset, q.prime) == base
        if i < 100:
            assert canonical_form(q.poset) == plain


def test_canonical_form_distinguishes():
    f3, f2 = fixture("fig3"), fixture("fig2")
    assert canonical_form(f3.poset) != canonical_form(f2.poset)
    assert canonical_form(f3.poset, f3.prime) != canonical_form(f2.poset, f2.prime)


def _digraph(p):
    g = nx.DiGraph()
    for x in range(p.n):
        g.add_node(x, role="bottom" if x == p.bottom else "top" if x == p.top else "")
    for x in range(p.n):
        for y in range(p.n):
            if x != y and p.leq(x, y):
                g.add_edge(x, y)
    return g


def _iso(p, q):
    return nx.is_isomorphic(_digraph(p), _digraph(q), node_match=lambda a, b: a["role"] == b["role"])


def test_canonical_form_extra_pair_at_18():
    op = fixture("fig3")
    p = op.poset
    # add a <= b' and its dual b <= a'; stays a bounded poset
    up = list(p.up)
    a, b = p.index("a"), p.index("b")
    up[a] |= 1 << p.index("b'")
    up[b] |= 1 << p.index("a'")
    q = Poset.from_up(up, p.bottom, p.top, p.labels)
    assert canonical_form(p) != canonical_form(q)
    assert not _iso(p, q)


def test_canonical_form_agrees_with_isomorphism_oracle(small_structures):
    sample = [op.poset for op in small_structures if op.n == 7]
    for i, p in enumerate(sample):
        for q in sample[i:]:
            assert (canonical_form(p) == canonical_form(q)) == _iso(p, q)
