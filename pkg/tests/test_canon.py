from itertools import permutations

from orthoposet.canon import canonical_labeling, orbits
from orthoposet.constructs import fixture


def _automorphisms(op):
    p, inv = op.poset, op.prime.map
    n = p.n
    inner = [x for x in range(n) if x not in (p.bottom, p.top)]
    out = []
    for img in permutations(inner):
        g = list(range(n))
        for x, y in zip(inner, img):
            g[x] = y
        if any(g[inv[x]] != inv[g[x]] for x in range(n)):
            continue
        if all((p.up[g[x]] >> g[y] & 1) == (p.up[x] >> y & 1) for x in range(n) for y in range(n)):
            out.append(tuple(g))
    return out


def _closure(gens, n):
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        h = frontier.pop()
        for g in gens:
            k = tuple(g[h[x]] for x in range(n))
            if k not in group:
                group.add(k)
                frontier.append(k)
    return group


def test_generators_give_full_group(small_structures):
    for op in small_structures:
        p = op.poset
        _, _, gens = canonical_labeling(p.up, p.bottom, p.top, op.prime.map)
        brute = set(_automorphisms(op))
        assert _closure(gens, p.n) == brute


def test_orbits_of_fig3():
    op = fixture("fig3")
    p = op.poset
    _, _, gens = canonical_labeling(p.up, p.bottom, p.top, op.prime.map)
    orb = orbits(p.n, gens)
    same = lambda x, y: orb[p.index(x)] == orb[p.index(y)]
    # a, b, g, h are the four atoms under two coatoms each
    assert same("a", "b") and same("a", "g") and same("a", "h")
    assert same("c", "f") and not same("a", "c")


def test_labeling_is_a_permutation(small_structures):
    for op in small_structures[:40]:
        p = op.poset
        _, perm, _ = canonical_labeling(p.up, p.bottom, p.top, op.prime.map)
        assert sorted(perm) == list(range(p.n))
