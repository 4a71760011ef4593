"""Horizontal sums, generators and the named fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import EmptyFamilyError, UnknownFixtureError
from .ortho import OrthoPoset, is_boolean
from .poset import CheckReport, Poset, Witness, bits, build_from_covers


@dataclass(frozen=True)
class HorizontalSum:
    """Result of gluing blocks along their bounds.

    ``block_of[x]`` is the 0-based block of an interior element and None for
    the shared bottom and top.
    """

    result: OrthoPoset
    block_of: tuple

    @property
    def blocks(self):
        return max((b for b in self.block_of if b is not None), default=-1) + 1

    def same_block(self, a, b) -> bool:
        ba, bb = self.block_of[a], self.block_of[b]
        return ba is None or bb is None or ba == bb


def horizontal_sum(parts) -> HorizontalSum:
    """Identify the bottoms and tops of ``parts``; interiors stay disjoint.

    Element order: bottom, interior of part 1, interior of part 2, ..., top.
    """
    parts = list(parts)
    if not parts:
        raise EmptyFamilyError("horizontal sum of an empty family")
    n = 2 + sum(part.n - 2 for part in parts)
    top = n - 1
    index_maps = []
    labels = ["0"] + [""] * (n - 2) + ["1"]
    block_of = [None] * n
    nxt = 1
    for i, part in enumerate(parts):
        m = {part.bottom: 0, part.top: top}
        for x in range(part.n):
            if x in m:
                continue
            m[x] = nxt
            labels[nxt] = f"{i + 1}:{part.labels[x]}" if len(parts) > 1 else part.labels[x]
            block_of[nxt] = i
            nxt += 1
        index_maps.append(m)
    up = [0] * n
    up[0] = (1 << n) - 1
    up[top] = 1 << top
    prime = [0] * n
    prime[0], prime[top] = top, 0
    for part, m in zip(parts, index_maps):
        p = part.poset
        for x in range(part.n):
            if x in (part.bottom, part.top):
                continue
            up[m[x]] = sum(1 << m[y] for y in bits(p.up[x]))
            prime[m[x]] = m[part.prime.map[x]]
    poset = Poset.from_up(up, 0, top, labels, check=False)
    return HorizontalSum(OrthoPoset(poset, prime, validate=False), tuple(block_of))


def horizontal_components(op: OrthoPoset):
    """Interior masks of the finest horizontal decomposition.

    Two interior elements share a component when they are comparable or
    partners under '; components are returned in order of their least index.
    """
    p, pm = op.poset, op.prime.map
    interior = p.full & ~(1 << p.bottom) & ~(1 << p.top)
    seen = 0
    comps = []
    for start in bits(interior):
        if seen >> start & 1:
            continue
        comp = 0
        stack = [start]
        while stack:
            x = stack.pop()
            if comp >> x & 1:
                continue
            comp |= 1 << x
            nbrs = ((p.up[x] | p.down[x]) & interior) | (1 << pm[x])
            stack.extend(bits(nbrs & ~comp))
        seen |= comp
        comps.append(comp)
    return comps


def induced(op: OrthoPoset, mask: int) -> OrthoPoset:
    """Sub-structure on ``mask``, which must be closed under ' and hold the bounds."""
    p, pm = op.poset, op.prime.map
    keep = list(bits(mask))
    pos = {x: i for i, x in enumerate(keep)}
    up = [sum(1 << pos[y] for y in bits(p.up[x] & mask)) for x in keep]
    q = Poset.from_up(up, pos[p.bottom], pos[p.top], [p.labels[x] for x in keep], check=False)
    return OrthoPoset(q, [pos[pm[x]] for x in keep], validate=False)


def blocks_of(op: OrthoPoset):
    bounds = (1 << op.bottom) | (1 << op.top)
    return [induced(op, comp | bounds) for comp in horizontal_components(op)]


def boolean_block_report(op: OrthoPoset) -> CheckReport:
    """Is ``op`` a horizontal sum of Boolean posets?

    Boolean posets with more than two elements are horizontally
    indecomposable, so the answer is read off the finest decomposition.
    """
    witnesses = []
    for i, block in enumerate(blocks_of(op)):
        rep = is_boolean(block)
        if not rep.verdict:
            desc = rep.witnesses[0].description if rep.witnesses else "not Boolean"
            witnesses.append(Witness((i,), f"block {i + 1} ({block.n} elements) is not Boolean: {desc}"))
    return CheckReport("horizontal-sum-of-boolean", not witnesses, witnesses)


# -- generators ------------------------------------------------------------


def _from_sets(sets, labels=None):
    sets = list(sets)
    n = len(sets)
    up = [sum(1 << j for j in range(n) if sets[i] <= sets[j]) for i in range(n)]
    bottom = min(range(n), key=lambda i: len(sets[i]))
    top = max(range(n), key=lambda i: len(sets[i]))
    return Poset.from_up(up, bottom, top, labels, check=False)


def boolean_algebra(k: int) -> OrthoPoset:
    """The power set of {1..k} under inclusion and complement; {1,3} is labelled "ac"."""
    universe = frozenset(range(1, k + 1))
    sets = [frozenset(c) for r in range(k + 1) for c in combinations(sorted(universe), r)]
    # subsets are named by letters so that {1} does not clash with the top
    labels = ["0" if not s else "1" if s == universe else "".join(chr(96 + i) for i in sorted(s))
              for s in sets]
    pos = {s: i for i, s in enumerate(sets)}
    prime = [pos[universe - s] for s in sets]
    return OrthoPoset(_from_sets(sets, labels), prime)


def chain2() -> OrthoPoset:
    return boolean_algebra(1)


def mo(k: int) -> OrthoPoset:
    """Horizontal sum of k copies of the four-element Boolean algebra."""
    return horizontal_sum([boolean_algebra(2)] * k).result


def fig2_sets():
    """The sets behind ``gen_fig2`` in fixture order."""
    low = [frozenset((i, j)) for i in (1, 2, 3) for j in (4, 5, 6)]
    full = frozenset(range(1, 7))
    return [frozenset()] + low + [full - s for s in reversed(low)] + [full]


def gen_fig2() -> OrthoPoset:
    """Subsets A of {1..6} with |A & {1,2,3}| = |A & {4,5,6}|, set complement as '."""
    sets = fig2_sets()
    names = "abcdefghi"
    labels = ["0"] + list(names) + [c + "'" for c in reversed(names)] + ["1"]
    pos = {s: i for i, s in enumerate(sets)}
    full = sets[-1]
    prime = [pos[full - s] for s in sets]
    return OrthoPoset(_from_sets(sets, labels), prime)


# -- named fixtures --------------------------------------------------------


def _partner(label):
    if label == "0":
        return "1"
    if label == "1":
        return "0"
    return label[:-1] if label.endswith("'") else label + "'"


def _fixture_from_covers(labels, covers):
    labels = labels.split()
    idx = {s: i for i, s in enumerate(labels)}
    pairs = []
    for lo, his in covers.items():
        for hi in his.split():
            pairs.append((idx[lo], idx[hi]))
    coatoms = set(range(len(labels))) - {u for u, _ in pairs} - {idx["1"]}
    pairs += [(c, idx["1"]) for c in sorted(coatoms)]
    p = build_from_covers(len(labels), idx["0"], idx["1"], sorted(pairs), labels)
    prime = [idx[_partner(s)] for s in labels]
    return OrthoPoset(p, prime)


# Upper covers per element; every element without an upper cover listed
# here is covered by 1.
_FIG3 = (
    "0 a b c d e f g h h' g' f' e' d' c' b' a' 1",
    {
        "0": "a b c d e f g h",
        "a": "h' g' f' d'",
        "b": "h' g' e' c'",
        "c": "h' b'",
        "d": "h' a'",
        "e": "g' b'",
        "f": "g' a'",
        "g": "f' e' b' a'",
        "h": "d' c' b' a'",
    },
)

_FIG5 = (
    "0 a b g h h' g' b' a' 1",
    {"0": "a b g h", "a": "h' g'", "b": "h' g'", "g": "b' a'", "h": "b' a'"},
)

_FIG6 = (
    "0 a b c d d' c' b' a' 1",
    {
        "0": "a b c d",
        "a": "d' c' b'",
        "b": "d' c' a'",
        "c": "d' b' a'",
        "d": "c' b' a'",
    },
)

_FIG7 = ("0 a b b' a' 1", {"0": "a b", "a": "b'", "b": "a'"})

# fig1 contains the chains a < e < d' and d < e' < a'.
_FIG1 = (
    "0 a b c d e e' d' c' b' a' 1",
    {
        "0": "a b c d",
        "a": "e b'",
        "b": "e a'",
        "c": "d' e'",
        "d": "e' c'",
        "e": "d' c'",
        "e'": "b' a'",
    },
)

_BUILDERS = {
    "fig1": lambda: _fixture_from_covers(*_FIG1),
    "fig2": gen_fig2,
    "fig3": lambda: _fixture_from_covers(*_FIG3),
    "fig5": lambda: _fixture_from_covers(*_FIG5),
    "fig6": lambda: _fixture_from_covers(*_FIG6),
    "fig7_o6": lambda: _fixture_from_covers(*_FIG7),
}

FIXTURES = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def fixture(name: str) -> OrthoPoset:
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise UnknownFixtureError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
    return build()
