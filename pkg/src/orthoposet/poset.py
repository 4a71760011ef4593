"""Finite bounded posets stored as bit-mask rows of the order matrix.

Row ``up[x]`` has bit ``y`` set iff ``x <= y``; ``down[x]`` is the transpose.
Subsets of elements are plain integers (bit masks) internally and are
wrapped in :class:`Subset` at the public surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BoundsError, CycleError, OrderError


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Subset:
    """A set of element indices of one particular poset."""

    mask: int
    width: int

    def __iter__(self):
        return bits(self.mask)

    def __len__(self):
        return popcount(self.mask)

    def __contains__(self, x):
        return 0 <= x < self.width and bool(self.mask >> x & 1)

    def _same(self, other):
        if not isinstance(other, Subset):
            return NotImplemented
        if other.width != self.width:
            raise ValueError(f"subset widths differ ({self.width} vs {other.width})")
        return other

    def __or__(self, other):
        other = self._same(other)
        return Subset(self.mask | other.mask, self.width)

    def __and__(self, other):
        other = self._same(other)
        return Subset(self.mask & other.mask, self.width)

    def __le__(self, other):
        other = self._same(other)
        return self.mask & ~other.mask == 0

    def to_list(self):
        return list(bits(self.mask))


@dataclass(frozen=True)
class Witness:
    elements: tuple
    description: str


@dataclass
class CheckReport:
    """Verdict of a single property check.

    ``witnesses`` explain a failure (and may exemplify a success);
    ``details`` carries check-specific extras such as sub-verdicts.
    """

    property: str
    verdict: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.verdict and not self.witnesses:
            raise ValueError(f"failed check {self.property!r} carries no witness")

    def __bool__(self):
        return self.verdict

    def first(self):
        return self.witnesses[0].elements if self.witnesses else None

    def pairs(self):
        return [w.elements for w in self.witnesses]

    def to_dict(self, labels=None):
        def name(x):
            return labels[x] if labels is not None else x

        return {
            "property": self.property,
            "verdict": self.verdict,
            "witnesses": [
                {"elements": [name(x) for x in w.elements], "description": w.description}
                for w in self.witnesses
            ],
            "details": self.details,
        }


class Poset:
    """A finite bounded poset.

    ``leq`` is an n x n boolean matrix (any nested sequence of truthy values).
    ``bottom``/``top`` default to the least/greatest element when omitted.
    The instance is immutable after construction.
    """

    __slots__ = ("n", "up", "down", "bottom", "top", "labels", "full")

    def __init__(self, leq, bottom=None, top=None, labels=None):
        n = len(leq)
        up = []
        for x in range(n):
            row = leq[x]
            if len(row) != n:
                raise OrderError("order matrix is not square")
            up.append(sum(1 << y for y in range(n) if row[y]))
        self._setup(tuple(up), bottom, top, labels, check=True)

    @classmethod
    def from_up(cls, up, bottom, top, labels=None, check=True):
        obj = cls.__new__(cls)
        obj._setup(tuple(up), bottom, top, labels, check)
        return obj

    def _setup(self, up, bottom, top, labels, check):
        n = len(up)
        if n == 0:
            raise OrderError("a poset needs at least one element")
        down = [0] * n
        for x in range(n):
            for y in bits(up[x]):
                down[y] |= 1 << x
        self.n = n
        self.up = up
        self.down = tuple(down)
        self.full = (1 << n) - 1
        if check:
            _check_order(up, down)
        if bottom is None:
            bottom = next((x for x in range(n) if up[x] == self.full), None)
            if bottom is None:
                raise BoundsError("no least element")
        if top is None:
            top = next((x for x in range(n) if down[x] == self.full), None)
            if top is None:
                raise BoundsError("no greatest element")
        if up[bottom] != self.full:
            raise BoundsError(f"element {bottom} is not below every element")
        if down[top] != self.full:
            raise BoundsError(f"element {top} is not above every element")
        if n >= 2 and bottom == top:
            raise BoundsError("bottom and top coincide")
        self.bottom = bottom
        self.top = top
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise ValueError("need one label per element")
        if len(set(labels)) != n:
            raise ValueError("labels must be unique")
        self.labels = labels

    # -- basic access -------------------------------------------------

    def leq(self, x, y) -> bool:
        return bool(self.up[x] >> y & 1)

    def lt(self, x, y) -> bool:
        return x != y and bool(self.up[x] >> y & 1)

    def comparable(self, x, y) -> bool:
        return bool((self.up[x] | self.down[x]) >> y & 1)

    def matrix(self):
        return [[bool(self.up[x] >> y & 1) for y in range(self.n)] for x in range(self.n)]

    def index(self, label) -> int:
        if isinstance(label, int):
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labelled {label!r}") from None

    def subset(self, items=()) -> Subset:
        mask = 0
        for item in items:
            mask |= 1 << self.index(item)
        return Subset(mask, self.n)

    def names(self, mask) -> list:
        if isinstance(mask, Subset):
            mask = mask.mask
        return [self.labels[x] for x in bits(mask)]

    def fmt(self, mask) -> str:
        return "{" + ",".join(self.names(mask)) + "}"

    def covers(self):
        """Cover pairs (u, v), v covering u, in ascending index order."""
        out = []
        for u in range(self.n):
            strict = self.up[u] & ~(1 << u)
            for v in bits(strict):
                between = strict & self.down[v] & ~(1 << v)
                if not between:
                    out.append((u, v))
        return out

    def heights(self):
        """Length of the longest chain from bottom to each element."""
        order = sorted(range(self.n), key=lambda x: popcount(self.down[x]))
        h = [0] * self.n
        for x in order:
            below = self.down[x] & ~(1 << x)
            h[x] = max((h[y] + 1 for y in bits(below)), default=0)
        return h

    def relabel(self, perm, labels=None):
        """Return the isomorphic copy in which element ``x`` gets index ``perm[x]``."""
        n = self.n
        up = [0] * n
        for x in range(n):
            up[perm[x]] = sum(1 << perm[y] for y in bits(self.up[x]))
        if labels is None:
            labels = [None] * n
            for x in range(n):
                labels[perm[x]] = self.labels[x]
        return Poset.from_up(up, perm[self.bottom], perm[self.top], labels, check=False)

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return (self.up, self.bottom, self.top) == (other.up, other.bottom, other.top)

    def __hash__(self):
        return hash((self.up, self.bottom, self.top))

    def __repr__(self):
        return f"Poset(n={self.n}, covers={len(self.covers())})"

    # -- raw mask cone calculus ----------------------------------------

    def lower_mask(self, mask: int) -> int:
        r = self.full
        for x in bits(mask):
            r &= self.down[x]
        return r

    def upper_mask(self, mask: int) -> int:
        r = self.full
        for x in bits(mask):
            r &= self.up[x]
        return r

    def min_mask(self, mask: int) -> int:
        return sum(1 << x for x in bits(mask) if self.down[x] & mask == 1 << x)

    def max_mask(self, mask: int) -> int:
        return sum(1 << x for x in bits(mask) if self.up[x] & mask == 1 << x)


def _check_order(up, down):
    n = len(up)
    for x in range(n):
        if not up[x] >> x & 1:
            raise OrderError(f"relation is not reflexive at {x}")
    for x in range(n):
        both = up[x] & down[x] & ~(1 << x)
        if both:
            y = next(bits(both))
            raise CycleError(f"elements {x} and {y} are below each other")
    for x in range(n):
        reach = 0
        for y in bits(up[x]):
            reach |= up[y]
        if reach & ~up[x]:
            raise OrderError(f"relation is not transitive at {x}")


def _as_mask(p: Poset, a) -> int:
    if isinstance(a, Subset):
        if a.width != p.n:
            raise ValueError(f"subset of width {a.width} used with a poset of {p.n} elements")
        return a.mask
    if isinstance(a, int):
        return 1 << a
    return p.subset(a).mask


def build_from_covers(n: int, bottom: int, top: int, covers: Iterable, labels=None) -> Poset:
    """Reflexive-transitive closure of a Hasse diagram.

    ``covers`` lists pairs ``(u, v)`` meaning v covers u.  Raises CycleError if
    the closure is not antisymmetric and BoundsError if the named bounds are
    not least/greatest.
    """
    up = [1 << x for x in range(n)]
    for u, v in covers:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise OrderError(f"bad cover pair ({u}, {v})")
        up[u] |= 1 << v
    up = transitive_closure(up)
    for x in range(n):
        for y in bits(up[x]):
            if y != x and up[y] >> x & 1:
                raise CycleError(f"cover relation has a cycle through {x} and {y}")
    return Poset.from_up(up, bottom, top, labels, check=False)


def transitive_closure(up: Sequence[int]) -> list:
    up = list(up)
    n = len(up)
    # Warshall over bit rows
    for k in range(n):
        bk = 1 << k
        row_k = up[k]
        for i in range(n):
            if up[i] & bk:
                up[i] |= row_k
    return up


# -- public cone operators ---------------------------------------------


def lower_cone(p: Poset, a) -> Subset:
    """Elements below every member of ``a``; the empty set maps to everything."""
    return Subset(p.lower_mask(_as_mask(p, a)), p.n)


def upper_cone(p: Poset, a) -> Subset:
    return Subset(p.upper_mask(_as_mask(p, a)), p.n)


def min_elements(p: Poset, a) -> Subset:
    return Subset(p.min_mask(_as_mask(p, a)), p.n)


def max_elements(p: Poset, a) -> Subset:
    return Subset(p.max_mask(_as_mask(p, a)), p.n)


def join(p: Poset, x: int, y: int):
    """Least upper bound of x and y, or None when it does not exist."""
    m = p.min_mask(p.up[x] & p.up[y])
    return m.bit_length() - 1 if m and m & (m - 1) == 0 else None


def meet(p: Poset, x: int, y: int):
    m = p.max_mask(p.down[x] & p.down[y])
    return m.bit_length() - 1 if m and m & (m - 1) == 0 else None


def supremum(p: Poset, mask: int):
    m = p.min_mask(p.upper_mask(mask))
    return m.bit_length() - 1 if m and m & (m - 1) == 0 else None


def infimum(p: Poset, mask: int):
    m = p.max_mask(p.lower_mask(mask))
    return m.bit_length() - 1 if m and m & (m - 1) == 0 else None


# -- lattice and distributivity checks ----------------------------------


def is_lattice(p: Poset, limit=None) -> CheckReport:
    witnesses = []
    for x in range(p.n):
        for y in range(x + 1, p.n):
            if p.comparable(x, y):
                continue
            j = join(p, x, y)
            m = meet(p, x, y)
            if j is None or m is None:
                missing = " and ".join(
                    s for s, v in (("join", j), ("meet", m)) if v is None
                )
                witnesses.append(Witness(
                    (x, y),
                    f"{missing} of {p.labels[x]},{p.labels[y]} does not exist",
                ))
                if limit is not None and len(witnesses) >= limit:
                    return CheckReport("lattice", False, witnesses)
    return CheckReport("lattice", not witnesses, witnesses)


class _ConeTables:
    """Pairwise cone masks shared by the distributivity identities."""

    def __init__(self, p: Poset):
        n = p.n
        self.p = p
        self.L2 = [[p.down[x] & p.down[y] for y in range(n)] for x in range(n)]
        self.U2 = [[p.up[x] & p.up[y] for y in range(n)] for x in range(n)]
        self.LU2 = [[p.lower_mask(self.U2[x][y]) for y in range(n)] for x in range(n)]
        self.UL2 = [[p.upper_mask(self.L2[x][y]) for y in range(n)] for x in range(n)]


def _identity_sides(t: _ConeTables, which: int, x: int, y: int, z: int):
    p = t.p
    if which == 1:
        # L(U(x,y),z) = LU(L(x,z),L(y,z))
        lhs = t.LU2[x][y] & p.down[z]
        rhs = p.lower_mask(p.upper_mask(t.L2[x][z] | t.L2[y][z]))
    elif which == 2:
        # UL(U(x,y),z) = U(L(x,z),L(y,z))
        lhs = p.upper_mask(t.LU2[x][y] & p.down[z])
        rhs = p.upper_mask(t.L2[x][z] | t.L2[y][z])
    elif which == 3:
        # U(L(x,y),z) = UL(U(x,z),U(y,z))
        lhs = t.UL2[x][y] & p.up[z]
        rhs = p.upper_mask(p.lower_mask(t.U2[x][z] | t.U2[y][z]))
    else:
        # LU(L(x,y),z) = L(U(x,z),U(y,z))
        lhs = p.lower_mask(t.UL2[x][y] & p.up[z])
        rhs = p.lower_mask(t.U2[x][z] | t.U2[y][z])
    return lhs, rhs


IDENTITY_TEXT = {
    1: "L(U(x,y),z) = LU(L(x,z),L(y,z))",
    2: "UL(U(x,y),z) = U(L(x,z),L(y,z))",
    3: "U(L(x,y),z) = UL(U(x,z),U(y,z))",
    4: "LU(L(x,y),z) = L(U(x,z),U(y,z))",
}


def _first_identity_failure(t, which):
    n = t.p.n
    for x in range(n):
        for y in range(n):
            for z in range(n):
                lhs, rhs = _identity_sides(t, which, x, y, z)
                if lhs != rhs:
                    return (x, y, z), lhs, rhs
    return None


def is_distributive(p: Poset, tables=None) -> CheckReport:
    t = tables or _ConeTables(p)
    bad = _first_identity_failure(t, 1)
    if bad is None:
        return CheckReport("distributive", True)
    (x, y, z), lhs, rhs = bad
    lab = p.labels
    return CheckReport("distributive", False, [Witness(
        (x, y, z),
        f"x={lab[x]}, y={lab[y]}, z={lab[z]}: L(U(x,y),z)={p.fmt(lhs)} "
        f"but LU(L(x,z),L(y,z))={p.fmt(rhs)}",
    )])


def check_distributivity_variants(p: Poset) -> CheckReport:
    """Evaluate the four cone forms of distributivity independently.

    The report verdict is true iff all four identities hold; ``details``
    records each verdict and whether they agree.
    """
    t = _ConeTables(p)
    verdicts = {}
    witnesses = []
    for which in (1, 2, 3, 4):
        bad = _first_identity_failure(t, which)
        verdicts[which] = bad is None
        if bad is not None:
            (x, y, z), lhs, rhs = bad
            witnesses.append(Witness(
                (x, y, z),
                f"{IDENTITY_TEXT[which]} fails: {p.fmt(lhs)} != {p.fmt(rhs)}",
            ))
    agree = len(set(verdicts.values())) == 1
    if not agree:
        witnesses.append(Witness((), f"identities disagree: {verdicts}"))
    return CheckReport(
        "distributivity-variants",
        all(verdicts.values()),
        witnesses,
        {"identities": {IDENTITY_TEXT[k]: v for k, v in verdicts.items()}, "agree": agree},
    )


def is_distributive_lattice_law(p: Poset):
    """(x v y) ^ z == (x ^ z) v (y ^ z) for all triples; None if p is no lattice."""
    n = p.n
    J = [[join(p, x, y) for y in range(n)] for x in range(n)]
    M = [[meet(p, x, y) for y in range(n)] for x in range(n)]
    if any(v is None for row in J for v in row) or any(v is None for row in M for v in row):
        return None
    return all(
        M[J[x][y]][z] == J[M[x][z]][M[y][z]]
        for x in range(n) for y in range(n) for z in range(n)
    )


def canonical_form(p: Poset, inv=None) -> bytes:
    """Isomorphism-invariant byte string of a bounded (involutive) poset."""
    from .canon import canonical_labeling

    if inv is not None and hasattr(inv, "map"):
        inv = inv.map
    enc, _, _ = canonical_labeling(p.up, p.bottom, p.top, inv)
    return encode_form(p.n, enc, inv is not None)


def encode_form(n, enc, with_inv) -> bytes:
    width = (n + 7) // 8
    out = bytearray([n & 0xFF, n >> 8, 1 if with_inv else 0])
    rows = enc[:n]
    for r in rows:
        out += r.to_bytes(width, "big")
    if with_inv:
        for v in enc[n:]:
            out += v.to_bytes(2, "big")
    return bytes(out)
