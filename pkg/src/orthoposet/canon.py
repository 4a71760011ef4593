"""Canonical labeling of bounded posets, optionally with an involution.

Individualise-and-refine search: colours start from (bound flag, height,
down-degree, up-degree, involution orbit size) and are refined by counting
colours among strict up- and down-neighbours plus the partner's colour.
Leaves are compared by their relabelled up-rows; the maximum wins.
Automorphisms found at equal leaves prune sibling branches.
"""

from __future__ import annotations

from .poset import bits, popcount


def _heights(n, down):
    order = sorted(range(n), key=lambda x: popcount(down[x]))
    h = [0] * n
    for x in order:
        below = down[x] & ~(1 << x)
        h[x] = max((h[y] + 1 for y in bits(below)), default=0)
    return h


def _rank(keys):
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys], len(table)


class _Labeler:
    def __init__(self, up, bottom, top, inv):
        n = len(up)
        self.n = n
        self.up = up
        self.inv = inv
        down = [0] * n
        for x in range(n):
            for y in bits(up[x]):
                down[y] |= 1 << x
        self.down = down
        self.ups = [tuple(bits(up[x] & ~(1 << x))) for x in range(n)]
        self.downs = [tuple(bits(down[x] & ~(1 << x))) for x in range(n)]
        h = _heights(n, down)
        keys = []
        for x in range(n):
            flag = 0 if x == bottom else 2 if x == top else 1
            orbit = 0 if inv is None else (1 if inv[x] == x else 2)
            keys.append((flag, h[x], len(self.downs[x]), len(self.ups[x]), orbit))
        self.start, _ = _rank(keys)
        self.best = None
        self.best_perm = None
        self.first = None
        self.first_perm = None
        self.gens = []

    def refine(self, colors):
        n = self.n
        inv = self.inv
        ups, downs = self.ups, self.downs
        k = max(colors) + 1
        while True:
            sigs = []
            for x in range(n):
                cu = [0] * k
                for y in ups[x]:
                    cu[colors[y]] += 1
                cd = [0] * k
                for y in downs[x]:
                    cd[colors[y]] += 1
                sigs.append((colors[x], tuple(cu), tuple(cd),
                             colors[inv[x]] if inv is not None else 0))
            new, k2 = _rank(sigs)
            if k2 == k:
                return colors
            colors, k = new, k2

    def encode(self, perm):
        n = self.n
        rows = [0] * n
        for x in range(n):
            r = 0
            for y in bits(self.up[x]):
                r |= 1 << perm[y]
            rows[perm[x]] = r
        if self.inv is None:
            return tuple(rows)
        iv = [0] * n
        for x in range(n):
            iv[perm[x]] = perm[self.inv[x]]
        return tuple(rows) + tuple(iv)

    def _orbit_roots(self, fixed):
        n = self.n
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in self.gens:
            if any(g[v] != v for v in fixed):
                continue
            for a in range(n):
                ra, rb = find(a), find(g[a])
                if ra != rb:
                    parent[ra] = rb
        return find

    def _record(self, ref_perm, perm):
        # automorphism x -> ref^-1(perm(x))
        n = self.n
        inv_ref = [0] * n
        for x, pos in enumerate(ref_perm):
            inv_ref[pos] = x
        g = [inv_ref[perm[x]] for x in range(n)]
        if any(g[x] != x for x in range(n)):
            self.gens.append(g)

    def search(self, colors, fixed):
        n = self.n
        counts = [0] * n
        for c in colors:
            counts[c] += 1
        target = next((c for c in range(n) if counts[c] > 1), None)
        if target is None:
            perm = colors
            enc = self.encode(perm)
            if self.first is None:
                self.first, self.first_perm = enc, list(perm)
            elif enc == self.first:
                self._record(self.first_perm, perm)
            if self.best is None or enc > self.best:
                self.best = enc
                self.best_perm = list(perm)
            elif enc == self.best and self.best_perm != self.first_perm:
                self._record(self.best_perm, perm)
            return
        cell = [x for x in range(n) if colors[x] == target]
        tried = []
        for v in cell:
            if tried:
                find = self._orbit_roots(fixed)
                rv = find(v)
                if any(find(t) == rv for t in tried):
                    continue
            tried.append(v)
            child = [c + 1 if c > target else c for c in colors]
            for x in cell:
                if x != v:
                    child[x] = target + 1
            self.search(self.refine(child), fixed + (v,))


def canonical_labeling(up, bottom, top, inv=None):
    """Return ``(encoding, perm, generators)``.

    ``perm[x]`` is the canonical position of element ``x``; ``encoding`` is
    the relabelled structure (equal iff isomorphic); ``generators`` generate
    the automorphism group.
    """
    lab = _Labeler(list(up), bottom, top, None if inv is None else list(inv))
    lab.search(lab.refine(lab.start), ())
    return lab.best, lab.best_perm, lab.gens


def orbits(n, gens):
    """Partition of range(n) into orbits of the group generated by ``gens``."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for a in range(n):
            ra, rb = find(a), find(g[a])
            if ra != rb:
                parent[ra] = rb
    return [find(a) for a in range(n)]
