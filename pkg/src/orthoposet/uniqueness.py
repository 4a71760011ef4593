"""Certificate that the 18-element non-lattice orthomodular poset is unique.

Three stages:

1. the ``fig3`` fixture is an 18-element orthomodular poset that is not a
   lattice;
2. starting from two elements a, b without a join and two minimal upper
   bounds g', h' of them, the meets c = h'^b', d = h'^a', e = g'^b',
   f = g'^a' differ from each other, from their partners and from the ten
   starting elements.  Each equality is assumed in turn and a small
   forward-chaining reasoner derives a contradiction;
3. every comparability that can be added to fig3 (closed under ' and
   transitivity) breaks antisymmetry, complementation or orthomodularity.
"""

from __future__ import annotations

from itertools import combinations

from .constructs import fixture
from .enumeration import EnumResult
from .ortho import OrthoPoset, check_om, is_orthogonal_poset, validate_orthoposet
from .poset import Poset, bits, is_lattice, transitive_closure

BASE = ("0", "a", "b", "g", "h", "h'", "g'", "b'", "a'", "1")
DERIVED = ("c", "d", "e", "f")


def _prime(x):
    if x in ("0", "1"):
        return "1" if x == "0" else "0"
    return x[:-1] if x.endswith("'") else x + "'"


class Contradiction(Exception):
    pass


class Reasoner:
    """Forward chaining over named elements of an orthomodular poset.

    Facts are order relations, equalities (union-find), and named meets and
    joins.  Rules: reflexivity, transitivity, antisymmetry, antitonicity of
    ', bounds, the defining properties of meets and joins, De Morgan,
    x <= y, x <= y' => x = 0, and orthomodularity x <= y => y = x v (y ^ x')
    whenever the meet is named.
    """

    def __init__(self, names, distinct=(), joinless=()):
        self.names = list(names)
        self.idx = {s: i for i, s in enumerate(self.names)}
        n = len(self.names)
        self.parent = list(range(n))
        self.leq = [1 << i for i in range(n)]
        self.meets = set()
        self.joins = set()
        self.distinct = {frozenset((self.idx[x], self.idx[y])) for x, y in distinct}
        self.joinless = [(self.idx[x], self.idx[y]) for x, y in joinless]
        self.log = []
        bot, top = self.idx["0"], self.idx["1"]
        for i in range(n):
            self.add_leq(bot, i)
            self.add_leq(i, top)

    def p(self, i):
        return self.idx[_prime(self.names[i])]

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def add_leq(self, i, j):
        self.leq[i] |= 1 << j

    def le(self, i, j):
        ri, rj = self.find(i), self.find(j)
        return any(self.leq[k] >> m & 1 for k in self._members(ri) for m in self._members(rj))

    def _members(self, r):
        return [k for k in range(len(self.names)) if self.find(k) == r]

    def merge(self, i, j, why):
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        self.parent[ri] = rj
        self.log.append(f"{self.names[i]} = {self.names[j]} ({why})")
        return True

    def meet(self, x, y, z):
        self.meets.add((self.idx[x], self.idx[y], self.idx[z]))

    def join(self, x, y, z):
        self.joins.add((self.idx[x], self.idx[y], self.idx[z]))

    def _classes(self):
        n = len(self.names)
        roots = sorted({self.find(i) for i in range(n)})
        pos = {r: k for k, r in enumerate(roots)}
        up = [1 << k for k in range(len(roots))]
        for i in range(n):
            for j in bits(self.leq[i]):
                up[pos[self.find(i)]] |= 1 << pos[self.find(j)]
        return roots, pos, transitive_closure(up)

    def _check(self):
        for pair in self.distinct:
            i, j = tuple(pair)
            if self.find(i) == self.find(j):
                raise Contradiction(f"{self.names[i]} = {self.names[j]} although they are distinct")
        for i, j in self.joinless:
            nm = self.names
            if self.le(i, j) or self.le(j, i):
                raise Contradiction(f"{nm[i]} and {nm[j]} become comparable, so {nm[i]} v {nm[j]} would exist")
            if self.le(i, self.p(j)):
                raise Contradiction(
                    f"{nm[i]} <= {_prime(nm[j])}, so the orthogonal join {nm[i]} v {nm[j]} would exist")

    def saturate(self, limit=200):
        n = len(self.names)
        for _ in range(limit):
            changed = False
            roots, pos, up = self._classes()
            cls = [pos[self.find(i)] for i in range(n)]

            def le(i, j):
                return up[cls[i]] >> cls[j] & 1

            # transitive closure back onto representatives
            for i in range(n):
                for j in range(n):
                    if le(i, j) and not self.leq[i] >> j & 1:
                        self.leq[i] |= 1 << j
                        changed = True
            for i in range(n):
                for j in bits(self.leq[i]):
                    pi, pj = self.p(i), self.p(j)
                    if not self.leq[pj] >> pi & 1:
                        self.leq[pj] |= 1 << pi
                        changed = True
                    if i != j and le(j, i):
                        changed |= self.merge(i, j, f"{self.names[i]} <= {self.names[j]} <= {self.names[i]}")
            for i in range(n):
                for j in range(n):
                    if self.find(i) == self.find(j):
                        pi, pj = self.p(i), self.p(j)
                        changed |= self.merge(pi, pj, f"partners of {self.names[i]} = {self.names[j]}")
            bot, top = self.idx["0"], self.idx["1"]
            for i in range(n):
                for j in range(n):
                    if le(i, j) and le(i, self.p(j)):
                        changed |= self.merge(i, bot, f"{self.names[i]} <= {self.names[j]}, {_prime(self.names[j])}")
                    if le(j, i) and le(self.p(j), i):
                        changed |= self.merge(i, top, f"{self.names[j]}, {_prime(self.names[j])} <= {self.names[i]}")
            for x, y, z in list(self.meets):
                new = {(self.p(x), self.p(y), self.p(z))}
                for a, b in ((x, y), (y, x)):
                    # orthomodularity: b' <= a gives a = b' v (a ^ b)
                    if le(self.p(b), a):
                        new_join = (self.p(b), z, a)
                        if new_join not in self.joins:
                            self.joins.add(new_join)
                            changed = True
                for j in new:
                    if j not in self.joins:
                        self.joins.add(j)
                        changed = True
                for k in (x, y):
                    if not le(z, k):
                        self.leq[z] |= 1 << k
                        changed = True
                for w in range(n):
                    if le(w, x) and le(w, y) and not le(w, z):
                        self.leq[w] |= 1 << z
                        changed = True
            for x, y, z in list(self.joins):
                m = (self.p(x), self.p(y), self.p(z))
                if m not in self.meets:
                    self.meets.add(m)
                    changed = True
                for k in (x, y):
                    if not le(k, z):
                        self.leq[k] |= 1 << z
                        changed = True
                for w in range(n):
                    if le(x, w) and le(y, w) and not le(z, w):
                        self.leq[z] |= 1 << w
                        changed = True
            self._check()
            if not changed:
                return
        raise RuntimeError("reasoner did not reach a fixed point")


def _reasoner(distinct):
    r = Reasoner(BASE + DERIVED + tuple(x + "'" for x in DERIVED), distinct,
                 joinless=[("a", "b"), ("g", "h")])
    # the configuration of two joinless pairs sharing minimal upper bounds
    for lo in ("a", "b"):
        for hi in ("h'", "g'"):
            r.add_leq(r.idx[lo], r.idx[hi])
    for lo in ("g", "h"):
        for hi in ("b'", "a'"):
            r.add_leq(r.idx[lo], r.idx[hi])
    r.meet("h'", "b'", "c")
    r.meet("h'", "a'", "d")
    r.meet("g'", "b'", "e")
    r.meet("g'", "a'", "f")
    return r


def _stage_cases():
    primes = tuple(x + "'" for x in DERIVED)
    base_pairs = list(combinations(BASE, 2))
    new_vs_base = [(x, y) for x in DERIVED + primes for y in BASE]
    stages = [
        (1, base_pairs, [(x, y) for x in DERIVED for y in BASE]),
        (2, base_pairs + new_vs_base, [(x, y) for x in DERIVED for y in primes]),
        (3, base_pairs + new_vs_base + [(x, y) for x in DERIVED for y in primes],
         list(combinations(DERIVED, 2))),
    ]
    return stages


def distinctness_cases():
    """Replay of every equality the distinctness argument rules out.

    Returns a list of dicts with ``stage``, ``hypothesis``, ``refuted`` and
    ``reason``.
    """
    out = []
    for stage, distinct, cases in _stage_cases():
        for x, y in cases:
            r = _reasoner(distinct)
            r.merge(r.idx[x], r.idx[y], "hypothesis")
            try:
                r.saturate()
            except Contradiction as exc:
                out.append({"stage": stage, "hypothesis": f"{x} = {y}", "refuted": True, "reason": str(exc)})
            else:
                out.append({"stage": stage, "hypothesis": f"{x} = {y}", "refuted": False,
                            "reason": "no contradiction derived"})
    return out


def reasoner_is_sound():
    """Without a hypothesis the reasoner derives nothing false in fig3."""
    _, distinct, _ = _stage_cases()[-1]
    r = _reasoner(distinct)
    r.saturate()
    op = fixture("fig3")
    p = op.poset
    for i, name in enumerate(r.names):
        for j in bits(r.leq[i]):
            if not p.leq(p.index(name), p.index(r.names[j])):
                return False
    return all(r.find(i) == i for i in range(len(r.names)))


# -- stage 3: adding comparabilities -----------------------------------------


def incomparable_classes(op: OrthoPoset):
    """Ordered incomparable pairs (x, y), one per class {(x,y), (y',x')}."""
    p, pm = op.poset, op.prime.map
    seen = set()
    out = []
    for x in range(p.n):
        for y in range(p.n):
            if x == y or p.comparable(x, y):
                continue
            key = min((x, y), (pm[y], pm[x]))
            if key in seen:
                continue
            seen.add(key)
            out.append(key)
    return sorted(out)


def _extend(op: OrthoPoset, pairs):
    p, pm = op.poset, op.prime.map
    up = list(p.up)
    for x, y in pairs:
        up[x] |= 1 << y
        up[pm[y]] |= 1 << pm[x]
    up = transitive_closure(up)
    for x in range(p.n):
        for y in bits(up[x]):
            if x != y and up[y] >> x & 1:
                return None, (x, y)
    q = Poset.from_up(up, p.bottom, p.top, p.labels, check=False)
    return OrthoPoset(q, op.prime, validate=False), None


def extension_report(op: OrthoPoset, x: int, y: int):
    lab = op.labels
    ext, cycle = _extend(op, [(x, y)])
    entry = {"pair": [lab[x], lab[y]], "dual": [lab[op.prime.map[y]], lab[op.prime.map[x]]]}
    if ext is None:
        a, b = cycle
        entry.update(survives=False, violated="antisymmetry",
                     witnesses=[f"{lab[a]} <= {lab[b]} <= {lab[a]}"])
        return entry
    valid = validate_orthoposet(ext.poset, ext.prime)
    if not valid.verdict:
        entry.update(survives=False, violated="orthoposet",
                     witnesses=[w.description for w in valid.witnesses])
        return entry
    om = check_om(ext)
    if not om.verdict:
        entry.update(survives=False, violated="om", witnesses=[w.description for w in om.witnesses])
        return entry
    orth = is_orthogonal_poset(ext)
    entry.update(survives=orth.verdict, violated=None if orth.verdict else "orthogonal",
                 witnesses=[w.description for w in orth.witnesses])
    return entry


# added pair, then the comparison x <= y at which x v (y ^ x') = y breaks
NAMED_CASES = (
    (("a", "b'"), ("a", "h'")),
    (("c", "g'"), ("c", "g'")),
    (("d", "b"), ("a", "h'")),
    (("b", "d"), ("b", "h'")),
)


def verify_uniqueness_18() -> EnumResult:
    """Certificate for the three stages; ``counts_by_size[18]`` is 1 iff all pass."""
    op = fixture("fig3")
    p = op.poset
    cert = []
    # stage 1
    lat = is_lattice(p)
    om = check_om(op)
    orth = is_orthogonal_poset(op)
    valid = validate_orthoposet(p, op.prime)
    cert.append({
        "stage": "fixture", "size": p.n, "valid": valid.verdict, "orthogonal": orth.verdict,
        "om": om.verdict, "lattice": lat.verdict,
        "lattice_witness": [p.labels[i] for i in lat.witnesses[0].elements] if lat.witnesses else None,
        "ok": p.n == 18 and valid.verdict and orth.verdict and om.verdict and not lat.verdict,
    })
    # stage 2
    cases = distinctness_cases()
    sound = reasoner_is_sound()
    cert.append({"stage": "distinctness", "cases": cases, "reasoner_sound_on_fig3": sound,
                 "ok": sound and all(c["refuted"] for c in cases)})
    # stage 3
    classes = incomparable_classes(op)
    reports = [extension_report(op, x, y) for x, y in classes]
    ordered = sum(1 for x in range(p.n) for y in range(p.n) if x != y and not p.comparable(x, y))
    self_dual = sum(1 for x in range(p.n) for y in range(p.n)
                    if x != y and not p.comparable(x, y) and (x, y) == (op.prime.map[y], op.prime.map[x]))
    expected = (ordered - self_dual) // 2 + self_dual
    named = {}
    for (x, y), (lo, hi) in NAMED_CASES:
        r = extension_report(op, p.index(x), p.index(y))
        r["key_witness"] = next((w for w in r["witnesses"] if w.startswith(f"{lo} <= {hi}:")), None)
        named[f"{x} <= {y}"] = r
    survivors = [r for r in reports if r["survives"]]
    cert.append({
        "stage": "extensions", "examined": len(reports), "expected": expected,
        "incomparable_ordered_pairs": ordered, "self_dual": self_dual,
        "survivors": len(survivors), "named": named, "reports": reports,
        "ok": len(reports) == expected and not survivors,
    })
    return EnumResult({18: 1 if all(c["ok"] for c in cert) else 0}, [], cert)
