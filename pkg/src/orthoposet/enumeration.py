"""Canonical enumeration of bounded involutive posets.

Structures grow one involution orbit at a time: a pair {u, u'} or, outside
the complemented universe, a fixed point u = u'.  A child is kept only when
the orbit just added is equivalent, under the child's automorphism group, to
the orbit a fixed deletion rule would remove (canonical augmentation), so
each isomorphism class is produced exactly once.

Internal labels: bottom is 0, top is 1, later orbits are appended.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing import get_context

from .canon import canonical_labeling, orbits
from .errors import FeasibilityError
from .ortho import OrthoPoset, check_gom, is_boolean, is_complementation, is_orthogonal_poset, om_holds
from .poset import Poset, bits, encode_form, is_distributive, is_lattice, popcount

DEFAULT_FEASIBILITY_LIMIT = 12
LIMIT_ENV = "ORTHOPOSET_FEASIBILITY_LIMIT"

FILTERS = ("ortho", "omp", "gom", "boolean", "orthogonal", "om", "lattice", "non-lattice", "distributive")
# filters whose members are complemented, so the search may stay in that universe
_COMPLEMENTED = {"ortho", "omp", "gom", "boolean"}


def feasibility_limit():
    raw = os.environ.get(LIMIT_ENV)
    if raw is None:
        return DEFAULT_FEASIBILITY_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise FeasibilityError(f"{LIMIT_ENV} must be an integer, got {raw!r}") from None


@dataclass
class EnumJob:
    max_n: int
    filters: tuple = ()
    mode: str = "exhaustive"
    jobs: int = 1
    order: str = "forward"
    keep: bool = False
    checkpoint: str | None = None
    limit: int | None = None

    def __post_init__(self):
        self.filters = tuple(self.filters)
        for f in self.filters:
            if f not in FILTERS:
                raise ValueError(f"unknown filter {f!r}; known: {', '.join(FILTERS)}")
        if self.mode not in ("exhaustive", "proof-guided"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.order not in ("forward", "reverse"):
            raise ValueError(f"unknown extension order {self.order!r}")
        if self.max_n < 2:
            raise ValueError("max_n must be at least 2")
        if self.complemented and self.max_n % 2:
            raise ValueError("complemented structures have even size; use an even max_n")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    @property
    def complemented(self):
        return any(f in _COMPLEMENTED for f in self.filters)


@dataclass
class EnumResult:
    counts_by_size: dict
    representatives: list = field(default_factory=list)
    certificate: list = field(default_factory=list)
    visited_by_size: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "counts_by_size": {str(k): v for k, v in sorted(self.counts_by_size.items())},
            "visited_by_size": {str(k): v for k, v in sorted(self.visited_by_size.items())},
            "representatives": [form.hex() for form, _ in self.representatives],
            "certificate": list(self.certificate),
        }


# -- structures -------------------------------------------------------------


def _seed():
    return (0b11, 0b10), (1, 0)


def to_orthoposet(up, inv) -> OrthoPoset:
    p = Poset.from_up(up, 0, 1, check=False)
    return OrthoPoset(p, inv, validate=False)


def _passes(op, filters):
    cache = {}

    def lattice():
        if "lattice" not in cache:
            cache["lattice"] = is_lattice(op.poset, limit=1).verdict
        return cache["lattice"]

    def orthogonal():
        if "orthogonal" not in cache:
            cache["orthogonal"] = is_orthogonal_poset(op, limit=1).verdict
        return cache["orthogonal"]

    for f in filters:
        if f == "ortho":
            ok = is_complementation(op)
        elif f == "omp":
            ok = is_complementation(op) and orthogonal() and om_holds(op)
        elif f == "gom":
            ok = is_complementation(op) and check_gom(op, limit=1).verdict
        elif f == "boolean":
            ok = is_boolean(op).verdict
        elif f == "orthogonal":
            ok = orthogonal()
        elif f == "om":
            ok = om_holds(op)
        elif f == "lattice":
            ok = lattice()
        elif f == "non-lattice":
            ok = not lattice()
        else:
            ok = is_distributive(op.poset).verdict
        if not ok:
            return False
    return True


def _ideals(up, down, inv):
    """Down-sets containing 0 but not 1, each with its image under '."""
    n = len(up)
    out = []
    # grow down-sets by adding a minimal element of the complement
    stack = [1]
    seen = {1}
    while stack:
        d = stack.pop()
        img = 0
        for x in bits(d):
            img |= 1 << inv[x]
        out.append((d, img))
        for x in range(2, n):
            if d >> x & 1:
                continue
            if down[x] & ~(1 << x) & ~d:
                continue
            nd = d | 1 << x
            if nd not in seen:
                seen.add(nd)
                stack.append(nd)
    out.sort()
    return out


def _lower_of(down, mask, full):
    r = full
    for x in bits(mask):
        r &= down[x]
    return r


def _children(up, inv, complemented):
    """Yield ``(child_up, child_inv, new_orbit)`` for every admissible orbit.

    With ``complemented`` only incomparable pairs with disjoint interiors
    below them are produced, which keeps x' a complement of x.
    """
    n = len(up)
    full = (1 << n) - 1
    down = [0] * n
    for x in range(n):
        for y in bits(up[x]):
            down[y] |= 1 << x
    ideals = _ideals(up, down, inv)
    # an orbit element below D and above D' at once would close a cycle
    clean = [(d, img) for d, img in ideals if not d & img]
    u, v = n, n + 1
    for i, (d, d_img) in enumerate(clean):
        # perp(D): elements e with d <= e' for every d in D
        perp = _lower_of(down, d_img, full)
        for e, e_img in clean[i:]:
            if e & ~perp or d & e_img:
                continue
            if complemented and d & e != 1:
                continue
            # u below D-ideal complement; u' sits over E with up-set D'
            yield _attach_pair(up, inv, d, e, d_img, e_img, u, v), (u, v)
        if complemented:
            continue
        # fixed point u = u' over D
        if not d & ~perp:
            yield _attach_fixed(up, inv, d, d_img, u), (u, u)
        # u < u' with D inside E
        for e, e_img in ideals:
            if d & ~e or e & ~perp or d & e_img:
                continue
            yield _attach_chain(up, inv, d, e, d_img, e_img, u, v), (u, v)


def _attach_pair(up, inv, d, e, d_img, e_img, u, v):
    new = list(up)
    for x in bits(d):
        new[x] |= 1 << u
    for x in bits(e):
        new[x] |= 1 << v
    new.append(e_img | 1 << u)
    new.append(d_img | 1 << v)
    return tuple(new), tuple(inv) + (v, u)


def _attach_chain(up, inv, d, e, d_img, e_img, u, v):
    new = list(up)
    for x in bits(d):
        new[x] |= 1 << u | 1 << v
    for x in bits(e & ~d):
        new[x] |= 1 << v
    new.append(e_img | 1 << u | 1 << v)
    new.append(d_img | 1 << v)
    return tuple(new), tuple(inv) + (v, u)


def _attach_fixed(up, inv, d, d_img, u):
    new = list(up)
    for x in bits(d):
        new[x] |= 1 << u
    new.append(d_img | 1 << u)
    return tuple(new), tuple(inv) + (u,)


# -- canonical augmentation -----------------------------------------------


def _orbit_key(up, down, inv, x):
    """Isomorphism-invariant score of the orbit {x, x'}."""
    y = inv[x]
    a = (popcount(down[x]), popcount(up[x]))
    b = (popcount(down[y]), popcount(up[y]))
    return (x == y, up[x] >> y & 1 or up[y] >> x & 1) + tuple(sorted((a, b)))


def _accept(up, inv, new, order):
    """Is ``new`` the orbit the deletion rule removes from this child?"""
    n = len(up)
    down = [0] * n
    for x in range(n):
        for y in bits(up[x]):
            down[y] |= 1 << x
    keys = [None, None] + [_orbit_key(up, down, inv, x) for x in range(2, n)]
    pick = max if order == "forward" else min
    best = pick(keys[2:])
    if keys[new[0]] != best:
        return None
    enc, perm, gens = canonical_labeling(up, 0, 1, inv)
    tied = [x for x in range(2, n) if keys[x] == best]
    if len(tied) > 2 or (len(tied) == 2 and inv[tied[0]] != tied[1]):
        target = max(tied, key=lambda x: perm[x]) if order == "forward" else \
            min(tied, key=lambda x: perm[x])
        orb = orbits(n, gens)
        if orb[target] not in (orb[new[0]], orb[new[1]]):
            return None
    return encode_form(n, enc, True)


class _Walker:
    def __init__(self, job):
        self.job = job
        self.max_n = job.max_n
        self.complemented = job.complemented
        self.filters = job.filters
        self.counts = Counter()
        self.visited = Counter()
        self.reps = []

    def visit(self, up, inv, form):
        n = len(up)
        self.visited[n] += 1
        op = to_orthoposet(up, inv)
        if _passes(op, self.filters):
            self.counts[n] += 1
            if self.job.keep or self.job.checkpoint:
                self.reps.append((form, op))

    def expand(self, up, inv):
        n = len(up)
        seen = set()
        out = []
        step = 2 if self.complemented else 1
        if n + step > self.max_n:
            return out
        kids = list(_children(up, inv, self.complemented))
        if self.job.order == "reverse":
            kids.reverse()
        for (cup, cinv), new in kids:
            if len(cup) > self.max_n:
                continue
            form = _accept(cup, cinv, new, self.job.order)
            if form is None or form in seen:
                continue
            seen.add(form)
            out.append((cup, cinv, form))
        return out

    def walk(self, up, inv, form):
        self.visit(up, inv, form)
        for cup, cinv, cform in self.expand(up, inv):
            self.walk(cup, cinv, cform)


def _seed_form():
    up, inv = _seed()
    enc, _, _ = canonical_labeling(up, 0, 1, inv)
    return encode_form(2, enc, True)


def _run_subtrees(args):
    job, roots = args
    w = _Walker(job)
    for root in roots:
        w.walk(*root)
    return w.counts, w.visited, w.reps


def _frontier(job, w, depth_n):
    """Visit all nodes below ``depth_n`` elements; return those of that size."""
    up, inv = _seed()
    layer = [(up, inv, _seed_form())]
    frontier = []
    while layer:
        nxt = []
        for up, inv, form in layer:
            if len(up) >= depth_n:
                frontier.append((up, inv, form))
                continue
            w.visit(up, inv, form)
            nxt.extend(w.expand(up, inv))
        layer = nxt
    return frontier


def enumerate_job(job: EnumJob) -> EnumResult:
    """Count, per size, the isomorphism classes passing ``job.filters``.

    Sizes run from 2 to ``job.max_n``.  The universe is bounded posets with an
    antitone involution; if any filter implies complementation the search is
    restricted to complemented structures, which is closed under deleting an
    orbit and therefore prunes soundly.
    """
    if job.mode == "proof-guided":
        from .uniqueness import verify_uniqueness_18

        return verify_uniqueness_18()
    limit = job.limit if job.limit is not None else feasibility_limit()
    if job.max_n > limit:
        raise FeasibilityError(
            f"exhaustive enumeration to {job.max_n} elements exceeds the limit of {limit} "
            f"(set {LIMIT_ENV} to raise it)")
    w = _Walker(job)
    if job.jobs == 1:
        up, inv = _seed()
        w.walk(up, inv, _seed_form())
        counts, visited, reps = w.counts, w.visited, w.reps
    else:
        depth = min(job.max_n, 6 if job.complemented else 5)
        roots = _frontier(job, w, depth)
        chunks = [roots[i::job.jobs] for i in range(job.jobs)]
        counts, visited, reps = Counter(w.counts), Counter(w.visited), list(w.reps)
        with get_context("spawn").Pool(job.jobs) as pool:
            for c, v, r in pool.map(_run_subtrees, [(job, ch) for ch in chunks if ch]):
                counts.update(c)
                visited.update(v)
                reps.extend(r)
    reps.sort(key=lambda fr: (len(fr[0]), fr[0]))
    sizes = range(2, job.max_n + 1, 2 if job.complemented else 1)
    result = EnumResult(
        {k: counts.get(k, 0) for k in sizes},
        reps if job.keep else [],
        visited_by_size={k: visited.get(k, 0) for k in sizes},
    )
    if job.checkpoint:
        write_checkpoint(job.checkpoint, [form for form, _ in reps])
    return result


def write_checkpoint(path, forms):
    with open(path, "w", encoding="ascii") as fh:
        for line in sorted(f.hex() for f in forms):
            fh.write(line + "\n")


def read_checkpoint(path):
    with open(path, encoding="ascii") as fh:
        return [bytes.fromhex(line.strip()) for line in fh if line.strip()]


def verify_minimality(n_max: int, jobs=1, order="forward", limit=None) -> EnumResult:
    """Every orthomodular poset with at most ``n_max`` elements is a lattice.

    The certificate lists, per size, the number of orthomodular posets and
    how many of them are not lattices (expected: none).
    """
    omp = enumerate_job(EnumJob(n_max, ("omp",), jobs=jobs, order=order, limit=limit, keep=True))
    bad = Counter()
    witnesses = []
    for form, op in omp.representatives:
        if not is_lattice(op.poset, limit=1).verdict:
            bad[op.n] += 1
            witnesses.append(form.hex())
    cert = [
        {"size": k, "omp": omp.counts_by_size[k], "non_lattice": bad[k]}
        for k in sorted(omp.counts_by_size)
    ]
    cert.append({"non_lattice_total": sum(bad.values()), "witnesses": witnesses,
                 "order": order, "jobs": jobs})
    return EnumResult(omp.counts_by_size, [], cert, omp.visited_by_size)
