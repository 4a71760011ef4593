"""Involutions on bounded posets and the axiom checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .poset import (
    CheckReport,
    Poset,
    Subset,
    Witness,
    bits,
    is_distributive,
    is_lattice,
    join,
    meet,
)


class Involution:
    """A permutation of element indices used as the unary operation '."""

    __slots__ = ("map",)

    def __init__(self, mapping):
        self.map = tuple(int(v) for v in mapping)

    def __call__(self, x):
        return self.map[x]

    def __len__(self):
        return len(self.map)

    def __eq__(self, other):
        if isinstance(other, Involution):
            return self.map == other.map
        return NotImplemented

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"Involution({list(self.map)})"

    def image(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= 1 << self.map[x]
        return out


class OrthoPoset:
    """A bounded poset together with an involution ' on its elements.

    With ``validate=True`` (the default) the involution must be antitone and
    a complementation; ValidationError is raised otherwise.  Unvalidated
    instances are used by the enumerator for bare involutive posets.
    """

    __slots__ = ("poset", "prime")

    def __init__(self, poset: Poset, prime, validate=True):
        if not isinstance(prime, Involution):
            prime = Involution(prime)
        if len(prime) != poset.n:
            raise ValidationError("involution size does not match the poset")
        self.poset = poset
        self.prime = prime
        if validate:
            report = validate_orthoposet(poset, prime)
            if not report.verdict:
                raise ValidationError(report.witnesses[0].description)

    @property
    def n(self):
        return self.poset.n

    @property
    def labels(self):
        return self.poset.labels

    @property
    def bottom(self):
        return self.poset.bottom

    @property
    def top(self):
        return self.poset.top

    def index(self, label):
        return self.poset.index(label)

    def __eq__(self, other):
        if not isinstance(other, OrthoPoset):
            return NotImplemented
        return self.poset == other.poset and self.prime == other.prime

    def __hash__(self):
        return hash((self.poset, self.prime))

    def __repr__(self):
        return f"OrthoPoset(n={self.n})"

    def relabel(self, perm):
        q = self.poset.relabel(perm)
        prime = [0] * self.n
        for x in range(self.n):
            prime[perm[x]] = perm[self.prime.map[x]]
        return OrthoPoset(q, prime, validate=False)


def _law_witnesses(p: Poset, prime, limit):
    n = p.n
    pm = prime.map if isinstance(prime, Involution) else tuple(prime)
    lab = p.labels
    found = {"involution": [], "antitone": [], "complementation": []}
    if sorted(pm) != list(range(n)):
        found["involution"].append(Witness((), "map is not a permutation of the elements"))
        return found
    for x in range(n):
        if pm[pm[x]] != x:
            found["involution"].append(Witness((x,), f"{lab[x]}'' = {lab[pm[pm[x]]]}"))
            if len(found["involution"]) >= limit:
                break
    if pm[p.bottom] != p.top or pm[p.top] != p.bottom:
        found["involution"].append(Witness(
            (p.bottom, p.top), f"bounds are not swapped: 0' = {lab[pm[p.bottom]]}"))
    for x in range(n):
        for y in bits(p.up[x]):
            if not p.leq(pm[y], pm[x]):
                found["antitone"].append(Witness(
                    (x, y), f"{lab[x]} <= {lab[y]} but not {lab[pm[y]]} <= {lab[pm[x]]}"))
                break
        if len(found["antitone"]) >= limit:
            break
    bot, top = 1 << p.bottom, 1 << p.top
    for x in range(n):
        lo = p.down[x] & p.down[pm[x]]
        hi = p.up[x] & p.up[pm[x]]
        if lo != bot or hi != top:
            side = f"L({lab[x]},{lab[pm[x]]}) = {p.fmt(lo)}" if lo != bot else \
                f"U({lab[x]},{lab[pm[x]]}) = {p.fmt(hi)}"
            found["complementation"].append(Witness((x, pm[x]), side))
            if len(found["complementation"]) >= limit:
                break
    return found


def validate_orthoposet(p: Poset, inv, limit=3) -> CheckReport:
    """Check that ``inv`` is an antitone involution which is a complementation.

    The three laws are checked separately; ``details`` holds one verdict per law.
    """
    found = _law_witnesses(p, inv, limit)
    witnesses = [w for law in found.values() for w in law]
    details = {law: not ws for law, ws in found.items()}
    return CheckReport("orthoposet", not witnesses, witnesses, details)


def is_complementation(op: OrthoPoset) -> bool:
    p, pm = op.poset, op.prime.map
    bot, top = 1 << p.bottom, 1 << p.top
    return all(
        p.down[x] & p.down[pm[x]] == bot and p.up[x] & p.up[pm[x]] == top
        for x in range(p.n)
    )


def orthogonal(op: OrthoPoset, x: int, y: int) -> bool:
    """x is orthogonal to y, i.e. x <= y'."""
    return op.poset.leq(x, op.prime.map[y])


def is_orthogonal_poset(op: OrthoPoset, limit=None) -> CheckReport:
    p, pm = op.poset, op.prime.map
    lab = p.labels
    witnesses = []
    for x in range(p.n):
        for y in bits(p.down[pm[x]]):
            if y < x:
                continue
            if join(p, x, y) is None:
                witnesses.append(Witness(
                    (x, y), f"{lab[x]} <= {lab[pm[y]]} but {lab[x]} v {lab[y]} does not exist"))
                if limit is not None and len(witnesses) >= limit:
                    return CheckReport("orthogonal", False, witnesses)
    return CheckReport("orthogonal", not witnesses, witnesses)


def _om_failure(p, pm, x, y):
    lab = p.labels
    m = meet(p, y, pm[x])
    if m is None:
        return f"{lab[y]} ^ {lab[pm[x]]} is undefined"
    j = join(p, x, m)
    if j is None:
        return f"{lab[x]} v ({lab[y]} ^ {lab[pm[x]]}) = {lab[x]} v {lab[m]} is undefined"
    if j != y:
        return f"{lab[x]} v ({lab[y]} ^ {lab[pm[x]]}) = {lab[j]} != {lab[y]}"
    return None


def _om_dual_failure(p, pm, x, y):
    lab = p.labels
    j = join(p, x, pm[y])
    if j is None:
        return f"{lab[x]} v {lab[pm[y]]} is undefined"
    m = meet(p, y, j)
    if m is None:
        return f"{lab[y]} ^ ({lab[x]} v {lab[pm[y]]}) is undefined"
    if m != x:
        return f"{lab[y]} ^ ({lab[x]} v {lab[pm[y]]}) = {lab[m]} != {lab[x]}"
    return None


def om_holds(op: OrthoPoset) -> bool:
    p, pm = op.poset, op.prime.map
    return all(
        _om_failure(p, pm, x, y) is None
        for x in range(p.n) for y in bits(p.up[x])
    )


def check_om(op: OrthoPoset, limit=None) -> CheckReport:
    """The orthomodular law: x <= y implies y = x v (y ^ x').

    A meet or join that does not exist counts as a failure at that pair.
    The dual form x = y ^ (x v y') is evaluated as well; ``details["dual"]``
    holds its verdict and ``details["agree"]`` whether the two coincide.
    """
    p, pm = op.poset, op.prime.map
    witnesses = []
    for x in range(p.n):
        for y in bits(p.up[x]):
            why = _om_failure(p, pm, x, y)
            if why is not None:
                witnesses.append(Witness((x, y), f"{p.labels[x]} <= {p.labels[y]}: {why}"))
                if limit is not None and len(witnesses) >= limit:
                    break
        if limit is not None and len(witnesses) >= limit:
            break
    dual = all(
        _om_dual_failure(p, pm, x, y) is None
        for x in range(p.n) for y in bits(p.up[x])
    )
    verdict = not witnesses
    return CheckReport("om", verdict, witnesses, {"dual": dual, "agree": dual == verdict})


def check_gom(op: OrthoPoset, limit=None) -> CheckReport:
    """x <= y implies U(y) = U(x, L(y,x')); the dual L(x) = L(y, U(x,y')) is
    evaluated too and reported in ``details``."""
    p, pm = op.poset, op.prime.map
    lab = p.labels
    witnesses = []
    dual = True
    for x in range(p.n):
        for y in bits(p.up[x]):
            rhs = p.upper_mask((1 << x) | (p.down[y] & p.down[pm[x]]))
            if rhs != p.up[y] and (limit is None or len(witnesses) < limit):
                witnesses.append(Witness((x, y), (
                    f"{lab[x]} <= {lab[y]}: U({lab[y]}) = {p.fmt(p.up[y])} but "
                    f"U({lab[x]},L({lab[y]},{lab[pm[x]]})) = {p.fmt(rhs)}")))
            if dual:
                drhs = p.lower_mask((1 << y) | (p.up[x] & p.up[pm[y]]))
                dual = drhs == p.down[x]
    verdict = not witnesses
    return CheckReport("gom", verdict, witnesses, {"dual": dual, "agree": dual == verdict})


def complements_of(p: Poset, a: int) -> Subset:
    """All x with L(a,x) = {0} and U(a,x) = {1}."""
    bot, top = 1 << p.bottom, 1 << p.top
    mask = 0
    for x in range(p.n):
        if p.down[a] & p.down[x] == bot and p.up[a] & p.up[x] == top:
            mask |= 1 << x
    return Subset(mask, p.n)


def is_boolean(op: OrthoPoset) -> CheckReport:
    """Distributive poset whose ' is a complementation; no lattice assumption."""
    dist = is_distributive(op.poset)
    compl = is_complementation(op)
    witnesses = list(dist.witnesses)
    if not compl:
        bad = _law_witnesses(op.poset, op.prime, 1)["complementation"]
        witnesses.extend(bad)
    return CheckReport(
        "boolean", dist.verdict and compl, witnesses,
        {"distributive": dist.verdict, "complementation": compl},
    )


PROPERTIES = (
    "valid", "lattice", "distributive", "boolean", "orthogonal",
    "om", "omp", "gom", "ortholattice", "oml",
)


@dataclass
class Classification:
    verdicts: dict
    reports: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.verdicts[key]

    def holds(self, prop: str) -> bool:
        if prop.startswith("non-"):
            return not self.verdicts[prop[4:]]
        return self.verdicts[prop]

    def witnesses_for(self, prop: str):
        """Reports that explain why ``prop`` fails."""
        base = prop[4:] if prop.startswith("non-") else prop
        deps = {
            "omp": ("valid", "om", "orthogonal"),
            "gom": ("valid", "gom"),
            "ortholattice": ("valid", "lattice"),
            "oml": ("valid", "lattice", "om"),
        }.get(base, (base,))
        return [self.reports[d] for d in deps if not self.reports[d].verdict]


def classify(op: OrthoPoset) -> Classification:
    p = op.poset
    reports = {
        "valid": validate_orthoposet(p, op.prime),
        "lattice": is_lattice(p),
        "distributive": is_distributive(p),
        "boolean": is_boolean(op),
        "orthogonal": is_orthogonal_poset(op),
        "om": check_om(op),
        "gom": check_gom(op),
    }
    v = {k: r.verdict for k, r in reports.items()}
    v["omp"] = v["valid"] and v["orthogonal"] and v["om"]
    v["gom"] = v["valid"] and reports["gom"].verdict
    v["ortholattice"] = v["valid"] and v["lattice"]
    v["oml"] = v["ortholattice"] and v["om"]
    return Classification({k: v[k] for k in PROPERTIES}, reports)
