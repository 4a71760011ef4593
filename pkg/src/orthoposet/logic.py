"""Compatibility, commutator and ternary discriminator on involutive posets."""

from __future__ import annotations

from dataclasses import dataclass

from .ortho import OrthoPoset
from .poset import CheckReport, Subset, Witness, bits, popcount


class PreconditionWarning(UserWarning):
    """An operation was applied outside the class where its result is guaranteed."""


@dataclass(frozen=True)
class CommutatorValue:
    mins: Subset
    as_element: int | None

    def is_bottom(self, op):
        return self.as_element == op.bottom

    def is_top(self, op):
        return self.as_element == op.top


def _lower2(p, x, y):
    return p.down[x] & p.down[y]


def compatible(op: OrthoPoset, a: int, b: int) -> bool:
    """a C b  iff  U(a) = U(L(a,b), L(a,b'))."""
    p, pm = op.poset, op.prime.map
    return p.up[a] == p.upper_mask(_lower2(p, a, b) | _lower2(p, a, pm[b]))


def _four_cones(op, x, y):
    p, pm = op.poset, op.prime.map
    xp, yp = pm[x], pm[y]
    return (_lower2(p, x, y), _lower2(p, x, yp), _lower2(p, xp, y), _lower2(p, xp, yp))


def commutator_mask(op: OrthoPoset, x: int, y: int) -> int:
    p = op.poset
    a, b, c, d = _four_cones(op, x, y)
    return p.min_mask(p.upper_mask(a | b | c | d))


def commutator(op: OrthoPoset, x: int, y: int) -> CommutatorValue:
    """Min U(L(x,y), L(x,y'), L(x',y), L(x',y'))."""
    m = commutator_mask(op, x, y)
    single = m.bit_length() - 1 if popcount(m) == 1 else None
    return CommutatorValue(Subset(m, op.n), single)


def commutator_sets(op: OrthoPoset, A, B) -> Subset:
    """Union of c(a,b) over a in A, b in B."""
    a_mask = A.mask if isinstance(A, Subset) else op.poset.subset(A).mask
    b_mask = B.mask if isinstance(B, Subset) else op.poset.subset(B).mask
    out = 0
    for a in bits(a_mask):
        for b in bits(b_mask):
            out |= commutator_mask(op, a, b)
    return Subset(out, op.n)


def discriminator(op: OrthoPoset, x: int, y: int, z: int) -> Subset:
    """Min U(L(c(x,y)', x), L(c(x,y), z)) with the set commutator and A' = {a' : a in A}."""
    p = op.poset
    c = commutator_mask(op, x, y)
    c_prime = op.prime.image(c)
    left = p.lower_mask(c_prime | 1 << x)
    right = p.lower_mask(c | 1 << z)
    return Subset(p.min_mask(p.upper_mask(left | right)), op.n)


def commutator_two_valued(op: OrthoPoset) -> CheckReport:
    """Every c(x,y) is {0} or {1}.

    The cone condition (all four lower cones trivial, or their common upper
    cone is {1}) is evaluated independently; ``details`` records both verdicts.
    """
    p = op.poset
    bot, top = 1 << p.bottom, 1 << p.top
    lab = p.labels
    witnesses = []
    cone_ok = True
    for x in range(p.n):
        for y in range(p.n):
            m = commutator_mask(op, x, y)
            if m not in (bot, top):
                witnesses.append(Witness((x, y), f"c({lab[x]},{lab[y]}) = {p.fmt(m)}"))
            cones = _four_cones(op, x, y)
            trivial = all(c == bot for c in cones)
            if not trivial and p.upper_mask(cones[0] | cones[1] | cones[2] | cones[3]) != top:
                cone_ok = False
    verdict = not witnesses
    return CheckReport(
        "commutator-two-valued", verdict, witnesses,
        {"cone_condition": cone_ok, "agree": cone_ok == verdict},
    )


def compat_commutator_agreement(op, blocks=None) -> CheckReport:
    """a C b  iff  c(a,b) = {1}, over all pairs.

    ``op`` may be a HorizontalSum.  If the structure is not a horizontal sum
    of Boolean blocks a PreconditionWarning is recorded in ``details`` and the
    agreement is still computed.
    """
    from .constructs import HorizontalSum, boolean_block_report

    if isinstance(op, HorizontalSum):
        op = op.result
    pre = boolean_block_report(op)
    warnings = []
    if not pre.verdict:
        warnings.append(f"{PreconditionWarning.__name__}: not a horizontal sum of Boolean posets "
                        f"({pre.witnesses[0].description})")
    p = op.poset
    top = 1 << p.top
    lab = p.labels
    witnesses = []
    for a in range(p.n):
        for b in range(p.n):
            comp = compatible(op, a, b)
            m = commutator_mask(op, a, b)
            if comp != (m == top):
                witnesses.append(Witness(
                    (a, b), f"{lab[a]} C {lab[b]} is {comp} but c = {p.fmt(m)}"))
    return CheckReport("compat-commutator-agreement", not witnesses, witnesses,
                       {"warnings": warnings})
