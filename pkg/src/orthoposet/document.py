"""Plain-text poset documents and DOT export.

Document layout (``#`` starts a comment, blank lines are ignored)::

    orthoposet <name>
    n <count>
    labels <n tokens>
    prime <n integers>
    cover <u> <v>
    ...
"""

from __future__ import annotations

from .errors import BoundsError, CycleError, OrderError, ParseError, ValidationError
from .ortho import OrthoPoset
from .poset import build_from_covers


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _ints(tokens, no, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"{what} must be integers", no) from None


def parse_document(text: str):
    """Return ``(name, OrthoPoset)``.

    Elements are reordered so that the bottom gets index 0 and the top index
    n-1; everything else keeps its relative order.
    """
    lines = list(_lines(text))
    heads = ("orthoposet", "n", "labels", "prime")
    for i, key in enumerate(heads):
        if i >= len(lines):
            raise ParseError(f"missing '{key}' line", lines[-1][0] if lines else 1)
        no, toks = lines[i]
        if toks[0] != key:
            raise ParseError(f"expected '{key}', found '{toks[0]}'", no)
    no, toks = lines[0]
    if len(toks) != 2:
        raise ParseError("expected 'orthoposet <name>'", no)
    name = toks[1]
    no, toks = lines[1]
    if len(toks) != 2:
        raise ParseError("expected 'n <count>'", no)
    (n,) = _ints(toks[1:], no, "n")
    if n < 1:
        raise ParseError("n must be positive", no)
    no, toks = lines[2]
    labels = toks[1:]
    if len(labels) != n:
        raise ParseError(f"expected {n} labels, found {len(labels)}", no)
    if len(set(labels)) != n:
        raise ParseError("labels must be unique", no)
    no, toks = lines[3]
    prime = _ints(toks[1:], no, "prime entries")
    if len(prime) != n:
        raise ParseError(f"expected {n} prime entries, found {len(prime)}", no)
    if sorted(prime) != list(range(n)):
        raise ParseError("prime is not a permutation of 0..n-1", no)
    covers = []
    for no, toks in lines[4:]:
        if toks[0] != "cover" or len(toks) != 3:
            raise ParseError("expected 'cover <u> <v>'", no)
        u, v = _ints(toks[1:], no, "cover endpoints")
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParseError(f"bad cover pair ({u}, {v})", no)
        covers.append((u, v))
    try:
        p = build_from_covers(n, None, None, covers, labels)
    except CycleError:
        raise
    except (BoundsError, OrderError) as exc:
        raise ValidationError(str(exc)) from None
    op = OrthoPoset(p, prime)
    return name, normalize(op)


def parse(text: str) -> OrthoPoset:
    return parse_document(text)[1]


def normalize(op: OrthoPoset) -> OrthoPoset:
    """Move the bottom to index 0 and the top to index n-1."""
    n = op.n
    if op.bottom == 0 and op.top == n - 1:
        return op
    rest = [x for x in range(n) if x not in (op.bottom, op.top)]
    order = [op.bottom] + rest + ([op.top] if n > 1 else [])
    perm = [0] * n
    for i, x in enumerate(order):
        perm[x] = i
    return op.relabel(perm)


def serialize(op: OrthoPoset, name: str = "P") -> str:
    op = normalize(op)
    p = op.poset
    out = [
        f"orthoposet {name}",
        f"n {p.n}",
        "labels " + " ".join(p.labels),
        "prime " + " ".join(str(v) for v in op.prime.map),
    ]
    out += [f"cover {u} {v}" for u, v in p.covers()]
    return "\n".join(out) + "\n"


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(op: OrthoPoset, name: str = "P") -> str:
    """Hasse diagram as a ``digraph``: one rank per height, edges point up."""
    p = op.poset
    lab = p.labels
    h = p.heights()
    out = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in range(p.n):
        note = _quote("' -> " + lab[op.prime.map[x]])
        out.append(f"  n{x} [label={_quote(lab[x])}, xlabel={note}];")
    for level in range(max(h) + 1):
        members = " ".join(f"n{x};" for x in range(p.n) if h[x] == level)
        out.append(f"  {{ rank=same; {members} }}")
    for u, v in p.covers():
        out.append(f"  n{u} -> n{v};")
    out.append("}")
    return "\n".join(out) + "\n"
