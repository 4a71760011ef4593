"""Command-line front end: ``orthoposet <command> ...``.

Exit codes: 0 success / all required properties hold, 1 a required property
or verification fails, 2 bad input, 3 enumeration beyond the feasibility cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructs
from .document import export_dot, parse_document, serialize
from .enumeration import FILTERS, EnumJob, enumerate_job, verify_minimality
from .errors import FeasibilityError, OrthoPosetError, ParseError
from .logic import commutator, compatible, discriminator
from .ortho import PROPERTIES, classify

SCHEMA = "orthoposet-report/1"


class InputError(Exception):
    pass


def generate(source: str):
    """Resolve a fixture name or ``boolean:k`` / ``mo:k`` to ``(name, structure)``."""
    if source in constructs.FIXTURES:
        return source, constructs.fixture(source)
    kind, _, arg = source.partition(":")
    if kind in ("boolean", "mo") and arg:
        try:
            k = int(arg)
        except ValueError:
            raise InputError(f"{source}: size must be an integer") from None
        if k < 1 or (kind == "boolean" and k > 6):
            raise InputError(f"{source}: size out of range")
        build = constructs.boolean_algebra if kind == "boolean" else constructs.mo
        return f"{kind}{k}", build(k)
    return None


def load(source: str):
    """Read a poset from ``-`` (stdin), a fixture/generator name or a file."""
    gen = generate(source)
    if gen is not None:
        return gen
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            known = ", ".join(constructs.FIXTURES)
            raise InputError(f"{source}: {exc.strerror}; not a file or one of {known}, boolean:k, mo:k") from None
    return parse_document(text)


def _emit(args, payload, lines):
    if args.format == "json":
        payload = {"schema": SCHEMA, **payload}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


# -- check ------------------------------------------------------------------


def _property_names():
    return list(PROPERTIES) + ["non-" + p for p in PROPERTIES]


def cmd_check(args):
    name, op = load(args.input)
    c = classify(op)
    lab = op.labels
    props = {}
    lines = [f"{name}: {op.n} elements, {len(op.poset.covers())} covers"]
    for prop in PROPERTIES:
        reports = c.witnesses_for(prop)
        why = [w.description for r in reports for w in r.witnesses]
        props[prop] = {"holds": c[prop], "witnesses": why}
        line = f"  {prop:<13} {'yes' if c[prop] else 'no'}"
        if why:
            line += f"   {why[0]}"
        lines.append(line)
    failed = [r for r in args.require if not c.holds(r)]
    payload = {
        "command": "check", "name": name, "n": op.n, "labels": list(lab),
        "properties": props, "required": args.require, "failed": failed,
    }
    if args.require:
        lines.append("required: " + " ".join(args.require))
        for r in failed:
            base = r[4:] if r.startswith("non-") else r
            why = props[base]["witnesses"]
            hint = f": {why[0]}" if why and not r.startswith("non-") else ""
            lines.append(f"  FAILED {r}{hint}")
        lines.append("result: " + ("ok" if not failed else "failed"))
    _emit(args, payload, lines)
    return 1 if failed else 0


# -- table ------------------------------------------------------------------


def _grid(lab, cell):
    n = len(lab)
    rows = [[""] + list(lab)] + [[lab[x]] + [cell(x, y) for y in range(n)] for x in range(n)]
    widths = [max(len(r[j]) for r in rows) for j in range(n + 1)]
    return ["  ".join(r[j].ljust(widths[j]) for j in range(n + 1)).rstrip() for r in rows]


def cmd_table(args):
    name, op = load(args.input)
    p = op.poset
    lab = p.labels
    rel = args.relation
    if rel == "compat":
        def value(x, y):
            return compatible(op, x, y)

        def show(v):
            return "T" if v else "F"
    elif rel == "commutator":
        def value(x, y):
            return p.names(commutator(op, x, y).mins.mask)

        def show(v):
            return "{" + ",".join(v) + "}"
    else:
        try:
            z = p.index(args.z) if args.z is not None else p.top
        except KeyError:
            raise InputError(f"no element labelled {args.z!r}") from None

        def value(x, y):
            return p.names(discriminator(op, x, y, z).mask)

        def show(v):
            return "{" + ",".join(v) + "}"
    table = [[value(x, y) for y in range(p.n)] for x in range(p.n)]
    head = f"{name}: {rel}"
    if rel == "discriminator-slice":
        head += f" t(x,y,{lab[z]})"
    lines = [head] + _grid(lab, lambda x, y: show(table[x][y]))
    payload = {"command": "table", "name": name, "relation": rel, "labels": list(lab), "cells": table}
    if rel == "discriminator-slice":
        payload["z"] = lab[z]
    _emit(args, payload, lines)
    return 0


# -- constructions ----------------------------------------------------------


def cmd_hsum(args):
    parts = [load(src) for src in args.inputs]
    hs = constructs.horizontal_sum([op for _, op in parts])
    sys.stdout.write(serialize(hs.result, args.name or "hsum"))
    return 0


def cmd_gen(args):
    gen = generate(args.source)
    if gen is None:
        raise InputError(f"unknown generator {args.source!r}; use a fixture name, boolean:k or mo:k")
    name, op = gen
    sys.stdout.write(serialize(op, name))
    return 0


def cmd_dot(args):
    name, op = load(args.input)
    sys.stdout.write(export_dot(op, name))
    return 0


# -- enumeration ------------------------------------------------------------


def cmd_enum(args):
    job = EnumJob(args.max_size, tuple(args.filter), jobs=args.jobs, order=args.order,
                  keep=args.representatives, checkpoint=args.checkpoint)
    res = enumerate_job(job)
    lines = [f"filters: {' '.join(job.filters) or '(none)'}", "size  count"]
    lines += [f"{k:>4}  {v}" for k, v in sorted(res.counts_by_size.items())]
    if args.representatives:
        lines.append("representatives:")
        lines += [f"  {form.hex()}" for form, _ in res.representatives]
    payload = {"command": "enum", "filters": list(job.filters), "max_size": job.max_n,
               "order": job.order, "jobs": job.jobs, **res.to_dict()}
    _emit(args, payload, lines)
    return 0


def _min_lines(res):
    lines = ["size  omp  non-lattice"]
    for row in res.certificate[:-1]:
        lines.append(f"{row['size']:>4}  {row['omp']:>3}  {row['non_lattice']}")
    total = res.certificate[-1]["non_lattice_total"]
    lines.append(f"non-lattice orthomodular posets found: {total}")
    return lines, total


def cmd_verify_min(args):
    res = verify_minimality(args.exhaustive_to, jobs=args.jobs, order=args.order)
    lines, total = _min_lines(res)
    lines.insert(0, f"exhaustive to {args.exhaustive_to} elements (order {args.order}, jobs {args.jobs})")
    payload = {"command": "verify-min", "exhaustive_to": args.exhaustive_to, **res.to_dict()}
    agree = True
    if args.cross_check:
        other = "reverse" if args.order == "forward" else "forward"
        res2 = verify_minimality(args.exhaustive_to, jobs=args.jobs, order=other)
        agree = res2.counts_by_size == res.counts_by_size and res2.certificate[:-1] == res.certificate[:-1]
        lines.append(f"cross-check with order {other}: {'counts agree' if agree else 'COUNTS DIFFER'}")
        payload["cross_check"] = {"order": other, "agree": agree,
                                  "counts_by_size": {str(k): v for k, v in res2.counts_by_size.items()}}
    lines.append("result: " + ("ok" if total == 0 and agree else "failed"))
    _emit(args, payload, lines)
    return 0 if total == 0 and agree else 1


def cmd_verify_unique18(args):
    from .uniqueness import verify_uniqueness_18

    res = verify_uniqueness_18()
    fix, dist, ext = res.certificate
    lines = [
        f"stage 1: fig3 has {fix['size']} elements; valid={fix['valid']} orthogonal={fix['orthogonal']} "
        f"om={fix['om']} lattice={fix['lattice']} (no join of {','.join(fix['lattice_witness'] or [])})",
        f"stage 2: {sum(c['refuted'] for c in dist['cases'])}/{len(dist['cases'])} equalities refuted; "
        f"reasoner sound on fig3: {dist['reasoner_sound_on_fig3']}",
    ]
    for c in dist["cases"]:
        lines.append(f"  [{c['stage']}] {c['hypothesis']:<8} {'refuted' if c['refuted'] else 'OPEN'}: {c['reason']}")
    lines.append(f"stage 3: {ext['examined']} extensions examined (expected {ext['expected']}), "
                 f"{ext['survivors']} survive")
    for key, r in ext["named"].items():
        lines.append(f"  named {key}: {r['violated']} fails at {r['key_witness']}")
    for r in ext["reports"]:
        x, y = r["pair"]
        state = "SURVIVES" if r["survives"] else f"{r['violated']} fails"
        first = r["witnesses"][0] if r["witnesses"] else ""
        lines.append(f"  {x} <= {y} (and {r['dual'][0]} <= {r['dual'][1]}): {state}; {first}")
    ok = all(stage["ok"] for stage in res.certificate)
    lines.append("result: " + ("ok" if ok else "failed"))
    payload = {"command": "verify-unique18", "ok": ok, "certificate": res.certificate}
    _emit(args, payload, lines)
    return 0 if ok else 1


# -- parser -----------------------------------------------------------------


def build_parser():
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")
    ap = argparse.ArgumentParser(prog="orthoposet", description="Finite orthoposet toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[fmt], help="classify a poset")
    c.add_argument("input", help="file, '-' for stdin, or fixture name")
    c.add_argument("--require", action="append", default=[], choices=_property_names(), metavar="PROP",
                   help="property that must hold (repeatable); prefix with non- to negate")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("table", parents=[fmt], help="pairwise relation table")
    t.add_argument("input")
    t.add_argument("--relation", choices=("compat", "commutator", "discriminator-slice"), default="compat")
    t.add_argument("--z", help="third argument of the discriminator (label, default top)")
    t.set_defaults(func=cmd_table)

    h = sub.add_parser("hsum", parents=[fmt], help="horizontal sum of posets")
    h.add_argument("inputs", nargs="+")
    h.add_argument("--name")
    h.set_defaults(func=cmd_hsum)

    g = sub.add_parser("gen", parents=[fmt], help="emit a fixture or generated poset")
    g.add_argument("source", help="fixture name, boolean:k or mo:k")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("dot", parents=[fmt], help="Graphviz export of the Hasse diagram")
    d.add_argument("input")
    d.set_defaults(func=cmd_dot)

    e = sub.add_parser("enum", parents=[fmt], help="count isomorphism classes")
    e.add_argument("--max-size", type=int, required=True)
    e.add_argument("--filter", action="append", default=[], choices=FILTERS)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--order", choices=("forward", "reverse"), default="forward")
    e.add_argument("--representatives", action="store_true", help="list canonical forms")
    e.add_argument("--checkpoint", help="write sorted hex canonical forms to this file")
    e.set_defaults(func=cmd_enum)

    m = sub.add_parser("verify-min", parents=[fmt], help="no non-lattice orthomodular poset up to a size")
    m.add_argument("--exhaustive-to", type=int, default=12)
    m.add_argument("--jobs", type=int, default=1)
    m.add_argument("--order", choices=("forward", "reverse"), default="forward")
    m.add_argument("--cross-check", action="store_true", help="repeat with the other extension order")
    m.set_defaults(func=cmd_verify_min)

    u = sub.add_parser("verify-unique18", parents=[fmt], help="uniqueness certificate for the 18-element example")
    u.set_defaults(func=cmd_verify_unique18)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except FeasibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return 2
    except (InputError, OrthoPosetError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
