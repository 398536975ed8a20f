"""Command line interface: ``quaddef check|report|realize|corpus``.

Exit codes: 0 ok, 1 parse error, 2 validation error, 3 window instability,
4 internal consistency failure.
"""

import argparse
import json
import sys

from . import corpus, docformat, realizer
from .defcomplex import (
    build_deformation_complex,
    check_nondegenerate,
    check_symmetry,
    deformation_report,
)
from .errors import DescentObstruction, QuadDefError, Unstable


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fmt_point(p):
    return "(" + " : ".join(str(x) for x in p) + ")"


def check_quadratic(q, out):
    check_symmetry(q)
    out.append("ok: resolution is a complex with homogeneous entries")
    out.append(f"ok: pairing is {'symmetric' if q.sign == 1 else 'antisymmetric'}")
    out.append("ok: pairing descends to E")
    p = check_nondegenerate(q)
    out.append(f"ok: nondegenerate on the fiber at {_fmt_point(p)}")


_COMPARED = ("relations", "inclusion", "projection", "form")


def check_extension(doc, q, out):
    check_quadratic(q, out)
    c = docformat.extension_cocycle(doc, q)
    realizer.check_cocycle1(q, c)
    out.append("ok: (eta, psi) is a cocycle")
    fo = realizer.realize_first_order(q, c)
    stored = {
        "relations": fo.relations if fo.relations.source.rank else None,
        "inclusion": fo.i,
        "projection": fo.j,
        "form": fo.phi,
    }
    for name in _COMPARED:
        if name not in doc.matrices:
            continue
        m = stored[name]
        if m is None or docformat.format_matrix(m) != [
            ", ".join(docformat.format_poly(p) for p in row) for row in doc.matrices[name]
        ]:
            raise DescentObstruction(f"stored [{name}] differs from the recomputed presentation")
        out.append(f"ok: stored [{name}] matches the recomputed presentation")
    out.extend(fo.log)


def cmd_check(args):
    doc = docformat.parse_document(_read(args.file))
    q = docformat.to_quadratic(doc)
    out = []
    if doc.kind == "extension":
        check_extension(doc, q, out)
    else:
        check_quadratic(q, out)
    print("\n".join(out))
    print("all checks passed")
    return 0


def render_report(r):
    lines = [
        f"name: {r.name or '-'}",
        f"ambient dimension: {r.n}",
        f"sign: {r.sign}",
        f"h0 = {r.h0}",
        f"h1 = {r.h1}",
        f"h2 = {r.h2}",
        "hypercohomology: " + ", ".join(f"H^{t}={h}" for t, h in sorted(r.dims.items())),
        f"window: {r.window} (stable against {r.window + 1}: {'true' if r.stable else 'false'})",
        f"euler characteristic: {r.euler} (expected {r.euler_expected}; "
        f"triangle identity {'holds' if r.euler_identity else 'fails'})",
        f"cross-check: infinitesimal symmetries = {r.cross_check['infinitesimal_symmetries']} "
        f"({'agrees' if r.cross_check['agrees'] else 'DISAGREES'} with h0)",
        f"nondegeneracy witness: {_fmt_point(r.witness_point)}",
        f"long exact sequence: {'exact' if r.les.exact else 'NOT exact'}",
    ]
    header = ("deg", "cone", "src", "tgt", "r(c->s)", "r(s->t)", "r(t->c)")
    lines.append("  " + " ".join(f"{h:>7}" for h in header))
    for row in r.les.table:
        vals = (
            row["degree"], row["cone"], row["source"], row["target"],
            row["rank_cone_to_source"], row["rank_source_to_target"], row["rank_target_to_cone"],
        )
        lines.append("  " + " ".join(f"{v:>7}" for v in vals))
    for f in r.les.failures:
        lines.append(f"  failure: {f}")
    if r.formally_smooth_hint:
        lines.append("formally smooth hint: h2 = 0, the deformation problem is unobstructed")
    return "\n".join(lines) + "\n"


def cmd_report(args):
    doc = docformat.parse_document(_read(args.file))
    q = docformat.to_quadratic(doc)
    window = args.window if args.window is not None else doc.window
    r = deformation_report(q, window=window)
    if args.json:
        sys.stdout.write(json.dumps(r.to_dict(), indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_report(r))
    return 0 if r.les.exact and r.cross_check["agrees"] else 4


def cmd_realize(args):
    doc = docformat.parse_document(_read(args.file))
    q = docformat.to_quadratic(doc)
    check_symmetry(q)
    check_nondegenerate(q)
    dc = build_deformation_complex(q)
    window = args.window if args.window is not None else doc.window
    basis = realizer.class_basis(dc, 1, window)
    section = realizer.pick_class(basis, args.class_index)
    c = realizer.cocycle1_from_section(dc, section)
    fo = realizer.realize_first_order(q, c)
    text = docformat.dump_extension(fo, class_index=args.class_index)
    split = realizer.is_split(fo)
    text += f"# extension {'splits' if split else 'does not split'}\n"
    _write(args.out, text)
    return 0


def cmd_corpus(args):
    if args.list:
        for e in corpus.valid_entries() + corpus.invalid_entries():
            tag = "valid" if e.valid else f"invalid ({e.command}: {e.error}, exit {e.exit_code})"
            print(f"{e.name}\t{tag}\t{e.description}")
        return 0
    sys.stdout.write(corpus.get(args.emit).text)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="quaddef",
        description="Deformation and obstruction spaces of orthogonal and symplectic sheaves on P^n.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate a document")
    c.add_argument("file", help="input document, '-' for stdin")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("report", help="compute h0, h1, h2 and the long exact sequence")
    r.add_argument("file")
    r.add_argument("--window", type=int, default=None, help="Cech truncation window")
    r.add_argument("--json", action="store_true", help="machine-readable output")
    r.set_defaults(func=cmd_report)

    z = sub.add_parser("realize", help="write the first-order deformation of an h1 class")
    z.add_argument("file")
    z.add_argument("--class", dest="class_index", type=int, default=0)
    z.add_argument("--window", type=int, default=None)
    z.add_argument("--out", default=None, help="output path (stdout by default)")
    z.set_defaults(func=cmd_realize)

    k = sub.add_parser("corpus", help="built-in examples")
    g = k.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="NAME")
    k.set_defaults(func=cmd_corpus)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Unstable as exc:
        hint = f" (try --window {exc.suggested_window})" if exc.suggested_window else ""
        print(f"error: Unstable: {exc}{hint}", file=sys.stderr)
        return exc.exit_code
    except QuadDefError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
