"""Batch front-end: build contexts, parse specs, run sweeps and verifications.

Every emitted report starts with a header that fully records the run
configuration (field, modulus, t, beta, spec string, c selector, seed,
threads), so any output file can be reproduced from its own header.
Exit codes: 0 ok, 1 usage or construction error, 2 prediction VIOLATION.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .gf import CduError, make_field, parse_modulus
from .quadext import make_quadext, select_t, t_condition_holds
from .funcs import UNI, parse_func_spec
from . import ddt, predict
from .oracles import (bluher_root_count, bluher_special_b_count,
                      bluher_special_b_formula, inverse_c_uniformity_predict,
                      quadratic_root_count, quartic_factor_type)


def _add_field_args(sub):
    sub.add_argument("-p", type=int, required=True, help="prime characteristic")
    sub.add_argument("-m", type=int, required=True, help="extension degree")
    sub.add_argument("--modulus", help="comma-separated coefficients, constant first")


def _add_run_args(sub):
    _add_field_args(sub)
    sub.add_argument("-t", help="t parameter (w^k notation); default: first valid")
    sub.add_argument("--spec", required=True, help="construction string")
    sub.add_argument("--c", default="all",
                     help="all | cq0 | sample:N | explicit list 'c1,c2;c1,c2'")
    sub.add_argument("--format", default="csv", choices=("csv", "json", "pretty"))
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("-o", dest="outfile", help="output file (default stdout)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cdu",
        description="c-differential uniformity of bivariate finite-field functions")
    sp = ap.add_subparsers(dest="cmd", required=True)

    f = sp.add_parser("field", help="field summary: modulus, primitive, t candidates")
    _add_field_args(f)

    for name, hlp in (("ddt", "per-c reports with spectra"),
                      ("sweep", "uniformity table over a c set"),
                      ("verify", "predictions vs brute force; exit 2 on violation")):
        s = sp.add_parser(name, help=hlp)
        _add_run_args(s)

    o = sp.add_parser("oracle", help="ad-hoc root-counting queries")
    o.add_argument("which", choices=("quad", "quartic", "bluher", "bluhercount",
                                     "invpred"))
    _add_field_args(o)
    o.add_argument("--a")
    o.add_argument("--b")
    o.add_argument("--a2")
    o.add_argument("--a1")
    o.add_argument("--a0")
    o.add_argument("--k", type=int)
    o.add_argument("--c")
    return ap


def _make_contexts(args):
    modulus = parse_modulus(args.modulus) if args.modulus else None
    base = make_field(args.p, args.m, modulus)
    t = base.parse_elem(args.t) if getattr(args, "t", None) else None
    qctx = make_quadext(base, t)
    return base, qctx


def _parse_cset(args, base, qctx, uni):
    sel = args.c
    if uni:
        big_q = qctx.ext.q
        if sel == "all":
            return ddt.c_all_uni(big_q)
        return [ddt.CParam.uni(qctx.ext.parse_elem(s, letter="W"))
                for s in sel.split(";") if s]
    q = base.q
    if sel == "all":
        return ddt.c_all_biv(q)
    if sel == "cq0":
        return ddt.c_line_biv(q)
    if sel.startswith("sample:"):
        return ddt.c_sample_biv(q, int(sel.split(":", 1)[1]), args.seed)
    out = []
    for pair in sel.split(";"):
        if not pair:
            continue
        c1s, c2s = pair.split(",")
        out.append(ddt.CParam.biv(base.parse_elem(c1s), base.parse_elem(c2s)))
    return out


def _config_lines(args, base, qctx):
    cfg = [("cmd", args.cmd), ("p", base.p), ("m", base.m),
           ("modulus", base.modulus_str()),
           ("t", base.elem_str(qctx.t)),
           ("beta", qctx.ext.elem_str(qctx.beta, "W")),
           ("spec", args.spec), ("c", args.c), ("format", args.format),
           ("threads", args.threads), ("seed", args.seed)]
    return cfg


def argv_from_header(text):
    """Rebuild the argv of a run from the header of its own output."""
    kv = {}
    for line in text.splitlines():
        if line.startswith("# ") and ": " in line:
            k, v = line[2:].split(": ", 1)
            kv[k] = v
        elif not line.startswith("#"):
            break
    argv = [kv["cmd"], "-p", kv["p"], "-m", kv["m"], "--modulus", kv["modulus"],
            "-t", kv["t"], "--spec", kv["spec"], "--c", kv["c"],
            "--format", kv["format"], "--threads", kv["threads"],
            "--seed", kv["seed"]]
    return argv


def _fmt_witness(qctx, spec, rep):
    a_idx, b_idx = rep.witness
    base = qctx.base
    q = base.q
    b_str = f"({base.elem_str(b_idx // q)},{base.elem_str(b_idx % q)})"
    if rep.c.kind == "uni":
        ext = qctx.ext
        return ext.elem_str(a_idx, "W"), ext.elem_str(b_idx, "W")
    if spec.domain == "ext":
        return qctx.ext.elem_str(a_idx, "W"), b_str
    a_str = f"({base.elem_str(a_idx // q)},{base.elem_str(a_idx % q)})"
    return a_str, b_str


def _c_cols(qctx, c):
    if c.kind == "uni":
        return qctx.ext.elem_str(c.c, "W"), ""
    return qctx.base.elem_str(c.c1), qctx.base.elem_str(c.c2)


def _spectrum_str(spectrum):
    return " ".join(f"{v}:{n}" for v, n in sorted(spectrum.items()))


def _emit(out, args, base, qctx, header, columns, rows, json_rows):
    if args.format == "json":
        doc = {"config": dict(header), "columns": columns, "rows": json_rows}
        out.write(json.dumps(doc, indent=1, sort_keys=True))
        out.write("\n")
        return
    for k, v in header:
        out.write(f"# {k}: {v}\n")
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        return
    widths = [max(len(str(r[i])) for r in rows + [columns]) for i in range(len(columns))]
    out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip() + "\n")


def cmd_field(args, out):
    modulus = parse_modulus(args.modulus) if args.modulus else None
    base = make_field(args.p, args.m, modulus)
    out.write(f"field: p={base.p} m={base.m} q={base.q}\n")
    out.write(f"modulus: {base.modulus_str()}\n")
    out.write(f"primitive: index {base.primitive} (= w)\n")
    cands = [x for x in range(1, base.q) if t_condition_holds(base, x)]
    shown = " ".join(base.elem_str(x) for x in cands[:8])
    more = "" if len(cands) <= 8 else f" (+{len(cands) - 8} more)"
    out.write(f"t default: {base.elem_str(select_t(base))}\n")
    out.write(f"t candidates: {shown}{more}\n")
    return 0


def cmd_ddt_or_sweep(args, out, with_spectrum):
    base, qctx = _make_contexts(args)
    spec = parse_func_spec(args.spec)
    uni = spec.domain == UNI
    cs = _parse_cset(args, base, qctx, uni)
    reports = ddt.sweep(spec, qctx, cs, threads=args.threads)
    header = _config_lines(args, base, qctx)
    columns = ["c1", "c2", "uniformity", "class", "witness_a", "witness_b"]
    if with_spectrum:
        columns.append("spectrum")
    rows, json_rows = [], []
    for rep in reports:
        c1s, c2s = _c_cols(qctx, rep.c)
        wa, wb = _fmt_witness(qctx, spec, rep)
        row = [c1s, c2s, rep.uniformity, rep.classification, wa, wb]
        jrow = {"c1": c1s, "c2": c2s, "uniformity": rep.uniformity,
                "class": rep.classification, "witness_a": wa, "witness_b": wb}
        if with_spectrum:
            row.append(_spectrum_str(rep.spectrum))
            jrow["spectrum"] = {str(k): v for k, v in rep.spectrum.items()}
        rows.append(row)
        json_rows.append(jrow)
    _emit(out, args, base, qctx, header, columns, rows, json_rows)
    return 0


def cmd_verify(args, out):
    base, qctx = _make_contexts(args)
    spec = parse_func_spec(args.spec)
    if spec.domain == UNI:
        raise CduError("verify covers bivariate and extension-domain specs")
    cs = _parse_cset(args, base, qctx, uni=False)
    result = predict.verify(spec, qctx, cs, threads=args.threads)
    header = _config_lines(args, base, qctx)
    columns = ["c1", "c2", "predicted", "observed", "verdict"]
    rows, json_rows = [], []
    for r in result.rows:
        c1s, c2s = _c_cols(qctx, r.c)
        rows.append([c1s, c2s, r.prediction.describe(), r.observed, r.verdict])
        json_rows.append({"c1": c1s, "c2": c2s,
                          "predicted": r.prediction.describe(),
                          "observed": r.observed, "verdict": r.verdict})
    _emit(out, args, base, qctx, header, columns, rows, json_rows)
    if not result.ok:
        for r in result.rows:
            if r.verdict == "VIOLATION":
                c1s, c2s = _c_cols(qctx, r.c)
                sys.stderr.write(
                    f"VIOLATION at c=({c1s},{c2s}): predicted "
                    f"{r.prediction.describe()}, observed {r.observed}, "
                    f"witness {r.witness}, trace {r.prediction.trace}\n")
        return 2
    return 0


def cmd_oracle(args, out):
    modulus = parse_modulus(args.modulus) if args.modulus else None
    ctx = make_field(args.p, args.m, modulus)
    el = ctx.parse_elem
    if args.which == "quad":
        n = quadratic_root_count(ctx, el(args.a), el(args.b))
        out.write(f"roots of x^2 + ({args.a})x + ({args.b}): {n}\n")
    elif args.which == "quartic":
        t = quartic_factor_type(ctx, el(args.a2), el(args.a1), el(args.a0))
        out.write(f"factor type: {t.pattern}\n")
    elif args.which == "bluher":
        r = bluher_root_count(ctx, args.k, el(args.a), el(args.b))
        out.write(f"roots of x^(p^{args.k}+1) + ({args.a})x + ({args.b}): "
                  f"{r.root_count} (allowed: 0, 1, 2, {ctx.p ** r.d + 1})\n")
    elif args.which == "bluhercount":
        scan = bluher_special_b_count(ctx, args.k)
        form = bluher_special_b_formula(ctx, args.k)
        out.write(f"b with p^d+1 roots: scan={scan} formula={form}\n")
    else:
        u = inverse_c_uniformity_predict(ctx, el(args.c))
        out.write(f"inverse-function c-uniformity at c={args.c}: {u}\n")
    return 0


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    out = sys.stdout
    close = False
    if getattr(args, "outfile", None):
        out = open(args.outfile, "w")
        close = True
    try:
        if args.cmd == "field":
            return cmd_field(args, out)
        if args.cmd == "ddt":
            return cmd_ddt_or_sweep(args, out, with_spectrum=True)
        if args.cmd == "sweep":
            return cmd_ddt_or_sweep(args, out, with_spectrum=False)
        if args.cmd == "verify":
            return cmd_verify(args, out)
        return cmd_oracle(args, out)
    except CduError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    finally:
        if close:
            out.close()


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
