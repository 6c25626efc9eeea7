"""Command-line interface: ``orbiqc <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors.  JSON output is deterministic (sorted keys, rationals as strings).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import serialize as ser
from .checks import CORPORA, check_ci, check_weights, ci_fixtures, corpus
from .exact import format_rational
from .intersections import (
    CIData,
    ShapeError,
    i_series,
    k_invariants,
    mirror_data,
    mirror_hypothesis,
    reid_tai,
    terminal_check,
)
from .jfunction import DerivationError, DerivationMismatch, j_series, matrix_from_j, pf_check
from .render import with_qet
from .ring import chen_ruan_table, companion_matrix, multiplication_table, p_matrix, presentation
from .sectors import Weights, basis, pairing, sector_set

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _weights(text: str) -> Weights:
    try:
        return Weights.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _degrees(text: str) -> tuple[int, ...]:
    try:
        ds = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise UsageError(f"malformed degree list {text!r}") from None
    if not ds or any(d < 1 for d in ds):
        raise UsageError("degrees must be positive")
    return ds


def _cap(text: str) -> Fraction:
    try:
        cap = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"malformed degree cap {text!r}") from None
    if cap < 0:
        raise UsageError("degree cap must be non-negative")
    return cap


def _ci_list(args) -> list[CIData]:
    qs = not args.not_quasismooth
    out = []
    try:
        if args.weights:
            if not args.degrees:
                raise UsageError("--degrees is required with --weights")
            out.append(CIData(_weights(args.weights), _degrees(args.degrees), qs))
        for row in args.ci or ():
            out.append(CIData.parse(row, qs))
        if args.input:
            with open(args.input) as fh:
                text = fh.read()
            if text.lstrip().startswith(("[", "{")):
                data = json.loads(text)
                for item in data if isinstance(data, list) else [data]:
                    out.append(CIData.from_json(item))
            else:
                for line in text.splitlines():
                    line = line.split("#")[0].strip()
                    if line:
                        out.append(CIData.parse(line, qs))
    except (ValueError, OSError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    if not out:
        raise UsageError("no complete intersection given (use --weights/--degrees, --ci or --input)")
    return out


# -- sectors --------------------------------------------------------------


def cmd_sectors(args):
    w = _weights(args.weights)
    secs = sector_set(w)
    els = basis(w)
    pair = [[format_rational(pairing(w, a, b)) for b in els] for a in els]
    report = ser.envelope(
        "sectors",
        weights=list(w.w),
        F=[ser.sector_to_json(s) for s in secs],
        basis=[str(e) for e in els],
        pairing=pair,
    )
    if args.format == "json":
        return ser.dumps(report), EXIT_OK
    if args.format == "latex":
        rows = " \\\\\n".join(
            f"{s.f} & {s.dim} & {s.age} & ({','.join(map(str, s.subweights))})" for s in secs
        )
        return "\\begin{tabular}{cccc}\nf & dim & age & weights \\\\\n" + rows + "\n\\end{tabular}\n", EXIT_OK
    lines = [f"{w}: {len(secs)} sectors, {len(els)} basis classes"]
    for s in secs:
        lines.append(f"  f={s.f}  dim={s.dim}  age={s.age}  P({','.join(map(str, s.subweights))})")
    lines.append("basis: " + ", ".join(str(e) for e in els))
    lines.append("pairing:")
    lines += ["  " + " ".join(row) for row in pair]
    return "\n".join(lines) + "\n", EXIT_OK


# -- ring -----------------------------------------------------------------


def _table_json(T):
    return {f"{a},{b}": ser.class_to_json(v) for (a, b), v in T.items()}


def cmd_ring(args):
    w = _weights(args.weights)
    M = p_matrix(w)
    C = companion_matrix(w)
    pres = presentation(w)
    if args.format == "latex":
        return M.to_latex(symbolic_t=args.with_t) + "\n", EXIT_OK
    T = multiplication_table(w)
    if args.format == "json":
        report = ser.envelope(
            "ring",
            weights=list(w.w),
            basis=[str(e) for e in basis(w)],
            matrix=ser.matrix_to_json(M),
            companion={
                "matrix": ser.matrix_to_json(C),
                "basis_scale": [ser.novikov_to_json(x) for x in C.basis_scale],
            },
            relations=[str(r) for r in pres.relations],
            top_relation=pres.top_str(),
            table=_table_json(T),
            chen_ruan=_table_json(chen_ruan_table(w)),
        )
        return ser.dumps(report), EXIT_OK
    fix = with_qet if args.with_t else (lambda s: s)
    lines = [f"{w}: quantum multiplication by P"]
    for row in M.entries:
        lines.append("  [ " + ", ".join(fix(str(x)) for x in row) + " ]")
    lines.append("relations:")
    lines += ["  " + fix(str(r)) for r in pres.relations]
    lines.append("  " + fix(pres.top_str()))
    if args.table:
        els = basis(w)
        lines.append("products:")
        for (a, b), v in T.items():
            lines.append(f"  {els[a]} o {els[b]} = {fix(str(v))}")
    return "\n".join(lines) + "\n", EXIT_OK


# -- jfun / ifun ----------------------------------------------------------


def _term_text(t) -> str:
    return f"  d={t.degree}  [1_{t.sector.f}]  {t.poly}"


def cmd_jfun(args):
    w = _weights(args.weights)
    cap = _cap(args.degree_max)
    J = j_series(w, cap)
    status = EXIT_OK
    extra = {}
    lines = [f"{w}: J-function terms through degree {cap} (Q^d implicit)"]
    lines += [_term_text(t) for t in J.terms]
    if args.verify_pf:
        rep = pf_check(w, J)
        extra["pf"] = {"passed": rep.passed, "failures": [format_rational(r.degree) for r in rep.failures()]}
        lines.append("pf: " + ("PASS" if rep.passed else "FAIL at " + ", ".join(str(r.degree) for r in rep.failures())))
        if not rep.passed:
            status = EXIT_FAIL
    if args.derive_ring:
        try:
            M = matrix_from_j(w, J)
            extra["derived_matrix"] = ser.matrix_to_json(M)
            lines.append("ring from J: PASS")
        except (DerivationError, DerivationMismatch, ValueError) as exc:
            extra["derived_matrix"] = None
            lines.append(f"ring from J: FAIL ({exc})")
            status = EXIT_FAIL
    if args.format == "json":
        report = ser.envelope(
            "jfun", weights=list(w.w), degree_cap=format_rational(cap), terms=ser.jseries_to_json(J), **extra
        )
        return ser.dumps(report), status
    return "\n".join(lines) + "\n", status


def _mirror_json(md) -> dict:
    out = {
        "case": md.case,
        "F": ser.novikov_to_json(md.F),
        "g": ser.novikov_to_json(md.g),
        "tau": ser.novikov_to_json(md.tau),
        "hypotheses_hold": md.hypotheses_hold,
        "twisted_residuals": [[format_rational(d), z] for d, z in md.twisted_residuals],
    }
    if md.s is not None:
        out["s"] = ser.novikov_to_json(md.s)
    return out


def cmd_ifun(args):
    cap = _cap(args.degree_max)
    status = EXIT_OK
    reports, lines = [], []
    for ci in _ci_list(args):
        I = i_series(ci, cap)
        entry = {"ci": ci.to_json(), "degree_cap": format_rational(cap), "terms": ser.jseries_to_json(I)}
        lines.append(f"{ci}: I-function terms through degree {cap}")
        lines += [_term_text(t) for t in I.terms]
        try:
            md = mirror_data(ci, I)
            entry["mirror"] = _mirror_json(md)
            lines.append(f"  case {md.case}: F = {md.F};  g = {md.g};  tau = {md.tau}")
            if md.s is not None:
                lines.append(f"  s = {md.s}")
            if md.twisted_residuals:
                lines.append(f"  twisted coefficients at z^>=0: {md.twisted_residuals}")
        except ShapeError as exc:
            entry["mirror"] = {"error": str(exc)}
            lines.append(f"  shape failure: {exc}")
            status = EXIT_FAIL
        except ValueError as exc:
            entry["mirror"] = {"skipped": str(exc)}
            lines.append(f"  mirror data skipped: {exc}")
        reports.append(entry)
    if args.format == "json":
        return ser.dumps(ser.envelope("ifun", results=reports)), status
    return "\n".join(lines) + "\n", status


# -- classify ------------------------------------------------------------


def _classify_one(ci: CIData) -> dict:
    kX, ks = k_invariants(ci)
    hyp = mirror_hypothesis(ci)
    out = {
        "ci": ci.to_json(),
        "k_X": kX,
        "k_f": {format_rational(f): k for f, k in ks.items()},
        "verdict_mirror": hyp.verdict,
        "mirror_sectors": [
            {"f": format_rational(s.f), "k_f": s.k_f, "counts": [s.count_degrees, s.count_weights], "clauses": list(s.clauses)}
            for s in hyp.sectors
        ],
    }
    if ci.quasismooth_assumed:
        term = terminal_check(ci)
        out["terminal"] = term.verdict
        out["terminal_sectors"] = [
            {"f": format_rational(s.f), "clauses": list(s.clauses)} for s in term.sectors
        ]
        out["conditional_on"] = "quasismooth"
    else:
        out["terminal"] = None
    return out


def _reid_tai_arg(text: str):
    try:
        r, a = text.split(":")
        return int(r), tuple(int(x) for x in a.split(",") if x)
    except ValueError:
        raise UsageError(f"malformed --reid-tai {text!r}; expected r:a1,a2,...") from None


def cmd_classify(args):
    out = {}
    lines = []
    if args.reid_tai:
        rts = []
        for item in args.reid_tai:
            r, a = _reid_tai_arg(item)
            try:
                rep = reid_tai(r, a)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            rts.append({"r": r, "a": list(rep.a), "well_formed": rep.well_formed, "terminal": rep.terminal,
                        "failing_k": list(rep.failing_k)})
            lines.append(f"1/{r}({','.join(map(str, rep.a))}): " + ("terminal" if rep.terminal else "not terminal"))
        out["reid_tai"] = rts
    if args.weights or args.ci or args.input:
        cis = _ci_list(args)
        with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as ex:
            results = list(ex.map(_classify_one, cis))
        for ci, res in zip(cis, results):
            t = res["terminal"]
            lines.append(
                f"{ci}: k_X={res['k_X']}  mirror hypothesis {'holds' if res['verdict_mirror'] else 'fails'}"
                + ("" if t is None else f"  terminal={'yes' if t else 'no'} (assuming quasismooth)")
            )
        if len(results) == 1 and "reid_tai" not in out:
            out.update(results[0])
        else:
            out["results"] = results
    if not out:
        raise UsageError("nothing to classify")
    if args.format == "json":
        return ser.dumps(ser.envelope("classify", **out)), EXIT_OK
    return "\n".join(lines) + "\n", EXIT_OK


# -- verify ---------------------------------------------------------------


def cmd_verify(args):
    cap = _cap(args.degree_max)
    try:
        ws = corpus(args.corpus)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cis = ci_fixtures()
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as ex:
        w_bad = list(ex.map(lambda w: check_weights(w, cap, ring_axioms=not args.skip_axioms), ws))
        c_bad = list(ex.map(check_ci, cis))
    failures = [b for bad in w_bad + c_bad for b in bad]
    if args.format == "json":
        report = ser.envelope(
            "verify",
            corpus=args.corpus,
            weight_vectors=len(ws),
            ci_fixtures=len(cis),
            passed=not failures,
            first_failure=failures[0] if failures else None,
            failures=len(failures),
        )
        return ser.dumps(report), EXIT_FAIL if failures else EXIT_OK
    if failures:
        return f"FAIL: {failures[0]} ({len(failures)} failures)\n", EXIT_FAIL
    return f"{len(ws)} weight vectors, {len(cis)} complete intersections: all invariants PASS\n", EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbiqc", description="Exact quantum orbifold cohomology of weighted projective spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weights_required=True):
        sp.add_argument("--weights", required=weights_required, help="comma-separated weights, e.g. 1,1,2")
        sp.add_argument("--format", choices=("text", "json", "latex"), default="text")
        sp.add_argument("--output", help="write the report to this file instead of stdout")

    def ci_opts(sp):
        sp.add_argument("--degrees", help="comma-separated degrees d_0,...,d_m")
        sp.add_argument("--ci", action="append", help='row "w0,...,wn;d0,...,dm" (repeatable)')
        sp.add_argument("--input", help="CSV rows or a JSON list of {weights, degrees}")
        sp.add_argument("--not-quasismooth", action="store_true", help="do not assume quasismoothness")

    sp = sub.add_parser("sectors", help="twisted sectors, basis and pairing")
    common(sp)
    sp.set_defaults(func=cmd_sectors)

    sp = sub.add_parser("ring", help="quantum multiplication by P, relations and product tables")
    common(sp)
    sp.add_argument("--with-t", action="store_true", help="write Q as Qe^t")
    sp.add_argument("--table", action="store_true", help="print the full product table in text mode")
    sp.set_defaults(func=cmd_ring)

    sp = sub.add_parser("jfun", help="small J-function series")
    common(sp)
    sp.add_argument("--degree-max", default="3")
    sp.add_argument("--verify-pf", action="store_true", help="check the hypergeometric equation")
    sp.add_argument("--derive-ring", action="store_true", help="rebuild the P-matrix from the series")
    sp.set_defaults(func=cmd_jfun)

    sp = sub.add_parser("ifun", help="I-function and mirror data of a complete intersection")
    common(sp, weights_required=False)
    ci_opts(sp)
    sp.add_argument("--degree-max", default="3")
    sp.set_defaults(func=cmd_ifun)

    sp = sub.add_parser("classify", help="k-invariants, mirror hypothesis, terminality")
    common(sp, weights_required=False)
    ci_opts(sp)
    sp.add_argument("--reid-tai", action="append", metavar="R:A1,A2,...", help="test 1/r(a_1,...,a_n)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="run every exact invariant over a corpus")
    sp.add_argument("--corpus", choices=CORPORA, default="small")
    sp.add_argument("--degree-max", default="3")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--skip-axioms", action="store_true", help="skip the ring-axiom sweep")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, status = args.func(args)
    except UsageError as exc:
        print(f"orbiqc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
