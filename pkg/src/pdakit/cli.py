"""Command-line interface: ``pdakit {construct,verify,simulate,params,compare}``.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 size budget.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import itertools
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import constructors as C
from . import io as pio
from .core import DEFAULT_CELL_BUDGET, verify_base_pda, verify_pda
from .errors import BudgetExceeded, InvalidRange, PdaError, ParseError, VerificationError
from .schemes import SCHEME_NAMES, SchemeSpec, baseline_params, compare_ratios, scheme_build
from .simulator import DEFAULT_PACKET_BYTES, FileLibrary, deliver, place, sweep_demands

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
BUILTIN_SPECS = ("table2", "fig3")


class UsageError(Exception):
    pass


def fmt_exact(x) -> str:
    if x is None:
        return ""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_decimal(x) -> str:
    if x is None:
        return ""
    return f"{float(Fraction(x)):.6g}"


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--scheme {args.scheme} needs {', '.join(missing)}")


def _load_base(args):
    if args.base is None:
        raise UsageError(f"--scheme {args.scheme} needs --base FILE")
    doc = pio.load(args.base)
    lam = args.lam if args.lam is not None else (doc.lam or 1)
    return verify_base_pda(doc.array, lam)


# construct -------------------------------------------------------------

def cmd_construct(args) -> int:
    s = args.scheme
    base = None
    prov_args = {}
    if s in ("a", "b"):
        _need(args, "m", "t", "q", "z")
        prov_args = dict(m=args.m, t=args.t, q=args.q, z=args.z)
        array = scheme_build(SchemeSpec(s, (args.m, args.t, args.q, args.z)), max_cells=args.max_cells)
    elif s == "c":
        _need(args, "m", "t", "q")
        prov_args = dict(m=args.m, t=args.t, q=args.q)
        array = scheme_build(SchemeSpec(s, (args.m, args.t, args.q)), max_cells=args.max_cells)
    elif s == "mn":
        _need(args, "q", "z")
        prov_args = dict(q=args.q, z=args.z, transpose=args.transpose)
        array = C.mn_pda(args.q, args.z)
        if args.transpose:
            array = C.transpose_pda(array)
    elif s == "g2":
        _need(args, "q")
        prov_args = dict(q=args.q)
        base = C.g2_base_pda(args.q)
        array = base.pda
    elif s == "transform":
        if args.base is None:
            raise UsageError("--scheme transform needs --base FILE")
        prov_args = dict(base=str(args.base))
        base = C.transform_to_base(pio.load(args.base).array)
        array = base.pda
    elif s in ("pm", "pmt"):
        _need(args, "m")
        t = 1 if s == "pm" else args.t
        if t is None:
            raise UsageError("--scheme pmt needs --t")
        src = _load_base(args)
        prov_args = dict(base=str(args.base), m=args.m, t=t, **{"lambda": src.lam})
        array = C.construct_pmt(src, args.m, t, max_cells=args.max_cells)
    else:  # argparse restricts choices
        raise UsageError(f"unknown scheme {s!r}")

    doc = pio.PdaDocument.from_array(array, base=base,
                                     provenance={"constructor": s, "args": prov_args})
    text = pio.serialize(doc)
    if args.output:
        Path(args.output).write_text(text)
        p = doc.params
        print(f"wrote {args.output}: K={p.K} F={p.F} Z={p.Z} S={p.S} g={p.regular_g}",
              file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    doc = pio.load(args.file)
    try:
        p = verify_pda(doc.array)
        print(f"PDA: K={p.K} F={p.F} Z={p.Z} S={p.S} g={p.regular_g if p.regular_g is not None else '-'}"
              f" M/N={fmt_exact(p.memory_ratio)} R={fmt_exact(p.load)}")
        if args.base:
            lam = args.lam if args.lam is not None else (doc.lam or 1)
            b = verify_base_pda(doc.array, lam)
            print(f"base PDA: lambda={lam}")
            print("phi: " + " ".join(f"{s}->{b.phi[s]}" for s in sorted(b.phi)))
            print("partition: " + " ".join("{" + ",".join(map(str, blk)) + "}" for blk in b.partition))
    except VerificationError as exc:
        print(f"FAIL {type(exc).__name__}: {exc}")
        return EXIT_VERIFY
    return EXIT_OK


# simulate --------------------------------------------------------------

def cmd_simulate(args) -> int:
    pda = pio.load(args.file).array
    lib = FileLibrary(args.files, pda.F, args.packet_bytes, args.seed)
    if args.demand is not None:
        tr = deliver(pda, lib, place(pda, lib), _int_list(args.demand))
        print(f"demand={','.join(map(str, tr.demand))} messages={len(tr.messages)} "
              f"load={fmt_exact(tr.load)} measured={fmt_exact(tr.measured_load)} "
              f"decoded={sum(tr.decode_results)}/{pda.K}")
        if args.transcript:
            Path(args.transcript).write_text(tr.to_jsonl())
        return EXIT_OK if tr.all_decoded else EXIT_VERIFY
    if args.transcript:
        raise UsageError("--transcript needs a single --demand")
    mode = "sampled" if args.sample is not None else "exhaustive"
    summary = sweep_demands(pda, lib, mode=mode, count=args.sample or 0, seed=args.seed)
    print(f"mode={mode} demands={summary.demands} all_decoded={summary.all_decoded} "
          f"max_load={fmt_exact(summary.max_load)} mean_load={fmt_exact(summary.mean_load)}")
    for d in summary.failures[:10]:
        print("failed demand: " + ",".join(map(str, d)))
    return EXIT_OK if summary.all_decoded else EXIT_VERIFY


# params / compare ------------------------------------------------------

FIELDS = ("K", "M/N", "F", "R", "g")


def _param_values(p):
    return {"K": p.K, "M/N": p.memory_ratio, "F": p.F, "R": p.R, "g": p.g}


def _row(series, spec, p):
    row = {"series": series, "scheme": spec.name, "args": ",".join(map(str, spec.args))}
    for k, v in _param_values(p).items():
        row[k] = fmt_exact(v)
        row[k + "_dec"] = fmt_decimal(v)
    return row


CSV_HEADER = ["series", "scheme", "args"] + [c for f in FIELDS for c in (f, f + "_dec")]


def cmd_params(args) -> int:
    spec = SchemeSpec(args.scheme, _int_list(args.args))
    p = baseline_params(spec)
    row = _row("", spec, p)
    if args.format == "json":
        print(json.dumps({"scheme": spec.name, "args": list(spec.args),
                          **{f: {"exact": row[f], "decimal": row[f + "_dec"]} for f in FIELDS}}))
    elif args.format == "csv":
        out = _io.StringIO()
        w = csv.DictWriter(out, fieldnames=CSV_HEADER[1:], extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerow(row)
        sys.stdout.write(out.getvalue())
    else:
        print(f"{p.name or spec.name} {spec.args}")
        for f in FIELDS:
            print(f"  {f:<4} {row[f]:>24}  ~ {row[f + '_dec']}")
    return EXIT_OK


def read_specs(text: str):
    """Yield ``(series, SchemeSpec)`` pairs from a spec file.

    A line is ``[series:] scheme a,b,..`` where each argument is an integer
    or an inclusive range ``lo..hi``.  Expanded combinations outside the
    scheme's domain are dropped; a plain line outside its domain is an error.
    """
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        series = ""
        if ":" in line:
            series, line = (x.strip() for x in line.split(":", 1))
        try:
            name, argtext = line.split(None, 1)
        except ValueError:
            raise ParseError(n, "expected 'scheme args'") from None
        choices = []
        for tok in argtext.replace(" ", "").split(","):
            try:
                if ".." in tok:
                    lo, hi = tok.split("..")
                    choices.append(range(int(lo), int(hi) + 1))
                else:
                    choices.append((int(tok),))
            except ValueError:
                raise ParseError(n, f"bad argument {tok!r}") from None
        ranged = any(len(c) != 1 for c in choices)
        for combo in itertools.product(*choices):
            try:
                spec = SchemeSpec(name, combo)
                p = baseline_params(spec)
            except InvalidRange:
                if ranged:
                    continue
                raise
            yield series or name, spec, p


def _spec_text(name: str) -> str:
    if name in BUILTIN_SPECS and not Path(name).exists():
        return resources.files("pdakit").joinpath(f"data/{name}.specs").read_text()
    return Path(name).read_text()


def compare_csv(text: str) -> str:
    out = _io.StringIO()
    w = csv.DictWriter(out, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for series, spec, p in read_specs(text):
        w.writerow(_row(series, spec, p))
    return out.getvalue()


def ratios_csv(m: int, t: int, q: int, z: int) -> str:
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["scheme", "K", "M/N", "F", "F_wclc", "R", "R_wclc", "F_ratio", "R_ratio"])
    for r in compare_ratios(m, t, q, z):
        w.writerow([r.scheme, r.ours.K, fmt_exact(r.ours.memory_ratio), r.ours.F, r.wclc.F,
                    fmt_exact(r.ours.R), fmt_exact(r.wclc.R), fmt_exact(r.f_ratio), fmt_exact(r.r_ratio)])
    return out.getvalue()


def cmd_compare(args) -> int:
    if (args.specs is None) == (args.ratios is None):
        raise UsageError("compare needs exactly one of --specs FILE or --ratios m,t,q,z")
    if args.ratios is not None:
        vals = _int_list(args.ratios)
        if len(vals) != 4:
            raise UsageError("--ratios takes m,t,q,z")
        text = ratios_csv(*vals)
    else:
        text = compare_csv(_spec_text(args.specs))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pdakit", description="Placement delivery array toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a PDA and write a document")
    c.add_argument("--scheme", required=True,
                   choices=["a", "b", "c", "pm", "pmt", "mn", "g2", "transform"])
    for flag in ("m", "t", "q", "z"):
        c.add_argument(f"--{flag}", type=int)
    c.add_argument("--base", type=Path, help="base PDA document or grid file")
    c.add_argument("--lambda", dest="lam", type=int)
    c.add_argument("--transpose", action="store_true", help="transpose the MN PDA")
    c.add_argument("--max-cells", type=int, default=DEFAULT_CELL_BUDGET)
    c.add_argument("-o", "--output", type=Path)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check C1-C3 (and C4/C5 with --base)")
    v.add_argument("file", type=Path)
    v.add_argument("--base", action="store_true")
    v.add_argument("--lambda", dest="lam", type=int)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="run placement and delivery on synthetic files")
    s.add_argument("file", type=Path)
    s.add_argument("--files", type=int, required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--demand")
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sample", type=int, metavar="COUNT")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--packet-bytes", type=int, default=DEFAULT_PACKET_BYTES)
    s.add_argument("--transcript", type=Path, help="write JSONL transcript (single demand)")
    s.set_defaults(func=cmd_simulate)

    p = sub.add_parser("params", help="closed-form parameters of a scheme")
    p.add_argument("--scheme", required=True, choices=SCHEME_NAMES)
    p.add_argument("--args", required=True)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.set_defaults(func=cmd_params)

    k = sub.add_parser("compare", help="CSV of scheme parameters from a spec file")
    k.add_argument("--specs", help=f"spec file, or one of {', '.join(BUILTIN_SPECS)}")
    k.add_argument("--ratios", help="m,t,q,z: Schemes A/B/C against WCLC")
    k.add_argument("-o", "--output", type=Path)
    k.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as exc:
        print(f"FAIL {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, PdaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
