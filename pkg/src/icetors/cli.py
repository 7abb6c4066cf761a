"""Command-line front end.

Exit codes: 0 success, 1 falsification, 2 usage, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import derived as D
from .catalog import enumerate_indecomposables
from .errors import FalsificationError, IceTorsError, UsageError
from .iceseq import ice_sequences, mmi_roundtrip, narrow_iff_ice_scan, thick_correspondence
from .lattice import enumerate_mmi_sequences, enumerate_tors, hasse_dot, interval_tors_iso_check, wide_intervals
from .parallel import default_jobs
from .quiver import builtin, load_algebra
from .subcat import calculus, ice_closed_subcats, wide_subcats

SUITES = ("narrow-iff-ice", "preaisle", "interval-iso", "mmi-roundtrip", "t-structure", "thick-wide",
          "coaisle-remark")

# torsion class of the ambient path algebra whose tilt gives the target heart
COAISLE_TILT = "1,3,32,321"
COAISLE_LAYERS = {0: "3", -1: "2,21,32,3"}


def _fmt(labels) -> str:
    return "{" + ",".join(sorted(labels)) + "}"


def _sorted_subcats(catalog, masks) -> list[list[str]]:
    return sorted(sorted(catalog.labels_of(m)) for m in masks)


def parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"window must look like a..b, got {text!r}") from None
    if a > b:
        raise UsageError(f"empty window {text!r}")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icetors", description="torsion classes, ICE sequences and windowed aisles")
    ap.add_argument("command", choices=["ind", "tors", "wide", "ice", "alpha", "hasse", "mmi", "iceseq", "aisles",
                                        "verify"])
    ap.add_argument("suite", nargs="?", help="verification suite for the verify command: " + ", ".join(SUITES))
    ap.add_argument("--algebra", default="lineA:3", help="builtin name (lineA:n, paperNakayama) or JSON file")
    ap.add_argument("--window", help="degree window a..b")
    ap.add_argument("--length", type=int, help="sequence / chain length n")
    ap.add_argument("--format", choices=["text", "json", "dot"], default="text")
    ap.add_argument("--out", help="write output here instead of stdout")
    ap.add_argument("--jobs", type=int, default=None, help="worker processes (default: available cores)")
    ap.add_argument("--count", action="store_true", help="print only the count")
    ap.add_argument("--subcat", help="comma-separated member labels")
    ap.add_argument("--brute-force", action="store_true", help="allow the brute-force catalog for non-Nakayama algebras")
    return ap


class Output:
    def __init__(self):
        self.parts: list[str] = []

    def line(self, s=""):
        self.parts.append(str(s) + "\n")

    def json(self, obj):
        self.parts.append(json.dumps(obj, indent=2, sort_keys=True) + "\n")

    def raw(self, s: str):
        self.parts.append(s)

    def text(self) -> str:
        return "".join(self.parts)


def _listing(out: Output, args, items: list[list[str]], key: str):
    if args.format == "json":
        out.json({"count": len(items), key: items})
        return
    out.line(len(items))
    if not args.count:
        for it in items:
            out.line(_fmt(it))


def _need_length(args, default=None) -> int:
    n = args.length if args.length is not None else default
    if n is None:
        raise UsageError("this command needs --length n")
    if n < 1:
        raise UsageError("--length must be at least 1")
    return n


def _window_lo(args, default=None) -> int:
    if args.window:
        a, b = parse_window(args.window)
        if b != 0:
            raise UsageError("aisle windows end at degree 0 (use a..0)")
        return a
    if args.length is not None:
        return -args.length
    if default is None:
        raise UsageError("this command needs --window a..0 or --length n")
    return default


def run(args, out: Output) -> int:
    alg = load_algebra(args.algebra)
    cat = enumerate_indecomposables(alg, brute_force=args.brute_force)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    cmd = args.command
    if cmd != "verify" and args.suite:
        raise UsageError(f"unexpected argument {args.suite!r}")

    if cmd == "ind":
        if args.format == "json":
            out.json(cat.to_json())
        else:
            out.line(len(cat))
            if not args.count:
                for lab in sorted(cat.labels):
                    out.line(lab)
    elif cmd == "tors":
        lat = enumerate_tors(cat, jobs=jobs)
        if args.format == "dot":
            out.raw(hasse_dot(lat))
        elif args.format == "json" and not args.count:
            out.json(lat.to_json())
        else:
            _listing(out, args, _sorted_subcats(cat, lat.elements), "tors")
    elif cmd == "hasse":
        lat = enumerate_tors(cat, jobs=jobs)
        if args.format == "json":
            out.json(lat.to_json())
        else:
            out.raw(hasse_dot(lat))
    elif cmd == "wide":
        _listing(out, args, _sorted_subcats(cat, wide_subcats(cat)), "wide")
    elif cmd == "ice":
        _listing(out, args, _sorted_subcats(cat, ice_closed_subcats(cat)), "ice")
    elif cmd == "alpha":
        if args.subcat is None:
            raise UsageError("alpha needs --subcat a,b,...")
        res = sorted(cat.labels_of(calculus(cat).alpha_checked(cat.mask(args.subcat))))
        if args.format == "json":
            out.json({"subcat": sorted(cat.labels_of(cat.mask(args.subcat))), "alpha": res})
        else:
            out.line(",".join(res))
    elif cmd == "mmi":
        n = _need_length(args)
        lat = enumerate_tors(cat, jobs=jobs)
        chains = enumerate_mmi_sequences(lat, n)
        rows = sorted(([I.to_json() for I in ch] for ch in chains), key=lambda ch: json.dumps(ch, sort_keys=True))
        if args.format == "json":
            out.json({"count": len(rows), "chains": rows})
        else:
            out.line(len(rows))
            if not args.count:
                for ch in rows:
                    out.line(" > ".join(f"[{_fmt(I['lower'])}, {_fmt(I['upper'])}]" for I in ch))
    elif cmd == "iceseq":
        n = _need_length(args)
        seqs = sorted((s.to_json() for s in ice_sequences(cat, n)), key=lambda d: d["entries"])
        if args.format == "json":
            out.json({"count": len(seqs), "sequences": seqs})
        else:
            out.line(len(seqs))
            if not args.count:
                for s in seqs:
                    out.line(" ".join(_fmt(e) for e in s["entries"]))
    elif cmd == "aisles":
        lo = _window_lo(args)
        aisles = [D.theta(s) for s in ice_sequences(cat, -lo)] if lo < 0 else [D.WindowedAisle.standard(cat, 0)]
        dumps = sorted(((json.dumps(U.to_json(), sort_keys=True), U) for U in aisles), key=lambda t: t[0])
        if args.format == "json":
            out.json({"count": len(dumps), "aisles": [U.to_json() for _, U in dumps]})
        elif args.format == "dot":
            for _, U in dumps:
                out.raw(U.to_dot())
        else:
            out.line(len(dumps))
            if not args.count:
                for _, U in dumps:
                    out.line(" ".join(f"{k}:{_fmt(cat.labels_of(U.layer(k)))}" for k in range(U.lo + 1, 1)))
    elif cmd == "verify":
        return _verify(args, cat, jobs, out)
    return 0


def _verify(args, cat, jobs, out: Output) -> int:
    suite = args.suite
    if suite not in SUITES:
        raise UsageError(f"verify needs a suite, one of: {', '.join(SUITES)}")
    if suite == "narrow-iff-ice":
        w = -_window_lo(args, -2)
        report = narrow_iff_ice_scan(cat, w, jobs=jobs)
    elif suite == "preaisle":
        report = D.brute_preaisle_scan(cat, _window_lo(args, -1))
    elif suite == "interval-iso":
        lat = enumerate_tors(cat, jobs=jobs)
        wides = wide_intervals(lat)
        bad = [r for r in (interval_tors_iso_check(W, lat, raise_on_fail=False) for W in wides) if not r["ok"]]
        report = {"intervals": len(wides), "failures": bad, "ok": not bad}
    elif suite == "mmi-roundtrip":
        reports = [mmi_roundtrip(cat, n) for n in range(1, _need_length(args, 3) + 1)]
        report = {"runs": reports, "ok": all(r["ok"] for r in reports)}
    elif suite == "t-structure":
        report = D.verify_ice_aisles(cat, -_window_lo(args, -3), jobs=jobs)
    elif suite == "thick-wide":
        report = thick_correspondence(cat)
    else:
        if cat.algebra.name != "lineA:3":
            raise UsageError("the coaisle-remark scenario is defined over lineA:3")
        target = enumerate_indecomposables(builtin("paperNakayama"))
        scen = D.tilted_scenario(cat, COAISLE_TILT, target)
        report = D.coaisle_remark_search(scen, COAISLE_LAYERS, -2, expect="3")
        report["heart"] = scen.to_json()["heart"]
    report = {"suite": suite, "algebra": cat.algebra.name, **report}
    if args.format == "json":
        out.json(report)
    else:
        out.line(f"{suite}: {'ok' if report['ok'] else 'FAILED'}")
        out.json(report)
    return 0 if report["ok"] else 1


def _glue_window(argv: list[str]) -> list[str]:
    """Let ``--window -2..0`` through; argparse would take -2..0 for a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--window":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--window={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(_glue_window(list(sys.argv[1:] if argv is None else argv)))
    out = Output()
    try:
        code = run(args, out)
    except FalsificationError as e:
        out.json({"error": str(e), "report": e.report})
        code = e.exit_code
    except IceTorsError as e:
        print(f"icetors: {e}", file=sys.stderr)
        return e.exit_code
    except MemoryError:
        print("icetors: out of memory", file=sys.stderr)
        return 3
    text = out.text()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
