"""modheat command line: eval, derive-b2, verify, report.

Exit codes: 0 pass, 1 identity failure, 2 usage or domain error,
3 no convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import ModHeatError, NoConvergence
from .schemas import CSV_COLUMNS, VerificationReport, identity_report, json_schemas

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOCONV = 0, 1, 2, 3

FUNCTIONS = ("2f1", "f1", "f2", "fd", "g_alpha", "h_alpha", "k_delta", "h_delta", "t")


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _need(ns, *names):
    missing = [n for n in names if getattr(ns, n) is None]
    if missing:
        raise UsageError(f"{ns.function} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _scalar(ns, name):
    v = getattr(ns, name)
    if len(v) != 1:
        raise UsageError(f"--{name} takes a single value for {ns.function}")
    return v[0]


def evaluate(ns) -> tuple[float, dict]:
    from . import h_family, multivar_hyper, special_fn, spectral

    fn = ns.function
    tol = ns.tol
    if fn == "2f1":
        _need(ns, "a", "b", "c", "z")
        z = _scalar(ns, "z")
        return special_fn.gauss_2f1(ns.a, ns.b, ns.c, z, tol or special_fn.SERIES_TOL), \
            {"route": "series/transform dispatch"}
    if fn == "f1":
        _need(ns, "a", "b", "b2", "c", "x", "y")
        return multivar_hyper.appell_f1(ns.a, ns.b, ns.b2, ns.c, ns.x, _scalar(ns, "y"),
                                        tol or multivar_hyper.SERIES_TOL), {"route": "auto"}
    if fn == "f2":
        _need(ns, "a", "b", "b2", "c", "c2", "x", "y")
        return multivar_hyper.appell_f2(ns.a, ns.b, ns.b2, ns.c, ns.c2, ns.x, _scalar(ns, "y"),
                                        tol or multivar_hyper.SERIES_TOL), {"route": "series"}
    if fn == "fd":
        _need(ns, "a", "alphas", "c", "z")
        return multivar_hyper.lauricella_fd(ns.a, ns.z, tol or multivar_hyper.SERIES_TOL,
                                            alphas=ns.alphas, c=ns.c), {"route": "auto"}
    if fn == "g_alpha":
        _need(ns, "alpha", "s")
        route = ns.route or "simplex"
        if route not in ("simplex", "contour"):
            raise UsageError("g_alpha routes: simplex, contour")
        f = h_family.g_alpha_simplex if route == "simplex" else h_family.g_alpha_contour
        return f(ns.alpha, ns.s), {"route": route}
    if fn == "h_alpha":
        _need(ns, "alpha", "z", "m")
        route = ns.route or "reduced"
        zs = ns.z if len(ns.alpha) > 1 else []
        if len(ns.alpha) > 1 and len(zs) != len(ns.alpha) - 1:
            raise UsageError("--z needs one value per alpha_l, l >= 1")
        return h_family.h_alpha(ns.alpha, zs, ns.m, ns.j, route), {"route": route, "j": ns.j}
    if fn == "k_delta":
        _need(ns, "y", "m")
        route = ns.route or "HAlpha"
        return spectral.k_delta(_scalar(ns, "y"), ns.m, route), {"route": route}
    if fn == "h_delta":
        _need(ns, "y1", "y2", "m")
        route = ns.route or "HAlpha"
        return spectral.h_delta(ns.y1, ns.y2, ns.m, route), {"route": route}
    if fn == "t":
        _need(ns, "y")
        form = ns.form or "definitional"
        return spectral.t_function(_scalar(ns, "y"), form), {"form": form, "m": 2}
    raise UsageError(f"unknown function {fn!r}")


def cmd_eval(ns) -> int:
    value, meta = evaluate(ns)
    if ns.json:
        print(json.dumps({"function": ns.function, "value": value, **meta}))
    else:
        print(f"{value:.10f}")
        print("# " + " ".join(f"{k}={v}" for k, v in {"function": ns.function, **meta}.items()))
    return EXIT_OK


def b2_document():
    from .schemas import B2Document, term_list
    from .symbol_calculus import resolvent_b, sphere_integrate

    b2 = resolvent_b(2)
    return B2Document(b2=term_list(b2), b2_integrated=term_list(sphere_integrate(b2)))


def cmd_derive_b2(ns) -> int:
    from .symbol_calculus import poly_latex, resolvent_b, sphere_integrate

    if ns.format == "json":
        print(b2_document().model_dump_json(indent=2, exclude_none=True))
    else:
        b2 = resolvent_b(2)
        print("b_2 = " + poly_latex(b2))
        print("\\tilde b_2 = \\mathrm{Vol}(S^{m-1}) \\left(" + poly_latex(sphere_integrate(b2)) + "\\right)")
    return EXIT_OK


def _overrides(ns, cfg: dict) -> dict:
    out = {}
    if ns.m is not None:
        if "m" not in cfg:
            raise UsageError(f"{ns.identity} runs at a fixed m; --m does not apply")
        out["m"] = ns.m
    for key in ("samples", "points", "tol"):
        val = getattr(ns, key, None)
        if val is None:
            continue
        if key not in cfg:
            raise UsageError(f"--{key} does not apply to {ns.identity}")
        if key in ("samples", "points") and val < 1:
            raise UsageError(f"--{key} must be >= 1")
        if key == "tol" and val <= 0:
            raise UsageError("--tol must be positive")
        out[key] = val
    return out


def write_csv(rows: Sequence[dict], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(["" if r[c] is None else repr(float(r[c])) for c in CSV_COLUMNS])


def _summary(res) -> str:
    status = "PASS" if res.passed else "FAIL"
    return (f"{res.identity}: {status} max_residual={res.max_residual:.3e} "
            f"tol={res.tolerance:.0e} points={len(res.rows)} ({res.elapsed_s:.2f} s)")


def _diagnose(res) -> str:
    w = res.worst
    where = {k: w[k] for k in ("y1", "y2", "m") if w[k] is not None}
    where.update(w["params"])
    return f"  worst point [{w['kind']}] residual={w['residual']:.3e} tol={w['tol']:.0e} at {where}"


def cmd_verify(ns) -> int:
    from .verify import load_defaults, run_suite, thread_count

    config = load_defaults(ns.config)
    overrides = _overrides(ns, config["identities"][ns.identity])
    res = run_suite(ns.identity, overrides, ns.seed, ns.threads, config)
    rep = identity_report(res)
    if ns.output:
        doc = VerificationReport(package_version=__version__, threads=thread_count(ns.threads),
                                 passed=res.passed, identities=[rep])
        Path(ns.output).write_text(doc.model_dump_json(indent=2), encoding="utf-8")
    if ns.csv:
        with open(ns.csv, "w", encoding="utf-8", newline="") as fh:
            write_csv(res.rows, fh)
    if ns.format == "json":
        print(rep.model_dump_json(indent=2))
    elif ns.format == "csv":
        buf = io.StringIO()
        write_csv(res.rows, buf)
        sys.stdout.write(buf.getvalue())
    else:
        print(_summary(res))
    if not res.passed:
        print(_diagnose(res), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_report(ns) -> int:
    from .verify import IDENTITIES, load_defaults, run_suite, thread_count

    if ns.print_schema:
        print(json_schemas())
        return EXIT_OK
    if not ns.out_dir:
        raise UsageError("report needs --out-dir (or --print-schema)")
    config = load_defaults(ns.config)
    chosen = ns.identities or list(IDENTITIES)
    unknown = [i for i in chosen if i not in IDENTITIES]
    if unknown:
        raise UsageError(f"unknown identities: {', '.join(unknown)}")
    out = Path(ns.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports, ok = [], True
    for ident in chosen:
        res = run_suite(ident, None, ns.seed, ns.threads, config)
        print(_summary(res))
        if not res.passed:
            print(_diagnose(res), file=sys.stderr)
        ok &= res.passed
        reports.append(identity_report(res))
        with open(out / f"{ident}.csv", "w", encoding="utf-8", newline="") as fh:
            write_csv(res.rows, fh)
    doc = VerificationReport(package_version=__version__, threads=thread_count(ns.threads),
                             passed=ok, identities=reports)
    (out / "report.json").write_text(doc.model_dump_json(indent=2), encoding="utf-8")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    from .verify import IDENTITIES

    p = argparse.ArgumentParser(prog="modheat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"modheat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate one function")
    e.add_argument("function", choices=FUNCTIONS)
    for name in ("a", "b", "b2", "c", "c2", "x", "m", "y1", "y2", "tol"):
        e.add_argument(f"--{name}", type=float)
    e.add_argument("--z", type=_floats, help="comma-separated arguments")
    e.add_argument("--y", type=_floats)
    e.add_argument("--s", type=_floats)
    e.add_argument("--alpha", type=_ints, help="multi-index, e.g. 2,1,1")
    e.add_argument("--alphas", type=_floats, help="F_D parameters")
    e.add_argument("--j", type=int, default=2)
    e.add_argument("--route")
    e.add_argument("--form", choices=("definitional", "simplified"))
    e.add_argument("--json", action="store_true")
    e.set_defaults(handler=cmd_eval)

    d = sub.add_parser("derive-b2", help="print b2 and its sphere integral")
    d.add_argument("--format", choices=("json", "latex"), default="json")
    d.set_defaults(handler=cmd_derive_b2)

    v = sub.add_parser("verify", help="run one identity suite")
    v.add_argument("identity", choices=IDENTITIES)
    v.add_argument("--m", type=_floats)
    v.add_argument("--samples", type=int)
    v.add_argument("--points", type=int)
    v.add_argument("--tol", type=float)
    v.add_argument("--seed", type=int)
    v.add_argument("--threads", type=int)
    v.add_argument("--config")
    v.add_argument("--output", help="write a JSON report here")
    v.add_argument("--csv", help="write the residual table here")
    v.add_argument("--format", choices=("text", "json", "csv"), default="text")
    v.set_defaults(handler=cmd_verify)

    r = sub.add_parser("report", help="run suites and write report.json plus one CSV each")
    r.add_argument("--identities", type=lambda s: [x for x in s.split(",") if x])
    r.add_argument("--out-dir")
    r.add_argument("--seed", type=int)
    r.add_argument("--threads", type=int)
    r.add_argument("--config")
    r.add_argument("--print-schema", action="store_true")
    r.set_defaults(handler=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return ns.handler(ns)
    except UsageError as exc:
        print(f"modheat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoConvergence as exc:
        print(f"modheat: no convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except (ModHeatError, ValueError, OverflowError, ZeroDivisionError) as exc:
        print(f"modheat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
