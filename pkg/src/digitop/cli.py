"""Command-line interface: ``digitop <verb> [flags]``.

Exit status: 0 for a definite verdict, 2 when a budget ran out before one was
reached, 1 for input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, _kernels
from .errors import EmptinessError, InputError, ResourceLimitError, SynthesisError
from .lattice import (
    as_kind,
    components,
    connected_images,
    detect_simple_closed_curve,
    generate_cycle,
    load_image,
    search_cycles,
    serialize_image,
)
from .morph import (
    DEFAULT_BUDGET,
    classify_homotopy_type_2d,
    homotopy_equivalent,
    is_contractible,
    is_reducible,
    is_rigid,
    serialize_homotopy,
)
from .planner import DEFAULT_CSP_BUDGET, parse_planner, serialize_planner, tc_classify, tc_oracle, verify_planner

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


def _tri(report, t, what):
    report["verdict"] = t.verdict.value
    report["method"] = t.method
    report["budget_status"] = "exhausted" if t.unknown else "ok"
    if t.info:
        report["info"] = {k: v for k, v in t.info.items() if _plain(v)}
    report["question"] = what
    return EXIT_UNKNOWN if t.unknown else EXIT_OK


def _plain(v):
    return isinstance(v, (str, int, float, bool, type(None))) or (
        isinstance(v, (list, tuple, dict)) and len(str(v)) < 2000
    )


def _write_cert(args, report, name, text):
    if not args.certs:
        return
    d = Path(args.certs)
    d.mkdir(parents=True, exist_ok=True)
    path = d / name
    path.write_text(text)
    report.setdefault("certificates", []).append(str(path))


def _image(args, flag="image"):
    path = getattr(args, flag)
    if not path:
        raise InputError(f"--{flag} is required")
    return load_image(path)


# ---------------------------------------------------------------------------
# handlers

def cmd_info(args, report):
    X = _image(args)
    comps = components(X)
    report.update(points=len(X), dim=X.dim, adjacency=X.kind.name, components=len(comps),
                  max_degree=max((len(r) for r in X.nbrs), default=0))
    w = detect_simple_closed_curve(X)
    report["simple_closed_curve"] = w.m if w else None
    if len(comps) == 1 and X.dim == 2:
        ht = classify_homotopy_type_2d(X, args.budget)
        report["homotopy_type"] = str(ht)
        report["method"] = "certificate" if ht.certificate is not None else "rule"
        if ht.label == "other" and ht.evidence.get("contractible") == "unknown":
            report["budget_status"] = "exhausted"
            return EXIT_UNKNOWN
    report.setdefault("method", "rule")
    report["budget_status"] = "ok"
    return EXIT_OK


def cmd_connected(args, report):
    X = _image(args)
    comps = components(X)
    report.update(verdict="yes" if len(comps) == 1 else "no", components=len(comps), method="exhaustive",
                  budget_status="ok")
    return EXIT_OK


def cmd_contractible(args, report):
    X = _image(args)
    t = is_contractible(X, args.budget)
    code = _tri(report, t, "contractible")
    if t.certificate is not None:
        report["steps"] = t.certificate.steps
        _write_cert(args, report, "contraction.hom", serialize_homotopy(t.certificate))
    return code


def cmd_reducible(args, report):
    X = _image(args)
    t = is_reducible(X, args.budget)
    code = _tri(report, t, "reducible")
    if t.certificate is not None:
        report["smaller_points"] = len(t.certificate.smaller)
        _write_cert(args, report, "reduction.hom", serialize_homotopy(t.certificate.homotopy))
        _write_cert(args, report, "smaller.dimg", serialize_image(t.certificate.smaller))
    return code


def cmd_rigid(args, report):
    X = _image(args)
    t = is_rigid(X, args.budget)
    code = _tri(report, t, "rigid")
    if t.certificate is not None:
        _write_cert(args, report, "deformation.hom", serialize_homotopy(t.certificate))
    return code


def cmd_equiv(args, report):
    X, Y = _image(args), _image(args, "image2")
    t = homotopy_equivalent(X, Y, args.budget)
    code = _tri(report, t, "homotopy equivalent")
    if t.certificate is not None:
        c = t.certificate
        report["certificate_checked"] = c.check()
        _write_cert(args, report, "h1.hom", serialize_homotopy(c.h1))
        _write_cert(args, report, "h2.hom", serialize_homotopy(c.h2))
    return code


def cmd_loops(args, report):
    from .loops import count_loop_classes

    X = _image(args)
    if args.m is None:
        raise InputError("--m is required")
    tab = count_loop_classes(X, args.m, args.budget)
    report.update(m=args.m, loops=tab.total, classes=tab.count, bounds=list(tab.bounds), method="exhaustive",
                  budget_status="ok" if tab.status == "complete" else "exhausted")
    report["representatives"] = [" ".join(",".join(map(str, p)) for p in r) for r in tab.representatives(X)]
    return EXIT_OK if tab.status == "complete" else EXIT_UNKNOWN


def _tc_report(report, res):
    report["value"] = res.value
    report["method"] = res.method
    report["budget_status"] = "ok" if res.value is not None else "exhausted"
    if res.witness is not None:
        report["witness_parts"] = res.witness.k
        report["witness_length"] = res.witness.length
    if res.lower_bound_evidence is not None:
        lb = res.lower_bound_evidence
        report["lower_bound"] = f"contractible={lb.verdict.value} ({lb.method})"
    for key in ("consult_oracle", "reason", "cycle_m", "transfer", "delegated"):
        if key in res.notes:
            report[key] = res.notes[key]


def cmd_tc(args, report):
    X = _image(args)
    res = tc_classify(X, args.budget)
    _tc_report(report, res)
    if res.witness is not None:
        _write_cert(args, report, "planner.plan", serialize_planner(res.witness))
    if args.oracle:
        o = tc_oracle(X, args.length, args.csp_budget, args.budget)
        report["oracle_value"] = o.value
        report["oracle_log"] = [list(e) for e in o.notes.get("log", [])]
        if res.value is not None and o.value is not None and res.value != o.value:
            report["disagreement"] = True
    return EXIT_OK if res.value is not None else EXIT_UNKNOWN


def cmd_tcn(args, report):
    from .higher import global_section_refuter, serialize_higher_planner, tcn_classify

    X = _image(args)
    n = args.n if args.n is not None else 3
    res = tcn_classify(X, n, args.budget)
    report["n"] = n
    _tc_report(report, res)
    if res.witness is not None and hasattr(res.witness, "as_motion_planner"):
        _write_cert(args, report, "higher.plan", serialize_higher_planner(res.witness))
    if args.refute and n >= 2 and res.value != 1:
        r = global_section_refuter(X, n, args.length, args.csp_budget, map_budget=args.budget)
        report["refuter"] = r.verdict.value
        report["refuter_method"] = r.method
        if r.no and res.value == 2:
            report["exact"] = True
    return EXIT_OK if res.value is not None else EXIT_UNKNOWN


def cmd_planner_synth(args, report):
    X = _image(args)
    n = args.n if args.n is not None else 2
    C = detect_simple_closed_curve(X)
    if n == 2:
        if C is not None and C.m >= 4:
            from .planner import synthesize_cycle_planner

            plan = synthesize_cycle_planner(C)
            report["method"] = "certificate"
        else:
            res = tc_classify(X, args.budget)
            plan = res.witness
            report["method"] = res.method
            if plan is None:
                report["budget_status"] = "exhausted" if res.value is None else "ok"
                raise InputError("no planner construction applies to this image")
        text = serialize_planner(plan)
        ok = verify_planner(X, plan).ok
    else:
        from .higher import serialize_higher_planner, synthesize_higher_planner, tcn_classify, verify_higher_planner

        if C is not None:
            plan = synthesize_higher_planner(C, n)
        else:
            res = tcn_classify(X, n, args.budget)
            plan = res.witness
            if plan is None or plan.image != X:
                raise InputError("no higher planner construction applies to this image")
        text = serialize_higher_planner(plan)
        ok = verify_higher_planner(X, plan).ok
        report["method"] = "certificate"
    report.update(parts=plan.k, length=plan.length, n=n, verified=ok, budget_status="ok",
                  construction=plan.meta.get("construction"))
    if args.write:
        Path(args.write).write_text(text)
        report["planner_file"] = args.write
    return EXIT_OK


def cmd_planner_verify(args, report):
    X = _image(args)
    if not args.planner:
        raise InputError("--planner is required")
    text = Path(args.planner).read_text()
    head = [ln.split() for ln in text.splitlines() if ln.strip().startswith("n ")]
    n = int(head[0][1]) if head else 2
    if n == 2:
        plan = parse_planner(text, X, args.planner)
        rep = verify_planner(X, plan)
    else:
        from .higher import parse_higher_planner, verify_higher_planner

        plan = parse_higher_planner(text, X, args.planner)
        rep = verify_higher_planner(X, plan)
    report.update(verdict="yes" if rep.ok else "no", parts=plan.k, length=plan.length, n=n,
                  violations=len(rep.violations), method="exhaustive", budget_status="ok")
    if not rep.ok:
        report["report"] = rep.summary(X).splitlines()
    return EXIT_OK


def cmd_curve_gen(args, report):
    if args.m is None:
        raise InputError("--m is required")
    X = generate_cycle(args.m, args.kind)
    text = serialize_image(X, comment=f"simple closed curve C_{args.m}, {X.kind.name}-adjacency")
    report.update(m=args.m, adjacency=X.kind.name, points=len(X), method="rule", budget_status="ok")
    if args.write:
        Path(args.write).write_text(text)
        report["image_file"] = args.write
    else:
        report["image"] = text.splitlines()
    return EXIT_OK


def cmd_curve_search(args, report):
    if args.m is None:
        raise InputError("--m is required")
    window = args.window if args.window is not None else args.m
    found = search_cycles(args.m, args.kind, window)
    report.update(m=args.m, adjacency=as_kind(args.kind).name, window=window, found=len(found),
                  verdict="yes" if found else "no", method="exhaustive", budget_status="ok")
    report["curves"] = [" ".join(",".join(map(str, p)) for p in X.points) for X in found[:20]]
    return EXIT_OK


def cmd_corpus(args, report):
    window = args.window if args.window is not None else 3
    max_points = args.max_points
    images = connected_images(args.kind, window, max_points)
    report.update(adjacency=as_kind(args.kind).name, window=window, max_points=max_points, images=len(images),
                  method="exhaustive", budget_status="ok")
    if args.write:
        d = Path(args.write)
        d.mkdir(parents=True, exist_ok=True)
        for X in images:
            name = "_".join(f"{x}-{y}" for x, y in X.points) if X.dim == 2 else "_".join(str(p[0]) for p in X.points)
            (d / f"k{X.kind.name}_n{len(X)}_{name}.dimg").write_text(serialize_image(X))
        report["directory"] = str(d)
    return EXIT_OK


def cmd_verify(args, report):
    from .morph import parse_homotopy

    X = _image(args)
    Y = _image(args, "image2") if args.image2 else X
    if not args.cert:
        raise InputError("--cert is required")
    H = parse_homotopy(Path(args.cert).read_text(), X, Y)
    ok = H.check()
    report.update(verdict="yes" if ok else "no", stages=len(H.stages), steps=H.steps, method="exhaustive",
                  budget_status="ok")
    if X == Y:
        report["starts_at_identity"] = H.start.table == tuple(range(len(X)))
        report["ends_constant"] = len(set(H.end.table)) == 1
    return EXIT_OK


VERBS = {
    "info": cmd_info,
    "connected": cmd_connected,
    "contractible": cmd_contractible,
    "reducible": cmd_reducible,
    "rigid": cmd_rigid,
    "equiv": cmd_equiv,
    "loops": cmd_loops,
    "tc": cmd_tc,
    "tcn": cmd_tcn,
    "planner-synth": cmd_planner_synth,
    "planner-verify": cmd_planner_verify,
    "curve-gen": cmd_curve_gen,
    "curve-search": cmd_curve_search,
    "corpus": cmd_corpus,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--image")
    common.add_argument("--image2")
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--length", type=int, help="path length bound for oracle/refuter searches")
    common.add_argument("--window", type=int)
    common.add_argument("--kind", type=int, default=8, help="adjacency name: 2, 4, 8, 6, 18 or 26")
    common.add_argument("--max-points", type=int, default=6)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="visited-map budget")
    common.add_argument("--csp-budget", type=int, default=DEFAULT_CSP_BUDGET, help="CSP node budget")
    common.add_argument("--jobs", type=int, default=1, help="worker cap (all verbs currently run single-worker)")
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--format", choices=("kv", "json"), default="kv")
    common.add_argument("--certs", help="directory for certificate files")
    common.add_argument("--write", help="output file or directory for produced images/planners")
    common.add_argument("--planner", help="planner file to verify")
    common.add_argument("--cert", help="homotopy certificate file to verify")
    common.add_argument("--oracle", action="store_true", help="tc: also run the brute-force oracle")
    common.add_argument("--refute", action=argparse.BooleanOptionalAction, default=True,
                        help="tcn: run the global-section refuter")
    parser = argparse.ArgumentParser(prog="digitop", description="Digital homotopy and topological complexity toolkit")
    parser.add_argument("--version", action="version", version=f"digitop {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        sub.add_parser(verb, parents=[common])
    pl = sub.add_parser("planner", parents=[common], help="alias: planner synth|verify")
    pl.add_argument("action", choices=("synth", "verify"))
    return parser


def _kv_lines(prefix, value):
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _kv_lines(f"{prefix}.{k}" if prefix else str(k), v)
    elif isinstance(value, (list, tuple)):
        yield f"{prefix}: " + " | ".join(str(v) for v in value)
    else:
        yield f"{prefix}: {value}"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, default=str) + "\n"
    return "\n".join(_kv_lines("", report)) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors are input errors; --help and --version exit 0
        return EXIT_INPUT if exc.code else EXIT_OK
    verb = args.verb
    if verb == "planner":
        verb = f"planner-{args.action}"
    report = {
        "tool": "digitop",
        "version": __version__,
        "backend": _kernels.BACKEND,
        "command": verb,
        "flags": {k: v for k, v in vars(args).items() if k not in ("verb", "action")},
    }
    t0 = time.perf_counter()
    try:
        code = VERBS[verb](args, report)
    except (InputError, EmptinessError, FileNotFoundError, IsADirectoryError) as exc:
        report["error"] = str(exc)
        report["error_type"] = type(exc).__name__
        code = EXIT_INPUT
    except ResourceLimitError as exc:
        report["error"] = str(exc)
        report["budget_status"] = "exhausted"
        code = EXIT_UNKNOWN
    except SynthesisError as exc:
        report["error"] = str(exc)
        report["error_type"] = "SynthesisError"
        code = EXIT_UNKNOWN
    report["elapsed_s"] = round(time.perf_counter() - t0, 3)
    report["exit"] = code
    text = render(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_INPUT:
        print(f"digitop: error: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
