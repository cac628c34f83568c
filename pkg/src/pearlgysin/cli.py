"""Command line front end.

    engine check|les|euler|product|classical|periodicity <file>... [options]

Files are paths, or names of bundled datasets (looked up under
$ENGINE_CORPUS_DIR, falling back to the datasets shipped with the package).

Exit codes: 0 all checks pass; 1 a structural check failed (an identity the
algebra must satisfy does not hold); 2 the data is structurally sound but an
`expectations` block disagrees with what was computed; 3 the file could not
be read or does not match the schema.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import io as dio
from .bundle import (
    BundleComplex,
    ambient_variant,
    build_bundle_complex,
    classical_gysin,
    euler_class,
    long_exact_sequence,
)
from .chains import format_cochain
from .complexes import (
    build_complex,
    check_d_squared,
    check_euler_balance,
    classical_complex,
    cohomology,
)
from .errors import EngineError, NotInvertible, SchemaError
from .positive import (
    coefficient_sequence_check,
    comparison_ladder,
    injectivity_window,
    narrowness_obstruction,
    periodicity_check,
    positive_complex,
    sigma_euler_check,
    sigma_map,
    theta_ladder,
)
from .products import (
    check_homology_ring,
    check_leibniz,
    check_lifted_unit,
    check_product_lift,
    delta_equals_mult_eF,
    invertibility,
    quantum_restriction,
)
from .snake import Check

EXIT_OK = 0
EXIT_STRUCTURAL = 1
EXIT_EXPECTATION = 2
EXIT_SCHEMA = 3

_WINDOW = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


def parse_window(text: str) -> tuple[int, int]:
    m = _WINDOW.match(text)
    if not m:
        raise SchemaError("--window", f"expected a..b, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if hi <= lo:
        raise SchemaError("--window", f"empty window {text!r}")
    return lo, hi


def resolve(name: str) -> str:
    if os.path.exists(name):
        return name
    candidate = dio.bundled_path(name)
    if candidate.exists():
        return str(candidate)
    raise SchemaError(name, "no such file or bundled dataset")


def _check_dict(c: Check) -> dict:
    return {"name": c.name, "ok": c.ok, "details": c.details}


def _require_twist(ds: dio.DatasetFile) -> BundleComplex:
    if ds.twist is None:
        raise EngineError("dataset has no twist block; bundle commands need one")
    return build_bundle_complex(build_complex(ds.pearl), ds.twist)


def _betti_check(ds: dio.DatasetFile, cx) -> Check | None:
    hint = ds.pearl.betti_hint
    if hint is None:
        return None
    z2 = classical_complex(cx)
    dims = {d: q.dim for d, q in z2.cohomology().items()}
    top = max(len(hint) - 1, max(dims) if dims else 0)
    got = [dims.get(k, 0) for k in range(top + 1)]
    want = [hint[k] if k < len(hint) else 0 for k in range(top + 1)]
    return Check(
        "betti hint",
        got == want,
        [] if got == want else [f"classical dims {got}, hint {want}"],
    )


def _expectation_checks(
    ds: dio.DatasetFile, table, euler, gamma_vanishes
) -> list[Check]:
    exp = ds.expectations
    if exp is None:
        return []
    out = []
    n = ds.pearl.N
    if exp.qh_dims is not None:
        got = [table.dim(k) for k in range(n)]
        out.append(
            Check(
                "expected QH dims",
                got == list(exp.qh_dims),
                [] if got == list(exp.qh_dims) else [f"computed {got}, expected {list(exp.qh_dims)}"],
            )
        )
    if exp.euler_class is not None and euler is not None:
        got = str(euler)
        out.append(
            Check(
                "expected Euler class",
                got == exp.euler_class,
                [] if got == exp.euler_class else [f"computed {got}, expected {exp.euler_class}"],
            )
        )
    if exp.expect_gamma_vanishes is not None and gamma_vanishes is not None:
        ok = gamma_vanishes == exp.expect_gamma_vanishes
        out.append(
            Check(
                "expected QH(total) vanishing",
                ok,
                [] if ok else [f"computed {gamma_vanishes}, expected {exp.expect_gamma_vanishes}"],
            )
        )
    return out


# ---------------------------------------------------------------------------
# subcommands: each returns (structural checks, expectation checks, payload)
# ---------------------------------------------------------------------------


def run_check(ds: dio.DatasetFile, args) -> tuple[list[Check], list[Check], dict]:
    cx = build_complex(ds.pearl)
    checks = [check_d_squared(cx), check_euler_balance(cx)]
    if (b := _betti_check(ds, cx)) is not None:
        checks.append(b)

    pos = positive_complex(ds.pearl)
    sm = sigma_map(pos)
    checks += [sm.chain_check, injectivity_window(pos, sm), coefficient_sequence_check(pos)]

    table = cohomology(cx)
    euler = None
    gamma = None
    if ds.twist is not None:
        bundle = build_bundle_complex(cx, ds.twist)
        les = long_exact_sequence(bundle)
        euler = les.euler
        gamma = les.gamma_vanishes()
        checks.append(les.chain_checks)
        checks.append(
            Check(
                "long exact sequence",
                les.ok(),
                [] if les.ok() else ["exactness failed at some node"],
            )
        )
        classical = classical_gysin(bundle)
        checks.append(Check("classical comparison", classical.ok()))
        checks.append(comparison_ladder(ds.pearl, ds.twist).checks)
        checks.append(theta_ladder(ds.pearl, ds.twist).checks)
        checks.append(sigma_euler_check(ds.pearl, ds.twist))
    if ds.product is not None:
        checks.append(check_leibniz(ds.product, cx))
        checks.append(check_homology_ring(ds.product, cx, table))
        if ds.twist is not None:
            bundle = build_bundle_complex(cx, ds.twist)
            checks.append(check_product_lift(ds.product, bundle))
            checks.append(check_lifted_unit(ds.product, bundle))
            checks.append(delta_equals_mult_eF(bundle, ds.product, table))
    if ds.module_action is not None:
        ds.module_action.validate(cx)
        degree2 = [a.id for a in ds.module_action.ambient_classes if a.degree == 2]
        if euler is not None and len(degree2) == 1:
            r = quantum_restriction(ds.module_action, cx)
            n = cx.step
            _, rc = table.coords(r, 2 % n)
            ok = (rc == euler.coords).all() and rc.shape == euler.coords.shape
            checks.append(
                Check(
                    "ambient restriction equals Euler class",
                    bool(ok),
                    []
                    if ok
                    else [f"r_L = {format_cochain(r, cx.ring.symbol, cx.order)}, e_F = {euler}"],
                )
            )
    expect = _expectation_checks(ds, table, euler, gamma)
    payload = {
        "qh_dims": {str(k): table.dim(k) for k in range(cx.step)},
        "euler_class": None if euler is None else str(euler),
        "gamma_vanishes": gamma,
    }
    return checks, expect, payload


def _les_payload(les, n: int) -> dict:
    return {
        "window": list(les.window),
        "base_dims": {str(k): v for k, v in les.base_dims.items()},
        "gamma_dims": {str(k): v for k, v in les.gamma_dims.items()},
        "euler_class": None if les.euler is None else str(les.euler),
        "gamma_vanishes": les.gamma_vanishes(),
        "rows": [
            {
                "k": r.k,
                "dims": r.dims,
                "delta": r.delta.tolist(),
                "i": r.i.tolist(),
                "p": r.p.tolist(),
                "nodes": r.nodes,
            }
            for r in les.rows
        ],
    }


def run_les(ds: dio.DatasetFile, args) -> tuple[list[Check], list[Check], dict]:
    bundle = _require_twist(ds)
    if args.ambient:
        bundle = ambient_variant(bundle)
    window = parse_window(args.window) if args.window else None
    les = long_exact_sequence(bundle, window)
    checks = [les.chain_checks]
    for row in les.rows:
        bad = [name for name, ok in row.nodes.items() if not ok]
        checks.append(
            Check(
                f"exactness at k={row.k}",
                row.ok(),
                [] if row.ok() else [f"failing nodes: {', '.join(bad)}"],
            )
        )
    return checks, [], _les_payload(les, bundle.base.step)


def run_euler(ds: dio.DatasetFile, args) -> tuple[list[Check], list[Check], dict]:
    bundle = _require_twist(ds)
    if args.ambient:
        bundle = ambient_variant(bundle)
    e = euler_class(bundle)
    payload = {
        "euler_class": str(e),
        "residue": e.residue,
        "coords": e.coords.tolist(),
        "is_zero": e.is_zero(),
    }
    checks = [Check("Euler class computed (connecting lifts agree)", True, [str(e)])]
    return checks, [], payload


def run_product(ds: dio.DatasetFile, args) -> tuple[list[Check], list[Check], dict]:
    if ds.product is None:
        raise EngineError("dataset has no product block")
    cx = build_complex(ds.pearl)
    table = cohomology(cx)
    checks = [
        check_leibniz(ds.product, cx),
        check_homology_ring(ds.product, cx, table),
    ]
    payload: dict = {}
    if ds.twist is not None:
        bundle = build_bundle_complex(cx, ds.twist)
        checks += [
            check_product_lift(ds.product, bundle),
            check_lifted_unit(ds.product, bundle),
            delta_equals_mult_eF(bundle, ds.product, table),
        ]
        e = euler_class(bundle)
        payload["euler_class"] = str(e)
        try:
            inv = invertibility(ds.product, cx, e.rep, table)
            payload["euler_inverse"] = format_cochain(inv.rep, cx.ring.symbol, cx.order)
        except NotInvertible as exc:
            payload["euler_inverse"] = None
            payload["not_invertible"] = str(exc)
    return checks, [], payload


def run_classical(ds: dio.DatasetFile, args) -> tuple[list[Check], list[Check], dict]:
    bundle = _require_twist(ds)
    rep = classical_gysin(bundle)
    checks = [rep.ses_checks] + rep.node_checks
    payload = {
        "base_dims": {str(k): v for k, v in rep.base_dims.items()},
        "total_dims": {str(k): v for k, v in rep.total_dims.items()},
        "euler_rep": format_cochain(rep.euler_rep, "t", bundle.base.order),
        "euler_is_zero": rep.euler_is_zero,
    }
    return checks, [], payload


def run_periodicity(ds: dio.DatasetFile, args) -> tuple[list[Check], list[Check], dict]:
    bundle = _require_twist(ds)
    les = long_exact_sequence(bundle)
    n = bundle.base.step
    dims = {k: les.base_dims.get(k, 0) for k in range(n)}
    verdict = periodicity_check(dims, n, les.gamma_vanishes())
    detail = [] if verdict.applicable and verdict.ok else [verdict.line().split(": ", 1)[1]]
    checks = [Check("2-periodicity", verdict.ok, detail)]
    z2 = classical_complex(bundle.base)
    betti_dims = {d: q.dim for d, q in z2.cohomology().items()}
    top = max(betti_dims) if betti_dims else 0
    betti = [betti_dims.get(k, 0) for k in range(top + 1)]
    narrow = narrowness_obstruction(betti, n)
    payload = {
        "applicable": verdict.applicable,
        "qh_dims": {str(k): dims[k] for k in range(n)},
        "gamma_vanishes": les.gamma_vanishes(),
        "betti": betti,
        "narrowness_criterion": (
            "holds (HF nonzero)" if narrow.ok else f"inconclusive ({'; '.join(narrow.details)})"
        ),
    }
    return checks, [], payload


RUNNERS = {
    "check": run_check,
    "les": run_les,
    "euler": run_euler,
    "product": run_product,
    "classical": run_classical,
    "periodicity": run_periodicity,
}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def run_file(command: str, path_arg: str, args) -> tuple[int, dict]:
    report: dict = {"file": path_arg, "command": command}
    try:
        path = resolve(path_arg)
        ds = dio.load(path)
    except SchemaError as exc:
        report["error"] = str(exc)
        report["status"] = "schema-error"
        return EXIT_SCHEMA, report
    except EngineError as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        report["status"] = "structural-failure"
        return EXIT_STRUCTURAL, report
    report["name"] = ds.name
    try:
        checks, expect, payload = RUNNERS[command](ds, args)
    except SchemaError as exc:
        report["error"] = str(exc)
        report["status"] = "schema-error"
        return EXIT_SCHEMA, report
    except EngineError as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        report["status"] = "structural-failure"
        return EXIT_STRUCTURAL, report
    report.update(payload)
    report["checks"] = [_check_dict(c) for c in checks]
    report["expectation_checks"] = [_check_dict(c) for c in expect]
    if not all(c.ok for c in checks):
        report["status"] = "structural-failure"
        return EXIT_STRUCTURAL, report
    if not all(c.ok for c in expect):
        report["status"] = "expectation-mismatch"
        return EXIT_EXPECTATION, report
    report["status"] = "pass"
    return EXIT_OK, report


def _print_text(report: dict) -> None:
    name = report.get("name", "?")
    print(f"[{report['command']}] {report['file']} ({name}): {report['status']}")
    if "error" in report:
        print(f"  error: {report['error']}")
        return
    for c in report.get("checks", []) + report.get("expectation_checks", []):
        mark = "OK" if c["ok"] else "FAIL"
        tail = f" ({'; '.join(c['details'])})" if c["details"] else ""
        print(f"  {c['name']}: {mark}{tail}")
    for key in ("qh_dims", "gamma_dims", "base_dims", "total_dims"):
        if key in report and isinstance(report[key], dict):
            dims = ", ".join(f"{k}:{v}" for k, v in report[key].items())
            print(f"  {key}: {dims}")
    for key in (
        "euler_class",
        "euler_inverse",
        "euler_rep",
        "gamma_vanishes",
        "applicable",
        "narrowness_criterion",
    ):
        if key in report and report[key] is not None:
            print(f"  {key}: {report[key]}")
    if report.get("not_invertible"):
        print(f"  not invertible: {report['not_invertible']}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="engine",
        description="Checks and reports for pearl complexes and their circle bundles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("check", "run every structural check and verify the expectations block"),
        ("les", "print the long exact sequence with exactness verdicts"),
        ("euler", "compute the Floer-Euler class"),
        ("product", "verify the quantum product and its lift"),
        ("classical", "the classical spectral comparison (t = 0)"),
        ("periodicity", "2-periodicity and narrowness obstruction"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("files", nargs="+", help="dataset paths or bundled names")
        p.add_argument("--window", help="degree window a..b for windowed reports")
        p.add_argument("--ambient", action="store_true", help="use the ambient-coefficient variant")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
    args = parser.parse_args(argv)

    worst = EXIT_OK
    reports = []
    for f in args.files:
        code, report = run_file(args.command, f, args)
        worst = max(worst, code)
        reports.append(report)
        if not args.json:
            _print_text(report)
    if args.json:
        print(json.dumps({"command": args.command, "reports": reports}, indent=2))
    return worst


if __name__ == "__main__":
    sys.exit(main())
