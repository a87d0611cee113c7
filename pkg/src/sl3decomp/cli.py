"""Command line front end.

    sl3decomp build E8 -o e8.json --jacobi --jobs 4
    sl3decomp verify bad.json --conditions
    sl3decomp extract-structurable F4 -o f4_L0.json
    sl3decomp kantor E6 --identification e6_phi.json
    sl3decomp series E8 --jacobi --killing
    sl3decomp export --series G2 g2.json

TARGET is a series tag (G2 F4 E6 E7 E8 SL4 SL5 OCT), a mutant name, or a path
to a coordinate datum in JSON. Exit codes: 0 every requested check passed,
1 some check failed, 2 bad input. Reports are deterministic; wall-clock
timings go to stderr and, with --out, to a ``.timing.json`` sidecar.
"""
import argparse
import json
import os
import sys
import time

from . import exceptional
from .algebra import AlgebraError
from .coord import CoordinateDatum, DatumError, check_conditions, check_corollary, check_degree4

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class _Clock:
    def __init__(self):
        self.laps = {}

    def __call__(self, name, fn, *args, **kw):
        t = time.perf_counter()
        out = fn(*args, **kw)
        self.laps[name] = round(time.perf_counter() - t, 3)
        return out


# -- inputs -------------------------------------------------------------------------
def _named_data():
    names = {s: (lambda s=s: exceptional.build_datum(s)) for s in exceptional.SERIES + exceptional.FAMILY}
    names["OCT"] = exceptional.octonion_datum
    return names


def load_target(target):
    named = _named_data()
    if target in named:
        return named[target]()
    mut = {m.name: m for m in exceptional.mutants()} if target.count("-") else {}
    if target in mut:
        return mut[target]
    if not os.path.exists(target):
        raise InputError(f"{target}: not a series tag, mutant name or readable file")
    try:
        with open(target) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{target}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return CoordinateDatum.from_json(raw).validate()
    except DatumError as exc:
        raise InputError(f"{target}: {exc}") from None


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path, obj):
    with open(path, "w") as fh:
        fh.write(_dump(obj))


# -- checks -------------------------------------------------------------------------
def _checks(args, d, clock, report):
    """Run the verification flags on datum d; returns the assembled table."""
    from .liealg import assemble, jacobi_check, killing_rank

    L = clock("assemble", assemble, d)
    report["dim"] = L.n
    report["dims"] = dict(d.dims)
    ok = True
    if args.conditions:
        r = clock("conditions", check_conditions, d)
        report["conditions"] = r.to_json()
        ok &= r.passed
        for sec, fails in r.failures.items():
            if fails:
                _say(f"condition {sec} fails: {fails[0].identity} at {list(fails[0].witness)}")
    if args.corollary:
        r = clock("corollary", check_corollary, d)
        report["corollary"] = r.to_json()
        ok &= r.passed
        for sec, fails in r.failures.items():
            if fails:
                _say(f"corollary clause '{sec}' fails")
    if args.degree4:
        r = clock("degree4", check_degree4, d, seed=args.sample_seed)
        report["degree4"] = r.to_json()
        ok &= r.passed
    if args.jacobi:
        j = clock("jacobi", jacobi_check, L, jobs=args.jobs)
        report["jacobi"] = j.to_json(L.labels)
        ok &= j.passed
        if not j.passed:
            _say(f"jacobi fails at {report['jacobi'].get('witness')}")
    if args.killing:
        r = clock("killing", killing_rank, L)
        report["killing"] = {"rank": r, "verdict": "pass" if r == L.n else "fail"}
        ok &= r == L.n
    report["passed"] = bool(ok)
    return L


def _say(msg):
    print(msg, file=sys.stderr)


# -- verbs --------------------------------------------------------------------------
def cmd_build(args, clock):
    d = load_target(args.target)
    report = {"verb": "build", "datum": d.name}
    L = _checks(args, d, clock, report)
    if args.output:
        _write(args.output, L.to_json())
        report["table"] = os.path.basename(args.output)
    return report


def cmd_verify(args, clock):
    if not (args.conditions or args.corollary or args.jacobi or args.killing or args.degree4):
        args.conditions = True
    d = load_target(args.target)
    report = {"verb": "verify", "datum": d.name}
    _checks(args, d, clock, report)
    return report


def cmd_extract(args, clock):
    from .liealg import assemble
    from .structurable import check_structurable_axiom, closed_form, compare_tables, extract_L0

    d = load_target(args.target)
    L = clock("assemble", assemble, d)
    S = clock("extract", extract_L0, L)
    diff = compare_tables(S, closed_form(d))
    ax = clock("axiom", check_structurable_axiom, S, seed=args.sample_seed)
    report = {"verb": "extract-structurable", "datum": d.name, "dim": S.dim,
              "skew_dim": S.skew_elements().dim,
              "closed_form": {"verdict": "pass" if diff is None else "fail",
                              **({"witness": list(diff)} if diff else {})},
              "axiom": ax.to_json()}
    report["passed"] = diff is None and ax.passed
    if args.output:
        _write(args.output, S.to_json())
    return report


def cmd_kantor(args, clock):
    from .kantor import identify_sl3, kantor_build, tri_inner
    from .liealg import assemble, jacobi_check
    from .structurable import extract_L0

    d = load_target(args.target)
    L = clock("assemble", assemble, d)
    S = clock("extract", extract_L0, L)
    T = clock("tri_inner", tri_inner, S)
    K = clock("kantor_build", kantor_build, S, T)
    j = clock("jacobi", jacobi_check, K.table, jobs=args.jobs)
    I = clock("identify", identify_sl3, K, d, L)
    report = {"verb": "kantor", "datum": d.name, "dim": K.dim, "dim_T_I": T.dim,
              "derivation_dim": T.derivation_dim, "skew_dim": T.skew_dim,
              "der_plus_skew_is_T_I": T.decomposes,
              "jacobi": j.to_json(K.table.labels),
              "identification": {"rank": I.rank, "checks": I.checks,
                                 "verdict": "pass" if I.passed else "fail",
                                 **({"witness": list(I.witness)} if I.witness else {})}}
    report["passed"] = j.passed and I.passed
    if args.output:
        _write(args.output, K.table.to_json())
    if args.identification:
        from .exact import rat_str
        M = I.matrix.to_fractions()
        _write(args.identification, {"shape": list(M.shape),
                                     "columns_are": "images of the direct basis",
                                     "rows": [[rat_str(x) for x in row] for row in M.tolist()]})
    return report


def cmd_series(args, clock):
    if args.tag not in exceptional.EXPECTED:
        raise InputError(f"unknown series {args.tag!r}; expected one of {sorted(exceptional.EXPECTED)}")
    rep = clock("series", exceptional.series_report, args.tag, jacobi=args.jacobi,
                kantor=not args.no_kantor, jobs=args.jobs)
    rep["verb"] = "series"
    return rep


def cmd_export(args, clock):
    from .liealg import assemble

    target = args.series or args.datum
    if not target:
        raise InputError("export needs --series TAG or --datum PATH")
    d = load_target(target)
    if args.what == "datum":
        obj = d.to_json()
    else:
        obj = clock("assemble", assemble, d).to_json()
    _write(args.output, obj)
    return {"verb": "export", "datum": d.name, "what": args.what, "passed": True,
            "file": os.path.basename(args.output)}


# -- parser -------------------------------------------------------------------------
def _flags(p, checks=True):
    if checks:
        p.add_argument("--conditions", action="store_true", help="conditions (0)-(6) of the characterization")
        p.add_argument("--corollary", action="store_true", help="the corollary clauses")
        p.add_argument("--degree4", action="store_true", help="quartic identities on basis and random pairs")
        p.add_argument("--jacobi", action="store_true", help="Jacobi identity on all basis triples")
        p.add_argument("--killing", action="store_true", help="exact Killing form rank")
    p.add_argument("--sample-seed", type=int, default=0, metavar="N")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="sl3decomp", description="Lie algebras with a prescribed sl3 decomposition")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build", help="assemble the bracket table of a datum")
    p.add_argument("target")
    p.add_argument("-o", "--output", help="bracket table JSON")
    _flags(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("verify", help="run checks on a datum (default --conditions)")
    p.add_argument("target")
    _flags(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("extract-structurable", help="extract the structurable algebra L0")
    p.add_argument("target")
    p.add_argument("-o", "--output", help="structurable algebra JSON")
    _flags(p, checks=False)
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("kantor", help="rebuild L from L0 and identify it with the direct build")
    p.add_argument("target")
    p.add_argument("-o", "--output", help="Kantor bracket table JSON")
    p.add_argument("--identification", metavar="PATH", help="change-of-basis matrix JSON")
    _flags(p, checks=False)
    p.set_defaults(fn=cmd_kantor)

    p = sub.add_parser("series", help="invariants of a series against the expected table")
    p.add_argument("tag")
    p.add_argument("--jacobi", action="store_true")
    p.add_argument("--killing", action="store_true", help="accepted for symmetry; the rank is always reported")
    p.add_argument("--no-kantor", action="store_true", help="skip the T_I dimension")
    _flags(p, checks=False)
    p.set_defaults(fn=cmd_series)

    p = sub.add_parser("export", help="write a bracket table or datum as JSON")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--series", metavar="TAG")
    g.add_argument("--datum", metavar="PATH")
    p.add_argument("--what", choices=("table", "datum"), default="table")
    p.add_argument("output")
    _flags(p, checks=False)
    p.set_defaults(fn=cmd_export)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        _say("--jobs must be positive")
        return EXIT_INPUT
    clock = _Clock()
    try:
        report = args.fn(args, clock)
    except InputError as exc:
        _say(f"input error: {exc}")
        return EXIT_INPUT
    except (DatumError, AlgebraError) as exc:
        _say(f"verification error: {exc}")
        return EXIT_FAIL
    if args.out:
        _write(args.out, report)
        _write(args.out + ".timing.json", clock.laps)
    else:
        sys.stdout.write(_dump(report))
    _say("timing " + " ".join(f"{k}={v}s" for k, v in clock.laps.items()))
    return EXIT_OK if report.get("passed", False) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
