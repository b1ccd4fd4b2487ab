"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 usage error (bad arguments
or out-of-range request), 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, TextIO

from .errors import InvalidDimension, OutOfStabilizationRange

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    family: str | None = None
    N: object = None
    checks_run: int = 0
    failures: list[dict] = field(default_factory=list)
    wall_time_ms: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if not self.failures else EXIT_FAIL

    def to_json_obj(self) -> dict:
        obj = {
            "command": self.command,
            "family": self.family,
            "N": self.N,
            "checks_run": self.checks_run,
            "failures": self.failures,
            "wall_time_ms": self.wall_time_ms,
        }
        obj.update(self.extra)
        return obj


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# --------------------------------------------------------------------------
# checks: each returns (name, ok, detail) and is a picklable top-level call
# --------------------------------------------------------------------------

def _check_wdvv(family: str, N: int):
    from .frobenius import wdvv_verify
    from .potentials import potential

    rep = wdvv_verify(potential(family, N))
    return f"wdvv/{family}/{N}", rep.ok, {"quadruples_checked": rep.quadruples_checked, "failures": rep.failures[:5]}


def _check_metric(family: str, N: int):
    from .frobenius import euler_report, metric_from_potential
    from .potentials import expected_eta, potential

    P = potential(family, N)
    m = metric_from_potential(P)
    eu = euler_report(P)
    ok = m.entries == expected_eta(family, N) and eu.ok and not eu.quadratic_monomials
    return f"metric/{family}/{N}", ok, {"euler_ok": eu.ok}


def _check_stabilization(family: str, N1: int, N2: int):
    from .hierarchy import stabilization_verify

    bad = []
    count = 0
    for a in range(1, N1 + 1):
        for b in range(a, N1 + 2):
            limit = a + b <= N1 + 1 if family in ("A", "B") else a + b < N1
            if not limit:
                continue
            count += 1
            if not stabilization_verify(family, N1, N2, a, b):
                bad.append([a, b])
    return f"stabilization/{family}/{N1}-{N2}", not bad, {"pairs_checked": count, "failing_pairs": bad}


def _check_enumerative(family: str, N: int):
    from .combinatorics import admissible_a, admissible_d, verify_a_enumerative, verify_d_enumerative

    keys = list(admissible_a(N) if family == "A" else admissible_d(N))
    fn = verify_a_enumerative if family == "A" else verify_d_enumerative
    bad = [[a, b, list(g)] for a, b, g in keys if not fn(N, a, b, g)]
    return f"enumerative/{family}/{N}", not bad, {"keys_checked": len(keys), "failing": bad[:5]}


def _check_fay(family: str, N: int):
    from .fay import fay_report

    rep = fay_report(family, N)
    return f"fay/{family}/{N}", rep.ok, rep.to_json_obj()


def _check_b_via_d(N: int):
    from .potentials import b_via_d_check

    return f"b-inside-d/{N}", b_via_d_check(N), {}


def _check_compatibility(family: str, N: int, triples):
    from .hierarchy import compatibility_check

    bad = [list(t) for t in triples if not compatibility_check(family, *t, N)]
    return f"compatibility/{family}/{N}", not bad, {"triples_checked": len(triples), "failing": bad}


def _check_round_trip(family: str, N: int):
    from .hierarchy import in_range_lhs, round_trip_check

    lhs = in_range_lhs(family, N)
    bad = [list(x) for x in lhs if not round_trip_check(family, *x, N)]
    return f"round-trip/{family}/{N}", not bad, {"equations_checked": len(lhs), "failing": bad}


def _run_check(job):
    fn, args = job
    return fn(*args)


def _execute(jobs_list, jobs: int) -> list[tuple[str, bool, dict]]:
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_check, jobs_list))
    else:
        results = [_run_check(j) for j in jobs_list]
    return sorted(results, key=lambda r: r[0])


def _report_from_checks(command: str, family, N, results) -> RunReport:
    rep = RunReport(command, family, N)
    rep.checks_run = len(results)
    rep.extra["checks"] = [{"id": name, "ok": ok, "detail": detail} for name, ok, detail in results]
    rep.failures = [{"id": name, "detail": detail} for name, ok, detail in results if not ok]
    return rep


# --------------------------------------------------------------------------
# verbs
# --------------------------------------------------------------------------

def cmd_potential(args) -> tuple[RunReport, str]:
    from .potentials import potential

    P = potential(args.family, args.n)
    rep = RunReport("potential", args.family, args.n)
    text = f"F_{args.family}{args.n} = {P.F.render()}"
    return rep, text, P.to_json_obj()


def cmd_metric(args):
    from .frobenius import metric_from_potential
    from .potentials import potential

    m = metric_from_potential(potential(args.family, args.n))
    rows = [[_frac(x) for x in r] for r in m.entries]
    rep = RunReport("metric", args.family, args.n)
    text = "\n".join(" ".join(str(x) for x in r) for r in m.entries)
    return rep, text, {"family": args.family, "N": args.n, "eta": rows}


def cmd_rtable(args):
    from .hierarchy import build_rtable

    fam = args.family
    tables = [build_rtable(fam, args.max_order)]
    if fam == "D":
        tables.append(build_rtable("D2", args.max_order))
    rep = RunReport("rtable", fam, None)
    payload = {"max_order": args.max_order, "tables": [t.to_json_obj() for t in tables]}
    lines = []
    for t in tables:
        for key, val in t.sorted_items():
            if t.family == "D2":
                lines.append(f"R[D2] {key[0]}; {','.join(map(str, key[1])) or '-'} = {val}")
            else:
                lines.append(f"R[{t.family}] {key[0]},{key[1]}; {','.join(map(str, key[2]))} = {val}")
    return rep, "\n".join(lines), payload


def cmd_hierarchy(args):
    from .hierarchy import assemble_equation

    if len(args.lhs) != 2:
        raise UsageError("--lhs needs two indices, e.g. 2,2 or 0,3")
    a, b = args.lhs
    if a == 0 and args.family != "D":
        raise UsageError("lhs (0, b) exists only for family D")
    if min(b, a if a else 2) < 1:
        raise UsageError("indices must be positive")
    eq = assemble_equation(args.family, a, b, Fraction(args.scale) if args.scale else None)
    rep = RunReport("hierarchy", args.family, None)
    return rep, eq.render(), eq.to_json_obj()


def cmd_oracle(args):
    from .combinatorics import count_p_hat

    if min([args.i, args.j] + args.gammas) < 1:
        raise UsageError("all inputs must be positive")
    n = count_p_hat(args.i, args.j, args.gammas)
    rep = RunReport("oracle phat", None, None)
    return rep, str(n), {"i": args.i, "j": args.j, "gammas": args.gammas, "count": n}


def _format_checks(rep: RunReport) -> str:
    lines = []
    for c in rep.extra.get("checks", []):
        lines.append(f"{'PASS' if c['ok'] else 'FAIL'} {c['id']}")
    lines.append(f"{rep.checks_run - len(rep.failures)}/{rep.checks_run} checks passed")
    return "\n".join(lines)


def cmd_verify(args):
    from .hierarchy import in_range_triples
    from .potentials import check_dimension

    what = args.what
    fam = getattr(args, "family", None)
    if what == "wdvv":
        check_dimension(fam, args.n)
        name, ok, detail = _check_wdvv(fam, args.n)
        rep = _report_from_checks("verify wdvv", fam, args.n, [(name, ok, detail)])
        rep.extra.update(detail)
        rep.checks_run = detail["quadruples_checked"]
        rep.failures = detail["failures"]
        return rep, _format_checks(rep), None
    if what == "stabilization":
        check_dimension(fam, args.n1)
        if args.n2 <= args.n1:
            raise UsageError("--n2 must exceed --n1")
        results = [_check_stabilization(fam, args.n1, args.n2)]
        rep = _report_from_checks("verify stabilization", fam, [args.n1, args.n2], results)
        return rep, _format_checks(rep), None
    if what == "compatibility":
        check_dimension(fam, args.n)
        if args.triple:
            if len(args.triple) != 3:
                raise UsageError("--triple needs three indices")
            triples = [tuple(args.triple)]
        else:
            triples = in_range_triples(fam, args.n, args.max_index)
            if args.sample is not None:
                rng = random.Random(args.seed)
                triples = sorted(rng.sample(triples, min(args.sample, len(triples))))
        results = [_check_compatibility(fam, args.n, triples)]
        rep = _report_from_checks("verify compatibility", fam, args.n, results)
        return rep, _format_checks(rep), None
    if what == "enumerative":
        if fam not in ("A", "D"):
            raise UsageError("enumerative checks exist for families A and D")
        check_dimension(fam, args.n)
        rep = _report_from_checks("verify enumerative", fam, args.n, [_check_enumerative(fam, args.n)])
        return rep, _format_checks(rep), None
    if what == "fay":
        check_dimension(fam, args.n)
        if fam in ("A", "B") and args.n < 2:
            raise UsageError("fay checks need N >= 2")
        rep = _report_from_checks("verify fay", fam, args.n, [_check_fay(fam, args.n)])
        return rep, _format_checks(rep), None
    if what == "all":
        return _verify_all(args)
    raise UsageError(f"unknown verify target {what!r}")


def _verify_all(args):
    from .hierarchy import in_range_triples

    M = args.max_n
    if M < 4:
        raise UsageError("--max-n must be at least 4")
    jobs_list: list[tuple[Callable, tuple]] = []
    ranges = {"A": range(1, M + 1), "B": range(2, M + 1), "D": range(4, M + 1)}
    for fam, rng in ranges.items():
        for N in rng:
            jobs_list.append((_check_wdvv, (fam, N)))
            jobs_list.append((_check_metric, (fam, N)))
        for N1 in rng:
            if N1 + 2 <= M and N1 >= max(3, rng.start):
                jobs_list.append((_check_stabilization, (fam, N1, N1 + 2)))
        for N in rng:
            if fam != "A" or N >= 2:
                jobs_list.append((_check_fay, (fam, N)))
        jobs_list.append((_check_compatibility, (fam, M, in_range_triples(fam, M, 4))))
        jobs_list.append((_check_round_trip, (fam, M)))
    for fam in ("A", "D"):
        jobs_list.append((_check_enumerative, (fam, M)))
    for N in range(3, M):
        jobs_list.append((_check_b_via_d, (N,)))
    jobs_list.append((_check_golden, ()))
    results = _execute(jobs_list, args.jobs)
    rep = _report_from_checks("verify all", None, M, results)
    return rep, _format_checks(rep), None


def _check_golden():
    from .hierarchy import assemble_equation, render_rhs
    from .reference import D_FLOWS

    bad = []
    for lhs, text in sorted(D_FLOWS.items()):
        got = render_rhs(assemble_equation("D", *lhs).cofactor())
        if got != text:
            bad.append({"lhs": list(lhs), "expected": text, "got": got})
    return "golden/D-flows", not bad, {"failing": bad}


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--json", dest="format", action="store_const", const="json", default=d("text"),
                   help="shorthand for --format json")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for verification")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized subsets")
    p.add_argument("--no-timing", action="store_true", default=d(False),
                   help="report wall_time_ms as 0 for byte-stable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobhier", allow_abbrev=False, description="Exact A/B/D Frobenius potentials and their hierarchies.")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, allow_abbrev=False, **kw)
        _add_globals(p, suppress=True)
        return p

    fam = dict(choices=("A", "B", "D"), required=True)
    p = add("potential", help="print F_N")
    p.add_argument("--family", **fam)
    p.add_argument("--n", type=int, required=True)
    p = add("metric", help="print eta extracted from F_N")
    p.add_argument("--family", **fam)
    p.add_argument("--n", type=int, required=True)
    p = add("rtable", help="stabilized coefficient tables")
    p.add_argument("--family", **fam)
    p.add_argument("--max-order", type=int, required=True)
    p = add("hierarchy", help="assemble one equation")
    p.add_argument("--family", **fam)
    p.add_argument("--lhs", type=_int_list, required=True)
    p.add_argument("--scale", default=None, help="solve by f = scale * F_N (default 1 for A/B, 2 for D)")

    p = add("oracle", help="counting oracles")
    osub = p.add_subparsers(dest="oracle", required=True)
    ph = osub.add_parser("phat", allow_abbrev=False, help="count composition pairs")
    _add_globals(ph, suppress=True)
    ph.add_argument("--i", type=int, required=True)
    ph.add_argument("--j", type=int, required=True)
    ph.add_argument("--gammas", type=_int_list, required=True)

    p = add("verify", help="run verifications")
    vsub = p.add_subparsers(dest="what", required=True)

    def vadd(name):
        q = vsub.add_parser(name, allow_abbrev=False)
        _add_globals(q, suppress=True)
        return q

    q = vadd("wdvv")
    q.add_argument("--family", **fam)
    q.add_argument("--n", type=int, required=True)
    q = vadd("stabilization")
    q.add_argument("--family", **fam)
    q.add_argument("--n1", type=int, required=True)
    q.add_argument("--n2", type=int, required=True)
    q = vadd("compatibility")
    q.add_argument("--family", **fam)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--triple", type=_int_list, default=None)
    q.add_argument("--max-index", type=int, default=4)
    q.add_argument("--sample", type=int, default=None, help="check a seeded random subset of triples")
    q = vadd("enumerative")
    q.add_argument("--family", **fam)
    q.add_argument("--n", type=int, required=True)
    q = vadd("fay")
    q.add_argument("--family", **fam)
    q.add_argument("--n", type=int, required=True)
    q = vadd("all")
    q.add_argument("--max-n", type=int, default=6)
    return parser


DISPATCH = {
    "potential": cmd_potential,
    "metric": cmd_metric,
    "rtable": cmd_rtable,
    "hierarchy": cmd_hierarchy,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
}


def run(argv: list[str], out: TextIO | None = None, err: TextIO | None = None) -> tuple[int, RunReport | None]:
    """Parse ``argv``, dispatch, write the output; returns ``(exit_code, report)``."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (EXIT_USAGE if e.code else EXIT_OK), None
    start = time.perf_counter()
    try:
        report, text, payload = DISPATCH[args.verb](args)
    except (UsageError, InvalidDimension, OutOfStabilizationRange, ValueError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE, None
    except Exception as e:  # anything else is a broken internal invariant
        print(f"internal error: {type(e).__name__}: {e}", file=err)
        return EXIT_INTERNAL, None
    report.wall_time_ms = 0 if args.no_timing else int((time.perf_counter() - start) * 1000)
    if args.format == "json":
        obj = report.to_json_obj() if payload is None else payload
        out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        out.write(text + "\n")
    return report.exit_code, report


def main(argv: list[str] | None = None) -> None:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    sys.exit(code)


if __name__ == "__main__":
    main()
