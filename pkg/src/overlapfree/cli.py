"""Command line front end: ``python3 -m overlapfree <verb> ...``.

Exit status is 0 when every requested check passes, 1 when a check fails,
2 on bad arguments and 3 on an unexpected internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class RunReport:
    command: list
    results: list = field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__
    exit_code: int = EXIT_OK

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=str)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="overlapfree", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads for enumerations (default: all cores)")
    p.add_argument("--report", metavar="PATH",
                   help="also write a JSON run report to PATH")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("count", help="u_N from the matrix recurrence")
    s.add_argument("n", type=_nonneg)
    s = sub.add_parser("oracle", help="u_N by brute-force enumeration")
    s.add_argument("n", type=_nonneg)
    s.add_argument("--budget", type=int, default=2000)

    s = sub.add_parser("table", help="export (n, u_n)")
    s.add_argument("--from", dest="a", type=_nonneg, default=1)
    s.add_argument("--to", dest="b", type=_nonneg, default=200)
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true")
    fmt.add_argument("--json", action="store_true")

    s = sub.add_parser("bounds", help="growth exponent enclosures as JSON")
    s.add_argument("which", choices=["alpha", "beta", "sigma", "all"])
    s.add_argument("--depth", type=int, default=None,
                   help="product length for alpha's upper bound (default 11)")
    s.add_argument("--k", type=int, default=12, help="m_k length for sigma")
    s.add_argument("--cert", choices=["appendix-d"], default="appendix-d")
    s.add_argument("--s", type=int, default=8)
    s.add_argument("--t", type=int, default=16)

    s = sub.add_parser("verify", help="run stored-data checks")
    s.add_argument("what", choices=["constants", "cone", "zm", "appendix-c", "appendix-d", "all"])

    s = sub.add_parser("exponents", help="alpha_k, beta_k CSV")
    s.add_argument("--kmax", type=int, default=20)

    s = sub.add_parser("estimate-sigma", help="sample log u_n / log n")
    s.add_argument("--k", type=int, default=30)
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)

    sub.add_parser("dump-constants", help="embedded data as JSON")

    s = sub.add_parser("search-lsr", help="search a cone certificate")
    s.add_argument("--r", type=str, required=True, help="per-step rate, e.g. 2.3")
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--budget", type=int, default=50)
    return p


def _echo(obj) -> None:
    print(json.dumps(obj, indent=2, default=str))


def _verify(what: str, threads: int) -> list[dict]:
    from .constants import ConeParams, load, validate_cone, validate_structure, validate_zm_in_S
    d = load()
    out = []
    if what in ("constants", "all"):
        out += [r.as_dict() for r in validate_structure(d, strict=False)]
    if what in ("cone", "all"):
        out.append(validate_cone(ConeParams(), d).as_dict())
    if what in ("zm", "all"):
        out.append(validate_zm_in_S(d, strict=False).as_dict())
    if what in ("appendix-c", "all"):
        from .jsr import stored_certificate, verify_ellipsoid_certificate
        res = verify_ellipsoid_certificate(stored_certificate(), threads=threads)
        out.append({"check": "appendix-c ellipsoid", "passed": res["verified"], "details": res})
    if what in ("appendix-d", "all"):
        from .lsr import stored_cone_certificate, verify_cone_certificate
        res = verify_cone_certificate(stored_cone_certificate(), threads=threads)
        out.append({"check": "appendix-d cone", "passed": res["verified"], "details": res})
    return out


def _dispatch(args, rep: RunReport) -> int:
    v = args.verb
    if v == "count":
        from .counting import count_exact
        u = count_exact(args.n)
        print(u)
        rep.results.append(str(u))
    elif v == "oracle":
        from .words import count_oracle
        u = count_oracle(args.n, args.budget)
        print(u)
        rep.results.append(str(u))
    elif v == "table":
        from .counting import table, table_csv
        if args.a > args.b:
            raise _Usage("--from must not exceed --to")
        if args.json:
            rows = [{"n": n, "u_n": str(u)} for n, u in table(args.a, args.b)]
            _echo(rows)
        else:
            sys.stdout.write(table_csv(args.a, args.b))
    elif v == "bounds":
        out = {}
        if args.which in ("alpha", "all"):
            from .lsr import alpha_bounds
            out["alpha"] = alpha_bounds(depth=args.depth or 11, threads=args.threads).as_dict()
        if args.which in ("beta", "all"):
            from .jsr import beta_bounds
            out["beta"] = beta_bounds(threads=args.threads).as_dict()
        if args.which in ("sigma", "all"):
            from .lyapunov import sigma_bounds
            out["sigma"] = sigma_bounds(k=args.k, s=args.s, t=args.t,
                                        threads=args.threads).as_dict()
        _echo(out if args.which == "all" else out[args.which])
        rep.results.append(out)
        if any(o.get("flags") for o in out.values()):
            return EXIT_FAIL
    elif v == "verify":
        res = _verify(args.what, args.threads)
        for r in res:
            print(f"{'PASS' if r['passed'] else 'FAIL'}  {r['check']}")
            if not r["passed"]:
                det = r["details"]
                for line in (det if isinstance(det, list) else [det]):
                    print(f"      {line}")
        rep.results.extend(res)
        if not all(r["passed"] for r in res):
            return EXIT_FAIL
    elif v == "exponents":
        from .counting import growth_exponents
        sys.stdout.write(growth_exponents(args.kmax).to_csv())
    elif v == "estimate-sigma":
        from .counting import sigma_empirical
        s = sigma_empirical(args.k, args.samples, args.seed)
        _echo(asdict(s))
        rep.results.append(asdict(s))
    elif v == "dump-constants":
        from .constants import dump
        _echo(dump())
    elif v == "search-lsr":
        from .lsr import search_cone_certificate, verify_cone_certificate
        cert = search_cone_certificate(args.r, args.s, args.t, args.budget,
                                       threads=args.threads)
        if cert is None:
            print(json.dumps({"found": False}))
            return EXIT_FAIL
        res = verify_cone_certificate(cert, threads=args.threads)
        print(json.dumps({"found": True, "certificate": json.loads(cert.to_json()),
                          "verification": res}, default=str))
        rep.results.append(res)
        if not res["verified"]:
            return EXIT_FAIL
    return EXIT_OK


class _Usage(Exception):
    pass


def run(argv=None) -> tuple[RunReport, int]:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    rep = RunReport(command=argv)
    t0 = time.perf_counter()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        rep.exit_code = int(exc.code or 0)
        return rep, rep.exit_code
    try:
        code = _dispatch(args, rep)
    except (_Usage, ValueError) as exc:
        # bad values that argparse could not see (e.g. n beyond the oracle budget)
        print(f"overlapfree: error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"overlapfree: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = EXIT_INTERNAL
    rep.exit_code = code
    rep.wall_time = time.perf_counter() - t0
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(rep.to_json())
    return rep, code


def main(argv=None) -> int:
    _, code = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
