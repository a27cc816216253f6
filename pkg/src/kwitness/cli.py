"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Optional

import numpy as np

from . import fixtures
from .errors import KWitnessError
from .maps import ChoiConvention, MapSpec, choi_matrix
from .positivity import classify, is_k_positive_sampled, threshold_report
from .witness import Witness, ppt_violation_search

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_k_range(text: str) -> list[int]:
    """``"lo..hi"`` inclusive, or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k-range {text!r}; use LO..HI or K")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty k-range {text!r}")
    return list(range(lo, hi + 1))


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kwitness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_a=False, formats=("json", "text")):
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--a", type=float, required=need_a, default=None)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--out", default=None, help="write to PATH instead of stdout")

    p = sub.add_parser("construct", help="emit the Choi matrix of phi_a")
    common(p, need_a=True)
    p.add_argument("--convention", choices=[c.value for c in ChoiConvention],
                   default=ChoiConvention.UNNORMALIZED.value)

    p = sub.add_parser("thresholds", help="per-k positivity thresholds")
    common(p, formats=("json", "csv", "text"))
    p.add_argument("--k", type=parse_k_range, default=None)
    p.add_argument("--restarts", type=_positive_int, default=32)
    p.add_argument("--oracle", action="store_true", help="also run the rank-k projection oracle")

    p = sub.add_parser("classify", help="positivity / CP / co-CP verdicts")
    common(p, need_a=True)
    p.add_argument("--samples", type=_positive_int, default=100_000)
    p.add_argument("--restarts", type=_positive_int, default=32)
    p.add_argument("--tolerance", type=float, default=1e-9)

    p = sub.add_parser("probe", help="sampled k-positivity and PPT-violation search")
    common(p, need_a=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--samples", type=_positive_int, default=10_000)
    p.add_argument("--ppt-search", action="store_true")

    p = sub.add_parser("verify-fixtures", help="rebuild golden fixtures and run the self-checks")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--fixtures", default=None, help="alternative fixture JSON")
    p.add_argument("--out", default=None)
    return parser


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".kwitness-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _text_table(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def cmd_construct(args) -> str:
    spec = MapSpec(args.m, args.n, args.a)
    choi = choi_matrix(spec, ChoiConvention(args.convention))
    if args.format == "text":
        body = np.array2string(choi.matrix.real, max_line_width=200, precision=6)
        return f"# m={spec.m} n={spec.n} a={spec.a!r} convention={args.convention} seed={args.seed}\n{body}\n"
    out = choi.to_dict()
    out["spec"] = spec.to_dict()
    out["seed"] = args.seed
    return _dump(out)


def cmd_thresholds(args) -> str:
    MapSpec(args.m, args.n, 0.0)
    ks = args.k if args.k is not None else list(range(1, args.m + 1))
    if ks[0] < 1 or ks[-1] > args.m:
        raise UsageError(f"k-range must lie in [1, {args.m}]")
    report = threshold_report(args.m, args.n, ks, args.restarts, args.seed, args.oracle)
    if args.format == "csv":
        return report.to_csv()
    if args.format == "text":
        lines = [f"# m={report.m} n={report.n} seed={report.seed} restarts={report.restarts}"]
        for row in report.per_k:
            lines.append(f"k={row.k}  analytic={row.analytic}  kyfan_bound={row.kyfan_bound!r}"
                         f"  oracle_mu_k={row.oracle_mu_k}")
        return "\n".join(lines) + "\n"
    return _dump(report.to_dict())


def cmd_classify(args) -> str:
    result = classify(MapSpec(args.m, args.n, args.a), args.tolerance, args.seed,
                      args.samples, args.restarts)
    if args.format == "text":
        d = result.to_dict()
        d.pop("violation")
        return _text_table([(k, v) for k, v in d.items()])
    return _dump(result.to_dict())


def cmd_probe(args) -> str:
    spec = MapSpec(args.m, args.n, args.a)
    verdict = is_k_positive_sampled(spec, args.k, args.samples, args.seed)
    out = {"spec": spec.to_dict(), "k": args.k, "seed": args.seed,
           "samples": args.samples, "k_positivity": verdict.to_dict()}
    if args.ppt_search:
        W = Witness(choi_matrix(spec).matrix, spec.shape, spec)
        cert = ppt_violation_search(W, args.samples, args.seed)
        out["ppt_search"] = ({"status": "inconclusive"} if cert is None
                             else {"status": "certificate", **cert.to_dict()})
    if args.format == "text":
        status = "violated" if verdict.violated else "no-violation-found"
        rows = [("k", args.k), ("seed", args.seed), ("samples", args.samples),
                ("k_positivity", status), ("min_value", verdict.min_value)]
        if args.ppt_search:
            rows.append(("ppt_search", out["ppt_search"]["status"]))
        return _text_table(rows)
    return _dump(out)


def cmd_verify_fixtures(args) -> tuple[str, int]:
    results = fixtures.run_checks(args.fixtures, args.seed)
    lines = [r.line() for r in results]
    failed = sum(not r.ok for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", (EXIT_OK if failed == 0 else EXIT_VERIFY)


COMMANDS = {
    "construct": cmd_construct,
    "thresholds": cmd_thresholds,
    "classify": cmd_classify,
    "probe": cmd_probe,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code = EXIT_OK
    try:
        if args.command == "verify-fixtures":
            text, code = cmd_verify_fixtures(args)
        else:
            text = COMMANDS[args.command](args)
    except (KWitnessError, UsageError) as exc:
        print(f"kwitness: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.out:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"kwitness: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
