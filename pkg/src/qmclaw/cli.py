"""Command-line entry point: ``qmclaw <subcommand>`` or ``python -m qmclaw``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness


def _int_list(text: str) -> list[int]:
    """Parse ``1024,4096`` or power-of-two shorthand ``2^10,2^12`` / ``2^10..2^20:2``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            span, _, step = part.partition(":")
            lo, hi = (_int_list(s)[0] for s in span.split(".."))
            e_lo, e_hi = lo.bit_length() - 1, hi.bit_length() - 1
            out += [2**e for e in range(e_lo, e_hi + 1, int(step or 1))]
        elif part.startswith("2^"):
            out.append(2 ** int(part[2:]))
        else:
            out.append(int(part))
    return out


def cmd_bound_table(args) -> int:
    rows = harness.bound_table(args.l_max)
    print(f"{'l':>3}  {'ours':>9}  {'hsx':>11}  {'ours~':>7}  {'hsx~':>7}")
    for r in rows:
        print(f"{r['l']:>3}  {str(r['ours']):>9}  {str(r['hsx']):>11}  "
              f"{r['ours_decimal']:>7}  {r['hsx_decimal']:>7}")
    return 0


def cmd_sha3_table(args) -> int:
    table = harness.sha3_table()
    print("l  log2(queries)")
    for l, bits in table.items():
        print(f"{l}  {bits}")
    return 0


def cmd_sweep(args) -> int:
    if args.config:
        cfg = harness.SweepConfig.from_json(args.config)
        if args.out:
            cfg.out = args.out
    else:
        missing = [n for n in ("algo", "l", "n") if getattr(args, n) is None]
        if missing:
            raise SystemExit(f"sweep: missing --{', --'.join(missing)} (or pass --config)")
        cfg = harness.SweepConfig(
            algorithm=args.algo, l=args.l, N=_int_list(args.n), c_N=args.c_n, k=args.k,
            trials=args.trials, seed=args.seed, out=args.out,
        )
    records = harness.run_sweep(cfg)
    if cfg.out is None:
        # keep stdout pure CSV so it can be piped
        print(harness.format_records(records), file=sys.stderr)
        sys.stdout.write(harness.records_to_csv(records))
    else:
        print(harness.format_records(records))
    return 0


def cmd_fit(args) -> int:
    records = harness.read_csv(args.inp)
    groups: dict[tuple[str, int], list] = {}
    for r in records:
        groups.setdefault((r.algorithm, r.l), []).append(r)
    ok = True
    for (algo, l), recs in sorted(groups.items()):
        fit = harness.fit_exponent(sorted(recs, key=lambda r: r.N))
        ok &= fit.within_tolerance
        verdict = "PASS" if fit.within_tolerance else "FAIL"
        print(f"{algo} l={l}: slope {fit.slope:.4f} (theory {fit.theory_exponent} = "
              f"{float(fit.theory_exponent):.4f} +/- {fit.tolerance}) residual {fit.residual:.4f} {verdict}")
    return 0 if ok else 1


def cmd_validate(args) -> int:
    checks = harness.validate(args.suite)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    if args.out:
        Path(args.out).write_text(harness.checks_to_csv(checks))
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmclaw", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bound-table", help="query exponents of both finders")
    s.add_argument("--l-max", type=int, default=8)
    s.set_defaults(func=cmd_bound_table)

    s = sub.add_parser("sha3-table", help="log2 query budgets for a 512-bit range")
    s.set_defaults(func=cmd_sha3_table)

    s = sub.add_parser("sweep", help="run seeded trials over a list of N")
    s.add_argument("--algo", choices=harness.ALGORITHMS)
    s.add_argument("--l", type=int)
    s.add_argument("--n", help="comma list, e.g. 2^10,2^12 or 2^10..2^20:2")
    s.add_argument("--c-n", type=float, default=1.0)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--config", help="JSON document with SweepConfig fields")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("fit", help="fit query exponents from a sweep CSV")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("validate", help="run a validation suite")
    s.add_argument("--suite", default="all", choices=[*harness.SUITES, "all"])
    s.add_argument("--out", help="also write results as CSV")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
