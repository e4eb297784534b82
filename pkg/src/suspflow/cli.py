"""Command line front end.

Exit codes: 0 success, 1 a verification check failed, 2 unreadable input,
3 empty shift, 4 zero-entropy target.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import formats as io
from .roof import build_roof
from .sft import (
    EmptyShiftError,
    SftError,
    ZeroEntropyError,
    entropy_spectral,
    essentialize,
    higher_block_recode,
    irreducible_components,
    language_table,
)
from .subadditive import lemma_inequality, random_subadditive
from .suspension import mme_report
from .verification import run_checks

EXIT_FAIL, EXIT_PARSE, EXIT_EMPTY, EXIT_ZERO = 1, 2, 3, 4
ZERO_ENTROPY_MSG = ("target has zero entropy: the construction needs a positive entropy "
                    "subshift, since MMEs of a zero-entropy Y lift to zero-entropy flow measures")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="suspflow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, type=Path, help="SFT definition file (JSON)")
    common.add_argument("--out", type=Path, default=Path("suspflow-out"), help="output directory")
    common.add_argument("--n-max", type=int, default=60)

    roof = argparse.ArgumentParser(add_help=False)
    roof.add_argument("--c", type=float, default=None, help="override the constant c")
    roof.add_argument("--alpha", type=float, default=0.5)
    roof.add_argument("--r-max", type=int, default=200)
    roof.add_argument("--m-max", type=int, default=200)
    roof.add_argument("--tol", type=float, default=1e-10)
    roof.add_argument("--oracle", action="store_true", help="cross-check against brute force")

    sub.add_parser("entropy", parents=[common], help="language table, entropy, components")
    sub.add_parser("verify", parents=[common, roof], help="run the finite-n verification suite")
    sub.add_parser("report", parents=[common, roof], help="flow MME report")

    lem = sub.add_parser("lemma", help="sub-additive lemma for one (n, k)")
    lem.add_argument("--n", type=int, required=True)
    lem.add_argument("--k", type=int, required=True)
    src = lem.add_mutually_exclusive_group(required=True)
    src.add_argument("--values", help="comma-separated b_1,b_2,...")
    src.add_argument("--seed", type=int, help="use random_subadditive(length, seed)")
    lem.add_argument("--length", type=int, default=30)
    return p


def _validate(args, parser):
    if getattr(args, "n_max", 1) < 1:
        parser.error("--n-max must be positive")
    if hasattr(args, "alpha"):
        if not 0 < args.alpha < 1:
            parser.error("--alpha must lie in (0, 1)")
        if args.tol <= 0:
            parser.error("--tol must be positive")
        if args.r_max < 1 or args.m_max < 1:
            parser.error("--r-max and --m-max must be positive")


def cmd_entropy(args) -> int:
    sft = io.load_sft(args.input)
    rec = higher_block_recode(sft)
    A = essentialize(rec.target)
    if not A.any():
        raise EmptyShiftError("shift is empty")
    sd = entropy_spectral(A)
    table = language_table(sft, args.n_max)
    ratios = table.ratios(sd.lam)
    rows = [(n, table.counts.get(n, ""), table.log_count(n), ratios[n - 1])
            for n in range(1, args.n_max + 1)]
    comps = irreducible_components(A)
    out = args.out
    io.write_csv(out / "language.csv", ["n", "count", "log_count", "ratio_to_lambda_n"], rows)
    io.write_csv(out / "components.csv", ["component", "symbols", "entropy"],
                 [(k, " ".join(map(str, c.symbols)), c.entropy) for k, c in enumerate(comps)])
    c1, c2 = table.perron_constants(sd.lam)
    summary = {
        "alphabet_size": sft.alphabet_size,
        "step": sft.step,
        "lambda": sd.lam,
        "entropy": sd.entropy,
        "entropy_estimate": table.entropy_estimate,
        "C1": c1,
        "C2": c2,
        "spectral_residual": sd.residual,
        "components": [{"symbols": list(c.symbols), "entropy": c.entropy} for c in comps],
    }
    io.write_json(out / "entropy.json", summary)
    print(f"h = log lambda = {sd.entropy:.12g}  (lambda = {sd.lam:.12g})")
    print(f"{len(comps)} irreducible component(s): "
          + ", ".join(f"{list(c.symbols)} h={c.entropy:.6g}" for c in comps))
    return 0


def _build(args):
    sft = io.load_sft(args.input)
    return build_roof(sft, c=args.c, alpha=args.alpha,
                      n_blocks=max(100, math.isqrt(2 * max(args.n_max, args.r_max, args.m_max)) + 2))


def cmd_verify(args) -> int:
    spec = _build(args)
    res = run_checks(spec, args.n_max, args.r_max, args.tol, args.oracle)
    out = args.out
    j_rows = max(args.n_max, args.r_max, args.m_max)
    aj = spec.aj
    io.write_csv(out / "aj.csv", ["j", "block_n", "a_j", "a_j_minus_h"],
                 [(j, aj.block(j), aj.value(j), aj.value(j) - spec.h_y) for j in range(1, j_rows + 1)])
    io.write_csv(out / "q.csv", ["r", "Q_r", "recursion_rhs"],
                 [(r, res.q.q[r - 1], res.q.recursion_rhs[r - 1]) for r in range(1, args.r_max + 1)])
    pt = res.partition
    io.write_csv(out / "partition.csv", ["n", "c", "log_Zn", "P_n", "lower_bound", "upper_bound"],
                 [(n, pt.scale, pt.log_z[n - 1], pt.pressure[n - 1], pt.lower[n - 1], pt.upper[n - 1])
                  for n in pt.n])
    io.write_csv(out / "root.csv", ["iteration", "c_lo", "c_hi"], res.root.history)
    io.write_json(out / "roof.json", io.roofspec_to_dict(spec))
    for check in res.checks:
        print(check.line())
    return 0 if res.passed else EXIT_FAIL


def cmd_report(args) -> int:
    spec = _build(args)
    rep = mme_report(spec, n=args.n_max, tol=args.tol, m_max=args.m_max)
    lo, hi = rep.enclosure
    lines = [
        f"h(Y) = {rep.h_y:.12g}",
        f"flow entropy: root c_{rep.n} = {rep.flow_entropy.root:.12g}, enclosure [{lo:.12g}, {hi:.12g}]",
        f"MME multiplicity: {rep.multiplicity}",
    ]
    for c in rep.components:
        tag = "MME" if c.maximal else "non-maximal"
        lines.append(f"  component {list(c.symbols)}: h = {c.base_entropy:.12g}, "
                     f"int rho = {c.roof_integral:.12g}, lifted entropy = {c.lifted_entropy:.12g} ({tag})")
    text = "\n".join(lines) + "\n"
    io.write_json(args.out / "report.json", rep.to_dict())
    io.write_text(args.out / "report.txt", text)
    sys.stdout.write(text)
    return 0


def cmd_lemma(args) -> int:
    if args.values is not None:
        values = [float(x) for x in args.values.split(",") if x.strip()]
    else:
        values = list(random_subadditive(args.length, args.seed))
    try:
        lhs, rhs, holds = lemma_inequality(values, args.n, args.k)
    except (IndexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    print(f"n={args.n} k={args.k} lhs={io.fmt(lhs)} rhs={io.fmt(rhs)} holds={holds}")
    return 0 if holds else EXIT_FAIL


COMMANDS = {"entropy": cmd_entropy, "verify": cmd_verify, "report": cmd_report, "lemma": cmd_lemma}


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        return COMMANDS[args.command](args)
    except io.SftFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EmptyShiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except ZeroEntropyError:
        print(f"error: {ZERO_ENTROPY_MSG}", file=sys.stderr)
        return EXIT_ZERO
    except SftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
