"""Command-line interface.

Subcommands:

* ``run``    - expansion-strategy sweep on a generated or Matrix Market
               matrix, writing a trace CSV and optionally a plot
* ``verify`` - brute-force identity sweep over random instances, exiting
               nonzero when any discrepancy exceeds 1e-8
* ``gen``    - write a generated matrix to a Matrix Market file

Exit codes: 0 success, 2 config error, 3 verification failure, 4 I/O error.
"""

import argparse
import sys

import numpy as np

from . import extraction, harness, oracle, problems, strategies

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_IO = 4

VERIFY_TOL = 1e-8


def _parse_target(text):
    if text.startswith("closest-to:"):
        try:
            re_s, im_s = text.split(":", 1)[1].split(",")
            tau = complex(float(re_s), float(im_s))
        except ValueError:
            raise ValueError("closest-to target must look like closest-to:<re>,<im>")
        return extraction.TargetSpec(extraction.CLOSEST_TO, tau=tau)
    if text in (extraction.LARGEST_REAL, extraction.LARGEST_MAGNITUDE,
                extraction.SMALLEST_MAGNITUDE):
        return extraction.TargetSpec(text)
    raise ValueError("unknown target %r" % text)


def _parse_strategies(text, target, tau):
    out = []
    for tag in text.split(","):
        tag = tag.strip()
        if not tag:
            continue
        if tag not in strategies.TAGS:
            raise ValueError("unknown strategy %r (choose from %s)"
                             % (tag, ",".join(strategies.TAGS)))
        s_tau = tau if tag in strategies.HARMONIC_TAGS else None
        out.append(strategies.Strategy(tag=tag, target=target, tau=s_tau))
    if not out:
        raise ValueError("no strategies given")
    return out


def _build_problem(args):
    if args.matrix == "strakos":
        return problems.gen_strakos(args.n, args.lam1, args.lamn, args.rho)
    if args.matrix == "invdiag":
        return problems.gen_inverse_diag(args.n)
    if args.matrix.startswith("mm:"):
        return problems.load_matrix_market(args.matrix[3:])
    raise ValueError("unknown matrix spec %r (strakos|invdiag|mm:<path>)"
                     % args.matrix)


def _cmd_run(args):
    target = _parse_target(args.target)
    tau = complex(args.tau) if args.tau is not None else 0.0
    strats = _parse_strategies(args.strategies, target, tau)
    prob = _build_problem(args)
    prob = problems.reference_eigenpair(prob, target, max_order=args.cap)
    cfg = harness.ExperimentConfig(problem=prob, d=args.d, m=args.m,
                                   seed=args.seed, strategies=strats,
                                   target=target)
    rows = harness.run_experiment(cfg)
    harness.write_trace_csv(rows, args.out)
    print("wrote %d rows to %s" % (len(rows), args.out))
    if args.plot:
        harness.emit_plot(rows, args.plot, args.plot_quantity)
        print("wrote plot to %s" % args.plot)
    return EXIT_OK


def _cmd_verify(args):
    rng = np.random.default_rng(args.seed)
    worst = {}
    failures = 0
    for hermitian in (False, True):
        family = "hermitian" if hermitian else "non-hermitian"
        fam_worst = 0.0
        for _ in range(args.instances):
            a, v, x, w, _ = oracle.random_instance(args.n, args.k, rng,
                                                   hermitian=hermitian)
            report = oracle.verify_identities(a, v, x, w)
            for name, val in report.as_dict().items():
                key = (family, name)
                worst[key] = max(worst.get(key, 0.0), val)
                fam_worst = max(fam_worst, val)
                if val > VERIFY_TOL:
                    failures += 1
        print("%-14s %d instances, worst discrepancy %.3e"
              % (family, args.instances, fam_worst))
    for (family, name), val in sorted(worst.items()):
        print("  %-14s %-26s %.3e" % (family, name, val))
    if failures:
        print("FAIL: %d identity checks above %g" % (failures, VERIFY_TOL))
        return EXIT_VERIFY
    print("OK: all identities within %g" % VERIFY_TOL)
    return EXIT_OK


def _cmd_gen(args):
    prob = _build_problem(args)
    problems.save_matrix_market(args.out, prob.a, comment=prob.label)
    print("wrote %s (%s)" % (args.out, prob.label))
    return EXIT_OK


def _add_matrix_flags(p):
    p.add_argument("--matrix", required=True,
                   help="strakos | invdiag | mm:<path>")
    p.add_argument("--n", type=int, default=2000, help="generator order")
    p.add_argument("--lam1", type=float, default=8.0)
    p.add_argument("--lamn", type=float, default=-2.0)
    p.add_argument("--rho", type=float, default=0.99)


def build_parser():
    parser = argparse.ArgumentParser(prog="eigexpand", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an expansion-strategy sweep")
    _add_matrix_flags(run)
    run.add_argument("--d", type=int, required=True, help="starting dimension")
    run.add_argument("--m", type=int, required=True, help="final dimension")
    run.add_argument("--seed", type=int, required=True)
    run.add_argument("--strategies", default="stand,ritzV,ritzR,rRitzR,optimal",
                     help="comma list from: %s" % ",".join(strategies.TAGS))
    run.add_argument("--target", default="largest-real",
                     help="largest-real | largest-magnitude | smallest-magnitude "
                          "| closest-to:<re>,<im>")
    run.add_argument("--tau", type=float, default=None,
                     help="shift for the harmonic strategies (default 0)")
    run.add_argument("--out", required=True, help="trace CSV path")
    run.add_argument("--plot", default=None, help="optional plot path (svg/pdf)")
    run.add_argument("--plot-quantity", default="sin_angle",
                     choices=harness.QUANTITIES)
    run.add_argument("--cap", type=int, default=4000,
                     help="desk-scale cap for dense eigendecompositions")
    run.set_defaults(func=_cmd_run)

    verify = sub.add_parser("verify", help="brute-force identity sweep")
    verify.add_argument("--n", type=int, default=30)
    verify.add_argument("--k", type=int, default=6)
    verify.add_argument("--instances", type=int, default=100)
    verify.add_argument("--seed", type=int, default=7)
    verify.set_defaults(func=_cmd_verify)

    gen = sub.add_parser("gen", help="write a generated matrix to Matrix Market")
    _add_matrix_flags(gen)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, problems.UnsupportedFormat, problems.ParseError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
