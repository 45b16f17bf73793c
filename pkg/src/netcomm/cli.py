"""Command-line interface: ``netcomm {test,model,simulate,phase} ...``.

Exit codes: 0 success, 1 usage error, 2 degenerate/infeasible/unparseable
input, 3 internal failure. Errors are written to stderr as one JSON object
``{"error": <code>, "message": <text>}``.
"""

import argparse
import json
import os
import sys

from . import __version__
from .exceptions import NetcommError
from .graph import read_edge_list
from .rng import DEFAULT_SEED

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
SEED_ENV = "NETCOMM_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _level(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < x < 1.0:
        raise argparse.ArgumentTypeError(f"level must lie in (0, 1), got {text}")
    return x


def _seed(text):
    try:
        s = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return s


def _pos_int(text):
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {k}")
    return k


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common(p, fmt_default):
    p.add_argument("--seed", type=_seed, default=None,
                   help=f"64-bit seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    p.add_argument("--level", type=_level, default=0.05, help="test level kappa")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--threads", type=_pos_int, default=1,
                   help="worker threads (results do not depend on it)")


def build_parser():
    parser = _Parser(prog="netcomm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"netcomm {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    t = verbs.add_parser("test", help="run a global test on an edge-list file")
    t.add_argument("which", choices=("sgnq", "chi2", "scan", "est"))
    t.add_argument("path")
    t.add_argument("--integer-ids", action="store_true",
                   help="use tokens as node ids instead of relabelling them")
    t.add_argument("--two-sided", action="store_true", help="two-sided chi2 rejection")
    t.add_argument("--N", type=_pos_int, help="scan size (scan)")
    t.add_argument("--cstar", type=float, default=None, help="scan threshold constant")
    t.add_argument("--budget", type=_pos_int, default=None, help="max C(n, N) for scan")
    t.add_argument("--v", type=_pos_int, help="EST node count")
    t.add_argument("--e", type=_pos_int, help="EST edge count")
    _common(t, "json")

    m = verbs.add_parser("model", help="model diagnostics")
    msub = m.add_subparsers(dest="action", required=True, parser_class=_Parser)
    d = msub.add_parser("describe", help="print b, alpha, lambda1, tilde lambda, d, g")
    d.add_argument("spec")
    _common(d, "json")

    s = verbs.add_parser("simulate", help="power-curve sweeps")
    ssub = s.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    cs = ssub.add_parser("chi2-vs-sgnq")
    cs.add_argument("--n", type=_pos_int, default=100)
    cs.add_argument("--N", type=_pos_int, default=10)
    cs.add_argument("--c", type=float, default=0.1)
    cs.add_argument("--mode", choices=("matched", "unmatched"), default="matched")
    cs.add_argument("--reps", type=_pos_int, default=50)
    cs.add_argument("--points", type=_pos_int, default=20)
    cs.add_argument("--a-grid", type=_floats, default=None, help="explicit comma-separated a values")
    cs.add_argument("--two-sided", action="store_true")
    _common(cs, "csv")
    ss = ssub.add_parser("scan-vs-sgnq")
    ss.add_argument("--n", type=_pos_int, default=30)
    ss.add_argument("--N", type=_pos_int, default=4)
    ss.add_argument("--alpha", type=float, default=0.2)
    ss.add_argument("--m-cal", type=_pos_int, default=75)
    ss.add_argument("--reps", type=_pos_int, default=200, help="replicates per grid point")
    ss.add_argument("--points", type=_pos_int, default=20)
    ss.add_argument("--a-grid", type=_floats, default=None)
    _common(ss, "csv")

    ph = verbs.add_parser("phase", help="classify a (beta, gamma) grid")
    ph.add_argument("--beta-min", type=float, default=0.0)
    ph.add_argument("--beta-max", type=float, default=1.0)
    ph.add_argument("--beta-points", type=_pos_int, default=100)
    ph.add_argument("--gamma-min", type=float, default=-0.6)
    ph.add_argument("--gamma-max", type=float, default=0.6)
    ph.add_argument("--gamma-points", type=_pos_int, default=100)
    ph.add_argument("--betas", type=_floats, default=None, help="explicit beta values")
    ph.add_argument("--gammas", type=_floats, default=None, help="explicit gamma values")
    _common(ph, "csv")
    return parser


def resolve_seed(arg, environ=None):
    if arg is not None:
        return arg
    env = (os.environ if environ is None else environ).get(SEED_ENV)
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}") from None


def _config(args, seed):
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "threads")}
    cfg["seed"] = seed
    return dict(sorted(cfg.items()))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _header_lines(cfg):
    return [f"netcomm {__version__}", f"seed={cfg['seed']}",
            "config=" + json.dumps(cfg, sort_keys=True)]


def _table(rows, columns, cfg, meta, fmt):
    from .experiments import to_csv, to_json

    if fmt == "json":
        return to_json(rows, cfg, meta)
    comments = _header_lines(cfg)
    if meta:
        comments.append("meta=" + json.dumps(meta, sort_keys=True, default=float))
    return to_csv(rows, columns, comments)


def _flat(row):
    # one-line csv rendering for single records
    return {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in row.items()}


def cmd_test(args, seed):
    from . import stats

    if args.two_sided and args.which != "chi2":
        raise UsageError("--two-sided applies to chi2 only")
    if args.which != "scan" and (args.N is not None or args.cstar is not None or args.budget is not None):
        raise UsageError("--N/--cstar/--budget apply to scan only")
    if args.which != "est" and (args.v is not None or args.e is not None):
        raise UsageError("--v/--e apply to est only")
    if args.which == "scan" and args.N is None:
        raise UsageError("scan needs --N")
    if args.which == "est" and (args.v is None or args.e is None):
        raise UsageError("est needs --v and --e")
    if not os.path.isfile(args.path):
        raise UsageError(f"no such file: {args.path}")

    g = read_edge_list(args.path, integer=args.integer_ids)
    if args.which == "sgnq":
        out = stats.sgnq_psi(g, level=args.level)
    elif args.which == "chi2":
        out = stats.chi2_statistic(g, level=args.level, two_sided=args.two_sided)
    elif args.which == "scan":
        kw = {}
        if args.cstar is not None:
            kw["c_star"] = args.cstar
        if args.budget is not None:
            kw["budget"] = args.budget
        out = stats.signed_scan_test(g, args.N, **kw)
    else:
        out = stats.est_test(g, args.v, args.e)

    cfg = _config(args, seed)
    record = dict(out.to_dict(), n=g.n, m=len(g.edges), seed=seed, version=__version__, config=cfg)
    if args.format == "json":
        return json.dumps(record, sort_keys=False, allow_nan=False) + "\n"
    flat = _flat({k: v for k, v in record.items() if k != "config"})
    return _table([flat], list(flat), cfg, None, "csv")


def cmd_model(args, seed):
    from .model import describe, load_model_spec

    if not os.path.isfile(args.spec):
        raise UsageError(f"no such file: {args.spec}")
    with open(args.spec, encoding="utf-8") as fh:
        spec, file_seed = load_model_spec(fh.read())
    info = describe(spec)
    cfg = _config(args, seed)
    cfg["model_seed"] = file_seed
    if args.format == "json":
        record = dict(info, seed=seed, version=__version__, config=cfg)
        return json.dumps(record, allow_nan=False) + "\n"
    flat = _flat(info)
    return _table([flat], list(flat), cfg, None, "csv")


def cmd_simulate(args, seed):
    from .experiments import TABLE_COLUMNS, chi2_vs_sgnq_experiment, scan_vs_sgnq_experiment

    if args.experiment == "chi2-vs-sgnq":
        rows, meta = chi2_vs_sgnq_experiment(
            args.n, args.N, args.c, mode=args.mode, reps=args.reps, kappa=args.level,
            seed=seed, a_grid_values=args.a_grid, threads=args.threads,
            points=args.points, two_sided=args.two_sided)
    else:
        rows, meta = scan_vs_sgnq_experiment(
            args.n, args.N, args.alpha, a_grid_values=args.a_grid, m_cal=args.m_cal,
            m_pow=args.reps, kappa=args.level, seed=seed, threads=args.threads,
            points=args.points)
    if rows and all(r["status"] != "ok" for r in rows):
        raise _TotalFailure("no feasible grid point")
    return _table(rows, TABLE_COLUMNS, _config(args, seed), meta, args.format)


class _TotalFailure(NetcommError):
    code = "infeasible_alternative"


def cmd_phase(args, seed):
    from .experiments import open_interval_grid, phase_grid

    betas = args.betas if args.betas is not None else open_interval_grid(
        args.beta_min, args.beta_max, args.beta_points)
    gammas = args.gammas if args.gammas is not None else open_interval_grid(
        args.gamma_min, args.gamma_max, args.gamma_points)
    if not all(0.0 < b < 1.0 for b in betas):
        raise UsageError("beta values must lie in (0, 1)")
    rows = phase_grid(betas, gammas)
    return _table(rows, ["beta", "gamma", "region"], _config(args, seed), None, args.format)


COMMANDS = {"test": cmd_test, "model": cmd_model, "simulate": cmd_simulate, "phase": cmd_phase}


def _report(code, message):
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        seed = resolve_seed(args.seed)
        text = COMMANDS[args.verb](args, seed)
        _emit(text, args.out)
        return EXIT_OK
    except UsageError as exc:
        _report("usage", str(exc))
        return EXIT_USAGE
    except NetcommError as exc:
        _report(exc.code, str(exc))
        return EXIT_INPUT
    except OSError as exc:
        _report("io_error", str(exc))
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        _report("internal", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
