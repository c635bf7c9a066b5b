"""Command-line entry point: ``symopt {run,rate,compare,plot}``."""

import argparse
from dataclasses import replace
import sys

from .harness import (
    ComparisonError,
    ConfigError,
    FitError,
    TraceIOError,
    compare_methods,
    config_from_mapping,
    emit_csv,
    emit_metadata,
    emit_plot,
    estimate_rate,
    format_csv,
    read_config_file,
    read_csv,
    run_experiment,
)

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2


def _add_experiment_flags(p):
    # defaults stay None so that only explicit flags override a config file
    p.add_argument("--config", help="plain-text key=value configuration file")
    p.add_argument("--method", choices=["leapfrog", "leapfrog-gf", "nesterov"])
    p.add_argument("--objective", choices=["quadratic", "quartic"])
    p.add_argument("--dim", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--C", type=float)
    p.add_argument("--N", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--t0", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--x0", help="comma-separated initial point")
    p.add_argument("--record-every", dest="record_every", type=int)
    p.add_argument("--divergence-threshold", dest="divergence_threshold", type=float)
    p.add_argument("--out")


_EXPERIMENT_KEYS = ("method", "objective", "dim", "rho", "p", "C", "N", "eps", "steps", "t0",
                    "seed", "x0", "record_every", "divergence_threshold", "out")


def _config(args):
    values = read_config_file(args.config) if args.config else {}
    values.update({k: getattr(args, k) for k in _EXPERIMENT_KEYS if getattr(args, k, None) is not None})
    return config_from_mapping(values)


def _parse_window(s):
    try:
        lo, hi = (float(v) for v in s.split(","))
    except ValueError:
        raise ConfigError(f"--window expects 'lo,hi', got {s!r}") from None
    return lo, hi


def _cmd_run(args):
    config = _config(args)
    trace = run_experiment(config)
    if config.out:
        emit_csv(trace, config.out)
        emit_metadata(trace, config.out + ".json")
    else:
        sys.stdout.write(format_csv(trace))
    last = trace.records[-1]
    print(f"{config.method}: {len(trace)} records, final n={last.n} f={last.f!r} "
          f"grad_evals={last.grad_evals} diverged={trace.diverged}", file=sys.stderr)
    return EXIT_OK


def _cmd_rate(args):
    window = _parse_window(args.window)
    if args.trace:
        trace = read_csv(args.trace)
    else:
        config = _config(args)
        trace = run_experiment(config)
    slope, r2 = estimate_rate(trace, window=window, axis=args.axes)
    print(f"slope={slope!r} r_squared={r2!r}")
    return EXIT_OK


def _method_configs(args):
    base = _config(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    return [replace(base, method=m).validate() for m in methods]


def _cmd_compare(args):
    configs = _method_configs(args)
    table = compare_methods(configs, normalize=args.normalize, workers=args.workers,
                            levels_per_decade=args.levels_per_decade, decades=args.decades)
    text = table.format()
    print(text)
    out = configs[0].out
    if out:
        header, body = table.rows()
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(",".join(header) + "\n")
                for row in body:
                    fh.write(",".join(row) + "\n")
        except OSError as exc:
            raise TraceIOError(f"cannot write comparison to {out}: {exc.strerror or exc}") from exc
    return EXIT_OK


def _cmd_plot(args):
    if args.trace:
        traces = [read_csv(path) for path in args.trace]
    else:
        traces = [run_experiment(c) for c in _method_configs(args)]
    out = args.out
    if not out:
        raise ConfigError("plot needs --out")
    emit_plot(traces, out, axes=args.axes, abscissa=args.abscissa)
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="symopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment and write its trace CSV")
    _add_experiment_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_rate = sub.add_parser("rate", help="fit a convergence rate to a trace")
    _add_experiment_flags(p_rate)
    p_rate.add_argument("--trace", help="existing trace CSV (otherwise the experiment is run)")
    p_rate.add_argument("--axes", choices=["loglog", "semilog"], default="loglog")
    p_rate.add_argument("--window", default="0.1,0.6")
    p_rate.set_defaults(func=_cmd_rate)

    p_cmp = sub.add_parser("compare", help="compare methods at log-spaced error levels")
    _add_experiment_flags(p_cmp)
    p_cmp.add_argument("--methods", default="leapfrog,nesterov")
    p_cmp.add_argument("--normalize", choices=["iterations", "gradient_evals"], default="gradient_evals")
    p_cmp.add_argument("--levels-per-decade", dest="levels_per_decade", type=int, default=4)
    p_cmp.add_argument("--decades", type=float, default=2.0)
    p_cmp.add_argument("--workers", type=int, default=None)
    p_cmp.set_defaults(func=_cmd_compare)

    p_plot = sub.add_parser("plot", help="plot traces to an SVG file")
    _add_experiment_flags(p_plot)
    p_plot.add_argument("--trace", action="append", help="trace CSV (repeatable)")
    p_plot.add_argument("--methods", default="leapfrog,nesterov")
    p_plot.add_argument("--axes", choices=["loglog", "semilog"], default="loglog")
    p_plot.add_argument("--abscissa", choices=["time", "iterations", "gradient_evals"], default="time")
    p_plot.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FitError, ComparisonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
