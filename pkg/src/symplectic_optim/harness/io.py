"""Trace persistence: CSV in, CSV out, and static SVG plots."""

import csv
import json
import math

from ..trace import Trace

CSV_HEADER = ("n", "t", "f", "grad_evals", "conserved", "diverged")


class TraceIOError(OSError):
    pass


def _fmt(v: float) -> str:
    # repr is the shortest round-tripping decimal form
    return repr(float(v))


def format_csv(trace: Trace) -> str:
    lines = [",".join(CSV_HEADER)]
    for rec in trace.records:
        lines.append(",".join([str(rec.n), _fmt(rec.t), _fmt(rec.f), str(rec.grad_evals),
                               _fmt(rec.conserved), "1" if rec.diverged else "0"]))
    return "\n".join(lines) + "\n"


def emit_csv(trace: Trace, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_csv(trace))
    except OSError as exc:
        raise TraceIOError(f"cannot write trace CSV to {path}: {exc.strerror or exc}") from exc


def emit_metadata(trace: Trace, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(trace.metadata, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise TraceIOError(f"cannot write metadata to {path}: {exc.strerror or exc}") from exc


def read_csv(path, method=None) -> Trace:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise TraceIOError(f"cannot read trace CSV {path}: {exc.strerror or exc}") from exc
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
    trace = Trace(metadata={"method": method or str(path), "source": str(path)})
    for row in rows[1:]:
        n, t, f, g, c, dv = row
        trace.append(int(n), float(t), float(f), int(g), float(c), dv == "1")
    return trace


def emit_plot(traces, path, axes="loglog", abscissa="time") -> None:
    """Write one polyline per trace to a static SVG file.

    ``abscissa`` is ``"time"`` (model time t), ``"iterations"`` or ``"gradient_evals"``.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    column = {"time": "t", "iterations": "n", "gradient_evals": "grad_evals"}[abscissa]
    with matplotlib.rc_context({"svg.hashsalt": "symplectic-optim"}):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for tr in traces:
            recs = [r for r in tr.records if math.isfinite(r.f) and r.f > 0]
            xs = [getattr(r, column) for r in recs]
            if axes == "loglog":
                xs_ok = [(x, r.f) for x, r in zip(xs, recs) if x > 0]
                xs, fs = [a for a, _ in xs_ok], [b for _, b in xs_ok]
            else:
                fs = [r.f for r in recs]
            ax.plot(xs, fs, label=tr.method, linewidth=1.0)
        ax.set_yscale("log")
        if axes == "loglog":
            ax.set_xscale("log")
        ax.set_xlabel({"t": "t", "n": "iteration", "grad_evals": "gradient evaluations"}[column])
        ax.set_ylabel("f(x)")
        ax.legend()
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise TraceIOError(f"cannot write plot to {path}: {exc.strerror or exc}") from exc
        finally:
            plt.close(fig)
