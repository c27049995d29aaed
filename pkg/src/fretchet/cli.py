"""Command-line front end.

Exit status: 0 on success, 1 on type, shape or domain errors, 2 on parse
(and usage) errors.  ``--json`` switches every command to a single JSON
object with the keys ``command`` and ``inputs`` plus whichever of
``value``, ``term``, ``matrix`` and ``report`` the command produces.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .adjoint import adjoint
from .diff import affine, gradient, jvp, vjp
from .errors import FretchetError, MissingAnnotation, ParseError
from .funterm import eval_fun
from .linterm import annotate, infer_types, term_size
from .oracle import (
    DEFAULT_FD_RTOL,
    fd_jacobian,
    fd_step,
    griewank_counts,
    lower_matrix,
    matrices_close,
    max_abs_diff,
    report_tol,
)
from .simplify import simplify_with_stats
from .spaces import shape, to_coords
from .syntax import parse_fun, parse_lin, parse_space, parse_vec, show_lin, show_space, show_vec


class _Usage(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


def _vector_json(v):
    return {"text": show_vec(v), "coords": [float(x) for x in to_coords(v)]}


def _matrix_json(m: np.ndarray):
    return [[float(x) for x in row] for row in m]


def _format_matrix(m: np.ndarray) -> str:
    if m.size == 0:
        return f"({m.shape[0]}x{m.shape[1]} empty)"
    return np.array2string(m, precision=6, suppress_small=False, max_line_width=120)


def _dom(args):
    return parse_space(args.dom) if getattr(args, "dom", None) else None


def _typed(f, dom):
    """``f`` annotated at ``dom`` (or on its own), with a clear message when
    spaces cannot be inferred."""
    try:
        return annotate(f, dom)
    except MissingAnnotation as e:
        raise MissingAnnotation(f"{e.reason}; pass --dom or annotate the term") from None


# ---------------------------------------------------------------------------
# Commands; each returns (json payload, human text)
# ---------------------------------------------------------------------------


def cmd_eval(args):
    t, v = parse_fun(args.term), parse_vec(args.at)
    value = eval_fun(t, v)
    return {"value": _vector_json(value)}, show_vec(value)


def cmd_diff(args):
    t, v = parse_fun(args.term), parse_vec(args.at)
    res = affine(t, v)
    deriv = res.deriv
    if args.simplify:
        deriv, _ = simplify_with_stats(deriv, shape(v))
    m = lower_matrix(deriv, shape(v), shape(res.value))
    payload = {"value": _vector_json(res.value), "term": show_lin(deriv), "matrix": _matrix_json(m)}
    text = f"value: {show_vec(res.value)}\nderivative: {show_lin(deriv)}\nmatrix:\n{_format_matrix(m)}"
    return payload, text


def cmd_grad(args):
    t, v = parse_fun(args.term), parse_vec(args.at)
    g = gradient(t, v)
    return {"value": _vector_json(g)}, show_vec(g)


def cmd_jvp(args):
    t, v, dv = parse_fun(args.term), parse_vec(args.at), parse_vec(args.tangent)
    out = jvp(t, v, dv)
    return {"value": _vector_json(out)}, show_vec(out)


def cmd_vjp(args):
    t, v, dy = parse_fun(args.term), parse_vec(args.at), parse_vec(args.cotangent)
    out = vjp(t, v, dy)
    return {"value": _vector_json(out)}, show_vec(out)


def cmd_adjoint(args):
    f = parse_lin(args.term)
    dom = _dom(args)
    if dom is not None:
        f = _typed(f, dom)
    a = adjoint(f)
    return {"term": show_lin(a)}, show_lin(a)


def cmd_simplify(args):
    f = parse_lin(args.term)
    out, stats = simplify_with_stats(f, _dom(args))
    report = {
        "size_before": stats.size_before,
        "size_after": stats.size_after,
        "steps": stats.steps,
        "budget": stats.budget,
        "exhausted": stats.exhausted,
        "fired": dict(sorted(stats.fired.items())),
    }
    text = (
        f"before ({stats.size_before}): {show_lin(f)}\n"
        f"after  ({stats.size_after}): {show_lin(out)}\n"
        f"steps: {stats.steps} of {stats.budget}"
    )
    return {"term": show_lin(out), "report": report}, text


def cmd_lower(args):
    f = _typed(parse_lin(args.term), _dom(args))
    sig = infer_types(f)
    m = lower_matrix(f, sig.domain, sig.codomain)
    payload = {
        "matrix": _matrix_json(m),
        "report": {"domain": show_space(sig.domain), "codomain": show_space(sig.codomain)},
    }
    if args.format == "csv":
        from .report import matrix_csv

        return payload, matrix_csv(m).rstrip("\n")
    if args.format == "json":
        return payload, json.dumps(_matrix_json(m))
    return payload, f"{show_space(sig.domain)} -> {show_space(sig.codomain)}\n{_format_matrix(m)}"


def cmd_check(args):
    t, v = parse_fun(args.term), parse_vec(args.at)
    h = args.h if args.h is not None else fd_step()
    tol = args.tol if args.tol is not None else report_tol(DEFAULT_FD_RTOL)
    res = affine(t, v)
    sym = lower_matrix(res.deriv, shape(v), shape(res.value))
    num = fd_jacobian(t, v, h)
    ok = matrices_close(sym, num, tol)
    report = {"h": h, "rtol": tol, "max_abs_diff": max_abs_diff(sym, num), "passed": ok}
    if args.plot:
        from .report import plot_jacobian_check

        report["plot"] = str(plot_jacobian_check(sym, num, args.plot))
    payload = {"value": _vector_json(res.value), "matrix": _matrix_json(sym), "report": report}
    text = (
        f"symbolic:\n{_format_matrix(sym)}\nfinite difference (h={h:g}):\n{_format_matrix(num)}\n"
        f"max |difference| = {report['max_abs_diff']:.3e}  rtol = {tol:g}  "
        f"{'PASS' if ok else 'FAIL'}"
    )
    if args.plot:
        text += f"\nplot: {report['plot']}"
    return payload, text


def cmd_cost(args):
    c = griewank_counts(args.m, args.n, args.seed)
    report = {
        "m": c.m,
        "n": c.n,
        "dense_apply": c.dense_apply,
        "decomposed_apply": c.decomposed_apply,
        "build": c.build,
        "term_size": c.term_size,
    }
    text = "\n".join(f"{k}: {v}" for k, v in report.items())
    if args.plot:
        from .report import plot_cost_sweep

        ms = [args.m * k for k in (1, 2, 3, 4)]
        sweep = [griewank_counts(m, args.n, args.seed) for m in ms]
        path = plot_cost_sweep(
            ms,
            [s.dense_apply for s in sweep],
            [s.decomposed_apply for s in sweep],
            [s.build for s in sweep],
            args.plot,
            args.n,
        )
        report["plot"] = str(path)
        text += f"\nplot: {path}"
    return {"report": report}, text


def cmd_nn_train(args):
    from .nn import NetworkSpec, load_dataset, toy_dataset_path, train
    from .report import loss_trace_csv

    dims = tuple(int(d) for d in args.dims.split(","))
    spec = NetworkSpec(dims)
    path = args.data or toy_dataset_path()
    data = load_dataset(path, dims[0], dims[-1])
    result = train(spec, data, args.lr, args.steps, args.seed)
    losses = result.losses
    table = loss_trace_csv(losses)
    report = {
        "dims": list(dims),
        "samples": len(data),
        "initial_loss": losses[0],
        "final_loss": losses[-1],
        "ratio": losses[-1] / losses[0] if losses[0] else float("nan"),
        "losses": list(losses),
    }
    lines = []
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(table)
        report["trace_csv"] = args.out
        lines.append(f"trace: {args.out}")
    if args.plot:
        from .report import plot_loss_trace

        report["plot"] = str(plot_loss_trace(losses, args.plot, f"network {args.dims}, lr {args.lr}"))
        lines.append(f"plot: {report['plot']}")
    summary = f"initial mean loss {losses[0]:.6g}, final {losses[-1]:.6g} (ratio {report['ratio']:.4g})"
    text = "\n".join(([] if args.out else [table.rstrip("\n")]) + lines + [summary])
    return {"report": report}, text


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object")

    p = _ArgParser(prog="fretchet", description="Symbolic Fréchet derivatives and adjoints.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def fun_cmd(name, fn, help_, extra=()):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--at", required=True, help="evaluation point (vector literal)")
        for flag, kw in extra:
            s.add_argument(flag, **kw)
        s.add_argument("term", help="function term")
        s.set_defaults(fn=fn)
        return s

    fun_cmd("eval", cmd_eval, "evaluate a function term")
    fun_cmd("diff", cmd_diff, "value and derivative term", [("--simplify", {"action": "store_true"})])
    fun_cmd("grad", cmd_grad, "gradient of a scalar-valued term")
    fun_cmd("jvp", cmd_jvp, "forward product with a tangent", [("--tangent", {"required": True})])
    fun_cmd("vjp", cmd_vjp, "reverse product with a cotangent", [("--cotangent", {"required": True})])
    fun_cmd(
        "check",
        cmd_check,
        "compare the derivative with central differences",
        [
            ("--h", {"type": float, "default": None}),
            ("--tol", {"type": float, "default": None}),
            ("--plot", {"default": None, "help": "write a comparison figure here"}),
        ],
    )

    for name, fn, help_ in (
        ("adjoint", cmd_adjoint, "adjoint of a linear term"),
        ("simplify", cmd_simplify, "rewrite a linear term to normal form"),
        ("lower", cmd_lower, "dense matrix of a linear term"),
    ):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--dom", default=None, help="domain space, when the term does not fix it")
        if name == "lower":
            s.add_argument("--format", choices=("table", "csv", "json"), default="table")
        s.add_argument("term", help="linear term")
        s.set_defaults(fn=fn)

    cost = sub.add_parser("cost", help="multiplication counts")
    cost_sub = cost.add_subparsers(dest="which", required=True, parser_class=_ArgParser)
    g = cost_sub.add_parser("griewank", parents=[common], help="rank-one derivative b·sin(a⊙x)")
    g.add_argument("--m", type=int, default=7)
    g.add_argument("--n", type=int, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--plot", default=None, help="write a sweep over m here")
    g.set_defaults(fn=cmd_cost)

    nn = sub.add_parser("nn", help="neural network")
    nn_sub = nn.add_subparsers(dest="which", required=True, parser_class=_ArgParser)
    t = nn_sub.add_parser("train", parents=[common], help="full-batch gradient descent")
    t.add_argument("--dims", default="2,4,1")
    t.add_argument("--lr", type=float, default=0.1)
    t.add_argument("--steps", type=int, default=200)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--data", default=None, help="CSV (inputs then targets); default: bundled toy set")
    t.add_argument("--out", default=None, help="write the loss trace CSV here instead of stdout")
    t.add_argument("--plot", default=None, help="write a loss curve here")
    t.set_defaults(fn=cmd_nn_train)
    return p


def _inputs(args) -> dict:
    skip = {"fn", "json", "command", "which"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _command_name(args) -> str:
    which = getattr(args, "which", None)
    return f"{args.command} {which}" if which else args.command


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except _Usage as e:
        print(f"usage error: {e}", file=err)
        return 2
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)

    header = {"command": _command_name(args), "inputs": _inputs(args)}
    try:
        payload, text = args.fn(args)
        status = 0
    except ParseError as e:
        payload, text, status = {"error": {"kind": "parse", "line": e.line, "col": e.col, "message": str(e)}}, None, 2
        print(f"parse error at {e}", file=err)
    except (FretchetError, ValueError, ZeroDivisionError, OSError) as e:
        kind = type(e).__name__
        payload, text, status = {"error": {"kind": kind, "message": str(e)}}, None, 1
        print(f"error ({kind}): {e}", file=err)

    if args.json:
        print(json.dumps({**header, **payload}, ensure_ascii=False), file=out)
    elif text is not None:
        print(text, file=out)
    return status


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
