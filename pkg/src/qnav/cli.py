"""Command-line front end.

Subcommands: solve-state (state and subspace tasks), sweep (voyage-time
CSV over the control angle), solve-gate, and verify (recheck a result
document against its task). Results are deterministic JSON; the only
non-payload block is `meta` with the tool version.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 wind too
strong, 4 degenerate task, 5 no-op gate.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import (
    DegenerateTaskError,
    DimensionError,
    NoOpGateError,
    NotHermitianError,
    NotInvariantError,
    NotUnitaryError,
    TaskFileError,
    WindTooStrongError,
)
from .gate_nav import branch_survey, solve_gate, solve_gate_min_branch
from .linalg import (
    HermitianOperator,
    expm_unitary,
    hs_trace_product,
    spectral_span,
)
from .oracle import first_passage, gate_mismatch
from .state_nav import DEFAULT_GRID_POINTS, DEFAULT_PHI_TOL, optimize, sweep
from .subspace import detect_and_reduce, solve_embedded
from .taskio import (
    dumps_result,
    load_task,
    matrix_pairs,
    parse_complex_matrix,
)

ORACLE_TIME_TOL = 1e-6

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_WIND_TOO_STRONG = 3
EXIT_DEGENERATE = 4
EXIT_NOOP_GATE = 5

__all__ = ["build_parser", "main"]


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _meta():
    return {"tool": "qnav", "version": __version__}


def _finite_or_none(x):
    return float(x) if math.isfinite(x) else None


def _oracle_enabled(args, loaded):
    if args.oracle is not None:
        return args.oracle
    if loaded.oracle is not None:
        return loaded.oracle
    return True


def _oracle_block(solution, task):
    """Independent first-passage cross-check of a transport solution."""
    span = spectral_span(solution.h_total)
    dt = math.pi * 1e-3 / span if span > 1e-12 else None
    t_max = 1.5 * solution.tau_star + (10.0 * dt if dt else 1.0)
    result = first_passage(
        solution.h_total, task.psi_initial, task.psi_final, t_max=t_max, dt=dt
    )
    gap = (
        abs(result.t_first - solution.tau_star)
        if math.isfinite(result.t_first)
        else None
    )
    return {
        "enabled": True,
        "t_first": _finite_or_none(result.t_first),
        "peak_fidelity": result.peak_fidelity,
        "reached": result.reached,
        "time_gap": gap,
        "agrees": bool(result.reached and gap is not None and gap <= ORACLE_TIME_TOL),
    }


def cmd_solve_state(args):
    loaded = load_task(args.task)
    if loaded.mode == "gate":
        raise TaskFileError("gate tasks go through solve-gate")
    grid = args.grid if args.grid is not None else (loaded.grid_points or DEFAULT_GRID_POINTS)
    tol = args.tol if args.tol is not None else (loaded.tol or DEFAULT_PHI_TOL)
    task = loaded.task

    doc = {"mode": loaded.mode, "meta": _meta()}
    if loaded.mode == "subspace":
        reduction = detect_and_reduce(task)
        solution = solve_embedded(task, grid_points=grid, tol=tol)
        doc["subspace"] = {
            "dim": task.psi_initial.dim,
            "invariance_residual": reduction.invariance_residual,
        }
    else:
        solution = optimize(task, grid_points=grid, tol=tol)

    doc.update(
        {
            "phi_star": solution.phi_star,
            "omega_star": solution.omega_star,
            "tau_star": solution.tau_star,
            "theta": solution.theta,
            "h_total": matrix_pairs(solution.h_total.matrix),
            "h_control": matrix_pairs(solution.h_control.matrix),
            "fidelity": solution.fidelity_check,
            "constraint_residual": solution.constraint_residual,
        }
    )
    if _oracle_enabled(args, loaded):
        doc["oracle"] = _oracle_block(solution, task)
    else:
        doc["oracle"] = {"enabled": False}
    _emit(dumps_result(doc), args.out)
    return EXIT_OK


def cmd_sweep(args):
    loaded = load_task(args.task)
    if loaded.mode != "state":
        raise TaskFileError("sweep needs a state task")
    records = sweep(loaded.task, n_points=args.points)
    lines = ["phi,omega,rho,alpha,tau"]
    for rec in records:
        lines.append(
            f"{rec.phi:.16e},{rec.omega:.16e},{rec.rho:.16e},"
            f"{rec.alpha:.16e},{rec.tau:.16e}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_solve_gate(args):
    loaded = load_task(args.task)
    if loaded.mode != "gate":
        raise TaskFileError("solve-gate needs a gate task")
    task = loaded.task
    if args.max_branch < 0:
        raise TaskFileError(f"--max-branch must be >= 0, got {args.max_branch}")
    if args.max_branch == 0:
        solution = solve_gate(task)
    else:
        solution = solve_gate_min_branch(task, args.max_branch)

    budget_residual = abs(
        hs_trace_product(solution.h_control, solution.h_control) - 1.0
    )
    doc = {
        "mode": "gate",
        "meta": _meta(),
        "voyage_time": solution.voyage_time,
        "branch": list(solution.branch),
        "global_phase": solution.global_phase,
        "generator": matrix_pairs(solution.generator.matrix),
        "h_total": matrix_pairs(solution.h_total.matrix),
        "h_control": matrix_pairs(solution.h_control.matrix),
        "gate_residual": solution.gate_residual,
        "constraint_residual": budget_residual,
    }
    if args.max_branch > 0:
        table = sorted(branch_survey(task, args.max_branch), key=lambda bt: (bt[1], bt[0]))
        doc["branch_table"] = [
            {"branch": list(branch), "voyage_time": t} for branch, t in table
        ]
    _emit(dumps_result(doc), args.out)
    return EXIT_OK


def _load_result(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise TaskFileError(f"cannot read result file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise TaskFileError(f"result file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TaskFileError("result file must hold a JSON object")
    return doc


def _result_matrix(doc, key):
    if key not in doc:
        raise TaskFileError(f"result lacks {key}")
    return parse_complex_matrix(doc[key], key)


def _result_float(doc, key):
    if key not in doc:
        raise TaskFileError(f"result lacks {key}")
    try:
        return float(doc[key])
    except (TypeError, ValueError) as exc:
        raise TaskFileError(f"result {key}: {exc}") from exc


def _hermitize(m):
    return HermitianOperator(0.5 * (m + m.conj().T))


def cmd_verify(args):
    result = _load_result(args.result)
    loaded = load_task(args.task)
    mode = result.get("mode")
    if mode != loaded.mode:
        raise TaskFileError(
            f"result mode {mode!r} does not match task mode {loaded.mode!r}"
        )
    h_total_raw = _result_matrix(result, "h_total")
    h_control_raw = _result_matrix(result, "h_control")
    h0 = loaded.task.h0
    if h_total_raw.shape[0] != h0.dim:
        raise TaskFileError(
            f"result dim {h_total_raw.shape[0]} does not match task dim {h0.dim}"
        )

    checks = []
    herm_drift = max(
        float(np.max(np.abs(h_total_raw - h_total_raw.conj().T))),
        float(np.max(np.abs(h_control_raw - h_control_raw.conj().T))),
    )
    checks.append(("hermitian", herm_drift <= 1e-10, f"drift {herm_drift:.3e}"))

    h_total = _hermitize(h_total_raw)
    h_control = _hermitize(h_control_raw)
    budget = hs_trace_product(h_control, h_control)
    checks.append(
        ("control_budget", abs(budget - 1.0) <= 1e-9, f"|tr(Hc^2)-1| = {abs(budget - 1.0):.3e}")
    )
    trace_leak = abs(float(np.real(np.trace(h_control.matrix))))
    checks.append(("control_traceless", trace_leak <= 1e-10, f"|tr Hc| = {trace_leak:.3e}"))
    decomp = float(np.max(np.abs((h_total.matrix - h_control.matrix) - h0.matrix)))
    checks.append(
        ("decomposition", decomp <= 1e-10, f"|(Ht - Hc) - h0|_max = {decomp:.3e}")
    )

    if mode == "gate":
        t_voyage = _result_float(result, "voyage_time")
        phase = _result_float(result, "global_phase")
        task = loaded.task
        residual = gate_mismatch(h_total, task.u_initial, task.u_final, t_voyage, phase)
        checks.append(("gate_relation", residual <= 1e-9, f"residual {residual:.3e}"))
    else:
        tau = _result_float(result, "tau_star")
        task = loaded.task
        u = expm_unitary(h_total, tau)
        final = u @ task.psi_initial.amplitudes
        fid = float(np.abs(np.vdot(task.psi_final.amplitudes, final)) ** 2)
        checks.append(("fidelity", fid >= 1.0 - 1e-9, f"fidelity {fid:.12f}"))

    all_ok = all(ok for _, ok, _ in checks)
    for name, ok, detail in checks:
        sys.stdout.write(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})\n")
    sys.stdout.write(f"verify: {'PASS' if all_ok else 'FAIL'}\n")
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qnav",
        description="Time-optimal Hamiltonians for qubit transport under a background drift.",
    )
    parser.add_argument("--version", action="version", version=f"qnav {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("solve-state", help="solve a state or subspace task")
    p_state.add_argument("task", help="task file (JSON)")
    p_state.add_argument("--grid", type=int, default=None, help="scan grid points")
    p_state.add_argument("--tol", type=float, default=None, help="angle tolerance")
    p_state.add_argument(
        "--oracle",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="cross-check the result by direct evolution (default on)",
    )
    p_state.add_argument("--out", default=None, help="write the result here instead of stdout")
    p_state.set_defaults(func=cmd_solve_state)

    p_sweep = sub.add_parser("sweep", help="voyage-time curve over the control angle")
    p_sweep.add_argument("task", help="task file (JSON)")
    p_sweep.add_argument("--points", type=int, default=DEFAULT_GRID_POINTS)
    p_sweep.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p_sweep.set_defaults(func=cmd_sweep)

    p_gate = sub.add_parser("solve-gate", help="solve a gate task")
    p_gate.add_argument("task", help="task file (JSON)")
    p_gate.add_argument(
        "--max-branch",
        type=int,
        default=0,
        help="enumerate log branches up to this offset (0: principal only)",
    )
    p_gate.add_argument("--out", default=None, help="write the result here instead of stdout")
    p_gate.set_defaults(func=cmd_solve_gate)

    p_verify = sub.add_parser("verify", help="recheck a result document against its task")
    p_verify.add_argument("result", help="result file (JSON)")
    p_verify.add_argument("task", help="task file (JSON)")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TaskFileError, NotUnitaryError, NotHermitianError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except NotInvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except WindTooStrongError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WIND_TOO_STRONG
    except DegenerateTaskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NoOpGateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOOP_GATE
    except ArithmeticError as exc:
        print(f"error: internal verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
