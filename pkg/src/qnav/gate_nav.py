"""Time-optimal realization of a target unitary under a background term.

The optimal total Hamiltonian is a rescaled Hermitian logarithm of the
gate relation u_final u_initial^dagger, with the voyage time fixed in
closed form by the background overlap and the full-throttle budget. The
logarithm branch is never guessed: callers pass explicit eigenphase
offsets, or enumerate them.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NoOpGateError, WindTooStrongError
from .linalg import (
    HermitianOperator,
    expm_unitary,
    hs_trace_product,
    require_unitary,
    split_trace,
    unitary_eigenphases,
)

GATE_RESIDUAL_TOL = 1e-9
# tr(X^2) at or below this is treated as the identity relation
NOOP_TRACE_TOL = 1e-20

__all__ = [
    "GateTask",
    "GateSolution",
    "solve_gate",
    "branch_survey",
    "solve_gate_min_branch",
]


@dataclass(frozen=True, eq=False)
class GateTask:
    """Gate-transport problem: reach u_final from u_initial despite h0."""

    u_initial: np.ndarray
    u_final: np.ndarray
    h0: HermitianOperator

    def __post_init__(self):
        ui = require_unitary(self.u_initial, "u_initial")
        uf = require_unitary(self.u_final, "u_final")
        if ui.shape != uf.shape:
            raise DimensionError(f"unitary dims differ: {ui.shape} vs {uf.shape}")
        if self.h0.dim != ui.shape[0]:
            raise DimensionError(
                f"background dim {self.h0.dim} does not match gate dim {ui.shape[0]}"
            )
        _, traceless = split_trace(self.h0)
        strength = hs_trace_product(traceless, traceless)
        if strength >= 1.0:
            raise WindTooStrongError(
                f"background trace norm {strength:.6g} reaches the unit control budget"
            )
        ui = ui.copy()
        uf = uf.copy()
        ui.setflags(write=False)
        uf.setflags(write=False)
        object.__setattr__(self, "u_initial", ui)
        object.__setattr__(self, "u_final", uf)

    @property
    def dim(self):
        return self.h0.dim


@dataclass(frozen=True, eq=False)
class GateSolution:
    """Closed-form gate solution with verification diagnostics.

    branch holds the eigenphase offsets applied on top of the canonical
    zero-trace baseline. global_phase is the phase gamma with
    e^{i gamma} e^{-i h_total T} u_initial = u_final.
    """

    voyage_time: float
    h_total: HermitianOperator
    h_control: HermitianOperator
    branch: tuple
    generator: HermitianOperator
    global_phase: float
    gate_residual: float


def _canonical_phases(task):
    """Eigenphases/vectors of the SU-projected gate relation, zero-sum branch.

    Returns (lam, q, su_phase) with sum(lam) = 0 up to roundoff. The
    projection removes angle(det)/n from every eigenphase; the zeroing
    then shifts whole multiples of 2 pi off the largest (or onto the
    smallest) phases so the baseline is the same for every caller.
    """
    rel = task.u_final @ task.u_initial.conj().T
    n = task.dim
    su_phase = float(np.angle(np.linalg.det(rel))) / n
    lam, q = unitary_eigenphases(rel * np.exp(-1j * su_phase))
    wraps = int(round(float(np.sum(lam)) / (2.0 * math.pi)))
    lam = lam.copy()
    if wraps > 0:
        lam[np.argsort(lam)[-wraps:]] -= 2.0 * math.pi
    elif wraps < 0:
        lam[np.argsort(lam)[: -wraps]] += 2.0 * math.pi
    return lam, q, su_phase


def _voyage_time(a, b, c):
    """Closed-form T from the overlap a = tr(h0 X), b = tr(X^2), budget c."""
    disc = math.sqrt(a * a + c * b)
    return b / (disc + a)


def solve_gate(task, branch=None):
    """Closed-form optimal Hamiltonian for a gate task on a fixed log branch.

    branch lists one integer eigenphase offset (in turns) per ascending
    canonical eigenphase; offsets must sum to zero so the generator
    stays traceless. Defaults to all zeros.
    """
    n = task.dim
    if branch is None:
        branch = (0,) * n
    offs = np.asarray(branch, dtype=int)
    if offs.shape != (n,):
        raise DimensionError(f"branch must have length {n}, got shape {offs.shape}")
    if int(offs.sum()) != 0:
        raise ValueError(f"branch offsets must sum to zero, got {offs.tolist()}")

    lam, q, su_phase = _canonical_phases(task)
    lam = lam + 2.0 * math.pi * offs
    x = HermitianOperator((q * lam) @ q.conj().T)

    h0_trace_half, h0_traceless = split_trace(task.h0)
    b = hs_trace_product(x, x)
    if b <= NOOP_TRACE_TOL:
        raise NoOpGateError(
            "gate relation is the identity on this branch; pick a nonzero branch"
        )
    a = hs_trace_product(h0_traceless, x)
    c = 1.0 - hs_trace_product(h0_traceless, h0_traceless)
    t_voyage = _voyage_time(a, b, c)

    h_total = HermitianOperator(x.matrix / t_voyage + h0_trace_half * np.eye(n))
    h_control = HermitianOperator(h_total.matrix - task.h0.matrix)
    budget_residual = abs(hs_trace_product(h_control, h_control) - 1.0)

    global_phase = h0_trace_half * t_voyage + su_phase
    prop = expm_unitary(h_total, t_voyage)
    residual = float(
        np.max(
            np.abs(np.exp(1j * global_phase) * (prop @ task.u_initial) - task.u_final)
        )
    )
    if budget_residual > GATE_RESIDUAL_TOL or residual > GATE_RESIDUAL_TOL:
        raise ArithmeticError(
            f"gate verification failed: |tr(Hc^2)-1|={budget_residual:.3e}, "
            f"relation residual={residual:.3e}"
        )
    return GateSolution(
        voyage_time=float(t_voyage),
        h_total=h_total,
        h_control=h_control,
        branch=tuple(int(k) for k in offs),
        generator=x,
        global_phase=float(global_phase),
        gate_residual=residual,
    )


def _branch_candidates(n, max_offset):
    """Zero-sum offset vectors with entries in [-max_offset, max_offset].

    Yields in lexicographic order so that ties in voyage time resolve
    to the lexicographically smallest vector.
    """
    rng = range(-max_offset, max_offset + 1)
    for head in itertools.product(rng, repeat=n - 1):
        last = -sum(head)
        if -max_offset <= last <= max_offset:
            yield head + (last,)


def branch_survey(task, max_offset):
    """Voyage time of every admissible branch, cheap scalar evaluation.

    Returns a list of (branch, voyage_time) in enumeration order,
    skipping branches whose generator vanishes.
    """
    if max_offset < 0:
        raise ValueError(f"max_offset must be >= 0, got {max_offset}")
    lam, q, _ = _canonical_phases(task)
    _, h0_traceless = split_trace(task.h0)
    # diagonal of h0 in the eigenbasis of the gate relation
    weights = np.real(np.einsum("ij,ik,kj->j", q.conj(), h0_traceless.matrix, q))
    c = 1.0 - hs_trace_product(h0_traceless, h0_traceless)
    out = []
    for branch in _branch_candidates(task.dim, max_offset):
        phases = lam + 2.0 * math.pi * np.asarray(branch, dtype=float)
        b = float(np.dot(phases, phases))
        if b <= NOOP_TRACE_TOL:
            continue
        a = float(np.dot(phases, weights))
        out.append((branch, _voyage_time(a, b, c)))
    return out


def solve_gate_min_branch(task, max_offset):
    """Fastest solution over all zero-sum branches within max_offset.

    Enumerates branch vectors exhaustively, evaluates the closed-form
    voyage time for each, and solves fully on the best one. Ties go to
    the lexicographically smallest branch vector.
    """
    survey = branch_survey(task, max_offset)
    if not survey:
        raise NoOpGateError(
            "gate relation is the identity on every admissible branch; "
            "raise max_offset"
        )
    best_branch, best_t = survey[0]
    for branch, t_voyage in survey[1:]:
        if t_voyage < best_t:
            best_branch, best_t = branch, t_voyage
    return solve_gate(task, best_branch)
