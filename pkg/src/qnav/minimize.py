"""Derivative-free one-dimensional minimization."""

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, lo, hi, xtol):
    """Golden-section minimum of f on [lo, hi].

    Assumes f is unimodal on the bracket. Returns (x, f(x)) with the
    bracket narrowed below xtol. Endpoints are included as candidates
    so a boundary minimum is not missed.
    """
    if not hi > lo:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    if not xtol > 0.0:
        raise ValueError("xtol must be positive")
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    best = min(((fc, c), (fd, d), (f(a), a), (f(b), b)))
    return best[1], best[0]
