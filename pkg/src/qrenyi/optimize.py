"""Deterministic multi-start gradient-free minimisation used by the infimum solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

DEFAULT_STARTS = 8
DEFAULT_MAXFEV = 100_000
IMPROVEMENT_TOL = 1e-9


@dataclass
class OptimizeResult:
    """Best point found over all starts, with bookkeeping for reproducibility audits."""

    value: float
    params: np.ndarray
    converged: bool
    nfev: int
    start_label: str
    start_values: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {
            "value": float(self.value),
            "converged": bool(self.converged),
            "nfev": int(self.nfev),
            "best_start": self.start_label,
            "start_values": {k: float(v) for k, v in self.start_values.items()},
        }


def minimize_multistart(objective, starts, *, maxfev=DEFAULT_MAXFEV, ftol=IMPROVEMENT_TOL,
                        xatol=1e-8, polish_top=2):
    """Minimise ``objective`` over real parameter vectors.

    ``starts`` is a list of ``(label, params)`` pairs; every start is evaluated, the
    most promising ones are polished with Nelder-Mead.  Deterministic given the starts.
    """
    evaluated = []
    nfev = 0
    for label, x0 in starts:
        x0 = np.asarray(x0, dtype=float)
        v = float(objective(x0))
        nfev += 1
        evaluated.append((v, label, x0))
    evaluated.sort(key=lambda t: t[0])
    start_values = {label: v for v, label, _ in evaluated}

    best_v, best_label, best_x = evaluated[0]
    converged = False
    budget = max(100, maxfev - nfev)
    per_run = max(100, budget // max(1, polish_top))
    for v0, label, x0 in evaluated[:polish_top]:
        if not np.isfinite(v0):
            continue
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxfev": per_run, "fatol": ftol, "xatol": xatol,
                                "adaptive": x0.size > 6})
        nfev += res.nfev
        if res.fun < best_v:
            best_v, best_label, best_x = float(res.fun), label, np.asarray(res.x)
        converged = converged or bool(res.success)
    return OptimizeResult(value=best_v, params=best_x, converged=converged,
                          nfev=nfev, start_label=best_label, start_values=start_values)


def golden_section_maximize(f, lo, hi, *, xtol=1e-8):
    """Golden-section search for the maximum of a unimodal function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
