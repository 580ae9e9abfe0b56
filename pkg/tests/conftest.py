"""Shared fixtures and independent brute-force oracles used across the suite."""

import math

import numpy as np
import pytest

from qrenyi.entropy import DiscreteDistribution


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def compositions(parts, steps, chunk=250_000):
    """Yield integer compositions of ``steps`` into ``parts`` parts, in chunks."""
    if parts == 2:
        k = np.arange(steps + 1)
        yield np.stack([k, steps - k], axis=1)
        return
    if parts == 3:
        for a in range(steps + 1):
            b = np.arange(steps - a + 1)
            block = np.stack([np.full_like(b, a), b, steps - a - b], axis=1)
            yield block
        return
    if parts == 4:
        for a in range(steps + 1):
            for block in compositions(3, steps - a):
                yield np.concatenate(
                    [np.full((block.shape[0], 1), a, dtype=block.dtype), block], axis=1)
        return
    raise ValueError("only 2-4 parts supported")


def _refine_box(center, width, steps):
    """Grid of simplex points in a box around ``center`` (renormalised rows)."""
    k = center.size
    lo = np.clip(center - width, 1e-9, None)
    axes = [np.linspace(lo[i], center[i] + width, steps) for i in range(k)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    return pts / pts.sum(axis=1, keepdims=True)


def simplex_grid_minimize(objective, parts, step=1e-2, refinements=3):
    """Exhaustive simplex-grid minimisation with local grid refinement.

    ``objective`` maps an (N, parts) array of probability rows to N values.
    Stays derivative-free and independent of any descent-based optimiser.
    """
    steps = int(round(1.0 / step))
    best_v, best_q = np.inf, None
    for block in compositions(parts, steps):
        q = block / steps
        vals = objective(np.clip(q, 1e-12, None))
        i = int(np.argmin(vals))
        if vals[i] < best_v:
            best_v, best_q = float(vals[i]), q[i].astype(float)
    width = step
    for _ in range(refinements):
        pts = _refine_box(best_q, width, 9)
        vals = objective(np.clip(pts, 1e-12, None))
        i = int(np.argmin(vals))
        if vals[i] < best_v:
            best_v, best_q = float(vals[i]), pts[i]
        width /= 4.0
    return best_v, best_q


def sibson_objective(prior: DiscreteDistribution, cond, order):
    """D_alpha(p_AX || q_A p_X) for a batch of output rows q."""
    p = np.asarray(cond, dtype=float)
    r = (prior.probs[:, None] * p**order).sum(axis=0)

    def obj(qs):
        s = qs ** (1.0 - order) @ r
        return np.log(s) / (order - 1.0)

    return obj


def convolution_objective(target, target_weight, mix_matrix, order):
    """D_alpha(target || M q) for batches of q (mass vectors)."""
    t = np.asarray(target, dtype=float)
    supp = t > 1e-15

    def obj(qs):
        s = np.clip(qs @ mix_matrix.T, 1e-300, None)
        vals = (target_weight * t[supp] ** order) @ (s[:, supp].T ** (1.0 - order))
        return np.log(vals) / (order - 1.0)

    return obj
