"""Phase and rotation estimation: canonical POVMs, exact error distributions,
the Heisenberg-limit scaling function, and checkers for the tradeoff relations.

All circular label sets are integers, so densities are trigonometric polynomials
whose moments are evaluated exactly from their Fourier coefficients; entropies use
Riemann sums on the uniform grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ai_zeros, gammaln

from . import quantum
from .entropy import (CircularDensity, DiscreteDistribution, conjugate_order,
                      order_power_coefficient, renyi_entropy, renyi_length,
                      require_quantum_order, sibson_mutual_information, _near)
from .optimize import golden_section_maximize
from .quantum import SignalEnsemble, asymmetry, asymmetry_upper_bound, eigenspace_distribution
from .spectral import (DensityOperator, Generator, ValidationError, dephase, displace,
                       generator_from_matrix, von_neumann_entropy)

TWO_PI = 2.0 * np.pi
COMPLETENESS_TOL = 1e-8


# ---------------------------------------------------------------------------
# The scaling function f(alpha) and the Heisenberg-limit constants
# ---------------------------------------------------------------------------

def scaling_function_f(order: float) -> float:
    """Two-branch Gamma-function scaling factor for the RMSE Heisenberg limit."""
    require_quantum_order(order, "scaling function order")
    a = float(order)
    if np.isinf(a):
        return 0.0
    if abs(a - 0.5) <= 1e-12:
        return 0.5
    if abs(a - 1.0) <= 1e-9:
        return math.sqrt(2.0 * math.pi / math.e**3)
    common = (2.0 / a) * math.sqrt(math.pi / (3.0 * a - 1.0)) \
        * math.exp(math.log((3.0 * a - 1.0) / 2.0) / (1.0 - a))
    if a < 1.0:
        z = 1.0 / (1.0 - a)
        ratio = math.exp(gammaln(z) - gammaln(z - 0.5))
        return common * math.sqrt(1.0 - a) * ratio
    z = a / (a - 1.0)
    ratio = math.exp(gammaln(z + 0.5) - gammaln(z))
    return common * math.sqrt(a - 1.0) * ratio


def deviation_bound_coefficient(order: float) -> float:
    """alpha^{alpha/(alpha-1)} * f(alpha); increases to pi/sqrt(3) as alpha -> inf."""
    if np.isinf(order):
        return math.pi / math.sqrt(3.0)
    return order_power_coefficient(order) * scaling_function_f(order)


_F_MAX_CACHE: dict = {}


def maximize_scaling_function():
    """Golden-section maximiser of f on [1/2, 3]; returns (alpha_star, f_max)."""
    if "val" not in _F_MAX_CACHE:
        _F_MAX_CACHE["val"] = golden_section_maximize(scaling_function_f, 0.5, 3.0,
                                                      xtol=1e-9)
    return _F_MAX_CACHE["val"]


def f_max() -> float:
    return maximize_scaling_function()[1]


def airy_conjecture_ceiling() -> float:
    """2(-z_A/3)^{3/2} for the first Airy zero; asymptotic cap quoted for reports."""
    z_a = float(ai_zeros(1)[0][0])
    return 2.0 * (-z_a / 3.0) ** 1.5


# ---------------------------------------------------------------------------
# POVMs on the circle
# ---------------------------------------------------------------------------

def _integer_labels(g: Generator) -> np.ndarray:
    vals = g.basis_eigenvalues()
    rounded = np.round(vals)
    if np.abs(vals - rounded).max() > 1e-9:
        raise ValidationError("circular estimation needs integer generator labels")
    return rounded.astype(int)


def _angle_grid(m: int) -> np.ndarray:
    return -np.pi + TWO_PI / m * np.arange(m)


@dataclass(frozen=True)
class PhasePovm:
    """Covariant phase POVM from reference-phased kets, optionally unitarily rotated.

    Effects are (2*pi/grid_size) |phi_i><phi_i| on the truncated space; completeness
    is exact once the grid is at least as fine as the label range.
    """

    generator: Generator
    grid_size: int = 4096
    zetas: np.ndarray | None = None
    rotation: np.ndarray | None = None

    def __post_init__(self):
        defect = self.completeness_defect()
        if defect > COMPLETENESS_TOL:
            raise ValidationError(f"POVM completeness defect {defect:.2e} on the "
                                  "truncated space")

    @property
    def dim(self) -> int:
        return self.generator.dim

    @property
    def angles(self) -> np.ndarray:
        return _angle_grid(self.grid_size)

    @property
    def weight(self) -> float:
        return TWO_PI / self.grid_size

    def kets(self) -> np.ndarray:
        """Row i holds the coordinates of the i-th POVM ket."""
        g = _integer_labels(self.generator)
        z = np.zeros(self.dim) if self.zetas is None else np.asarray(self.zetas, float)
        a = np.exp(1j * z[None, :] - 1j * np.outer(self.angles, g)) / math.sqrt(TWO_PI)
        if self.rotation is not None:
            a = a @ np.asarray(self.rotation).T
        return a

    def completeness_defect(self) -> float:
        a = self.kets()
        s = self.weight * (a.T @ a.conj())
        return float(np.abs(s - np.eye(self.dim)).max())


@dataclass(frozen=True)
class EffectPovm:
    """Explicit POVM: one PSD effect per estimate angle."""

    angles: np.ndarray
    effects: np.ndarray

    def __post_init__(self):
        eff = np.asarray(self.effects, dtype=complex)
        ang = np.asarray(self.angles, dtype=float)
        if eff.ndim != 3 or eff.shape[0] != ang.size:
            raise ValidationError("effects must be a stack aligned with angles")
        object.__setattr__(self, "effects", eff)
        object.__setattr__(self, "angles", ang)
        if self.completeness_defect() > COMPLETENESS_TOL:
            raise ValidationError("POVM effects do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.effects.shape[1]

    def completeness_defect(self) -> float:
        return float(np.abs(self.effects.sum(axis=0) - np.eye(self.dim)).max())


def rotated_canonical_povm(g: Generator, grid_size: int,
                           rng: np.random.Generator) -> PhasePovm:
    from .spectral import random_unitary
    return PhasePovm(generator=g, grid_size=grid_size,
                     rotation=random_unitary(g.dim, rng))


def coarse_grained_povm(povm: PhasePovm, factor: int) -> EffectPovm:
    """Merge ``factor`` adjacent canonical effects into one (angle at bin centre)."""
    if povm.grid_size % factor:
        raise ValueError("factor must divide the grid size")
    a = povm.kets()
    w = povm.weight
    m = povm.grid_size // factor
    effects = np.zeros((m, povm.dim, povm.dim), dtype=complex)
    angles = np.zeros(m)
    for b in range(m):
        rows = a[b * factor:(b + 1) * factor]
        effects[b] = w * (rows.T @ rows.conj())
        angles[b] = povm.angles[b * factor:(b + 1) * factor].mean()
    return EffectPovm(angles=angles, effects=effects)


def constant_estimator_povm(dim: int, angle: float = 0.0) -> EffectPovm:
    return EffectPovm(angles=np.array([angle]),
                      effects=np.eye(dim, dtype=complex)[None, :, :])


# ---------------------------------------------------------------------------
# Densities and their Fourier data
# ---------------------------------------------------------------------------

def _fourier_by_difference(labels: np.ndarray, weights: np.ndarray):
    """Collect sum of weights[n, m] into coefficients indexed by labels[n]-labels[m]."""
    kmat = (labels[:, None] - labels[None, :]).ravel()
    kmin, kmax = int(kmat.min()), int(kmat.max())
    offs = kmat - kmin
    wr = np.bincount(offs, weights=weights.real.ravel(), minlength=kmax - kmin + 1)
    wi = np.bincount(offs, weights=weights.imag.ravel(), minlength=kmax - kmin + 1)
    return np.arange(kmin, kmax + 1), wr + 1j * wi


def _values_from_fourier(freqs, coeffs, grid) -> np.ndarray:
    return np.real(np.exp(1j * np.outer(grid, freqs)) @ coeffs)


def canonical_phase_density(rho: DensityOperator, basis: Generator,
                            grid_size: int = 4096, zetas=None) -> CircularDensity:
    """Canonical phase density <phi|rho|phi> on the uniform grid over [-pi, pi).

    Carries its exact Fourier coefficients, so second moments are quadrature-free.
    """
    g = _integer_labels(basis)
    z = np.zeros(rho.dim) if zetas is None else np.asarray(zetas, float)
    phased = rho.matrix * np.exp(-1j * (z[:, None] - z[None, :]))
    freqs, coeffs = _fourier_by_difference(g, phased / TWO_PI)
    grid = _angle_grid(grid_size)
    vals = np.clip(_values_from_fourier(freqs, coeffs, grid), 0.0, None)
    return CircularDensity(vals, period=TWO_PI, start=-np.pi, freqs=freqs,
                           coeffs=coeffs, norm_tol=1e-8)


# ---------------------------------------------------------------------------
# Estimation scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniformCircle:
    pass


@dataclass(frozen=True)
class UniformInterval:
    length: float
    center: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.length <= TWO_PI + 1e-12:
            raise ValidationError("interval length must lie in (0, 2*pi]")


@dataclass(frozen=True)
class EstimationScenario:
    probe: DensityOperator
    generator: Generator
    prior: object = field(default_factory=UniformCircle)
    estimator: object = None
    grid_size: int = 4096

    def with_estimator(self, est):
        return EstimationScenario(self.probe, self.generator, self.prior, est,
                                  self.grid_size)

    def resolved_estimator(self):
        if self.estimator is not None:
            return self.estimator
        return PhasePovm(generator=self.generator, grid_size=self.grid_size)


@dataclass
class ErrorStatistics:
    """Exact error density with its RMSE and requested Renyi entropies."""

    error_density: CircularDensity
    rmse: float
    renyi_entropies: dict
    completeness_defect: float
    mtilde_diag_defect: float | None = None
    interval_length: float | None = None

    def entropy(self, order: float) -> float:
        if order not in self.renyi_entropies:
            self.renyi_entropies[order] = renyi_entropy(self.error_density, order)
        return self.renyi_entropies[order]

    def to_json_dict(self):
        return {"rmse": float(self.rmse),
                "renyi_entropies": {str(k): float(v)
                                    for k, v in self.renyi_entropies.items()},
                "completeness_defect": float(self.completeness_defect),
                "mtilde_diag_defect": None if self.mtilde_diag_defect is None
                else float(self.mtilde_diag_defect),
                "interval_length": self.interval_length,
                "error_density": self.error_density.to_json_dict()}


def _estimator_terms(est):
    """Yield the POVM as (angles, rank1 kets or None, effect stack or None, weight)."""
    if isinstance(est, PhasePovm):
        return est.angles, est.kets(), None, est.weight
    if isinstance(est, EffectPovm):
        return est.angles, None, est.effects, 1.0
    raise TypeError(f"unsupported estimator {type(est)!r}")


def mtilde_zero(est, labels: np.ndarray) -> np.ndarray:
    """Covariant average of the estimator: sum_i e^{iG theta_i} E_i e^{-iG theta_i}."""
    angles, kets, effects, w = _estimator_terms(est)
    if kets is not None:
        b = kets * np.exp(1j * np.outer(angles, labels))
        return w * (b.T @ b.conj())
    out = np.zeros((effects.shape[1], effects.shape[1]), dtype=complex)
    for theta, e in zip(angles, effects):
        d = np.exp(1j * labels * theta)
        out += (d[:, None] * e) * d.conj()[None, :]
    return out


def error_distribution(scenario: EstimationScenario, orders=(0.5, 1.0, 2.0, np.inf)
                       ) -> ErrorStatistics:
    """Exact error density of an estimate of a uniformly random circular shift."""
    if not isinstance(scenario.prior, UniformCircle):
        raise ValidationError("error_distribution expects the uniform circular prior; "
                              "use interval_error_distribution otherwise")
    est = scenario.resolved_estimator()
    labels = _integer_labels(scenario.generator)
    defect = est.completeness_defect()
    m0 = mtilde_zero(est, labels)
    diag_defect = float(np.abs(np.real(np.diag(m0)) - 1.0).max())
    if diag_defect > COMPLETENESS_TOL:
        raise ValidationError(f"covariant average diagonal defect {diag_defect:.2e}; "
                              "the estimator POVM is not normalised")
    weights = (m0 * scenario.probe.matrix.T).T / TWO_PI  # W[m,n] = rho[m,n]*M0[n,m]
    freqs, coeffs = _fourier_by_difference(labels, weights)
    grid = _angle_grid(scenario.grid_size)
    vals = np.clip(_values_from_fourier(freqs, coeffs, grid), 0.0, None)
    density = CircularDensity(vals, period=TWO_PI, start=-np.pi, freqs=freqs,
                              coeffs=coeffs, norm_tol=1e-8)
    rmse = math.sqrt(max(density.second_moment_about(0.0), 0.0))
    ents = {o: renyi_entropy(density, o) for o in orders}
    return ErrorStatistics(error_density=density, rmse=rmse, renyi_entropies=ents,
                           completeness_defect=defect, mtilde_diag_defect=diag_defect)


def appendix_dephasing_map(m0: np.ndarray):
    """Unital CPTP map built from the covariant POVM average.

    Its output has the error density as canonical phase density while keeping the
    label populations of the input.
    """
    vals, vecs = np.linalg.eigh(m0)
    kraus = []
    for lam, v in zip(vals, vecs.T):
        if lam <= 1e-14:
            continue
        kraus.append(np.sqrt(lam) * v.conj())
    def mu(rho: DensityOperator) -> DensityOperator:
        out = np.zeros_like(rho.matrix)
        for k in kraus:
            a = np.diag(k)
            out += a @ rho.matrix @ a.conj().T
        return DensityOperator(out, labels=rho.labels)
    return mu


def povm_conditionals(rho: DensityOperator, g: Generator, est, xs) -> np.ndarray:
    """Outcome probabilities q[i, l] = tr[rho_x E_i] for displacement values xs.

    Evaluated through the Fourier expansion in the displacement, which is exact for
    integer-labelled generators.
    """
    labels = _integer_labels(g)
    angles, kets, effects, w = _estimator_terms(est)
    n_out = angles.size
    d = rho.dim
    kmin = labels.min() - labels.max()
    kmax = labels.max() - labels.min()
    gamma = np.zeros((n_out, kmax - kmin + 1), dtype=complex)
    rho_m = rho.matrix
    for n in range(d):
        for m in range(d):
            off = labels[n] - labels[m] - kmin
            if kets is not None:
                gamma[:, off] += w * kets[:, n] * kets[:, m].conj() * rho_m[m, n]
            else:
                gamma[:, off] += effects[:, n, m] * rho_m[m, n]
    xs = np.asarray(xs, dtype=float)
    phases = np.exp(1j * np.outer(np.arange(kmin, kmax + 1), xs))
    return np.clip(np.real(gamma @ phases), 0.0, None)


def interval_error_distribution(scenario: EstimationScenario,
                                orders=(0.5, 1.0, 2.0, np.inf)) -> ErrorStatistics:
    """Error density for a uniform prior on an interval, by exact joint quadrature.

    The prior is discretised onto the scenario grid (the interval is snapped to a
    whole number of cells); estimate angles and prior atoms share the grid so the
    joint error masses land exactly on grid points.  The RMSE carries the in-cell
    variance of the prior so that constant estimators reproduce the continuous
    value exactly.
    """
    prior = scenario.prior
    if isinstance(prior, UniformCircle):
        return error_distribution(scenario, orders)
    if not isinstance(prior, UniformInterval):
        raise ValidationError(f"unsupported prior {prior!r}")
    m = scenario.grid_size
    cell = TWO_PI / m
    k = int(round(prior.length / cell))
    if k <= 0:
        raise ValidationError("interval shorter than one grid cell")
    if k >= m:
        return error_distribution(
            EstimationScenario(scenario.probe, scenario.generator, UniformCircle(),
                               scenario.estimator, scenario.grid_size), orders)
    eff_len = k * cell
    est = scenario.resolved_estimator()
    defect = est.completeness_defect()
    start_idx = int(round((prior.center - eff_len / 2.0 + np.pi) / cell))
    l_indices = (start_idx + np.arange(k)) % m
    # prior atoms sit at cell midpoints, so errors land on a half-shifted grid
    xs = -np.pi + cell * (l_indices + 0.5)
    q = povm_conditionals(scenario.probe, scenario.generator, est, xs)
    angles, _, _, _ = _estimator_terms(est)
    # angles of an EffectPovm may sit off-grid; snap them for the mass binning
    a_idx = np.round((angles + np.pi) / cell).astype(int) % m
    raw = np.zeros(m)
    for col, l in enumerate(l_indices):
        np.add.at(raw, (a_idx - l) % m, q[:, col] / k)
    mass = np.roll(raw, m // 2 - 1)
    total = mass.sum()
    mass /= total
    density = CircularDensity(np.clip(mass / cell, 0.0, None), period=TWO_PI,
                              start=-np.pi + cell / 2.0, norm_tol=1e-8)
    grid = density.grid
    rmse = math.sqrt(float(np.sum(mass * grid**2)) + cell**2 / 12.0)
    ents = {o: renyi_entropy(density, o) for o in orders}
    return ErrorStatistics(error_density=density, rmse=rmse, renyi_entropies=ents,
                           completeness_defect=defect, interval_length=eff_len)


# ---------------------------------------------------------------------------
# Theorem and corollary checkers
# ---------------------------------------------------------------------------

def generator_expectation(rho: DensityOperator, g: Generator, absolute=False) -> float:
    dist = eigenspace_distribution(rho, g)
    vals = g.eigenvalues
    vals = np.abs(vals) if absolute else vals
    return float(np.sum(vals * dist.probs))


def theorem1_check(scenario: EstimationScenario, order: float,
                   stats: ErrorStatistics | None = None) -> dict:
    """Error-entropy/number-entropy tradeoff for a uniformly random shift."""
    require_quantum_order(order)
    beta = conjugate_order(order)
    if stats is None:
        stats = error_distribution(scenario, orders=(order,))
    h_err = stats.entropy(order)
    h_gen = renyi_entropy(eigenspace_distribution(scenario.probe, scenario.generator),
                          beta)
    rhs = math.log(TWO_PI)
    return {"alpha": order, "beta": beta, "error_entropy": h_err,
            "generator_entropy": h_gen, "lhs": h_err + h_gen, "rhs": rhs,
            "slack": h_err + h_gen - rhs}


def theorem2_bounds(probe: DensityOperator, g: Generator,
                    stats: ErrorStatistics | None = None) -> dict:
    """Three RMSE lower bounds from the probe's label distribution."""
    dist = eigenspace_distribution(probe, g)
    mean = generator_expectation(probe, g)
    bounds = {
        "half-length": math.pi / (math.sqrt(3.0) * renyi_length(dist, 0.5)),
        "max-probability": float(dist.probs.max()),
        "heisenberg": f_max() / (mean + 0.5),
    }
    out = {"bounds": bounds, "mean": mean}
    if stats is not None:
        out["rmse"] = stats.rmse
        out["slack"] = stats.rmse - max(bounds.values())
    return out


def fisher_comparison(probe: DensityOperator, g: Generator) -> dict:
    """Locally-unbiased Cramer-Rao style comparison bound 1/(2*DeltaN)."""
    dist = eigenspace_distribution(probe, g)
    vals = g.eigenvalues
    mean = float(np.sum(vals * dist.probs))
    var = float(np.sum((vals - mean) ** 2 * dist.probs))
    delta = math.sqrt(max(var, 0.0))
    return {"delta_n": delta, "fisher_bound": np.inf if delta == 0 else 1.0 / (2 * delta)}


def phase_deviation(rho: DensityOperator, g: Generator, chi: float = 0.0,
                    grid_size: int = 4096, zetas=None,
                    density: CircularDensity | None = None) -> float:
    """Standard deviation of the canonical phase about the reference angle chi."""
    if density is None:
        density = canonical_phase_density(rho, g, grid_size=grid_size, zetas=zetas)
    return math.sqrt(max(density.second_moment_about(chi), 0.0))


def corollary1_check(rho: DensityOperator, g: Generator, chi: float = 0.0,
                     order: float = 2.0, grid_size: int = 4096) -> dict:
    """Length-deviation preparation uncertainty relations for number and phase."""
    require_quantum_order(order)
    beta = conjugate_order(order)
    dist = eigenspace_distribution(rho, g)
    density = canonical_phase_density(rho, g, grid_size=grid_size)
    dev = phase_deviation(rho, g, chi, density=density)
    mean = generator_expectation(rho, g)
    rhs = deviation_bound_coefficient(order)
    lhs = renyi_length(dist, beta) * dev
    special = {
        "half-length": (renyi_length(dist, 0.5) * dev, math.pi / math.sqrt(3.0)),
        "max-probability": (dev, float(dist.probs.max())),
        "heisenberg": ((mean + 0.5) * dev, f_max()),
    }
    return {"alpha": order, "beta": beta, "deviation": dev, "lhs": lhs, "rhs": rhs,
            "slack": lhs - rhs,
            "special": {k: {"lhs": v, "rhs": b, "slack": v - b}
                        for k, (v, b) in special.items()}}


def corollary4_check(rho: DensityOperator, g: Generator, order: float,
                     grid_size: int = 4096, asymmetry_value: float | None = None,
                     seed: int = 0) -> dict:
    """Asymmetry/phase-entropy uncertainty relation at a single order."""
    require_quantum_order(order)
    if asymmetry_value is None:
        asymmetry_value = asymmetry(rho, g, order, seed=seed).value
    h_phi = renyi_entropy(canonical_phase_density(rho, g, grid_size=grid_size), order)
    rhs = math.log(TWO_PI)
    return {"alpha": order, "asymmetry": asymmetry_value, "phase_entropy": h_phi,
            "lhs": asymmetry_value + h_phi, "rhs": rhs,
            "slack": asymmetry_value + h_phi - rhs}


def corollary6_check(rho: DensityOperator, g: Generator, chi: float = 0.0,
                     order: float = 2.0, grid_size: int = 4096,
                     asymmetry_value: float | None = None, seed: int = 0) -> dict:
    """Deviation form of the asymmetry uncertainty relation.

    Checked as exp(A_alpha) * deviation >= alpha^{alpha/(alpha-1)} f(alpha), the
    form consistent with the derivation (equality for number states as alpha->inf).
    """
    require_quantum_order(order)
    if asymmetry_value is None:
        asymmetry_value = asymmetry(rho, g, order, seed=seed).value
    dev = phase_deviation(rho, g, chi, grid_size=grid_size)
    rhs = deviation_bound_coefficient(order)
    lhs = math.exp(asymmetry_value) * dev
    return {"alpha": order, "asymmetry": asymmetry_value, "deviation": dev,
            "lhs": lhs, "rhs": rhs, "slack": lhs - rhs}


def rmse_lower_bound_from_entropy(h_err: float, order: float) -> float:
    """Invert the max-entropy-at-fixed-RMSE relation: RMSE >= e^H g(alpha)/(2 pi)."""
    return math.exp(h_err) * deviation_bound_coefficient(order) / TWO_PI


def theorem5_check(scenario: EstimationScenario, order: float, *, seed: int = 0,
                   stats: ErrorStatistics | None = None,
                   asym: quantum.AsymmetryResult | None = None) -> dict:
    """Interval-prior tradeoff plus the derived RMSE bounds (Corollaries 3 and 5)."""
    require_quantum_order(order)
    if stats is None:
        stats = interval_error_distribution(scenario, orders=(order,))
    ell = stats.interval_length if stats.interval_length is not None else TWO_PI
    probe, g = scenario.probe, scenario.generator
    if asym is None:
        asym = asymmetry(probe, g, order, seed=seed)
    h_err = stats.entropy(order)
    log_ell = math.log(ell)
    dist = eigenspace_distribution(probe, g)
    rho_g_entropy = von_neumann_entropy(dephase(probe, g))
    bounds = {
        "cor5-main": deviation_bound_coefficient(order) * ell / TWO_PI
                     * math.exp(-asym.value),
        "cor5-half-length": ell / (2.0 * math.sqrt(3.0) * renyi_length(dist, 0.5)),
        "cor5-max-probability": ell / TWO_PI * float(dist.probs.max()),
        "cor5-shannon": ell / math.sqrt(TWO_PI * math.e)
                        * math.exp(von_neumann_entropy(probe) - rho_g_entropy),
        "cor3-heisenberg": ell / TWO_PI * f_max()
                           / (generator_expectation(probe, g) + 0.5),
    }
    return {"alpha": order, "interval_length": ell, "error_entropy": h_err,
            "asymmetry": asym.value, "lhs": h_err + asym.value, "rhs": log_ell,
            "slack": h_err + asym.value - log_ell, "rmse": stats.rmse,
            "rmse_bounds": bounds,
            "rmse_slack": stats.rmse - max(bounds.values())}


def apply_to_eigenvalues(g: Generator, h) -> Generator:
    """Generator with eigenvalues mapped through h (eigenspaces may merge)."""
    vals = np.asarray([h(v) for v in g.eigenvalues], dtype=float)
    m = np.zeros((g.dim, g.dim), dtype=complex)
    for v, p in zip(vals, g.projectors):
        m += v * p
    return generator_from_matrix(m)


def nonlinear_generator_check(probe: DensityOperator, g: Generator, h,
                              order: float, prior: UniformInterval,
                              grid_size: int = 2048) -> dict:
    """Tradeoff for a displacement generated by h(G), with H_beta still of G.

    The estimator is the canonical POVM of h(G) when its labels stay distinct,
    else the canonical POVM of G, both complete on the truncated space.
    """
    require_quantum_order(order)
    beta = conjugate_order(order)
    hg = apply_to_eigenvalues(g, h)
    labels = np.round(hg.basis_eigenvalues())
    if np.unique(labels).size == labels.size:
        est = PhasePovm(generator=hg, grid_size=grid_size)
    else:
        est = PhasePovm(generator=g, grid_size=grid_size)
    scenario = EstimationScenario(probe, hg, prior, est, grid_size)
    stats = interval_error_distribution(scenario, orders=(order,))
    h_err = stats.entropy(order)
    h_gen = renyi_entropy(eigenspace_distribution(probe, g), beta)
    log_ell = math.log(stats.interval_length)
    return {"alpha": order, "beta": beta, "error_entropy": h_err,
            "generator_entropy": h_gen, "lhs": h_err + h_gen, "rhs": log_ell,
            "slack": h_err + h_gen - log_ell, "rmse": stats.rmse}


def rotation_bounds(probe: DensityOperator, g: Generator, order: float = 2.0,
                    prior: UniformInterval | None = None, chi: float = 0.0,
                    grid_size: int = 4096) -> dict:
    """Angular-momentum uncertainty and Heisenberg-limit checks.

    Covers the deviation bound max_j p(j), the signed-label length bound, and both
    rotation RMSE Heisenberg limits for a canonical estimator.
    """
    require_quantum_order(order)
    beta = conjugate_order(order)
    dist = eigenspace_distribution(probe, g)
    labels = g.eigenvalues
    p0 = 0.0
    zero = np.where(np.abs(labels) < 1e-12)[0]
    if zero.size:
        p0 = float(dist.probs[zero[0]])
    abs_mean = generator_expectation(probe, g, absolute=True)
    dev = phase_deviation(rho=probe, g=g, chi=chi, grid_size=grid_size)
    length = renyi_length(dist, beta)
    length_bound = order_power_coefficient(order) * (2.0 * abs_mean + 0.5 * p0)
    length_bound_weak = order_power_coefficient(order) * (2.0 * abs_mean + 0.5)
    if prior is None:
        scenario = EstimationScenario(probe, g, UniformCircle(), None, grid_size)
        stats = error_distribution(scenario, orders=(order,))
        ell = TWO_PI
    else:
        scenario = EstimationScenario(probe, g, prior, None, grid_size)
        stats = interval_error_distribution(scenario, orders=(order,))
        ell = stats.interval_length
    rmse_bound = ell / TWO_PI * f_max() / (2.0 * abs_mean + 0.5 * p0)
    rmse_bound_weak = ell / TWO_PI * f_max() / (2.0 * abs_mean + 0.5)
    return {
        "alpha": order, "beta": beta,
        "deviation": dev, "deviation_bound": float(dist.probs.max()),
        "deviation_slack": dev - float(dist.probs.max()),
        "length": length, "length_bound": length_bound,
        "length_bound_weak": length_bound_weak,
        "length_slack": length_bound - length,
        "length_chain_slack": length_bound_weak - length_bound,
        "rmse": stats.rmse, "rmse_bound": rmse_bound,
        "rmse_bound_weak": rmse_bound_weak,
        "rmse_slack": stats.rmse - rmse_bound,
        "abs_mean": abs_mean, "p0": p0,
    }


def _min_deviation_over_reference(density: CircularDensity) -> float:
    chis = np.linspace(-np.pi, np.pi, 257)[:-1]
    vals = [density.second_moment_about(c) for c in chis]
    i = int(np.argmin(vals))
    lo, hi = chis[i] - 0.05, chis[i] + 0.05
    x, neg = golden_section_maximize(lambda c: -density.second_moment_about(c), lo, hi,
                                     xtol=1e-10)
    return math.sqrt(max(-neg, 0.0))


def conjecture_search(n_max: int = 6, budget: int = 2000, seed: int = 0,
                      grid_size: int = 1024) -> dict:
    """Search two-term superpositions for the smallest (<N>+1/2) * deviation.

    The conjectured floor pi/(2 sqrt(3)) is reported, never asserted; the Airy
    asymptote caps how large the true floor could be.
    """
    from .spectral import number_generator, pure_state

    best = {"value": np.inf}
    t_points = max(8, budget // max(1, n_max))
    for n in range(1, n_max + 1):
        g = number_generator(n + 1)
        for t in np.linspace(0.02, np.pi / 2 - 0.02, t_points):
            amp = np.zeros(n + 1)
            amp[0], amp[n] = math.cos(t), math.sin(t)
            rho = pure_state(amp)
            density = canonical_phase_density(rho, g, grid_size=grid_size)
            dev = _min_deviation_over_reference(density)
            value = (math.sin(t) ** 2 * n + 0.5) * dev
            if value < best["value"]:
                best = {"value": value, "n": n, "t": float(t), "deviation": dev}
    vacuum = 0.5 * math.pi / math.sqrt(3.0)
    return {"minimum_found": best["value"], "argmin": best,
            "conjectured_bound": math.pi / (2.0 * math.sqrt(3.0)),
            "vacuum_value": vacuum, "guaranteed_floor": f_max(),
            "airy_ceiling": airy_conjecture_ceiling(), "asserted": False}


def information_chain(probe: DensityOperator, g: Generator, interval_length: float,
                      atoms: int, order: float, *, measurement_grid: int = 256,
                      seed: int = 0) -> dict:
    """Sibson <= Holevo <= asymmetry <= conjugate-entropy chain on one scenario."""
    require_quantum_order(order)
    xs = -interval_length / 2.0 + (np.arange(atoms) + 0.5) * interval_length / atoms
    ens = SignalEnsemble.from_displaced_probe(probe, g, xs)
    est = PhasePovm(generator=g, grid_size=measurement_grid)
    cond = povm_conditionals(probe, g, est, xs).T
    cond = cond / cond.sum(axis=1, keepdims=True)
    sibson = sibson_mutual_information(ens.prior, list(cond), order)
    asym = asymmetry(probe, g, order, seed=seed)
    extra = []
    if asym.minimizer is not None:
        extra.append(("asymmetry-minimizer", asym.minimizer.matrix))
    hol = quantum.renyi_holevo(ens, order, seed=seed, extra_starts=extra)
    upper = asymmetry_upper_bound(probe, g, order)
    return {"alpha": order, "sibson": sibson, "holevo": hol.value,
            "asymmetry": asym.value, "upper": upper,
            "slack_holevo": hol.value - sibson,
            "slack_asymmetry": asym.value - hol.value,
            "slack_upper": upper - asym.value}
