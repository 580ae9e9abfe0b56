"""Canonical time observables for discrete energy spectra.

Periodic spectra reduce to the phase machinery; nonperiodic ones get an
almost-periodic density whose long-time (Besicovitch) averages define the
almost-periodic Renyi entropies.  hbar = 1 throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import metrology, quantum
from .entropy import (CircularDensity, renyi_entropy, require_quantum_order, _near)
from .spectral import (DensityOperator, Generator, ValidationError, energy_generator,
                       partial_trace)

COMMENSURATE_RTOL = 1e-9


def _real_gcd(values, rtol=COMMENSURATE_RTOL):
    """Approximate positive gcd of real numbers, or None when incommensurate."""
    vals = sorted(abs(float(v)) for v in values if abs(v) > 0)
    if not vals:
        return None
    scale = vals[-1]
    eps = rtol * scale
    g = vals[0]
    for v in vals[1:]:
        a, b = max(g, v), min(g, v)
        for _ in range(256):
            if b <= eps:
                break
            a, b = b, math.fmod(a, b)
        g = a
        if g <= eps:
            return None
    ns = np.round(np.asarray(vals) / g)
    if ns.min() < 1:
        return None
    # least-squares refinement against the integer multiples
    g = float(np.dot(vals, ns) / np.dot(ns, ns))
    if np.abs(np.asarray(vals) - ns * g).max() > 10 * eps:
        return None
    return g


PERIODIC = "periodic"
ALMOST_PERIODIC = "almost-periodic"


@dataclass(frozen=True)
class EnergySpectrum:
    """Distinct energy levels with a uniform degeneracy dimension per level."""

    levels: np.ndarray
    degeneracy: int = 1

    def __post_init__(self):
        lv = np.asarray(self.levels, dtype=float)
        if lv.ndim != 1 or lv.size < 1:
            raise ValidationError("levels must be a nonempty 1-d array")
        if np.unique(np.round(lv, 12)).size != lv.size:
            raise ValidationError("levels must be distinct (degeneracy is the factor)")
        lv = np.sort(lv)
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)
        if self.degeneracy < 1:
            raise ValidationError("degeneracy must be a positive integer")

    @property
    def n_levels(self) -> int:
        return self.levels.size

    @property
    def dim(self) -> int:
        return self.n_levels * self.degeneracy

    @property
    def ground_energy(self) -> float:
        return float(self.levels[0])

    def gaps(self) -> np.ndarray:
        return self.levels[1:] - self.levels[0]

    def classification(self):
        """(kind, omega, tau, n_k): periodic data when gaps share a real gcd."""
        if self.n_levels == 1:
            return PERIODIC, 0.0, np.inf, np.zeros(1, dtype=int)
        g = _real_gcd(self.gaps())
        if g is None:
            return ALMOST_PERIODIC, None, None, None
        nk = np.round((self.levels - self.ground_energy) / g).astype(int)
        if np.abs((self.levels - self.ground_energy) / g - nk).max() > 1e-6:
            return ALMOST_PERIODIC, None, None, None
        return PERIODIC, g, 2.0 * math.pi / g, nk

    def is_periodic(self) -> bool:
        return self.classification()[0] == PERIODIC

    def generator(self) -> Generator:
        return energy_generator(self.levels, self.degeneracy)

    def to_json_dict(self):
        return {"levels": [float(v) for v in self.levels],
                "degeneracy": int(self.degeneracy)}

    @classmethod
    def from_json_dict(cls, data) -> "EnergySpectrum":
        return cls(levels=np.asarray(data["levels"], dtype=float),
                   degeneracy=int(data.get("degeneracy", 1)))

    @classmethod
    def load(cls, path) -> "EnergySpectrum":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def _level_reduced(rho: DensityOperator, spectrum: EnergySpectrum) -> np.ndarray:
    """tr_D[rho] on the level basis (levels are the leading factor)."""
    if rho.dim != spectrum.dim:
        raise ValidationError(f"state dimension {rho.dim} does not match the spectrum "
                              f"dimension {spectrum.dim}")
    if spectrum.degeneracy == 1:
        return rho.matrix
    return partial_trace(rho, keep=0, dims=(spectrum.n_levels, spectrum.degeneracy)).matrix


@dataclass(frozen=True)
class AlmostPeriodicDensity:
    """p(t) = sum_j c_j exp(i w_j t) with conjugate-symmetric coefficients."""

    freqs: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=float)
        c = np.asarray(self.coeffs, dtype=complex)
        f.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.real(np.exp(1j * np.outer(t, self.freqs)) @ self.coeffs)

    @property
    def mean(self) -> float:
        """Besicovitch mean: the zero-frequency coefficient."""
        zero = np.abs(self.freqs) < 1e-15
        return float(np.real(self.coeffs[zero].sum()))

    def max_frequency(self) -> float:
        return float(np.abs(self.freqs).max()) if self.freqs.size else 0.0

    def min_gap(self) -> float:
        f = np.unique(np.sort(self.freqs))
        if f.size < 2:
            return np.inf
        return float(np.diff(f).min())

    def power(self, exponent: int) -> "AlmostPeriodicDensity":
        """Exact trigonometric-polynomial integer power, grouping resonant terms."""
        if exponent < 1:
            raise ValueError("integer power only")
        freqs, coeffs = self.freqs, self.coeffs
        for _ in range(exponent - 1):
            f = (freqs[:, None] + self.freqs[None, :]).ravel()
            c = (coeffs[:, None] * self.coeffs[None, :]).ravel()
            freqs, coeffs = _group_frequencies(f, c)
        return AlmostPeriodicDensity(freqs, coeffs)


def _group_frequencies(freqs, coeffs, tol=1e-9):
    order = np.argsort(freqs)
    f, c = freqs[order], coeffs[order]
    scale = max(1.0, float(np.abs(f).max()) if f.size else 1.0)
    out_f, out_c = [], []
    for fi, ci in zip(f, c):
        if out_f and abs(fi - out_f[-1]) <= tol * scale:
            out_c[-1] += ci
        else:
            out_f.append(fi)
            out_c.append(ci)
    return np.asarray(out_f), np.asarray(out_c, dtype=complex)


def almost_periodic_density(rho: DensityOperator,
                            spectrum: EnergySpectrum) -> AlmostPeriodicDensity:
    """Time density of the canonical almost-periodic POVM for the given state."""
    red = _level_reduced(rho, spectrum)
    lv = spectrum.levels
    n = spectrum.n_levels
    freqs = []
    coeffs = []
    for k in range(n):
        for kp in range(n):
            freqs.append(lv[kp] - lv[k])
            coeffs.append(red[kp, k])
    freqs, coeffs = _group_frequencies(np.asarray(freqs), np.asarray(coeffs))
    dens = AlmostPeriodicDensity(freqs, coeffs)
    if abs(dens.mean - 1.0) > 1e-8:
        raise ValidationError(f"almost-periodic density mean {dens.mean} is not 1")
    sample = dens(np.linspace(0.0, 50.0 / max(dens.max_frequency(), 1e-3), 512))
    if sample.min() < -1e-9:
        raise ValidationError("almost-periodic density is negative on samples")
    return dens


def default_window_schedule(density: AlmostPeriodicDensity, n_windows: int = 17):
    """s_m = 2^m * s0 with s0 = 100 / (smallest frequency gap)."""
    gap = density.min_gap()
    if not np.isfinite(gap):
        gap = max(density.max_frequency(), 1.0)
    s0 = 100.0 / gap
    return [s0 * 2.0**m for m in range(n_windows)]


@dataclass
class BesicovitchMean:
    value: float
    spread: float
    windows: list
    averages: list
    converged: bool
    exact: bool = False


def besicovitch_mean(f, density: AlmostPeriodicDensity | None = None,
                     window_schedule=None, *, samples_per_cycle: float = 6.0,
                     budget: int = 1_500_000, spread_tol: float = 1e-6
                     ) -> BesicovitchMean:
    """Long-time average limsup_{s} (1/s) int_0^s f(t) dt with diagnostics.

    ``f`` may be an AlmostPeriodicDensity (window integrals are then closed-form)
    or a callable; a callable needs ``density`` for frequency metadata.  The limsup
    is estimated as the max of the last three window averages, with their spread
    reported; commensurate trigonometric polynomials short-circuit to the exact
    zero-frequency coefficient.
    """
    if isinstance(f, AlmostPeriodicDensity):
        poly = f
        freq_info = f
    else:
        poly = None
        if density is None:
            raise ValueError("callable input needs an AlmostPeriodicDensity for "
                             "frequency metadata")
        freq_info = density

    if poly is not None:
        nz = np.abs(poly.freqs) > 1e-15
        if not nz.any():
            return BesicovitchMean(value=poly.mean, spread=0.0, windows=[],
                                   averages=[], converged=True, exact=True)
        gcd = _real_gcd(poly.freqs[nz])
        if gcd is not None:
            # commensurate: the window average over one full period is exact
            return BesicovitchMean(value=poly.mean, spread=0.0,
                                   windows=[2 * math.pi / gcd],
                                   averages=[poly.mean], converged=True, exact=True)

    if window_schedule is None:
        window_schedule = default_window_schedule(freq_info)

    averages = []
    windows = []
    for s in window_schedule:
        if poly is not None:
            # (1/s) int_0^s e^{iwt} dt = (e^{iws}-1)/(iws), exactly
            w = poly.freqs * s
            safe = np.where(np.abs(w) < 1e-12, 1.0, w)
            phi = np.where(np.abs(w) < 1e-12, 1.0,
                           (np.exp(1j * safe) - 1.0) / (1j * safe))
            averages.append(float(np.real(np.sum(poly.coeffs * phi))))
            windows.append(s)
        else:
            need = s * freq_info.max_frequency() * samples_per_cycle / (2 * math.pi)
            if need > budget:
                break
            n = int(max(256, need))
            t = (np.arange(n) + 0.5) * (s / n)
            averages.append(float(np.mean(f(t))))
            windows.append(s)
        if len(averages) >= 5:
            recent = averages[-3:]
            if max(recent) - min(recent) < spread_tol / 4:
                break
    tail = averages[-3:]
    spread = float(max(tail) - min(tail)) if len(tail) > 1 else np.inf
    return BesicovitchMean(value=float(max(tail)), spread=spread, windows=windows,
                           averages=averages, converged=spread < spread_tol)


def periodic_time_density(rho: DensityOperator, spectrum: EnergySpectrum,
                          grid_size: int = 4096) -> CircularDensity:
    """Canonical time density p_tau on [0, tau) for a periodic spectrum."""
    kind, omega, tau, _ = spectrum.classification()
    if kind != PERIODIC:
        raise ValidationError("periodic time density needs a periodic spectrum")
    dens = almost_periodic_density(rho, spectrum)
    t = tau / grid_size * np.arange(grid_size)
    vals = np.clip(dens(t) / tau, 0.0, None)
    return CircularDensity(vals, period=tau, start=0.0, norm_tol=1e-6)


def almost_periodic_renyi_entropy(rho: DensityOperator, spectrum: EnergySpectrum,
                                  order: float, *, grid_size: int = 8192,
                                  window_schedule=None, return_diagnostics=False):
    """H_alpha^ap = (1/(1-alpha)) log mean[p_ap^alpha].

    Periodic spectra get exact one-period quadrature; nonperiodic spectra use the
    windowed Besicovitch estimator (closed-form windows for integer orders).
    """
    require_quantum_order(order)
    dens = almost_periodic_density(rho, spectrum)
    kind = spectrum.classification()[0]
    diag = None
    if kind == PERIODIC:
        tau = spectrum.classification()[2]
        if np.isinf(tau):  # single level: p_ap == 1
            value = 0.0
        else:
            ptau = periodic_time_density(rho, spectrum, grid_size)
            value = renyi_entropy(ptau, order) - math.log(tau)
        diag = BesicovitchMean(value=value, spread=0.0, windows=[], averages=[],
                               converged=True, exact=True)
    elif np.isinf(order):
        # sup of p_ap estimated over a long dense sample window
        horizon = default_window_schedule(dens)[10]
        t = np.linspace(0.0, horizon, 1 << 21)
        diag = BesicovitchMean(value=float(dens(t).max()), spread=np.nan,
                               windows=[horizon], averages=[], converged=True)
        value = -math.log(diag.value)
    elif _near(order, 1.0):
        diag = besicovitch_mean(
            lambda t: np.where(dens(t) > 1e-300,
                               dens(t) * np.log(np.clip(dens(t), 1e-300, None)), 0.0),
            density=dens, window_schedule=window_schedule)
        value = -diag.value
    elif float(order).is_integer() and order > 1:
        diag = besicovitch_mean(dens.power(int(order)),
                                window_schedule=window_schedule)
        value = math.log(diag.value) / (1.0 - order)
    else:
        diag = besicovitch_mean(lambda t: np.clip(dens(t), 0.0, None) ** order,
                                density=dens, window_schedule=window_schedule)
        value = math.log(diag.value) / (1.0 - order)
    if return_diagnostics:
        return value, diag
    return value


def corollary9_check(rho: DensityOperator, spectrum: EnergySpectrum, order: float,
                     *, seed: int = 0, grid_size: int = 8192, pairs: bool = True) -> dict:
    """Energy-time uncertainty: asymmetry plus almost-periodic entropy >= 0.

    With ``pairs`` it also reports the two relations that follow from the asymmetry
    bounds (the Shannon pair and the conjugate H_alpha(E) + H_beta^ap pair); these
    cost extra windowed averages on nonperiodic spectra.
    """
    require_quantum_order(order)
    g = spectrum.generator()
    asym = quantum.asymmetry(rho, g, order, seed=seed)
    h_ap, diag = almost_periodic_renyi_entropy(rho, spectrum, order,
                                               grid_size=grid_size,
                                               return_diagnostics=True)
    out = {"alpha": order, "asymmetry": asym.value, "h_ap": h_ap,
           "slack": asym.value + h_ap, "windowed": not diag.exact,
           "spread": diag.spread}
    if pairs:
        from .entropy import conjugate_order
        from .spectral import dephase, von_neumann_entropy
        beta = conjugate_order(order)
        h_beta_ap = almost_periodic_renyi_entropy(rho, spectrum, beta,
                                                  grid_size=grid_size)
        h_e = renyi_entropy(quantum.eigenspace_distribution(rho, g), order)
        h1_ap = almost_periodic_renyi_entropy(rho, spectrum, 1.0,
                                              grid_size=grid_size)
        rho_e = dephase(rho, g)
        out["shannon_pair_slack"] = (von_neumann_entropy(rho_e) + h1_ap
                                     - von_neumann_entropy(rho))
        out["conjugate_pair_slack"] = h_e + h_beta_ap
    return out


def time_estimation_bounds(rho: DensityOperator, spectrum: EnergySpectrum,
                           interval_length: float, order: float = 2.0, *,
                           grid_size: int = 4096, seed: int = 0) -> dict:
    """Time-shift estimation bounds for a uniform prior of width ``interval_length``.

    Periodic spectra map exactly onto the phase problem via phi = omega t; the RMSE
    Heisenberg limit in the periodic form needs that mapping and is refused for
    almost-periodic spectra.
    """
    require_quantum_order(order)
    kind, omega, tau, nk = spectrum.classification()
    g = spectrum.generator()
    asym = quantum.asymmetry(rho, g, order, seed=seed)
    out = {"alpha": order, "kind": kind, "asymmetry": asym.value,
           "interval_length": float(interval_length)}
    if kind != PERIODIC:
        raise ValidationError(
            "the periodic-form RMSE bound needs commensurate levels: a deviation-"
            "style time observable does not exist for almost-periodic spectra")
    if np.isinf(tau):
        raise ValidationError("a single energy level carries no time information")
    if interval_length > tau + 1e-12:
        raise ValidationError("prior interval cannot exceed the period")
    # map to phase: labels n_k, phi = omega t
    from .spectral import generator_from_matrix
    diag_nk = np.repeat(nk, spectrum.degeneracy).astype(float)
    phase_gen = generator_from_matrix(np.diag(diag_nk))
    ell_phi = omega * interval_length
    est = metrology.PhasePovm(generator=phase_gen, grid_size=grid_size)
    scenario = metrology.EstimationScenario(rho, phase_gen,
                                            metrology.UniformInterval(ell_phi),
                                            est, grid_size)
    stats = metrology.interval_error_distribution(scenario, orders=(order,))
    h_err_t = stats.entropy(order) - math.log(omega)
    rmse_t = stats.rmse / omega
    ell_eff = stats.interval_length / omega if stats.interval_length else interval_length
    mean_excess = float(np.sum((spectrum.levels - spectrum.ground_energy)
                               * quantum.eigenspace_distribution(rho, g).probs))
    heis = (ell_eff / tau) * metrology.f_max() / (mean_excess + 0.5 * omega)
    ptau = periodic_time_density(rho, spectrum, grid_size)
    h_t = renyi_entropy(ptau, order)
    dev_t0 = math.sqrt(max(ptau.second_moment_about(0.0), 0.0))
    coef = metrology.deviation_bound_coefficient(order)
    out.update({
        "error_entropy": h_err_t, "tradeoff_rhs": math.log(ell_eff),
        "tradeoff_slack": h_err_t + asym.value - math.log(ell_eff),
        "rmse": rmse_t, "rmse_bound": heis, "rmse_slack": rmse_t - heis,
        "canonical_pair_slack": asym.value + h_t - math.log(tau),
        "deviation_pair_slack": math.exp(asym.value) * dev_t0 - coef * tau / (2 * math.pi),
        "period": tau, "omega": omega,
    })
    return out


def information_gain_lower_bound(rho: DensityOperator, spectrum: EnergySpectrum,
                                 order: float, **kwargs) -> float:
    """-H_alpha^ap: a floor on the time-shift information gain at uniform priors."""
    require_quantum_order(order)
    return -almost_periodic_renyi_entropy(rho, spectrum, order, **kwargs)
