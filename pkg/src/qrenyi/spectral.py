"""Dense complex Hermitian linear algebra on truncated finite-dimensional systems.

States are plain complex numpy matrices wrapped with their basis labels; generators
carry a degeneracy-grouped spectral decomposition so that eigenspace projectors stay
stable under eigenvalue rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
SUPPORT_TOL = 1e-12


class ValidationError(ValueError):
    """Raised when an operator violates a structural invariant."""


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    return a


def require_hermitian(m, tol: float = HERMITICITY_TOL, name: str = "matrix") -> np.ndarray:
    a = _as_matrix(m)
    scale = max(1.0, float(np.abs(a).max()) if a.size else 1.0)
    if np.abs(a - a.conj().T).max() > tol * scale:
        raise ValidationError(f"{name} is not Hermitian within tolerance {tol}")
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues grouped into eigenspaces with their orthogonal projectors."""

    eigenvalues: np.ndarray
    projectors: tuple
    degeneracy_tol: float

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for g, p in zip(self.eigenvalues, self.projectors):
            out += g * p
        return out

    def unitary(self, x: float) -> np.ndarray:
        """exp(-i x G) assembled from the eigenspace projectors."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for g, p in zip(self.eigenvalues, self.projectors):
            out += np.exp(-1j * g * x) * p
        return out


def eigendecompose(m, degeneracy_tol: float | None = None) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix, merging close eigenvalues into eigenspaces.

    Eigenvalues are returned ascending; values closer than ``degeneracy_tol``
    (default ``1e-9 * max|eigenvalue|``) share one projector.
    """
    a = require_hermitian(m)
    vals, vecs = np.linalg.eigh(a)
    if degeneracy_tol is None:
        degeneracy_tol = 1e-9 * max(1.0, float(np.abs(vals).max()))
    groups = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > degeneracy_tol:
            groups.append((start, i))
            start = i
    eigenvalues = []
    projectors = []
    for a0, b0 in groups:
        v = vecs[:, a0:b0]
        eigenvalues.append(float(np.mean(vals[a0:b0])))
        p = v @ v.conj().T
        p.setflags(write=False)
        projectors.append(p)
    ev = np.asarray(eigenvalues)
    ev.setflags(write=False)
    return SpectralDecomposition(eigenvalues=ev, projectors=tuple(projectors),
                                 degeneracy_tol=float(degeneracy_tol))


def fractional_power(m, exponent: float, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Matrix power on the support: eigenvalues <= support_tol map to zero.

    This keeps negative exponents well defined (pseudo-inverse convention).
    """
    a = require_hermitian(m)
    vals, vecs = np.linalg.eigh(a)
    if vals.min() < -PSD_TOL * max(1.0, float(np.abs(vals).max())):
        raise ValidationError(f"matrix has negative eigenvalue {vals.min():.3e}; "
                              "fractional powers require positive semidefiniteness")
    vals = np.clip(vals, 0.0, None)
    powered = np.where(vals > support_tol, vals, 1.0) ** exponent
    powered = np.where(vals > support_tol, powered, 0.0)
    return (vecs * powered) @ vecs.conj().T


class GeneratorKind(Enum):
    NUMBER = "number"
    ANGULAR_MOMENTUM_Z = "jz"
    ENERGY = "energy"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Generator:
    """Hermitian generator G = sum_k g_k P_k with labelled eigenspaces."""

    decomposition: SpectralDecomposition
    kind: GeneratorKind = GeneratorKind.CUSTOM

    def __post_init__(self):
        ev = self.decomposition.eigenvalues
        if self.kind is GeneratorKind.NUMBER:
            expected = np.arange(self.dim)
            if len(ev) != self.dim or np.abs(ev - expected).max() > 1e-9:
                raise ValidationError("number generator must have eigenvalues 0..dim-1")
        elif self.kind is GeneratorKind.ANGULAR_MOMENTUM_Z:
            if np.abs(ev - np.round(ev)).max() > 1e-9:
                raise ValidationError("angular momentum eigenvalues must be integers")

    @property
    def dim(self) -> int:
        return self.decomposition.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.decomposition.eigenvalues

    @property
    def projectors(self):
        return self.decomposition.projectors

    @property
    def matrix(self) -> np.ndarray:
        return self.decomposition.reconstruct()

    def is_nondegenerate(self) -> bool:
        return len(self.eigenvalues) == self.dim

    def basis_eigenvalues(self) -> np.ndarray:
        """Per-basis-state eigenvalue when every projector is diagonal rank-1 style.

        Valid for generators diagonal in the computational basis (the common case);
        used by the Fourier fast paths.
        """
        g = np.zeros(self.dim)
        for val, p in zip(self.eigenvalues, self.projectors):
            g += val * np.real(np.diag(p))
        return g

    def is_diagonal(self) -> bool:
        m = self.matrix
        return bool(np.abs(m - np.diag(np.diag(m))).max() < 1e-12)


def number_generator(dim: int) -> Generator:
    return Generator(eigendecompose(np.diag(np.arange(dim, dtype=float))),
                     kind=GeneratorKind.NUMBER)


def angular_momentum_z(j_max: int) -> Generator:
    vals = np.arange(-j_max, j_max + 1, dtype=float)
    return Generator(eigendecompose(np.diag(vals)), kind=GeneratorKind.ANGULAR_MOMENTUM_Z)


def energy_generator(levels, degeneracy: int = 1) -> Generator:
    """Hamiltonian with the given levels, each repeated ``degeneracy`` times (level-major)."""
    lv = np.asarray(levels, dtype=float)
    diag = np.repeat(lv, degeneracy)
    return Generator(eigendecompose(np.diag(diag)), kind=GeneratorKind.ENERGY)


def generator_from_matrix(m, kind: GeneratorKind = GeneratorKind.CUSTOM,
                          degeneracy_tol: float | None = None) -> Generator:
    return Generator(eigendecompose(m, degeneracy_tol), kind=kind)


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one positive semidefinite Hermitian matrix over labelled basis states."""

    matrix: np.ndarray
    labels: np.ndarray = None

    def __post_init__(self):
        m = require_hermitian(self.matrix, name="density matrix")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr}, not 1 within {TRACE_TOL}")
        vals = np.linalg.eigvalsh(m)
        if vals.min() < -PSD_TOL:
            raise ValidationError(f"negative eigenvalue {vals.min():.3e} below -{PSD_TOL}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        labels = self.labels
        if labels is None:
            labels = np.arange(m.shape[0])
        labels = np.asarray(labels, dtype=int)
        if labels.shape != (m.shape[0],):
            raise ValidationError("labels must have one integer per basis state")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return self.purity() >= 1.0 - tol

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "labels": [int(n) for n in self.labels],
            "matrix": [[{"re": float(z.real), "im": float(z.imag)} for z in row]
                       for row in self.matrix],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DensityOperator":
        dim = int(data["dim"])
        raw = data["matrix"]
        if len(raw) != dim or any(len(row) != dim for row in raw):
            raise ValidationError("matrix shape does not match declared dimension")
        m = np.array([[complex(c["re"], c["im"]) for c in row] for row in raw])
        return cls(matrix=m, labels=np.asarray(data["labels"], dtype=int))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "DensityOperator":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def pure_state(vec, labels=None) -> DensityOperator:
    """Density operator |psi><psi| from a (not necessarily normalised) state vector."""
    v = np.asarray(vec, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return DensityOperator(np.outer(v, v.conj()), labels=labels)


def maximally_mixed(dim: int, labels=None) -> DensityOperator:
    return DensityOperator(np.eye(dim) / dim, labels=labels)


def dephase(rho: DensityOperator, g: Generator) -> DensityOperator:
    """Project the state onto the commutant of g: sum_k P_k rho P_k."""
    if rho.dim != g.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, generator {g.dim}")
    out = np.zeros_like(rho.matrix)
    for p in g.projectors:
        out = out + p @ rho.matrix @ p
    return DensityOperator(out, labels=rho.labels)


def displace(rho: DensityOperator, g: Generator, x: float) -> DensityOperator:
    """Unitary displacement exp(-i x G) rho exp(+i x G)."""
    if rho.dim != g.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, generator {g.dim}")
    u = g.decomposition.unitary(x)
    return DensityOperator(u @ rho.matrix @ u.conj().T, labels=rho.labels)


def purify(rho: DensityOperator, rank_tol: float = 1e-12):
    """Purification on system (x) ancilla, with ancilla dimension equal to rank(rho).

    Returns ``(pure_state, ancilla_dim)``; tracing the ancilla recovers ``rho``.
    """
    vals, vecs = np.linalg.eigh(rho.matrix)
    keep = vals > rank_tol
    vals, vecs = vals[keep], vecs[:, keep]
    r = int(vals.size)
    d = rho.dim
    psi = np.zeros(d * r, dtype=complex)
    for i in range(r):
        anc = np.zeros(r)
        anc[i] = 1.0
        psi += np.sqrt(vals[i]) * np.kron(vecs[:, i], anc)
    return pure_state(psi), r


def partial_trace(rho: DensityOperator, keep: int, dims) -> DensityOperator:
    """Trace out all factors except ``keep`` (0-based) for a state on prod(dims)."""
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != rho.dim:
        raise ValidationError(f"dims {dims} do not factor dimension {rho.dim}")
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    # contract every factor except the kept one
    for axis in reversed([i for i in range(n) if i != keep]):
        t = np.trace(t, axis1=axis, axis2=axis + (t.ndim // 2))
    return DensityOperator(t)


def von_neumann_entropy(rho: DensityOperator) -> float:
    vals = rho.eigenvalues()
    vals = vals[vals > 1e-15]
    return float(-np.sum(vals * np.log(vals)))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure(dim: int, rng: np.random.Generator, labels=None) -> DensityOperator:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return pure_state(v, labels=labels)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None,
                   labels=None) -> DensityOperator:
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = a @ a.conj().T
    return DensityOperator(m / np.real(np.trace(m)), labels=labels)
