"""Bipartite density matrices: construction, Bloch-Fano coordinates, sampling.

Conventions fixed here and relied on elsewhere:

* generalized Gell-Mann bases are ordered symmetric pairs, antisymmetric
  pairs, then diagonal, each block in lexicographic index order (for
  d = 2 this yields the Pauli matrices sigma_x, sigma_y, sigma_z);
* Bloch coefficients are ``a_i = (d_A/2) Tr[rho (g_i (x) I)]``,
  ``b_j = (d_B/2) Tr[rho (I (x) g_j)]`` and
  ``t_ij = (d_A d_B / 4) Tr[rho (g_i (x) g_j)]``, which makes
  decompose/reconstruct exact inverses for every local dimension (the
  conventional normalization for qubits; for d > 2 several scalings
  circulate in the literature, this one is self-consistent with the
  reconstruction formula used here);
* random states are Hilbert-Schmidt induced (Ginibre construction).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonHermitianError,
    NotPSDError,
    ParseError,
    UnsupportedDimensionError,
)
from . import linalg

#: Negative-eigenvalue tolerance for density matrices; eigenvalues in
#: (-PSD_TOL, 0) are clipped to zero and the state renormalized.
PSD_TOL = 1e-10

TRACE_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@lru_cache(maxsize=None)
def gell_mann_basis(d: int) -> tuple[np.ndarray, ...]:
    """Generalized Gell-Mann basis of su(d): d^2 - 1 traceless Hermitian
    matrices with Tr[g_i g_j] = 2 delta_ij.

    Supported for 2 <= d <= 8. For d = 2 these are the Pauli matrices.
    """
    if not 2 <= d <= 8:
        raise UnsupportedDimensionError(f"Gell-Mann basis needs 2 <= d <= 8, got {d}")
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1
            m[k, j] = 1
            mats.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[:l, :l] = np.eye(l)
        m[l, l] = -l
        mats.append(np.sqrt(2.0 / (l * (l + 1))) * m)
    for m in mats:
        m.setflags(write=False)
    return tuple(mats)


@dataclass(frozen=True)
class DensityMatrix:
    """A positive unit-trace operator on a bipartite system.

    Validated at construction: Hermitian within 1e-12, unit trace within
    1e-12, smallest eigenvalue >= -1e-10. Eigenvalues in (-1e-10, 0) are
    clipped to zero and the matrix renormalized.
    """

    dims: tuple[int, int]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        d_a, d_b = self.dims
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (d_a * d_b, d_a * d_b):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match dims {self.dims}"
            )
        if not linalg.is_hermitian(m):
            raise NonHermitianError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise ValueError("density matrix trace differs from 1 by more than 1e-12")
        w, v = np.linalg.eigh(m)
        if w[0] < -PSD_TOL:
            raise NotPSDError(f"eigenvalue {w[0]:.3e} below -1e-10")
        if w[0] < 0:
            w = np.where(w < 0, 0.0, w)
            m = (v * w) @ v.conj().T
            m = (m + m.conj().T) / 2
            m /= np.trace(m).real
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def marginal(self, keep: str) -> np.ndarray:
        """Reduced operator of subsystem ``keep`` ('A' or 'B')."""
        return linalg.partial_trace(self.matrix, self.dims, keep)

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)


@dataclass(frozen=True)
class BlochFano:
    """Local Bloch vectors and correlation tensor of a bipartite state."""

    dims: tuple[int, int]
    a: np.ndarray
    b: np.ndarray
    t: np.ndarray


@lru_cache(maxsize=None)
def _operator_stacks(dims: tuple[int, int]):
    d_a, d_b = dims
    ga = gell_mann_basis(d_a)
    gb = gell_mann_basis(d_b)
    ia, ib = np.eye(d_a), np.eye(d_b)
    stack_a = np.stack([np.kron(g, ib) for g in ga])
    stack_b = np.stack([np.kron(ia, g) for g in gb])
    stack_t = np.stack([np.kron(gi, gj) for gi in ga for gj in gb])
    return stack_a, stack_b, stack_t


def decompose(rho: DensityMatrix) -> BlochFano:
    """Bloch-Fano coordinates of a bipartite density matrix."""
    d_a, d_b = rho.dims
    stack_a, stack_b, stack_t = _operator_stacks(rho.dims)
    m = rho.matrix
    a = (d_a / 2) * np.einsum("kij,ji->k", stack_a, m).real
    b = (d_b / 2) * np.einsum("kij,ji->k", stack_b, m).real
    t = (d_a * d_b / 4) * np.einsum("kij,ji->k", stack_t, m).real
    return BlochFano(rho.dims, a, b, t.reshape(d_a**2 - 1, d_b**2 - 1))


def reconstruct(bf: BlochFano, dims: tuple[int, int] | None = None) -> DensityMatrix:
    """Rebuild the density matrix from Bloch-Fano coordinates.

    Inverse of :func:`decompose`. Raises ``NotPSDError`` when the
    coefficients do not describe a positive operator.
    """
    dims = dims or bf.dims
    d_a, d_b = dims
    stack_a, stack_b, stack_t = _operator_stacks(dims)
    m = np.eye(d_a * d_b, dtype=complex)
    m += np.tensordot(bf.a, stack_a, axes=1)
    m += np.tensordot(bf.b, stack_b, axes=1)
    m += np.tensordot(bf.t.ravel(), stack_t, axes=1)
    return DensityMatrix(dims, m / (d_a * d_b))


@dataclass(frozen=True)
class WeylParams:
    """Diagonal correlation coefficients (t11, t22, t33) of a two-qubit
    locally maximally mixed state; positivity is checked at construction."""

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.shape != (3,):
            raise DimensionMismatchError("Weyl parameters must be a 3-vector")
        object.__setattr__(self, "t", t)
        if weyl_spectrum(self)[0] < -PSD_TOL:
            raise NotPSDError(f"Weyl parameters {tuple(t)} give a negative eigenvalue")


def _as_weyl(t) -> WeylParams:
    return t if isinstance(t, WeylParams) else WeylParams(np.asarray(t, dtype=float))


def weyl_spectrum(t) -> np.ndarray:
    """Spectrum of the two-qubit state with diagonal correlations ``t``,
    in ascending order:

    ``{(1 - t1 - t2 - t3)/4, (1 - t1 + t2 + t3)/4,
       (1 + t1 - t2 + t3)/4, (1 + t1 + t2 - t3)/4}``.
    """
    t = t.t if isinstance(t, WeylParams) else np.asarray(t, dtype=float)
    t1, t2, t3 = t
    vals = np.array(
        [
            (1 - t1 - t2 - t3) / 4,
            (1 - t1 + t2 + t3) / 4,
            (1 + t1 - t2 + t3) / 4,
            (1 + t1 + t2 - t3) / 4,
        ]
    )
    return np.sort(vals)


def weyl_state(t) -> DensityMatrix:
    """Two-qubit state ``(1/4)[I + sum_i t_i sigma_i (x) sigma_i]``."""
    params = _as_weyl(t)
    t1, t2, t3 = params.t
    m = np.eye(4, dtype=complex)
    m += t1 * np.kron(PAULI_X, PAULI_X)
    m += t2 * np.kron(PAULI_Y, PAULI_Y)
    m += t3 * np.kron(PAULI_Z, PAULI_Z)
    return DensityMatrix((2, 2), m / 4)


@dataclass(frozen=True)
class SchmidtPureState:
    """Squared Schmidt coefficients of a pure state on a d x d system."""

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 1 or q.size < 1:
            raise DimensionMismatchError("Schmidt coefficients must be a vector")
        if q.min() < -1e-12 or abs(q.sum() - 1.0) > 1e-12:
            raise ValueError("Schmidt coefficients must be a probability vector")
        q = np.where(q < 0, 0.0, q)
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def d(self) -> int:
        return self.q.size


def schmidt_state(q) -> DensityMatrix:
    """Projector onto ``sum_j sqrt(q_j) |jj>`` in the computational bases."""
    sps = q if isinstance(q, SchmidtPureState) else SchmidtPureState(np.asarray(q, dtype=float))
    d = sps.d
    ket = np.zeros(d * d, dtype=complex)
    ket[:: d + 1] = np.sqrt(sps.q)
    return DensityMatrix((d, d), np.outer(ket, ket.conj()))


def random_density_matrix(d_a: int, d_b: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Hilbert-Schmidt random state ``G G^dagger / Tr`` with ``G`` a
    (d_a d_b) x rank complex Gaussian matrix from the seeded generator.

    Deterministic per seed; ``seed`` may be an int or a Generator.
    """
    n = d_a * d_b
    rank = n if rank is None else rank
    if not 1 <= rank <= n:
        raise DimensionMismatchError(f"rank must be in [1, {n}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    m = g @ g.conj().T
    return DensityMatrix((d_a, d_b), m / np.trace(m).real)


def _format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def write_state_file(rho: DensityMatrix, path) -> None:
    """Write a state as text: ``dims d_A d_B`` then one row per line of
    whitespace-separated ``re+imj`` literals (17 significant digits, so
    the round trip is exact)."""
    lines = [f"dims {rho.dims[0]} {rho.dims[1]}"]
    for row in rho.matrix:
        lines.append(" ".join(_format_complex(z) for z in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_state_file(path) -> DensityMatrix:
    """Parse a state file written by :func:`write_state_file`."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("dims"):
        raise ParseError("state file must start with a 'dims d_A d_B' line")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError(f"malformed dims line: {lines[0]!r}")
    try:
        d_a, d_b = int(head[1]), int(head[2])
    except ValueError as exc:
        raise ParseError(f"malformed dims line: {lines[0]!r}") from exc
    n = d_a * d_b
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != n:
            raise ParseError(f"expected {n} entries per row, found {len(toks)}")
        try:
            rows.append([complex(tok) for tok in toks])
        except ValueError as exc:
            raise ParseError(f"bad complex literal in row: {ln!r}") from exc
    try:
        return DensityMatrix((d_a, d_b), np.array(rows))
    except (NonHermitianError, NotPSDError, ValueError) as exc:
        raise ParseError(f"file does not contain a valid density matrix: {exc}") from exc
