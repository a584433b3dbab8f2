"""Dense complex linear algebra for small multi-qubit systems.

States and operators are plain numpy arrays wrapped in light validating
containers.  Subsystems are ordered so that the *left* tensor factor is
the slowest-varying index (standard Kronecker convention), and all
tolerances are absolute: amplitudes in this package are O(1).
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

# A dense complex operator.  Kept as a bare ndarray alias on purpose:
# everything in this package is small enough that numpy is the right tool.
ComplexMatrix = np.ndarray

#: Default absolute tolerance for validation checks.
ATOL = 1e-10
#: Absolute tolerance for state-vector normalisation.
NORM_ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def ket(index: int, dim: int = 2) -> np.ndarray:
    """Computational basis column vector |index> of dimension dim."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def ketbra(i: int, j: int, dim: int = 2) -> np.ndarray:
    """Matrix unit |i><j| of dimension dim."""
    return np.outer(ket(i, dim), ket(j, dim).conj())


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more vectors or matrices.

    The first argument is the slowest-varying (leftmost) factor.
    """
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def _freeze(array: np.ndarray) -> np.ndarray:
    frozen = np.array(array, dtype=complex, copy=True)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True)
class PureState:
    """A normalised state vector over a fixed list of subsystem dimensions."""

    amplitudes: np.ndarray
    subsystem_dims: tuple[int, ...]

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.subsystem_dims)
        if any(d < 1 for d in dims) or not dims:
            raise ValueError(f"invalid subsystem dimensions {dims}")
        if int(np.prod(dims)) != amps.size:
            raise ValueError(
                f"amplitude vector of length {amps.size} does not match "
                f"subsystem dimensions {dims}"
            )
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state vector norm {norm!r} is not 1 within {NORM_ATOL}")
        object.__setattr__(self, "amplitudes", _freeze(amps))
        object.__setattr__(self, "subsystem_dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        """Rank-one density matrix |psi><psi|."""
        return DensityMatrix(
            np.outer(self.amplitudes, self.amplitudes.conj()), self.subsystem_dims
        )


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, positive-semidefinite, unit-trace operator."""

    matrix: np.ndarray
    subsystem_dims: tuple[int, ...]

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        dims = tuple(int(d) for d in self.subsystem_dims)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        if any(d < 1 for d in dims) or not dims:
            raise ValueError(f"invalid subsystem dimensions {dims}")
        if int(np.prod(dims)) != mat.shape[0]:
            raise ValueError(
                f"matrix dimension {mat.shape[0]} does not match "
                f"subsystem dimensions {dims}"
            )
        if not np.all(np.isfinite(mat.view(float))):
            raise ValueError("matrix entries must be finite")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL:
            raise ValueError(f"matrix is not Hermitian within {ATOL}")
        if abs(np.trace(mat).real - 1.0) > ATOL:
            raise ValueError(f"trace {np.trace(mat)!r} is not 1 within {ATOL}")
        eigs = np.linalg.eigvalsh(mat)
        if eigs.min() < -ATOL:
            raise ValueError(f"matrix has negative eigenvalue {eigs.min():.3e}")
        object.__setattr__(self, "matrix", _freeze(mat))
        object.__setattr__(self, "subsystem_dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...] | list[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in keep.

    Subsystem order is preserved among the kept factors.  An empty keep
    traces out everything and returns the full trace as a 1x1 matrix.
    """
    dims = rho.subsystem_dims
    n = len(dims)
    keep_sorted = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep_sorted):
        raise ValueError(f"keep indices {keep_sorted} out of range for {n} subsystems")
    if not keep_sorted:
        return DensityMatrix(np.array([[np.trace(rho.matrix)]]), (1,))

    letters = string.ascii_lowercase
    row = [letters[i] for i in range(n)]
    col = [letters[n + i] if i in keep_sorted else letters[i] for i in range(n)]
    out = [row[i] for i in keep_sorted] + [col[i] for i in keep_sorted]
    spec = "".join(row + col) + "->" + "".join(out)

    reshaped = rho.matrix.reshape(*dims, *dims)
    reduced = np.einsum(spec, reshaped)
    kept_dims = tuple(dims[i] for i in keep_sorted)
    side = int(np.prod(kept_dims))
    return DensityMatrix(reduced.reshape(side, side), kept_dims)


def purity(rho: DensityMatrix) -> float:
    """Tr rho^2.  Equals 1 exactly for pure states, 1/d for maximally mixed."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def fidelity_to_pure(rho: DensityMatrix, psi: PureState) -> float:
    """Fidelity <psi| rho |psi> of a density matrix with a pure target."""
    if rho.dim != psi.dim:
        raise ValueError(f"dimension mismatch: state {rho.dim} vs target {psi.dim}")
    amps = psi.amplitudes
    return float((amps.conj() @ rho.matrix @ amps).real)


def dephase_subsystem(matrix: np.ndarray, dims: tuple[int, ...], which: int) -> np.ndarray:
    """Zero every coherence between distinct basis states of one subsystem.

    This is the fully dephasing channel on subsystem `which`, applied to a
    matrix over the listed subsystem dimensions.
    """
    n = len(dims)
    if not 0 <= which < n:
        raise ValueError(f"subsystem {which} out of range for {n} subsystems")
    out = np.array(matrix, dtype=complex, copy=True).reshape(*dims, *dims)
    for r in range(dims[which]):
        for c in range(dims[which]):
            if r != c:
                index = [slice(None)] * (2 * n)
                index[which] = r
                index[n + which] = c
                out[tuple(index)] = 0.0
    return out.reshape(matrix.shape[0], matrix.shape[1])


def bell_phi_plus() -> PureState:
    """The two-qubit state (|00> + |11>)/sqrt(2)."""
    return PureState(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2.0), (2, 2))
