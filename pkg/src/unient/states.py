"""Dense state containers, partial traces and spectral calculus."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
# eigenvalues in [-CLAMP_TOL, 0) are treated as numerical noise
CLAMP_TOL = 1e-9
RNG_ALGORITHM = "philox4x64-10"


class StateError(ValueError):
    """Raised when an array does not describe a valid quantum state."""


def _check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise StateError(f"dims must be a nonempty sequence of positive integers, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on a tensor product of local spaces.

    Args:
        amplitudes: complex vector of length ``prod(dims)``.
        dims: local dimension of each party, in tensor order.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise StateError(f"{amps.size} amplitudes do not match dims {dims}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state is not normalised (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_unnormalized(cls, amplitudes, dims) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(amps / np.linalg.norm(amps), dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)

    def permute(self, order: Sequence[int]) -> "PureState":
        """Reorder the parties so that new party ``i`` is old party ``order[i]``."""
        order = list(order)
        if sorted(order) != list(range(self.n_parties)):
            raise StateError(f"{order} is not a permutation of the parties")
        amps = np.transpose(self.tensor(), order).reshape(-1)
        return PureState(amps, tuple(self.dims[i] for i in order))

    def kron(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes), self.dims + other.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator with party dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        dim = int(np.prod(dims))
        if mat.shape != (dim, dim):
            raise StateError(f"matrix shape {mat.shape} does not match dims {dims}")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise StateError("matrix is not Hermitian")
        mat = 0.5 * (mat + mat.conj().T)
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(mat)[0] < -CLAMP_TOL:
            raise StateError("matrix is not positive semidefinite")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def permute(self, order: Sequence[int]) -> "DensityMatrix":
        order = list(order)
        n = self.n_parties
        if sorted(order) != list(range(n)):
            raise StateError(f"{order} is not a permutation of the parties")
        t = self.matrix.reshape(self.dims + self.dims)
        t = np.transpose(t, order + [n + i for i in order])
        return DensityMatrix(t.reshape(self.dim, self.dim), tuple(self.dims[i] for i in order))

    def kron(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.matrix, other.matrix), self.dims + other.dims)


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalues with the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def maximally_mixed(dims) -> DensityMatrix:
    dims = _check_dims(np.atleast_1d(dims))
    d = int(np.prod(dims))
    return DensityMatrix(np.eye(d) / d, dims)


def _keep_list(keep, n: int) -> list[int]:
    keep = sorted(set(int(k) for k in np.atleast_1d(list(keep) if not np.isscalar(keep) else keep)))
    if not keep:
        raise StateError("keep set is empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise StateError(f"party index out of range for {n} parties: {keep}")
    return keep


def reduced_matrix(state: State, keep, *, allow_full: bool = False) -> np.ndarray:
    """Unvalidated reduced matrix on the parties in ``keep`` (original order)."""
    n = state.n_parties
    keep = _keep_list(keep, n)
    if len(keep) == n and not allow_full:
        raise StateError("keep set must be a proper subset of the parties")
    rest = [i for i in range(n) if i not in keep]
    dk = int(np.prod([state.dims[i] for i in keep]))
    if isinstance(state, PureState):
        m = np.transpose(state.tensor(), keep + rest).reshape(dk, -1)
        return m @ m.conj().T
    t = state.matrix.reshape(state.dims + state.dims)
    t = np.transpose(t, keep + rest + [n + i for i in keep] + [n + i for i in rest])
    dr = state.dim // dk
    return np.einsum("ajbj->ab", t.reshape(dk, dr, dk, dr))


def partial_trace(state: State, keep) -> DensityMatrix:
    """Trace out every party not in ``keep``.

    Args:
        state: pure or mixed state.
        keep: nonempty proper subset of party indices (0-based).

    Returns:
        DensityMatrix on the kept parties, in their original relative order.
    """
    keep_l = _keep_list(keep, state.n_parties)
    mat = reduced_matrix(state, keep_l)
    return DensityMatrix(clamp_psd(mat), tuple(state.dims[i] for i in keep_l))


def _clamped_eigh(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    if w[0] < -CLAMP_TOL:
        raise StateError(f"eigenvalue {w[0]!r} below clamp threshold")
    w = np.where(w < 0, 0.0, w)
    return w, v


def clamp_psd(mat: np.ndarray) -> np.ndarray:
    """Zero tiny negative eigenvalues and renormalise to unit trace."""
    w, v = _clamped_eigh(mat)
    w = w / w.sum()
    return (v * w) @ v.conj().T


def spectral_decompose(rho: DensityMatrix | np.ndarray) -> Spectrum:
    """Eigen-decomposition with descending, clamped, renormalised eigenvalues."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
        raise StateError("matrix is not Hermitian")
    w, v = _clamped_eigh(mat)
    w = w / w.sum()
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def eigenvalues(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    w = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    if w[0] < -CLAMP_TOL:
        raise StateError(f"eigenvalue {w[0]!r} below clamp threshold")
    w = np.where(w < 0, 0.0, w)
    return (w / w.sum())[::-1]


def matrix_power(rho: DensityMatrix | np.ndarray, alpha: float) -> np.ndarray:
    """Spectral power of a density operator.

    For ``alpha < 0`` this is the pseudo-power on the support: eigenvalues at or
    below ``CLAMP_TOL`` map to zero.
    """
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    spec = spectral_decompose(rho)
    w = spec.eigenvalues
    if alpha > 0:
        wp = w**alpha
    else:
        wp = np.zeros_like(w)
        supp = w > CLAMP_TOL
        wp[supp] = w[supp] ** alpha
    v = spec.eigenvectors
    return (v * wp) @ v.conj().T


def trace_power_from_eigs(w: np.ndarray, x: float) -> float:
    w = w[w > 0]
    return float(np.sum(w**x))


def trace_power(rho: DensityMatrix | np.ndarray, x: float) -> float:
    """``tr(rho**x)`` over the clamped spectrum, ``x > 0``."""
    if x <= 0:
        raise ValueError("x must be positive")
    if x == 1:
        return 1.0
    return trace_power_from_eigs(eigenvalues(rho), x)


def schmidt_coefficients(psi: PureState, block) -> np.ndarray:
    """Descending Schmidt coefficients of ``psi`` across ``block | rest``.

    ``block`` is either a set of party indices or a two-block
    :class:`~unient.partitions.Partition` covering all parties.
    """
    from .partitions import Partition

    n = psi.n_parties
    if isinstance(block, Partition):
        if len(block.blocks) != 2 or not block.covers(n):
            raise StateError(f"{block} is not a bipartition of {n} parties")
        block = block.blocks[0]
    keep = _keep_list(block, n)
    if len(keep) == n:
        raise StateError("bipartition must leave a nonempty complement")
    rest = [i for i in range(n) if i not in keep]
    dk = int(np.prod([psi.dims[i] for i in keep]))
    m = np.transpose(psi.tensor(), keep + rest).reshape(dk, -1)
    s = np.linalg.svd(m, compute_uv=False)
    s = s[s > 1e-15]
    return s / np.linalg.norm(s)


# --- seeded sampling ------------------------------------------------------


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, stream)``.

    Philox4x64-10 with key ``[seed, stream]`` and a zero counter; the same pair
    always yields the same sample sequence.
    """
    key = np.array([int(seed) & 0xFFFFFFFFFFFFFFFF, int(stream) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, tuple):
        return make_rng(*rng)
    return make_rng(int(rng))


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample_haar_pure(dims, rng) -> PureState:
    """Haar-random pure state on ``dims``.

    ``rng`` may be a ``Generator``, a seed, or a ``(seed, stream)`` pair.
    """
    dims = _check_dims(np.atleast_1d(dims))
    v = _ginibre(_as_rng(rng), int(np.prod(dims)))
    return PureState(v / np.linalg.norm(v), dims)


def sample_ginibre_density(dims, rank: int | None, rng) -> DensityMatrix:
    """Induced-measure random density matrix ``G G^dag / tr`` with ``G`` of shape (dim, rank)."""
    dims = _check_dims(np.atleast_1d(dims))
    dim = int(np.prod(dims))
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    g = _ginibre(_as_rng(rng), (dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims)


def sample_haar_unitary(dim: int, rng) -> np.ndarray:
    z = _ginibre(_as_rng(rng), (dim, dim)) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# --- named states ---------------------------------------------------------


def basis_state(digits: Sequence[int], dims=None) -> PureState:
    dims = tuple(dims) if dims is not None else (2,) * len(digits)
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return PureState(v, dims)


def bell_state() -> PureState:
    return PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))


def ghz_state(n: int = 3, d: int = 2) -> PureState:
    v = np.zeros(d**n, dtype=complex)
    for k in range(d):
        v[np.ravel_multi_index((k,) * n, (d,) * n)] = 1.0
    return PureState(v / np.sqrt(d), (d,) * n)


def w_state(n: int = 3) -> PureState:
    v = np.zeros(2**n, dtype=complex)
    for k in range(n):
        v[1 << k] = 1.0
    return PureState(v / np.sqrt(n), (2,) * n)
