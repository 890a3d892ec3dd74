"""Bipartite unified-entropy entanglement and the two-qubit closed form."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .entropy import DomainError, MeasureParams, spectrum_of, unified_entropy, unified_entropy_from_eigs
from .partitions import Partition
from .states import DensityMatrix, PureState, StateError, bell_state, schmidt_coefficients

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
ENTANGLED_TOL = 1e-9


def _block(psi: PureState, bipartition) -> tuple[int, ...]:
    n = psi.n_parties
    if isinstance(bipartition, str):
        bipartition = Partition.parse(bipartition, n)
    if isinstance(bipartition, Partition):
        if bipartition.k != 2 or not bipartition.covers(n):
            raise StateError(f"{bipartition} is not a bipartition of {n} parties")
        return bipartition.blocks[0]
    block = tuple(sorted(set(bipartition)))
    if not block or len(block) >= n:
        raise StateError(f"{block} does not define a bipartition of {n} parties")
    return block


def entanglement_pure(psi: PureState, bipartition, p: MeasureParams) -> float:
    """``E(psi) = S(tr_B |psi><psi|)`` across the given bipartition.

    ``bipartition`` is a two-block :class:`Partition`, its text form, or the
    set of parties forming one side. Defaults for two parties: ``"A|B"``.
    """
    block = _block(psi, bipartition)
    s = schmidt_coefficients(psi, block)
    return unified_entropy(s**2, p)


def h_check(lam, p: MeasureParams):
    """Two-level reduced function ``h(lam) = [(lam^a + (1-lam)^a)^b - 1] / ((1-a) b)``."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or np.any(lam > 1):
        raise DomainError("lambda must lie in [0, 1]")
    tp = lam**p.a + (1.0 - lam) ** p.a
    out = np.where((lam == 0) | (lam == 1), 0.0, p.from_trace_power(tp))
    return float(out) if out.ndim == 0 else out


def _two_qubit(rho: DensityMatrix) -> np.ndarray:
    if rho.dims != (2, 2):
        raise StateError(f"expected two-qubit dims (2, 2), got {rho.dims}")
    return rho.matrix


def concurrence_two_qubit(rho: DensityMatrix | PureState) -> float:
    """Spin-flip concurrence ``max(0, l_1 - l_2 - l_3 - l_4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (Y x Y) rho* (Y x Y)``. They are computed as the singular values of
    ``V^T (Y x Y) V`` with ``rho = V V^dag``, which avoids square roots of
    noisy near-zero eigenvalues.
    """
    if isinstance(rho, PureState):
        if rho.dims != (2, 2):
            raise StateError(f"expected two-qubit dims (2, 2), got {rho.dims}")
        v = rho.amplitudes[:, None]
    else:
        m = _two_qubit(rho)
        w, u = np.linalg.eigh(0.5 * (m + m.conj().T))
        v = u * np.sqrt(np.clip(w, 0.0, None))
    yy = np.kron(SIGMA_Y, SIGMA_Y).real
    lam = np.zeros(4)
    sv = np.linalg.svd(v.T @ yy @ v, compute_uv=False)
    lam[: sv.size] = np.sort(sv)[::-1]
    return float(min(max(0.0, lam[0] - lam[1:].sum()), 1.0))


def epsilon_of_concurrence(c, p: MeasureParams):
    """``h((1 + sqrt(1 - C^2)) / 2)``."""
    c = np.clip(np.asarray(c, dtype=float), 0.0, 1.0)
    return h_check((1.0 + np.sqrt(1.0 - c**2)) / 2.0, p)


def two_qubit_measure(rho: DensityMatrix | PureState, p: MeasureParams) -> float:
    """Closed form ``eps[C(rho)]`` for a two-qubit state.

    Exact convex roof when ``eps`` is convex in ``C`` on the relevant range;
    otherwise an upper bound (see :func:`two_qubit_roof_bracket`).
    """
    c = concurrence_two_qubit(rho)
    if c == 0:
        return 0.0
    return float(epsilon_of_concurrence(c, p))


@lru_cache(maxsize=64)
def _envelope_table(p: MeasureParams, n: int = 20001) -> tuple[np.ndarray, np.ndarray]:
    # lower convex hull of eps on a uniform grid (monotone chain)
    c = np.linspace(0.0, 1.0, n)
    e = np.asarray(epsilon_of_concurrence(c, p))
    hull: list[int] = []
    for i in range(n):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            cross = (c[i1] - c[i0]) * (e[i] - e[i0]) - (e[i1] - e[i0]) * (c[i] - c[i0])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return c[hull], e[hull]


def convex_envelope(c, p: MeasureParams):
    """Largest convex function below ``eps`` on [0, 1], evaluated at ``c``."""
    xs, ys = _envelope_table(p)
    c = np.clip(c, 0.0, 1.0)
    # chords between grid samples overshoot where eps is convex; eps itself bounds the envelope
    out = np.minimum(np.interp(c, xs, ys), epsilon_of_concurrence(c, p))
    return float(out) if np.ndim(out) == 0 else out


def two_qubit_roof_bracket(rho: DensityMatrix, p: MeasureParams) -> tuple[float, float]:
    """Bounds ``(lower, upper)`` on the two-qubit convex roof.

    ``upper = eps[C]`` (an ensemble of equal-concurrence pure states exists);
    ``lower`` is the convex envelope of ``eps`` at ``C``, which is monotone,
    so no ensemble can average below it. The two coincide whenever ``eps`` is
    convex, e.g. QS(2,1).
    """
    c = concurrence_two_qubit(rho)
    return float(convex_envelope(c, p)), float(epsilon_of_concurrence(c, p))


def werner_state(p: float) -> DensityMatrix:
    """``p |Phi+><Phi+| + (1 - p) I/4``."""
    if not 0 <= p <= 1:
        raise DomainError(f"Werner parameter must lie in [0, 1], got {p}")
    phi = bell_state().amplitudes
    return DensityMatrix(p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(4) / 4, (2, 2))


def werner_concurrence(p: float) -> float:
    return max(0.0, (3 * p - 1) / 2)


def werner_e22(p: float) -> float:
    """Published piecewise form of ``E_{2,2}`` on Werner states."""
    if p <= 1 / 3:
        return 0.0
    x = 3 * p - 1
    return x**2 / 8 - x**4 / 128


def werner_e2_half(p: float) -> float:
    """Published piecewise form of ``E_{2,1/2}`` on Werner states."""
    if p <= 1 / 3:
        return 0.0
    return 2 * (1 - np.sqrt((-9 * p**2 + 6 * p + 7) / 8))


def werner_e_half_half(p: float) -> float:
    """Published piecewise form of ``E_{1/2,1/2}`` on Werner states."""
    if p <= 1 / 3:
        return 0.0
    return 4 * (((3 * p + 1) / 2) ** 0.25 - 1)


def is_entangled(psi: PureState, block=(0,)) -> bool:
    return int(np.count_nonzero(schmidt_coefficients(psi, block) > ENTANGLED_TOL)) > 1


def proposition1_triple(psi: PureState, q: float, s: float, bipartition=(0,)) -> tuple[float, float, float]:
    """``(E_{q,s}, E_{q,1/s}, E_{1/q,1/s})`` of a pure state, for ``q >= s > 1``.

    On entangled states the triple is strictly increasing.
    """
    if not q >= s > 1:
        raise DomainError(f"need q >= s > 1, got q={q}, s={s}")
    block = _block(psi, bipartition)
    lam = schmidt_coefficients(psi, block) ** 2
    return (
        unified_entropy_from_eigs(lam, MeasureParams.qs(q, s)) if lam.size > 1 else 0.0,
        unified_entropy_from_eigs(lam, MeasureParams.qs(q, 1 / s)) if lam.size > 1 else 0.0,
        unified_entropy_from_eigs(lam, MeasureParams.rt(1 / q, 1 / s)) if lam.size > 1 else 0.0,
    )


def shrinking_in_s(t: float, s):
    """``(1 - t^s) / s``, strictly decreasing in ``s > 0`` for fixed ``0 < t < 1``."""
    s = np.asarray(s, dtype=float)
    return (1 - t**s) / s


def ordering_margin(rho, q: float, s: float) -> float:
    """``q([tr rho^(1/q)]^(1/s) - 1) - (1 - [tr rho^q]^(1/s))``, positive on mixed ``rho``."""
    w = spectrum_of(rho)
    w = w[w > 0]
    x_inv = np.sum(w ** (1 / q))
    x_q = np.sum(w**q)
    return float(q * (x_inv ** (1 / s) - 1) - (1 - x_q ** (1 / s)))
