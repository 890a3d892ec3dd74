"""Global and genuine multipartite measures built on the unified entropy.

Two global constructions are provided for a partition ``X_1|...|X_m`` of a pure
state. The *sum* forms average the reduced function over the blocks,
``E = (1/2) sum_j S(rho_{X_j})``. The *product* forms evaluate
``P = <psi| rho_{X_1}^k (x) ... (x) rho_{X_m}^k |psi>`` with ``k = (a - 1)/2``
and map it through the same scalar function as the entropy,
``[P^b - 1] / ((1 - a) b)``. Mixed states go through the convex roof.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bipartite import entanglement_pure
from .entropy import DomainError, Family, MeasureParams
from .partitions import Partition, PartitionError, bipartitions, coarser, xi_set
from .roof import (
    BlockEntropyFunctional,
    MinBlockFunctional,
    ProductFormFunctional,
    RoofConfig,
    RoofResult,
    convex_roof_estimate,
)
from .states import (
    DensityMatrix,
    PureState,
    StateError,
    matrix_power,
    partial_trace,
    reduced_matrix,
    trace_power,
)

RANK_TOL = 1e-12


class Form(str, enum.Enum):
    SUM_QS = "SumQS"
    SUM_RT = "SumRT"
    PROD_QS = "ProdQS"
    PROD_RT = "ProdRT"

    @property
    def family(self) -> Family:
        return Family.QS if self.value.endswith("QS") else Family.RT

    @property
    def is_product(self) -> bool:
        return self.value.startswith("Prod")


@dataclass(frozen=True)
class GlobalMeasureKind:
    """A global measure form together with parameters of the matching family."""

    form: Form
    params: MeasureParams

    def __post_init__(self):
        form = Form(self.form)
        object.__setattr__(self, "form", form)
        if self.params.family is not form.family:
            raise DomainError(f"{form.value} needs {form.family.value} parameters, got {self.params}")

    @classmethod
    def of(cls, form: Form | str, a: float, b: float) -> "GlobalMeasureKind":
        form = Form(form)
        return cls(form, MeasureParams(form.family, a, b))

    def __str__(self):
        return f"{self.form.value}({self.params.a:g},{self.params.b:g})"


def _as_partition(gamma, n: int) -> Partition:
    if isinstance(gamma, str):
        gamma = Partition.parse(gamma, n)
    if not isinstance(gamma, Partition):
        gamma = Partition(tuple(tuple(b) for b in gamma), n)
    if gamma.universe != n:
        raise PartitionError(f"partition {gamma} is over {gamma.universe} parties, state has {n}")
    return gamma


def _covering(psi: PureState, gamma) -> Partition:
    g = _as_partition(gamma, psi.n_parties)
    if not g.covers():
        raise PartitionError(f"{g} does not cover all {psi.n_parties} parties of a pure state")
    if g.k < 2:
        raise PartitionError("a global measure needs at least two blocks")
    return g


def _block_tensor(psi: PureState, blocks) -> tuple[np.ndarray, list[int]]:
    order = [i for b in blocks for i in b]
    sizes = [int(np.prod([psi.dims[i] for i in b])) for b in blocks]
    return np.transpose(psi.tensor(), order).reshape(sizes), sizes


def block_expectation(psi: PureState, gamma, exponent: float) -> float:
    """``<psi| (x)_j rho_{X_j}^exponent |psi>`` with support pseudo-powers for negative exponents."""
    g = _covering(psi, gamma)
    t, _ = _block_tensor(psi, g.blocks)
    out = t
    for j, b in enumerate(g.blocks):
        rho = reduced_matrix(psi, b)
        op = rho if exponent == 1 else matrix_power(rho, exponent)
        out = np.moveaxis(np.tensordot(op, out, axes=([1], [j])), 0, j)
    return float(np.vdot(t, out).real)


def _all_blocks_pure(psi: PureState, g: Partition) -> bool:
    for b in g.blocks:
        t, _ = _block_tensor(psi, [b, tuple(i for i in range(psi.n_parties) if i not in b)])
        s = np.linalg.svd(t, compute_uv=False)
        if np.count_nonzero(s**2 > RANK_TOL) > 1:
            return False
    return True


def glmem_pure(psi: PureState, gamma, kind: GlobalMeasureKind) -> float:
    """Global measure of a pure state across the blocks of ``gamma``.

    Args:
        psi: pure state on ``n`` parties.
        gamma: partition covering all parties (``Partition``, text like
            ``"AB|C"``, or a sequence of index blocks). Its blocks are treated
            as the parties of the measure.
        kind: form and parameters.

    Returns:
        float: the measure, zero on states that are product across ``gamma``.
    """
    g = _covering(psi, gamma)
    p = kind.params
    if not kind.form.is_product:
        return 0.5 * sum(entanglement_pure(psi, b, p) for b in g.blocks)
    if _all_blocks_pure(psi, g):
        return 0.0
    val = float(p.from_trace_power(block_expectation(psi, g, (p.a - 1) / 2)))
    return max(val, 0.0) if val > -1e-12 else val


def fidelity_reduction_check(psi: PureState) -> tuple[float, float]:
    """``(ProdQS(3,1), (1 - <psi| (x)_j rho_j |psi>) / 2)`` on the single-party partition."""
    g = Partition.finest(psi.n_parties)
    lhs = glmem_pure(psi, g, GlobalMeasureKind.of(Form.PROD_QS, 3, 1))
    # independent path: dense product of the single-party marginals
    op = np.ones((1, 1))
    for j in range(psi.n_parties):
        op = np.kron(op, reduced_matrix(psi, (j,)))
    rhs = (1.0 - np.vdot(psi.amplitudes, op @ psi.amplitudes).real) / 2
    return lhs, float(rhs)


# --- genuine measures -----------------------------------------------------


def gem_argmin(psi: PureState, p: MeasureParams) -> tuple[float, Partition]:
    """Minimum reduced-function value over all bipartitions and the first minimiser.

    Bipartitions are scanned in canonical order; a later bipartition only
    replaces the incumbent if it is smaller by more than ``1e-12``.
    """
    n = psi.n_parties
    if n < 2:
        raise StateError("genuine measures need at least two parties")
    best = None
    for g in bipartitions(n):
        v = entanglement_pure(psi, g.blocks[0], p)
        if best is None or v < best[0] - 1e-12:
            best = (v, g)
    return best


def gem_pure(psi: PureState, p: MeasureParams) -> float:
    """Genuine multipartite measure: ``min_{X|Xbar} S(rho_X)``; zero iff biseparable."""
    return gem_argmin(psi, p)[0]


def pure_concurrence(psi: PureState, block=(0,)) -> float:
    """``sqrt(1 - tr rho_X^2)`` across ``block | rest`` (no factor of 2)."""
    rho = reduced_matrix(psi, block)
    return float(np.sqrt(max(1.0 - trace_power(rho, 2), 0.0)))


def c_gme(psi: PureState) -> float:
    """Genuine multipartite concurrence ``min sqrt(2 (1 - tr rho_X^2))`` over bipartitions."""
    if psi.n_parties < 2:
        raise StateError("genuine measures need at least two parties")
    vals = [max(1.0 - trace_power(reduced_matrix(psi, g.blocks[0]), 2), 0.0) for g in bipartitions(psi.n_parties)]
    return float(np.sqrt(2 * min(vals)))


def extremal_constants(d: int, p: MeasureParams) -> float:
    """``c_d = d^{-(q-1)s}`` for QS (minimum of ``(tr rho^q)^s``), ``l_d = d^{(1-r)t}`` for RT (maximum)."""
    if int(d) < 2:
        raise DomainError(f"local dimension must be at least 2, got {d}")
    return float(int(d) ** ((1 - p.a) * p.b))


def _sum_kind(p: MeasureParams) -> GlobalMeasureKind:
    return GlobalMeasureKind(Form.SUM_QS if p.family is Family.QS else Form.SUM_RT, p)


def gem_lower_bounds(psi: PureState, p: MeasureParams) -> tuple[float, float]:
    """The two published lower bounds on :func:`gem_pure` for equal local dimension ``d``.

    Returns:
        ``(sum_{X|Xbar} E + (2^{n-1} - 2) k, 2 E^{(n)} + (n - 1) k)`` where
        ``E^{(n)}`` is the single-party sum form and
        ``k = (extremal_constant - 1) / ((a - 1) b)`` is negative.

    Both are proven lower bounds for three parties. For four or more parties
    they can exceed the genuine measure (for instance on a product of two Bell
    pairs), so callers should treat them as data, not guarantees.
    """
    n = psi.n_parties
    if len(set(psi.dims)) != 1:
        raise StateError(f"bounds need equal local dimensions, got {psi.dims}")
    d = psi.dims[0]
    k = (extremal_constants(d, p) - 1) / ((p.a - 1) * p.b)
    bip = sum(entanglement_pure(psi, g.blocks[0], p) for g in bipartitions(n))
    bipartite_bound = bip + (2 ** (n - 1) - 2) * k
    sum_form_bound = 2 * glmem_pure(psi, Partition.finest(n), _sum_kind(p)) + (n - 1) * k
    return float(bipartite_bound), float(sum_form_bound)


# --- mixed states via the convex roof --------------------------------------


def restrict(state: PureState | DensityMatrix, gamma) -> tuple[PureState | DensityMatrix, Partition]:
    """State on the parties of ``gamma`` and ``gamma`` relabelled onto them."""
    g = _as_partition(gamma, state.n_parties)
    if g.covers():
        return state, g
    parties = sorted(g.parties)
    local = {i: j for j, i in enumerate(parties)}
    g_local = Partition(tuple(tuple(local[i] for i in b) for b in g.blocks), len(parties))
    return partial_trace(state, parties), g_local


def glmem_roof(state: PureState | DensityMatrix, gamma, kind: GlobalMeasureKind, cfg: RoofConfig | None = None) -> RoofResult:
    """Convex-roof upper bound of a global measure; ``gamma`` may cover only a subsystem."""
    sub, g = restrict(state, gamma)
    if g.k < 2:
        raise PartitionError("a global measure needs at least two blocks")
    if isinstance(sub, PureState):
        sub = sub.density()
    if kind.form.is_product:
        fn = ProductFormFunctional(sub.dims, g.blocks, kind.params)
    else:
        fn = BlockEntropyFunctional(sub.dims, g.blocks, kind.params, weight=0.5)
    return convex_roof_estimate(sub, fn, cfg, pure_value=lambda s: glmem_pure(s, g, kind))


def glmem_mixed(state: PureState | DensityMatrix, gamma, kind: GlobalMeasureKind, cfg: RoofConfig | None = None) -> float:
    return glmem_roof(state, gamma, kind, cfg).value


def glmem(state: PureState | DensityMatrix, gamma, kind: GlobalMeasureKind, cfg: RoofConfig | None = None) -> tuple[float, bool]:
    """Measure value and whether it is exact (pure state, covering partition) or a roof upper bound."""
    if isinstance(state, PureState):
        g = _as_partition(gamma, state.n_parties)
        if g.covers():
            return glmem_pure(state, g, kind), True
    return glmem_mixed(state, gamma, kind, cfg), False


def gem_mixed(state: PureState | DensityMatrix, p: MeasureParams, cfg: RoofConfig | None = None) -> float:
    """Convex-roof upper bound on the genuine measure; it cannot certify genuine entanglement."""
    if isinstance(state, PureState):
        return gem_pure(state, p)
    fn = MinBlockFunctional(state.dims, [g.blocks[0] for g in bipartitions(state.n_parties)], p)
    return convex_roof_estimate(state, fn, cfg, pure_value=lambda s: gem_pure(s, p)).value


# --- scalar inequalities and counterexamples ---------------------------------


def _marginal_powers(rho_ab: DensityMatrix, x: float, y: float) -> tuple[float, float, float]:
    if rho_ab.n_parties != 2:
        raise StateError(f"expected a two-party state, got dims {rho_ab.dims}")
    tab = trace_power(rho_ab, x) ** y
    ta = trace_power(partial_trace(rho_ab, [0]), x) ** y
    tb = trace_power(partial_trace(rho_ab, [1]), x) ** y
    return tab, ta, tb


def marginal_power_residual(rho_ab: DensityMatrix, q: float, s: float) -> float:
    """``1 + (tr rho_AB^q)^s - (tr rho_A^q)^s - (tr rho_B^q)^s``; nonnegative, zero iff a marginal is pure."""
    MeasureParams.qs(q, s)
    tab, ta, tb = _marginal_powers(rho_ab, q, s)
    return float(1 + tab - ta - tb)


def rt_subadditivity_excess(rho_ab: DensityMatrix, r: float, t: float) -> float:
    """``1 + (tr rho_AB^r)^t - (tr rho_A^r)^t - (tr rho_B^r)^t``; positive means ``h_{r,t}`` fails subadditivity."""
    MeasureParams.rt(r, t)
    tab, ta, tb = _marginal_powers(rho_ab, r, t)
    return float(1 + tab - ta - tb)


def hierarchy_difference(rho_bc: DensityMatrix, a: float) -> float:
    """``tr[rho_BC^{(a+1)/2} (rho_B^{(a-1)/2} (x) rho_C^{(a-1)/2})] - tr rho_BC^a``.

    Positive values for ``a = q > 1`` and negative values for ``a = r < 1``
    witness that the product forms break the hierarchy condition.
    """
    if rho_bc.n_parties != 2:
        raise StateError(f"expected a two-party state, got dims {rho_bc.dims}")
    k = (a - 1) / 2
    rb = partial_trace(rho_bc, [0])
    rc = partial_trace(rho_bc, [1])
    lhs = np.trace(matrix_power(rho_bc, (a + 1) / 2) @ np.kron(matrix_power(rb, k), matrix_power(rc, k))).real
    return float(lhs - trace_power(rho_bc, a))


def hierarchy_state_qs(x: float) -> DensityMatrix:
    """``diag(1 - 2x, x, x, 0)`` on two qubits."""
    if not 0 < x < 0.5:
        raise DomainError(f"need 0 < x < 1/2, got {x}")
    return DensityMatrix(np.diag([1 - 2 * x, x, x, 0.0]).astype(complex), (2, 2))


def hierarchy_state_rt(r: float) -> DensityMatrix:
    """``diag(0.04 - x, 0.16 + x, 0.16 + x, 0.64 - x)`` with ``x = 0.002 (r - 1)^2``."""
    x = 0.002 * (r - 1) ** 2
    return DensityMatrix(np.diag([0.04 - x, 0.16 + x, 0.16 + x, 0.64 - x]).astype(complex), (2, 2))


def hierarchy_taylor_qs(q: float, x: float) -> float:
    """Leading small-``x`` behaviour ``k x^2 (1 - 4 k x - 2 x^{2k})`` of the QS difference, ``k = (q-1)/2``."""
    k = (q - 1) / 2
    return k * x**2 * (1 - 4 * k * x - 2 * x ** (2 * k))


def hierarchy_taylor_rt(r: float) -> float:
    """Leading term ``k (0.2^{2k} - 0.8^{2k})^2 x`` of the RT difference, ``k = (r-1)/2``."""
    k = (r - 1) / 2
    x = 0.002 * (r - 1) ** 2
    return k * (0.2 ** (2 * k) - 0.8 ** (2 * k)) ** 2 * x


# --- superadditivity -------------------------------------------------------


def superadditivity_gap(psi1: PureState, psi2: PureState, kind: GlobalMeasureKind) -> float:
    """``E^{(n)}(psi1 (x) psi2) - E^{(k)}(psi1) - E^{(n-k)}(psi2)`` on single-party partitions.

    Nonnegative for the two sum forms and ProdRT, nonpositive for ProdQS.
    """
    def value(psi):
        if psi.n_parties < 2:
            return 0.0
        return glmem_pure(psi, Partition.finest(psi.n_parties), kind)

    return value(psi1.kron(psi2)) - value(psi1) - value(psi2)


def product_factor_terms(psi1: PureState, psi2: PureState, kind: GlobalMeasureKind) -> tuple[float, float]:
    """Factor terms ``(u1, u2)`` with ``u = <psi| (x)_j rho_j^{(a-1)/2} |psi>^b`` of each factor.

    The product form of ``psi1 (x) psi2`` then has ``u = u1 u2``; the sign of
    ``(1 - u1)(1 - u2)`` decides super- versus subadditivity.
    """
    if not kind.form.is_product:
        raise DomainError("factor terms exist only for the product forms")
    p = kind.params
    out = []
    for psi in (psi1, psi2):
        if psi.n_parties < 2:
            out.append(1.0)
        else:
            out.append(block_expectation(psi, Partition.finest(psi.n_parties), (p.a - 1) / 2) ** p.b)
    return out[0], out[1]


# --- complete monogamy scan -----------------------------------------------


@dataclass(frozen=True)
class MonogamyScan:
    """Data for one coarsening step ``gamma -> gamma'``.

    ``equality_residual = E(gamma) - E(gamma')``; when it vanishes, complete
    monogamy predicts zero measure on every member of ``xi``. ``xi_values``
    are convex-roof upper bounds when the member covers only a subsystem.
    """

    gamma: Partition
    gamma_prime: Partition
    equality_residual: float
    xi: tuple[Partition, ...]
    xi_values: tuple[float, ...]

    @property
    def xi_max(self) -> float:
        return max(self.xi_values, default=0.0)


def complete_monogamy_scan(
    state: PureState | DensityMatrix, gamma, gamma_prime, kind: GlobalMeasureKind, cfg: RoofConfig | None = None
) -> MonogamyScan:
    n = state.n_parties
    g, h = _as_partition(gamma, n), _as_partition(gamma_prime, n)
    if not coarser(g, h):
        raise PartitionError(f"{h} is not coarser than {g}")
    xi = tuple(xi_set(g, h))
    e_g, _ = glmem(state, g, kind, cfg)
    e_h, _ = glmem(state, h, kind, cfg)
    vals = tuple(glmem(state, x, kind, cfg)[0] for x in xi)
    return MonogamyScan(g, h, e_g - e_h, xi, vals)


def local_unitary(psi: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Apply one unitary per party."""
    t = psi.tensor()
    for j, u in enumerate(unitaries):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [j])), 0, j)
    return PureState(t.reshape(-1), psi.dims)
