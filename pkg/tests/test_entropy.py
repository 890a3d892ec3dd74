import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unient.entropy import (
    DomainError,
    Family,
    LimitKind,
    MeasureParams,
    classical_limit_entropy,
    max_reduced_function,
    reduced_function_h,
    renyi_entropy,
    schatten_norm,
    tsallis_entropy,
    unified_entropy,
    von_neumann_entropy,
)
from unient.states import (
    DensityMatrix,
    bell_state,
    make_rng,
    maximally_mixed,
    sample_ginibre_density,
    sample_haar_unitary,
)

seeds = st.integers(min_value=0, max_value=2**32)
QS_PARAMS = [MeasureParams.qs(2, 1), MeasureParams.qs(2, 0.5), MeasureParams.qs(3, 2), MeasureParams.qs(1.5, 1 / 1.5)]
RT_PARAMS = [MeasureParams.rt(0.5, 1), MeasureParams.rt(0.5, 0.5), MeasureParams.rt(0.3, 0.8)]


@pytest.mark.parametrize(
    "family,a,b",
    [("QS", 1.0, 2.0), ("QS", 2.0, 0.4), ("RT", 1.0, 0.5), ("RT", 0.5, 1.2), ("RT", 0.5, 0.0), ("QS", float("nan"), 1)],
)
def test_params_domain_rejected(family, a, b):
    with pytest.raises(DomainError):
        MeasureParams(family, a, b)


def test_params_boundary_accepted():
    assert MeasureParams.qs(2, 0.5).family is Family.QS
    assert MeasureParams.rt(0.5, 1).scale == 0.5
    assert str(MeasureParams.qs(2, 0.5)) == "QS(2,0.5)"


@pytest.mark.parametrize("p", QS_PARAMS + RT_PARAMS)
def test_pure_state_zero(p):
    assert unified_entropy(bell_state().density(), p) == 0.0


def test_unified_entropy_examples():
    assert unified_entropy(maximally_mixed(2), MeasureParams.qs(2, 1)) == pytest.approx(0.5, abs=1e-14)
    assert unified_entropy(maximally_mixed(2), MeasureParams.qs(2, 0.5)) == pytest.approx(2 - np.sqrt(2), abs=1e-14)
    assert reduced_function_h(maximally_mixed(3), MeasureParams.rt(0.5, 1)) == pytest.approx(1.4641016151377546, abs=1e-13)
    assert reduced_function_h(maximally_mixed(2), MeasureParams.rt(0.5, 0.5)) == pytest.approx(0.7568284600108843, abs=1e-13)


def test_unified_entropy_frozen_oracles():
    # 40-digit independent evaluations
    w = np.array([0.7, 0.2, 0.1])
    assert unified_entropy(w, MeasureParams.qs(3, 0.5)) == pytest.approx(0.40670412103234696, abs=1e-14)
    assert unified_entropy(w, MeasureParams.rt(0.5, 0.5)) == pytest.approx(1.0598045623140369, abs=1e-14)


@pytest.mark.parametrize("p", QS_PARAMS + RT_PARAMS)
def test_max_reduced_function_at_identity(p):
    for d in (2, 3, 4):
        assert unified_entropy(maximally_mixed(d), p) == pytest.approx(max_reduced_function(d, p), abs=1e-12)


@given(seeds, st.sampled_from(QS_PARAMS + RT_PARAMS))
def test_maximal_mixing_dominates(seed, p):
    rho = sample_ginibre_density(3, None, make_rng(seed))
    assert unified_entropy(rho, p) <= max_reduced_function(3, p) + 1e-12
    assert unified_entropy(rho, p) > 0


@given(seeds, st.sampled_from(QS_PARAMS + RT_PARAMS))
def test_unitary_invariance(seed, p):
    rng = make_rng(seed)
    rho = sample_ginibre_density(3, None, rng)
    u = sample_haar_unitary(3, rng)
    rot = DensityMatrix(u @ rho.matrix @ u.conj().T, (3,))
    assert abs(unified_entropy(rot, p) - unified_entropy(rho, p)) < 1e-10


@given(seeds, st.sampled_from(QS_PARAMS + RT_PARAMS), st.sampled_from([0.25, 0.5, 0.75]))
def test_strict_concavity(seed, p, lam):
    rng = make_rng(seed)
    r1, r2 = sample_ginibre_density(3, None, rng), sample_ginibre_density(3, None, rng)
    mid = DensityMatrix(lam * r1.matrix + (1 - lam) * r2.matrix, (3,))
    gap = unified_entropy(mid, p) - lam * unified_entropy(r1, p) - (1 - lam) * unified_entropy(r2, p)
    assert gap > 1e-12


@given(seeds, st.sampled_from([1.5, 2.0, 3.0]))
def test_schatten_strict_convexity(seed, q):
    rng = make_rng(seed)
    r1, r2 = sample_ginibre_density(2, None, rng), sample_ginibre_density(2, None, rng)
    mid = 0.5 * (r1.matrix + r2.matrix)
    assert 0.5 * (schatten_norm(r1, q) + schatten_norm(r2, q)) - schatten_norm(mid, q) > 1e-12


def test_classical_limits():
    assert von_neumann_entropy(maximally_mixed(2)) == pytest.approx(np.log(2))
    assert renyi_entropy(maximally_mixed(2), 2) == pytest.approx(np.log(2))
    assert classical_limit_entropy(maximally_mixed(2), LimitKind.VON_NEUMANN) == pytest.approx(np.log(2))
    assert von_neumann_entropy(bell_state().density()) == 0.0
    with pytest.raises(DomainError):
        tsallis_entropy(maximally_mixed(2), 1.0)
    with pytest.raises(DomainError):
        renyi_entropy(maximally_mixed(2), -1)


@given(seeds)
def test_tsallis_is_unified_with_unit_b(seed):
    rho = sample_ginibre_density(3, None, make_rng(seed))
    assert tsallis_entropy(rho, 2) == pytest.approx(unified_entropy(rho, MeasureParams.qs(2, 1)), abs=1e-12)
    assert tsallis_entropy(rho, 0.5) == pytest.approx(unified_entropy(rho, MeasureParams.rt(0.5, 1)), abs=1e-12)


@given(seeds)
def test_renyi_is_small_b_limit(seed):
    # the unified entropy approaches Renyi as b -> 0 (Renyi needs no parameter continuation itself)
    rho = sample_ginibre_density(3, None, make_rng(seed))
    near = unified_entropy(rho, MeasureParams.rt(0.5, 1e-7))
    assert near == pytest.approx(renyi_entropy(rho, 0.5), abs=1e-6)
