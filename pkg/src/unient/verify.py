"""Seeded property suites with per-case residuals.

Each suite draws its corpus from a ``(seed, stream)`` generator, evaluates one
residual per case and marks it passed or failed. Inequality suites pass when
the residual is ``>= -tol``; counterexample suites need a strict margin.
Cases flagged ``hard=False`` are informational and never count as failures.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bipartite import (
    entanglement_pure,
    is_entangled,
    proposition1_triple,
    two_qubit_roof_bracket,
)
from .entropy import MeasureParams, schatten_norm, unified_entropy_from_eigs
from .multipartite import (
    Form,
    GlobalMeasureKind,
    fidelity_reduction_check,
    gem_lower_bounds,
    gem_pure,
    glmem,
    glmem_pure,
    hierarchy_difference,
    hierarchy_state_qs,
    hierarchy_state_rt,
    hierarchy_taylor_qs,
    hierarchy_taylor_rt,
    product_factor_terms,
    rt_subadditivity_excess,
    superadditivity_gap,
)
from .partitions import Partition, coarser_a, coarser_b, set_partitions
from .roof import RoofConfig, roof_entanglement, roof_gap_report
from .states import (
    RNG_ALGORITHM,
    DensityMatrix,
    PureState,
    StateError,
    eigenvalues,
    ghz_state,
    make_rng,
    partial_trace,
    sample_ginibre_density,
    sample_haar_pure,
)

ALPHA_GRID = tuple(0.25 * k for k in range(1, 17))


class SuiteError(ValueError):
    """Unknown suite or an empty corpus."""


@dataclass(frozen=True)
class CorpusSpec:
    """Corpus size and suite-specific options.

    ``cases=None`` selects the suite default: ``10**4`` for scalar
    inequalities and ``10**3`` for suites that call the roof optimiser.
    """

    cases: int | None = None
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Case:
    label: str
    residual: float
    passed: bool
    hard: bool = True


@dataclass
class SuiteReport:
    name: str
    rule: str
    cases: list[Case]
    seed: int
    stream: int
    elapsed: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def residuals(self) -> np.ndarray:
        return np.array([c.residual for c in self.cases])

    @property
    def failures(self) -> int:
        return sum(1 for c in self.cases if c.hard and not c.passed)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        r = self.residuals
        return {
            "suite": self.name,
            "rule": self.rule,
            "rng": {"algorithm": RNG_ALGORITHM, "seed": self.seed, "stream": self.stream},
            "n_cases": len(self.cases),
            "failures": self.failures,
            "min_residual": float(r.min()),
            "max_residual": float(r.max()),
            "elapsed_s": self.elapsed,
            "meta": self.meta,
            "cases": [
                {"label": c.label, "residual": c.residual, "passed": c.passed, "hard": c.hard} for c in self.cases
            ],
        }


SuiteFn = Callable[[int, dict, np.random.Generator], tuple[str, list[Case], dict]]
SUITES: dict[str, tuple[SuiteFn, int]] = {}


def _suite(name: str, default_cases: int):
    def deco(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = (fn, default_cases)
        return fn

    return deco


def _ge(label: str, r: float, tol: float, hard: bool = True) -> Case:
    return Case(label, float(r), bool(r >= -tol), hard)


def _gt(label: str, r: float, tol: float) -> Case:
    return Case(label, float(r), bool(r > tol))


def _trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.linalg.eigvalsh(a - b)).sum())


def _distinct_pair(d: int, rng, min_dist: float) -> tuple[DensityMatrix, DensityMatrix]:
    while True:
        r1 = sample_ginibre_density(d, None, rng)
        r2 = sample_ginibre_density(d, None, rng)
        if _trace_distance(r1.matrix, r2.matrix) >= min_dist:
            return r1, r2


@_suite("concavity-lemma1", 1000)
def _concavity(n, opt, rng):
    qs = opt.get("q", (1.5, 2.0, 3.0))
    params = [MeasureParams.qs(q, 1 / q) for q in qs] + [MeasureParams.rt(*rt) for rt in opt.get("rt", ())]
    tol = opt.get("tol", 1e-12)
    cases = []
    for i in range(n):
        d = (2, 3)[i % 2]
        r1, r2 = _distinct_pair(d, rng, opt.get("min_distance", 1e-3))
        w1, w2 = eigenvalues(r1), eigenvalues(r2)
        for lam in (0.25, 0.5, 0.75):
            wm = eigenvalues(lam * r1.matrix + (1 - lam) * r2.matrix)
            for p in params:
                gap = unified_entropy_from_eigs(wm, p) - lam * unified_entropy_from_eigs(w1, p)
                gap -= (1 - lam) * unified_entropy_from_eigs(w2, p)
                cases.append(_gt(f"{i}:d={d}:lam={lam}:{p}", gap, tol))
    return f"concavity gap > {tol}", cases, {}


@_suite("convexity-appA", 1000)
def _convexity(n, opt, rng):
    tol = opt.get("tol", 1e-12)
    cases = []
    for i in range(n):
        d = (2, 3)[i % 2]
        r1, r2 = _distinct_pair(d, rng, opt.get("min_distance", 1e-3))
        mid = 0.5 * (r1.matrix + r2.matrix)
        for q in opt.get("q", (1.5, 2.0, 3.0)):
            gap = 0.5 * (schatten_norm(r1, q) + schatten_norm(r2, q)) - schatten_norm(mid, q)
            cases.append(_gt(f"{i}:d={d}:q={q}", gap, tol))
    return f"midpoint convexity gap > {tol}", cases, {}


@_suite("prop1-ordering", 1000)
def _ordering_in_s(n, opt, rng):
    tol = opt.get("tol", 1e-12)
    pairs = opt.get("qs", ((2, 2), (3, 2), (2, 1.5)))
    cases, skipped = [], 0
    for i in range(n):
        d = (2, 3)[i % 2]
        psi = sample_haar_pure((d, d), rng)
        if not is_entangled(psi):
            skipped += 1
            continue
        for q, s in pairs:
            e1, e2, e3 = proposition1_triple(psi, q, s)
            cases.append(_gt(f"{i}:d={d}:q={q}:s={s}", min(e2 - e1, e3 - e2), tol))
    return f"min consecutive gap > {tol}", cases, {"skipped_unentangled": skipped}


def _power_sum(w: np.ndarray, x: float) -> float:
    w = w[w > 0]
    return float(np.sum(w**x))


@_suite("lemma2", 10000)
def _marginal_powers(n, opt, rng):
    tol = opt.get("tol", 1e-9)
    dims = opt.get("d", (2, 3))
    qs = opt.get("q", (1.5, 2.0, 3.0))
    cases = []
    for i in range(n):
        d = dims[i % len(dims)]
        rank = 1 + (i // len(dims)) % (d * d)
        rho = sample_ginibre_density((d, d), rank, rng)
        wab = eigenvalues(rho)
        wa, wb = eigenvalues(partial_trace(rho, [0])), eigenvalues(partial_trace(rho, [1]))
        for q in qs:
            for s in opt.get("s", (1 / q, 1.0, 2.0)):
                r = 1 + _power_sum(wab, q) ** s - _power_sum(wa, q) ** s - _power_sum(wb, q) ** s
                cases.append(_ge(f"{i}:d={d}:rank={rank}:q={q}:s={s:g}", r, tol))
    n_eq = opt.get("equality_cases", max(1, n // 100))
    for i in range(n_eq):
        d = dims[i % len(dims)]
        a = sample_haar_pure(d, rng).density()
        b = sample_ginibre_density(d, None, rng)
        rho = a.kron(b) if i % 2 == 0 else b.kron(a)
        wab = eigenvalues(rho)
        wa, wb = eigenvalues(partial_trace(rho, [0])), eigenvalues(partial_trace(rho, [1]))
        for q, s in itertools.product(qs, (1.0, 2.0)):
            r = 1 + _power_sum(wab, q) ** s - _power_sum(wa, q) ** s - _power_sum(wb, q) ** s
            cases.append(Case(f"eq{i}:d={d}:q={q}:s={s:g}", float(r), bool(abs(r) <= tol)))
    return f"residual >= -{tol}; |residual| <= {tol} when a marginal is pure", cases, {}


@_suite("eq19-counterexample", 100)
def _rt_counterexample(n, opt, rng):
    r, t = opt.get("r", 0.5), opt.get("t", 1.0)
    tol = opt.get("tol", 1e-6)
    sigmas = [np.array([0.7, 0.3])]
    for _ in range(n - 1):
        d = int(rng.integers(2, 4))
        w = rng.dirichlet(np.ones(d))
        sigmas.append(w)
    cases = []
    for i, w in enumerate(sigmas):
        sig = DensityMatrix(np.diag(w).astype(complex), (len(w),))
        rho = sig.kron(sig)
        x = float(np.sum(w**r) ** t)
        oracle = (x - 1) ** 2
        got = rt_subadditivity_excess(rho, r, t)
        ok = got > tol and abs(got - oracle) <= 1e-12 * max(1.0, oracle)
        cases.append(Case(f"{i}:spec={np.round(w, 6).tolist()}", got, bool(ok)))
    return f"excess > {tol}, matching (x-1)^2", cases, {"r": r, "t": t}


@_suite("appD-qs", 1)
def _hierarchy_qs(n, opt, rng):
    x = opt.get("x", 1e-3)
    cases = []
    for q in opt.get("q", (2.0, 3.0)):
        diff = hierarchy_difference(hierarchy_state_qs(x), q)
        pred = hierarchy_taylor_qs(q, x)
        cases.append(Case(f"q={q}:x={x}:taylor={pred:.6e}", diff, bool(diff > 0 and np.sign(pred) == np.sign(diff))))
    return "difference > 0, same sign as the Taylor predictor", cases, {}


@_suite("appD-rt", 1)
def _hierarchy_rt(n, opt, rng):
    cases = []
    for r in opt.get("r", (0.5,)):
        diff = hierarchy_difference(hierarchy_state_rt(r), r)
        pred = hierarchy_taylor_rt(r)
        cases.append(Case(f"r={r}:taylor={pred:.6e}", diff, bool(diff < 0 and np.sign(pred) == np.sign(diff))))
    return "difference < 0, same sign as the leading term", cases, {}


ALL_KINDS = (
    GlobalMeasureKind.of(Form.SUM_QS, 2, 1),
    GlobalMeasureKind.of(Form.SUM_RT, 0.5, 1),
    GlobalMeasureKind.of(Form.PROD_QS, 2, 1),
    GlobalMeasureKind.of(Form.PROD_RT, 0.5, 1),
)


def coarsening_pairs(n: int) -> tuple[list[tuple[Partition, Partition]], list[tuple[Partition, Partition]]]:
    """``(a_pairs, b_pairs)``: discard and merge steps from covering partitions, keeping two or more blocks."""
    covering = [Partition(b, n) for b in set_partitions(range(n)) if len(b) >= 2]
    a_pairs, b_pairs = [], []
    for g in covering:
        for r in range(2, g.k):
            for keep in itertools.combinations(g.blocks, r):
                a_pairs.append((g, Partition(keep, n)))
        for h in covering:
            if coarser_b(g, h):
                b_pairs.append((g, h))
    assert all(coarser_a(g, h) for g, h in a_pairs)
    return a_pairs, b_pairs


@_suite("coarsening", 1000)
def _coarsening(n, opt, rng):
    nq = opt.get("parties", 4)
    tol = opt.get("tol", 1e-9)
    kinds = opt.get("kinds", ALL_KINDS)
    # spectral ensemble: a valid decomposition, hence an upper bound on the right-hand side
    cfg = opt.get("roof", RoofConfig(restarts=1, max_iterations=0))
    a_pairs, b_pairs = coarsening_pairs(nq)
    cases = []
    for i in range(n):
        psi = sample_haar_pure((2,) * nq, rng)
        memo: dict = {}

        def value(g, kind):
            key = (g, kind)
            if key not in memo:
                memo[key] = glmem(psi, g, kind, cfg)[0]
            return memo[key]

        for kind in kinds:
            for g, h in a_pairs:
                cases.append(_ge(f"{i}:{kind}:{g}>a{h}", value(g, kind) - value(h, kind), tol))
            if kind.form is Form.SUM_QS:
                for g, h in b_pairs:
                    cases.append(_ge(f"{i}:{kind}:{g}>b{h}", value(g, kind) - value(h, kind), tol))
    meta = {"a_pairs": len(a_pairs), "b_pairs": len(b_pairs), "rhs": "convex-roof upper bound (certified pass)"}
    return f"E(gamma) - E(gamma') >= -{tol}", cases, meta


@_suite("superadditivity", 1000)
def _superadditivity(n, opt, rng):
    tol = opt.get("tol", 1e-10)
    kinds = opt.get("kinds", ALL_KINDS)
    cases = []
    for i in range(n):
        k1, k2 = (2, 2) if i % 2 == 0 else (2, 3)
        psi1 = sample_haar_pure((2,) * k1, rng)
        psi2 = sample_haar_pure((2,) * k2, rng)
        for kind in kinds:
            gap = superadditivity_gap(psi1, psi2, kind)
            if kind.form is Form.PROD_QS:
                cases.append(_ge(f"{i}:{kind}:subadditive", -gap, tol))
            else:
                cases.append(_ge(f"{i}:{kind}:superadditive", gap, tol))
            if kind.form.is_product:
                u1, u2 = product_factor_terms(psi1, psi2, kind)
                cases.append(_ge(f"{i}:{kind}:factor-product", (1 - u1) * (1 - u2), tol))
                p = kind.params
                whole = glmem_pure(psi1.kron(psi2), Partition.finest(k1 + k2), kind)
                ident = whole - (u1 * u2 - 1) / p.scale
                cases.append(Case(f"{i}:{kind}:identity", float(ident), bool(abs(ident) <= tol)))
    return f"signed gap >= -{tol}", cases, {}


@_suite("gem-bounds", 1000)
def _gem_bounds(n, opt, rng):
    tol = opt.get("tol", 1e-10)
    configs = opt.get("configs", ((3, 2), (3, 3), (4, 2), (4, 3)))
    params = opt.get("params", (MeasureParams.qs(2, 1), MeasureParams.qs(2, 2), MeasureParams.rt(0.5, 1)))
    cases = []
    per_config = {}
    for nq, d in configs:
        fails = 0
        for i in range(n):
            psi = sample_haar_pure((d,) * nq, rng)
            for p in params:
                gem = gem_pure(psi, p)
                b2, b3 = gem_lower_bounds(psi, p)
                for tag, b in (("P2", b2), ("P3", b3)):
                    c = _ge(f"n={nq}:d={d}:{i}:{p}:{tag}", gem - b, tol)
                    fails += not c.passed
                    cases.append(c)
        per_config[f"n={nq},d={d}"] = fails
    g = ghz_state(3)
    gem = gem_pure(g, MeasureParams.qs(2, 1))
    for tag, b in zip(("P2", "P3"), gem_lower_bounds(g, MeasureParams.qs(2, 1))):
        ok = abs(b - 0.5) <= tol and abs(gem - 0.5) <= tol
        cases.append(Case(f"GHZ3:QS(2,1):{tag}:tight", float(gem - b), bool(ok)))
    return f"gem - bound >= -{tol}; GHZ3 equality at 0.5", cases, {"failures_by_config": per_config}


@_suite("roof-oracle", 1000)
def _roof_oracle(n, opt, rng):
    lo, hi = opt.get("window", (-1e-9, 1e-3))
    cfg = opt.get("roof", RoofConfig())
    params = opt.get("params", (MeasureParams.qs(2, 1), MeasureParams.rt(0.5, 1)))
    states = [sample_ginibre_density((2, 2), 2 if i < (n + 1) // 2 else 3, rng) for i in range(n)]
    cases, unsound = [], 0
    for i, rho in enumerate(states):
        for p in params:
            rep = roof_gap_report(rho, p, cfg)
            unsound += not rep.sound
            cases.append(Case(f"{i}:rank={2 if i < (n + 1) // 2 else 3}:{p}", rep.gap, bool(lo <= rep.gap <= hi)))
    meta = {"window": [lo, hi], "below_certified_lower_bound": unsound}
    return f"estimate - closed form in [{lo}, {hi}]", cases, meta


@_suite("roof-soundness", 1000)
def _roof_soundness(n, opt, rng):
    """Estimate against the convex envelope of ``eps``, a certified lower bound on the roof."""
    cfg = opt.get("roof", RoofConfig())
    params = opt.get("params", (MeasureParams.qs(2, 1), MeasureParams.rt(0.5, 1)))
    cases = []
    for i in range(n):
        rho = sample_ginibre_density((2, 2), 2 + i % 2, rng)
        for p in params:
            est = roof_entanglement(rho, p, (0,), cfg).value
            lower, _ = two_qubit_roof_bracket(rho, p)
            cases.append(_ge(f"{i}:{p}", est - lower, 1e-9))
    return "estimate - convex envelope of eps >= -1e-9", cases, {}


@_suite("fidelity-reduction", 1000)
def _fidelity(n, opt, rng):
    tol = opt.get("tol", 1e-10)
    cases = []
    for i in range(n):
        lhs, rhs = fidelity_reduction_check(sample_haar_pure((2, 2, 2), rng))
        cases.append(Case(str(i), float(lhs - rhs), bool(abs(lhs - rhs) <= tol)))
    return f"|ProdQS(3,1) - (1 - F)/2| <= {tol}", cases, {}


@dataclass(frozen=True)
class MonogamyReport:
    """Monogamy data for a three-party state.

    ``eq5_residual = E(A|BC) - E(AB) - E(AC)``. Pair terms are convex-roof
    upper bounds, so a nonnegative residual on a pure input is certified.
    ``alpha`` is the smallest grid exponent for which the powered inequality
    holds, or ``None``.
    """

    e_a_bc: float
    e_ab: float
    e_ac: float
    eq5_residual: float
    disentangling_gap: float
    alpha: float | None
    exact_left: bool


def monogamy_scan(state: PureState | DensityMatrix, p: MeasureParams, cfg: RoofConfig | None = None) -> MonogamyReport:
    if state.n_parties != 3:
        raise StateError(f"monogamy scan needs three parties, got {state.n_parties}")
    cfg = cfg or RoofConfig(restarts=4)
    if isinstance(state, PureState):
        e_abc, exact = entanglement_pure(state, (0,), p), True
    else:
        e_abc, exact = roof_entanglement(state, p, (0,), cfg).value, False
    e_ab = roof_entanglement(partial_trace(state, [0, 1]), p, (0,), cfg).value
    e_ac = roof_entanglement(partial_trace(state, [0, 2]), p, (0,), cfg).value
    alpha = next((x for x in ALPHA_GRID if e_abc**x >= e_ab**x + e_ac**x - 1e-12), None)
    return MonogamyReport(e_abc, e_ab, e_ac, e_abc - e_ab - e_ac, abs(e_abc - e_ab), alpha, exact)


@_suite("monogamy-scan", 1000)
def _monogamy(n, opt, rng):
    p = opt.get("params", MeasureParams.qs(2, 1))
    cfg = opt.get("roof", RoofConfig(restarts=4))
    cases, certified, alphas = [], 0, []
    for i in range(n):
        rep = monogamy_scan(sample_haar_pure((2, 2, 2), rng), p, cfg)
        certified += rep.eq5_residual >= 0
        alphas.append(rep.alpha)
        cases.append(_ge(f"{i}:alpha={rep.alpha}", rep.eq5_residual, 0.0, hard=False))
    found = [a for a in alphas if a is not None]
    meta = {
        "params": str(p),
        "certified_eq5": certified,
        "alpha_max": max(found) if found else None,
        "alpha_missing": len(alphas) - len(found),
        "note": "pair terms are roof upper bounds; cases are data, not assertions",
    }
    return "informational", cases, meta


def run_suite(name: str, corpus: CorpusSpec | None = None, rng=(0, 0)) -> SuiteReport:
    """Run one suite on a seeded corpus.

    Args:
        name: a key of :data:`SUITES`.
        corpus: size and options; ``None`` uses the defaults.
        rng: ``(seed, stream)`` pair or an int seed.

    Raises:
        SuiteError: unknown name or a corpus that produced no cases.
    """
    if name not in SUITES:
        raise SuiteError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    corpus = corpus or CorpusSpec()
    seed, stream = rng if isinstance(rng, tuple) else (int(rng), 0)
    fn, default = SUITES[name]
    n = default if corpus.cases is None else int(corpus.cases)
    if n < 1:
        raise SuiteError(f"suite {name!r} needs at least one case, got {n}")
    t0 = time.perf_counter()
    rule, cases, meta = fn(n, dict(corpus.options), make_rng(seed, stream))
    if not cases:
        raise SuiteError(f"suite {name!r} produced no cases")
    bad = [c for c in cases if not math.isfinite(c.residual)]
    if bad:
        cases = [c if math.isfinite(c.residual) else Case(c.label, c.residual, False, c.hard) for c in cases]
    return SuiteReport(name, rule, cases, seed, stream, time.perf_counter() - t0, meta)
