import json

import pytest

from unient.entropy import MeasureParams
from unient.roof import RoofConfig
from unient.states import StateError, basis_state, bell_state, ghz_state, sample_ginibre_density, make_rng
from unient.verify import SUITES, CorpusSpec, SuiteError, coarsening_pairs, monogamy_scan, run_suite

QS21 = MeasureParams.qs(2, 1)
FAST = RoofConfig(restarts=2, max_iterations=200)

SMALL = {
    "concavity-lemma1": 20,
    "convexity-appA": 20,
    "prop1-ordering": 20,
    "lemma2": 200,
    "eq19-counterexample": 10,
    "appD-qs": 1,
    "appD-rt": 1,
    "coarsening": 1,
    "superadditivity": 10,
    "gem-bounds": 5,
    "fidelity-reduction": 20,
}


def test_registry_has_every_suite():
    assert set(SMALL) | {"roof-oracle", "roof-soundness", "monogamy-scan"} == set(SUITES)


@pytest.mark.parametrize("name", sorted(set(SMALL) - {"gem-bounds"}))
def test_small_corpora_pass(name):
    rep = run_suite(name, CorpusSpec(SMALL[name]), rng=(3, 0))
    assert rep.ok, [c for c in rep.cases if not c.passed][:3]
    assert rep.cases


def test_gem_bounds_split_by_party_count():
    rep = run_suite("gem-bounds", CorpusSpec(5), rng=(3, 0))
    fails = rep.meta["failures_by_config"]
    assert fails["n=3,d=2"] == fails["n=3,d=3"] == 0
    # four-party violations are expected; see the measure docs
    assert fails["n=4,d=2"] + fails["n=4,d=3"] > 0
    assert not rep.ok


def test_roof_suites_on_small_corpus():
    opts = {"roof": FAST}
    rep = run_suite("roof-soundness", CorpusSpec(4, opts), rng=(5, 1))
    assert rep.ok
    rep = run_suite("roof-oracle", CorpusSpec(4, {**opts, "params": (QS21,)}), rng=(5, 1))
    assert rep.ok
    assert rep.meta["below_certified_lower_bound"] == 0


def test_monogamy_suite_is_informational():
    rep = run_suite("monogamy-scan", CorpusSpec(2, {"roof": FAST}), rng=(5, 2))
    assert all(not c.hard for c in rep.cases)
    assert rep.ok
    assert rep.meta["certified_eq5"] <= 2


def test_deterministic_reports():
    a = run_suite("lemma2", CorpusSpec(50), rng=(11, 4)).to_dict()
    b = run_suite("lemma2", CorpusSpec(50), rng=(11, 4)).to_dict()
    a.pop("elapsed_s"), b.pop("elapsed_s")
    assert a == b
    c = run_suite("lemma2", CorpusSpec(50), rng=(11, 5)).to_dict()
    assert c["cases"] != a["cases"]


def test_report_json_shape():
    d = run_suite("appD-rt", rng=7).to_dict()
    json.dumps(d)
    assert d["rng"] == {"algorithm": "philox4x64-10", "seed": 7, "stream": 0}
    assert d["n_cases"] == 1 and d["failures"] == 0
    assert d["max_residual"] < 0


def test_hierarchy_qs_suite_single_case_positive():
    rep = run_suite("appD-qs", CorpusSpec(1, {"q": (3.0,)}))
    assert len(rep.cases) == 1
    assert rep.cases[0].residual > 0


def test_rt_counterexample_first_case_is_reference():
    rep = run_suite("eq19-counterexample", CorpusSpec(1))
    assert rep.cases[0].residual == pytest.approx(0.14774997091268468, abs=1e-12)


def test_zero_cases_is_an_error():
    with pytest.raises(SuiteError):
        run_suite("lemma2", CorpusSpec(0))


def test_unknown_suite():
    with pytest.raises(SuiteError):
        run_suite("no-such-suite")


def test_coarsening_pair_counts():
    a, b = coarsening_pairs(4)
    assert (len(a), len(b)) == (28, 31)
    a3, b3 = coarsening_pairs(3)
    assert [(str(g), str(h)) for g, h in a3] == [("A|B|C", "A|B"), ("A|B|C", "A|C"), ("A|B|C", "B|C")]
    assert len(b3) == 3


def test_monogamy_scan_ghz():
    rep = monogamy_scan(ghz_state(3), QS21, FAST)
    assert rep.e_a_bc == pytest.approx(0.5, abs=1e-12)
    assert rep.e_ab <= 1e-9 and rep.e_ac <= 1e-9
    assert rep.eq5_residual == pytest.approx(0.5, abs=1e-9)
    assert rep.exact_left


def test_monogamy_scan_bell_times_product():
    rep = monogamy_scan(bell_state().kron(basis_state([0])), QS21, FAST)
    assert rep.disentangling_gap == pytest.approx(0.0, abs=1e-9)
    assert rep.e_ac == pytest.approx(0.0, abs=1e-9)


def test_monogamy_scan_product():
    rep = monogamy_scan(basis_state([0, 0, 0]), QS21, FAST)
    assert max(abs(rep.e_a_bc), abs(rep.e_ab), abs(rep.e_ac), abs(rep.eq5_residual)) <= 1e-12


def test_monogamy_scan_mixed_and_wrong_parties():
    rho = sample_ginibre_density((2, 2, 2), 2, make_rng(1))
    rep = monogamy_scan(rho, QS21, FAST)
    assert not rep.exact_left
    with pytest.raises(StateError):
        monogamy_scan(bell_state(), QS21, FAST)
