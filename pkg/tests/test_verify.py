import json

import pytest

from diophfp import ec_fibers, verify
from diophfp.verify import (
    CheckResult,
    Failure,
    SUITES,
    VerifyConfig,
    json_safe,
    report_json,
    run_suites,
    suite_all,
    suite_forms,
    suite_fibers,
    suite_tuples,
)


def by_name(results):
    return {r.name: r for r in results}


def test_status_follows_failures():
    r = CheckResult("x", (3, 3))
    assert r.status == "pass"
    r.failures.append(Failure(3, 1, 2))
    assert r.status == "fail"


def test_capped_config():
    cfg = VerifyConfig.capped(100, jobs=3)
    assert cfg.pmax_pairs == cfg.pmax_quads == cfg.pmax_fibers == 100
    assert cfg.w_brute_max == 61 and cfg.jobs == 3
    assert VerifyConfig.capped(None) == VerifyConfig()


def test_minimal_runs_pass():
    assert suite_all(5).passed
    res = by_name(suite_tuples(VerifyConfig.capped(3)))
    assert res["pair_count_formula"].p_range == (3, 3)
    assert all(r.status == "pass" for r in res.values())


def test_p11_quadruple_check_included():
    res = by_name(suite_tuples(VerifyConfig.capped(11)))
    quad = res["quadruple_count_modular_formula"]
    assert quad.p_range == (3, 11) and quad.status == "pass"


def test_default_forms_suite():
    res = suite_forms(VerifyConfig())
    assert len(res) >= 4
    assert all(r.status == "pass" for r in res)


@pytest.mark.slow
def test_default_configuration_passes():
    report = suite_all(None)
    assert report.passed, [r.name for r in report.results if r.status != "pass"]


def test_report_deterministic_across_workers():
    a = suite_all(61, workers=1).to_dict()
    b = suite_all(61, workers=3).to_dict()
    a.pop("wall_time"), b.pop("wall_time")
    a["config"].pop("jobs"), b["config"].pop("jobs")
    assert a == b


def test_json_round_trip():
    report = suite_all(13)
    doc = json.loads(report_json(report))
    assert json.loads(json.dumps(doc)) == doc
    assert set(doc) == {"version", "config", "results", "wall_time"}
    assert {"pmax", "suite", "jobs"} <= set(doc["config"])
    for r in doc["results"]:
        assert set(r) == {"name", "p_range", "status", "failures"}
        assert len(r["p_range"]) == 2


def test_json_safe_large_integers():
    assert json_safe({"a": 2**53 + 1, "b": -(2**60), "c": 12, "d": (1, 2)}) == {
        "a": str(2**53 + 1), "b": str(-(2**60)), "c": 12, "d": [1, 2],
    }
    assert json_safe(frozenset({3, 1})) == [1, 3]


def test_wrong_cm_sign_is_pinpointed(monkeypatch):
    real = verify.cm_coeff

    def flipped(form, p):
        v = real(form, p)
        return -v if form == "f1" else v

    monkeypatch.setattr(verify, "cm_coeff", flipped)
    res = by_name(suite_forms(VerifyConfig.capped(50)))
    bad = res["cm_closed_forms_vs_eta"]
    assert bad.status == "fail"
    assert [f.p for f in bad.failures] == [5, 13, 17, 29, 37, 41]
    assert bad.failures[0].context == {"form": "f1"}
    assert (bad.failures[0].expected, bad.failures[0].actual) == (-2, 2)


def test_wrong_w_polynomial_is_caught(monkeypatch):
    monkeypatch.setitem(ec_fibers.W_CASES, "half-nonsq-cyc", lambda P: (P - 8) * (P * P - 28 * P + 288) + 1536)
    res = by_name(suite_fibers(VerifyConfig.capped(31)))
    assert res["fiber_route_quadruple_count"].status == "fail"
    assert res["per_fiber_w_vs_buckets"].status == "fail"


def test_unclassified_pattern_falls_back_and_reports(monkeypatch):
    monkeypatch.delitem(ec_fibers.W_CASES, "half-sq-full-p3")
    res = by_name(suite_fibers(VerifyConfig.capped(23)))
    dispatch = res["fiber_case_dispatch"]
    assert dispatch.status == "fail"
    f = dispatch.failures[0]
    assert f.actual == "unclassified" and {"t", "P", "full2", "halvable"} <= set(f.context)
    # W(t) came from brute force, so the totals still agree
    assert res["fiber_route_quadruple_count"].status == "pass"


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites(VerifyConfig(), ["bogus"])


# Every identity the library claims to reproduce, with the check(s) that
# exercise it. A claim without a live check fails this test.
CLAIMED = {
    "pair and triple counts": ["pair_count_formula", "triple_count_formula"],
    "quadruple count from modular forms": ["quadruple_count_modular_formula"],
    "quadratic character sum": ["quadratic_character_sum"],
    "existence above the explicit bound": ["greedy_existence_construction", "extension_count_lower_bound"],
    "rational seed quadruples": ["seed_quadruple_reduction"],
    "heuristic density": ["asymptotic_density"],
    "eta products and CM coefficients": ["cm_closed_forms_vs_eta", "cm_vanishing_classes", "leading_coefficient_one"],
    "Hecke structure": ["hecke_prime_square_recursion", "hecke_multiplicativity", "deligne_bounds"],
    "weight-3 trace": ["weight3_hecke_trace", "cover_trace_X(2,8)", "cover_trace_X1(8)", "cover_trace_X(2,4)"],
    "conductor 32 curve": ["conductor32_point_count"],
    "quadruple/curve correspondence": ["curve_correspondence", "admissible_triples_from_quadruples"],
    "per-fiber weights": ["per_fiber_w_vs_buckets", "fiber_case_dispatch", "aggregate_w_identity"],
    "fiber route total": ["fiber_route_quadruple_count"],
    "product-one fiber": ["singular_fiber_w1"],
    "power sums of P(t)": ["fiber_point_power_sums"],
    "T-set counts and sums": ["t1_count_and_sums", "t2_count_and_sum", "t3_count_and_sum", "t5_t4_counts"],
    "T-set constructions": ["tset_parametric_vs_intrinsic", "tset_containments", "t1_involution"],
    "p = 3 mod 4 collapses": ["t2_equals_t5_p3", "t0_half_of_t1_p3", "no_full_4_torsion_p3"],
    "modular curve point counts": ["cusp_cover_degrees"],
}


def test_every_claim_has_a_check():
    names = {r.name for r in suite_all(199).results}
    missing = {k: [n for n in v if n not in names] for k, v in CLAIMED.items()}
    assert {k: v for k, v in missing.items() if v} == {}
    assert set(SUITES) == {"tuples", "forms", "fibers", "tsets"}
