import json

from corestar.presets import parse_config, build_preset, run_preset, auto_cutoff
from corestar.suites import (SuiteReport, cochain_suite, homotopy_suite,
                             assoc_suite, reference_suite,
                             residual_probe_triples)

SMASH = {"preset": "smash", "dim": 2, "pi": [["0", "1"], ["-1", "0"]],
         "group_generators": [[["-1", "0"], ["0", "-1"]]], "c": {"0": "1/3"}}


def smash_ctx(cutoff=12):
    return build_preset(parse_config(SMASH)).make_context(cutoff)


def test_cochain_suite_small_n_green():
    reports = cochain_suite(smash_ctx(26), trials=4, seed=5)
    assert set(reports) == {
        "delta_squared", "d_squared", "d_delta_anticommute",
        "delta_is_bracket_with_product", "bracket_antisymmetry",
        "d_leibniz_over_bracket", "delta_leibniz_over_bracket",
        "graded_jacobi"}
    for rep in reports.values():
        assert rep.passed, rep.as_json()
        assert rep.cases > 0


def test_homotopy_suite_small_n_green():
    reports = homotopy_suite(smash_ctx(10), trials=8, seed=1)
    assert set(reports) == {
        "hd_dh_is_one_minus_projection_deg0", "hd_dh_is_one_degpos",
        "h_squared_zero", "h_section_identity_on_kernel"}
    assert all(r.passed for r in reports.values())


def test_assoc_suite_green_and_corrupt_control_red():
    p = build_preset(parse_config(SMASH))
    st = run_preset(p, 1, p_cutoff=auto_cutoff(2, 1))
    good = assoc_suite(st, trials=2, seed=3, deg=2)
    assert good["associativity"].passed
    bad = assoc_suite(st, trials=2, seed=3, deg=2, corrupt_sign=True)
    rep = bad["associativity"]
    assert not rep.passed
    assert rep.counterexample is not None
    # the counterexample must serialize cleanly for the CLI
    json.dumps(rep.as_json())


def test_reference_suite_green():
    p = build_preset(parse_config(SMASH))
    st = run_preset(p, 1, p_cutoff=auto_cutoff(3, 1))
    reports = reference_suite(p, st, trials=3, seed=9)
    assert reports["reference_bracket"].passed
    assert reports["reference_bracket"].cases >= 3


def test_residual_probe_triples_shape():
    ctx = smash_ctx()
    triples = residual_probe_triples(ctx, seed=2, count=5)
    assert len(triples) >= 5
    for t in triples:
        assert len(t) == 3
        for elem in t:
            for (gi, wedge), _terms in elem.items():
                assert wedge == ()
                assert 0 <= gi < len(ctx.group.elements)


def test_suite_report_serialization():
    rep = SuiteReport("demo", False, 7, {"pair": "x1,x2"})
    assert rep.as_json() == {"name": "demo", "passed": False, "cases": 7,
                             "counterexample": {"pair": "x1,x2"}}
    clean = SuiteReport("demo", True, 7)
    assert "counterexample" not in clean.as_json()
