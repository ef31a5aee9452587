import pytest

from kummerlab.suites import run_suite, suite_names


def test_registry_complete():
    assert suite_names() == [
        "adelic-good-ell", "cm-counterexample", "cohen-roots", "exponent-h1",
        "grouptheory-prop", "kummer-identity", "lemma-ab", "serre-lifting",
        "sl2-squares", "zywina-normaliser",
    ]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("definitely-not-a-suite")


def test_reports_deterministic():
    a = run_suite("kummer-identity", seed=3, instances=6)
    b = run_suite("kummer-identity", seed=3, instances=6)
    assert a.to_dict() == b.to_dict()
    assert [r.data for r in a.results] == [r.data for r in b.results]


def test_seed_changes_instances():
    a = run_suite("kummer-identity", seed=3, instances=6)
    b = run_suite("kummer-identity", seed=4, instances=6)
    assert [r.data for r in a.results] != [r.data for r in b.results]


def test_report_shape():
    rep = run_suite("sl2-squares", seed=0)
    d = rep.to_dict()
    assert d["schema_version"] == 1
    assert d["passed"] is True and d["failures"] == []
    assert rep.instance_count == 4


@pytest.mark.parametrize("name", ["grouptheory-prop", "exponent-h1",
                                  "lemma-ab", "serre-lifting"])
def test_small_runs_pass(name):
    rep = run_suite(name, seed=123, instances=4)
    assert rep.passed, rep.to_dict()["failures"]
