import json

import pytest

from conftest import DUAL, GROUP_RING
from localdrr import verify
from localdrr.nilring import QQ
from localdrr.verify import REGISTRY, SUITES, SuiteInfo, run_suite, table_value


class TestExamples:
    def test_lie_tables(self):
        rep = run_suite("lie_tables", QQ, seed=0, cases=8)
        assert rep.ok
        # three tables of 17 x 17 cells, two evaluations per cell
        assert rep.checks >= 3 * 17 * 17 * 2

    def test_gplus_trivial(self):
        rep = run_suite("gplus_trivial", GROUP_RING, seed=7, cases=25)
        assert rep.ok and rep.cases == 25 and rep.checks >= 4 * 25

    def test_consistency(self):
        rep = run_suite("consistency", DUAL, seed=1, cases=50)
        assert rep.ok and rep.cases == 50


class TestRegistry:
    def test_every_suite_covers_something(self):
        for name, info in REGISTRY.items():
            assert info.name == name and info.covers

    def test_invariants_enumerated(self):
        covered = " | ".join(c for info in REGISTRY.values() for c in info.covers)
        for needle in ("invert_unit", "exp_nil", "nil_index", "associative", "exact form", "factorize_unit",
                       "factorize_aut", "Jacobi", "action", "bimultiplicativity", "antisymmetry",
                       "common substitution", "exp/log", "delta_1", "delta_2", "perturbed", "Phi_lambda",
                       "L + 4", "c_x b_y", "lower triangular", "lie_trace", "closed forms", "residual",
                       "parsing"):
            assert needle in covered, needle

    def test_unknown(self):
        with pytest.raises(KeyError):
            run_suite("nope")

    def test_table_values(self):
        assert table_value("ee", -3, 3) == 36
        assert table_value("ed", -1, 1) == -12
        assert table_value("dd", -2, 2) == -12
        assert table_value("dd", 1, 2) == 0


@pytest.mark.parametrize("name", [s for s in SUITES if s != "lie_tables"])
def test_suite_small_run(name):
    rep = run_suite(name, seed=5, cases=3)
    assert rep.ok, [f.as_json() for f in rep.failures]


def test_reproducible():
    a = run_suite("cc_axioms", seed=2, cases=5).as_json(timing=False)
    b = run_suite("cc_axioms", seed=2, cases=5).as_json(timing=False)
    assert json.dumps(a) == json.dumps(b)


def test_failures_are_reported(monkeypatch):
    def broken(case, ring, rng):
        case.add_input(x=rng.randint(0, 9))
        case.check("one is two", 1, 2)

    monkeypatch.setitem(REGISTRY, "broken", SuiteInfo("broken", broken, QQ, 2, ("nothing",)))
    rep = run_suite("broken")
    assert not rep.ok and len(rep.failures) == 2
    entry = rep.failures[0].as_json()
    assert entry["inputs"]["check"] == "one is two" and "x" in entry["inputs"]
    assert (entry["lhs"], entry["rhs"]) == ("1", "2")


def test_errors_become_failures(monkeypatch):
    def raising(case, ring, rng):
        raise ArithmeticError("boom")

    monkeypatch.setitem(REGISTRY, "raising", SuiteInfo("raising", raising, QQ, 1, ("nothing",)))
    rep = run_suite("raising")
    assert len(rep.failures) == 1 and "boom" in rep.failures[0].lhs


def test_precision_retry(monkeypatch):
    from localdrr.laurent import PrecisionError, default_precision

    seen = []

    def needy(case, ring, rng):
        seen.append(default_precision())
        if default_precision() < 4 * verify.START_PREC:
            raise PrecisionError("more please")
        case.check("fine", 1, 1)

    monkeypatch.setitem(REGISTRY, "needy", SuiteInfo("needy", needy, QQ, 1, ("nothing",)))
    rep = run_suite("needy")
    assert rep.ok and seen == [verify.START_PREC, 2 * verify.START_PREC, 4 * verify.START_PREC]
