import pytest

from dunklkit.config import QuadratureBudget, Tolerances
from dunklkit.errors import CheckFailure, DomainError
from dunklkit.harness import CheckTask, SuiteContext, SuiteFactory
from dunklkit.suites import BUILTIN_SUITES


@pytest.mark.parametrize("name", list(BUILTIN_SUITES))
def test_suites_build_unique_tasks(name, context):
    suite = SuiteFactory().create_suite(name, context)
    tasks = suite.build_tasks()
    assert tasks
    ids = [t.id for t in tasks]
    assert len(ids) == len(set(ids))
    for task in tasks:
        assert callable(getattr(suite, f"check_{task.name}"))


def test_negative_multiplicity_is_rejected():
    with pytest.raises(DomainError):
        SuiteFactory().create_suite("poisson", SuiteContext(lambdas=(-0.5,)))


def test_boundary_suite_reads_configured_tolerances():
    tolerances = Tolerances(nt_bound_ratio=3.0, nt_window=2, nt_refinement=0.1, tol_nt=0.01)
    suite = SuiteFactory().create_suite("boundary", SuiteContext(seed=4, tolerances=tolerances))
    assert suite.nt_settings == {
        "n_slice": QuadratureBudget().n_slice,
        "levels": QuadratureBudget().nt_levels,
        "tol_nt": 0.01,
        "bound_ratio": 3.0,
        "window": 2,
        "refine_tol": 0.1,
        "seed": 4,
    }


def test_maximum_principle_check_uses_configured_tolerance():
    task = CheckTask(id="maximum-principle", name="maximum_principle", anchor="maximum principle")
    lenient = SuiteFactory().create_suite("boundary", SuiteContext())
    details = lenient.run_check(task)
    assert details["interior_max"] <= details["boundary_max"] + 1e-6
    strict = SuiteFactory().create_suite("boundary", SuiteContext(tolerances=Tolerances(maximum_principle=-10.0)))
    with pytest.raises(CheckFailure):
        strict.run_check(task)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["symbolic", "translation"])
def test_fast_suites_pass(name, context):
    report = SuiteFactory().create_suite(name, context).run(threads=2)
    failed = [(r.task_id, r.error) for r in report.results if not r.passed]
    assert not failed


@pytest.mark.slow
@pytest.mark.parametrize("name", ["poisson", "means", "area", "boundary"])
def test_numeric_suites_pass(name, context):
    report = SuiteFactory().create_suite(name, context).run(threads=4)
    failed = [(r.task_id, r.error) for r in report.results if not r.passed]
    assert not failed
