import time
from typing import Any, Dict, List

import pytest

from dunklkit.errors import DomainError
from dunklkit.harness import BaseSuite, CheckTask, SuiteCapabilities, SuiteContext, SuiteFactory
from dunklkit.harness.suite_sdk import require, run_parallel


class ToySuite(BaseSuite):
    def __init__(self, context=None):
        super().__init__(SuiteCapabilities(name="toy", description="harness checks"), context)

    def build_tasks(self) -> List[CheckTask]:
        return [
            CheckTask(id="slow-pass", name="sleep", anchor="a", params={"seconds": 0.05}),
            CheckTask(id="quick-pass", name="sleep", anchor="a", params={"seconds": 0.0}),
            CheckTask(id="oracle", name="compare", anchor="b", params={"value": 2.0}),
            CheckTask(id="domain", name="domain", anchor="c"),
            CheckTask(id="crash", name="crash", anchor="d"),
            CheckTask(id="missing", name="nothing", anchor="e"),
        ]

    def check_sleep(self, seconds: float) -> Dict[str, Any]:
        time.sleep(seconds)
        return {"slept": seconds}

    def check_compare(self, value: float) -> Dict[str, Any]:
        require(value < 1.0, "value too large", value=value)
        return {}

    def check_domain(self) -> Dict[str, Any]:
        raise DomainError("bad parameter")

    def check_crash(self) -> Dict[str, Any]:
        return {"ratio": 1 / 0}


@pytest.mark.parametrize("threads", [1, 4])
def test_results_keep_task_order(threads):
    report = ToySuite().run(threads)
    assert [r.task_id for r in report.results] == ["slow-pass", "quick-pass", "oracle", "domain", "crash", "missing"]
    assert [r.passed for r in report.results] == [True, True, False, False, False, False]
    assert not report.passed


def test_failure_details():
    by_id = {r.task_id: r for r in ToySuite().run().results}
    assert by_id["oracle"].details == {"value": 2.0}
    assert by_id["domain"].error.startswith("DomainError")
    assert "ZeroDivisionError" in by_id["crash"].error
    assert "Unknown check" in by_id["missing"].error


def test_report_payload_omits_timing():
    payload = ToySuite(SuiteContext(seed=7)).run().to_dict()
    assert payload["seed"] == 7
    assert payload["schema_version"] == "1.0"
    assert all("execution_time" not in c for c in payload["checks"])
    assert payload["checks"][0] == {"id": "slow-pass", "name": "sleep", "anchor": "a", "passed": True,
                                     "details": {"slept": 0.05}}


def test_context_validates_multiplicities():
    with pytest.raises(DomainError):
        ToySuite(SuiteContext(lambdas=(-0.5,)))
    assert ToySuite(SuiteContext(lambdas=(1.0, 2.0))).lambdas == (1.0, 2.0)
    assert ToySuite().lambdas == (0.5,)


def test_factory_registry():
    factory = SuiteFactory()
    assert factory.names == ["symbolic", "translation", "poisson", "means", "area", "boundary"]
    with pytest.raises(ValueError, match="Unknown suite"):
        factory.create_suite("nope")
    with pytest.raises(ValueError):
        factory.register_suite_type("bad", object)
    factory.register_suite_type("toy", ToySuite)
    assert isinstance(factory.create_suite("toy"), ToySuite)


def test_run_parallel_keeps_order():
    jobs = [lambda i=i: (time.sleep(0.01 * (5 - i)), i)[1] for i in range(5)]
    assert run_parallel(jobs, threads=3) == [0, 1, 2, 3, 4]
    assert run_parallel(jobs, threads=1) == [0, 1, 2, 3, 4]


def test_run_parallel_reraises():
    def boom():
        raise DomainError("boom")

    with pytest.raises(DomainError):
        run_parallel([lambda: 1, boom], threads=2)
