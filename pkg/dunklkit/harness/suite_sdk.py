"""
SDK for building verification suites

A suite turns a list of CheckTasks into CheckResults. Checks are synchronous numerical
code; they run on a thread pool behind an asyncio semaphore and are reported in task
order, so the report does not depend on the worker count.
"""

import asyncio
import logging
import time
import traceback
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..area import AreaBudget
from ..config import QuadratureBudget, Tolerances, area_budget
from ..errors import CheckFailure, DunklkitError
from ..rootsys import z2d

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = "1.0"


@dataclass
class SuiteCapabilities:
    """Suite capabilities definition"""
    name: str
    description: str
    max_parallel_checks: int = 4
    timeout_seconds: int = 900


@dataclass
class SuiteContext:
    """Shared settings of a verification run"""
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)
    budget: QuadratureBudget = field(default_factory=QuadratureBudget)
    lambdas: Optional[Tuple[float, ...]] = None


@dataclass
class CheckTask:
    """One verification check"""
    id: str
    name: str
    anchor: str
    params: Dict[str, Any] = field(default_factory=dict)
    timeout_seconds: Optional[int] = None


@dataclass
class CheckResult:
    """Result of one check; execution_time is logged, never reported"""
    task_id: str
    name: str
    anchor: str
    passed: bool
    details: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
    execution_time: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "id": self.task_id,
            "name": self.name,
            "anchor": self.anchor,
            "passed": self.passed,
        }
        if self.details is not None:
            out["details"] = self.details
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class SuiteReport:
    suite: str
    seed: int
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }


class BaseSuite(ABC):
    """Base class for all verification suites"""

    def __init__(self, capabilities: SuiteCapabilities, context: Optional[SuiteContext] = None):
        self.capabilities = capabilities
        self.context = context or SuiteContext()
        if self.context.lambdas is not None:
            z2d(self.context.lambdas)
        self.logger = logging.getLogger(f"suite.{capabilities.name}")
        self.active_tasks: Dict[str, CheckTask] = {}

    @property
    def tol(self) -> Tolerances:
        return self.context.tolerances

    @property
    def budget(self) -> QuadratureBudget:
        return self.context.budget

    @property
    def area_budget(self) -> AreaBudget:
        return area_budget(self.context.budget, self.context.tolerances)

    @property
    def lambdas(self) -> Tuple[float, ...]:
        """Multiplicities of the Z_2^d system used by the numeric checks; lambda = 1/2 in d = 1 by default"""
        return tuple(self.context.lambdas) if self.context.lambdas is not None else (0.5,)

    @abstractmethod
    def build_tasks(self) -> List[CheckTask]:
        """The checks of this suite in report order"""

    def run_check(self, task: CheckTask) -> Dict[str, Any]:
        """Run one check; return its details or raise CheckFailure

        Dispatches to the method ``check_<task.name>`` with ``task.params`` as keyword arguments.
        """
        handler = getattr(self, f"check_{task.name}", None)
        if handler is None:
            raise ValueError(f"Unknown check: {task.name}")
        return handler(**task.params)

    def _timed(self, task: CheckTask) -> Tuple[Dict[str, Any], float]:
        start = time.perf_counter()
        details = self.run_check(task)
        return details, time.perf_counter() - start

    async def execute_task(self, task: CheckTask, executor: ThreadPoolExecutor) -> CheckResult:
        """Execute a check with error handling and timing"""
        self.active_tasks[task.id] = task
        timeout = task.timeout_seconds or self.capabilities.timeout_seconds
        loop = asyncio.get_running_loop()
        try:
            self.logger.info(f"Starting check {task.id}")
            details, elapsed = await asyncio.wait_for(
                loop.run_in_executor(executor, self._timed, task), timeout=timeout
            )
            self.logger.info(f"Completed check {task.id} in {elapsed:.2f}s")
            return CheckResult(
                task_id=task.id, name=task.name, anchor=task.anchor, passed=True,
                details=details, execution_time=elapsed,
            )
        except asyncio.TimeoutError:
            error_msg = f"Check {task.id} timed out after {timeout}s"
            self.logger.error(error_msg)
            return CheckResult(task_id=task.id, name=task.name, anchor=task.anchor, passed=False, error=error_msg)
        except CheckFailure as e:
            self.logger.error(f"Check {task.id} failed: {e}")
            return CheckResult(
                task_id=task.id, name=task.name, anchor=task.anchor, passed=False,
                details=e.details or None, error=str(e),
            )
        except DunklkitError as e:
            self.logger.error(f"Check {task.id} raised {type(e).__name__}: {e}")
            return CheckResult(
                task_id=task.id, name=task.name, anchor=task.anchor, passed=False,
                error=f"{type(e).__name__}: {e}",
            )
        except Exception as e:
            self.logger.error(f"Check {task.id} crashed: {e}\n{traceback.format_exc()}")
            return CheckResult(
                task_id=task.id, name=task.name, anchor=task.anchor, passed=False,
                error=f"{type(e).__name__}: {e}",
            )
        finally:
            self.active_tasks.pop(task.id, None)

    async def execute_tasks_parallel(self, tasks: List[CheckTask], threads: int = 1) -> List[CheckResult]:
        """Execute checks concurrently; results come back in task order"""
        limit = max(1, min(threads, self.capabilities.max_parallel_checks))
        semaphore = asyncio.Semaphore(limit)
        with ThreadPoolExecutor(max_workers=limit) as executor:

            async def execute_with_semaphore(task: CheckTask) -> CheckResult:
                async with semaphore:
                    return await self.execute_task(task, executor)

            results = await asyncio.gather(
                *[execute_with_semaphore(task) for task in tasks], return_exceptions=True
            )
        final_results = []
        for task, result in zip(tasks, results):
            if isinstance(result, BaseException):
                final_results.append(CheckResult(
                    task_id=task.id, name=task.name, anchor=task.anchor, passed=False, error=str(result),
                ))
            else:
                final_results.append(result)
        return final_results

    def run(self, threads: int = 1) -> SuiteReport:
        tasks = self.build_tasks()
        results = asyncio.run(self.execute_tasks_parallel(tasks, threads))
        report = SuiteReport(suite=self.capabilities.name, seed=self.context.seed, results=results)
        failed = [r.task_id for r in results if not r.passed]
        self.logger.info(
            f"Suite {self.capabilities.name}: {len(results) - len(failed)}/{len(results)} checks passed"
            + (f", failed: {failed}" if failed else "")
        )
        return report

    def get_status(self) -> Dict[str, Any]:
        return {
            "name": self.capabilities.name,
            "active_tasks": len(self.active_tasks),
            "active_task_ids": list(self.active_tasks.keys()),
        }


def require(condition: bool, message: str, **details: Any) -> None:
    """Raise CheckFailure with details unless condition holds"""
    if not condition:
        raise CheckFailure(message, details=details)


def run_parallel(jobs: Sequence[Callable[[], Any]], threads: int = 1) -> List[Any]:
    """Run zero-argument jobs on a thread pool; results in job order, first error re-raised"""
    if threads <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]

    async def gather() -> List[Any]:
        loop = asyncio.get_running_loop()
        semaphore = asyncio.Semaphore(threads)
        with ThreadPoolExecutor(max_workers=threads) as executor:

            async def one(job: Callable[[], Any]) -> Any:
                async with semaphore:
                    return await loop.run_in_executor(executor, job)

            return await asyncio.gather(*[one(job) for job in jobs])

    return asyncio.run(gather())


__all__ = [
    "BaseSuite",
    "CheckResult",
    "CheckTask",
    "REPORT_SCHEMA_VERSION",
    "SuiteCapabilities",
    "SuiteContext",
    "SuiteReport",
    "require",
    "run_parallel",
]
