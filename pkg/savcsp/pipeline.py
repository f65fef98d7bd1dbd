import csv
import io
import logging
import time

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import Workbench
from .algebra import BoundedWidthTester, BwcVerdict
from .decorators import method_params
from .generators import Generator
from .model import INF, Assignment, ExtRational, Instance, Language
from .oracle import brute_force
from .relaxation import Relaxation, SaSolution, source_language
from .utils import ExactnessError, ResourceCapError, StructuralError

LOG = logging.getLogger(__name__)

STATUSES = ("exact-if-BWC", "relaxation-only", "unsatisfiable")


@dataclass(frozen=True)
class SolveResult:
    """SA(k,l) optimum of an instance and how far it can be trusted."""

    value: ExtRational
    status: str
    solution: SaSolution
    verdict: Optional[BwcVerdict] = None


@dataclass(frozen=True)
class AssignmentResult:
    """An optimal assignment found by self-reduction, with the number of LP solves it took."""

    assignment: Assignment
    value: ExtRational
    lp_solves: int
    slackness: bool


@dataclass(frozen=True)
class AuditRow:
    instance_id: str
    oracle_value: ExtRational
    sa_value: ExtRational
    runtime: float
    instance: Instance = field(repr=False, compare=False)

    @property
    def gap(self) -> bool:
        return self.sa_value != self.oracle_value


@dataclass(frozen=True)
class AuditReport:
    """SA value against brute force for every sampled instance, next to the bounded width verdict."""

    rows: tuple[AuditRow, ...]
    verdict: Optional[BwcVerdict] = None

    @property
    def gaps(self) -> list[AuditRow]:
        return [row for row in self.rows if row.gap]

    @property
    def matches(self) -> int:
        return len(self.rows) - len(self.gaps)

    def to_csv(self, timings: bool = False) -> str:
        """CSV with columns instance_id, oracle_value, sa_value, gap and, when asked for, runtime.
        :param timings: add the runtime column"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["instance_id", "oracle_value", "sa_value", "gap", *(["runtime"] if timings else [])])

        for row in self.rows:
            cells = [row.instance_id, str(row.oracle_value), str(row.sa_value), int(row.gap)]
            writer.writerow([*cells, *([f"{row.runtime:.6f}"] if timings else [])])

        return buffer.getvalue()


@dataclass(frozen=True)
class AuditConfig:
    """How width_audit samples instances of VCSP(Gamma)."""

    seed: int = 0
    samples: int = 100
    n: int = 4
    count: int = 4


class Pipeline(Workbench):
    """Solve instances through SA(k,l) and use the bounded width verdict of their language to label the result."""

    def __init__(self, **kwargs) -> None:
        """Initialise class.
        :param **kwargs: caps accepted by Workbench"""
        super().__init__(**kwargs)
        self.relaxation = Relaxation(**self.caps())
        self.tester = BoundedWidthTester(**self.caps())
        self.generator = Generator(**self.caps())
        self._method_kwargs = {
            "solve_value": {
                "req_params": ["instance"],
                "ranges": {"k": (1, "MAX_SA_LEVEL"), "l": (1, "MAX_SA_LEVEL")},
                "ordered": [("k", "l")],
            },
            "solve_assignment": {
                "req_params": ["instance"],
                "ranges": {"k": (1, "MAX_SA_LEVEL"), "l": (1, "MAX_SA_LEVEL")},
                "ordered": [("k", "l")],
            },
            "width_audit": {"req_params": ["language"]},
        }

    def verdict(self, language: Language) -> Optional[BwcVerdict]:
        """The bounded width verdict of a language, or None when a cap stops the search.
        :param language: Language object"""
        try:
            return self.tester.bwc_verdict(language)
        except ResourceCapError as e:
            LOG.warning("bounded width test skipped: %s", e)
            return None

    @method_params
    def solve_value(self, instance: Instance = None, k: int = Workbench.DEFAULT_K, l: int = Workbench.DEFAULT_L):
        """SA(k,l) optimum; 'exact-if-BWC' when the core of the language with constants passes the bounded width
        test, 'unsatisfiable' when the relaxation is infeasible, 'relaxation-only' otherwise.
        :param instance: Instance object
        :param k: size bound of the marginal sub-scopes
        :param l: size bound of the padded scopes"""
        solution = self.relaxation.solve_sa(self.relaxation.build_sa(instance, k, l))

        if not solution.is_feasible:
            LOG.info("relaxation infeasible: instance unsatisfiable")
            return SolveResult(INF, "unsatisfiable", solution)

        verdict = self.verdict(source_language(instance))
        status = "exact-if-BWC" if verdict is not None and verdict.is_yes else "relaxation-only"
        LOG.info("SA(%d,%d) value %s, status %s", k, l, solution.objective, status)

        return SolveResult(solution.objective, status, solution, verdict)

    @method_params
    def solve_assignment(
        self,
        instance: Instance = None,
        k: int = Workbench.DEFAULT_K,
        l: int = Workbench.DEFAULT_L,
        force: bool = False,
    ) -> AssignmentResult:
        """Optimal assignment by self-reduction: pin each variable in index order to the smallest label whose pinned
        optimum equals the running optimum. At most 1 + n*d LP solves; each pin rebuilds and re-solves its program
        from scratch, with no reuse of the previous basis.
        :param instance: Instance object
        :param k: size bound of the marginal sub-scopes
        :param l: size bound of the padded scopes
        :param force: run even when the language is not known to have bounded width"""
        first = self.solve_value(instance, k, l)

        if first.status == "unsatisfiable":
            raise StructuralError("the instance is unsatisfiable")

        if first.status != "exact-if-BWC" and not force:
            raise StructuralError("the relaxation is not known to be exact for this language")

        pins, solves = {}, 1

        for v in range(instance.num_vars):
            for label in range(instance.domain_size):
                pinned = self.relaxation.solve_sa(self.relaxation.build_sa(instance, k, l, {**pins, v: label}))
                solves += 1

                if pinned.objective == first.value:
                    pins[v] = label
                    break
            else:
                raise ExactnessError(f"no label of x{v} keeps the optimum {first.value}")

        assignment = tuple(pins[v] for v in range(instance.num_vars))
        value = instance.evaluate(assignment)

        if value != first.value:
            raise ExactnessError(f"self-reduction reached {value}, the relaxation optimum is {first.value}")

        slackness = self.relaxation.check_complementary_slackness(first.solution, assignment)
        LOG.info("assignment %s after %d LP solves, slackness %s", assignment, solves, slackness)

        return AssignmentResult(assignment, value, solves, slackness)

    @method_params
    def width_audit(
        self,
        language: Language = None,
        config: Optional[AuditConfig] = None,
        instances: Optional[Iterable[Instance]] = None,
        k: int = Workbench.DEFAULT_K,
        l: int = Workbench.DEFAULT_L,
    ) -> AuditReport:
        """Compare the SA(k,l) value with brute force on sampled (or given) instances of VCSP(Gamma).
        :param language: Language object
        :param config: AuditConfig object for sampling
        :param instances: explicit instances, used instead of sampling
        :param k: size bound of the marginal sub-scopes
        :param l: size bound of the padded scopes"""
        if instances is None:
            instances = self._sample(language, config or AuditConfig())

        rows = []

        for i, instance in enumerate(instances):
            started = time.perf_counter()
            solution = self.relaxation.solve_sa(self.relaxation.build_sa(instance, k, l))
            runtime = time.perf_counter() - started
            oracle = brute_force(instance, self.max_assignments)

            if oracle.value < solution.objective:
                raise ExactnessError(f"instance {i}: SA value {solution.objective} above the optimum {oracle.value}")

            rows.append(AuditRow(f"i{i}", oracle.value, solution.objective, runtime, instance))

        report = AuditReport(tuple(rows), self.verdict(language))
        LOG.info("width audit: %d instances, %d gaps", len(report.rows), len(report.gaps))

        return report

    def _sample(self, language: Language, config: AuditConfig) -> Sequence[Instance]:
        seeds = np.random.SeedSequence(config.seed).generate_state(config.samples)

        return [self.generator.gen_instance(int(seed), language, config.n, config.count) for seed in seeds]
