import logging

from dataclasses import dataclass

from . import Workbench
from .model import Assignment, ExtRational, Instance, minimum_and_optima

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    """Exact minimum of an instance with every assignment attaining it; INF and no optima when unsatisfiable."""

    value: ExtRational
    optima: tuple[Assignment, ...]

    @property
    def satisfiable(self) -> bool:
        return self.value.is_finite


def brute_force(instance: Instance, max_assignments: int = Workbench.MAX_ASSIGNMENTS) -> OracleResult:
    """Minimise an instance by exhaustive enumeration of D^n.
    :param instance: Instance object
    :param max_assignments: cap on d^n"""
    best, optima = minimum_and_optima(instance, max_assignments)
    LOG.debug("brute force over %d^%d: %s, %d optima", instance.domain_size, instance.num_vars, best, len(optima))

    return OracleResult(best, tuple(optima))
