import logging

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional

from ..model import INF, Constraint, ExtRational, Instance, Language, assignment_values, opt_relation
from ..utils import StructuralError

LOG = logging.getLogger(__name__)


def gadget_multiplier(upper: Fraction, lower: Fraction, gap: Optional[Fraction]) -> int:
    """C = ceil((U - L + 1) / delta), or 1 when the instance has no sub-optimal satisfying assignment.
    :param upper: U, an upper bound on the optimum of J'
    :param lower: L, a lower bound on the optimum of J'
    :param gap: delta, the least difference between a sub-optimal and an optimal value; None when there is none"""
    if gap is None:
        return 1

    return max(1, ceil((Fraction(upper) - Fraction(lower) + 1) / Fraction(gap)))


@dataclass(frozen=True)
class OptGadget:
    """The instance J over Gamma replacing every opt(I) constraint of J' by C copies of I, with the numbers needed
    to read min(J') back from min(J)."""

    instance: Instance
    multiplier: int
    occurrences: int
    min_inner: ExtRational
    upper: Fraction
    lower: Fraction
    gap: Optional[Fraction]

    def recover_value(self, min_outer: ExtRational) -> ExtRational:
        """min(J') = min(J) - C*N*min(I); infinity when J is unsatisfiable or min(J) > C*N*min(I) + U.
        :param min_outer: the optimum of J"""
        if not min_outer.is_finite:
            return INF

        offset = self.multiplier * self.occurrences * self.min_inner.fraction

        if min_outer.fraction > offset + self.upper:
            return INF

        return ExtRational(min_outer.fraction - offset)


def _inner_stats(inner: Instance, max_assignments: int) -> tuple[ExtRational, Optional[Fraction]]:
    values = sorted({value for _, value in assignment_values(inner, max_assignments) if value.is_finite})

    if not values:
        raise StructuralError("opt(I) is undefined: the inner instance is unsatisfiable")

    gap = values[1].fraction - values[0].fraction if len(values) > 1 else None

    return values[0], gap


def opt_gadget(
    language: Language, inner: Instance, outer: Instance, opt_name: str = "opt", max_assignments: int = 1_000_000
) -> OptGadget:
    """Reduce an instance J' over Gamma u {opt(I)} to an instance J over Gamma.
    :param language: Gamma
    :param inner: I, an instance over Gamma
    :param outer: J', an instance whose language holds Gamma and opt(I) under 'opt_name'
    :param opt_name: name of the opt(I) relation in J'
    :param max_assignments: cap on enumerating the assignments of I"""
    min_inner, gap = _inner_stats(inner, max_assignments)
    expected = opt_relation(inner, opt_name, max_assignments)

    if opt_name in outer.language and outer.language.relation(opt_name) != expected:
        raise StructuralError(f"relation {opt_name!r} of J' is not opt(I)")

    upper, lower, occurrences, constraints = Fraction(0), Fraction(0), 0, []

    for c in outer.constraints:
        if c.relation == opt_name:
            occurrences += 1
            continue

        rel = language.relation(c.relation)

        if rel.finite_values:
            upper += rel.max_finite.fraction
            lower += rel.min_finite.fraction

    multiplier = gadget_multiplier(upper, lower, gap)

    for c in outer.constraints:
        if c.relation != opt_name:
            constraints.append(c)
            continue

        copy = [Constraint(ic.relation, tuple(c.scope[v] for v in ic.scope)) for ic in inner.constraints]
        constraints.extend(copy * multiplier)

    LOG.debug("opt gadget: C=%d, N=%d, U=%s, L=%s, delta=%s", multiplier, occurrences, upper, lower, gap)
    result = Instance(language, outer.num_vars, tuple(constraints))

    return OptGadget(result, multiplier, occurrences, min_inner, upper, lower, gap)
