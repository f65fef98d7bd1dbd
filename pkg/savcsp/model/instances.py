import logging

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

from ..utils import StructuralError, check_cap
from .relations import Language, WeightedRelation, crisp_relation
from .values import INF, ExtRational, ext_sum

LOG = logging.getLogger(__name__)

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class Constraint:
    """One valued constraint phi(x_i1, ..., x_im); the relation is referenced by name."""

    relation: str
    scope: tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    """A VCSP instance: variables x0..x(n-1) and an ordered list of valued constraints over a language.
    Repeated constraints encode multiplicities."""

    language: Language
    num_vars: int
    constraints: tuple[Constraint, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(self.constraints))

        if self.num_vars < 0:
            raise StructuralError(f"negative number of variables {self.num_vars}")

        for c in self.constraints:
            rel = self.language.relation(c.relation)

            if len(c.scope) != rel.arity:
                raise StructuralError(f"constraint {c.relation!r} has {len(c.scope)} variables, arity {rel.arity}")

            if any(not 0 <= v < self.num_vars for v in c.scope):
                raise StructuralError(f"constraint {c.relation!r} has a variable outside x0..x{self.num_vars - 1}")

    @property
    def domain_size(self) -> int:
        return self.language.domain_size

    def relation_of(self, c: Constraint) -> WeightedRelation:
        return self.language.relation(c.relation)

    def terms(self) -> Iterator[tuple[WeightedRelation, tuple[int, ...]]]:
        """(relation, scope) pairs in constraint order."""
        return ((self.language.relation(c.relation), c.scope) for c in self.constraints)

    def evaluate(self, assignment: Sequence[int]) -> ExtRational:
        """Objective value of a total assignment: the exact sum of constraint values, inf if any is violated.
        :param assignment: sequence of labels indexed by variable"""
        if len(assignment) != self.num_vars:
            raise StructuralError(f"assignment has {len(assignment)} labels for {self.num_vars} variables")

        if any(not 0 <= label < self.domain_size for label in assignment):
            raise StructuralError("assignment uses a label outside the domain")

        return ext_sum(rel(tuple(assignment[v] for v in scope)) for rel, scope in self.terms())

    def with_language(self, language: Language) -> "Instance":
        """The same constraints over another language carrying the referenced names, e.g. a core.
        :param language: replacement language"""
        return Instance(language, self.num_vars, self.constraints)

    def extended(self, constraints: Iterable[Constraint], language: Optional[Language] = None) -> "Instance":
        """A copy with further constraints appended.
        :param constraints: constraints to add
        :param language: optional replacement language"""
        return Instance(language or self.language, self.num_vars, (*self.constraints, *constraints))


def evaluate(instance: Instance, assignment: Sequence[int]) -> ExtRational:
    """Objective value of an assignment (module-level form of 'Instance.evaluate').
    :param instance: Instance object
    :param assignment: sequence of labels"""
    return instance.evaluate(assignment)


def feas_relation(phi: WeightedRelation) -> WeightedRelation:
    """The crisp feasibility relation of a weighted relation.
    :param phi: WeightedRelation object"""
    return phi.feas_relation()


def assignment_values(instance: Instance, max_assignments: int) -> Iterator[tuple[Assignment, ExtRational]]:
    """Every assignment with its objective value, in lexicographic order.
    Finite values are accumulated as Fractions; infinite ones short-circuit.
    :param instance: Instance object
    :param max_assignments: cap on d^n"""
    d, n = instance.domain_size, instance.num_vars
    check_cap(d**n, max_assignments, f"enumerating {d}^{n} assignments")
    terms = [(rel, scope) for rel, scope in instance.terms()]

    for assignment in product(range(d), repeat=n):
        total = Fraction(0)

        for rel, scope in terms:
            value = rel(tuple(assignment[v] for v in scope))

            if not value.is_finite:
                total = None
                break

            total += value.fraction

        yield assignment, (INF if total is None else ExtRational(total))


def minimum_and_optima(instance: Instance, max_assignments: int) -> tuple[ExtRational, list[Assignment]]:
    """Exhaustive minimisation over D^n: the minimum value and every assignment attaining it, (INF, []) when
    unsatisfiable.
    :param instance: Instance object
    :param max_assignments: cap on d^n"""
    best, optima = INF, []

    for assignment, value in assignment_values(instance, max_assignments):
        if not value.is_finite:
            continue

        if value < best:
            best, optima = value, [assignment]
        elif value == best:
            optima.append(assignment)

    return best, optima


def opt_relation(instance: Instance, name: str = "opt", max_assignments: int = 1_000_000) -> WeightedRelation:
    """The crisp n-ary relation holding exactly the optimal assignments of an instance; empty when unsatisfiable.
    :param instance: Instance object
    :param name: name of the resulting relation
    :param max_assignments: cap on d^n"""
    if instance.num_vars < 1:
        raise StructuralError("opt relation of an instance without variables has arity 0")

    best, optima = minimum_and_optima(instance, max_assignments)
    LOG.debug("opt relation %r: %d optimal assignments of value %s", name, len(optima), best)

    return crisp_relation(name, instance.domain_size, instance.num_vars, optima)
