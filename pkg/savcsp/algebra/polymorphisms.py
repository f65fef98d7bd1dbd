import logging

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Optional

from ..model import Language, WeightedRelation
from ..utils import check_cap, tuple_rank
from .operations import FractionalOperation, Operation

LOG = logging.getLogger(__name__)

PAD_PREFIX = "__pad_"


def analysed_relations(language: Language | Iterable[WeightedRelation]) -> list[WeightedRelation]:
    """The relations algebraic checks look at: everything except the constant-0 padding relations."""
    return [rel for rel in language if not rel.name.startswith(PAD_PREFIX)]


def is_polymorphism(f: Operation, phi: WeightedRelation) -> bool:
    """True iff feas(phi) is closed under coordinatewise application of f.
    :param f: Operation object
    :param phi: WeightedRelation object"""
    if phi.is_finite_valued:
        return True

    feasible = phi.feasible

    return all(f.apply(rows) in phi.feasible_set for rows in product(feasible, repeat=f.arity))


def is_polymorphism_of(f: Operation, language: Language | Iterable[WeightedRelation]) -> bool:
    """True iff f is a polymorphism of every relation of a language.
    :param f: Operation object
    :param language: Language object or iterable of WeightedRelation objects"""
    return all(is_polymorphism(f, phi) for phi in analysed_relations(language))


@dataclass(frozen=True)
class FpolCheck:
    """Outcome of a fractional polymorphism check; on failure names the relation and the k feasible tuples
    for which the averaging inequality (or feasibility) fails."""

    ok: bool
    relation: Optional[str] = None
    rows: Optional[tuple] = None
    expected: Optional[Fraction] = None
    average: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.ok


def is_fractional_polymorphism(
    omega: FractionalOperation, language: Language | Iterable[WeightedRelation]
) -> FpolCheck:
    """Check E_{f~omega}[phi(f(x_1..x_k))] <= avg(phi(x_1), ..., phi(x_k)) for every relation and every
    k-vector of feasible tuples, by exact arithmetic. An infeasible image counts as a violation.
    :param omega: FractionalOperation object
    :param language: Language object or iterable of WeightedRelation objects"""
    k = omega.arity

    for phi in analysed_relations(language):
        for rows in product(phi.feasible, repeat=k):
            average = sum((phi(row).fraction for row in rows), Fraction(0)) / k
            expected = Fraction(0)

            for f, w in omega.items():
                value = phi(f.apply(rows))

                if not value.is_finite:
                    return FpolCheck(False, phi.name, rows, None, average)

                expected += w * value.fraction

            if expected > average:
                return FpolCheck(False, phi.name, rows, expected, average)

    return FpolCheck(True)


def _column_constraints(language: Language, arity: int, domain_size: int) -> dict[int, list]:
    """Closure conditions on a k-ary table, grouped by the highest table cell they read.
    Each condition is (cells, feasible set): the cell ranks of the k-tuples formed by the columns of a k-vector
    of feasible tuples, and the set the resulting tuple must lie in."""
    grouped: dict[int, list] = {}
    seen = set()

    for phi in analysed_relations(language):
        if phi.is_finite_valued:
            continue

        for rows in product(phi.feasible, repeat=arity):
            cells = tuple(tuple_rank(column, domain_size) for column in zip(*rows))
            key = (phi.name, cells)

            if key in seen:
                continue

            seen.add(key)
            grouped.setdefault(max(cells), []).append((cells, phi.feasible_set))

    return grouped


def enumerate_polymorphisms(language: Language, arity: int, max_ops: int = 65_536) -> Iterator[Operation]:
    """All k-ary polymorphisms of a language, in lexicographic table order.
    Tables are filled cell by cell; every closure condition is checked as soon as its last cell is set.
    :param language: Language object
    :param arity: k
    :param max_ops: cap on d^(d^k)"""
    d = language.domain_size
    cells = d**arity
    check_cap(d**cells, max_ops, f"enumerating {arity}-ary operations on {d} labels")
    grouped = _column_constraints(language, arity, d)
    table = [0] * cells
    count = 0

    def fill(cell: int) -> Iterator[Operation]:
        nonlocal count

        if cell == cells:
            count += 1
            yield Operation(arity, d, table)
            return

        for value in range(d):
            table[cell] = value

            if all(tuple(table[c] for c in cs) in feasible for cs, feasible in grouped.get(cell, ())):
                yield from fill(cell + 1)

    yield from fill(0)
    LOG.debug("%d polymorphisms of arity %d over %d labels", count, arity, d)
