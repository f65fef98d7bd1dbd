import logging

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from ..model import Language, WeightedRelation, opt_relation
from ..utils import check_cap
from .operations import FractionalOperation, Operation, is_majority
from .polymorphisms import is_polymorphism_of
from .support import SupportTester

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConservativeReport:
    """Outcome of the conservative dichotomy search. Only non-membership facts are reported for the negative side:
    'killed' lists each majority polymorphism outside the support clone with the relation opt(I_f) excluding it."""

    conservative: bool
    majority: Optional[Operation] = None
    witness_fpol: Optional[FractionalOperation] = None
    killed: tuple[tuple[Operation, WeightedRelation], ...] = field(default_factory=tuple)
    extended_has_majority: Optional[bool] = None

    @property
    def width_23(self) -> bool:
        return self.majority is not None


def is_conservative_language(language: Language) -> bool:
    """True iff the language holds every unary {0,1}-valued relation."""
    d = language.domain_size
    present = {tuple(value for _, value in rel.items()) for rel in language if rel.arity == 1}

    return all(bits in present for bits in product((0, 1), repeat=d))


def conservative_majorities(domain_size: int, max_ops: int = 65_536) -> list[Operation]:
    """Every conservative majority operation: fixed on tuples with a repeated value, any argument on the rest.
    :param domain_size: number of labels
    :param max_ops: cap on the number of operations"""
    d = domain_size
    distinct = [args for args in product(range(d), repeat=3) if len(set(args)) == 3]
    check_cap(3 ** len(distinct), max_ops, f"conservative majorities on {d} labels")
    ops = []

    for choice in product(range(3), repeat=len(distinct)):
        picks = dict(zip(distinct, choice))

        def fn(x, y, z, picks=picks):
            if x == y or x == z:
                return x

            return y if y == z else (x, y, z)[picks[(x, y, z)]]

        ops.append(Operation.from_function(3, d, fn, f"majority_c{len(ops)}"))

    return ops


def conservative_dichotomy(tester: SupportTester, language: Language) -> ConservativeReport:
    """For a conservative language, look for a majority in the support clone; when none is there, add opt(I_f)
    for every majority polymorphism f outside it and report whether a majority polymorphism survives.
    :param tester: SupportTester object providing the support LP and caps
    :param language: Language object"""
    if not is_conservative_language(language):
        return ConservativeReport(False)

    majorities = [m for m in conservative_majorities(language.domain_size, tester.max_ops) if is_majority(m)]
    polymorphic = [m for m in majorities if is_polymorphism_of(m, language)]
    killed = []

    for m in polymorphic:
        answer = tester.supp_membership(m, language)

        if answer.member:
            LOG.info("conservative: majority %s in the support clone", m.name)
            return ConservativeReport(True, m, answer.witness_fpol)

        rel = opt_relation(answer.witness_instance, f"opt_{m.name}", tester.max_assignments)
        killed.append((m, rel))

    extended = language.union(rel for _, rel in killed)
    survives = any(is_polymorphism_of(m, extended) for m in majorities)
    LOG.info("conservative: %d majorities killed, majority polymorphism survives: %s", len(killed), survives)

    return ConservativeReport(True, None, None, tuple(killed), survives)

