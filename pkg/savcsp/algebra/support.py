import logging

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Optional

from .. import Workbench
from ..decorators import method_params
from ..lp import LpBuilder, SimplexSolver
from ..model import Constraint, Instance, Language, WeightedRelation
from ..oracle import brute_force
from ..utils import ExactnessError, StructuralError, integral_scaling, tuple_rank
from .operations import FractionalOperation, Operation, projection
from .polymorphisms import analysed_relations, enumerate_polymorphisms, is_fractional_polymorphism

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuppMembershipAnswer:
    """Whether an operation lies in supp(Gamma), with a certificate either way.
    A member comes with a fractional polymorphism giving it positive weight; a non-member with an instance I_f on
    the variables D^k (numbered by lexicographic rank) whose optimal assignments include every projection but
    not the operation itself."""

    operation: Operation
    member: bool
    witness_fpol: Optional[FractionalOperation] = None
    witness_instance: Optional[Instance] = None
    weight: Fraction = Fraction(0)
    violation: Optional[tuple] = None
    polymorphisms: int = 0


def _scope(rows: tuple, domain_size: int) -> tuple[int, ...]:
    """Variables of D^k read by the columns of k tuples."""
    return tuple(tuple_rank(column, domain_size) for column in zip(*rows))


def _value(phi: WeightedRelation, g: Operation, rows: tuple) -> Fraction:
    return phi(g.apply(rows)).fraction


class SupportTester(Workbench):
    """Decide f in supp(Gamma) with an exact LP over the k-ary polymorphisms."""

    def __init__(self, **kwargs) -> None:
        """Initialise class.
        :param **kwargs: caps accepted by Workbench"""
        super().__init__(**kwargs)
        self.solver = SimplexSolver(**self.caps())
        self._pol_cache: dict[tuple, list[Operation]] = {}
        self._method_kwargs = {
            "supp_membership": {"req_params": ["f", "language"]},
            "polymorphisms": {"req_params": ["language"], "ranges": {"arity": (1, None)}},
        }

    @method_params
    def polymorphisms(self, language: Language, arity: int = 1) -> list[Operation]:
        """pol(Gamma)^(k), cached per language and arity.
        :param language: Language object
        :param arity: k"""
        key = (language, arity)

        if key not in self._pol_cache:
            self._pol_cache[key] = list(enumerate_polymorphisms(language, arity, self.max_ops))

        return self._pol_cache[key]

    @method_params
    def supp_membership(self, f: Operation = None, language: Language = None) -> SuppMembershipAnswer:
        """Decide whether f lies in the support clone of a language.
        Maximises omega(f) over the fractional polymorphisms of arity k; f is a member iff the optimum is positive.
        Otherwise the duals of the averaging rows, scaled to integers, become the multiplicities of I_f.
        :param f: Operation object
        :param language: Language object"""
        if f.domain_size != language.domain_size:
            raise StructuralError(f"{f.name} is over {f.domain_size} labels, the language over {language.domain_size}")

        relations = analysed_relations(language)
        k = f.arity

        for phi in relations:
            for rows in product(phi.feasible, repeat=k):
                if f.apply(rows) not in phi.feasible_set:
                    LOG.debug("%s is not a polymorphism of %s", f.name, phi.name)
                    lifted = Constraint(phi.name, _scope(rows, f.domain_size))
                    witness = Instance(language, language.domain_size**k, (lifted,))

                    return SuppMembershipAnswer(f, False, witness_instance=witness, violation=(phi.name, rows))

        pols = self.polymorphisms(language, k)
        position = {g.table: j for j, g in enumerate(pols)}
        builder = LpBuilder(f"supp-{f.name}")

        for j in range(len(pols)):
            builder.add_variable(f"w{j}")

        row_keys, seen = [], set()

        for phi in relations:
            for rows in product(phi.feasible, repeat=k):
                average = sum((phi(row).fraction for row in rows), Fraction(0)) / k
                coefs = {j: _value(phi, g, rows) - average for j, g in enumerate(pols)}
                coefs = {j: c for j, c in coefs.items() if c != 0}
                key = tuple(sorted(coefs.items()))

                if not coefs or key in seen:
                    continue

                seen.add(key)
                builder.add_row(coefs, "<=", 0, f"avg{len(row_keys)}")
                row_keys.append((phi, rows))

        builder.add_row({j: 1 for j in range(len(pols))}, "=", 1, "sum1")
        builder.set_objective({position[f.table]: 1}, "max")
        outcome = self.solver.solve_lp(builder.build())
        LOG.debug(
            "supp LP for %s: %d polymorphisms, %d rows, max weight %s",
            f.name,
            len(pols),
            len(row_keys),
            outcome.objective,
        )

        if outcome.objective > 0:
            omega = FractionalOperation({pols[j]: w for j, w in enumerate(outcome.primal) if w > 0})

            if not is_fractional_polymorphism(omega, relations) or omega.weight(f) <= 0:
                raise ExactnessError(f"support witness for {f.name} failed its re-check")

            return SuppMembershipAnswer(f, True, witness_fpol=omega, weight=outcome.objective, polymorphisms=len(pols))

        z = integral_scaling([outcome.dual[r] for r in range(len(row_keys))])
        witness = self._witness_instance(f, language, pols, row_keys, z)

        return SuppMembershipAnswer(f, False, witness_instance=witness, polymorphisms=len(pols))

    def in_support(self, f: Operation, language: Language) -> bool:
        return self.supp_membership(f, language).member

    def _witness_instance(self, f: Operation, language: Language, pols: list, row_keys: list, z: list) -> Instance:
        """I_f over the variables D^k.
        Every vector of feasible tuples of a relation that is not finite-valued is also added once, so assignments
        outside pol(Gamma) are infeasible; when such relations are not crisp the dual part is multiplied by the
        least factor keeping the projections optimal among the polymorphisms."""
        d, k = language.domain_size, f.arity
        weighted = {(phi.name, rows): (phi, zr) for (phi, rows), zr in zip(row_keys, z) if zr > 0}
        forcing = {}

        for phi in analysed_relations(language):
            if not phi.is_finite_valued:
                for rows in product(phi.feasible, repeat=k):
                    forcing[(phi.name, rows)] = phi

        def dual_part(g: Operation) -> Fraction:
            return sum((zr * _value(phi, g, rows) for (_, rows), (phi, zr) in weighted.items()), Fraction(0))

        def forcing_part(g: Operation) -> Fraction:
            return sum((_value(phi, g, rows) for (_, rows), phi in forcing.items() if not phi.is_crisp), Fraction(0))

        base = projection(d, k, 0)
        factor = 1

        if any(not phi.is_crisp for phi in forcing.values()):
            a0, b0 = dual_part(base), forcing_part(base)

            for g in pols:
                da, db = dual_part(g) - a0, forcing_part(g) - b0

                if da == 0 and db < 0:
                    raise ExactnessError(f"no multiplicity keeps the projections optimal in the witness for {f.name}")

                if da > 0 and db <= 0:
                    need = floor(-db / da) + 1 if g == f else -(db // da)
                    factor = max(factor, int(need))

        constraints = []

        for key in sorted(set(weighted) | set(forcing), key=lambda key: (key[0], key[1])):
            count = factor * weighted[key][1] if key in weighted else 0
            count += 1 if key in forcing else 0
            constraints.extend([Constraint(key[0], _scope(key[1], d))] * count)

        witness = Instance(language, d**k, tuple(constraints))
        values = {witness.evaluate(projection(d, k, i).table) for i in range(k)}
        f_value = witness.evaluate(f.table)

        if len(values) != 1 or not f_value > next(iter(values)):
            raise ExactnessError(f"witness instance for {f.name} does not separate it from the projections")

        if d ** (d**k) <= self.max_assignments and brute_force(witness, self.max_assignments).value not in values:
            raise ExactnessError(f"the projections are not optimal in the witness instance for {f.name}")

        LOG.debug("witness instance for %s: %d constraints, factor %d", f.name, len(constraints), factor)
        return witness
