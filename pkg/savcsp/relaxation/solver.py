import logging

from collections import defaultdict
from dataclasses import replace
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .. import Workbench
from ..algebra import FractionalOperation, Operation, SupportTester
from ..algebra.polymorphisms import analysed_relations
from ..decorators import method_params
from ..lp import SimplexSolver, verify_certificate
from ..model import INF, Instance, Language, assignment_values
from ..utils import ExactnessError, StructuralError, check_cap, make_rng
from .program import SaProgram, SaSolution, build_program, objective_of

LOG = logging.getLogger(__name__)


class DualSum(NamedTuple):
    """The quantities summed over all terms for an assignment sigma: sum_i z_i, sum_i phi_i(sigma(S_i)) and the
    y contributions, which cancel out whenever every dual row at sigma is tight. The last two are None when sigma
    is infeasible."""

    z_total: Fraction
    value: Optional[Fraction]
    telescope: Optional[Fraction]


class Relaxation(Workbench):
    """Build and solve SA(k,l) programs and manipulate their solutions exactly."""

    def __init__(self, **kwargs) -> None:
        """Initialise class.
        :param **kwargs: caps accepted by Workbench"""
        super().__init__(**kwargs)
        self.solver = SimplexSolver(**self.caps())
        self._method_kwargs = {
            "build_sa": {
                "req_params": ["instance"],
                "ranges": {"k": (1, "MAX_SA_LEVEL"), "l": (1, "MAX_SA_LEVEL")},
                "ordered": [("k", "l")],
            },
            "random_feasible_solution": {"req_params": ["program"], "ranges": {"seed": (0, None), "mix": (1, None)}},
        }

    @method_params
    def build_sa(
        self, instance: Instance = None, k: int = Workbench.DEFAULT_K, l: int = Workbench.DEFAULT_L, pins=None
    ) -> SaProgram:
        """Construct the SA(k,l) program of an instance.
        :param instance: Instance object
        :param k: size bound of the marginal sub-scopes
        :param l: size bound of the padded scopes
        :param pins: optional variable -> label assignments"""
        return build_program(instance, k, l, dict(pins or {}), self.MAX_PADDING_TERMS)

    def solve_sa(self, program: SaProgram) -> SaSolution:
        """Solve an SA program exactly; the duals come back as z (one per term) and y (one per marginal row).
        :param program: SaProgram object"""
        outcome = self.solver.solve_lp(program.lp)

        if not verify_certificate(program.lp, outcome):
            raise ExactnessError(f"certificate of {program.lp.name!r} failed its exact re-check")

        if outcome.status == "infeasible":
            LOG.info("SA(%d,%d) infeasible", program.k, program.l)
            return SaSolution(program, "infeasible", INF, outcome=outcome)

        if outcome.status != "optimal":
            raise ExactnessError(f"SA program reported {outcome.status}")

        lambdas = [dict() for _ in program.terms]

        for (i, s), value in zip(program.columns, outcome.primal):
            if value:
                lambdas[i][s] = value

        z, y = [Fraction(0)] * len(program.terms), {}

        for row, dual in zip(program.rows, outcome.dual):
            if row[0] == "sum1":
                z[row[1]] = dual
            else:
                _, i, j, t = row
                y[(j, t, i)] = dual

        solution = SaSolution(
            program, "optimal", objective_of(program, lambdas), tuple(lambdas), tuple(z), y, outcome=outcome
        )
        LOG.info("SA(%d,%d) optimum %s after %d pivots", program.k, program.l, solution.objective, outcome.pivots)

        return solution

    def apply_fractional(self, solution: SaSolution, omega: FractionalOperation) -> SaSolution:
        """lambda^omega_i(s) = Pr_{f ~ omega, s_1..s_m ~ lambda_i}[f(s_1, ..., s_m) = s] for every term.
        :param solution: a feasible SaSolution
        :param omega: a fractional polymorphism of the instance's language"""
        if not solution.is_feasible:
            raise StructuralError("apply_fractional needs a feasible solution")

        m, support = omega.arity, list(omega.items())
        work = sum(len([v for v in lam.values() if v > 0]) ** m for lam in solution.lambdas) * len(support)
        check_cap(work, self.max_expectation_terms, "apply_fractional expectation")
        result = []

        for lam in solution.lambdas:
            entries = [(s, v) for s, v in lam.items() if v > 0]
            image = defaultdict(Fraction)

            for picks in product(entries, repeat=m):
                mass = Fraction(1)

                for _, v in picks:
                    mass *= v

                rows = [s for s, _ in picks]

                for f, w in support:
                    image[f.apply(rows)] += w * mass

            result.append(dict(image))

        return SaSolution(solution.program, "feasible", objective_of(solution.program, result), tuple(result))

    def saturate_support(
        self,
        solution: SaSolution,
        ops: Iterable[Operation],
        witnesses: Optional[Mapping[Operation, FractionalOperation]] = None,
    ) -> SaSolution:
        """Average lambda with lambda^omega until every support supp(lambda_i) is closed under the given operations.
        Each operation needs a fractional polymorphism giving it positive weight; missing ones are obtained from the
        support LP of the source language.
        :param solution: an optimal SaSolution
        :param ops: operations of the support clone
        :param witnesses: optional operation -> witness fractional polymorphism mapping"""
        ops = list(ops)
        witnesses = dict(witnesses or {})

        for op in ops:
            if op not in witnesses:
                witnesses[op] = self._witness(op, solution.program)

            if witnesses[op].weight(op) <= 0:
                raise StructuralError(f"the witness given for {op.name} does not give it positive weight")

        bound = sum(len(term.values) for term in solution.program.terms)
        current, iterations = solution, 0

        while True:
            op = next((op for op in ops if not _closed_under(current, op)), None)

            if op is None:
                break

            if iterations > bound:
                raise ExactnessError("support saturation did not reach a fixpoint")

            image = self.apply_fractional(current, witnesses[op])
            lambdas = tuple(_average(a, b) for a, b in zip(current.lambdas, image.lambdas))
            current = replace(current, lambdas=lambdas, objective=objective_of(current.program, lambdas))
            iterations += 1

        LOG.debug("support saturated after %d averaging steps", iterations)

        return replace(current, iterations=iterations)

    def _witness(self, op: Operation, program: SaProgram) -> FractionalOperation:
        tester = SupportTester(**self.caps())
        answer = tester.supp_membership(op, source_language(program.instance))

        if not answer.member:
            raise StructuralError(f"{op.name} is not in the support clone of the language")

        return answer.witness_fpol

    def dual_sum(self, solution: SaSolution, sigma: Sequence[int]) -> DualSum:
        """sum_i z_i, sum_i phi_i(sigma(S_i)) and the y-terms of the dual rows at sigma, summed over all terms.
        :param solution: an optimal SaSolution
        :param sigma: assignment of all variables"""
        program = solution.program
        z_total, value, telescope = sum(solution.z, Fraction(0)), Fraction(0), Fraction(0)

        for term in program.terms:
            s = tuple(sigma[v] for v in term.scope)
            phi = term.values.get(s)

            if phi is None:
                return DualSum(z_total, None, None)

            value += phi
            telescope += _y_terms(solution, term.index, s)

        return DualSum(z_total, value, telescope)

    def check_complementary_slackness(self, solution: SaSolution, sigma: Sequence[int]) -> bool:
        """True iff sigma(S_i) keeps a lambda variable in every term, the dual row at (i, sigma(S_i)) is tight for
        every term (so in particular for those with lambda_i(sigma(S_i)) > 0) and sum_i z_i = sum_i phi_i(sigma(S_i)).
        Dual feasibility makes every such row slack by a nonnegative amount, so the rows are all tight exactly when
        sigma reaches the relaxation optimum.
        :param solution: an optimal SaSolution with duals
        :param sigma: assignment of all variables"""
        program = solution.program

        if solution.status != "optimal" or len(sigma) != program.instance.num_vars:
            return False

        for term in program.terms:
            s = tuple(sigma[v] for v in term.scope)

            if s not in term.values:
                LOG.debug("slackness: %s is not a feasible tuple of term %d", s, term.index)
                return False

            reduced = term.values[s] - solution.z[term.index] - _y_terms(solution, term.index, s)

            if reduced != 0:
                LOG.debug("slackness: dual row (%d, %s) has slack %s", term.index, s, reduced)
                return False

        sums = self.dual_sum(solution, sigma)

        return sums.z_total == sums.value and sums.telescope == 0

    def is_feasible_solution(self, program: SaProgram, lambdas: Sequence[Mapping[tuple, Fraction]]) -> bool:
        """Re-check every SA constraint exactly for the given lambda: nonnegativity, support on allowed tuples,
        sums of one and marginal agreement.
        :param program: SaProgram object
        :param lambdas: one tuple -> weight mapping per term"""
        if len(lambdas) != len(program.terms):
            return False

        for term, lam in zip(program.terms, lambdas):
            if any(v < 0 for v in lam.values()):
                return False

            if any(v > 0 and s not in term.values for s, v in lam.items()):
                return False

            if sum(lam.values(), Fraction(0)) != 1:
                return False

        for term, lam in zip(program.terms, lambdas):
            for j, sub in program.sub_terms(term.index):
                marginal = defaultdict(Fraction)

                for s, v in lam.items():
                    marginal[term.project(s, sub)] += v

                keys = set(marginal) | set(lambdas[j])

                if any(marginal.get(t, 0) != lambdas[j].get(t, 0) for t in keys):
                    return False

        return True

    @method_params
    def random_feasible_solution(
        self, program: SaProgram = None, seed: int = 0, mix: int = 3
    ) -> Optional[SaSolution]:
        """A random convex combination of point masses of satisfying assignments of the padded instance.
        Returns None when no satisfying assignment exists.
        :param program: SaProgram object
        :param seed: PRNG seed
        :param mix: number of assignments mixed"""
        rng = make_rng(seed)
        pins = program.pins
        feasible = [
            a
            for a, value in assignment_values(program.instance, self.max_assignments)
            if value.is_finite and all(a[v] == label for v, label in pins.items())
        ]

        if not feasible:
            return None

        picks = rng.choice(len(feasible), size=min(mix, len(feasible)), replace=False)
        weights = [int(w) for w in rng.integers(1, 10, size=len(picks))]
        total = sum(weights)
        lambdas = [defaultdict(Fraction) for _ in program.terms]

        for pick, w in zip(picks, weights):
            sigma = feasible[int(pick)]

            for term in program.terms:
                lambdas[term.index][tuple(sigma[v] for v in term.scope)] += Fraction(w, total)

        lambdas = tuple(dict(lam) for lam in lambdas)

        return SaSolution(program, "feasible", objective_of(program, lambdas), lambdas)


def source_language(instance: Instance) -> Language:
    """The language of an instance without its padding relations."""
    return Language(instance.domain_size, analysed_relations(instance.language))


def _y_terms(solution: SaSolution, i: int, s: tuple) -> Fraction:
    """sum_{S_j in S_i} y_{j, pi(s), i} - sum_{S_i in S_m} y_{i, s, m}: the y part of the dual row (i, s)."""
    program, y, total = solution.program, solution.y, Fraction(0)
    term = program.terms[i]

    for j, sub in program.sub_terms(i):
        total += y.get((j, term.project(s, sub), i), 0)

    for m in program.terms:
        if m.index != i and set(term.scope) <= set(m.scope) and len(term.scope) <= program.k:
            total -= y.get((i, s, m.index), 0)

    return total


def _closed_under(solution: SaSolution, op: Operation) -> bool:
    for support in solution.supports:
        entries = list(support)

        for rows in product(entries, repeat=op.arity):
            if op.apply(rows) not in support:
                return False

    return True


def _average(a: Mapping[tuple, Fraction], b: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
    keys = set(a) | set(b)

    return {s: (a.get(s, 0) + b.get(s, 0)) / 2 for s in keys}
