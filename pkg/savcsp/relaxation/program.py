import logging

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional

from ..algebra.polymorphisms import PAD_PREFIX
from ..lp import LinearProgram, LpBuilder, LpOutcome
from ..model import INF, Constraint, ExtRational, Instance, constant_relation
from ..utils import StructuralError, check_cap, format_fraction, tuples

LOG = logging.getLogger(__name__)


def pad_name(scope: tuple[int, ...]) -> str:
    return PAD_PREFIX + "_".join(map(str, scope))


@dataclass(frozen=True)
class SaTerm:
    """One term phi_i(S_i) of the padded instance, over its sorted distinct scope.
    'values' maps every tuple of D^{S_i} that keeps a lambda variable (finite value, consistent with the pins)
    to phi_i of it."""

    index: int
    relation: str
    scope: tuple[int, ...]
    values: Mapping[tuple[int, ...], Fraction]
    constraint: Optional[int] = None

    @property
    def is_padding(self) -> bool:
        return self.constraint is None

    def project(self, s: tuple[int, ...], sub: tuple[int, ...]) -> tuple[int, ...]:
        """pi_{S_j}(s) for a sub-scope S_j of S_i."""
        where = dict(zip(self.scope, s))
        return tuple(where[v] for v in sub)


@dataclass(frozen=True)
class SaProgram:
    """The SA(k,l) program of an instance: terms, the LP over lambda_i(s), and the meaning of every LP row.
    Rows are ('sum1', i) or ('marginal', i, j, t), the latter standing for
    sum_{pi_{S_j}(s) = t} lambda_i(s) = lambda_j(t)."""

    instance: Instance
    k: int
    l: int
    terms: tuple[SaTerm, ...]
    lp: LinearProgram
    columns: tuple[tuple[int, tuple[int, ...]], ...]
    rows: tuple[tuple, ...]
    pins: Mapping[int, int] = field(default_factory=dict)

    @property
    def domain_size(self) -> int:
        return self.instance.domain_size

    @cached_property
    def scope_index(self) -> dict[tuple[int, ...], list[int]]:
        """Every scope mapped to the indices of the terms over it."""
        return _scope_index(self.terms)

    def sub_terms(self, i: int) -> list[tuple[int, tuple[int, ...]]]:
        """(j, S_j) for every other term whose scope is a subset of S_i of size at most k."""
        return _sub_terms(self.terms, self.scope_index, i, self.k)


@dataclass(frozen=True)
class SaSolution:
    """A primal (and, when optimal, dual) solution of an SA program.
    'lambdas' holds the positive entries of lambda_i per term; 'z' one dual per term; 'y' the duals of the
    marginal rows keyed by (j, t, i)."""

    program: SaProgram
    status: str
    objective: ExtRational
    lambdas: tuple[Mapping[tuple[int, ...], Fraction], ...] = ()
    z: tuple[Fraction, ...] = ()
    y: Mapping[tuple, Fraction] = field(default_factory=dict)
    outcome: Optional[LpOutcome] = None
    iterations: int = 0

    @property
    def is_feasible(self) -> bool:
        return self.status in ("optimal", "feasible")

    @property
    def supports(self) -> tuple[frozenset, ...]:
        """supp(lambda_i) per term."""
        return tuple(frozenset(s for s, v in lam.items() if v > 0) for lam in self.lambdas)

    def dump(self) -> str:
        """Text rendering: 'term <i> scope <S>: <tuple> = p/q' per positive lambda entry, then the duals."""
        lines = [f"status {self.status}", f"objective {self.objective}"]

        for term, lam in zip(self.program.terms, self.lambdas):
            scope = " ".join(f"x{v}" for v in term.scope)

            for s in sorted(lam):
                if lam[s] > 0:
                    tup = " ".join(map(str, s))
                    lines.append(f"term {term.index} scope {scope}: {tup} = {format_fraction(lam[s])}")

        for i, zi in enumerate(self.z):
            lines.append(f"z {i} = {format_fraction(zi)}")

        for (j, t, i), value in sorted(self.y.items()):
            if value:
                lines.append(f"y {j} {' '.join(map(str, t))} {i} = {format_fraction(value)}")

        return "\n".join(lines) + "\n"


def _scope_index(terms) -> dict[tuple[int, ...], list[int]]:
    index = defaultdict(list)

    for term in terms:
        index[term.scope].append(term.index)

    return dict(index)


def _sub_terms(terms, index, i: int, k: int) -> list[tuple[int, tuple[int, ...]]]:
    term, result = terms[i], []

    for size in range(1, min(k, len(term.scope)) + 1):
        for sub in combinations(term.scope, size):
            result.extend((j, sub) for j in index.get(sub, ()) if j != i)

    return result


def objective_of(program: SaProgram, lambdas) -> ExtRational:
    """sum_i sum_s lambda_i(s) phi_i(s); infinite when lambda puts weight on an eliminated tuple."""
    total = Fraction(0)

    for term, lam in zip(program.terms, lambdas):
        for s, w in lam.items():
            if w == 0:
                continue

            if s not in term.values:
                return INF

            total += w * term.values[s]

    return ExtRational(total)


def build_program(instance: Instance, k: int, l: int, pins: Mapping[int, int], max_padding: int) -> SaProgram:
    """Construct the SA(k,l) program.
    Constraint scopes are normalised to sorted distinct variables; every nonempty S of size at most l that is not
    yet a scope gets a constant-0 padding term '__pad_<S>'; tuples outside feas(phi_i) or against a pin get no
    variable.
    :param instance: Instance object
    :param k: size bound of the marginal sub-scopes
    :param l: size bound of the padded scopes
    :param pins: variable -> label assignments enforced by elimination
    :param max_padding: cap on the number of padding terms"""
    d, n = instance.domain_size, instance.num_vars

    for v, label in pins.items():
        if not 0 <= v < n or not 0 <= label < d:
            raise StructuralError(f"pin x{v} = {label} is outside the instance")

    def allowed(scope, s) -> bool:
        return all(pins.get(v, label) == label for v, label in zip(scope, s))

    terms = []

    for pos, c in enumerate(instance.constraints):
        rel = instance.relation_of(c)
        scope = tuple(sorted(set(c.scope)))
        values = {}

        for s in tuples(d, len(scope)):
            if not allowed(scope, s):
                continue

            where = dict(zip(scope, s))
            value = rel(tuple(where[v] for v in c.scope))

            if value.is_finite:
                values[s] = value.fraction

        terms.append(SaTerm(len(terms), c.relation, scope, values, pos))

    present = {term.scope for term in terms}
    missing = [s for size in range(1, l + 1) for s in combinations(range(n), size) if s not in present]
    check_cap(len(missing), max_padding, "padding terms")
    padding = [constant_relation(pad_name(scope), d, len(scope)) for scope in missing]

    for scope in missing:
        values = {s: Fraction(0) for s in tuples(d, len(scope)) if allowed(scope, s)}
        terms.append(SaTerm(len(terms), pad_name(scope), scope, values, None))

    padded = Instance(
        instance.language.union(padding),
        n,
        (*instance.constraints, *(Constraint(pad_name(scope), scope) for scope in missing)),
    )

    builder = LpBuilder(f"sa{k}{l}")
    column_of, columns = {}, []

    for term in terms:
        for s in term.values:
            column_of[(term.index, s)] = builder.add_variable(f"lam{term.index}[{','.join(map(str, s))}]")
            columns.append((term.index, s))

    rows = []

    for term in terms:
        builder.add_row({column_of[(term.index, s)]: 1 for s in term.values}, "=", 1, f"sum{term.index}")
        rows.append(("sum1", term.index))

    index = _scope_index(terms)

    for term in terms:
        for j, sub in _sub_terms(terms, index, term.index, k):
            grouped = defaultdict(list)

            for s in term.values:
                grouped[term.project(s, sub)].append(column_of[(term.index, s)])

            for t in tuples(d, len(sub)):
                coefs = {col: 1 for col in grouped.get(t, ())}

                if (j, t) in column_of:
                    coefs[column_of[(j, t)]] = -1

                if coefs:
                    builder.add_row(coefs, "=", 0, f"m{term.index}_{j}_{''.join(map(str, t))}")
                    rows.append(("marginal", term.index, j, t))

    builder.set_objective({column_of[(term.index, s)]: v for term in terms for s, v in term.values.items()}, "min")
    LOG.debug("SA(%d,%d): %d terms, %d padding", k, l, len(terms), len(missing))
    LOG.debug("SA(%d,%d): %d variables, %d rows", k, l, len(columns), len(rows))

    return SaProgram(padded, k, l, tuple(terms), builder.build(), tuple(columns), tuple(rows), dict(pins))
