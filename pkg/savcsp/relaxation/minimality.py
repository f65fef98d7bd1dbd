import logging

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Optional

from .. import Workbench
from ..model import Instance
from ..utils import StructuralError, check_cap, tuples
from .program import SaSolution

LOG = logging.getLogger(__name__)

Scope = tuple[int, ...]


@dataclass(frozen=True)
class CrispNetwork:
    """A crisp constraint network (V, D, {(S_i, C_i)}): each scope is a sorted tuple of distinct variables and each
    C_i a set of tuples over it. Scopes may repeat."""

    num_vars: int
    domain_size: int
    constraints: tuple[tuple[Scope, frozenset], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for scope, allowed in self.constraints:
            if list(scope) != sorted(set(scope)) or any(not 0 <= v < self.num_vars for v in scope):
                raise StructuralError(f"scope {scope} is not a sorted tuple of distinct variables")

            if any(len(s) != len(scope) or any(not 0 <= a < self.domain_size for a in s) for s in allowed):
                raise StructuralError(f"constraint on {scope} holds a tuple outside D^S")

    @property
    def is_empty(self) -> bool:
        """True for the EMPTY network: some constraint admits no tuple."""
        return any(not allowed for _, allowed in self.constraints)

    @property
    def scopes(self) -> set[Scope]:
        return {scope for scope, _ in self.constraints}

    def solutions(self, max_assignments: int = Workbench.MAX_ASSIGNMENTS) -> Iterator[tuple[int, ...]]:
        """Every assignment satisfying all constraints, in lexicographic order.
        :param max_assignments: cap on d^n"""
        check_cap(self.domain_size**self.num_vars, max_assignments, "enumerating network solutions")

        for sigma in product(range(self.domain_size), repeat=self.num_vars):
            if all(tuple(sigma[v] for v in scope) in allowed for scope, allowed in self.constraints):
                yield sigma

    @classmethod
    def from_instance(cls, instance: Instance) -> "CrispNetwork":
        """feas(phi_i) of every constraint, re-indexed over its sorted distinct scope."""
        constraints = []

        for c in instance.constraints:
            rel = instance.relation_of(c)
            scope = tuple(sorted(set(c.scope)))
            allowed = set()

            for s in tuples(instance.domain_size, len(scope)):
                where = dict(zip(scope, s))

                if rel(tuple(where[v] for v in c.scope)).is_finite:
                    allowed.add(s)

            constraints.append((scope, frozenset(allowed)))

        return cls(instance.num_vars, instance.domain_size, tuple(constraints))

    @classmethod
    def from_solution(cls, solution: SaSolution) -> "CrispNetwork":
        """The support structure (S_i, supp(lambda_i)) of an SA solution."""
        program = solution.program
        constraints = tuple((term.scope, support) for term, support in zip(program.terms, solution.supports))

        return cls(program.instance.num_vars, program.domain_size, constraints)


def _project(s: tuple, scope: Scope, sub: Scope) -> tuple:
    where = dict(zip(scope, s))
    return tuple(where[v] for v in sub)


def _pairs(constraints: list, k: int) -> list[tuple[int, int]]:
    """(i, j) with S_j a subset of S_i of size at most k, i != j, by ascending scope index."""
    index = {}

    for j, (scope, _) in enumerate(constraints):
        index.setdefault(scope, []).append(j)

    pairs = []

    for i, (scope, _) in enumerate(constraints):
        for size in range(1, min(k, len(scope)) + 1):
            for sub in combinations(scope, size):
                pairs.extend((i, j) for j in index.get(sub, ()) if j != i)

    return pairs


def _padded(network: CrispNetwork, l: int, max_padding: int) -> list[tuple[Scope, frozenset]]:
    present = network.scopes
    missing = [s for size in range(1, l + 1) for s in combinations(range(network.num_vars), size) if s not in present]
    check_cap(len(missing), max_padding, "padding scopes")
    full = [(scope, frozenset(tuples(network.domain_size, len(scope)))) for scope in missing]

    return list(network.constraints) + full


def establish_minimality(
    network: CrispNetwork,
    k: int = Workbench.DEFAULT_K,
    l: int = Workbench.DEFAULT_L,
    max_padding: Optional[int] = None,
) -> CrispNetwork:
    """Compute an equivalent (k,l)-minimal network by pruning to a fixpoint.
    Missing scopes of size at most l are added with the full D^S; then, for every S_j within S_i with |S_j| <= k,
    C_j is intersected with the projection of C_i and C_i is restricted to tuples projecting into C_j, until nothing
    changes or some constraint becomes empty.
    :param network: CrispNetwork object
    :param k: size bound of the compared sub-scopes
    :param l: size bound of the padded scopes
    :param max_padding: cap on the number of added scopes"""
    if not 1 <= k <= l:
        raise ValueError(f"establish_minimality() needs 1 <= k <= l, got k={k}, l={l}")

    constraints = _padded(network, l, max_padding or Workbench.MAX_PADDING_TERMS)
    pairs, sweeps, changed = _pairs(constraints, k), 0, True

    while changed and all(allowed for _, allowed in constraints):
        changed, sweeps = False, sweeps + 1

        for i, j in pairs:
            (scope_i, c_i), (scope_j, c_j) = constraints[i], constraints[j]
            projected = {_project(s, scope_i, scope_j) for s in c_i}
            new_j = c_j & projected
            new_i = frozenset(s for s in c_i if _project(s, scope_i, scope_j) in new_j)

            if new_j != c_j or new_i != c_i:
                constraints[i], constraints[j] = (scope_i, new_i), (scope_j, new_j)
                changed = True

            if not new_i or not new_j:
                break

        LOG.debug("minimality sweep %d: %d tuples left", sweeps, sum(len(c) for _, c in constraints))

    result = CrispNetwork(network.num_vars, network.domain_size, tuple(constraints))
    LOG.debug("(%d,%d)-minimality after %d sweeps: %s", k, l, sweeps, "EMPTY" if result.is_empty else "nonempty")

    return result


def is_minimal(network: CrispNetwork, k: int = Workbench.DEFAULT_K, l: int = Workbench.DEFAULT_L) -> bool:
    """True iff every nonempty S of size at most l is a scope and C_j equals the projection of C_i whenever S_j is
    a subset of S_i of size at most k.
    :param network: CrispNetwork object
    :param k: size bound of the compared sub-scopes
    :param l: size bound of the required scopes"""
    present = network.scopes

    for size in range(1, l + 1):
        if any(s not in present for s in combinations(range(network.num_vars), size)):
            return False

    constraints = list(network.constraints)

    for i, j in _pairs(constraints, k):
        (scope_i, c_i), (scope_j, c_j) = constraints[i], constraints[j]

        if {_project(s, scope_i, scope_j) for s in c_i} != set(c_j):
            return False

    return True
