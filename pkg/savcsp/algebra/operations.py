import logging

from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Optional, Sequence

from ..utils import StructuralError, check_cap, tuple_rank, tuples

LOG = logging.getLogger(__name__)


class Operation:
    """A k-ary operation D^k -> D stored as a dense table in lexicographic argument order."""

    def __init__(self, arity: int, domain_size: int, table: Sequence[int], name: Optional[str] = None) -> None:
        """Initialise class.
        :param arity: number of arguments, at least 1
        :param domain_size: number of labels
        :param table: results for every argument tuple of D^k in lexicographic order
        :param name: optional display name"""
        if arity < 1:
            raise StructuralError(f"operation arity must be at least 1, got {arity}")

        table = tuple(table)

        if len(table) != domain_size**arity:
            raise StructuralError(f"operation table has {len(table)} entries, expecting {domain_size}^{arity}")

        if any(not 0 <= v < domain_size for v in table):
            raise StructuralError("operation table has a result outside the domain")

        self.arity = arity
        self.domain_size = domain_size
        self.table = table
        self.name = name or f"f{arity}_{tuple_rank(table, domain_size)}"

    @classmethod
    def from_function(cls, arity: int, domain_size: int, fn: Callable[..., int], name: Optional[str] = None):
        """Tabulate a Python callable.
        :param arity: number of arguments
        :param domain_size: number of labels
        :param fn: callable taking 'arity' labels
        :param name: optional display name"""
        return cls(arity, domain_size, [fn(*args) for args in tuples(domain_size, arity)], name)

    def __call__(self, *args: int) -> int:
        return self.table[tuple_rank(args, self.domain_size)]

    def apply(self, rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """Coordinatewise application to k tuples of equal length m.
        :param rows: k tuples x_1..x_k; the result is (f(x_1[1],...,x_k[1]), ..., f(x_1[m],...,x_k[m]))"""
        if len(rows) != self.arity:
            raise StructuralError(f"{self.name} takes {self.arity} tuples, got {len(rows)}")

        return tuple(self(*column) for column in zip(*rows))

    @property
    def is_idempotent(self) -> bool:
        return all(self(*([x] * self.arity)) == x for x in range(self.domain_size))

    @property
    def is_conservative(self) -> bool:
        return all(self.table[i] in args for i, args in enumerate(tuples(self.domain_size, self.arity)))

    @property
    def is_commutative(self) -> bool:
        """Invariant under every permutation of the arguments."""
        return all(self(*args) == self(*sorted(args)) for args in tuples(self.domain_size, self.arity))

    @property
    def is_bijective(self) -> bool:
        return self.arity == 1 and len(set(self.table)) == self.domain_size

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.table)))

    def renamed(self, name: str) -> "Operation":
        return Operation(self.arity, self.domain_size, self.table, name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operation):
            return NotImplemented

        return (self.arity, self.domain_size, self.table) == (other.arity, other.domain_size, other.table)

    def __hash__(self) -> int:
        return hash((self.arity, self.domain_size, self.table))

    def __lt__(self, other: "Operation") -> bool:
        return (self.arity, self.table) < (other.arity, other.table)

    def __repr__(self) -> str:
        return f"Operation({self.name!r}, k={self.arity}, d={self.domain_size})"


class FractionalOperation:
    """A probability distribution over k-ary operations with exact rational weights."""

    def __init__(self, weights: Mapping[Operation, Fraction] | Iterable[tuple[Operation, Fraction]]) -> None:
        """Initialise class; repeated operations have their weights merged.
        :param weights: mapping or pairs of Operation to positive rational weight; weights must sum to 1"""
        pairs = weights.items() if isinstance(weights, Mapping) else weights
        merged: dict[Operation, Fraction] = {}

        for op, w in pairs:
            w = Fraction(w)

            if w <= 0:
                raise StructuralError(f"weight {w} of {op.name} is not positive")

            merged[op] = merged.get(op, Fraction(0)) + w

        if not merged:
            raise StructuralError("a fractional operation needs at least one operation")

        first = next(iter(merged))

        if any(op.arity != first.arity or op.domain_size != first.domain_size for op in merged):
            raise StructuralError("all operations of a fractional operation must share arity and domain")

        if sum(merged.values()) != 1:
            raise StructuralError(f"weights sum to {sum(merged.values())}, not 1")

        self._weights = dict(sorted(merged.items(), key=lambda item: item[0].table))
        self.arity = first.arity
        self.domain_size = first.domain_size

    @classmethod
    def point_mass(cls, op: Operation) -> "FractionalOperation":
        return cls({op: Fraction(1)})

    @property
    def support(self) -> tuple[Operation, ...]:
        """supp(omega): the operations with positive weight."""
        return tuple(self._weights)

    def weight(self, op: Operation) -> Fraction:
        return self._weights.get(op, Fraction(0))

    def items(self):
        return self._weights.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FractionalOperation):
            return NotImplemented

        return self._weights == other._weights

    def __hash__(self) -> int:
        return hash(frozenset(self._weights.items()))

    def __repr__(self) -> str:
        parts = ", ".join(f"{w}*{op.name}" for op, w in self._weights.items())
        return f"FractionalOperation({parts})"


def projection(domain_size: int, arity: int, index: int) -> Operation:
    """proj^(k)_i with a 0-based coordinate index.
    :param domain_size: number of labels
    :param arity: k
    :param index: returned coordinate, 0 <= index < k"""
    if not 0 <= index < arity:
        raise StructuralError(f"projection index {index} outside 0..{arity - 1}")

    return Operation.from_function(arity, domain_size, lambda *xs: xs[index], f"proj{arity}_{index}")


def projections(domain_size: int, arity: int) -> list[Operation]:
    return [projection(domain_size, arity, i) for i in range(arity)]


def tau(domain_size: int, arity: int) -> FractionalOperation:
    """tau_k: the uniform distribution over the k-ary projections, a fractional polymorphism of every language.
    :param domain_size: number of labels
    :param arity: k"""
    return FractionalOperation({p: Fraction(1, arity) for p in projections(domain_size, arity)})


def constant(domain_size: int, label: int) -> Operation:
    return Operation(1, domain_size, [label] * domain_size, f"const{label}")


def identity(domain_size: int) -> Operation:
    return Operation(1, domain_size, range(domain_size), "id")


def min_op(domain_size: int = 2, arity: int = 2) -> Operation:
    """Minimum under the order 0 < 1 < ... < d-1.
    :param domain_size: number of labels
    :param arity: number of arguments"""
    return Operation.from_function(arity, domain_size, lambda *xs: min(xs), "min" if arity == 2 else f"min{arity}")


def max_op(domain_size: int = 2, arity: int = 2) -> Operation:
    """Maximum under the order 0 < 1 < ... < d-1.
    :param domain_size: number of labels
    :param arity: number of arguments"""
    return Operation.from_function(arity, domain_size, lambda *xs: max(xs), "max" if arity == 2 else f"max{arity}")


def majority(domain_size: int = 2, fallback: int = 0) -> Operation:
    """Ternary majority; on three distinct arguments it returns the argument at position 'fallback'.
    :param domain_size: number of labels
    :param fallback: coordinate used when no value repeats"""

    def fn(x, y, z):
        if x == y or x == z:
            return x

        return y if y == z else (x, y, z)[fallback]

    return Operation.from_function(3, domain_size, fn, "majority" if fallback == 0 else f"majority{fallback}")


def minority(domain_size: int = 2, fallback: int = 0) -> Operation:
    """Ternary minority: m(x,x,y) = m(x,y,x) = m(y,x,x) = y; on three distinct arguments it returns the argument
    at position 'fallback'. On the Boolean domain this is x xor y xor z.
    :param domain_size: number of labels
    :param fallback: coordinate used when no value repeats"""

    def fn(x, y, z):
        if x == y:
            return z

        if x == z:
            return y

        return x if y == z else (x, y, z)[fallback]

    return Operation.from_function(3, domain_size, fn, "minority" if fallback == 0 else f"minority{fallback}")


def tournament(domain_size: int, winners: Mapping[tuple[int, int], int], name: str = "tournament") -> Operation:
    """A binary conservative commutative operation given by the winner of every pair {x, y}.
    :param domain_size: number of labels
    :param winners: mapping of (x, y) with x < y to the label returned
    :param name: display name"""

    def fn(x, y):
        if x == y:
            return x

        return winners[(min(x, y), max(x, y))]

    return Operation.from_function(2, domain_size, fn, name)


def tournaments(domain_size: int) -> list[Operation]:
    """Every tournament operation on D, in lexicographic table order."""
    pairs = [(x, y) for x in range(domain_size) for y in range(x + 1, domain_size)]
    ops = []

    for choice in product((0, 1), repeat=len(pairs)):
        winners = {pair: pair[c] for pair, c in zip(pairs, choice)}
        ops.append(tournament(domain_size, winners, f"tournament{len(ops)}"))

    return sorted(ops, key=lambda op: op.table)


def compose(f: Operation, gs: Sequence[Operation]) -> Operation:
    """f[g_1, ..., g_k](x_1..x_l) = f(g_1(x_1..x_l), ..., g_k(x_1..x_l)).
    :param f: k-ary outer operation
    :param gs: k inner operations sharing one arity l"""
    if len(gs) != f.arity:
        raise StructuralError(f"{f.name} has arity {f.arity}, got {len(gs)} inner operations")

    if len({g.arity for g in gs}) != 1 or any(g.domain_size != f.domain_size for g in gs):
        raise StructuralError("inner operations must share one arity and the outer operation's domain")

    table = [f(*column) for column in zip(*(g.table for g in gs))]
    return Operation(gs[0].arity, f.domain_size, table, f"{f.name}[{','.join(g.name for g in gs)}]")


def compose_fractional(
    omega: FractionalOperation, mus: Sequence[FractionalOperation], max_terms: int = 10_000_000
) -> FractionalOperation:
    """omega'(p) = Pr[t[h_1..h_k] = p] for t ~ omega and independent h_i ~ mu_i.
    :param omega: k-ary fractional operation
    :param mus: k fractional operations of a common arity l
    :param max_terms: cap on the number of combinations enumerated"""
    if len(mus) != omega.arity:
        raise StructuralError(f"need {omega.arity} inner fractional operations, got {len(mus)}")

    size = len(omega.support)

    for mu in mus:
        size *= len(mu.support)

    check_cap(size, max_terms, "composing fractional operations")
    weights: dict[Operation, Fraction] = {}

    for t, wt in omega.items():
        for combo in product(*(mu.items() for mu in mus)):
            p = compose(t, [h for h, _ in combo])
            w = wt

            for _, wh in combo:
                w *= wh

            weights[p] = weights.get(p, Fraction(0)) + w

    return FractionalOperation(weights)


def majority_from_stp(f: Operation, g: Operation) -> Operation:
    """h(x,y,z) = f(f(g(x,y), g(x,z)), g(y,z)); a majority when f, g are tournament operations
    with f(x,y) != g(x,y) for x != y.
    :param f: binary operation
    :param g: binary operation"""
    return Operation.from_function(3, f.domain_size, lambda x, y, z: f(f(g(x, y), g(x, z)), g(y, z)), "stp-majority")


def majority_from_stp_mjn(f: Operation, g: Operation, h1: Operation, h2: Operation, h3: Operation) -> Operation:
    """q(x,y,z) = p(h1(x,y,z), h2(x,y,z), h3(x,y,z)) with p(x,y,z) = f(f(g(y,x), g(x,z)), g(y,z)).
    A majority when (f, g) is an STP on some two-element subsets and (h1, h2, h3) an MJN on the others.
    :param f: binary operation
    :param g: binary operation
    :param h1: ternary operation
    :param h2: ternary operation
    :param h3: ternary operation"""

    def p(x, y, z):
        return f(f(g(y, x), g(x, z)), g(y, z))

    def q(x, y, z):
        return p(h1(x, y, z), h2(x, y, z), h3(x, y, z))

    return Operation.from_function(3, f.domain_size, q, "stp-mjn-majority")


def is_majority(f: Operation) -> bool:
    if f.arity != 3:
        return False

    d = f.domain_size
    return all(f(x, x, y) == f(x, y, x) == f(y, x, x) == x for x in range(d) for y in range(d))


def is_minority(f: Operation) -> bool:
    if f.arity != 3:
        return False

    d = f.domain_size
    return all(f(x, x, y) == f(x, y, x) == f(y, x, x) == y for x in range(d) for y in range(d))


def is_tournament(f: Operation) -> bool:
    return f.arity == 2 and f.is_conservative and f.is_commutative


def is_stp(f: Operation, g: Operation) -> bool:
    """Two tournament operations that disagree on every pair of distinct labels."""
    d = f.domain_size
    distinct = all(f(x, y) != g(x, y) for x in range(d) for y in range(d) if x != y)

    return is_tournament(f) and is_tournament(g) and distinct


def submodular(domain_size: int = 2) -> FractionalOperation:
    """1/2 min + 1/2 max; on the Boolean domain also a symmetric tournament pair."""
    return FractionalOperation({min_op(domain_size): Fraction(1, 2), max_op(domain_size): Fraction(1, 2)})


def majority_minority(domain_size: int = 2) -> FractionalOperation:
    """2/3 majority + 1/3 minority."""
    return FractionalOperation({majority(domain_size): Fraction(2, 3), minority(domain_size): Fraction(1, 3)})


def mjn(domain_size: int = 2) -> FractionalOperation:
    """1/3 each of two majorities and a minority; the majorities differ on distinct arguments when d >= 3."""
    ops = [majority(domain_size, 0), majority(domain_size, 1), minority(domain_size, 2)]
    return FractionalOperation([(op, Fraction(1, 3)) for op in ops])


def tournament_pair(f: Operation, g: Operation) -> FractionalOperation:
    """1/2 f + 1/2 g for two tournament operations.
    :param f: tournament operation
    :param g: tournament operation"""
    if not (is_tournament(f) and is_tournament(g)):
        raise StructuralError("a tournament pair needs two binary conservative commutative operations")

    return FractionalOperation([(f, Fraction(1, 2)), (g, Fraction(1, 2))])


def cyclic_tournament(domain_size: int = 3) -> Operation:
    """The tournament where label x beats x+1 modulo d on pairs at cyclic distance one, otherwise the smaller label."""

    def winner(x, y):
        return x if (y - x) % domain_size == 1 else (y if (x - y) % domain_size == 1 else min(x, y))

    pairs = {(x, y): winner(x, y) for x in range(domain_size) for y in range(x + 1, domain_size)}
    return tournament(domain_size, pairs, "cyclic")


OPERATIONS = {
    "majority": majority,
    "minority": minority,
    "min": min_op,
    "max": max_op,
    "cyclic": cyclic_tournament,
}

FRACTIONAL_OPERATIONS = {
    "submodular": submodular,
    "stp": submodular,
    "majority-minority": majority_minority,
    "mjn": mjn,
    "tournament-pair": lambda d: tournament_pair(cyclic_tournament(d), min_op(d)),
}


def named_operation(name: str, domain_size: int) -> Operation:
    """Look up a library operation.
    :param name: one of OPERATIONS, or 'proj<k>_<i>'
    :param domain_size: number of labels"""
    if name.startswith("proj") and "_" in name:
        k, _, i = name[4:].partition("_")
        return projection(domain_size, int(k), int(i))

    try:
        return OPERATIONS[name](domain_size)
    except KeyError:
        raise StructuralError(f"unknown library operation {name!r}, expecting one of {sorted(OPERATIONS)}") from None


def named_fractional(name: str, domain_size: int) -> FractionalOperation:
    """Look up a library fractional operation.
    :param name: one of FRACTIONAL_OPERATIONS, or 'tau<k>'
    :param domain_size: number of labels"""
    if name.startswith("tau") and name[3:].isdigit():
        return tau(domain_size, int(name[3:]))

    try:
        return FRACTIONAL_OPERATIONS[name](domain_size)
    except KeyError:
        err = f"unknown fractional operation {name!r}, expecting one of {sorted(FRACTIONAL_OPERATIONS)}"
        raise StructuralError(err) from None
