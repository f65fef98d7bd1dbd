import logging

from itertools import product
from typing import Iterable

from ..utils import check_cap
from .operations import Operation, projections

LOG = logging.getLogger(__name__)


def clone_part(seeds: Iterable[Operation], arity: int, domain_size: int, max_ops: int = 65_536) -> set[Operation]:
    """The l-ary part of the clone generated by some seed operations: the smallest set of l-ary operations holding
    the projections and closed under applying any seed to members coordinatewise.
    :param seeds: generating operations of any arity
    :param arity: l
    :param domain_size: number of labels
    :param max_ops: cap on the number of operations generated"""
    seeds = list(seeds)
    members = {p.table: p.name for p in projections(domain_size, arity)}
    frontier = list(members)

    while frontier:
        current = list(members)
        fresh = set(frontier)
        frontier = []

        for seed in seeds:
            for args in product(current, repeat=seed.arity):
                # semi-naive: every new combination reads at least one table found in the last round
                if not any(a in fresh for a in args):
                    continue

                table = tuple(seed(*column) for column in zip(*args))

                if table not in members:
                    members[table] = f"{seed.name}[{len(members)}]"
                    frontier.append(table)
                    check_cap(len(members), max_ops, f"clone part of arity {arity}")

    LOG.debug("clone part of arity %d on %d labels has %d operations", arity, domain_size, len(members))
    return {Operation(arity, domain_size, table, name) for table, name in members.items()}


def clone_generate(seeds: Iterable[Operation], bound: int, domain_size: int, max_ops: int = 65_536) -> set[Operation]:
    """All operations of arity 1..bound in the clone generated by the seeds and the projections.
    :param seeds: generating operations
    :param bound: largest arity generated
    :param domain_size: number of labels
    :param max_ops: cap on the number of operations per arity"""
    seeds = list(seeds)
    result: set[Operation] = set()

    for arity in range(1, bound + 1):
        result |= clone_part(seeds, arity, domain_size, max_ops)

    return result


def is_wnu(f: Operation) -> bool:
    """Weak near-unanimity: idempotent, and f(y,x,...,x) = f(x,y,x,...,x) = ... = f(x,...,x,y) for all x, y.
    :param f: Operation object of arity at least 2"""
    if f.arity < 2 or not f.is_idempotent:
        return False

    for x in range(f.domain_size):
        for y in range(f.domain_size):
            values = {f(*[y if i == j else x for i in range(f.arity)]) for j in range(f.arity)}

            if len(values) != 1:
                return False

    return True


def satisfies_bwc_identity(f: Operation, g: Operation) -> bool:
    """f(y,x,x) = g(y,x,x,x) for all x, y.
    :param f: ternary operation
    :param g: 4-ary operation"""
    if f.arity != 3 or g.arity != 4:
        return False

    d = f.domain_size
    return all(f(y, x, x) == g(y, x, x, x) for x in range(d) for y in range(d))


def wnu_operations(domain_size: int, arity: int, max_ops: int = 65_536) -> list[Operation]:
    """Every WNU of a given arity, in lexicographic table order; raw tables are enumerated, so only tiny
    domains and arities fit under the cap.
    :param domain_size: number of labels
    :param arity: number of arguments
    :param max_ops: cap on d^(d^k)"""
    cells = domain_size**arity
    check_cap(domain_size**cells, max_ops, f"enumerating {arity}-ary operations on {domain_size} labels")
    ops = (Operation(arity, domain_size, table) for table in product(range(domain_size), repeat=cells))

    return [op for op in ops if is_wnu(op)]
