"""Deterministic generators for test languages and instances.

Every sampler takes an integer seed and draws from a PCG64 generator split off that seed, so the same call
always returns the same language or instance."""

import logging

from dataclasses import dataclass
from itertools import product
from typing import Optional

import networkx as nx

from . import Workbench
from .algebra import FractionalOperation, Operation, is_fractional_polymorphism, is_polymorphism, majority, submodular
from .decorators import method_params
from .model import INF, Constraint, Instance, Language, WeightedRelation, crisp_relation, ext
from .utils import ResourceCapError, StructuralError, make_rng, spawn_rngs, tuples

LOG = logging.getLogger(__name__)


def cut_relation(domain_size: int = 2, name: str = "cut") -> WeightedRelation:
    """phi_cut(x, y) = 0 if x = y else 1."""
    table = {(x, y): ext(0 if x == y else 1) for x, y in tuples(domain_size, 2)}
    return WeightedRelation(name, domain_size, 2, table)


def xor_relation(domain_size: int = 2, name: str = "xor") -> WeightedRelation:
    """phi_xor(x, y) = 0 if x != y else 1, the Min-UnCut cost of an edge."""
    table = {(x, y): ext(1 if x == y else 0) for x, y in tuples(domain_size, 2)}
    return WeightedRelation(name, domain_size, 2, table)


def unary_relation(values, name: str = "u") -> WeightedRelation:
    """A unary relation from its list of values, one per label.
    :param values: values (numbers, 'inf' strings or ExtRational objects) for labels 0..d-1
    :param name: relation name"""
    return WeightedRelation(name, len(values), 1, {(a,): ext(v) for a, v in enumerate(values)})


def disequality_relation(domain_size: int = 2, name: str = "neq") -> WeightedRelation:
    return crisp_relation(name, domain_size, 2, [(x, y) for x, y in tuples(domain_size, 2) if x != y])


GRAPH_FAMILIES = {
    "cycle": nx.cycle_graph,
    "path": nx.path_graph,
    "complete": nx.complete_graph,
    "star": lambda n: nx.star_graph(n - 1),
}


def parse_graph(spec: str) -> nx.Graph:
    """A graph from a short specification: 'cycle:5', 'path:4', 'complete:3', 'star:4', 'triangle', 'edge', or an
    explicit edge list such as '0-1,1-2'.
    :param spec: graph specification"""
    spec = spec.strip()

    if spec == "triangle":
        return nx.cycle_graph(3)

    if spec == "edge":
        return nx.path_graph(2)

    family, _, size = spec.partition(":")

    if family in GRAPH_FAMILIES and size.isdigit():
        return GRAPH_FAMILIES[family](int(size))

    graph = nx.Graph()

    try:
        graph.add_edges_from(tuple(int(v) for v in edge.split("-")) for edge in spec.split(","))
    except ValueError:
        raise StructuralError(f"unreadable graph specification {spec!r}") from None

    return graph


def gen_min_uncut(graph: nx.Graph | str, domain_size: int = 2) -> Instance:
    """One phi_xor constraint per edge of a simple graph; nodes become x0.. in sorted order.
    :param graph: networkx Graph or a specification accepted by parse_graph
    :param domain_size: number of labels"""
    if isinstance(graph, str):
        graph = parse_graph(graph)

    if nx.number_of_selfloops(graph) or graph.is_multigraph() or graph.is_directed():
        raise StructuralError("Min-UnCut needs a simple undirected graph")

    graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    constraints = [Constraint("xor", tuple(sorted(edge))) for edge in sorted(graph.edges())]

    return Instance(Language(domain_size, [xor_relation(domain_size)]), graph.number_of_nodes(), tuple(constraints))


@dataclass(frozen=True)
class LanguageShape:
    """Which relations gen_improved samples: one per entry of 'arities', valued in [low, high] with +inf drawn
    with probability p_inf, or {0, inf}-valued when crisp."""

    arities: tuple[int, ...] = (2,)
    low: int = 0
    high: int = 10
    p_inf: float = 0.0
    crisp: bool = False
    prefix: str = "r"


class Generator(Workbench):
    """Seeded rejection samplers for languages improved by a given fractional operation, and random instances."""

    def __init__(self, **kwargs) -> None:
        """Initialise class.
        :param **kwargs: caps accepted by Workbench"""
        super().__init__(**kwargs)
        self._method_kwargs = {
            "gen_submodular": {"ranges": {"seed": (0, None), "n": (1, None), "arity": (1, None), "count": (0, None)}},
            "gen_improved": {"req_params": ["omega"], "ranges": {"seed": (0, None)}},
            "gen_instance": {
                "req_params": ["language"],
                "ranges": {"seed": (0, None), "n": (1, None), "count": (0, None)},
            },
            "gen_majority_closed": {
                "ranges": {"seed": (0, None), "domain_size": (2, None), "arity": (1, None), "count": (1, None)}
            },
        }

    def random_relation(self, rng, name: str, domain_size: int, arity: int, shape: LanguageShape) -> WeightedRelation:
        """One random table; crisp tables and tables with +inf entries are redrawn until some tuple is feasible.
        :param rng: numpy Generator
        :param name: relation name
        :param domain_size: number of labels
        :param arity: relation arity
        :param shape: LanguageShape object"""
        while True:
            table = {}

            for tup in tuples(domain_size, arity):
                if shape.crisp:
                    table[tup] = INF if rng.random() < 0.5 else ext(0)
                elif shape.p_inf and rng.random() < shape.p_inf:
                    table[tup] = INF
                else:
                    table[tup] = ext(int(rng.integers(shape.low, shape.high + 1)))

            if any(value.is_finite for value in table.values()):
                return WeightedRelation(name, domain_size, arity, table)

    def sample_improved(
        self, rng, omega: FractionalOperation, name: str, arity: int, shape: LanguageShape
    ) -> WeightedRelation:
        """Rejection-sample a relation that omega improves.
        :param rng: numpy Generator
        :param omega: FractionalOperation object
        :param name: relation name
        :param arity: relation arity
        :param shape: LanguageShape object"""
        for attempt in range(1, self.max_rejections + 1):
            rel = self.random_relation(rng, name, omega.domain_size, arity, shape)

            if is_fractional_polymorphism(omega, [rel]):
                LOG.debug("sampled %s after %d attempts", name, attempt)
                return rel

        raise ResourceCapError(f"no relation improved by {omega!r} in {self.max_rejections} attempts")

    @method_params
    def gen_improved(
        self, seed: int = 0, omega: FractionalOperation = None, shape: Optional[LanguageShape] = None
    ) -> Language:
        """A language of random weighted relations improved by omega.
        :param seed: PRNG seed
        :param omega: the improving fractional operation
        :param shape: LanguageShape object; defaults to a single binary finite-valued relation"""
        shape = shape or LanguageShape()
        rng = make_rng(seed)
        names = [f"{shape.prefix}{i}" for i in range(len(shape.arities))]
        relations = [self.sample_improved(rng, omega, name, arity, shape) for name, arity in zip(names, shape.arities)]
        language = Language(omega.domain_size, relations)

        if not is_fractional_polymorphism(omega, language):
            raise StructuralError("a generated language is not improved by its fractional operation")

        return language

    @method_params
    def gen_instance(self, seed: int = 0, language: Language = None, n: int = 3, count: int = 3) -> Instance:
        """A random instance: each constraint picks a relation uniformly and a scope of distinct variables (with
        repetition only when the arity exceeds n).
        :param seed: PRNG seed
        :param language: Language object
        :param n: number of variables
        :param count: number of constraints"""
        rng = make_rng(seed)
        relations = language.relations
        constraints = []

        for _ in range(count):
            rel = relations[int(rng.integers(len(relations)))]
            scope = rng.choice(n, size=rel.arity, replace=rel.arity > n)
            constraints.append(Constraint(rel.name, tuple(int(v) for v in scope)))

        return Instance(language, n, tuple(constraints))

    @method_params
    def gen_submodular(self, seed: int = 0, n: int = 3, arity: int = 2, count: int = 3) -> tuple[Language, Instance]:
        """A Boolean instance whose constraints each use their own random relation improved by 1/2 min + 1/2 max.
        :param seed: PRNG seed
        :param n: number of variables
        :param arity: arity of every relation
        :param count: number of constraints"""
        language_rng, instance_rng = spawn_rngs(seed, 2)
        omega, shape = submodular(2), LanguageShape((arity,) * count, prefix="s")
        relations = [self.sample_improved(language_rng, omega, f"s{i}", arity, shape) for i in range(count)]
        language = Language(2, relations)
        constraints = []

        for rel in relations:
            scope = instance_rng.choice(n, size=arity, replace=arity > n)
            constraints.append(Constraint(rel.name, tuple(int(v) for v in scope)))

        return language, Instance(language, n, tuple(constraints))

    @method_params
    def gen_majority_closed(self, seed: int = 0, domain_size: int = 2, arity: int = 2, count: int = 2) -> Language:
        """Crisp relations closed under the majority operation: random tuple sets closed under it by fixpoint.
        :param seed: PRNG seed
        :param domain_size: number of labels
        :param arity: arity of every relation
        :param count: number of relations"""
        rng = make_rng(seed)
        m = majority(domain_size)
        relations = []

        for i in range(count):
            allowed = {tup for tup in tuples(domain_size, arity) if rng.random() < 0.4}

            if not allowed:
                allowed.add(tuple(int(a) for a in rng.integers(domain_size, size=arity)))

            allowed = _close_under(allowed, m)
            rel = crisp_relation(f"c{i}", domain_size, arity, allowed)

            if not is_polymorphism(m, rel):
                raise StructuralError(f"relation c{i} is not closed under majority")

            relations.append(rel)

        return Language(domain_size, relations)


def _close_under(allowed: set, op: Operation) -> set:
    closed = set(allowed)

    while True:
        new = {op.apply(rows) for rows in product(sorted(closed), repeat=op.arity)} - closed

        if not new:
            return closed

        closed |= new
