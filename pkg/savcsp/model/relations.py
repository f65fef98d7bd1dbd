import logging
import re

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from os import getenv
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from ..utils import StructuralError, fingerprint, tuple_rank, tuples
from .values import INF, ZERO, ExtRational, ext

LOG = logging.getLogger(__name__)

DENSE_LIMIT: int = int(getenv("SAVCSP_DENSE_LIMIT", 1_000_000))
MAX_ARITY: int = int(getenv("SAVCSP_MAX_ARITY", 16))
_NAME_REG = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


@dataclass(frozen=True)
class Domain:
    """A finite domain of labels 0..size-1."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise StructuralError(f"domain size must be a positive integer, got {self.size!r}")

    @property
    def labels(self) -> range:
        return range(self.size)


def validate_name(name: str) -> str:
    """Check a relation or operation name is a single identifier token.
    :param name: the name"""
    if not _NAME_REG.match(name):
        raise StructuralError(f"invalid name {name!r}")

    return name


class WeightedRelation:
    """A total map D^m -> Q u {inf}.
    Tables with at most DENSE_LIMIT entries are stored densely in lexicographic tuple order; larger ones keep only
    the entries that differ from the default value."""

    def __init__(
        self,
        name: str,
        domain_size: int,
        arity: int,
        table: Optional[Mapping[tuple, ExtRational]] = None,
        default: ExtRational = INF,
    ) -> None:
        """Initialise class.
        :param name: identifier of the relation
        :param domain_size: number of labels
        :param arity: number of arguments, at least 1
        :param table: mapping of tuples to values; tuples not listed take the default
        :param default: value of unlisted tuples"""
        if arity < 1 or arity > MAX_ARITY:
            raise StructuralError(f"relation {name!r}: arity {arity} outside [1, {MAX_ARITY}]")

        self.name = validate_name(name)
        self.domain_size = domain_size
        self.arity = arity
        self._default = ext(default)
        entries = {}

        for tup, value in (table or {}).items():
            tup = tuple(tup)

            if len(tup) != arity:
                raise StructuralError(f"relation {name!r}: tuple {tup} does not have arity {arity}")

            if any(not 0 <= label < domain_size for label in tup):
                raise StructuralError(f"relation {name!r}: tuple {tup} has a label outside the domain")

            entries[tup] = ext(value)

        size = domain_size**arity

        if size <= DENSE_LIMIT:
            dense = [self._default] * size

            for tup, value in entries.items():
                dense[tuple_rank(tup, domain_size)] = value

            self._dense: Optional[tuple] = tuple(dense)
            self._sparse: dict = {}
        else:
            self._dense = None
            self._sparse = {tup: value for tup, value in entries.items() if value != self._default}

    def __call__(self, tup: Sequence[int]) -> ExtRational:
        if self._dense is not None:
            return self._dense[tuple_rank(tup, self.domain_size)]

        return self._sparse.get(tuple(tup), self._default)

    def items(self) -> Iterator[tuple[tuple[int, ...], ExtRational]]:
        """All (tuple, value) pairs of D^m in lexicographic order."""
        if self._dense is not None:
            return zip(tuples(self.domain_size, self.arity), self._dense)

        return ((tup, self._sparse.get(tup, self._default)) for tup in tuples(self.domain_size, self.arity))

    @property
    def size(self) -> int:
        return self.domain_size**self.arity

    @cached_property
    def feasible(self) -> tuple[tuple[int, ...], ...]:
        """feas(phi): the tuples with a finite value, in lexicographic order."""
        if self._dense is None and not self._default.is_finite:
            return tuple(sorted(tup for tup, value in self._sparse.items() if value.is_finite))

        return tuple(tup for tup, value in self.items() if value.is_finite)

    @cached_property
    def feasible_set(self) -> frozenset:
        return frozenset(self.feasible)

    @cached_property
    def optimal(self) -> tuple[tuple[int, ...], ...]:
        """opt(phi): the feasible tuples of minimum value; empty when nothing is feasible."""
        if not self.feasible:
            return ()

        best = min(self(tup) for tup in self.feasible)
        return tuple(tup for tup in self.feasible if self(tup) == best)

    @cached_property
    def finite_values(self) -> tuple[ExtRational, ...]:
        return tuple(self(tup) for tup in self.feasible)

    @property
    def min_finite(self) -> Optional[ExtRational]:
        return min(self.finite_values) if self.finite_values else None

    @property
    def max_finite(self) -> Optional[ExtRational]:
        return max(self.finite_values) if self.finite_values else None

    @cached_property
    def is_crisp(self) -> bool:
        return all(value == ZERO or not value.is_finite for _, value in self.items())

    @cached_property
    def is_finite_valued(self) -> bool:
        return len(self.feasible) == self.size

    def feas_relation(self, name: Optional[str] = None) -> "WeightedRelation":
        """The crisp relation with value 0 exactly on feas(phi).
        :param name: optional name for the result; defaults to this relation's name"""
        return crisp_relation(name or self.name, self.domain_size, self.arity, self.feasible)

    def restrict(self, labels: Sequence[int], name: Optional[str] = None) -> "WeightedRelation":
        """Restriction onto a subset S of the domain, relabelled so that labels[i] becomes label i.
        :param labels: ascending list of the labels kept
        :param name: optional name for the result"""
        table = {}

        for tup in tuples(len(labels), self.arity):
            table[tup] = self(tuple(labels[i] for i in tup))

        return WeightedRelation(name or self.name, len(labels), self.arity, table, default=INF)

    def renamed(self, name: str) -> "WeightedRelation":
        """Same table under a different name.
        :param name: new name"""
        return WeightedRelation(name, self.domain_size, self.arity, dict(self.items()), default=self._default)

    def canonical_default(self) -> ExtRational:
        """Most frequent value of the table; ties prefer inf, then 0, then the smallest value."""
        counts = Counter(value for _, value in self.items())
        return min(counts, key=lambda v: (-counts[v], v != INF, v != ZERO, v))

    @cached_property
    def _key(self) -> tuple:
        return (self.name, self.domain_size, self.arity, tuple(value for _, value in self.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedRelation):
            return NotImplemented

        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"WeightedRelation({self.name!r}, d={self.domain_size}, m={self.arity})"


def crisp_relation(name: str, domain_size: int, arity: int, allowed: Iterable[Sequence[int]]) -> WeightedRelation:
    """A {0, inf}-valued relation that is 0 exactly on the allowed tuples.
    :param name: relation name
    :param domain_size: number of labels
    :param arity: relation arity
    :param allowed: tuples with value 0"""
    return WeightedRelation(name, domain_size, arity, {tuple(t): ZERO for t in allowed}, default=INF)


def constant_relation(name: str, domain_size: int, arity: int, value=0) -> WeightedRelation:
    """A relation taking the same value on every tuple.
    :param name: relation name
    :param domain_size: number of labels
    :param arity: relation arity
    :param value: the constant value"""
    return WeightedRelation(name, domain_size, arity, {}, default=ext(value))


class Language:
    """A finite, named set of weighted relations over one domain."""

    def __init__(self, domain: Domain | int, relations: Iterable[WeightedRelation] = ()) -> None:
        """Initialise class.
        :param domain: Domain object or domain size
        :param relations: iterable of WeightedRelation objects with distinct names"""
        self.domain = domain if isinstance(domain, Domain) else Domain(domain)
        self._relations: dict[str, WeightedRelation] = {}

        for rel in relations:
            if rel.domain_size != self.domain.size:
                raise StructuralError(f"relation {rel.name!r} has {rel.domain_size} labels, not {self.domain.size}")

            if rel.name in self._relations:
                if self._relations[rel.name] != rel:
                    raise StructuralError(f"two different relations named {rel.name!r}")

                continue

            self._relations[rel.name] = rel

    @property
    def domain_size(self) -> int:
        return self.domain.size

    @property
    def relations(self) -> tuple[WeightedRelation, ...]:
        return tuple(self._relations.values())

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._relations)

    def relation(self, name: str) -> WeightedRelation:
        """Look up a relation by name.
        :param name: relation name"""
        try:
            return self._relations[name]
        except KeyError:
            raise StructuralError(f"unknown relation {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._relations

    def __iter__(self) -> Iterator[WeightedRelation]:
        return iter(self._relations.values())

    def __len__(self) -> int:
        return len(self._relations)

    @property
    def is_crisp(self) -> bool:
        return all(rel.is_crisp for rel in self)

    def union(self, extra: Iterable[WeightedRelation]) -> "Language":
        """Set union with further relations over the same domain.
        :param extra: iterable of WeightedRelation objects"""
        return Language(self.domain, [*self.relations, *extra])

    def restrict(self, labels: Sequence[int]) -> "Language":
        """The induced sub-language on a subset S of the domain, relabelled to 0..|S|-1.
        :param labels: ascending list of labels kept"""
        return Language(Domain(len(labels)), [rel.restrict(labels) for rel in self])

    def fingerprint(self) -> str:
        """Hash of the canonical text form."""
        from .formats import serialize_language

        return fingerprint(serialize_language(self))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Language):
            return NotImplemented

        return self.domain == other.domain and set(self.relations) == set(other.relations)

    def __hash__(self) -> int:
        return hash((self.domain, frozenset(self.relations)))

    def __repr__(self) -> str:
        return f"Language(d={self.domain.size}, relations={list(self.names)})"
