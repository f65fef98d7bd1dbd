import hashlib

from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np


class VCSPError(Exception):
    """Base exception for errors raised by this package."""
    pass


class FormatError(VCSPError):
    """Exception class for malformed language, instance or operation files."""

    def __init__(self, message: str, lineno: Optional[int] = None) -> None:
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


class StructuralError(VCSPError):
    """Exception class for arity/scope mismatches, unknown relation names and labels out of range."""
    pass


class ResourceCapError(VCSPError):
    """Exception class for any configured enumeration or size cap being exceeded."""
    pass


class ExactnessError(VCSPError):
    """Exception class for a broken exactness assumption, for example a witness failing its own re-check."""
    pass


def check_cap(size: int, cap: int, what: str) -> None:
    """Raise if a requested size exceeds a cap.
    :param size: requested size
    :param cap: configured cap
    :param what: description for the exception message"""
    if size > cap:
        raise ResourceCapError(f"{what} needs {size} entries, cap is {cap}")


def tuples(domain_size: int, arity: int) -> Iterator[tuple[int, ...]]:
    """Every tuple of D^arity in lexicographic order.
    :param domain_size: number of labels
    :param arity: tuple length"""
    return product(range(domain_size), repeat=arity)


def tuple_rank(tup: Sequence[int], domain_size: int) -> int:
    """Lexicographic rank of a tuple in D^len(tup).
    :param tup: tuple of labels
    :param domain_size: number of labels"""
    rank = 0

    for label in tup:
        rank = rank * domain_size + label

    return rank


def tuple_unrank(rank: int, domain_size: int, arity: int) -> tuple[int, ...]:
    """Inverse of 'tuple_rank'.
    :param rank: lexicographic rank
    :param domain_size: number of labels
    :param arity: tuple length"""
    labels = []

    for _ in range(arity):
        rank, label = divmod(rank, domain_size)
        labels.append(label)

    return tuple(reversed(labels))


def denominator_lcm(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators of some rationals (1 for an empty iterable).
    :param values: iterable of Fraction objects"""
    result = 1

    for v in values:
        result = lcm(result, Fraction(v).denominator)

    return result


def integral_scaling(values: Sequence[Fraction]) -> list[int]:
    """Scale nonnegative rationals to the smallest proportional nonnegative integers.
    :param values: sequence of Fraction objects"""
    factor = denominator_lcm(values)
    scaled = [int(Fraction(v) * factor) for v in values]
    common = 0

    for v in scaled:
        common = gcd(common, v)

    return [v // common for v in scaled] if common > 1 else scaled


def format_fraction(value: Fraction) -> str:
    """Render a rational as 'p' or 'p/q'.
    :param value: Fraction object"""
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def fingerprint(text: str) -> str:
    """Stable hash of a canonical text rendering, used as a cache key.
    :param text: canonical serialisation"""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Seeded PCG64 generator; every sampler in the package draws from one of these.
    :param seed: non-negative integer seed or a spawned SeedSequence"""
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)

    return np.random.Generator(np.random.PCG64(sequence))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators split from one seed.
    :param seed: non-negative integer seed
    :param count: number of generators"""
    return [make_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]
