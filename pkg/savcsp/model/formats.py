"""Text formats for languages and instances.

Language file:
    domain <d>
    relation <name> <arity>
    default <0|inf|p/q>
    <l_1> ... <l_m> : <value>

Instance file:
    language <path>
    vars <n>
    constraint <name> x<i_1> ... x<i_m>

Blank lines and '#' comments are ignored everywhere."""

import logging

from pathlib import Path
from typing import Iterator, Optional

from ..utils import FormatError, StructuralError
from .instances import Constraint, Instance
from .relations import MAX_ARITY, Domain, Language, WeightedRelation
from .values import ExtRational

LOG = logging.getLogger(__name__)


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, tokens) for every non-empty line, comments removed.
    :param text: file contents"""
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()

        if line:
            yield lineno, line.split()


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer {what}, got {token!r}", lineno) from None


def _value(token: str, lineno: int) -> ExtRational:
    try:
        return ExtRational.parse(token)
    except ValueError as e:
        raise FormatError(str(e), lineno) from None


def _finish_relation(block: Optional[dict], relations: list, domain_size: int) -> None:
    if block is None:
        return

    if block["default"] is None:
        raise FormatError(f"relation {block['name']!r} has no 'default' header", block["lineno"])

    try:
        relations.append(
            WeightedRelation(block["name"], domain_size, block["arity"], block["table"], default=block["default"])
        )
    except StructuralError as e:
        raise FormatError(str(e), block["lineno"]) from None


def parse_language(text: str) -> Language:
    """Parse a language file.
    :param text: file contents"""
    domain_size, relations, block = None, [], None

    for lineno, tokens in _lines(text):
        head = tokens[0]

        if head == "domain":
            if domain_size is not None or len(tokens) != 2:
                raise FormatError("expected a single 'domain <d>' header", lineno)

            domain_size = _int(tokens[1], lineno, "domain size")

            if domain_size < 2:
                raise FormatError(f"domain size must be at least 2, got {domain_size}", lineno)
        elif domain_size is None:
            raise FormatError("the file must start with 'domain <d>'", lineno)
        elif head == "relation":
            _finish_relation(block, relations, domain_size)

            if len(tokens) != 3:
                raise FormatError("expected 'relation <name> <arity>'", lineno)

            arity = _int(tokens[2], lineno, "arity")

            if not 1 <= arity <= MAX_ARITY:
                raise FormatError(f"arity {arity} outside [1, {MAX_ARITY}]", lineno)

            block = {"name": tokens[1], "arity": arity, "default": None, "table": {}, "lineno": lineno}
        elif block is None:
            raise FormatError(f"unexpected {head!r} outside a relation block", lineno)
        elif head == "default":
            if len(tokens) != 2 or block["default"] is not None or block["table"]:
                raise FormatError("expected one 'default <value>' directly after the relation header", lineno)

            block["default"] = _value(tokens[1], lineno)
        else:
            if block["default"] is None:
                raise FormatError(f"relation {block['name']!r} is missing its 'default' header", lineno)

            if ":" not in tokens or tokens.count(":") != 1 or tokens[-1] == ":":
                raise FormatError("expected '<labels> : <value>'", lineno)

            sep = tokens.index(":")
            labels = tuple(_int(t, lineno, "label") for t in tokens[:sep])

            if len(tokens) - sep != 2:
                raise FormatError("expected a single value after ':'", lineno)

            if len(labels) != block["arity"]:
                raise FormatError(f"tuple of length {len(labels)} in relation of arity {block['arity']}", lineno)

            if any(not 0 <= label < domain_size for label in labels):
                raise FormatError(f"label out of range in {labels}", lineno)

            if labels in block["table"]:
                raise FormatError(f"tuple {labels} listed twice", lineno)

            block["table"][labels] = _value(tokens[-1], lineno)

    if domain_size is None:
        raise FormatError("empty language file: missing 'domain <d>'")

    _finish_relation(block, relations, domain_size)

    try:
        return Language(Domain(domain_size), relations)
    except StructuralError as e:
        raise FormatError(str(e)) from None


def serialize_relation(rel: WeightedRelation) -> str:
    """Canonical text block for one relation: the most frequent value becomes the default.
    :param rel: WeightedRelation object"""
    default = rel.canonical_default()
    lines = [f"relation {rel.name} {rel.arity}", f"default {default}"]
    lines.extend(f"{' '.join(map(str, tup))} : {value}" for tup, value in rel.items() if value != default)

    return "\n".join(lines) + "\n"


def serialize_language(language: Language) -> str:
    """Canonical text form of a language.
    :param language: Language object"""
    blocks = [f"domain {language.domain_size}\n"]
    blocks.extend(serialize_relation(rel) for rel in language)

    return "\n".join(blocks)


def parse_instance(text: str, base_dir: Optional[Path] = None, language: Optional[Language] = None) -> Instance:
    """Parse an instance file.
    :param text: file contents
    :param base_dir: directory the 'language' path is resolved against
    :param language: optional language to use instead of loading the referenced file"""
    num_vars, constraints, lang_line = None, [], None

    for lineno, tokens in _lines(text):
        head = tokens[0]

        if head == "language":
            if len(tokens) != 2 or lang_line is not None:
                raise FormatError("expected a single 'language <path>' line", lineno)

            lang_line = lineno

            if language is None:
                path = Path(tokens[1])
                path = path if path.is_absolute() or base_dir is None else Path(base_dir) / path

                try:
                    language = load_language(path)
                except OSError as e:
                    raise FormatError(f"cannot read language file {str(path)!r}: {e.strerror}", lineno) from None
        elif head == "vars":
            if len(tokens) != 2 or num_vars is not None:
                raise FormatError("expected a single 'vars <n>' line", lineno)

            num_vars = _int(tokens[1], lineno, "variable count")
        elif head == "constraint":
            if language is None or num_vars is None:
                raise FormatError("'language' and 'vars' must precede constraints", lineno)

            if len(tokens) < 3:
                raise FormatError("expected 'constraint <name> x<i> ...'", lineno)

            name = tokens[1]

            if name not in language:
                raise FormatError(f"unknown relation name {name!r}", lineno)

            scope = []

            for token in tokens[2:]:
                if not token.startswith("x"):
                    raise FormatError(f"expected a variable like 'x0', got {token!r}", lineno)

                v = _int(token[1:], lineno, "variable index")

                if not 0 <= v < num_vars:
                    raise FormatError(f"variable {token} outside x0..x{num_vars - 1}", lineno)

                scope.append(v)

            arity = language.relation(name).arity

            if len(scope) != arity:
                raise FormatError(f"relation {name!r} has arity {arity}, got {len(scope)} variables", lineno)

            constraints.append(Constraint(name, tuple(scope)))
        else:
            raise FormatError(f"unexpected directive {head!r}", lineno)

    if language is None:
        raise FormatError("missing 'language <path>' line")

    if num_vars is None:
        raise FormatError("missing 'vars <n>' line")

    return Instance(language, num_vars, tuple(constraints))


def serialize_instance(instance: Instance, language_path: str | Path) -> str:
    """Canonical text form of an instance.
    :param instance: Instance object
    :param language_path: path written on the 'language' line"""
    lines = [f"language {language_path}", f"vars {instance.num_vars}"]
    lines.extend(f"constraint {c.relation} {' '.join(f'x{v}' for v in c.scope)}" for c in instance.constraints)

    return "\n".join(lines) + "\n"


def load_language(path: str | Path) -> Language:
    """Read and parse a language file.
    :param path: file path"""
    return parse_language(Path(path).read_text(encoding="utf-8"))


def load_instance(path: str | Path, language: Optional[Language] = None) -> Instance:
    """Read and parse an instance file; its language path is resolved relative to the file.
    :param path: file path
    :param language: optional language to use instead of the referenced file"""
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), base_dir=path.parent, language=language)


def save_language(language: Language, path: str | Path) -> Path:
    """Write a language file.
    :param language: Language object
    :param path: file path"""
    path = Path(path)
    path.write_text(serialize_language(language), encoding="utf-8")
    LOG.debug("wrote language file %s", path)

    return path


def save_instance(instance: Instance, path: str | Path, language_path: str | Path) -> Path:
    """Write an instance file.
    :param instance: Instance object
    :param path: file path
    :param language_path: path written on the 'language' line"""
    path = Path(path)
    path.write_text(serialize_instance(instance, language_path), encoding="utf-8")
    LOG.debug("wrote instance file %s", path)

    return path
