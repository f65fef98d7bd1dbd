"""Text format for operations and fractional operations.

    domain <d>
    op <name> <arity>
    <a_1> ... <a_k> : <result>
    fpol <arity>
    weight <p/q> op <name>

Operation tables must be total. A 'fpol' block refers to operations declared earlier in the file."""

import logging

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..model import ExtRational
from ..model.relations import validate_name
from ..utils import FormatError, StructuralError, tuples
from .operations import FractionalOperation, Operation

LOG = logging.getLogger(__name__)


@dataclass
class OperationFile:
    domain_size: int
    operations: dict[str, Operation] = field(default_factory=dict)
    fractional: list[FractionalOperation] = field(default_factory=list)

    def operation(self, name: str) -> Operation:
        try:
            return self.operations[name]
        except KeyError:
            raise StructuralError(f"unknown operation {name!r}") from None

    def first_operation(self) -> Operation:
        if not self.operations:
            raise StructuralError("the operation file declares no operation")

        return next(iter(self.operations.values()))


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer {what}, got {token!r}", lineno) from None


def parse_operations(text: str) -> OperationFile:
    """Parse an operation file.
    :param text: file contents"""
    result, block, fpol = None, None, None

    def close() -> None:
        nonlocal block, fpol

        if block is not None:
            missing = [args for args in tuples(result.domain_size, block["arity"]) if args not in block["table"]]

            if missing:
                raise FormatError(f"operation {block['name']!r} has no value for {missing[0]}", block["lineno"])

            table = [block["table"][args] for args in tuples(result.domain_size, block["arity"])]
            result.operations[block["name"]] = Operation(block["arity"], result.domain_size, table, block["name"])
            block = None

        if fpol is not None:
            try:
                result.fractional.append(FractionalOperation(fpol["weights"]))
            except StructuralError as e:
                raise FormatError(str(e), fpol["lineno"]) from None

            fpol = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()

        if not tokens:
            continue

        head = tokens[0]

        if head == "domain":
            if result is not None or len(tokens) != 2:
                raise FormatError("expected a single 'domain <d>' header", lineno)

            result = OperationFile(_int(tokens[1], lineno, "domain size"))
        elif result is None:
            raise FormatError("the file must start with 'domain <d>'", lineno)
        elif head == "op":
            close()

            if len(tokens) != 3:
                raise FormatError("expected 'op <name> <arity>'", lineno)

            try:
                name = validate_name(tokens[1])
            except StructuralError as e:
                raise FormatError(str(e), lineno) from None

            if name in result.operations:
                raise FormatError(f"operation {name!r} declared twice", lineno)

            block = {"name": name, "arity": _int(tokens[2], lineno, "arity"), "table": {}, "lineno": lineno}
        elif head == "fpol":
            close()

            if len(tokens) != 2:
                raise FormatError("expected 'fpol <arity>'", lineno)

            fpol = {"arity": _int(tokens[1], lineno, "arity"), "weights": [], "lineno": lineno}
        elif head == "weight":
            if fpol is None or len(tokens) != 4 or tokens[2] != "op":
                raise FormatError("expected 'weight <p/q> op <name>' inside a fpol block", lineno)

            try:
                weight = ExtRational.parse(tokens[1]).fraction
            except ValueError as e:
                raise FormatError(str(e), lineno) from None

            if tokens[3] not in result.operations:
                raise FormatError(f"unknown operation {tokens[3]!r}", lineno)

            op = result.operations[tokens[3]]

            if op.arity != fpol["arity"]:
                raise FormatError(f"operation {op.name!r} has arity {op.arity}, the fpol {fpol['arity']}", lineno)

            fpol["weights"].append((op, Fraction(weight)))
        elif block is not None:
            if len(tokens) < 3 or tokens.count(":") != 1 or tokens[-2] != ":":
                raise FormatError("expected '<arguments> : <result>'", lineno)

            args = tuple(_int(t, lineno, "label") for t in tokens[:-2])
            value = _int(tokens[-1], lineno, "label")

            if len(args) != block["arity"]:
                raise FormatError(f"{len(args)} arguments for an operation of arity {block['arity']}", lineno)

            if any(not 0 <= a < result.domain_size for a in (*args, value)):
                raise FormatError(f"label out of range in {args} : {value}", lineno)

            if args in block["table"]:
                raise FormatError(f"arguments {args} listed twice", lineno)

            block["table"][args] = value
        else:
            raise FormatError(f"unexpected directive {head!r}", lineno)

    if result is None:
        raise FormatError("empty operation file: missing 'domain <d>'")

    close()
    return result


def serialize_operation(op: Operation) -> str:
    """Text block for one operation.
    :param op: Operation object"""
    lines = [f"op {op.name} {op.arity}"]
    rows = enumerate(tuples(op.domain_size, op.arity))
    lines.extend(f"{' '.join(map(str, args))} : {op.table[i]}" for i, args in rows)

    return "\n".join(lines) + "\n"


def serialize_fractional(omega: FractionalOperation) -> str:
    """Operation blocks for the support followed by the fpol block; support operations are renamed f0, f1, ...
    :param omega: FractionalOperation object"""
    named = [(op.renamed(f"f{i}"), w) for i, (op, w) in enumerate(omega.items())]
    blocks = [f"domain {omega.domain_size}\n"]
    blocks.extend(serialize_operation(op) for op, _ in named)
    lines = [f"fpol {omega.arity}"]
    lines.extend(f"weight {w.numerator}/{w.denominator} op {op.name}" for op, w in named)
    blocks.append("\n".join(lines) + "\n")

    return "\n".join(blocks)


def serialize_operations(ops: list[Operation]) -> str:
    """An operation file holding several operations over one domain.
    :param ops: Operation objects with distinct names"""
    blocks = [f"domain {ops[0].domain_size}\n"] if ops else []
    blocks.extend(serialize_operation(op) for op in ops)

    return "\n".join(blocks)


def load_operations(path: str | Path) -> OperationFile:
    """Read and parse an operation file.
    :param path: file path"""
    return parse_operations(Path(path).read_text(encoding="utf-8"))


def save_operations(ops: list[Operation], path: str | Path) -> Path:
    """Write an operation file.
    :param ops: Operation objects with distinct names
    :param path: file path"""
    path = Path(path)
    path.write_text(serialize_operations(ops), encoding="utf-8")
    LOG.debug("wrote operation file %s", path)

    return path
