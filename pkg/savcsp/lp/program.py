import logging

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from ..utils import StructuralError, format_fraction

LOG = logging.getLogger(__name__)

SENSES = ("<=", "=", ">=")
OBJECTIVES = ("min", "max")
STATUSES = ("optimal", "infeasible", "unbounded")


@dataclass(frozen=True)
class LpRow:
    """One linear constraint 'sum a_j x_j (<=|=|>=) rhs' with sparse rational coefficients."""

    coefficients: Mapping[int, Fraction]
    sense: str
    rhs: Fraction
    name: str = ""


@dataclass(frozen=True)
class LinearProgram:
    """A rational LP. Variables are nonnegative unless listed in 'free'."""

    variables: tuple[str, ...]
    objective: Mapping[int, Fraction]
    sense: str
    rows: tuple[LpRow, ...]
    free: frozenset = field(default_factory=frozenset)
    name: str = "lp"

    def __post_init__(self) -> None:
        n = len(self.variables)

        if self.sense not in OBJECTIVES:
            raise StructuralError(f"objective sense must be one of {OBJECTIVES}, got {self.sense!r}")

        for j in [*self.objective, *self.free]:
            if not 0 <= j < n:
                raise StructuralError(f"objective or bound references undeclared variable {j}")

        for i, row in enumerate(self.rows):
            if row.sense not in SENSES:
                raise StructuralError(f"row {i} has sense {row.sense!r}, expecting one of {SENSES}")

            if any(not 0 <= j < n for j in row.coefficients):
                raise StructuralError(f"row {i} ({row.name}) references an undeclared variable")

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def objective_value(self, x) -> Fraction:
        """c^T x for a primal vector.
        :param x: sequence of Fractions indexed by variable"""
        return sum((c * x[j] for j, c in self.objective.items()), Fraction(0))

    def row_activity(self, i: int, x) -> Fraction:
        """a_i^T x for a primal vector.
        :param i: row index
        :param x: sequence of Fractions indexed by variable"""
        return sum((a * x[j] for j, a in self.rows[i].coefficients.items()), Fraction(0))

    def to_lp_text(self) -> str:
        """Human-readable LP layout (Minimize/Maximize, Subject To, Bounds, End), for debugging."""

        def expr(coefs: Mapping[int, Fraction]) -> str:
            parts = []

            for j in sorted(coefs):
                c = Fraction(coefs[j])

                if c == 0:
                    continue

                sign = "-" if c < 0 else "+"
                mag = "" if abs(c) == 1 else f"{format_fraction(abs(c))} "
                parts.append(f"{sign} {mag}{self.variables[j]}")

            text = " ".join(parts) or "0"
            return text[2:] if text.startswith("+ ") else text

        lines = [f"\\ {self.name}", "Minimize" if self.sense == "min" else "Maximize", f" obj: {expr(self.objective)}"]
        lines.append("Subject To")

        for i, row in enumerate(self.rows):
            lines.append(f" {row.name or f'c{i}'}: {expr(row.coefficients)} {row.sense} {format_fraction(row.rhs)}")

        if self.free:
            lines.append("Bounds")
            lines.extend(f" {self.variables[j]} free" for j in sorted(self.free))

        lines.append("End")
        return "\n".join(lines) + "\n"


class LpBuilder:
    """Incremental construction of a LinearProgram."""

    def __init__(self, name: str = "lp") -> None:
        self.name = name
        self._variables: list[str] = []
        self._index: dict[str, int] = {}
        self._rows: list[LpRow] = []
        self._objective: dict[int, Fraction] = {}
        self._sense = "min"
        self._free: set[int] = set()

    def add_variable(self, name: str, free: bool = False) -> int:
        """Declare a variable and return its index.
        :param name: unique variable name
        :param free: True for a variable without the default nonnegativity bound"""
        if name in self._index:
            raise StructuralError(f"variable {name!r} declared twice")

        self._index[name] = len(self._variables)
        self._variables.append(name)

        if free:
            self._free.add(self._index[name])

        return self._index[name]

    def index(self, name: str) -> int:
        return self._index[name]

    def add_row(self, coefficients: Mapping[int, Fraction], sense: str, rhs, name: str = "") -> int:
        """Add a constraint and return its row index; zero coefficients are dropped.
        :param coefficients: mapping of variable index to coefficient
        :param sense: '<=', '=' or '>='
        :param rhs: right-hand side
        :param name: optional row label"""
        coefs = {j: Fraction(a) for j, a in coefficients.items() if a != 0}
        self._rows.append(LpRow(coefs, sense, Fraction(rhs), name))

        return len(self._rows) - 1

    def set_objective(self, coefficients: Mapping[int, Fraction], sense: str = "min") -> None:
        """Set the objective.
        :param coefficients: mapping of variable index to coefficient
        :param sense: 'min' or 'max'"""
        self._objective = {j: Fraction(c) for j, c in coefficients.items() if c != 0}
        self._sense = sense

    def build(self) -> LinearProgram:
        return LinearProgram(
            tuple(self._variables),
            dict(self._objective),
            self._sense,
            tuple(self._rows),
            frozenset(self._free),
            self.name,
        )


@dataclass(frozen=True)
class LpOutcome:
    """Result of a solve.
    'dual' has one value per row (optimal status); 'farkas' has one multiplier per row (infeasible status) with
    u >= 0 on '<=' rows, u <= 0 on '>=' rows, sum_i u_i a_i >= 0 on nonnegative variables (= 0 on free ones) and
    sum_i u_i b_i = -1; 'ray' is an improving primal direction (unbounded status)."""

    status: str
    objective: Optional[Fraction] = None
    primal: tuple = ()
    dual: tuple = ()
    farkas: tuple = ()
    ray: tuple = ()
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"
