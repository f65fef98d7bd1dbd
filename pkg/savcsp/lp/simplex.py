import logging

from fractions import Fraction
from typing import Optional

from .. import Workbench
from ..utils import ResourceCapError, check_cap, fingerprint
from .program import LinearProgram, LpOutcome

LOG = logging.getLogger(__name__)

ZERO = Fraction(0)


class _Tableau:
    """Sparse standard-form tableau 'A x = b, x >= 0' with one artificial column per row.
    Column order: structural columns (free variables split into a +/- pair), then slack columns, then artificials.
    Bland's rule picks the lowest eligible column to enter and breaks ratio ties by the lowest basic column."""

    def __init__(self, lp: LinearProgram, max_pivots: int) -> None:
        self.lp = lp
        self.max_pivots = max_pivots
        self.pivots = 0
        self.columns: list[tuple[int, int]] = []  # (original variable, +1/-1) for structural columns
        col_of: dict[int, list[tuple[int, int]]] = {}

        for j in range(lp.num_vars):
            col_of[j] = [(len(self.columns), 1)]
            self.columns.append((j, 1))

            if j in lp.free:
                col_of[j].append((len(self.columns), -1))
                self.columns.append((j, -1))

        n_struct = len(self.columns)
        self.slack_of: dict[int, int] = {}
        col = n_struct

        for i, row in enumerate(lp.rows):
            if row.sense != "=":
                self.slack_of[i] = col
                col += 1

        self.first_artificial = col
        self.num_columns = col + lp.num_rows
        self.signs: list[int] = []
        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []

        for i, row in enumerate(lp.rows):
            sign = -1 if row.rhs < 0 else 1
            entries: dict[int, Fraction] = {}

            for j, a in row.coefficients.items():
                for c, s in col_of[j]:
                    entries[c] = sign * s * a

            if i in self.slack_of:
                entries[self.slack_of[i]] = Fraction(sign if row.sense == "<=" else -sign)

            entries[self.first_artificial + i] = Fraction(1)
            self.signs.append(sign)
            self.rows.append({c: a for c, a in entries.items() if a != 0})
            self.rhs.append(sign * row.rhs)

        self.basis = [self.first_artificial + i for i in range(lp.num_rows)]
        flip = -1 if lp.sense == "max" else 1
        self.costs: dict[int, Fraction] = {}

        for j, c in lp.objective.items():
            for col, s in col_of[j]:
                self.costs[col] = flip * s * c

        self.reduced: dict[int, Fraction] = {}

    def is_artificial(self, col: int) -> bool:
        return col >= self.first_artificial

    def price(self, costs: dict[int, Fraction]) -> None:
        """Recompute the reduced-cost row d_j = c_j - c_B^T B^-1 a_j for every column.
        :param costs: column costs, absent columns cost 0"""
        reduced = dict(costs)

        for i, row in enumerate(self.rows):
            cb = costs.get(self.basis[i], ZERO)

            if cb:
                for c, a in row.items():
                    reduced[c] = reduced.get(c, ZERO) - cb * a

        self.reduced = {c: v for c, v in reduced.items() if v != 0}

    def pivot(self, r: int, col: int) -> None:
        if self.pivots >= self.max_pivots:
            raise ResourceCapError(f"simplex exceeded {self.max_pivots} pivots on {self.lp.name!r}")

        self.pivots += 1
        prow = self.rows[r]
        piv = prow[col]

        if piv != 1:
            prow = {c: a / piv for c, a in prow.items()}
            self.rows[r] = prow
            self.rhs[r] /= piv

        for i, row in enumerate(self.rows):
            f = row.get(col)

            if i == r or f is None:
                continue

            for c, a in prow.items():
                v = row.get(c, ZERO) - f * a

                if v:
                    row[c] = v
                else:
                    row.pop(c, None)

            self.rhs[i] -= f * self.rhs[r]

        f = self.reduced.get(col)

        if f:
            for c, a in prow.items():
                v = self.reduced.get(c, ZERO) - f * a

                if v:
                    self.reduced[c] = v
                else:
                    self.reduced.pop(c, None)

        self.basis[r] = col

    def entering(self, allow_artificial: bool) -> Optional[int]:
        candidates = [c for c, v in self.reduced.items() if v < 0 and (allow_artificial or not self.is_artificial(c))]
        return min(candidates) if candidates else None

    def leaving(self, col: int) -> Optional[int]:
        best = None

        for i, row in enumerate(self.rows):
            a = row.get(col)

            if a is not None and a > 0:
                key = (self.rhs[i] / a, self.basis[i])

                if best is None or key < best[0]:
                    best = (key, i)

        return None if best is None else best[1]

    def run(self, allow_artificial: bool) -> Optional[int]:
        """Pivot to optimality; return the unbounded entering column, or None when optimal.
        :param allow_artificial: whether artificial columns may enter"""
        while True:
            col = self.entering(allow_artificial)

            if col is None:
                return None

            r = self.leaving(col)

            if r is None:
                return col

            self.pivot(r, col)

    def drive_out_artificials(self) -> int:
        """Pivot basic artificials (all at level zero) out wherever a non-artificial column allows it.
        Returns the number of redundant rows left with an artificial basic."""
        redundant = 0

        for r in range(len(self.rows)):
            if not self.is_artificial(self.basis[r]):
                continue

            cols = [c for c in self.rows[r] if not self.is_artificial(c)]

            if cols:
                self.pivot(r, min(cols))
            else:
                redundant += 1

        return redundant

    def column_values(self) -> dict[int, Fraction]:
        return {self.basis[i]: self.rhs[i] for i in range(len(self.rows)) if self.rhs[i] != 0}

    def structural_values(self, column_values: dict[int, Fraction]) -> tuple[Fraction, ...]:
        x = [ZERO] * self.lp.num_vars

        for col, (j, s) in enumerate(self.columns):
            if col in column_values:
                x[j] += s * column_values[col]

        return tuple(x)

    def row_duals(self, costs: dict[int, Fraction]) -> list[Fraction]:
        """y = c_B^T B^-1 in original row orientation, read off the artificial columns' reduced costs.
        :param costs: the costs the current reduced-cost row was priced with"""
        duals = []

        for i in range(len(self.rows)):
            col = self.first_artificial + i
            y = costs.get(col, ZERO) - self.reduced.get(col, ZERO)
            duals.append(self.signs[i] * y)

        return duals


class SimplexSolver(Workbench):
    """Exact two-phase primal simplex over the rationals with Bland's anti-cycling rule."""

    def solve_lp(self, lp: LinearProgram) -> LpOutcome:
        """Solve an LP exactly.
        :param lp: LinearProgram object"""
        cells = lp.num_rows * (lp.num_vars + len(lp.free) + 2 * lp.num_rows)
        check_cap(cells, self.max_tableau_cells, f"tableau of {lp.name!r}")
        LOG.debug("solving %r: %d variables, %d rows", lp.name, lp.num_vars, lp.num_rows)
        self._dump(lp)

        tab = _Tableau(lp, self.max_pivots)
        phase_one = {tab.first_artificial + i: Fraction(1) for i in range(lp.num_rows)}
        tab.price(phase_one)
        tab.run(allow_artificial=True)
        infeasibility = sum((tab.rhs[i] for i, col in enumerate(tab.basis) if tab.is_artificial(col)), ZERO)

        if infeasibility > 0:
            y = tab.row_duals(phase_one)
            farkas = tuple(-v / infeasibility for v in y)
            LOG.debug("%r infeasible after %d pivots", lp.name, tab.pivots)

            return LpOutcome("infeasible", farkas=farkas, pivots=tab.pivots)

        redundant = tab.drive_out_artificials()
        LOG.debug("%r phase one done after %d pivots, %d redundant rows", lp.name, tab.pivots, redundant)
        tab.price(tab.costs)
        unbounded_col = tab.run(allow_artificial=False)
        values = tab.column_values()
        x = tab.structural_values(values)
        flip = -1 if lp.sense == "max" else 1

        if unbounded_col is not None:
            direction = {unbounded_col: Fraction(1)}

            for i, row in enumerate(tab.rows):
                a = row.get(unbounded_col)

                if a is not None:
                    direction[tab.basis[i]] = direction.get(tab.basis[i], ZERO) - a

            ray = tab.structural_values(direction)
            LOG.debug("%r unbounded after %d pivots", lp.name, tab.pivots)

            return LpOutcome("unbounded", primal=x, ray=ray, pivots=tab.pivots)

        duals = tuple(flip * y for y in tab.row_duals(tab.costs))
        objective = lp.objective_value(x)
        LOG.debug("%r optimal with objective %s after %d pivots", lp.name, objective, tab.pivots)

        return LpOutcome("optimal", objective=objective, primal=x, dual=duals, pivots=tab.pivots)

    def _dump(self, lp: LinearProgram) -> None:
        if self.lp_dump is None:
            return

        text = lp.to_lp_text()
        self.lp_dump.mkdir(parents=True, exist_ok=True)
        path = self.lp_dump / f"{lp.name}-{fingerprint(text)[:12]}.lp"
        path.write_text(text, encoding="utf-8")
        LOG.debug("dumped %r to %s", lp.name, path)


def _reduced_costs(lp: LinearProgram, y) -> list[Fraction]:
    """c_j - sum_i y_i a_ij for every variable.
    :param lp: LinearProgram object
    :param y: row multipliers"""
    reduced = [Fraction(lp.objective.get(j, 0)) for j in range(lp.num_vars)]

    for i, row in enumerate(lp.rows):
        if y[i]:
            for j, a in row.coefficients.items():
                reduced[j] -= y[i] * a

    return reduced


def _primal_feasible(lp: LinearProgram, x) -> bool:
    if len(x) != lp.num_vars or any(x[j] < 0 for j in range(lp.num_vars) if j not in lp.free):
        return False

    for i, row in enumerate(lp.rows):
        activity = lp.row_activity(i, x)

        if (row.sense == "<=" and activity > row.rhs) or (row.sense == ">=" and activity < row.rhs):
            return False

        if row.sense == "=" and activity != row.rhs:
            return False

    return True


def verify_certificate(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Re-check an outcome by exact arithmetic: primal and dual feasibility plus equal objectives when optimal,
    the Farkas contradiction when infeasible, the improving ray when unbounded.
    :param lp: LinearProgram object
    :param outcome: LpOutcome produced for it"""
    if outcome.status == "optimal":
        x, y = outcome.primal, outcome.dual

        if not _primal_feasible(lp, x) or len(y) != lp.num_rows:
            return False

        # dual sign pattern: for min, y <= 0 on '<=' rows and y >= 0 on '>=' rows; reversed for max
        flip = 1 if lp.sense == "min" else -1

        for i, row in enumerate(lp.rows):
            if (row.sense == "<=" and flip * y[i] > 0) or (row.sense == ">=" and flip * y[i] < 0):
                return False

        for j, d in enumerate(_reduced_costs(lp, y)):
            if (j in lp.free and d != 0) or flip * d < 0:
                return False

        dual_objective = sum((y[i] * row.rhs for i, row in enumerate(lp.rows)), ZERO)
        primal_objective = lp.objective_value(x)

        return primal_objective == dual_objective == outcome.objective

    if outcome.status == "infeasible":
        u = outcome.farkas

        if len(u) != lp.num_rows:
            return False

        for i, row in enumerate(lp.rows):
            if (row.sense == "<=" and u[i] < 0) or (row.sense == ">=" and u[i] > 0):
                return False

        combined = [ZERO] * lp.num_vars

        for i, row in enumerate(lp.rows):
            for j, a in row.coefficients.items():
                combined[j] += u[i] * a

        if any((combined[j] != 0) if j in lp.free else (combined[j] < 0) for j in range(lp.num_vars)):
            return False

        return sum((u[i] * row.rhs for i, row in enumerate(lp.rows)), ZERO) < 0

    if outcome.status == "unbounded":
        x, r = outcome.primal, outcome.ray

        if not _primal_feasible(lp, x) or len(r) != lp.num_vars:
            return False

        if any(r[j] < 0 for j in range(lp.num_vars) if j not in lp.free):
            return False

        for i, row in enumerate(lp.rows):
            change = lp.row_activity(i, r)

            if (row.sense == "<=" and change > 0) or (row.sense == ">=" and change < 0):
                return False

            if row.sense == "=" and change != 0:
                return False

        gain = lp.objective_value(r)
        return gain > 0 if lp.sense == "max" else gain < 0

    return False
