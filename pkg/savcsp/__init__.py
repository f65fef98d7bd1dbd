"""Exact solver for Valued Constraint Satisfaction Problems via the Sherali-Adams (k,l) LP relaxation,
together with the algebraic tests (fractional polymorphisms, support clones, cores, bounded width) that tell
when the relaxation is exact."""

__author__ = "savcsp developers"
__name__ = "savcsp"
__version__ = "1.0.20261017"

from os import getenv
from pathlib import Path
from typing import Optional


class Workbench:
    """Configuration base class; every component that enumerates, solves or samples derives from it.
    Caps are read from the environment once and can be overridden per instance."""

    MAX_ASSIGNMENTS: int = int(getenv("SAVCSP_MAX_ASSIGNMENTS", 1_000_000))
    MAX_OPS: int = int(getenv("SAVCSP_MAX_OPS", 65_536))
    MAX_TABLEAU_CELLS: int = int(getenv("SAVCSP_MAX_TABLEAU_CELLS", 10_000_000))
    MAX_PIVOTS: int = int(getenv("SAVCSP_MAX_PIVOTS", 1_000_000))
    MAX_EXPECTATION_TERMS: int = int(getenv("SAVCSP_MAX_EXPECTATION_TERMS", 10_000_000))
    MAX_SA_LEVEL: int = int(getenv("SAVCSP_MAX_SA_LEVEL", 4))
    MAX_PADDING_TERMS: int = int(getenv("SAVCSP_MAX_PADDING_TERMS", 5_000))
    MAX_CORE_DOMAIN: int = int(getenv("SAVCSP_MAX_CORE_DOMAIN", 6))
    MAX_REJECTIONS: int = int(getenv("SAVCSP_MAX_REJECTIONS", 10_000))
    DEFAULT_K: int = 2
    DEFAULT_L: int = 3
    _LP_DUMP: Optional[str] = getenv("SAVCSP_LP_DUMP")

    def __init__(
        self,
        max_assignments: Optional[int] = None,
        max_ops: Optional[int] = None,
        max_tableau_cells: Optional[int] = None,
        max_pivots: Optional[int] = None,
        max_expectation_terms: Optional[int] = None,
        max_rejections: Optional[int] = None,
        lp_dump: Optional[str | Path] = None,
    ) -> None:
        """Initialise class.
        :param max_assignments: cap on d^n for exhaustive enumeration
        :param max_ops: cap on d^(d^k) raw operations and on generated clone sizes
        :param max_tableau_cells: cap on rows x columns of a simplex tableau
        :param max_pivots: cap on pivots per simplex phase
        :param max_expectation_terms: cap on the work done when applying a fractional operation
        :param max_rejections: cap on rejection-sampling attempts
        :param lp_dump: optional directory every solved LP is written to in LP text layout"""
        self.max_assignments = max_assignments or self.MAX_ASSIGNMENTS
        self.max_ops = max_ops or self.MAX_OPS
        self.max_tableau_cells = max_tableau_cells or self.MAX_TABLEAU_CELLS
        self.max_pivots = max_pivots or self.MAX_PIVOTS
        self.max_expectation_terms = max_expectation_terms or self.MAX_EXPECTATION_TERMS
        self.max_rejections = max_rejections or self.MAX_REJECTIONS
        dump = lp_dump or self._LP_DUMP
        self.lp_dump = Path(dump) if dump else None

    def caps(self) -> dict:
        """Return the caps of this instance as keyword arguments, so collaborating components share them."""
        return {
            "max_assignments": self.max_assignments,
            "max_ops": self.max_ops,
            "max_tableau_cells": self.max_tableau_cells,
            "max_pivots": self.max_pivots,
            "max_expectation_terms": self.max_expectation_terms,
            "max_rejections": self.max_rejections,
            "lp_dump": self.lp_dump,
        }
