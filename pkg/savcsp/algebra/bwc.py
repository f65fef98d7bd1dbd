import logging

from dataclasses import dataclass, replace
from typing import Iterable, Optional

from ..decorators import cached_by_fingerprint, method_params
from ..model import Language
from ..utils import ResourceCapError
from .clones import clone_part, is_wnu, satisfies_bwc_identity, wnu_operations
from .cores import CoreFinder, add_constants
from .operations import (
    Operation,
    is_majority,
    is_minority,
    is_stp,
    majority,
    majority_from_stp,
    tournaments,
)
from .polymorphisms import is_polymorphism_of

LOG = logging.getLogger(__name__)

VERDICTS = ("yes", "no", "unknown")


@dataclass(frozen=True)
class BwcVerdict:
    """Outcome of the bounded width test.
    A 'yes' carries a ternary WNU and a 4-ary WNU from the support clone with f(y,x,x) = g(y,x,x,x);
    'path' names the search that settled it."""

    verdict: str
    path: str
    ternary: Optional[Operation] = None
    quaternary: Optional[Operation] = None
    majority: Optional[Operation] = None
    reason: str = ""
    core_labels: tuple[int, ...] = ()

    @property
    def is_yes(self) -> bool:
        return self.verdict == "yes"


def chain_ternary(t: Operation) -> Operation:
    """t(t(x,y),z) for a binary operation t."""
    return Operation.from_function(3, t.domain_size, lambda x, y, z: t(t(x, y), z), f"{t.name}3")


def chain_quaternary(t: Operation) -> Operation:
    """t(t(t(x1,x2),x3),x4) for a binary operation t."""
    return Operation.from_function(4, t.domain_size, lambda a, b, c, e: t(t(t(a, b), c), e), f"{t.name}4")


def padded_quaternary(m: Operation) -> Operation:
    """g(x1,x2,x3,x4) = m(x1,x2,x3) for a ternary operation m."""
    return Operation.from_function(4, m.domain_size, lambda a, b, c, _: m(a, b, c), f"{m.name}4")


def _witness(f: Operation, g: Operation) -> bool:
    return is_wnu(f) and is_wnu(g) and satisfies_bwc_identity(f, g)


class BoundedWidthTester(CoreFinder):
    """Decide whether the support clone holds a ternary WNU f and a 4-ary WNU g with f(y,x,x) = g(y,x,x,x)."""

    def __init__(self, **kwargs) -> None:
        """Initialise class.
        :param **kwargs: caps accepted by Workbench"""
        super().__init__(**kwargs)
        self._method_kwargs["bwc_test"] = {"req_params": ["language"], "validate": {"search": ["full", "fast"]}}
        self._method_kwargs["bwc_verdict"] = {"req_params": ["language"]}

    @method_params
    def bwc_test(
        self, language: Language = None, candidates: Iterable[tuple[Operation, Operation]] = (), search: str = "full"
    ) -> BwcVerdict:
        """Test the bounded width condition on a language, normally a core with constants added.
        Order of search: user candidate pairs, tournament operations and a majority in the support clone, then the
        exhaustive Boolean search over ternary WNUs; anything else is 'unknown'.
        :param language: Language object
        :param candidates: optional (ternary, 4-ary) operation pairs to try first
        :param search: 'full', or 'fast' to stop after the tournament and majority searches"""
        d = language.domain_size

        if d == 1:
            f, g = Operation(3, 1, [0], "unit3"), Operation(4, 1, [0], "unit4")
            return BwcVerdict("yes", "single-label", f, g, reason="every operation on one label is a WNU")

        for f, g in candidates:
            if _witness(f, g) and self.in_support(f, language) and self.in_support(g, language):
                LOG.info("bwc: candidate pair %s, %s accepted", f.name, g.name)
                return BwcVerdict("yes", "candidate", f, g)

            LOG.debug("bwc: candidate pair %s, %s rejected", f.name, g.name)

        try:
            verdict = self._fast_path(language)
        except ResourceCapError as e:
            LOG.debug("bwc: fast path skipped, %s", e)
            verdict = None

        if verdict is not None:
            return verdict

        if search == "fast":
            return BwcVerdict("unknown", "fast", reason="no tournament operation or majority in the support clone")

        if d == 2:
            return self._boolean_path(language)

        return BwcVerdict(
            "unknown", "cap", reason=f"no exhaustive WNU search on {d} labels; supply candidate pairs to decide"
        )

    def _fast_path(self, language: Language) -> Optional[BwcVerdict]:
        d = language.domain_size
        found = [t for t in tournaments(d) if is_polymorphism_of(t, language) and self.in_support(t, language)]

        if found:
            t = found[0]
            f, g = chain_ternary(t), chain_quaternary(t)
            stp = next(((a, b) for a in found for b in found if is_stp(a, b)), None)
            maj = majority_from_stp(*stp) if stp else None

            if maj is not None and not is_majority(maj):
                maj = None

            if _witness(f, g):
                LOG.info("bwc: tournament operation %s in the support clone", t.name)
                return BwcVerdict("yes", "tournament", f, g, majority=maj)

        if d == 2:
            m = majority(d)

            if self.in_support(m, language):
                LOG.info("bwc: majority in the support clone")
                return BwcVerdict("yes", "majority", m, padded_quaternary(m), majority=m)

        return None

    def _boolean_path(self, language: Language) -> BwcVerdict:
        members = [f for f in wnu_operations(2, 3, self.max_ops) if self.in_support(f, language)]
        LOG.debug("bwc: ternary WNUs in the support clone: %s", [f.name for f in members])

        if not members:
            return BwcVerdict("no", "boolean", reason="the support clone has no ternary WNU")

        quaternary = sorted(g for g in clone_part(members, 4, 2, self.max_ops) if is_wnu(g))

        for f in members:
            for g in quaternary:
                if satisfies_bwc_identity(f, g):
                    return BwcVerdict("yes", "boolean", f, g)

        if all(is_minority(f) for f in members):
            # idempotent Boolean clones whose only ternary WNU is the minority lie inside the affine clone,
            # which has no 4-ary WNU
            return BwcVerdict("no", "boolean", reason="the only ternary WNU in the support clone is the minority")

        return BwcVerdict("unknown", "boolean", reason="no 4-ary WNU generated from the ternary WNUs found")

    @method_params
    @cached_by_fingerprint(lambda language: language.fingerprint())
    def bwc_verdict(self, language: Language = None) -> BwcVerdict:
        """Core, then constants, then the bounded width test; cached per canonical language text.
        When the core has a single label the full-domain language with constants is searched first, so that
        the verdict carries informative witness operations.
        :param language: Language object"""
        core = self.core_of(language)

        if core.domain_size == 1:
            full = self.bwc_test(add_constants(language), search="fast")

            if full.is_yes:
                return replace(full, core_labels=core.labels)

        verdict = self.bwc_test(add_constants(core.language))
        LOG.info("bwc verdict %s via %s on a core with %d labels", verdict.verdict, verdict.path, core.domain_size)

        return replace(verdict, core_labels=core.labels)
