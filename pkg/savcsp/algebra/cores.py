import logging

from dataclasses import dataclass, field
from typing import Sequence

from ..decorators import method_params
from ..model import Instance, Language, crisp_relation
from ..utils import check_cap
from .operations import Operation
from .support import SupportTester, SuppMembershipAnswer

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoreResult:
    """A core of a language.
    'labels' lists, for every label of the core, the original label it stands for; 'chain' holds each
    non-bijective unary support operation used with the labels of the sub-language it restricted to."""

    language: Language
    labels: tuple[int, ...]
    chain: tuple[tuple[Operation, tuple[int, ...], SuppMembershipAnswer], ...] = field(default_factory=tuple)

    @property
    def domain_size(self) -> int:
        return self.language.domain_size


def constant_name(label: int) -> str:
    return f"c_{label}"


def add_constants(language: Language) -> Language:
    """Gamma u C_D: one crisp unary singleton relation {(a)} per label a, named 'c_<a>'.
    :param language: Language object"""
    d = language.domain_size
    return language.union(crisp_relation(constant_name(a), d, 1, [(a,)]) for a in range(d))


def restrict_language(language: Language, labels: Sequence[int]) -> Language:
    """Gamma[S]: the sub-language induced by a subset S of the domain, relabelled to 0..|S|-1.
    :param language: Language object
    :param labels: ascending labels of S"""
    return language.restrict(sorted(labels))


def restrict_instance(instance: Instance, language: Language) -> Instance:
    """The same constraints over a sub-language carrying the same relation names, such as a core.
    :param instance: Instance object
    :param language: Language object"""
    return instance.with_language(language)


class CoreFinder(SupportTester):
    """Compute cores by restricting along non-bijective unary support operations."""

    def __init__(self, **kwargs) -> None:
        """Initialise class.
        :param **kwargs: caps accepted by Workbench"""
        super().__init__(**kwargs)
        self._method_kwargs["core_of"] = {"req_params": ["language"]}

    @method_params
    def core_of(self, language: Language = None) -> CoreResult:
        """Repeatedly pick the non-bijective unary operation in supp(Gamma) with the smallest image (ties broken by
        table order), restrict the language to its image, and stop when every unary support operation is a bijection.
        :param language: Language object"""
        labels = tuple(range(language.domain_size))
        chain = []

        while language.domain_size > 1:
            check_cap(language.domain_size, self.MAX_CORE_DOMAIN, "core computation domain")
            candidates = [h for h in self.polymorphisms(language, 1) if not h.is_bijective]
            candidates.sort(key=lambda h: (len(h.image), h.table))
            chosen = None

            for h in candidates:
                answer = self.supp_membership(h, language)

                if answer.member:
                    chosen = (h, answer)
                    break

            if chosen is None:
                break

            h, answer = chosen
            image = h.image
            LOG.debug("core step: restricting %d labels to %s", language.domain_size, [labels[i] for i in image])
            chain.append((h, tuple(labels[i] for i in image), answer))
            language = language.restrict(image)
            labels = tuple(labels[i] for i in image)

        LOG.info("core has %d labels: %s", len(labels), list(labels))
        return CoreResult(language, labels, tuple(chain))
