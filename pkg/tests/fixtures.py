"""Small languages and instances shared by the test modules."""

from savcsp.generators import (
    Generator,
    LanguageShape,
    cut_relation,
    disequality_relation,
    gen_min_uncut,
    unary_relation,
    xor_relation,
)
from savcsp.model import Constraint, Instance, Language, crisp_relation
from savcsp.utils import make_rng


def cut_language() -> Language:
    return Language(2, [cut_relation()])


def xor_language() -> Language:
    return Language(2, [xor_relation()])


def cut_edge() -> Instance:
    """A single phi_cut(x0, x1) constraint."""
    return Instance(cut_language(), 2, (Constraint("cut", (0, 1)),))


def xor_triangle() -> Instance:
    return gen_min_uncut("triangle")


def unary_instance() -> Instance:
    """phi_u(x0) with phi_u(0) = 0, phi_u(1) = 1."""
    return Instance(Language(2, [unary_relation([0, 1])]), 1, (Constraint("u", (0,)),))


def empty_instance() -> Instance:
    """Two variables and a crisp relation without any allowed tuple."""
    language = Language(2, [cut_relation(), crisp_relation("never", 2, 2, [])])
    return Instance(language, 2, (Constraint("cut", (0, 1)), Constraint("never", (0, 1))))


def neq_network_instance(edges, num_vars: int) -> Instance:
    language = Language(2, [disequality_relation()])
    return Instance(language, num_vars, tuple(Constraint("neq", edge) for edge in edges))



def random_language(
    seed: int, domain_size: int, arities=(1, 2), p_inf: float = 0.0, high: int = 5, crisp: bool = False
) -> Language:
    """One unconstrained random relation per entry of arities, named r0, r1, ..."""
    rng, shape = make_rng(seed), LanguageShape(tuple(arities), high=high, p_inf=p_inf, crisp=crisp)
    relations = [
        Generator().random_relation(rng, f"r{i}", domain_size, arity, shape) for i, arity in enumerate(arities)
    ]

    return Language(domain_size, relations)


CUT_LANGUAGE_TEXT = """# phi_cut on two labels
domain 2
relation cut 2
default 0
0 1 : 1
1 0 : 1
"""
