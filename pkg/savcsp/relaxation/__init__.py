from .program import SaProgram, SaSolution, SaTerm, build_program, objective_of, pad_name
from .solver import DualSum, Relaxation, source_language
from .minimality import CrispNetwork, establish_minimality, is_minimal
