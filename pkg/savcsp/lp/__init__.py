from .program import LinearProgram, LpBuilder, LpOutcome, LpRow
from .simplex import SimplexSolver, verify_certificate
