from .operations import (
    FractionalOperation,
    Operation,
    compose,
    compose_fractional,
    constant,
    identity,
    is_majority,
    is_minority,
    is_stp,
    is_tournament,
    majority,
    majority_from_stp,
    majority_from_stp_mjn,
    majority_minority,
    max_op,
    min_op,
    minority,
    mjn,
    named_fractional,
    named_operation,
    projection,
    projections,
    submodular,
    tau,
    tournament,
    tournament_pair,
    tournaments,
)
from .polymorphisms import FpolCheck, enumerate_polymorphisms, is_fractional_polymorphism, is_polymorphism
from .clones import clone_generate, clone_part, is_wnu, satisfies_bwc_identity, wnu_operations
from .support import SupportTester, SuppMembershipAnswer
from .cores import CoreFinder, CoreResult, add_constants, restrict_instance, restrict_language
from .bwc import BoundedWidthTester, BwcVerdict
from .gadgets import OptGadget, gadget_multiplier, opt_gadget
from .conservative import ConservativeReport, conservative_dichotomy, is_conservative_language
from .formats import OperationFile, load_operations, parse_operations, save_operations, serialize_fractional
