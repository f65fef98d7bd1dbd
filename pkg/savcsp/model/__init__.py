from .values import INF, ZERO, ExtRational, ext, ext_sum
from .relations import Domain, Language, WeightedRelation, constant_relation, crisp_relation
from .instances import (
    Assignment,
    Constraint,
    Instance,
    assignment_values,
    evaluate,
    feas_relation,
    minimum_and_optima,
    opt_relation,
)
from .formats import (
    load_instance,
    load_language,
    parse_instance,
    parse_language,
    save_instance,
    save_language,
    serialize_instance,
    serialize_language,
)
