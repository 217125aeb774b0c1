"""Description complexity of unary structures.

Synthesis of minimal-size first-order descriptions of tabular Boolean data,
exact verification by model checking, lower bounds by formula size games,
brute-force exact complexity at desk scale, and the entropy bound curves.
"""

from .logic import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Neq,
    NegPred,
    Or,
    Pred,
    PrenexFormula,
    format_formula,
    negate,
    parse,
    qrank,
    size,
    to_prenex,
)
from .structures import (
    ClassTuple,
    TypeProfile,
    UnaryStructure,
    Vocabulary,
    class_size,
    class_tuple_of,
    default_vocabulary,
    enumerate_class_tuples,
    enumerate_profiles,
    is_balanced,
    multinomial,
    profile_of,
    representative,
    sample_uniform,
    structure_from_csv,
    structure_from_csv_text,
)
from .semantics import defines, defines_class, evaluate, satisfies_profile
from .synthesis import (
    at_least_formula,
    at_most_formula,
    synthesize_d,
    synthesize_full,
    type_formula,
    upper_bound,
    upper_bound_d,
)
from .game import decide, lower_bound_witness, min_separating_size
from .oracle import EnumerationBudget, enumerate_sentences, exact_C, exact_Cd
from .entropy import (
    boltzmann_entropy,
    boltzmann_entropy_d,
    entropy_gap_check,
    fo_bound_curves,
    fod_bound_steps,
    region_membership,
    shannon_entropy,
)

__version__ = "0.1.0"
