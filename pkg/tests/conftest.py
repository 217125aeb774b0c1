import hypothesis.strategies as st

from unarydc import logic
from unarydc.structures import default_vocabulary

VOCAB1 = default_vocabulary(1)
VOCAB2 = default_vocabulary(2)


def formula_strategy(k: int = 2, max_var: int = 3, max_leaves: int = 6):
    """Random NNF formulas (possibly with free variables)."""
    variables = st.integers(1, max_var)
    atoms = st.one_of(
        st.builds(logic.Pred, st.integers(0, k - 1), variables),
        st.builds(logic.NegPred, st.integers(0, k - 1), variables),
        st.builds(logic.Eq, variables, variables),
        st.builds(logic.Neq, variables, variables),
    )
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.builds(logic.And, sub, sub),
            st.builds(logic.Or, sub, sub),
            st.builds(logic.Exists, variables, sub),
            st.builds(logic.Forall, variables, sub),
        ),
        max_leaves=max_leaves,
    )


def close_formula(f: logic.Formula) -> logic.Formula:
    """Quantify away free variables to get a sentence."""
    for v in sorted(logic.free_variables(f)):
        f = logic.Exists(v, f)
    return f
