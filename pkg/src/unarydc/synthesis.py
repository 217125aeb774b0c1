"""Construction of linear-size defining sentences and their size bounds.

A structure is pinned down by (a) saying exactly which types are realized and
(b) counting realizers per type.  Counting is done with two reusable schemas
over a type list T = (pi_1, ..., pi_l) ordered ascending by realizer count and
a weakly increasing positive count sequence m = (m_1, ..., m_r), r <= l:

* the at-least schema: one block of m_r - 1 universals and one existential,
  charging 3*m_r + 4k|T| - 3 instead of the naive quadratic distinctness
  clique;
* the at-most schema: a universal, m_r - 1 existential witnesses and a final
  universal, charging 3*m_r + 6k|T| - 2k.

The full-logic synthesizer either counts every type from below (sizes sum to
n, so lower bounds pin everything) or counts all but the most frequent type
from both sides; it returns the smaller sentence.  The threshold-d synthesizer
does the same on capped count tuples, keeping quantifier rank within d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

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
    big_and,
    big_or,
    negate,
    size,
)
from .structures import ClassTuple, TypeProfile, UnaryStructure, Vocabulary, profile_of


@dataclass(frozen=True)
class SynthesisPlan:
    """Realized types in ascending order of realizer count, with their counts."""

    realized_types: tuple[int, ...]
    counts: tuple[int, ...]
    variant: str  # phi | psi | phi_d | psi_d


def plan_for_profile(p: TypeProfile) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Realized types ascending by (count, type index); ties by type index."""
    realized = sorted((c, j) for j, c in enumerate(p.counts) if c > 0)
    return tuple(j for _, j in realized), tuple(c for c, _ in realized)


def type_formula(vocab: Vocabulary, type_index: int, var: int) -> Formula:
    """The conjunction of k literals pinning the type of x; size 2k - 1."""
    literals: list[Formula] = []
    for i in range(vocab.k):
        if (type_index >> i) & 1:
            literals.append(Pred(i, var))
        else:
            literals.append(NegPred(i, var))
    return big_and(literals)


def negated_type_formula(vocab: Vocabulary, type_index: int, var: int) -> Formula:
    return negate(type_formula(vocab, type_index, var))


def _validate_counts(mbar: Sequence[int], types: Sequence[int]) -> None:
    if not mbar:
        raise ValueError("empty count sequence")
    if len(mbar) > len(types):
        raise ValueError("more counts than types")
    if any(m < 1 for m in mbar):
        raise ValueError("counts must be positive")
    if any(a > b for a, b in zip(mbar, mbar[1:])):
        raise ValueError("counts must be weakly increasing")


def at_least_formula(
    vocab: Vocabulary, types: Sequence[int], mbar: Sequence[int]
) -> Formula | None:
    """On structures realizing exactly `types`, true iff type_i has >= m_i realizers.

    Returns None for m_r = 1, where the constraint is already implied by every
    realized type having at least one point; the schema itself would leave its
    first variable unquantified.
    """
    _validate_counts(mbar, types)
    m_r = mbar[-1]
    if m_r == 1:
        return None
    r = len(mbar)
    y = m_r  # variables x_1 .. x_{m_r - 1}, then y
    by_value: dict[int, list[int]] = {}
    for tj, m in zip(types, mbar):
        by_value.setdefault(m, []).append(tj)

    # psi chain, built from level m_r down to level 2
    psi: Formula | None = None
    for i in range(m_r, 1, -1):
        pairs = [
            And(type_formula(vocab, tj, 1), type_formula(vocab, tj, y))
            for tj in by_value.get(i, [])
        ]
        if psi is None:
            level: Formula = big_or(pairs)  # level m_r always has a group
        elif pairs:
            level = Or(big_or(pairs), psi)
        else:
            level = psi
        psi = And(Neq(y, i - 1), level)
    assert psi is not None

    ones = [type_formula(vocab, tj, 1) for tj in by_value.get(1, [])]
    body: Formula = Or(big_or(ones), psi) if ones else psi

    ignored = [type_formula(vocab, tj, 1) for tj in types[r:]]
    if ignored:
        body = Or(big_or(ignored), body)

    out: Formula = Exists(y, body)
    for v in range(m_r - 1, 0, -1):
        out = Forall(v, out)
    return out


def at_most_formula(vocab: Vocabulary, types: Sequence[int], mbar: Sequence[int]) -> Formula:
    """On structures realizing exactly `types`, true iff type_i has <= m_i realizers."""
    _validate_counts(mbar, types)
    m_r = mbar[-1]
    r = len(mbar)
    y = m_r + 1  # variables x_1 .. x_{m_r}, then y
    by_value: dict[int, list[int]] = {}
    for tj, m in zip(types, mbar):
        by_value.setdefault(m, []).append(tj)

    # theta chain, level m_r down to level 1
    theta: Formula | None = None
    for i in range(m_r, 0, -1):
        group = by_value.get(i, [])
        if theta is None:
            # level m_r: no descent below
            theta = Or(Eq(y, i), big_or(
                [And(type_formula(vocab, tj, 1), negated_type_formula(vocab, tj, y)) for tj in group]
            ))
            continue
        if group:
            pairs = big_or(
                [And(type_formula(vocab, tj, 1), negated_type_formula(vocab, tj, y)) for tj in group]
            )
            guard = big_and([negated_type_formula(vocab, tj, 1) for tj in group])
            theta = Or(Eq(y, i), Or(pairs, And(guard, theta)))
        else:
            theta = Or(Eq(y, i), theta)
    assert theta is not None

    body: Formula = theta
    ignored = [type_formula(vocab, tj, 1) for tj in types[r:]]
    if ignored:
        body = Or(big_or(ignored), body)

    out: Formula = Forall(y, body)
    for v in range(m_r, 1, -1):
        out = Exists(v, out)
    return Forall(1, out)


def _support_parts(vocab: Vocabulary, types: Sequence[int]) -> list[Formula]:
    """'Exactly these types are realized': an existential per type plus one universal."""
    parts: list[Formula] = [Exists(1, type_formula(vocab, tj, 1)) for tj in types]
    parts.append(Forall(1, big_or([type_formula(vocab, tj, 1) for tj in types])))
    return parts


def synthesize_full_profile(vocab: Vocabulary, p: TypeProfile) -> Formula:
    """The smaller of the count-all-from-below and count-all-but-largest sentences."""
    if p.n < 1:
        raise ValueError("empty profile")
    types, counts = plan_for_profile(p)
    parts = _support_parts(vocab, types)

    if len(types) == 1:
        # single realized type: the support sentence already defines the model
        return big_and(parts)

    phi_conjuncts = list(parts)
    lower_all = at_least_formula(vocab, types, counts)
    if lower_all is not None:
        phi_conjuncts.append(lower_all)
    phi = big_and(phi_conjuncts)

    psi_conjuncts = list(parts)
    head = counts[:-1]
    lower_head = at_least_formula(vocab, types, head)
    if lower_head is not None:
        psi_conjuncts.append(lower_head)
    psi_conjuncts.append(at_most_formula(vocab, types, head))
    psi = big_and(psi_conjuncts)

    return phi if size(phi) <= size(psi) else psi


def synthesize_full(s: UnaryStructure) -> Formula:
    return synthesize_full_profile(s.vocab, profile_of(s))


def _ordered_class_entries(c: ClassTuple) -> tuple[list[tuple[int, int]], int]:
    """Positive entries as (count, type) ascending by (count, type); r = #below-d."""
    entries = sorted((mi, j) for j, mi in enumerate(c.m) if mi > 0)
    r = sum(1 for mi, _ in entries if mi < c.d)
    return entries, r


def synthesize_d(vocab: Vocabulary, c: ClassTuple) -> Formula:
    """A defining sentence for the capped-count class, with quantifier rank <= d.

    Always builds the general form (at-least for every positive entry, at-most
    for the below-threshold ones).  When at most one entry sits at the
    threshold, also builds the cheaper form that skips counting the largest
    type from below, and returns the smaller of the two.
    """
    if len(c.m) != vocab.t:
        raise ValueError("tuple length does not match vocabulary")
    entries, r = _ordered_class_entries(c)
    if not entries:
        raise ValueError("no realized types")
    types = [j for _, j in entries]
    counts = [mi for mi, _ in entries]
    parts = _support_parts(vocab, types)

    phi_conjuncts = list(parts)
    lower_all = at_least_formula(vocab, types, counts)
    if lower_all is not None:
        phi_conjuncts.append(lower_all)
    if r >= 1:
        phi_conjuncts.append(at_most_formula(vocab, types, counts[:r]))
    phi_d = big_and(phi_conjuncts)

    at_threshold = len(entries) - r
    if at_threshold > 1:
        return phi_d

    # at most one entry at the threshold: count everything but the largest type
    head = counts[:-1]
    psi_conjuncts = list(parts)
    if head:
        lower_head = at_least_formula(vocab, types, head)
        if lower_head is not None:
            psi_conjuncts.append(lower_head)
        psi_conjuncts.append(at_most_formula(vocab, types, head))
    psi_d = big_and(psi_conjuncts)

    return phi_d if size(phi_d) <= size(psi_d) else psi_d


def upper_bound_profile(vocab: Vocabulary, p: TypeProfile) -> int:
    """Closed-form bound min(3|pi_l|, 6|pi_{l-1}|) + c_tau (c_tau alone if one type)."""
    _, counts = plan_for_profile(p)
    if len(counts) == 1:
        return vocab.c_tau
    return min(3 * counts[-1], 6 * counts[-2]) + vocab.c_tau


def upper_bound(s: UnaryStructure) -> int:
    return upper_bound_profile(s.vocab, profile_of(s))


def upper_bound_d(vocab: Vocabulary, c: ClassTuple) -> int:
    """Closed-form threshold-d bound: 3d + 3m_r + c_tau, and 6*m_{t-1} + c_tau
    whenever the second largest entry is below d."""
    ordered = sorted(c.m)
    below = [mi for mi in ordered if mi < c.d]
    m_r = below[-1] if below else 0
    bound = 3 * c.d + 3 * m_r + vocab.c_tau
    if ordered[-2] < c.d:
        bound = min(bound, 6 * ordered[-2] + vocab.c_tau)
    return bound


def global_upper_bound(vocab: Vocabulary, n: int) -> int:
    """Every size-n structure is definable within 2n + c_tau."""
    return 2 * n + vocab.c_tau


def global_upper_bound_d(vocab: Vocabulary, d: int) -> int:
    """Every threshold-d class is definable within 6d - 3 + c_tau."""
    return 6 * d - 3 + vocab.c_tau
