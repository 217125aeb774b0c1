"""Evaluation of formulas on structures, and the defining-sentence checks.

Two evaluators live here.  ``evaluate`` is the plain Tarskian recursion over
actual domain elements, O(n^qrank * size); it is the reference everything else
is checked against.  ``satisfies_profile`` evaluates a sentence directly on an
isomorphism class: since elements of equal type are interchangeable, a
quantifier only needs to branch over element *orbits* (reuse one of the
already-pinned elements, or take a fresh element of some type that still has
spare points), with memoization on the orbit pattern.  The two agree
everywhere (isomorphism invariance); the test suite checks this exhaustively
at small scale.

``defines`` sweeps profiles rather than raw structures, which is what makes
whole-space verification feasible: there are C(n+t-1, t-1) profiles against
2^(kn) structures.
"""

from __future__ import annotations

from typing import Mapping

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
    free_variables,
    qrank,
)
from .structures import (
    ClassTuple,
    TypeProfile,
    UnaryStructure,
    Vocabulary,
    class_tuple_of_profile,
    enumerate_profiles,
    profile_of,
)


class UnboundVariableError(ValueError):
    """A free variable was evaluated without a binding."""


class NonSentenceError(ValueError):
    """An operation that needs a sentence was given a formula with free variables."""


def evaluate(s: UnaryStructure, assignment: Mapping[int, int], f: Formula) -> bool:
    """Tarskian truth of f in s under the given (partial) assignment."""
    n = s.n
    env = dict(assignment)
    for e in env.values():
        if not 1 <= e <= n:
            raise ValueError(f"assigned element {e} outside domain 1..{n}")

    def ev(node: Formula) -> bool:
        if isinstance(node, Eq):
            return _lookup(node.left) == _lookup(node.right)
        if isinstance(node, Neq):
            return _lookup(node.left) != _lookup(node.right)
        if isinstance(node, Pred):
            return s.has_predicate(_lookup(node.var), node.pred)
        if isinstance(node, NegPred):
            return not s.has_predicate(_lookup(node.var), node.pred)
        if isinstance(node, And):
            return ev(node.left) and ev(node.right)
        if isinstance(node, Or):
            return ev(node.left) or ev(node.right)
        if isinstance(node, Exists):
            return _quantify(node.var, node.body, any_wins=True)
        if isinstance(node, Forall):
            return _quantify(node.var, node.body, any_wins=False)
        raise TypeError(f"not a formula node: {node!r}")

    def _lookup(var: int) -> int:
        try:
            return env[var]
        except KeyError:
            raise UnboundVariableError(f"variable x{var} is unbound") from None

    def _quantify(var: int, body: Formula, any_wins: bool) -> bool:
        old = env.get(var)
        try:
            for e in range(1, n + 1):
                env[var] = e
                if ev(body) == any_wins:
                    return any_wins
            return not any_wins
        finally:
            if old is None:
                env.pop(var, None)
            else:
                env[var] = old

    return ev(f)


def satisfies_profile(vocab: Vocabulary, p: TypeProfile, f: Formula) -> bool:
    """Truth of the sentence f on (any structure of) the profile p.

    Orbit evaluation: the state is which distinct elements are pinned by the
    live variable bindings and what their types are; equality of variables is
    equality of pinned slots.
    """
    if free_variables(f):
        raise NonSentenceError("satisfies_profile needs a sentence")
    if len(p.counts) != vocab.t:
        raise ValueError("profile length does not match vocabulary")
    if p.n < 1:
        raise ValueError("empty profile")

    counts = p.counts
    t = vocab.t
    slot_types: list[int] = []  # grows per branch, truncated on backtrack
    bindings: dict[int, int] = {}  # var -> slot id
    memo: dict[tuple, bool] = {}

    def canon() -> tuple:
        ranks: dict[int, int] = {}
        out = []
        for var in sorted(bindings):
            slot = bindings[var]
            rank = ranks.setdefault(slot, len(ranks))
            out.append((var, rank, slot_types[slot]))
        return tuple(out)

    def ev(node: Formula) -> bool:
        if isinstance(node, Eq):
            return bindings[node.left] == bindings[node.right]
        if isinstance(node, Neq):
            return bindings[node.left] != bindings[node.right]
        if isinstance(node, Pred):
            return bool((slot_types[bindings[node.var]] >> node.pred) & 1)
        if isinstance(node, NegPred):
            return not ((slot_types[bindings[node.var]] >> node.pred) & 1)
        if isinstance(node, And):
            return ev(node.left) and ev(node.right)
        if isinstance(node, Or):
            return ev(node.left) or ev(node.right)
        any_wins = isinstance(node, Exists)
        key = (id(node), canon())
        cached = memo.get(key)
        if cached is not None:
            return cached
        result = _quantify(node.var, node.body, any_wins)
        memo[key] = result
        return result

    def _quantify(var: int, body: Formula, any_wins: bool) -> bool:
        old = bindings.pop(var, None)
        live = set(bindings.values())
        used_by_type = [0] * t
        for slot in live:
            used_by_type[slot_types[slot]] += 1
        mark = len(slot_types)
        try:
            # reuse one of the pinned elements
            for slot in sorted(live):
                bindings[var] = slot
                if ev(body) == any_wins:
                    return any_wins
            # or pin a fresh element of any type with spare points
            for j in range(t):
                if counts[j] - used_by_type[j] >= 1:
                    slot_types.append(j)
                    bindings[var] = len(slot_types) - 1
                    result = ev(body)
                    del slot_types[-1]
                    if result == any_wins:
                        return any_wins
            return not any_wins
        finally:
            del slot_types[mark:]
            if old is None:
                bindings.pop(var, None)
            else:
                bindings[var] = old

    return ev(f)


def defines(s: UnaryStructure, f: Formula) -> bool:
    """True iff f holds on exactly the structures isomorphic to s among size-n ones."""
    if free_variables(f):
        raise NonSentenceError("defines needs a sentence")
    vocab = s.vocab
    target = profile_of(s)
    for p in enumerate_profiles(vocab, s.n):
        if satisfies_profile(vocab, p, f) != (p == target):
            return False
    return True


def defines_class(vocab: Vocabulary, c: ClassTuple, f: Formula) -> bool:
    """True iff f holds on exactly the size-n structures whose capped counts equal c."""
    if free_variables(f):
        raise NonSentenceError("defines_class needs a sentence")
    r = qrank(f)
    if r > c.d:
        raise ValueError(f"quantifier rank {r} exceeds the counting threshold {c.d}")
    for p in enumerate_profiles(vocab, c.n):
        in_class = class_tuple_of_profile(p, c.d) == c
        if satisfies_profile(vocab, p, f) != in_class:
            return False
    return True


def structure_satisfies(s: UnaryStructure, f: Formula) -> bool:
    """Sentence truth on a concrete structure, via its profile."""
    if free_variables(f):
        raise NonSentenceError("expected a sentence")
    return satisfies_profile(s.vocab, profile_of(s), f)


__all__ = [
    "UnboundVariableError",
    "NonSentenceError",
    "evaluate",
    "satisfies_profile",
    "structure_satisfies",
    "defines",
    "defines_class",
]
