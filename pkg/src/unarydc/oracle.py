"""Brute-force ground truth: enumerate prenex sentences by size and find the
smallest one defining a structure or a capped-count class.

Restricting to prenex normal form with fresh variables x_1..x_q loses nothing:
any sentence converts to a prenex sentence of the same size, so the minimum
over the enumerated stream is the true description complexity (relative to
the size and quantifier budget).

Duplicates are pruned with a conservative canonical key: commutative children
are sorted, variables are renamed by first occurrence within each block of
identical quantifiers, and the result is sorted again.  Equal keys always mean
logically equivalent sentences of equal size, so dropping them is safe;
distinct keys may still be equivalent, which merely costs time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

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
    EXISTS,
    FORALL,
    size as formula_size,
)
from .semantics import evaluate, satisfies_profile
from .structures import (
    ClassTuple,
    TypeProfile,
    UnaryStructure,
    Vocabulary,
    class_tuple_of_profile,
    enumerate_profiles,
    profile_of,
)


class EnumerationBudgetExceeded(RuntimeError):
    """The candidate stream was cut off by the node budget (not completed)."""


class ComplexityUndetermined(RuntimeError):
    """No definer found within the budget; carries the implied lower bound."""

    def __init__(self, lower_bound: int):
        super().__init__(f"C > {lower_bound - 1}")
        self.lower_bound = lower_bound


@dataclass(frozen=True)
class EnumerationBudget:
    max_size: int
    max_quantifiers: int | None = None
    max_variables: int | None = None
    node_budget: int = 50_000_000

    def __post_init__(self) -> None:
        if self.max_size < 1:
            raise ValueError("max_size must be >= 1")
        if self.max_quantifiers is None:
            object.__setattr__(self, "max_quantifiers", self.max_size - 1)
        if self.max_variables is None:
            object.__setattr__(self, "max_variables", self.max_quantifiers)
        if self.max_quantifiers > self.max_size:
            raise ValueError("max_quantifiers cannot exceed max_size")
        if self.max_variables > self.max_quantifiers:
            raise ValueError("max_variables cannot exceed max_quantifiers")

    @property
    def quantifier_cap(self) -> int:
        return min(self.max_quantifiers, self.max_variables)


def _atoms(vocab: Vocabulary, num_vars: int) -> list[Formula]:
    atoms: list[Formula] = []
    for v in range(1, num_vars + 1):
        for p in range(vocab.k):
            atoms.append(Pred(p, v))
    for v in range(1, num_vars + 1):
        for p in range(vocab.k):
            atoms.append(NegPred(p, v))
    for i in range(1, num_vars + 1):
        for j in range(i + 1, num_vars + 1):
            atoms.append(Eq(i, j))
    for i in range(1, num_vars + 1):
        for j in range(i + 1, num_vars + 1):
            atoms.append(Neq(i, j))
    for i in range(1, num_vars + 1):
        atoms.append(Eq(i, i))
    for i in range(1, num_vars + 1):
        atoms.append(Neq(i, i))
    return atoms


def _matrices(msize: int, atoms: list[Formula]) -> Iterator[Formula]:
    if msize == 1:
        yield from atoms
        return
    for left_size in range(1, msize - 1, 2):
        right_size = msize - 1 - left_size
        for left in _matrices(left_size, atoms):
            for right in _matrices(right_size, atoms):
                yield And(left, right)
                yield Or(left, right)


def _struct_key(f: Formula):
    if isinstance(f, Eq):
        return (0, f.left, f.right)
    if isinstance(f, Neq):
        return (1, f.left, f.right)
    if isinstance(f, Pred):
        return (2, f.pred, f.var)
    if isinstance(f, NegPred):
        return (3, f.pred, f.var)
    if isinstance(f, And):
        return (4, _struct_key(f.left), _struct_key(f.right))
    if isinstance(f, Or):
        return (5, _struct_key(f.left), _struct_key(f.right))
    raise TypeError("matrix must be quantifier-free")


def _sort_norm(f: Formula) -> Formula:
    if isinstance(f, (And, Or)):
        left = _sort_norm(f.left)
        right = _sort_norm(f.right)
        if _struct_key(left) > _struct_key(right):
            left, right = right, left
        return type(f)(left, right)
    return f


def _atom_vars(f: Formula, out: list[int]) -> None:
    if isinstance(f, (Eq, Neq)):
        out.append(f.left)
        out.append(f.right)
    elif isinstance(f, (Pred, NegPred)):
        out.append(f.var)
    else:
        _atom_vars(f.left, out)
        _atom_vars(f.right, out)


def _rename_map(prefix: tuple[str, ...], matrix: Formula) -> dict[int, int]:
    """Within each maximal block of identical quantifiers, rename variables in
    order of first occurrence in the matrix; unused block variables go last."""
    occurrences: list[int] = []
    _atom_vars(matrix, occurrences)
    rename: dict[int, int] = {}
    start = 0
    while start < len(prefix):
        end = start
        while end < len(prefix) and prefix[end] == prefix[start]:
            end += 1
        block = list(range(start + 1, end + 1))  # variable indices in this block
        block_set = set(block)
        order = []
        for v in occurrences:
            if v in block_set and v not in order:
                order.append(v)
        order.extend(v for v in block if v not in order)
        for target, source in zip(block, order):
            rename[source] = target
        start = end
    return rename


def _apply_rename(f: Formula, rename: dict[int, int]) -> Formula:
    if isinstance(f, Eq):
        return Eq(rename[f.left], rename[f.right])
    if isinstance(f, Neq):
        return Neq(rename[f.left], rename[f.right])
    if isinstance(f, Pred):
        return Pred(f.pred, rename[f.var])
    if isinstance(f, NegPred):
        return NegPred(f.pred, rename[f.var])
    return type(f)(_apply_rename(f.left, rename), _apply_rename(f.right, rename))


def _canonical_key(prefix: tuple[str, ...], matrix: Formula):
    normed = _sort_norm(matrix)
    renamed = _apply_rename(normed, _rename_map(prefix, normed))
    return (prefix, _struct_key(_sort_norm(renamed)))


def enumerate_sentences(vocab: Vocabulary, budget: EnumerationBudget) -> Iterator[PrenexFormula]:
    """All prenex NNF sentences up to the budget, ordered by (size, quantifier
    count, prefix, matrix), with canonical-duplicate pruning.

    For every prenex NNF sentence within the budget, an equivalent sentence of
    the same size and quantifier count is yielded.
    """
    emitted = 0
    for total in range(2, budget.max_size + 1):
        for q in range(1, min(budget.quantifier_cap, total - 1) + 1):
            msize = total - q
            if msize % 2 == 0:
                continue
            atoms = _atoms(vocab, q)
            for prefix_kinds in product((EXISTS, FORALL), repeat=q):
                seen: set = set()
                for matrix in _matrices(msize, atoms):
                    key = _canonical_key(prefix_kinds, matrix)
                    if key in seen:
                        continue
                    seen.add(key)
                    emitted += 1
                    if emitted > budget.node_budget:
                        raise EnumerationBudgetExceeded(
                            f"node budget {budget.node_budget} exhausted"
                        )
                    prefix = tuple((kind, i + 1) for i, kind in enumerate(prefix_kinds))
                    yield PrenexFormula(prefix, matrix)


def exact_C_map(
    vocab: Vocabulary, n: int, budget: EnumerationBudget
) -> dict[TypeProfile, int]:
    """Exact description complexity for every profile of size n that gets a
    definer within the budget (one shared enumeration pass)."""
    profiles = list(enumerate_profiles(vocab, n))
    found: dict[TypeProfile, int] = {}
    for sentence in enumerate_sentences(vocab, budget):
        f = sentence.to_formula()
        sat = [satisfies_profile(vocab, p, f) for p in profiles]
        if sum(sat) == 1:
            target = profiles[sat.index(True)]
            if target not in found:
                found[target] = sentence.size
                if len(found) == len(profiles):
                    break
    return found


def exact_C(s: UnaryStructure, budget: EnumerationBudget) -> int:
    """Size of the smallest defining sentence, exact relative to the budget."""
    vocab = s.vocab
    target = profile_of(s)
    profiles = list(enumerate_profiles(vocab, s.n))
    for sentence in enumerate_sentences(vocab, budget):
        f = sentence.to_formula()
        if not satisfies_profile(vocab, target, f):
            continue
        if all(p == target or not satisfies_profile(vocab, p, f) for p in profiles):
            return sentence.size
    raise ComplexityUndetermined(budget.max_size + 1)


def _quantified_key(f: Formula):
    if isinstance(f, Exists):
        return (6, f.var, _quantified_key(f.body))
    if isinstance(f, Forall):
        return (7, f.var, _quantified_key(f.body))
    if isinstance(f, (And, Or)):
        base = 4 if isinstance(f, And) else 5
        return (base, _quantified_key(f.left), _quantified_key(f.right))
    return _struct_key(f)


class _RankBoundedSpace:
    """All NNF sentences with bounded quantifier rank, grouped by size.

    Prenex form preserves size but not rank, so bounded-rank search must
    enumerate general NNF shapes.  Bound variables are named by scope depth
    (the quantifier at depth j binds x_{j+1}); every sentence alpha-renames
    into this form at equal size and rank, so the space is complete.
    """

    def __init__(self, vocab: Vocabulary, max_rank: int):
        self.vocab = vocab
        self.max_rank = max_rank
        self._cache: dict[tuple[int, int, int], tuple[Formula, ...]] = {}

    def _atoms(self, scope: int) -> list[Formula]:
        out: list[Formula] = []
        for v in range(1, scope + 1):
            for p in range(self.vocab.k):
                out.append(Pred(p, v))
                out.append(NegPred(p, v))
        for v in range(1, scope + 1):
            for w in range(v, scope + 1):
                out.append(Eq(v, w))
                out.append(Neq(v, w))
        return out

    def formulas(self, size: int, rank: int, scope: int) -> tuple[Formula, ...]:
        key = (size, rank, scope)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        out: list[Formula] = []
        if size == 1:
            out.extend(self._atoms(scope))
        else:
            if rank >= 1:
                v = scope + 1
                for body in self.formulas(size - 1, rank - 1, scope + 1):
                    out.append(Exists(v, body))
                    out.append(Forall(v, body))
            for left_size in range(1, size - 1):
                right_size = size - 1 - left_size
                for left in self.formulas(left_size, rank, scope):
                    lk = _quantified_key(left)
                    for right in self.formulas(right_size, rank, scope):
                        if left_size == right_size and lk > _quantified_key(right):
                            continue  # commutative twin is generated elsewhere
                        out.append(And(left, right))
                        out.append(Or(left, right))
        result = tuple(out)
        self._cache[key] = result
        return result


def enumerate_rank_bounded_sentences(
    vocab: Vocabulary, budget: EnumerationBudget, max_rank: int
) -> Iterator[Formula]:
    """All NNF sentences with quantifier rank <= max_rank, by ascending size."""
    space = _RankBoundedSpace(vocab, max_rank)
    emitted = 0
    for size in range(2, budget.max_size + 1):
        for f in space.formulas(size, max_rank, 0):
            emitted += 1
            if emitted > budget.node_budget:
                raise EnumerationBudgetExceeded(
                    f"node budget {budget.node_budget} exhausted"
                )
            yield f


def exact_Cd(vocab: Vocabulary, c: ClassTuple, budget: EnumerationBudget) -> int:
    """Size of the smallest defining sentence with quantifier rank <= d."""
    profiles = list(enumerate_profiles(vocab, c.n))
    membership = [class_tuple_of_profile(p, c.d) == c for p in profiles]
    if not any(membership):
        raise ValueError("empty class")
    for f in enumerate_rank_bounded_sentences(vocab, budget, c.d):
        if all(
            satisfies_profile(vocab, p, f) == in_class
            for p, in_class in zip(profiles, membership)
        ):
            return formula_size(f)
    raise ComplexityUndetermined(budget.max_size + 1)


def separates(
    f: Formula, a: Sequence[UnaryStructure], b: Sequence[UnaryStructure]
) -> bool:
    """A |= f and B |= not-f, checked with the reference evaluator."""
    return all(evaluate(s, {}, f) for s in a) and not any(evaluate(s, {}, f) for s in b)


def separating_sentences(
    a: Sequence[UnaryStructure],
    b: Sequence[UnaryStructure],
    budget: EnumerationBudget,
) -> Iterator[PrenexFormula]:
    """All enumerated sentences that hold on every structure in a and none in b."""
    vocab = a[0].vocab if a else b[0].vocab
    for sentence in enumerate_sentences(vocab, budget):
        f = sentence.to_formula()
        if separates(f, a, b):
            yield sentence


def min_separating_size(
    a: Sequence[UnaryStructure],
    b: Sequence[UnaryStructure],
    budget: EnumerationBudget,
) -> int | None:
    for sentence in separating_sentences(a, b, budget):
        return sentence.size
    return None
