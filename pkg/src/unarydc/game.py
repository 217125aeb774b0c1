"""The prenex formula size game: exact winner search and lower-bound witnesses.

Positions are (r, q, A, B) where r bounds the remaining formula size, q the
remaining quantifiers, and A, B are sets of (structure, assignment) pairs.
The spoiler wins iff some prenex sentence of size <= r with <= q quantifiers
holds on every pair in A and fails on every pair in B.

While q > 0 the spoiler plays quantifier moves (a witness function on one side
against all extensions on the other) or drops to the atomic phase.  The
engine enumerates quantifier moves literally, always spending the next fresh
variable; positions are memoized under a canonical key that identifies pairs
up to structure automorphism (elements of equal type are interchangeable) and
drops duplicates, which is what keeps the search exact yet feasible.

At q = 0 the game is, by its own characterization, quantifier-free separation
with a size budget; the engine decides it exactly with a dynamic program over
achievable truth vectors (smallest connective tree reaching each vector),
which replaces exhausting the exponentially many subset-split moves by an
equivalent exact computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

from .logic import And, Eq, Exists, Forall, Formula, Neq, NegPred, Or, Pred
from .structures import (
    ClassTuple,
    UnaryStructure,
    Vocabulary,
    class_representative,
    profile_of,
)

Pair = tuple[UnaryStructure, tuple[tuple[int, int], ...]]
ModelInput = Union[UnaryStructure, tuple[UnaryStructure, Mapping[int, int]]]


class SearchBudgetExceeded(RuntimeError):
    """The position's search space exceeds the configured budget; no game result."""


@dataclass(frozen=True)
class GamePosition:
    r: int
    q: int
    a: tuple[Pair, ...]
    b: tuple[Pair, ...]
    next_var: int

    @property
    def phase(self) -> str:
        return "quantifier" if self.q > 0 else "atomic"


@dataclass(frozen=True)
class GameResult:
    winner: str  # "S" or "D"
    formula: Formula | None
    nodes: int


def _as_pair(model: ModelInput) -> Pair:
    if isinstance(model, UnaryStructure):
        return (model, ())
    s, assignment = model
    return (s, tuple(sorted(assignment.items())))


def _pair_key(pair: Pair) -> tuple:
    """Identify a pair up to automorphism: profile plus the orbit pattern of
    the assignment (slot rank by first use, slot type)."""
    s, bindings = pair
    ranks: dict[int, int] = {}
    pattern = []
    for var, elem in bindings:
        rank = ranks.setdefault(elem, len(ranks))
        pattern.append((var, rank, s.type_of[elem - 1]))
    return (profile_of(s).counts, tuple(pattern))


def _normalize(pairs: Iterable[Pair]) -> tuple[tuple[Pair, ...], tuple]:
    by_key: dict[tuple, Pair] = {}
    for p in pairs:
        by_key.setdefault(_pair_key(p), p)
    keys = tuple(sorted(by_key))
    return tuple(by_key[k] for k in keys), keys


def initial_position(r: int, q: int, a: Sequence[ModelInput], b: Sequence[ModelInput]) -> GamePosition:
    if not a or not b:
        raise ValueError("both model sets must be nonempty")
    pairs_a = tuple(_as_pair(m) for m in a)
    pairs_b = tuple(_as_pair(m) for m in b)
    sizes = {s.n for s, _ in pairs_a + pairs_b}
    if len(sizes) != 1:
        raise ValueError("all structures must share one domain size")
    vocabs = {s.vocab for s, _ in pairs_a + pairs_b}
    if len(vocabs) != 1:
        raise ValueError("all structures must share one vocabulary")
    vars_ = {tuple(v for v, _ in bs) for _, bs in pairs_a + pairs_b}
    if len(vars_) != 1:
        raise ValueError("all assignments must bind the same variables")
    next_var = max((0, *next(iter(vars_)))) + 1
    return GamePosition(r, q, pairs_a, pairs_b, next_var)


def _atom_truth(atom: Formula, pair: Pair) -> bool:
    s, bindings = pair
    env = dict(bindings)
    if isinstance(atom, Eq):
        return env[atom.left] == env[atom.right]
    if isinstance(atom, Neq):
        return env[atom.left] != env[atom.right]
    if isinstance(atom, Pred):
        return s.has_predicate(env[atom.var], atom.pred)
    return not s.has_predicate(env[atom.var], atom.pred)


class _QuantifierFreeSeparation:
    """Minimum quantifier-free NNF size separating A from B, by a DP over
    achievable truth vectors (bit i = truth on universe element i)."""

    def __init__(self, vocab: Vocabulary, a: tuple[Pair, ...], b: tuple[Pair, ...]):
        universe = list(a) + list(b)
        self.a_mask = (1 << len(a)) - 1
        self.b_mask = ((1 << len(universe)) - 1) ^ self.a_mask
        variables = sorted({v for _, bs in universe for v, _ in bs}) if universe else []
        atoms: list[Formula] = []
        for v in variables:
            for p in range(vocab.k):
                atoms.append(Pred(p, v))
                atoms.append(NegPred(p, v))
        for i, v in enumerate(variables):
            for w in variables[i:]:
                atoms.append(Eq(v, w))
                atoms.append(Neq(v, w))
        self.seen: dict[int, tuple[int, Formula]] = {}  # sig -> (size, witness)
        layer: dict[int, Formula] = {}
        for atom in atoms:
            sig = 0
            for i, pair in enumerate(universe):
                if _atom_truth(atom, pair):
                    sig |= 1 << i
            if sig not in self.seen:
                self.seen[sig] = (1, atom)
                layer[sig] = atom
        self.exact: dict[int, dict[int, Formula]] = {1: layer}
        self.frontier = 1
        self.best: int | None = None
        self._scan_layer(1)

    def _separates(self, sig: int) -> bool:
        return (sig & self.a_mask) == self.a_mask and (sig & self.b_mask) == 0

    def _scan_layer(self, s: int) -> None:
        if self.best is not None:
            return
        for sig in self.exact[s]:
            if self._separates(sig):
                self.best = s
                return

    def min_size(self, cap: int) -> int | None:
        """Smallest separating size, or None if it exceeds cap."""
        while self.best is None and self.frontier < cap:
            s = self.frontier + 2
            layer: dict[int, Formula] = {}
            for s1 in range(1, s - 1, 2):
                s2 = s - 1 - s1
                if s2 < s1:
                    break
                for sig1, f1 in self.exact[s1].items():
                    for sig2, f2 in self.exact[s2].items():
                        both = sig1 & sig2
                        if both not in self.seen:
                            witness: Formula = And(f1, f2)
                            self.seen[both] = (s, witness)
                            layer[both] = witness
                        either = sig1 | sig2
                        if either not in self.seen:
                            witness = Or(f1, f2)
                            self.seen[either] = (s, witness)
                            layer[either] = witness
            self.exact[s] = layer
            self.frontier = s
            self._scan_layer(s)
        if self.best is not None and self.best <= cap:
            return self.best
        return None

    def witness(self) -> Formula:
        for sig, (_, f) in self.seen.items():
            if self._separates(sig):
                return f
        raise RuntimeError("no separating formula recorded")


class FormulaSizeGame:
    """Exact adversarial search over game positions, with strategy extraction."""

    def __init__(self, vocab: Vocabulary, node_budget: int = 1_000_000, move_budget: int = 200_000):
        self.vocab = vocab
        self.node_budget = node_budget
        self.move_budget = move_budget
        self.nodes = 0
        self._memo: dict[tuple, bool] = {}
        self._qfree: dict[tuple, _QuantifierFreeSeparation] = {}

    # -- move generation -------------------------------------------------

    def _extensions(self, pairs: tuple[Pair, ...], var: int) -> list[Pair]:
        out = []
        for s, bindings in pairs:
            for e in range(1, s.n + 1):
                out.append((s, bindings + ((var, e),)))
        return out

    def _witness_choices(self, pairs: tuple[Pair, ...], var: int):
        """All ways to pick one new element per pair (the spoiler's function)."""
        if not pairs:
            yield ()
            return
        n = pairs[0][0].n
        if n ** len(pairs) > self.move_budget:
            raise SearchBudgetExceeded(
                f"{n}^{len(pairs)} witness functions exceed the move budget"
            )
        for choice in product(range(1, n + 1), repeat=len(pairs)):
            yield tuple(
                (s, bindings + ((var, e),)) for (s, bindings), e in zip(pairs, choice)
            )

    # -- decision ---------------------------------------------------------

    def _qfree_state(self, a, keys_a, b, keys_b) -> _QuantifierFreeSeparation:
        key = (keys_a, keys_b)
        state = self._qfree.get(key)
        if state is None:
            state = _QuantifierFreeSeparation(self.vocab, a, b)
            self._qfree[key] = state
        return state

    def decide(self, pos: GamePosition) -> bool:
        a, keys_a = _normalize(pos.a)
        b, keys_b = _normalize(pos.b)
        return self._decide(pos.r, pos.q, a, keys_a, b, keys_b, pos.next_var)

    def _decide(self, r, q, a, keys_a, b, keys_b, next_var) -> bool:
        if r <= 0:
            return False
        if set(keys_a) & set(keys_b):
            return False  # a shared pair can never be separated
        if q == 0:
            state = self._qfree_state(a, keys_a, b, keys_b)
            return state.min_size(r) is not None
        key = (r, q, keys_a, keys_b, next_var)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchBudgetExceeded(f"node budget {self.node_budget} exhausted")
        result = self._decide(r, 0, a, keys_a, b, keys_b, next_var)  # phase change
        if not result and r >= 2:
            x = next_var
            # existential move: witness on A, all extensions on B
            b_ext, b_ext_keys = _normalize(self._extensions(b, x))
            for new_a in self._witness_choices(a, x):
                na, na_keys = _normalize(new_a)
                if self._decide(r - 1, q - 1, na, na_keys, b_ext, b_ext_keys, x + 1):
                    result = True
                    break
            if not result:
                # universal move: all extensions on A, witness on B
                a_ext, a_ext_keys = _normalize(self._extensions(a, x))
                for new_b in self._witness_choices(b, x):
                    nb, nb_keys = _normalize(new_b)
                    if self._decide(r - 1, q - 1, a_ext, a_ext_keys, nb, nb_keys, x + 1):
                        result = True
                        break
        self._memo[key] = result
        return result

    # -- strategy extraction ----------------------------------------------

    def extract(self, pos: GamePosition) -> Formula:
        a, keys_a = _normalize(pos.a)
        b, keys_b = _normalize(pos.b)
        if not self._decide(pos.r, pos.q, a, keys_a, b, keys_b, pos.next_var):
            raise ValueError("no winning strategy to extract")
        return self._extract(pos.r, pos.q, a, keys_a, b, keys_b, pos.next_var)

    def _extract(self, r, q, a, keys_a, b, keys_b, next_var) -> Formula:
        if q == 0:
            state = self._qfree_state(a, keys_a, b, keys_b)
            assert state.min_size(r) is not None
            return state.witness()
        if self._decide(r, 0, a, keys_a, b, keys_b, next_var):
            return self._extract(r, 0, a, keys_a, b, keys_b, next_var)
        x = next_var
        b_ext, b_ext_keys = _normalize(self._extensions(b, x))
        for new_a in self._witness_choices(a, x):
            na, na_keys = _normalize(new_a)
            if self._decide(r - 1, q - 1, na, na_keys, b_ext, b_ext_keys, x + 1):
                return Exists(x, self._extract(r - 1, q - 1, na, na_keys, b_ext, b_ext_keys, x + 1))
        a_ext, a_ext_keys = _normalize(self._extensions(a, x))
        for new_b in self._witness_choices(b, x):
            nb, nb_keys = _normalize(new_b)
            if self._decide(r - 1, q - 1, a_ext, a_ext_keys, nb, nb_keys, x + 1):
                return Forall(x, self._extract(r - 1, q - 1, a_ext, a_ext_keys, nb, nb_keys, x + 1))
        raise RuntimeError("winning position without a winning move")


def decide(
    r: int,
    q: int,
    a: Sequence[ModelInput],
    b: Sequence[ModelInput],
    node_budget: int = 1_000_000,
    move_budget: int = 200_000,
) -> GameResult:
    """Exact winner of the game from (r, q, A, B), with a separating sentence
    extracted whenever the spoiler wins."""
    pos = initial_position(r, q, a, b)
    vocab = pos.a[0][0].vocab
    engine = FormulaSizeGame(vocab, node_budget, move_budget)
    if engine.decide(pos):
        return GameResult("S", engine.extract(pos), engine.nodes)
    return GameResult("D", None, engine.nodes)


def min_separating_size(
    a: Sequence[ModelInput],
    b: Sequence[ModelInput],
    q_max: int,
    r_max: int,
    node_budget: int = 1_000_000,
    move_budget: int = 200_000,
) -> int | None:
    """Smallest r <= r_max for which S wins with some q <= min(q_max, r - 1)."""
    pos0 = initial_position(1, 0, a, b)
    vocab = pos0.a[0][0].vocab
    engine = FormulaSizeGame(vocab, node_budget, move_budget)
    for r in range(1, r_max + 1):
        q = min(q_max, r - 1)
        pos = GamePosition(r, q, pos0.a, pos0.b, pos0.next_var)
        if engine.decide(pos):
            return r
    return None


def minimum_separating_atomic_set(
    a: Sequence[ModelInput], b: Sequence[ModelInput]
) -> tuple[Formula, ...] | None:
    """Smallest set of atomic formulas such that every pair from A x B is
    separated by some member (true on the A side, false on the B side).

    Micro-scale diagnostic by exhaustive subset search; when the atomic phase
    starts with budget r < 2|set| - 1, the duplicator wins from there.
    """
    from itertools import combinations

    pairs_a = [_as_pair(m) for m in a]
    pairs_b = [_as_pair(m) for m in b]
    if not pairs_a or not pairs_b:
        raise ValueError("both model sets must be nonempty")
    vocab = pairs_a[0][0].vocab
    variables = sorted({v for _, bs in pairs_a + pairs_b for v, _ in bs})
    atoms: list[Formula] = []
    for v in variables:
        for p in range(vocab.k):
            atoms.append(Pred(p, v))
            atoms.append(NegPred(p, v))
    for i, v in enumerate(variables):
        for w in variables[i:]:
            atoms.append(Eq(v, w))
            atoms.append(Neq(v, w))

    def separates_pair(atom: Formula, pa: Pair, pb: Pair) -> bool:
        return _atom_truth(atom, pa) and not _atom_truth(atom, pb)

    required = [(pa, pb) for pa in pairs_a for pb in pairs_b]
    useful = [
        atom for atom in atoms if any(separates_pair(atom, pa, pb) for pa, pb in required)
    ]
    for k in range(1, len(useful) + 1):
        for subset in combinations(useful, k):
            if all(
                any(separates_pair(atom, pa, pb) for atom in subset) for pa, pb in required
            ):
                return subset
    return None


# -- lower-bound witnesses ------------------------------------------------


def lower_bound_value(counts: Sequence[int]) -> int:
    """3 * (second largest count) - 3, clipped at zero."""
    if len(counts) < 2:
        return 0
    second = sorted(counts)[-2]
    return max(0, 3 * second - 3)


def lower_bound_witness(s: UnaryStructure) -> tuple[UnaryStructure | None, int]:
    """The neighbour model with one point moved from the second most frequent
    type to the most frequent one, and the size bound it witnesses."""
    p = profile_of(s)
    realized = sorted((c, j) for j, c in enumerate(p.counts) if c > 0)
    if len(realized) < 2:
        return None, 0
    (second_count, second_type), (_, top_type) = realized[-2], realized[-1]
    type_of = list(s.type_of)
    for i in range(len(type_of) - 1, -1, -1):
        if type_of[i] == second_type:
            type_of[i] = top_type
            break
    return UnaryStructure(s.vocab, tuple(type_of)), 3 * second_count - 3


def class_lower_bound_witness(
    vocab: Vocabulary, c: ClassTuple
) -> tuple[tuple[UnaryStructure, UnaryStructure] | None, int]:
    """Witness pair and bound for a capped-count class: take the class
    representative with a maximal largest type, then move one point."""
    bound = lower_bound_value(c.m)
    rep = class_representative(vocab, c)
    witness, _ = lower_bound_witness(rep)
    if witness is None:
        return None, bound
    return (rep, witness), bound
