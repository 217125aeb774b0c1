"""Unary relational structures, type profiles, and counting-threshold classes.

A structure over k unary predicates is stored as a per-element type index in
[0, 2^k): bit i of the index is set iff the element is in predicate i.  A type
profile (the count vector of the 2^k types) identifies an isomorphism class;
capping the counts at a threshold d identifies the coarser class obtained when
realization counts are only distinguished up to d.
"""

from __future__ import annotations

import csv
import io
import math
import random
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_VAR_SHAPED_RE = re.compile(r"x[0-9]+\Z")

_DEFAULT_NAMES = ("P", "Q", "R", "S")


class CsvFormatError(ValueError):
    """Raised when a tabular 0/1 input file is malformed."""


@dataclass(frozen=True)
class Vocabulary:
    """An ordered set of unary predicate names."""

    predicates: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.predicates) < 1:
            raise ValueError("vocabulary needs at least one predicate")
        if len(set(self.predicates)) != len(self.predicates):
            raise ValueError("predicate names must be unique")
        for name in self.predicates:
            # names must survive the formula grammar round trip
            if not _NAME_RE.match(name) or _VAR_SHAPED_RE.match(name):
                raise ValueError(f"invalid predicate name: {name!r}")

    @property
    def k(self) -> int:
        return len(self.predicates)

    @property
    def t(self) -> int:
        """Number of element types, 2^k."""
        return 1 << self.k

    @property
    def c_tau(self) -> int:
        """The vocabulary-dependent constant 15*k*2^k absorbed by all bounds."""
        return 15 * self.k * (1 << self.k)

    def type_bits(self, type_index: int) -> tuple[int, ...]:
        return tuple((type_index >> i) & 1 for i in range(self.k))


def default_vocabulary(k: int) -> Vocabulary:
    """Single-letter names P, Q, R, S for k <= 4, else P1..Pk."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k <= len(_DEFAULT_NAMES):
        return Vocabulary(_DEFAULT_NAMES[:k])
    return Vocabulary(tuple(f"P{i}" for i in range(1, k + 1)))


@dataclass(frozen=True)
class UnaryStructure:
    """A size-n domain {1..n}; element i has type ``type_of[i-1]``."""

    vocab: Vocabulary
    type_of: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.type_of:
            raise ValueError("domain must be nonempty")
        t = self.vocab.t
        for j in self.type_of:
            if not 0 <= j < t:
                raise ValueError(f"type index {j} out of range [0, {t})")

    @property
    def n(self) -> int:
        return len(self.type_of)

    def has_predicate(self, element: int, pred: int) -> bool:
        return bool((self.type_of[element - 1] >> pred) & 1)


@dataclass(frozen=True)
class TypeProfile:
    """The count vector (|pi_1|, ..., |pi_t|); identifies an isomorphism class."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @property
    def n(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class ClassTuple:
    """Counts capped at d: identifies a class of structures equivalent up to d."""

    d: int
    n: int
    m: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("threshold d must be >= 1")
        if self.n < 1:
            raise ValueError("domain size must be >= 1")
        if any(mi < 0 or mi > self.d for mi in self.m):
            raise ValueError("entries must lie in [0, d]")
        s = sum(self.m)
        if s > self.n:
            raise ValueError("entries sum past the domain size")
        if s < self.n and self.d not in self.m:
            raise ValueError("a deficient tuple must cap some entry at d")


def profile_of(s: UnaryStructure) -> TypeProfile:
    counts = [0] * s.vocab.t
    for j in s.type_of:
        counts[j] += 1
    return TypeProfile(tuple(counts))


def class_tuple_of(s: UnaryStructure, d: int) -> ClassTuple:
    if d < 1:
        raise ValueError("threshold d must be >= 1")
    counts = profile_of(s).counts
    return ClassTuple(d, s.n, tuple(min(c, d) for c in counts))


def class_tuple_of_profile(p: TypeProfile, d: int) -> ClassTuple:
    if d < 1:
        raise ValueError("threshold d must be >= 1")
    return ClassTuple(d, p.n, tuple(min(c, d) for c in p.counts))


def enumerate_profiles(vocab: Vocabulary, n: int) -> Iterator[TypeProfile]:
    """All profiles of size n, in lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")

    def rec(parts_left: int, remaining: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if parts_left == 1:
            yield prefix + (remaining,)
            return
        for first in range(remaining + 1):
            yield from rec(parts_left - 1, remaining - first, prefix + (first,))

    for counts in rec(vocab.t, n, ()):
        yield TypeProfile(counts)


def enumerate_class_tuples(vocab: Vocabulary, n: int, d: int) -> Iterator[ClassTuple]:
    """All valid capped tuples for size-n structures, in lexicographic order."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    t = vocab.t

    def rec(parts_left: int, budget: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if parts_left == 0:
            yield prefix
            return
        for v in range(min(d, budget) + 1):
            yield from rec(parts_left - 1, budget - v, prefix + (v,))

    for m in rec(t, n, ()):
        s = sum(m)
        if s == n or d in m:
            yield ClassTuple(d, n, m)


def representative(vocab: Vocabulary, p: TypeProfile) -> UnaryStructure:
    """The canonical structure of a profile: type-0 elements first, then type 1, ..."""
    if len(p.counts) != vocab.t:
        raise ValueError("profile length does not match vocabulary")
    if p.n < 1:
        raise ValueError("cannot realize an empty profile")
    type_of: list[int] = []
    for j, c in enumerate(p.counts):
        type_of.extend([j] * c)
    return UnaryStructure(vocab, tuple(type_of))


def class_representative(vocab: Vocabulary, c: ClassTuple) -> UnaryStructure:
    """A structure in the class, with all spare points put into the largest type."""
    if len(c.m) != vocab.t:
        raise ValueError("tuple length does not match vocabulary")
    counts = list(c.m)
    leftover = c.n - sum(counts)
    if leftover:
        target = max(range(len(counts)), key=lambda j: (counts[j], j))
        counts[target] += leftover
    return representative(vocab, TypeProfile(tuple(counts)))


def multinomial(n: int, counts: Sequence[int]) -> int:
    """Exact n! / (c_1! ... c_t!) over unbounded integers."""
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    if sum(counts) != n:
        raise ValueError(f"counts sum to {sum(counts)}, expected {n}")
    result = 1
    remaining = n
    for c in counts:
        result *= math.comb(remaining, c)
        remaining -= c
    return result


def class_size(c: ClassTuple) -> int:
    """Number of structures on {1..n} in the class: sum over all completions."""
    fixed = sum(mi for mi in c.m if mi < c.d)
    free = [j for j, mi in enumerate(c.m) if mi == c.d]
    spare = c.n - fixed - c.d * len(free)
    if spare < 0:
        # cannot give every capped type its d points
        return 0
    if not free:
        return multinomial(c.n, c.m)

    total = 0

    def rec(idx: int, left: int, extras: list[int]) -> None:
        nonlocal total
        if idx == len(free) - 1:
            counts = list(c.m)
            for fj, e in zip(free, extras + [left]):
                counts[fj] = c.d + e
            total += multinomial(c.n, counts)
            return
        for e in range(left + 1):
            rec(idx + 1, left - e, extras + [e])

    rec(0, spare, [])
    return total


def sample_uniform(vocab: Vocabulary, n: int, seed: int) -> UnaryStructure:
    """A uniformly random structure: every element's type an independent uniform draw."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    t = vocab.t
    return UnaryStructure(vocab, tuple(rng.randrange(t) for _ in range(n)))


def sample_profile_counts(vocab: Vocabulary, n: int, samples: int, seed: int) -> np.ndarray:
    """Type-count vectors of `samples` uniform structures, as a (samples, t) array.

    Drawing a profile from Multinomial(n, uniform over t types) is distributed
    identically to sampling a structure with sample_uniform and counting types;
    this batch form keeps large experiments fast.
    """
    if n < 1 or samples < 1:
        raise ValueError("n and samples must be >= 1")
    rng = np.random.default_rng(seed)
    t = vocab.t
    return rng.multinomial(n, [1.0 / t] * t, size=samples)


def balance_threshold(vocab: Vocabulary, n: int) -> float:
    """Largest allowed deviation of a type count from n/2^k: sqrt(3 ln(n) n / 2^k).

    This is the deviation at which the multiplicative Chernoff bound yields a
    per-type failure probability of 2/n, giving the 1 - 2^(k+1)/n guarantee.
    """
    if n < 2:
        raise ValueError("balancedness needs n >= 2")
    return math.sqrt(3.0 * math.log(n) * n / vocab.t)


def is_balanced(s: UnaryStructure) -> bool:
    """True iff every type count is within the Chernoff threshold of n/2^k."""
    thr = balance_threshold(s.vocab, s.n)
    mean = s.n / s.vocab.t
    return all(abs(c - mean) <= thr for c in profile_of(s).counts)


def balanced_fraction(vocab: Vocabulary, n: int, samples: int, seed: int) -> float:
    """Empirical probability that a uniform structure is balanced."""
    counts = sample_profile_counts(vocab, n, samples, seed)
    thr = balance_threshold(vocab, n)
    mean = n / vocab.t
    return float((np.abs(counts - mean) <= thr).all(axis=1).mean())


def _type_index_of_row(bits: Sequence[int]) -> int:
    idx = 0
    for i, b in enumerate(bits):
        idx |= b << i
    return idx


def structure_from_csv_text(text: str) -> UnaryStructure:
    """Parse a 0/1 table: header row of predicate names, one row per element."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row]  # tolerate trailing blank lines
    if not rows:
        raise CsvFormatError("empty input")
    header = [cell.strip() for cell in rows[0]]
    try:
        vocab = Vocabulary(tuple(header))
    except ValueError as exc:
        raise CsvFormatError(f"bad header: {exc}") from exc
    if len(rows) < 2:
        raise CsvFormatError("no data rows")
    type_of = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != vocab.k:
            raise CsvFormatError(f"row {lineno}: expected {vocab.k} cells, got {len(row)}")
        bits = []
        for cell in row:
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise CsvFormatError(f"row {lineno}: cell {cell!r} is not 0 or 1")
            bits.append(int(cell))
        type_of.append(_type_index_of_row(bits))
    return UnaryStructure(vocab, tuple(type_of))


def structure_from_csv(path: str) -> UnaryStructure:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return structure_from_csv_text(fh.read())


def structure_to_csv_text(s: UnaryStructure) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(s.vocab.predicates)
    for j in s.type_of:
        writer.writerow(s.vocab.type_bits(j))
    return out.getvalue()
