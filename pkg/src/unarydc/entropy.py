"""Shannon and Boltzmann entropy of unary structures, and the curves relating
entropy to description complexity.

All logarithms are base 2.  Boltzmann entropy is the log of an exact big
integer (the class size), so it stays accurate far past double-precision
factorials.  The curve emitters reproduce the two bound pictures: for full
first-order logic, the thresholds f(p) and h(p) with the complexity segments
3np - 3, 3n(1-(t-1)p) + c_tau, 6np + c_tau under the 2n + c_tau ceiling; for
quantifier rank at most d, the step thresholds log C(n, h..h n-(t-1)h) and
log C(n, h) against 3h - 3 and 6h + c_tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .game import lower_bound_value
from .structures import (
    ClassTuple,
    TypeProfile,
    Vocabulary,
    class_size,
    multinomial,
)
from .synthesis import global_upper_bound, upper_bound_profile


class EntropyBoundViolation(AssertionError):
    """The strict entropy-gap inequality failed on an all-positive profile."""


@dataclass(frozen=True)
class EntropyReport:
    shannon: float
    boltzmann: float
    boltzmann_over_n: float
    gap: float
    gap_bound: float


def shannon_entropy(p: TypeProfile) -> float:
    """Entropy in bits of the type distribution; zero counts contribute zero."""
    n = p.n
    if n < 1:
        raise ValueError("empty profile")
    total = 0.0
    for c in p.counts:
        if c:
            q = c / n
            total -= q * math.log2(q)
    return total


def boltzmann_entropy(p: TypeProfile) -> float:
    """log2 of the isomorphism class size (a multinomial coefficient)."""
    return float(math.log2(multinomial(p.n, p.counts)))


def boltzmann_entropy_d(c: ClassTuple) -> float:
    """log2 of the capped-count class size."""
    return float(math.log2(class_size(c)))


def entropy_gap_bound(t: int, n: int) -> float:
    """Right-hand side of the quantitative Shannon/Boltzmann comparison:
    (t-1) log(sqrt(2 pi n))/n - log(e)/(12 n^2) + t log(e)/(12 n^2 + n)."""
    log2e = math.log2(math.e)
    return (
        (t - 1) * math.log2(math.sqrt(2 * math.pi * n)) / n
        - log2e / (12 * n * n)
        + t * log2e / (12 * n * n + n)
    )


def entropy_gap_check(p: TypeProfile) -> EntropyReport:
    """Both entropies plus the gap H_S - H_B/n and its bound.

    The strict inequality gap < bound is asserted only when every type is
    realized (the Stirling estimate behind the bound needs positive counts);
    profiles with zero counts still get a report, as a diagnostic.
    """
    t = len(p.counts)
    n = p.n
    hs = shannon_entropy(p)
    hb = boltzmann_entropy(p)
    gap = hs - hb / n
    bound = entropy_gap_bound(t, n)
    report = EntropyReport(hs, hb, hb / n, gap, bound)
    if all(c >= 1 for c in p.counts) and not gap < bound:
        raise EntropyBoundViolation(
            f"gap {gap} >= bound {bound} on all-positive profile {p.counts}"
        )
    return report


def f_threshold(t: int, p: float) -> float:
    """Entropy of the profile (np, ..., np, n(1-(t-1)p)); defined for p in [0, 1/t)."""
    if not 0 <= p < 1 / t:
        raise ValueError(f"p={p} outside [0, 1/t)")
    if p == 0:
        return 0.0
    rest = 1 - (t - 1) * p
    return ((t - 1) * p - 1) * math.log2(rest) - (t - 1) * p * math.log2(p)


def h_threshold(p: float) -> float:
    """Entropy of a two-type profile (np, n(1-p)); defined for p in [0, 1/2]."""
    if not 0 <= p <= 0.5:
        raise ValueError(f"p={p} outside [0, 1/2]")
    if p == 0:
        return 0.0
    return (p - 1) * math.log2(1 - p) - p * math.log2(p)


@dataclass(frozen=True)
class CurveRow:
    p: float
    f: float | None  # threshold for the two-sided bounds; None for p >= 1/t
    h: float | None  # threshold for the low-entropy upper bound; None for p > 1/2
    lower: float  # 3np - 3 (clipped at 0 unless disabled), plotted against f
    upper_f: float | None  # 3n(1-(t-1)p) + c_tau, plotted against f
    upper_h: float  # 6np + c_tau, plotted against h


def fo_bound_curves(
    vocab: Vocabulary, n: int, samples: int = 512, clip: bool = True
) -> list[CurveRow]:
    """Boundary data of the entropy/complexity region for full first-order
    logic; one row per sampled p over [0, 1/2]."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    t = vocab.t
    c_tau = vocab.c_tau
    rows = []
    for i in range(samples + 1):
        p = i / samples * 0.5
        in_f = p < 1 / t
        lower = 3 * n * p - 3
        if clip:
            lower = max(0.0, lower)
        rows.append(
            CurveRow(
                p=p,
                f=f_threshold(t, p) if in_f else None,
                h=h_threshold(p),
                lower=lower,
                upper_f=3 * n * (1 - (t - 1) * p) + c_tau if in_f else None,
                upper_h=6 * n * p + c_tau,
            )
        )
    return rows


@dataclass(frozen=True)
class StepRow:
    h: int
    lower_entropy: float  # log2 multinomial(n; h..h, n-(t-1)h)
    upper_entropy: float  # log2 binomial(n, h)
    lower_bound: int  # 3h - 3
    upper_bound: int  # 6h + c_tau


def fod_bound_steps(vocab: Vocabulary, n: int, d: int) -> list[StepRow]:
    """Step thresholds for the quantifier-rank-d picture, h = 1 .. d-1."""
    if d < 2:
        raise ValueError("d must be >= 2 to have steps")
    t = vocab.t
    rows = []
    for h in range(1, d):
        rest = n - (t - 1) * h
        if rest < 0:
            break
        counts = (h,) * (t - 1) + (rest,)
        rows.append(
            StepRow(
                h=h,
                lower_entropy=float(math.log2(multinomial(n, counts))),
                upper_entropy=float(math.log2(math.comb(n, h))),
                lower_bound=3 * h - 3,
                upper_bound=6 * h + vocab.c_tau,
            )
        )
    return rows


@dataclass(frozen=True)
class RegionDiagnostics:
    shannon: float
    lower: int  # witnessed lower bound for the profile
    upper: int  # synthesized upper bound for the profile
    ceiling: int  # 2n + c_tau
    violations: tuple[str, ...]

    @property
    def inside(self) -> bool:
        return not self.violations


def region_membership(vocab: Vocabulary, p: TypeProfile, samples: int = 256) -> RegionDiagnostics:
    """Check that the profile's (entropy, bound interval) lands inside the
    region cut out by the entropy thresholds and the global ceiling."""
    t = vocab.t
    n = p.n
    hs = shannon_entropy(p)
    lower = lower_bound_value(p.counts)
    upper = upper_bound_profile(vocab, p)
    ceiling = global_upper_bound(vocab, n)
    violations: list[str] = []
    if upper > ceiling:
        violations.append(f"upper {upper} above ceiling {ceiling}")
    for i in range(samples):
        q = (i / samples) * (1 / t)
        if hs > f_threshold(t, q):
            if not lower > 3 * n * q - 3:
                violations.append(f"lower {lower} <= 3np-3 at p={q}")
            if not upper < 3 * n * (1 - (t - 1) * q) + vocab.c_tau:
                violations.append(f"upper {upper} >= 3n(1-(t-1)p)+c_tau at p={q}")
    for i in range(samples + 1):
        q = (i / samples) * 0.5
        if hs < h_threshold(q):
            if not upper < 6 * n * q + vocab.c_tau:
                violations.append(f"upper {upper} >= 6np+c_tau at p={q}")
    return RegionDiagnostics(hs, lower, upper, ceiling, tuple(violations))
