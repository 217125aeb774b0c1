"""Command-line interface: reproducible experiments and data/plot emission.

Subcommands: synthesize | complexity | game | expected | bounds-plot |
entropy | sample.  Structures are given either as a 0/1 CSV file (header row
of predicate names, one row per element) or as a profile literal like
``k=2 n=10 counts=0,0,3,7``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import entropy as ent
from . import game as gm
from . import logic, oracle, semantics, synthesis
from .structures import (
    CsvFormatError,
    TypeProfile,
    UnaryStructure,
    Vocabulary,
    balance_threshold,
    class_tuple_of,
    default_vocabulary,
    enumerate_profiles,
    multinomial,
    profile_of,
    representative,
    sample_profile_counts,
    sample_uniform,
    structure_from_csv,
    structure_to_csv_text,
)

VERIFY_MAX_N = 8  # whole-space verification sweeps stay cheap up to here

_LITERAL_RE = re.compile(
    r"\s*k\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s+counts\s*=\s*([0-9,\s]+)\s*\Z"
)


class InputError(ValueError):
    pass


def parse_vocab(args: argparse.Namespace, k: int | None = None) -> Vocabulary:
    if getattr(args, "vocab", None):
        return Vocabulary(tuple(name.strip() for name in args.vocab.split(",")))
    if k is not None:
        return default_vocabulary(k)
    raise InputError("no vocabulary given (use --vocab or a structure input)")


def load_structure(spec: str) -> UnaryStructure:
    """A profile literal 'k=.. n=.. counts=..' or a CSV path."""
    m = _LITERAL_RE.match(spec)
    if m:
        k, n = int(m.group(1)), int(m.group(2))
        counts = tuple(int(c) for c in m.group(3).replace(" ", "").split(",") if c)
        vocab = default_vocabulary(k)
        if len(counts) != vocab.t:
            raise InputError(f"expected {vocab.t} counts for k={k}, got {len(counts)}")
        if sum(counts) != n:
            raise InputError(f"counts sum to {sum(counts)}, expected n={n}")
        return representative(vocab, TypeProfile(counts))
    try:
        return structure_from_csv(spec)
    except FileNotFoundError:
        raise InputError(f"no such file: {spec}") from None


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def write_csv(path: str | None, header: list[str], rows: list[list]) -> None:
    out = open(path, "w", encoding="utf-8", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if path:
            out.close()


# -- synthesize ----------------------------------------------------------------


def cmd_synthesize(args: argparse.Namespace) -> int:
    s = load_structure(args.input)
    vocab = s.vocab
    if args.d is not None:
        c = class_tuple_of(s, args.d)
        formula = synthesis.synthesize_d(vocab, c)
        bound = synthesis.upper_bound_d(vocab, c)
        print(f"class tuple: d={c.d} n={c.n} m={c.m}")
    else:
        formula = synthesis.synthesize_full(s)
        bound = synthesis.upper_bound(s)
        print(f"profile: {profile_of(s).counts}")
    text = logic.format_formula(formula, vocab)
    print(f"formula: {text}")
    print(f"size: {logic.size(formula)} (bound {bound})")
    print(f"quantifier rank: {logic.qrank(formula)}")
    if s.n <= args.verify_max_n:
        if args.d is not None:
            ok = semantics.defines_class(vocab, class_tuple_of(s, args.d), formula)
            verdict = "defines class" if ok else "FAILS to define class"
        else:
            ok = semantics.defines(s, formula)
            verdict = "defines" if ok else "FAILS to define"
        print(f"verification: {verdict}")
        if not ok:
            return 1
    else:
        print(f"verification: unverified (n > {args.verify_max_n})")
    return 0


# -- complexity ----------------------------------------------------------------


def cmd_complexity(args: argparse.Namespace) -> int:
    s = load_structure(args.input)
    vocab = s.vocab
    p = profile_of(s)
    lb = gm.lower_bound_value(p.counts)
    ub = synthesis.upper_bound(s)
    if args.mode == "bounds":
        print(f"profile: {p.counts}")
        print(f"bounds: [{lb}, {ub}]")
        return 0
    budget = oracle.EnumerationBudget(
        max_size=args.budget_size, node_budget=args.budget_nodes
    )
    value = oracle.exact_C(s, budget)  # raises ComplexityUndetermined past budget
    witness = None
    for sentence in oracle.enumerate_sentences(vocab, budget):
        if sentence.size == value and semantics.defines(s, sentence.to_formula()):
            witness = sentence.to_formula()
            break
    print(f"profile: {p.counts}")
    print(f"exact C: {value} (bounds [{lb}, {ub}])")
    if witness is not None:
        print(f"witness: {logic.format_formula(witness, vocab)}")
    return 0


# -- game ------------------------------------------------------------------------


def cmd_game(args: argparse.Namespace) -> int:
    a = [load_structure(spec) for spec in args.a]
    b = [load_structure(spec) for spec in args.b]
    result = gm.decide(args.r, args.q, a, b, node_budget=args.budget_nodes)
    print(f"winner: {result.winner} (nodes {result.nodes})")
    if result.formula is not None:
        vocab = a[0].vocab
        print(f"separating formula: {logic.format_formula(result.formula, vocab)}")
        print(f"size: {logic.size(result.formula)}")
        if not oracle.separates(result.formula, a, b):
            print("verification: FAILED")
            return 1
        print("verification: separates")
    return 0


# -- expected --------------------------------------------------------------------


@dataclass(frozen=True)
class ExpectedReport:
    n: int
    k: int
    samples: int
    mean_upper: float
    mean_lower: float
    balanced_fraction: float
    balanced_floor: float
    target: float  # 3n / 2^k


def expected_report(vocab: Vocabulary, n: int, samples: int, seed: int) -> ExpectedReport:
    counts = sample_profile_counts(vocab, n, samples, seed)
    size_cache: dict[tuple[int, ...], int] = {}
    total_ub = 0
    total_lb = 0
    for row in counts:
        key = tuple(sorted(int(c) for c in row))
        cached = size_cache.get(key)
        if cached is None:
            formula = synthesis.synthesize_full_profile(vocab, TypeProfile(key))
            cached = logic.size(formula)
            size_cache[key] = cached
        total_ub += cached
        total_lb += gm.lower_bound_value(key)
    thr = balance_threshold(vocab, n)
    balanced = float((np.abs(counts - n / vocab.t) <= thr).all(axis=1).mean())
    return ExpectedReport(
        n=n,
        k=vocab.k,
        samples=samples,
        mean_upper=total_ub / samples,
        mean_lower=total_lb / samples,
        balanced_fraction=balanced,
        balanced_floor=1 - 2 ** (vocab.k + 1) / n,
        target=3 * n / vocab.t,
    )


def exact_expected_complexity(vocab: Vocabulary, n: int, budget: oracle.EnumerationBudget) -> float:
    """Exact E[C] for small n: profile-weighted sum of exact complexities."""
    values = oracle.exact_C_map(vocab, n, budget)
    total_weight = vocab.t ** n
    acc = 0
    for p in enumerate_profiles(vocab, n):
        if p not in values:
            raise oracle.ComplexityUndetermined(budget.max_size + 1)
        acc += multinomial(n, p.counts) * values[p]
    return acc / total_weight


def cmd_expected(args: argparse.Namespace) -> int:
    vocab = parse_vocab(args, k=args.k)
    if args.exact:
        budget = oracle.EnumerationBudget(max_size=args.budget_size, node_budget=args.budget_nodes)
        value = exact_expected_complexity(vocab, args.n, budget)
        print(f"exact expected C at n={args.n}, k={vocab.k}: {value}")
        print(f"reference 3n/2^k: {3 * args.n / vocab.t}")
        return 0
    report = expected_report(vocab, args.n, args.samples, args.seed)
    print(f"n={report.n} k={report.k} samples={report.samples}")
    print(f"mean synthesized size: {report.mean_upper}")
    print(f"mean lower bound: {report.mean_lower}")
    print(f"target 3n/2^k: {report.target}")
    print(f"mean upper / target: {report.mean_upper / report.target}")
    print(f"mean lower / target: {report.mean_lower / report.target}")
    print(f"balanced fraction: {report.balanced_fraction} (floor {report.balanced_floor})")
    return 0


# -- bounds-plot -----------------------------------------------------------------


def region_points(vocab: Vocabulary, n: int) -> list[tuple]:
    """(entropy, lower, upper) per profile of size n, all verified inside the region."""
    points = []
    for p in enumerate_profiles(vocab, n):
        diag = ent.region_membership(vocab, p, samples=64)
        if not diag.inside:
            raise AssertionError(f"profile {p.counts} escapes the region: {diag.violations[:1]}")
        points.append((p.counts, diag.shannon, diag.lower, diag.upper))
    return points


def cmd_bounds_plot(args: argparse.Namespace) -> int:
    vocab = parse_vocab(args, k=args.k)
    if args.d is not None:
        rows = ent.fod_bound_steps(vocab, args.n, args.d)
        header = ["h", "lower_entropy", "upper_entropy", "lower_bound", "upper_bound"]
        data = [[r.h, r.lower_entropy, r.upper_entropy, r.lower_bound, r.upper_bound] for r in rows]
    else:
        rows = ent.fo_bound_curves(vocab, args.n, samples=args.samples_curve, clip=not args.no_clip)
        header = ["p", "f", "h", "lower", "upper_f", "upper_h"]
        data = [[r.p, r.f, r.h, r.lower, r.upper_f, r.upper_h] for r in rows]
    write_csv(args.out, header, data)
    if args.out:
        print(f"wrote {args.out}")
    points = None
    if args.overlay_n is not None:
        if args.d is not None:
            raise InputError("--overlay-n applies to the full-logic picture only")
        points = region_points(vocab, args.overlay_n)
        points_path = (args.out or "region") + ".points.csv"
        write_csv(
            points_path,
            ["counts", "shannon", "lower", "upper"],
            [[" ".join(map(str, c)), hs, lo, up] for c, hs, lo, up in points],
        )
        print(f"wrote {points_path} ({len(points)} profiles, all inside the region)")
    if args.format == "svg":
        svg_path = (args.out or "bounds") + ".svg" if not (args.out or "").endswith(".svg") else args.out
        _render_svg(vocab, args, rows, svg_path, points)
        print(f"wrote {svg_path}")
    return 0


def _render_svg(vocab: Vocabulary, args: argparse.Namespace, rows, path: str, points=None) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    n = args.n
    c_tau = vocab.c_tau
    if points:
        xs = [hs for _, hs, _, _ in points]
        ax.scatter(xs, [lo for _, _, lo, _ in points], s=3, alpha=0.4, label="profile lower bounds")
        ax.scatter(xs, [up for _, _, _, up in points], s=3, alpha=0.4, label="profile upper bounds")
    if args.d is not None:
        xs_low, ys_low, xs_up, ys_up = [], [], [], []
        for r in rows:
            xs_low.append(r.lower_entropy)
            ys_low.append(r.lower_bound)
            xs_up.append(r.upper_entropy)
            ys_up.append(r.upper_bound)
        ax.step(xs_low, ys_low, where="post", label="3h-3 below entropy threshold")
        ax.step(xs_up, ys_up, where="post", label="6h+c_tau above entropy threshold")
        ax.set_xlabel("Boltzmann entropy (bits)")
        ax.set_ylabel("description complexity (quantifier rank <= d)")
    else:
        t = vocab.t
        ceiling = synthesis.global_upper_bound(vocab, n)
        f_pts = [(r.f, r.lower, r.upper_f) for r in rows if r.f is not None]
        h_pts = [(r.h, r.upper_h) for r in rows if r.h is not None and r.upper_h <= ceiling]
        ax.plot([x for x, _, _ in f_pts], [lo for _, lo, _ in f_pts], label="3np-3")
        ax.plot(
            [x for x, _, up in f_pts if up is not None and up <= ceiling],
            [up for _, _, up in f_pts if up is not None and up <= ceiling],
            label="3n(1-(t-1)p)+c_tau",
        )
        ax.plot([x for x, _ in h_pts], [y for _, y in h_pts], label="6np+c_tau")
        x_ceiling = [x for x, _, up in f_pts if up is not None and up > ceiling]
        if x_ceiling:
            ax.hlines(ceiling, min(x_ceiling), max(x_ceiling), label="2n+c_tau")
        ax.set_yticks([c_tau, 3 * n // t, 6 * n // t, ceiling])
        ax.set_yticklabels(["c_tau", f"3n/{t}", f"6n/{t}", "2n+c_tau"])
        ax.set_xlabel("Shannon entropy (bits)")
        ax.set_ylabel("description complexity")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# -- entropy ---------------------------------------------------------------------


def cmd_entropy(args: argparse.Namespace) -> int:
    s = load_structure(args.input)
    p = profile_of(s)
    report = ent.entropy_gap_check(p)
    print(f"profile: {p.counts}")
    print(f"shannon: {report.shannon}")
    print(f"boltzmann: {report.boltzmann}")
    print(f"boltzmann / n: {report.boltzmann_over_n}")
    print(f"gap: {report.gap} (bound {report.gap_bound})")
    if args.d is not None:
        c = class_tuple_of(s, args.d)
        print(f"boltzmann (d={args.d}): {ent.boltzmann_entropy_d(c)}")
    return 0


# -- sample ----------------------------------------------------------------------


def cmd_sample(args: argparse.Namespace) -> int:
    vocab = parse_vocab(args, k=args.k)
    s = sample_uniform(vocab, args.n, args.seed)
    text = structure_to_csv_text(s)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# -- wiring ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unarydc",
        description="Minimal first-order descriptions of unary structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, vocab=False, n=False, d=False, seed=False,
                   samples=False, budgets=False, out=False, fmt=False, k=False):
        if vocab:
            p.add_argument("--vocab", help="comma-separated predicate names")
        if k:
            p.add_argument("--k", type=int, help="number of predicates (default names)")
        if n:
            p.add_argument("--n", type=int, required=True, help="domain size")
        if d:
            p.add_argument("--d", type=int, help="counting threshold for quantifier-rank-d mode")
        if seed:
            p.add_argument("--seed", type=int, required=True, help="RNG seed")
        if samples:
            p.add_argument("--samples", type=int, default=10_000)
        if budgets:
            p.add_argument("--budget-size", type=int, default=8, help="max formula size for exact search")
            p.add_argument("--budget-nodes", type=int, default=5_000_000, help="search/enumeration node cap")
        if out:
            p.add_argument("--out", help="output path (defaults to stdout)")
        if fmt:
            p.add_argument("--format", choices=("csv", "svg", "text"), default="csv")

    p = sub.add_parser("synthesize", help="build a defining sentence and verify it")
    p.add_argument("input", help="CSV path or profile literal 'k=.. n=.. counts=..'")
    p.add_argument("--d", type=int)
    p.add_argument("--verify-max-n", type=int, default=VERIFY_MAX_N)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("complexity", help="bounds or exact description complexity")
    p.add_argument("input")
    p.add_argument("--mode", choices=("bounds", "exact"), default="bounds")
    add_common(p, budgets=True)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("game", help="decide a formula size game position")
    p.add_argument("--a", action="append", required=True, help="left model (CSV or literal); repeatable")
    p.add_argument("--b", action="append", required=True, help="right model; repeatable")
    p.add_argument("--r", type=int, required=True, help="size resource")
    p.add_argument("--q", type=int, required=True, help="quantifier resource")
    p.add_argument("--budget-nodes", type=int, default=1_000_000)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("expected", help="expected description complexity experiment")
    add_common(p, vocab=True, k=True, n=True, seed=False, samples=True, budgets=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exact", action="store_true", help="exact profile-weighted expectation (tiny n)")
    p.set_defaults(func=cmd_expected)

    p = sub.add_parser("bounds-plot", help="emit the entropy/complexity bound curves")
    add_common(p, vocab=True, k=True, d=True, out=True, fmt=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--samples-curve", type=int, default=512)
    p.add_argument("--no-clip", action="store_true", help="keep negative lower-bound values")
    p.add_argument("--overlay-n", type=int, help="overlay every size-n profile as region points")
    p.set_defaults(func=cmd_bounds_plot)

    p = sub.add_parser("entropy", help="entropy report for a structure")
    p.add_argument("input")
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("sample", help="emit a uniformly random structure as CSV")
    add_common(p, vocab=True, k=True, n=True, out=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "expected" and not args.exact and args.seed is None:
        print("error: --seed is required for randomized runs", file=sys.stderr)
        return 2
    if args.command == "bounds-plot" and args.n is None:
        args.n = 100 if args.d is not None else 1000
        if args.k is None and not args.vocab:
            args.k = 2
    if args.command == "expected" and args.k is None and not args.vocab:
        print("error: give --k or --vocab", file=sys.stderr)
        return 2
    if args.command in ("sample", "bounds-plot") and args.k is None and not getattr(args, "vocab", None):
        args.k = 2
    try:
        return args.func(args)
    except (InputError, CsvFormatError, logic.ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (gm.SearchBudgetExceeded, oracle.EnumerationBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except oracle.ComplexityUndetermined as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
