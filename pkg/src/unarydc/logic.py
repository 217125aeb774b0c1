"""NNF first-order formulas over unary vocabularies.

The AST has no general negation node: formulas are built in negation normal
form, with negation available as an operation that swaps each constructor for
its dual.  Size counts atoms, binary connectives and quantifiers; negation is
free.  The textual grammar (ASCII) is:

    Ex1. f       existential quantifier         Ax1. f   universal
    (f & f)      conjunction                    (f | f)  disjunction
    P(x1)        predicate atom                 !P(x1)   negated atom
    x1 = x2      equality                       x1 != x2 inequality
    !f           general negation, eliminated while parsing

Variables are written x1, x2, ...; whitespace is insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .structures import Vocabulary

EXISTS = "E"
FORALL = "A"


@dataclass(frozen=True, slots=True)
class Eq:
    left: int
    right: int


@dataclass(frozen=True, slots=True)
class Neq:
    left: int
    right: int


@dataclass(frozen=True, slots=True)
class Pred:
    pred: int
    var: int


@dataclass(frozen=True, slots=True)
class NegPred:
    pred: int
    var: int


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: int
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: int
    body: "Formula"


Formula = Union[Eq, Neq, Pred, NegPred, And, Or, Exists, Forall]

_ATOMS = (Eq, Neq, Pred, NegPred)


def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, _ATOMS):
        return ()
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    return (f.body,)


def size(f: Formula) -> int:
    """Atoms + binary connectives + quantifiers; negations cost nothing.

    Every node costs exactly one, so this is the node count.  Iterative:
    synthesized formulas nest quantifiers linearly in the domain size.
    """
    total = 0
    stack = [f]
    while stack:
        node = stack.pop()
        total += 1
        stack.extend(_children(node))
    return total


def qrank(f: Formula) -> int:
    """Maximum nesting depth of quantifiers."""
    best = 0
    stack: list[tuple[Formula, int]] = [(f, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, (Exists, Forall)):
            depth += 1
            if depth > best:
                best = depth
        stack.extend((child, depth) for child in _children(node))
    return best


def quantifier_count(f: Formula) -> int:
    total = 0
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, (Exists, Forall)):
            total += 1
        stack.extend(_children(node))
    return total


def free_variables(f: Formula) -> frozenset[int]:
    free: set[int] = set()
    stack: list[tuple[Formula, frozenset[int]]] = [(f, frozenset())]
    while stack:
        node, bound = stack.pop()
        if isinstance(node, (Eq, Neq)):
            free.update({node.left, node.right} - bound)
        elif isinstance(node, (Pred, NegPred)):
            if node.var not in bound:
                free.add(node.var)
        elif isinstance(node, (And, Or)):
            stack.append((node.left, bound))
            stack.append((node.right, bound))
        else:
            stack.append((node.body, bound | {node.var}))
    return frozenset(free)


def all_variables(f: Formula) -> frozenset[int]:
    out: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, (Eq, Neq)):
            out.add(node.left)
            out.add(node.right)
        elif isinstance(node, (Pred, NegPred)):
            out.add(node.var)
        else:
            if isinstance(node, (Exists, Forall)):
                out.add(node.var)
            stack.extend(_children(node))
    return frozenset(out)


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


_DUALS = {And: Or, Or: And, Exists: Forall, Forall: Exists}


def negate(f: Formula) -> Formula:
    """The NNF dual; size-preserving involution."""
    done: dict[int, Formula] = {}
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in done:
            continue
        if isinstance(node, Eq):
            done[id(node)] = Neq(node.left, node.right)
        elif isinstance(node, Neq):
            done[id(node)] = Eq(node.left, node.right)
        elif isinstance(node, Pred):
            done[id(node)] = NegPred(node.pred, node.var)
        elif isinstance(node, NegPred):
            done[id(node)] = Pred(node.pred, node.var)
        elif not expanded:
            stack.append((node, True))
            stack.extend((child, False) for child in _children(node))
        elif isinstance(node, (And, Or)):
            done[id(node)] = _DUALS[type(node)](done[id(node.left)], done[id(node.right)])
        else:
            done[id(node)] = _DUALS[type(node)](node.var, done[id(node.body)])
    return done[id(f)]


def big_and(conjuncts: list[Formula]) -> Formula:
    """Right-folded conjunction; at least one conjunct required."""
    if not conjuncts:
        raise ValueError("empty conjunction")
    out = conjuncts[-1]
    for c in reversed(conjuncts[:-1]):
        out = And(c, out)
    return out


def big_or(disjuncts: list[Formula]) -> Formula:
    if not disjuncts:
        raise ValueError("empty disjunction")
    out = disjuncts[-1]
    for d in reversed(disjuncts[:-1]):
        out = Or(d, out)
    return out


@dataclass(frozen=True)
class PrenexFormula:
    """A quantifier prefix over pairwise distinct variables and a quantifier-free matrix."""

    prefix: tuple[tuple[str, int], ...]
    matrix: Formula

    def __post_init__(self) -> None:
        vars_ = [v for _, v in self.prefix]
        if len(set(vars_)) != len(vars_):
            raise ValueError("prefix variables must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.prefix) + size(self.matrix)

    @property
    def num_quantifiers(self) -> int:
        return len(self.prefix)

    def to_formula(self) -> Formula:
        out = self.matrix
        for kind, var in reversed(self.prefix):
            out = Exists(var, out) if kind == EXISTS else Forall(var, out)
        return out


def _substitute(f: Formula, subst: dict[int, int]) -> Formula:
    if isinstance(f, Eq):
        return Eq(subst.get(f.left, f.left), subst.get(f.right, f.right))
    if isinstance(f, Neq):
        return Neq(subst.get(f.left, f.left), subst.get(f.right, f.right))
    if isinstance(f, Pred):
        return Pred(f.pred, subst.get(f.var, f.var))
    return NegPred(f.pred, subst.get(f.var, f.var))


def to_prenex(f: Formula) -> PrenexFormula:
    """Pull quantifiers to a prefix, renaming bound variables to the smallest
    indices not already taken; size is preserved exactly."""
    taken = set(free_variables(f))
    prefix: list[tuple[str, int]] = []
    next_candidate = 1

    def fresh() -> int:
        nonlocal next_candidate
        while next_candidate in taken:
            next_candidate += 1
        taken.add(next_candidate)
        return next_candidate

    def pull(node: Formula, subst: dict[int, int]) -> Formula:
        if isinstance(node, _ATOMS):
            return _substitute(node, subst)
        if isinstance(node, (And, Or)):
            left = pull(node.left, subst)
            right = pull(node.right, subst)
            return type(node)(left, right)
        kind = EXISTS if isinstance(node, Exists) else FORALL
        v = fresh()
        prefix.append((kind, v))
        return pull(node.body, {**subst, node.var: v})

    matrix = pull(f, {})
    return PrenexFormula(tuple(prefix), matrix)


# --- textual grammar ---------------------------------------------------------

_QUANT_RE = re.compile(r"([EA])x([0-9]+)\Z")
_VAR_RE = re.compile(r"x([0-9]+)\Z")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # LPAREN RPAREN AMP PIPE BANG DOT EQ NEQ VAR IDENT EOF
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        start_col = col
        if ch == "(":
            tokens.append(_Token("LPAREN", ch, line, start_col))
            i += 1
        elif ch == ")":
            tokens.append(_Token("RPAREN", ch, line, start_col))
            i += 1
        elif ch == "&":
            tokens.append(_Token("AMP", ch, line, start_col))
            i += 1
        elif ch == "|":
            tokens.append(_Token("PIPE", ch, line, start_col))
            i += 1
        elif ch == ".":
            tokens.append(_Token("DOT", ch, line, start_col))
            i += 1
        elif ch == "=":
            tokens.append(_Token("EQ", ch, line, start_col))
            i += 1
        elif ch == "!":
            if i + 1 < len(text) and text[i + 1] == "=":
                tokens.append(_Token("NEQ", "!=", line, start_col))
                i += 2
                col += 1
            else:
                tokens.append(_Token("BANG", ch, line, start_col))
                i += 1
        else:
            m = _IDENT_RE.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {ch!r}", line, start_col)
            word = m.group(0)
            kind = "VAR" if _VAR_RE.match(word) else "IDENT"
            tokens.append(_Token(kind, word, line, start_col))
            i = m.end()
            col += len(word) - 1
        col += 1
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vocab = vocab
        self.pred_index = {name: i for i, name in enumerate(vocab.predicates)}

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def take(self, kind: str | None = None) -> _Token:
        tok = self.tokens[min(self.pos, len(self.tokens) - 1)]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.formula()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.column)
        return f

    def var(self) -> int:
        tok = self.take("VAR")
        idx = int(tok.text[1:])
        if idx < 1:
            raise ParseError(f"malformed variable {tok.text!r}", tok.line, tok.column)
        return idx

    def formula(self) -> Formula:
        tok = self.peek()
        if tok.kind == "BANG":
            self.take()
            return negate(self.formula())
        if tok.kind == "LPAREN":
            self.take()
            left = self.formula()
            op = self.take()
            if op.kind == "RPAREN":  # plain grouping
                return left
            if op.kind not in ("AMP", "PIPE"):
                raise ParseError(f"expected '&' or '|', found {op.text!r}", op.line, op.column)
            right = self.formula()
            self.take("RPAREN")
            return And(left, right) if op.kind == "AMP" else Or(left, right)
        if tok.kind == "VAR":
            left = self.var()
            op = self.take()
            if op.kind == "EQ":
                return Eq(left, self.var())
            if op.kind == "NEQ":
                return Neq(left, self.var())
            raise ParseError(f"expected '=' or '!=', found {op.text!r}", op.line, op.column)
        if tok.kind == "IDENT":
            qm = _QUANT_RE.match(tok.text)
            if qm and self.peek(1).kind == "DOT":
                self.take()
                self.take("DOT")
                var = int(qm.group(2))
                if var < 1:
                    raise ParseError(f"malformed variable in {tok.text!r}", tok.line, tok.column)
                body = self.formula()
                return Exists(var, body) if qm.group(1) == EXISTS else Forall(var, body)
            if tok.text not in self.pred_index:
                raise ParseError(f"unknown predicate {tok.text!r}", tok.line, tok.column)
            self.take()
            self.take("LPAREN")
            v = self.var()
            self.take("RPAREN")
            return Pred(self.pred_index[tok.text], v)
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.column)


def parse(text: str, vocab: Vocabulary) -> Formula:
    """Parse the grammar above; general negation is pushed to atoms on the fly."""
    return _Parser(text, vocab).parse()


def format_formula(f: Formula, vocab: Vocabulary) -> str:
    """Canonical text; parse(format_formula(f)) reproduces f node for node."""
    done: dict[int, str] = {}
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in done:
            continue
        if isinstance(node, Eq):
            done[id(node)] = f"x{node.left} = x{node.right}"
        elif isinstance(node, Neq):
            done[id(node)] = f"x{node.left} != x{node.right}"
        elif isinstance(node, Pred):
            done[id(node)] = f"{vocab.predicates[node.pred]}(x{node.var})"
        elif isinstance(node, NegPred):
            done[id(node)] = f"!{vocab.predicates[node.pred]}(x{node.var})"
        elif not expanded:
            stack.append((node, True))
            stack.extend((child, False) for child in _children(node))
        elif isinstance(node, And):
            done[id(node)] = f"({done[id(node.left)]} & {done[id(node.right)]})"
        elif isinstance(node, Or):
            done[id(node)] = f"({done[id(node.left)]} | {done[id(node.right)]})"
        elif isinstance(node, Exists):
            done[id(node)] = f"Ex{node.var}. {done[id(node.body)]}"
        else:
            done[id(node)] = f"Ax{node.var}. {done[id(node.body)]}"
    return done[id(f)]

