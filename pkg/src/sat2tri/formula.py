"""CNF formulas: parsing, normalization, length, a brute-force SAT oracle and
the compiler from sets of ordered bipartitions to CNF."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Union

__all__ = [
    "Var",
    "Not",
    "And",
    "Or",
    "Formula",
    "Bipartition",
    "FormulaSyntaxError",
    "NotCNFError",
    "parse_expr",
    "parse_dimacs",
    "parse_formula",
    "normalize_cnf",
    "length",
    "variables",
    "evaluate",
    "brute_force_sat",
    "clauses",
    "to_expr",
    "to_dimacs",
    "all_bipartitions",
    "compile_bipartitions",
    "assignment_to_bipartition",
    "enumerate_cnf",
    "SAT_GUARD",
]

SAT_GUARD = 24


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    child: "Formula"

    def __str__(self):
        return to_expr(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_expr(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_expr(self)


Formula = Union[Var, Not, And, Or]


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class NotCNFError(ValueError):
    def __init__(self, subtree: Formula, reason: str):
        super().__init__(f"not in CNF ({reason}): {to_expr(subtree)}")
        self.subtree = subtree


# ----------------------------------------------------------------- printing

_PREC = {Or: 1, And: 2}


def to_expr(f: Formula, unicode: bool = False) -> str:
    """Fully parenthesized text; the outermost binary node is left bare."""
    neg, conj, disj = ("¬", " ∧ ", " ∨ ") if unicode else ("~", " & ", " | ")

    def go(node, top):
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Not):
            return neg + go(node.child, False)
        op = conj if isinstance(node, And) else disj
        body = go(node.left, False) + op + go(node.right, False)
        return body if top else f"({body})"

    return go(f, True)


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)
_ALIASES = {"¬": "~", "!": "~", "∧": "&", "∨": "|"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1):
            tokens.append(("id", m.group(1), m.start(1)))
        elif m.group(2):
            ch = _ALIASES.get(m.group(2), m.group(2))
            if ch not in "~&|()":
                raise FormulaSyntaxError(f"unexpected character {m.group(2)!r}", m.start(2))
            tokens.append((ch, ch, m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_expr(text: str) -> Formula:
    """Parse ``~ & |`` (or ``¬ ∧ ∨``) expressions; ``&`` binds tighter than
    ``|`` and both chain to the left."""
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i][0]

    def take(kind):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        i += 1
        return tok

    def disjunction():
        node = conjunction()
        while peek() == "|":
            take("|")
            node = Or(node, conjunction())
        return node

    def conjunction():
        node = unary()
        while peek() == "&":
            take("&")
            node = And(node, unary())
        return node

    def unary():
        if peek() == "~":
            take("~")
            return Not(unary())
        if peek() == "(":
            take("(")
            node = disjunction()
            take(")")
            return node
        if peek() == "id":
            return Var(take("id")[1])
        tok = tokens[i]
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise FormulaSyntaxError(f"expected a literal or '(', found {what}", tok[2])

    node = disjunction()
    if peek() != "end":
        raise FormulaSyntaxError(f"unexpected {tokens[i][1]!r}", tokens[i][2])
    return node


def _chain(items, op):
    items = list(items)
    node = items[0]
    for item in items[1:]:
        node = op(node, item)
    return node


def parse_dimacs(text: str) -> Formula:
    """Read DIMACS CNF.  Variable ``i`` becomes ``Var("x<i>")``; literals of a
    clause chain into a left-associated disjunction, clauses into a
    left-associated conjunction."""
    n = m = None
    lits: list[int] = []
    found: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if n is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed header {line!r}") from None
            if n < 1 or m < 1:
                raise ValueError(f"line {lineno}: header needs n, m >= 1")
            continue
        if n is None:
            raise ValueError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                if not lits:
                    raise ValueError(f"line {lineno}: empty clause")
                found.append(lits)
                lits = []
            elif abs(lit) > n:
                raise ValueError(f"line {lineno}: variable {abs(lit)} out of range 1..{n}")
            else:
                lits.append(lit)
    if n is None:
        raise ValueError("missing 'p cnf' header")
    if lits:
        found.append(lits)
    if not found:
        raise ValueError("no clauses")
    if len(found) != m:
        raise ValueError(f"header declares {m} clauses, found {len(found)}")

    def literal(x):
        v = Var(f"x{abs(x)}")
        return v if x > 0 else Not(v)

    return _chain((_chain(map(literal, c), Or) for c in found), And)


def parse_formula(text: str, fmt: str = "auto") -> Formula:
    if fmt == "auto":
        fmt = "dimacs" if re.search(r"^\s*p\s+cnf\b", text, re.M) else "expr"
    if fmt == "dimacs":
        return parse_dimacs(text)
    if fmt == "expr":
        return parse_expr(text.strip())
    raise ValueError(f"unknown format {fmt!r}")


# ------------------------------------------------------------ normalization


def _is_literal(node) -> bool:
    return isinstance(node, Var) or (isinstance(node, Not) and isinstance(node.child, Var))


def _check_clause(node):
    if _is_literal(node):
        return
    if isinstance(node, Not):
        raise NotCNFError(node, "negation applied to a non-variable")
    if isinstance(node, And):
        raise NotCNFError(node, "conjunction below a disjunction")
    _check_clause(node.left)
    _check_clause(node.right)


def _check_cnf(node):
    if isinstance(node, And):
        _check_cnf(node.left)
        _check_cnf(node.right)
    else:
        _check_clause(node)


def normalize_cnf(f: Formula) -> Formula:
    """Return ``f`` unchanged if it is a binary CNF tree, else raise
    :class:`NotCNFError` naming the offending subtree.  Idempotent."""
    _check_cnf(f)
    return f


# ---------------------------------------------------------------- measures


def length(f: Formula) -> int:
    """Variable occurrences plus connectives; parentheses are not counted."""
    if isinstance(f, Var):
        return 1
    if isinstance(f, Not):
        return 1 + length(f.child)
    return 1 + length(f.left) + length(f.right)


def variables(f: Formula) -> list[str]:
    """Variable names in order of first occurrence."""
    seen: dict[str, None] = {}

    def go(node):
        if isinstance(node, Var):
            seen.setdefault(node.name, None)
        elif isinstance(node, Not):
            go(node.child)
        else:
            go(node.left)
            go(node.right)

    go(f)
    return list(seen)


def clauses(f: Formula) -> list[list[tuple[str, bool]]]:
    """Clauses of a CNF formula as lists of ``(name, positive)`` literals."""
    normalize_cnf(f)

    def conj(node):
        if isinstance(node, And):
            return conj(node.left) + conj(node.right)
        return [disj(node)]

    def disj(node):
        if isinstance(node, Or):
            return disj(node.left) + disj(node.right)
        if isinstance(node, Not):
            return [(node.child.name, False)]
        return [(node.name, True)]

    return conj(f)


def to_dimacs(f: Formula) -> str:
    names = variables(f)
    index = {name: i + 1 for i, name in enumerate(names)}
    cls = clauses(f)
    lines = [f"p cnf {len(names)} {len(cls)}"]
    for c in cls:
        lines.append(" ".join(str(index[v] if pos else -index[v]) for v, pos in c) + " 0")
    return "\n".join(lines) + "\n"


def evaluate(f: Formula, assignment) -> bool:
    if isinstance(f, Var):
        return bool(assignment[f.name])
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    if isinstance(f, And):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    return evaluate(f.left, assignment) or evaluate(f.right, assignment)


def brute_force_sat(f: Formula, guard: int = SAT_GUARD) -> list[dict[str, bool]]:
    """Every satisfying assignment, by exhaustive enumeration (false before
    true, first variable most significant)."""
    names = variables(f)
    if len(names) > guard:
        raise ValueError(f"{len(names)} variables exceed the enumeration guard {guard}")
    found = []
    for values in itertools.product((False, True), repeat=len(names)):
        a = dict(zip(names, values))
        if evaluate(f, a):
            found.append(a)
    return found


def enumerate_cnf(names: Iterable[str], max_length: int) -> Iterable[Formula]:
    """Every binary CNF tree over ``names`` with length at most
    ``max_length``, shortest first.  Trees differing only in shape or operand
    order are all produced."""
    names = list(names)
    lits: dict[int, list] = {1: [Var(x) for x in names], 2: [Not(Var(x)) for x in names]}
    clause: dict[int, list] = {}
    cnf: dict[int, list] = {}

    def grow(table, base, op, L):
        out = list(base.get(L, []))
        for k in range(1, L - 1):
            for left in table[k]:
                for right in table[L - 1 - k]:
                    out.append(op(left, right))
        table[L] = out

    for L in range(1, max_length + 1):
        grow(clause, lits, Or, L)
        grow(cnf, clause, And, L)
        yield from cnf[L]


# -------------------------------------------------------------- bipartitions


@dataclass(frozen=True)
class Bipartition:
    """Ordered pair (plus, minus) splitting ``{1..n}``."""

    plus: frozenset
    minus: frozenset
    n: int

    def __post_init__(self):
        object.__setattr__(self, "plus", frozenset(self.plus))
        object.__setattr__(self, "minus", frozenset(self.minus))
        if self.plus & self.minus:
            raise ValueError("sides of a bipartition must be disjoint")
        if self.plus | self.minus != frozenset(range(1, self.n + 1)):
            raise ValueError(f"sides must cover 1..{self.n}")

    def __str__(self):
        return "".join(map(str, sorted(self.plus))) + "|" + "".join(map(str, sorted(self.minus)))


def all_bipartitions(n: int) -> list[Bipartition]:
    full = range(1, n + 1)
    out = []
    for bits in itertools.product((True, False), repeat=n):
        plus = {i for i, b in zip(full, bits) if b}
        out.append(Bipartition(plus, set(full) - plus, n))
    return out


def _var(i: int) -> Var:
    return Var(f"v{i}")


def compile_bipartitions(P: Iterable[Bipartition], n: int) -> Formula:
    """CNF whose satisfying assignments are exactly the members of ``P`` under
    ``i in plus  <=>  v<i> is true``.

    Negates the disjunction of the point clauses of the complement of ``P``;
    if the complement is empty the result is ``(v1 | ~v1) & ...``.
    """
    P = set(P)
    if not P:
        raise ValueError("P must be non-empty")
    if n < 1:
        raise ValueError("n must be positive")
    for b in P:
        if b.n != n:
            raise ValueError(f"bipartition {b} is over 1..{b.n}, expected 1..{n}")
    complement = [b for b in all_bipartitions(n) if b not in P]
    if not complement:
        return _chain((Or(_var(i), Not(_var(i))) for i in range(1, n + 1)), And)
    # not q(b) = OR_{i in plus} ~v_i  OR  OR_{i in minus} v_i
    cls = []
    for b in complement:
        lits = [Not(_var(i)) if i in b.plus else _var(i) for i in range(1, n + 1)]
        cls.append(_chain(lits, Or))
    return normalize_cnf(_chain(cls, And))


def assignment_to_bipartition(assignment, n: int) -> Bipartition:
    plus = {i for i in range(1, n + 1) if assignment[f"v{i}"]}
    return Bipartition(plus, set(range(1, n + 1)) - plus, n)
