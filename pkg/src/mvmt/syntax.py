"""Signatures, terms, formulas, parsing and the fragment machinery.

Concrete grammar (ASCII)::

    formula  :=  'E' var+ '.' formula            existential, scopes to the end
              |  'A' var+ '.' formula            universal, scopes to the end
              |  implication
    implication := disjunction ('->' implication)?          right associative
    disjunction := conjunction ('\\/' conjunction)*
    conjunction := strong ('/\\' strong)*
    strong      := unary ('&' unary)*
    unary       := quantified formula | primary
    primary     := '(' formula ')' | '0' | '1' | '@' INT
                |  PRED '(' term (',' term)* ')' | PRED     (0-ary)
                |  term '=' term                            crisp equality

``&`` binds tighter than ``/\\``, which binds tighter than ``\\/``, which
binds tighter than ``->``.  ``0`` and ``1`` denote the bottom and top truth
values; ``@k`` denotes the chain element with index ``k``.  ``E``/``A`` are
reserved words.  Identifiers not declared in the language are variables.

Parsing renames bound variables apart: after :func:`parse_formula` every
binder uses a name distinct from all other binders and from every free
variable, so substitution never captures.

Two rewriters implement the fragment normal forms.  Both rely only on laws
that hold in every finite chain: min/max distribute over each other, the
conjunction table distributes over min and max (monotonicity plus linearity),
and existential quantifiers distribute over max.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, Mapping, Union


class FormulaError(ValueError):
    """Base error for language and formula handling."""


class ParseError(FormulaError):
    """Malformed formula text; ``position`` is a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


class FragmentError(FormulaError):
    """A formula lies outside the fragment an operation requires."""


class LanguageError(FormulaError):
    pass


@dataclass(frozen=True)
class Language:
    """A predicate signature.

    ``predicates`` and ``functions`` map symbol names to arities; arity-0
    predicates are truth constants of the language and arity-0 functions are
    individual constants.  ``algebra_constants`` maps names of chain-element
    constants to their element index; such names behave as 0-ary predicate
    atoms whose value is fixed in every structure.
    """

    predicates: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, int] = field(default_factory=dict)
    has_equality: bool = True
    algebra_constants: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        names = [*self.predicates, *self.functions, *self.algebra_constants]
        if len(names) != len(set(names)):
            raise LanguageError("predicate, function and algebra-constant names must be disjoint")
        for name, ar in [*self.predicates.items(), *self.functions.items()]:
            if not isinstance(ar, int) or ar < 0:
                raise LanguageError(f"arity of {name!r} must be a natural number, got {ar!r}")
        for name in names:
            if not _NAME_RE.fullmatch(name) or name in _RESERVED:
                raise LanguageError(f"invalid symbol name {name!r}")


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RESERVED = frozenset({"E", "A"})


def is_symbol_name(name: str) -> bool:
    """True when ``name`` can serve as a declared symbol in the grammar."""
    return bool(_NAME_RE.fullmatch(name)) and name not in _RESERVED


# --- terms and formulas -----------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    """A function symbol applied to subterms; constants have no arguments."""

    func: str
    args: tuple["Term", ...] = ()


Term = Union[Var, App]


@dataclass(frozen=True)
class Atom:
    """A predicate applied to terms (no arguments for truth constants)."""

    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class TruthConst:
    """A fixed truth value: ``element=None`` is the top of the evaluating
    chain, otherwise the chain element with that index."""

    element: int | None


@dataclass(frozen=True)
class StrongAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class WeakAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Atom, Equals, TruthConst, StrongAnd, WeakAnd, Or, Implies, Exists, Forall]

BOTTOM = TruthConst(0)
TOP = TruthConst(None)

_BINARY = {StrongAnd: "&", WeakAnd: "/\\", Or: "\\/", Implies: "->"}


# --- variables and substitution ----------------------------------------------

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        out: set[str] = set()
        for t in phi.args:
            out |= term_vars(t)
        return out
    if isinstance(phi, Equals):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, TruthConst):
        return set()
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    return free_vars(phi.left) | free_vars(phi.right)


def _fresh(base: str, used: set[str]) -> str:
    if base not in used and base not in _RESERVED:
        used.add(base)
        return base
    k = 2
    while f"{base}_{k}" in used:
        k += 1
    name = f"{base}_{k}"
    used.add(name)
    return name


def rename_apart(phi: Formula) -> Formula:
    """Rename binders so all bound names are distinct from each other and
    from every free variable."""
    used = set(free_vars(phi))

    def walk(f: Formula, env: dict[str, str]) -> Formula:
        if isinstance(f, (Atom, Equals, TruthConst)):
            return _map_terms(f, lambda t: _rename_term(t, env))
        if isinstance(f, (Exists, Forall)):
            new = _fresh(f.var, used)
            body = walk(f.body, {**env, f.var: new})
            return type(f)(new, body)
        return type(f)(walk(f.left, env), walk(f.right, env))

    return walk(phi, {})


def _rename_term(t: Term, env: Mapping[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    return App(t.func, tuple(_rename_term(a, env) for a in t.args))


def _map_terms(f: Formula, fn) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(fn(t) for t in f.args))
    if isinstance(f, Equals):
        return Equals(fn(f.left), fn(f.right))
    return f


def _subst_term(t: Term, var: str, repl: Term) -> Term:
    if isinstance(t, Var):
        return repl if t.name == var else t
    return App(t.func, tuple(_subst_term(a, var, repl) for a in t.args))


def substitute(phi: Formula, var: str, term: Term) -> Formula:
    """Replace free occurrences of ``var`` by ``term``, capture-avoiding."""
    if isinstance(phi, (Atom, Equals, TruthConst)):
        return _map_terms(phi, lambda t: _subst_term(t, var, term))
    if isinstance(phi, (Exists, Forall)):
        if phi.var == var:
            return phi
        if phi.var in term_vars(term) and var in free_vars(phi.body):
            used = free_vars(phi.body) | term_vars(term) | {var}
            new = _fresh(phi.var, used)
            body = _map_free_var(phi.body, phi.var, new)
            return type(phi)(new, substitute(body, var, term))
        return type(phi)(phi.var, substitute(phi.body, var, term))
    return type(phi)(substitute(phi.left, var, term), substitute(phi.right, var, term))


def _map_free_var(phi: Formula, old: str, new: str) -> Formula:
    return substitute(phi, old, Var(new))


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to consistent renaming of bound variables."""

    def go(a: Formula, b: Formula, ea: dict[str, str], eb: dict[str, str], depth: int) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, TruthConst):
            return a == b
        if isinstance(a, Atom):
            return a.pred == b.pred and len(a.args) == len(b.args) and all(
                got(x, y, ea, eb) for x, y in zip(a.args, b.args)
            )
        if isinstance(a, Equals):
            return got(a.left, b.left, ea, eb) and got(a.right, b.right, ea, eb)
        if isinstance(a, (Exists, Forall)):
            mark = f"\x00{depth}"
            return go(a.body, b.body, {**ea, a.var: mark}, {**eb, b.var: mark}, depth + 1)
        return go(a.left, b.left, ea, eb, depth) and go(a.right, b.right, ea, eb, depth)

    def got(x: Term, y: Term, ea, eb) -> bool:
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            return ea.get(x.name, x.name) == eb.get(y.name, y.name)
        return x.func == y.func and len(x.args) == len(y.args) and all(
            got(p, q, ea, eb) for p, q in zip(x.args, y.args)
        )

    return go(f, g, {}, {}, 0)


# --- printing ----------------------------------------------------------------

def term_to_text(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.func
    return f"{t.func}({', '.join(term_to_text(a) for a in t.args)})"


_PREC = {Implies: 1, Or: 2, WeakAnd: 3, StrongAnd: 4}


def to_text(phi: Formula) -> str:
    """Render a formula in the concrete grammar with minimal parentheses."""

    def prec(f: Formula) -> int:
        if isinstance(f, (Exists, Forall)):
            return 0
        return _PREC.get(type(f), 5)

    def render(f: Formula, required: int) -> str:
        if isinstance(f, Atom):
            s = f.pred if not f.args else f"{f.pred}({', '.join(term_to_text(a) for a in f.args)})"
        elif isinstance(f, Equals):
            s = f"{term_to_text(f.left)} = {term_to_text(f.right)}"
        elif isinstance(f, TruthConst):
            s = "1" if f.element is None else ("0" if f.element == 0 else f"@{f.element}")
        elif isinstance(f, (Exists, Forall)):
            kind = type(f)
            names = [f.var]
            body = f.body
            while isinstance(body, kind):
                names.append(body.var)
                body = body.body
            s = f"{'E' if kind is Exists else 'A'} {' '.join(names)} . {render(body, 0)}"
        else:
            p = _PREC[type(f)]
            if isinstance(f, Implies):
                s = f"{render(f.left, p + 1)} -> {render(f.right, p)}"
            else:
                s = f"{render(f.left, p)} {_BINARY[type(f)]} {render(f.right, p + 1)}"
        return f"({s})" if prec(f) < required else s

    return render(phi, 0)


# --- tokenizer and parser ----------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<arrow>->)"
    r"|(?P<wand>/\\)"
    r"|(?P<wor>\\/)"
    r"|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>[&.(),=@])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    """Recursive-descent parser; with ``lang=None`` it infers a language
    (applied names at formula level become predicates, applied names inside
    terms become functions, bare names become variables unless followed by
    an argument list)."""

    def __init__(self, text: str, lang: Language | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.lang = lang
        self.inferred_preds: dict[str, int] = {}
        self.inferred_funcs: dict[str, int] = {}

    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> tuple[str, str, int]:
        kind, val, pos = self.peek()
        if val != text:
            raise ParseError(f"expected {text!r}, found {val or 'end of input'!r}", pos)
        return self.next()

    # grammar levels

    def formula(self) -> Formula:
        return self.implication()

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.next()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[1] == "\\/":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.strong()
        while self.peek()[1] == "/\\":
            self.next()
            f = WeakAnd(f, self.strong())
        return f

    def strong(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.next()
            f = StrongAnd(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "name" and val in _RESERVED:
            self.next()
            names = []
            while self.peek()[0] == "name":
                names.append(self.next()[1])
            if not names:
                raise ParseError("quantifier needs at least one variable", self.peek()[2])
            self.expect(".")
            body = self.formula()
            node = Exists if val == "E" else Forall
            for name in reversed(names):
                body = node(name, body)
            return body
        return self.primary()

    def primary(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "num":
            self.next()
            if val == "0":
                return BOTTOM
            if val == "1":
                return TOP
            raise ParseError(f"bare numeral {val!r}; only 0 and 1 denote truth values", pos)
        if val == "@":
            self.next()
            k, v, p = self.peek()
            if k != "num":
                raise ParseError("@ must be followed by an element index", p)
            self.next()
            return TruthConst(int(v))
        if kind == "name":
            return self.atom_or_equality()
        raise ParseError(f"expected a formula, found {val or 'end of input'!r}", pos)

    def atom_or_equality(self) -> Formula:
        kind, name, pos = self.next()
        if self.lang is not None:
            if name in self.lang.algebra_constants:
                return Atom(name, ())
            if name in self.lang.predicates:
                return self.finish_atom(name, self.lang.predicates[name], pos)
            term = self.finish_term(name, pos)
        else:
            if self.peek()[1] == "(":
                arity, args = self.parse_args()
                self.record_pred(name, arity, pos)
                return Atom(name, args)
            if self.peek()[1] != "=":
                self.record_pred(name, 0, pos)
                return Atom(name, ())
            term = Var(name)
        eq_kind, eq_val, eq_pos = self.peek()
        if eq_val != "=":
            raise ParseError(
                f"{term_to_text(term)!r} is a term; expected '=' to form an equality", eq_pos
            )
        self.next()
        return Equals(term, self.term())

    def finish_atom(self, name: str, arity: int, pos: int) -> Formula:
        if self.peek()[1] == "(":
            got, args = self.parse_args()
        else:
            got, args = 0, ()
        if got != arity:
            raise ArityError(f"predicate {name!r} expects {arity} argument(s), got {got}", pos)
        return Atom(name, args)

    def parse_args(self) -> tuple[int, tuple[Term, ...]]:
        self.expect("(")
        args = [self.term()]
        while self.peek()[1] == ",":
            self.next()
            args.append(self.term())
        self.expect(")")
        return len(args), tuple(args)

    def term(self) -> Term:
        kind, name, pos = self.peek()
        if kind != "name":
            raise ParseError(f"expected a term, found {name or 'end of input'!r}", pos)
        if name in _RESERVED:
            raise ParseError(f"{name!r} is reserved for quantifiers", pos)
        self.next()
        return self.finish_term(name, pos)

    def finish_term(self, name: str, pos: int) -> Term:
        if self.lang is not None:
            if name in self.lang.predicates or name in self.lang.algebra_constants:
                raise ParseError(f"predicate {name!r} used in term position", pos)
            if name in self.lang.functions:
                arity = self.lang.functions[name]
                if self.peek()[1] == "(":
                    got, args = self.parse_args()
                else:
                    got, args = 0, ()
                if got != arity:
                    raise ArityError(f"function {name!r} expects {arity} argument(s), got {got}", pos)
                return App(name, args)
            if self.peek()[1] == "(":
                raise UnknownSymbolError(f"unknown function symbol {name!r}", pos)
            return Var(name)
        if self.peek()[1] == "(":
            arity, args = self.parse_args()
            self.record_func(name, arity, pos)
            return App(name, args)
        return Var(name)

    def record_pred(self, name: str, arity: int, pos: int) -> None:
        if name in self.inferred_funcs:
            raise ParseError(f"{name!r} used both as predicate and function", pos)
        seen = self.inferred_preds.get(name)
        if seen is not None and seen != arity:
            raise ArityError(f"predicate {name!r} used with arities {seen} and {arity}", pos)
        self.inferred_preds[name] = arity

    def record_func(self, name: str, arity: int, pos: int) -> None:
        if name in self.inferred_preds:
            raise ParseError(f"{name!r} used both as predicate and function", pos)
        seen = self.inferred_funcs.get(name)
        if seen is not None and seen != arity:
            raise ArityError(f"function {name!r} used with arities {seen} and {arity}", pos)
        self.inferred_funcs[name] = arity

    def run(self) -> Formula:
        f = self.formula()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected trailing input {val!r}", pos)
        return rename_apart(f)


def parse_formula(text: str, lang: Language) -> Formula:
    """Parse against a fixed language, arity checked, binders renamed apart."""
    return _Parser(text, lang).run()


def infer_formula(text: str, seed: Language | None = None) -> tuple[Formula, Language]:
    """Parse without a declared language, inferring one from usage.

    ``seed`` symbols (from previously inferred formulas) are honored and
    extended.  Bare identifiers in term position always become variables, so
    individual constants cannot be inferred; declare a language for those.
    """
    parser = _Parser(text, None)
    if seed is not None:
        parser.inferred_preds.update(seed.predicates)
        parser.inferred_funcs.update(seed.functions)
    f = parser.run()
    return f, Language(predicates=dict(parser.inferred_preds), functions=dict(parser.inferred_funcs))


# --- fragment classification --------------------------------------------------

WEDGE_PRIMITIVE = "wedge_primitive"
AMP_PRIMITIVE = "amp_primitive"
PP = "pp"
EXISTENTIAL_POSITIVE = "existential_positive"
SENTENCE = "sentence"


def strip_exists_prefix(phi: Formula) -> tuple[list[str], Formula]:
    """Split off the maximal leading block of existential quantifiers."""
    names = []
    while isinstance(phi, Exists):
        names.append(phi.var)
        phi = phi.body
    return names, phi


def _matrix_connectives(phi: Formula) -> set[type] | None:
    """Connective node types of a quantifier-free formula, or None if it
    contains a quantifier or an implication."""
    if isinstance(phi, (Atom, Equals, TruthConst)):
        return set()
    if isinstance(phi, (Exists, Forall, Implies)):
        return None
    left = _matrix_connectives(phi.left)
    right = _matrix_connectives(phi.right)
    if left is None or right is None:
        return None
    return left | right | {type(phi)}


def classify(phi: Formula) -> frozenset[str]:
    """Exact syntactic fragment membership of a formula.

    A formula is in a primitive fragment only in prefix form: a block of
    existential quantifiers (possibly empty) over a quantifier-free body
    using the fragment's connectives.
    """
    tags = set()
    if not free_vars(phi):
        tags.add(SENTENCE)
    _, matrix = strip_exists_prefix(phi)
    conns = _matrix_connectives(matrix)
    if conns is not None:
        if conns <= {WeakAnd}:
            tags.add(WEDGE_PRIMITIVE)
        if conns <= {StrongAnd}:
            tags.add(AMP_PRIMITIVE)
        if conns <= {WeakAnd, StrongAnd}:
            tags.add(PP)
        if conns <= {WeakAnd, StrongAnd, Or}:
            tags.add(EXISTENTIAL_POSITIVE)
    return frozenset(tags)


# --- normal forms -------------------------------------------------------------

Block = tuple[Formula, ...]  # atoms joined by strong conjunction


def _pp_blocks(matrix: Formula) -> list[Block]:
    if isinstance(matrix, (Atom, Equals, TruthConst)):
        return [(matrix,)]
    if isinstance(matrix, WeakAnd):
        return _pp_blocks(matrix.left) + _pp_blocks(matrix.right)
    if isinstance(matrix, StrongAnd):
        return [a + b for a in _pp_blocks(matrix.left) for b in _pp_blocks(matrix.right)]
    raise FragmentError(f"connective {type(matrix).__name__} has no place in a pp matrix")


def _canonical_blocks(blocks: list[Block]) -> list[Block]:
    ordered = [tuple(sorted(b, key=to_text)) for b in blocks]
    seen = set()
    out = []
    for b in sorted(ordered, key=lambda b: tuple(to_text(a) for a in b)):
        if b not in seen:
            seen.add(b)
            out.append(b)
    return out


def _rebuild(prefix: list[str], blocks: list[Block]) -> Formula:
    conjuncts = [reduce(StrongAnd, b) for b in blocks]
    matrix = reduce(WeakAnd, conjuncts)
    for name in reversed(prefix):
        matrix = Exists(name, matrix)
    return matrix


def pp_normal_form(phi: Formula) -> Formula:
    """Rewrite a pp formula into its canonical layered form: an existential
    prefix over a min-combination of strong-conjunction blocks of atoms.

    The result takes the same value as the input in every structure over
    every chain.  Blocks and the atoms inside each block are ordered
    lexicographically by their printed form; duplicate blocks collapse
    (min is idempotent), duplicate atoms inside a block do not (the
    conjunction table need not be).
    """
    if PP not in classify(phi):
        raise FragmentError(f"not a pp formula: {to_text(phi)}")
    prefix, matrix = strip_exists_prefix(phi)
    return _rebuild(prefix, _canonical_blocks(_pp_blocks(matrix)))


def is_pp_normal_shape(phi: Formula) -> bool:
    """Check the layering only: exists-prefix, then min-layer, then
    strong-conjunction blocks, then atoms."""
    _, matrix = strip_exists_prefix(phi)

    def weak_layer(f: Formula) -> bool:
        if isinstance(f, WeakAnd):
            return weak_layer(f.left) and weak_layer(f.right)
        return strong_layer(f)

    def strong_layer(f: Formula) -> bool:
        if isinstance(f, StrongAnd):
            return strong_layer(f.left) and strong_layer(f.right)
        return isinstance(f, (Atom, Equals, TruthConst))

    return weak_layer(matrix)


def _ep_disjuncts(matrix: Formula) -> list[list[Block]]:
    if isinstance(matrix, (Atom, Equals, TruthConst)):
        return [[(matrix,)]]
    if isinstance(matrix, Or):
        return _ep_disjuncts(matrix.left) + _ep_disjuncts(matrix.right)
    if isinstance(matrix, WeakAnd):
        return [a + b for a in _ep_disjuncts(matrix.left) for b in _ep_disjuncts(matrix.right)]
    if isinstance(matrix, StrongAnd):
        return [
            [x + y for x in a for y in b]
            for a in _ep_disjuncts(matrix.left)
            for b in _ep_disjuncts(matrix.right)
        ]
    raise FragmentError(f"connective {type(matrix).__name__} has no place in an EP matrix")


def ep_to_pp_disjunction(phi: Formula) -> list[Formula]:
    """Decompose an existential positive formula into pp formulas whose
    pointwise maximum equals it in every structure over every chain.

    Disjunctions are pushed out through both conjunctions and through the
    existential prefix; each resulting pp disjunct keeps the full prefix and
    is canonicalized like :func:`pp_normal_form`.  A pp input yields a
    one-element list holding its normal form.
    """
    if EXISTENTIAL_POSITIVE not in classify(phi):
        raise FragmentError(f"not an existential positive formula: {to_text(phi)}")
    prefix, matrix = strip_exists_prefix(phi)
    out: list[Formula] = []
    seen: set[str] = set()
    for blocks in _ep_disjuncts(matrix):
        candidate = _rebuild(prefix, _canonical_blocks(blocks))
        text = to_text(candidate)
        if text not in seen:
            seen.add(text)
            out.append(candidate)
    return out


def subformulas(phi: Formula) -> Iterator[Formula]:
    """All subformulas, outermost first."""
    yield phi
    if isinstance(phi, (Exists, Forall)):
        yield from subformulas(phi.body)
    elif isinstance(phi, (StrongAnd, WeakAnd, Or, Implies)):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)


def atoms_of(phi: Formula) -> list[Formula]:
    """The atomic subformulas (atoms, equalities, truth constants), in order."""
    return [f for f in subformulas(phi) if isinstance(f, (Atom, Equals, TruthConst))]
