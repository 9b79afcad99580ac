"""Search-based evaluation of pp and existential positive sentences.

A pp sentence is a constraint instance: the existential prefix lists the
variables, the matrix the constraints.  :func:`solve_pp` computes the exact
truth value by branch and bound over variable assignments, returning a
witnessing assignment for the prefix.  :func:`decide_pp_top` only decides
whether the value is the top, pruning any branch in which some instantiated
atom already falls below top (for pp matrices the value is top exactly when
every atom is top).  Existential positive sentences reduce to the maximum
over their pp disjuncts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .structures import Structure, evaluate
from .syntax import (
    Atom,
    Equals,
    FragmentError,
    Formula,
    StrongAnd,
    TruthConst,
    WeakAnd,
    atoms_of,
    classify,
    free_vars,
    strip_exists_prefix,
    term_vars,
    to_text,
    EXISTENTIAL_POSITIVE,
    PP,
    SENTENCE,
    ep_to_pp_disjunction,
)


@dataclass
class SolveResult:
    """Outcome of a solve: the exact value, a prefix assignment attaining
    it, whether that value is the top, and (for existential positive input)
    which pp disjunct attained the maximum."""

    value: int
    witness: dict[str, str]
    decided_top: bool
    disjunct: int | None = None


def _require_pp_sentence(phi: Formula) -> None:
    tags = classify(phi)
    if PP not in tags:
        raise FragmentError(f"not a pp formula: {to_text(phi)}")
    if SENTENCE not in tags:
        raise FragmentError(f"not a sentence: free variables {sorted(free_vars(phi))}")


def _top_tuple_count(struct: Structure, atom: Formula) -> int:
    """How many argument tuples give this atom the top value; the search
    assigns variables with the scarcest support first."""
    if isinstance(atom, Equals):
        return len(struct.domain)
    if isinstance(atom, TruthConst):
        size = len(struct.domain)
        value = struct.chain.top if atom.element is None else atom.element
        return size if value == struct.chain.top else 0
    assert isinstance(atom, Atom)
    if atom.pred in struct.lang.algebra_constants:
        return 1 if struct.lang.algebra_constants[atom.pred] == struct.chain.top else 0
    table = struct.predicates[atom.pred]
    total = len(struct.domain) ** table.arity
    listed_top = sum(1 for v in table.entries.values() if v == struct.chain.top)
    if table.default == struct.chain.top:
        return total - len(table.entries) + listed_top
    return listed_top


def _variable_order(struct: Structure, prefix: list[str], matrix: Formula) -> list[str]:
    scores: dict[str, int] = {}
    for atom in atoms_of(matrix):
        count = _top_tuple_count(struct, atom)
        names: set[str] = set()
        if isinstance(atom, Atom):
            for t in atom.args:
                names |= term_vars(t)
        elif isinstance(atom, Equals):
            names = term_vars(atom.left) | term_vars(atom.right)
        for name in names:
            if name in prefix:
                scores[name] = min(scores.get(name, count), count)
    unconstrained = float("inf")
    return sorted(prefix, key=lambda v: (scores.get(v, unconstrained), v))


def _bound(struct: Structure, matrix: Formula, env: dict[str, str]) -> int:
    """Upper bound for the matrix value over all completions of ``env``:
    atoms with unassigned variables count as top, and both conjunctions are
    monotone, so the bound dominates every completion and is exact once all
    variables are assigned."""
    top = struct.chain.top
    if isinstance(matrix, WeakAnd):
        left = _bound(struct, matrix.left, env)
        if left == 0:
            return 0
        return min(left, _bound(struct, matrix.right, env))
    if isinstance(matrix, StrongAnd):
        left = _bound(struct, matrix.left, env)
        if left == 0:
            return 0
        return struct.chain.tnorm[left][_bound(struct, matrix.right, env)]
    if isinstance(matrix, (Atom, Equals)):
        needed = free_vars(matrix)
        if any(v not in env for v in needed):
            return top
        return evaluate(struct, matrix, env)
    if isinstance(matrix, TruthConst):
        return evaluate(struct, matrix, env)
    raise FragmentError(f"connective {type(matrix).__name__} has no place in a pp matrix")


def solve_pp(struct: Structure, phi: Formula) -> SolveResult:
    """Exact value of a pp sentence with a witnessing prefix assignment.

    Branch and bound in a deterministic order: variables sorted by scarcest
    top support (ties by name), domain elements in domain order.  The
    witness is the first assignment in that order attaining the final value.
    """
    _require_pp_sentence(phi)
    prefix, matrix = strip_exists_prefix(phi)
    order = _variable_order(struct, prefix, matrix)
    top = struct.chain.top

    best = -1
    best_env: dict[str, str] = {}
    env: dict[str, str] = {}

    def search(i: int) -> bool:
        nonlocal best, best_env
        bound = _bound(struct, matrix, env)
        if bound <= best:
            return False
        if i == len(order):
            best = bound
            best_env = dict(env)
            return best == top
        for e in struct.domain:
            env[order[i]] = e
            if search(i + 1):
                return True
            del env[order[i]]
        return False

    search(0)
    witness = {v: best_env[v] for v in prefix} if prefix else {}
    return SolveResult(value=best, witness=witness, decided_top=best == top)


def decide_pp_top(struct: Structure, phi: Formula) -> dict[str, str] | None:
    """Witness making a pp sentence take value top, or None.

    Prunes a branch as soon as any fully instantiated atom falls below top,
    without computing exact values.
    """
    _require_pp_sentence(phi)
    prefix, matrix = strip_exists_prefix(phi)
    order = _variable_order(struct, prefix, matrix)
    top = struct.chain.top
    atoms = atoms_of(matrix)
    env: dict[str, str] = {}

    def all_instantiated_top(assigned: str | None) -> bool:
        for atom in atoms:
            needed = free_vars(atom)
            if assigned is not None and assigned not in needed and needed:
                continue
            if any(v not in env for v in needed):
                continue
            if evaluate(struct, atom, env) != top:
                return False
        return True

    def search(i: int) -> dict[str, str] | None:
        if i == len(order):
            return dict(env)
        for e in struct.domain:
            env[order[i]] = e
            if all_instantiated_top(order[i]):
                found = search(i + 1)
                if found is not None:
                    return found
            del env[order[i]]
        return None

    if not all_instantiated_top(None):
        return None
    found = search(0)
    if found is None:
        return None
    return {v: found[v] for v in prefix}


def solve_ep(struct: Structure, phi: Formula) -> SolveResult:
    """Maximum over the pp disjuncts of an existential positive sentence."""
    tags = classify(phi)
    if EXISTENTIAL_POSITIVE not in tags:
        raise FragmentError(f"not an existential positive formula: {to_text(phi)}")
    if SENTENCE not in tags:
        raise FragmentError(f"not a sentence: free variables {sorted(free_vars(phi))}")
    disjuncts = ep_to_pp_disjunction(phi)
    best: SolveResult | None = None
    best_index = 0
    for index, d in enumerate(disjuncts):
        r = solve_pp(struct, d)
        if best is None or r.value > best.value:
            best, best_index = r, index
            if best.value == struct.chain.top:
                break
    assert best is not None
    return SolveResult(
        value=best.value, witness=best.witness, decided_top=best.decided_top, disjunct=best_index
    )
