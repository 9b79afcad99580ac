"""Seeded random generation and machine checks of the preservation laws.

Everything here is a pure function of the configured seed: each trial draws
its own generator from ``(seed, suite, trial index)``, so reports are
reproducible run to run and every violation record carries the serialized
inputs needed to re-check it by hand.

The four checks are zero-tolerance logical assertions, not statistics:

* homomorphisms preserve top-valued pp formulas,
* every member of the weak-product family satisfies the top-value
  biconditional against its factors,
* sampled models of a pp axiom set stay models under homomorphic images and
  canonical products,
* homomorphisms preserve top-valued existential positive formulas.

Trials whose premise cannot be set up (no homomorphism between the drawn
structures, or the drawn formula never reaches the top value in the source)
are skipped and counted; a report whose effective trials fall below 30% of
the attempts is inconclusive rather than a pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct

from .algebra import Chain, chain_to_dict, make_custom, make_godel, make_lukasiewicz
from .morphisms import find_homomorphisms
from .products import direct_product, split_product_name, weak_product
from .structures import (
    PredTable,
    Structure,
    evaluate,
    is_model,
    structure_to_dict,
)
from .syntax import (
    App,
    Atom,
    Equals,
    Exists,
    Forall,
    Formula,
    FragmentError,
    Implies,
    Language,
    Or,
    StrongAnd,
    TruthConst,
    Var,
    WeakAnd,
    classify,
    to_text,
    PP,
    SENTENCE,
)

MIN_EFFECTIVE_RATIO = 0.3

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

_DOMAIN_POOL = ("a", "b", "c", "d", "e", "f", "g", "h")
_FREE_POOL = ("u", "w")


class HarnessError(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    """Bounds and seed for the generators; generation is a pure function of
    ``seed``.  ``allow_implication`` opens the formula generator to the
    implication connective, which breaks preservation and serves as the
    negative control."""

    seed: int = 0
    max_chain: int = 4
    max_domain: int = 3
    max_pred_arity: int = 2
    max_depth: int = 4
    trials: int = 200
    allow_implication: bool = False

    def __post_init__(self):
        for name in ("max_chain", "max_domain", "max_pred_arity", "max_depth", "trials"):
            if getattr(self, name) < 1:
                raise HarnessError(f"{name} must be at least 1")


@dataclass
class CheckReport:
    """Outcome of one suite: attempted and effective trial counts, the
    violation records (each self-contained for replay), and the verdict."""

    suite: str
    trials: int
    effective: int
    skipped: int
    violations: list[dict] = field(default_factory=list)
    verdict: str = PASS

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "effective": self.effective,
            "skipped": self.skipped,
            "violations": self.violations,
            "verdict": self.verdict,
        }


def _finish(suite: str, trials: int, effective: int, violations: list[dict]) -> CheckReport:
    if violations:
        verdict = FAIL
    elif trials == 0 or effective / trials < MIN_EFFECTIVE_RATIO:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return CheckReport(
        suite=suite,
        trials=trials,
        effective=effective,
        skipped=trials - effective,
        violations=violations,
        verdict=verdict,
    )


def trial_rng(seed: int, suite: str, trial: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{trial}")


# --- random algebras ------------------------------------------------------------

@lru_cache(maxsize=None)
def enumerate_tnorm_tables(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All valid conjunction tables on the n-element chain, n <= 6.

    Backtracks over the free upper-triangle cells with monotonicity bounds
    (a cell can never exceed min of its coordinates, nor drop below its
    neighbors), validating each completed table in full.
    """
    if n > 6:
        raise HarnessError("table enumeration is only intended for n <= 6")
    if n == 1:
        return (((0,),),)
    table = [[0] * n for _ in range(n)]
    for j in range(n):
        table[n - 1][j] = j
        table[j][n - 1] = j
    cells = [(i, j) for i in range(1, n - 1) for j in range(i, n - 1)]
    found: list[tuple[tuple[int, ...], ...]] = []

    def fill(k: int) -> None:
        if k == len(cells):
            candidate = tuple(tuple(row) for row in table)
            try:
                make_custom(n, candidate)
            except ValueError:
                return
            found.append(candidate)
            return
        i, j = cells[k]
        lo = max(table[i - 1][j], table[i][j - 1])
        hi = min(i, j)
        for v in range(lo, hi + 1):
            table[i][j] = v
            table[j][i] = v
            fill(k + 1)

    fill(0)
    return tuple(found)


def random_custom_chain(rng: random.Random, n: int) -> Chain:
    """A uniformly drawn valid chain of size ``n`` (n <= 6)."""
    return make_custom(n, rng.choice(enumerate_tnorm_tables(n)))


def gen_chain(rng: random.Random, max_size: int) -> Chain:
    size = rng.randint(2, max(2, max_size))
    return make_lukasiewicz(size) if rng.random() < 0.5 else make_godel(size)


# --- random languages and structures ----------------------------------------------

def gen_language(rng: random.Random, max_pred_arity: int, with_functions: bool = True) -> Language:
    count = rng.randint(1, 3)
    names = ("P", "Q", "R")[:count]
    predicates = {}
    for i, name in enumerate(names):
        predicates[name] = rng.randint(1, max_pred_arity) if i == 0 else rng.randint(0, max_pred_arity)
    functions: dict[str, int] = {}
    if with_functions:
        if rng.random() < 0.3:
            functions["c"] = 0
        if rng.random() < 0.3:
            functions["f"] = 1
    return Language(predicates=predicates, functions=functions)


def _gen_value(rng: random.Random, chain: Chain) -> int:
    # Bias toward top so preservation premises fire often enough.
    if rng.random() < 0.4:
        return chain.top
    return rng.randrange(chain.size)


def gen_structure(rng: random.Random, chain: Chain, lang: Language, max_domain: int) -> Structure:
    size = rng.randint(1, max_domain)
    domain = _DOMAIN_POOL[:size]
    predicates = {}
    for name, arity in lang.predicates.items():
        entries = {}
        for args in iproduct(domain, repeat=arity):
            entries[args] = _gen_value(rng, chain)
        predicates[name] = PredTable(arity=arity, default=0, entries=entries)
    functions = {}
    constants = {}
    for name, arity in lang.functions.items():
        if arity == 0:
            constants[name] = rng.choice(domain)
        else:
            functions[name] = {
                args: rng.choice(domain) for args in iproduct(domain, repeat=arity)
            }
    return Structure(
        chain=chain,
        lang=lang,
        domain=domain,
        predicates=predicates,
        functions=functions,
        constants=constants,
    )


def gen_mapping(rng: random.Random, m: Structure, n: Structure) -> dict[str, str]:
    return {e: rng.choice(n.domain) for e in m.domain}


# --- random formulas ----------------------------------------------------------------

def _gen_term(rng: random.Random, lang: Language, scope: list[str]):
    constants = [f for f, ar in lang.functions.items() if ar == 0]
    unary = [f for f, ar in lang.functions.items() if ar == 1]
    roll = rng.random()
    if scope and (roll < 0.7 or not constants):
        base = Var(rng.choice(scope))
    elif constants:
        base = App(rng.choice(constants))
    else:
        base = Var(rng.choice(scope))
    if unary and rng.random() < 0.2:
        return App(rng.choice(unary), (base,))
    return base


def _gen_atom(rng: random.Random, lang: Language, scope: list[str]) -> Formula:
    roll = rng.random()
    has_terms = bool(scope) or any(ar == 0 for ar in lang.functions.values())
    if roll < 0.15 and has_terms:
        return Equals(_gen_term(rng, lang, scope), _gen_term(rng, lang, scope))
    if roll < 0.2:
        return TruthConst(None)
    candidates = [(p, ar) for p, ar in lang.predicates.items() if ar == 0 or has_terms]
    if not candidates:
        return TruthConst(None)
    pred, arity = rng.choice(candidates)
    return Atom(pred, tuple(_gen_term(rng, lang, scope) for _ in range(arity)))


def _gen_matrix(rng: random.Random, lang: Language, scope: list[str], depth: int, mode: str) -> Formula:
    weights: list[tuple[object, float]] = [("atom", 0.4), (StrongAnd, 0.2), (WeakAnd, 0.2)]
    if mode.startswith("ep"):
        weights.append((Or, 0.1))
    if mode.endswith("imp"):
        # negative-control mode: implication heavy enough to surface quickly
        weights.append((Implies, 0.3))
    if depth <= 0:
        return _gen_atom(rng, lang, scope)
    total = sum(w for _, w in weights)
    roll = rng.random() * total
    for node, w in weights:
        roll -= w
        if roll <= 0:
            break
    if node == "atom":
        return _gen_atom(rng, lang, scope)
    return node(
        _gen_matrix(rng, lang, scope, depth - 1, mode),
        _gen_matrix(rng, lang, scope, depth - 1, mode),
    )


def gen_pp_formula(
    rng: random.Random,
    lang: Language,
    free: list[str],
    max_depth: int,
    mode: str = "pp",
) -> Formula:
    """A prefix-form formula: an existential block over a matrix drawn with
    the configured connective mix.  ``mode`` is "pp", "ep", or either with
    an "_imp" suffix to admit implication (the negative control)."""
    bound_count = rng.choices((0, 1, 2, 3), weights=(0.2, 0.35, 0.3, 0.15))[0]
    has_constants = any(ar == 0 for ar in lang.functions.values())
    if bound_count == 0 and not free and not has_constants:
        bound_count = 1
    bound = [f"x{i}" for i in range(1, bound_count + 1)]
    matrix = _gen_matrix(rng, lang, bound + list(free), max_depth, mode)
    for name in reversed(bound):
        matrix = Exists(name, matrix)
    return matrix


def gen_ep_formula(rng: random.Random, lang: Language, free: list[str], max_depth: int) -> Formula:
    return gen_pp_formula(rng, lang, free, max_depth, mode="ep")


def gen_full_formula(rng: random.Random, lang: Language, free: list[str], max_depth: int) -> Formula:
    """An unrestricted formula over every connective and both quantifiers,
    for exercising the evaluator itself."""
    counter = [0]

    def go(scope: list[str], depth: int) -> Formula:
        if depth <= 0:
            return _gen_atom(rng, lang, scope)
        roll = rng.random()
        if roll < 0.35:
            return _gen_atom(rng, lang, scope)
        if roll < 0.50:
            return StrongAnd(go(scope, depth - 1), go(scope, depth - 1))
        if roll < 0.65:
            return WeakAnd(go(scope, depth - 1), go(scope, depth - 1))
        if roll < 0.75:
            return Or(go(scope, depth - 1), go(scope, depth - 1))
        if roll < 0.85:
            return Implies(go(scope, depth - 1), go(scope, depth - 1))
        counter[0] += 1
        name = f"b{counter[0]}"
        node = Exists if roll < 0.925 else Forall
        return node(name, go(scope + [name], depth - 1))

    return go(list(free), max_depth)


# --- check suites ---------------------------------------------------------------------

def _premise_valuations(free: list[str], domain: tuple[str, ...]):
    for tup in iproduct(domain, repeat=len(free)):
        yield dict(zip(free, tup))


def _preservation_suite(cfg: GenConfig, suite: str, mode: str) -> CheckReport:
    """Shared core of the preservation suites: per trial, assert the
    top-value transfer for every homomorphism between the drawn structures
    and every tuple making the drawn formula top in the source.  A trial is
    effective when at least one (homomorphism, tuple) premise fired."""
    violations: list[dict] = []
    effective = 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, suite, trial)
        chain = gen_chain(rng, cfg.max_chain)
        lang = gen_language(rng, cfg.max_pred_arity)
        m = gen_structure(rng, chain, lang, cfg.max_domain)
        n = gen_structure(rng, chain, lang, cfg.max_domain)
        homs = find_homomorphisms(m, n)
        if not homs:
            continue
        free = list(_FREE_POOL[: rng.randint(0, 2)])
        phi = gen_pp_formula(rng, lang, free, cfg.max_depth, mode)
        fired = False
        for valuation in _premise_valuations(free, m.domain):
            if evaluate(m, phi, valuation) != chain.top:
                continue
            fired = True
            for g in homs:
                mapped = {v: g[e] for v, e in valuation.items()}
                got = evaluate(n, phi, mapped)
                if got != chain.top:
                    violations.append(
                        {
                            "trial": trial,
                            "seed": f"{cfg.seed}:{suite}:{trial}",
                            "chain": chain_to_dict(chain),
                            "m": structure_to_dict(m),
                            "n": structure_to_dict(n),
                            "mapping": g,
                            "formula": to_text(phi),
                            "assignment": valuation,
                            "target_value": got,
                        }
                    )
        if fired:
            effective += 1
    return _finish(suite, cfg.trials, effective, violations)


def check_hom_preservation(cfg: GenConfig) -> CheckReport:
    """Draw structure pairs and prefix-form formulas; assert that every
    homomorphism carries every top-valued instance to a top-valued one."""
    return _preservation_suite(cfg, "hom", "pp_imp" if cfg.allow_implication else "pp")


def check_ep_preservation(cfg: GenConfig) -> CheckReport:
    """The preservation suite over the existential positive mix."""
    return _preservation_suite(cfg, "ep", "ep_imp" if cfg.allow_implication else "ep")


def check_product_preservation(cfg: GenConfig) -> CheckReport:
    """Build the canonical and a scrambled weak product of 2 or 3 factors
    and assert, tuple by tuple, both directions of the top-value
    biconditional between the product and its coordinates."""
    violations: list[dict] = []
    effective = 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, "product", trial)
        chain = gen_chain(rng, cfg.max_chain)
        lang = gen_language(rng, cfg.max_pred_arity)
        count = rng.randint(2, 3)
        factors = [gen_structure(rng, chain, lang, cfg.max_domain) for _ in range(count)]
        free = list(_FREE_POOL[: rng.randint(0, 1)])
        phi = gen_pp_formula(rng, lang, free, cfg.max_depth)
        products = {
            "min": direct_product(factors),
            "scrambled": weak_product(factors, policy="scrambled", seed=trial),
        }
        fired = False
        for policy, prod in products.items():
            for valuation in _premise_valuations(free, prod.domain):
                in_product = evaluate(prod, phi, valuation) == chain.top
                per_factor = all(
                    evaluate(
                        factors[i],
                        phi,
                        {v: split_product_name(e)[i] for v, e in valuation.items()},
                    )
                    == chain.top
                    for i in range(count)
                )
                if in_product or per_factor:
                    fired = True
                if in_product != per_factor:
                    violations.append(
                        {
                            "trial": trial,
                            "seed": f"{cfg.seed}:product:{trial}",
                            "policy": policy,
                            "chain": chain_to_dict(chain),
                            "factors": [structure_to_dict(s) for s in factors],
                            "formula": to_text(phi),
                            "assignment": valuation,
                            "product_top": in_product,
                            "factors_top": per_factor,
                        }
                    )
        if fired:
            effective += 1
    return _finish("product", cfg.trials, effective, violations)


def check_pp_theory_closure(cfg: GenConfig, axioms: list[Formula], lang: Language) -> CheckReport:
    """Sample structures over ``lang``; whenever drawn models of the axioms
    admit a homomorphism to another drawn structure or a canonical product,
    assert the image and the product are models too."""
    for phi in axioms:
        tags = classify(phi)
        if PP not in tags:
            raise FragmentError(f"axiom is not a pp formula: {to_text(phi)}")
        if SENTENCE not in tags:
            raise FragmentError(f"axiom is not a sentence: {to_text(phi)}")
    violations: list[dict] = []
    effective = 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, "closure", trial)
        chain = gen_chain(rng, cfg.max_chain)
        first = gen_structure(rng, chain, lang, cfg.max_domain)
        second = gen_structure(rng, chain, lang, cfg.max_domain)
        fired = False
        models = [s for s in (first, second) if is_model(s, axioms)]
        if len(models) == 2:
            prod = direct_product([first, second])
            fired = True
            if not is_model(prod, axioms):
                violations.append(
                    {
                        "trial": trial,
                        "seed": f"{cfg.seed}:closure:{trial}",
                        "kind": "product",
                        "chain": chain_to_dict(chain),
                        "factors": [structure_to_dict(first), structure_to_dict(second)],
                        "axioms": [to_text(a) for a in axioms],
                    }
                )
        for source, target in ((first, second), (second, first)):
            if not is_model(source, axioms):
                continue
            homs = find_homomorphisms(source, target, limit=1)
            if not homs:
                continue
            fired = True
            if not is_model(target, axioms):
                violations.append(
                    {
                        "trial": trial,
                        "seed": f"{cfg.seed}:closure:{trial}",
                        "kind": "homomorphism",
                        "chain": chain_to_dict(chain),
                        "m": structure_to_dict(source),
                        "n": structure_to_dict(target),
                        "mapping": homs[0],
                        "axioms": [to_text(a) for a in axioms],
                    }
                )
        if fired:
            effective += 1
    return _finish("closure", cfg.trials, effective, violations)


def find_below_top_counterexample(cfg: GenConfig) -> dict | None:
    """A concrete instance showing that preservation does not extend to
    values below the top: a homomorphism and a pp formula whose source value
    is positive but strictly above its target value."""
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, "below-top", trial)
        chain = gen_chain(rng, cfg.max_chain)
        lang = gen_language(rng, cfg.max_pred_arity)
        m = gen_structure(rng, chain, lang, cfg.max_domain)
        n = gen_structure(rng, chain, lang, cfg.max_domain)
        homs = find_homomorphisms(m, n, limit=1)
        if not homs:
            continue
        g = homs[0]
        free = list(_FREE_POOL[: rng.randint(0, 2)])
        phi = gen_pp_formula(rng, lang, free, cfg.max_depth)
        for valuation in _premise_valuations(free, m.domain):
            source = evaluate(m, phi, valuation)
            if source == chain.top or source == 0:
                continue
            mapped = {v: g[e] for v, e in valuation.items()}
            target = evaluate(n, phi, mapped)
            if target < source:
                return {
                    "trial": trial,
                    "seed": f"{cfg.seed}:below-top:{trial}",
                    "chain": chain_to_dict(chain),
                    "m": structure_to_dict(m),
                    "n": structure_to_dict(n),
                    "mapping": g,
                    "formula": to_text(phi),
                    "assignment": valuation,
                    "source_value": source,
                    "target_value": target,
                }
    return None


SUITES = {
    "hom": check_hom_preservation,
    "product": check_product_preservation,
    "ep": check_ep_preservation,
}
