"""Finite many-valued model theory toolkit.

Builds finite linearly ordered truth-value chains and structures valued in
them, evaluates first-order formulas, recognizes and normalizes the
positive-primitive and existential positive fragments, searches for
homomorphisms, constructs (weak) direct products, and machine-checks the
preservation laws tying these pieces together.
"""

from .algebra import (
    Chain,
    ChainError,
    ElementRangeError,
    InvalidSizeError,
    InvalidTableError,
    chain_from_dict,
    chain_kind,
    chain_to_dict,
    coatom,
    make_custom,
    make_godel,
    make_lukasiewicz,
    residuum,
    tnorm,
)
from .syntax import (
    App,
    ArityError,
    Atom,
    Equals,
    Exists,
    Forall,
    Formula,
    FormulaError,
    FragmentError,
    Implies,
    Language,
    LanguageError,
    Or,
    ParseError,
    StrongAnd,
    Term,
    TruthConst,
    UnknownSymbolError,
    Var,
    WeakAnd,
    alpha_equal,
    classify,
    ep_to_pp_disjunction,
    free_vars,
    infer_formula,
    is_pp_normal_shape,
    parse_formula,
    pp_normal_form,
    substitute,
    term_to_text,
    to_text,
)
from .structures import (
    EvaluationError,
    PredTable,
    Structure,
    StructureError,
    Valuation,
    diagram,
    dumps_structure,
    eval_term,
    evaluate,
    expand_with_names,
    expand_with_truth_constants,
    is_model,
    load_structure,
    loads_structure,
    named_constant,
    save_structure,
    structure_from_dict,
    structure_to_dict,
    truth_constant_name,
)
from .morphisms import (
    InternalInvariantError,
    MorphismError,
    Violation,
    check_diagram_lemma,
    check_homomorphism,
    classify_morphism,
    compose,
    find_homomorphisms,
    identity_mapping,
    is_homomorphism,
    load_mapping,
    mapping_from_dict,
    mapping_to_dict,
    save_mapping,
)
from .products import ProductError, direct_product, projection, split_product_name, weak_product
from .solver import SolveResult, decide_pp_top, solve_ep, solve_pp
from .harness import (
    CheckReport,
    GenConfig,
    HarnessError,
    check_ep_preservation,
    check_hom_preservation,
    check_pp_theory_closure,
    check_product_preservation,
    enumerate_tnorm_tables,
    find_below_top_counterexample,
    random_custom_chain,
)

__version__ = "0.1.0"
