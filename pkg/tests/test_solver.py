import pytest

from mvmt import (
    FragmentError,
    decide_pp_top,
    evaluate,
    make_lukasiewicz,
    parse_formula,
    solve_ep,
    solve_pp,
)
from mvmt.harness import (
    gen_chain,
    gen_ep_formula,
    gen_language,
    gen_pp_formula,
    gen_structure,
    trial_rng,
)
from mvmt.syntax import strip_exists_prefix

from support import build, ref_evaluate

CHAIN3 = make_lukasiewicz(3)


def two_point():
    return build(
        CHAIN3,
        ("a", "b"),
        preds={"P": (1, 0, {("a",): 2, ("b",): 1}), "Q": (1, 0, {("b",): 2})},
    )


def test_simple_existential():
    s = two_point()
    r = solve_pp(s, parse_formula("E x . P(x)", s.lang))
    assert r.value == 2 and r.witness == {"x": "a"} and r.decided_top
    assert decide_pp_top(s, parse_formula("E x . P(x)", s.lang)) == {"x": "a"}


def test_disjoint_top_supports():
    s = two_point()
    phi = parse_formula("E x . P(x) & Q(x)", s.lang)
    r = solve_pp(s, phi)
    assert not r.decided_top
    assert r.value == evaluate(s, phi)
    assert decide_pp_top(s, phi) is None


def test_closed_matrix_and_empty_prefix():
    s = build(CHAIN3, ("a",), preds={"P": (1, 0, {("a",): 2})}, consts={"c": "a"})
    phi = parse_formula("P(c)", s.lang)
    r = solve_pp(s, phi)
    assert r.value == 2 and r.witness == {} and r.decided_top
    assert decide_pp_top(s, phi) == {}


def test_fragment_and_sentence_preconditions():
    s = two_point()
    with pytest.raises(FragmentError):
        solve_pp(s, parse_formula("E x . P(x) \\/ Q(x)", s.lang))
    with pytest.raises(FragmentError):
        solve_pp(s, parse_formula("P(x)", s.lang))
    with pytest.raises(FragmentError):
        solve_ep(s, parse_formula("A x . P(x)", s.lang))
    with pytest.raises(FragmentError):
        solve_ep(s, parse_formula("P(x) \\/ Q(y)", s.lang))


def test_solve_pp_matches_evaluation_randomized():
    for t in range(200):
        rng = trial_rng(61, "solve", t)
        chain = gen_chain(rng, 4)
        lang = gen_language(rng, 2)
        s = gen_structure(rng, chain, lang, 3)
        phi = gen_pp_formula(rng, lang, [], 4)
        r = solve_pp(s, phi)
        expected = ref_evaluate(s, phi)
        assert r.value == expected
        assert r.decided_top == (expected == chain.top)
        # witness soundness: the quantifier-free matrix reproduces the value
        prefix, matrix = strip_exists_prefix(phi)
        if prefix:
            assert set(r.witness) == set(prefix)
            assert evaluate(s, matrix, r.witness) == r.value
        # pruned top decision agrees with the exact value
        w = decide_pp_top(s, phi)
        assert (w is not None) == r.decided_top
        if w is not None:
            assert evaluate(s, matrix, w) == chain.top


def test_solve_ep_basic_cases():
    s = two_point()
    phi = parse_formula("E x . P(x) \\/ Q(x)", s.lang)
    r = solve_ep(s, phi)
    assert r.value == 2 and r.decided_top and r.disjunct == 0
    assert evaluate(s, phi) == 2

    pp = parse_formula("E x . P(x) & Q(x)", s.lang)
    ep_result = solve_ep(s, pp)
    pp_result = solve_pp(s, pp)
    assert (ep_result.value, ep_result.witness, ep_result.decided_top) == (
        pp_result.value,
        pp_result.witness,
        pp_result.decided_top,
    )
    assert ep_result.disjunct == 0


def test_solve_ep_reports_attaining_disjunct():
    s = build(
        CHAIN3,
        ("a", "b"),
        preds={"P": (1, 0, {("a",): 1}), "Q": (1, 0, {("b",): 2})},
    )
    phi = parse_formula("E x . P(x) \\/ Q(x)", s.lang)
    r = solve_ep(s, phi)
    assert r.value == 2 and r.disjunct == 1 and r.witness == {"x": "b"}


def test_solve_ep_matches_evaluation_randomized():
    for t in range(200):
        rng = trial_rng(67, "solve-ep", t)
        chain = gen_chain(rng, 4)
        lang = gen_language(rng, 2)
        s = gen_structure(rng, chain, lang, 3)
        phi = gen_ep_formula(rng, lang, [], 4)
        r = solve_ep(s, phi)
        assert r.value == ref_evaluate(s, phi)
        assert r.decided_top == (r.value == chain.top)


def test_deterministic_witness():
    s = build(CHAIN3, ("a", "b", "c"), preds={"P": (1, 2, {})})
    phi = parse_formula("E x y . P(x) & P(y)", s.lang)
    r1 = solve_pp(s, phi)
    r2 = solve_pp(s, phi)
    assert r1 == r2
    assert r1.witness == {"x": "a", "y": "a"}
