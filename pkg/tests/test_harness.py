from itertools import product

import pytest

from mvmt import (
    GenConfig,
    HarnessError,
    Language,
    check_ep_preservation,
    check_hom_preservation,
    check_pp_theory_closure,
    check_product_preservation,
    enumerate_tnorm_tables,
    evaluate,
    find_below_top_counterexample,
    identity_mapping,
    infer_formula,
    make_custom,
    parse_formula,
    random_custom_chain,
    structure_from_dict,
)
from mvmt.harness import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    gen_chain,
    gen_ep_formula,
    gen_language,
    gen_pp_formula,
    gen_structure,
    trial_rng,
)
from mvmt.syntax import classify


def test_gen_config_bounds():
    with pytest.raises(HarnessError):
        GenConfig(trials=0)
    with pytest.raises(HarnessError):
        GenConfig(max_domain=0)


def test_generators_respect_bounds_and_fragments():
    for t in range(150):
        rng = trial_rng(3, "bounds", t)
        chain = gen_chain(rng, 4)
        assert 2 <= chain.size <= 4
        lang = gen_language(rng, 2)
        assert all(0 <= ar <= 2 for ar in lang.predicates.values())
        s = gen_structure(rng, chain, lang, 3)
        assert 1 <= len(s.domain) <= 3
        assert all(t.default <= chain.top for t in s.predicates.values())
        pp = gen_pp_formula(rng, lang, ["u"], 4)
        assert "pp" in classify(pp)
        ep = gen_ep_formula(rng, lang, ["u"], 4)
        assert "existential_positive" in classify(ep)


def test_reports_are_deterministic():
    cfg = GenConfig(seed=11, trials=120)
    assert check_hom_preservation(cfg).to_dict() == check_hom_preservation(cfg).to_dict()
    cfgp = GenConfig(seed=11, trials=60, max_domain=2)
    assert check_product_preservation(cfgp).to_dict() == check_product_preservation(cfgp).to_dict()


def test_trial_accounting():
    report = check_hom_preservation(GenConfig(seed=2, trials=150))
    assert report.trials == 150
    assert report.effective + report.skipped == report.trials
    assert report.verdict in (PASS, INCONCLUSIVE)
    assert report.violations == []


def test_suites_pass_at_desk_bounds():
    assert check_hom_preservation(GenConfig(seed=5, trials=250)).verdict == PASS
    assert check_ep_preservation(GenConfig(seed=5, trials=250)).verdict == PASS
    assert (
        check_product_preservation(GenConfig(seed=5, trials=120, max_domain=2)).verdict == PASS
    )


def test_mutated_suites_find_counterexamples():
    mutated = GenConfig(seed=7, trials=1000, allow_implication=True)
    assert check_hom_preservation(mutated).verdict == FAIL
    assert check_ep_preservation(mutated).verdict == FAIL


def test_violations_are_replayable():
    mutated = GenConfig(seed=7, trials=1000, allow_implication=True)
    report = check_hom_preservation(mutated)
    assert report.violations
    v = report.violations[0]
    m = structure_from_dict(v["m"])
    n = structure_from_dict(v["n"])
    phi = parse_formula(v["formula"], m.lang)
    assert evaluate(m, phi, v["assignment"]) == m.chain.top
    mapped = {var: v["mapping"][e] for var, e in v["assignment"].items()}
    assert evaluate(n, phi, mapped) == v["target_value"] != n.chain.top


def test_below_top_counterexample_exists():
    record = find_below_top_counterexample(GenConfig(seed=3, trials=500))
    assert record is not None
    m = structure_from_dict(record["m"])
    n = structure_from_dict(record["n"])
    phi = parse_formula(record["formula"], m.lang)
    source = evaluate(m, phi, record["assignment"])
    mapped = {var: record["mapping"][e] for var, e in record["assignment"].items()}
    target = evaluate(n, phi, mapped)
    assert 0 < source < m.chain.top
    assert target < source


def test_identity_homomorphisms_trivially_preserve():
    for t in range(80):
        rng = trial_rng(31, "identity", t)
        chain = gen_chain(rng, 4)
        lang = gen_language(rng, 2)
        m = gen_structure(rng, chain, lang, 3)
        phi = gen_pp_formula(rng, lang, ["u"], 4)
        g = identity_mapping(m)
        for e in m.domain:
            if evaluate(m, phi, {"u": e}) == chain.top:
                assert evaluate(m, phi, {"u": g[e]}) == chain.top


def test_closure_suite():
    lang = Language(predicates={"P": 1})
    axioms = [parse_formula("E x . P(x)", lang)]
    report = check_pp_theory_closure(GenConfig(seed=13, trials=200), axioms, lang)
    assert report.verdict == PASS
    assert report.violations == []


def test_closure_rejects_non_pp_axioms():
    lang = Language(predicates={"P": 1})
    from mvmt import FragmentError

    with pytest.raises(FragmentError):
        check_pp_theory_closure(
            GenConfig(seed=1, trials=5), [parse_formula("A x . P(x)", lang)], lang
        )
    with pytest.raises(FragmentError):
        check_pp_theory_closure(
            GenConfig(seed=1, trials=5), [parse_formula("P(x)", lang)], lang
        )


def test_closure_empty_axioms_vacuous_pass():
    lang = Language(predicates={"P": 1})
    report = check_pp_theory_closure(GenConfig(seed=13, trials=60), [], lang)
    assert report.verdict == PASS
    assert report.violations == []


def test_inconclusive_when_premises_never_fire():
    # nothing models the bottom constant, so no closure assertion ever runs
    phi, lang = infer_formula("0")
    report = check_pp_theory_closure(GenConfig(seed=13, trials=60), [phi], lang)
    assert report.verdict == INCONCLUSIVE
    assert report.effective == 0


def brute_force_tables(n):
    # the unit law pins the top row and column; try everything else
    cells = [(i, j) for i in range(n - 1) for j in range(i, n - 1)]
    out = set()
    for values in product(range(n), repeat=len(cells)):
        table = [[0] * n for _ in range(n)]
        for j in range(n):
            table[n - 1][j] = j
            table[j][n - 1] = j
        for (i, j), v in zip(cells, values):
            table[i][j] = v
            table[j][i] = v
        try:
            make_custom(n, table)
        except ValueError:
            continue
        out.add(tuple(tuple(row) for row in table))
    return out


@pytest.mark.parametrize("n", [2, 3, 4])
def test_enumeration_matches_brute_force(n):
    assert set(enumerate_tnorm_tables(n)) == brute_force_tables(n)


def test_enumeration_counts_frozen():
    # regression freeze; 2..4 are independently cross-checked above
    assert [len(enumerate_tnorm_tables(n)) for n in (2, 3, 4, 5, 6)] == [1, 2, 6, 22, 94]


def test_random_custom_chain_valid():
    for t in range(20):
        rng = trial_rng(47, "chains", t)
        n = rng.randint(2, 6)
        chain = random_custom_chain(rng, n)
        assert make_custom(n, chain.tnorm) == chain
