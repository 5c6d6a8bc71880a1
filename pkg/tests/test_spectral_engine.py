"""Page bookkeeping, page homology, and the certified constructions."""

import random

import pytest

from thhcalc import graded_hopf as gh
from thhcalc import spectral_engine as se
from thhcalc import torus_model as tm
from thhcalc.fp_linalg import ContractViolation


def _term(p, gens, filt, bound):
    spec = gh.AlgebraSpec(tuple(gens), bound, gh.TRUNCATING)
    return se.SSTerm(spec, p, filt)


# ---------------------------------------------------------------------------
# bidegrees and the derivation
# ---------------------------------------------------------------------------


def test_bidegree_weights_exponents():
    term = _term(3, [gh.divided("x", 4)], {"x": 3}, 40)
    assert term.bidegree(((0, 1),)) == (3, 1)
    assert term.bidegree(((0, 5),)) == (15, 5)
    assert term.bidegree(()) == (0, 0)


def test_missing_filtration_rejected():
    spec = gh.AlgebraSpec((gh.exterior("a", 3),), 10, gh.TRUNCATING)
    with pytest.raises(ValueError):
        se.SSTerm(spec, 3, {})


def test_bn_term_filtration_is_word_length():
    term = se.bn_ss_term(2, 3, 18)
    [gen] = term.spec.generators
    assert gen.label == "rho mu"
    assert term.bidegree(((0, 1),)) == (2, 1)


def _pterm_setup(p, d=2, bound=40):
    gens = [gh.divided("x", d), gh.exterior("y", p * d - 1)]
    term = _term(p, gens, {"x": 1, "y": 1}, bound)
    dspec = se.DifferentialSpec(p - 1, {"x": {((1, 1),): 1}})
    return term, dspec


def test_divided_rule_shifts_index_by_p():
    term, dspec = _pterm_setup(3)
    img = se.apply_differential(term, dspec, {((0, 4),): 1})
    assert img == {((0, 1), (1, 1)): 1}
    # below index p the tower is inert
    assert se.apply_differential(term, dspec, {((0, 2),): 1}) == {}
    # index exactly p lands on the partner alone
    assert se.apply_differential(term, dspec, {((0, 3),): 1}) == {((1, 1),): 1}


def test_group_like_rule_uses_exponent():
    gens = [gh.polynomial("m", 2), gh.exterior("e", 1)]
    term = _term(5, gens, {"m": 1, "e": 0}, 30)
    dspec = se.DifferentialSpec(1, {"m": {((1, 1),): 1}})
    img = se.apply_differential(term, dspec, {((0, 4),): 1})
    assert img == {((0, 3), (1, 1)): 4}


def test_apply_differential_is_a_derivation():
    term, dspec = _pterm_setup(3, bound=30)
    rng = random.Random(41)
    checked = 0
    degrees = [2, 4, 5, 6, 7, 8, 9, 10, 11]  # realizable in the tower spec

    def draw(d):
        for _ in range(10):
            e = gh.random_homogeneous(term.spec, d, 3, rng)
            if e:
                return e
        return None

    for _ in range(200):
        da = rng.choice(degrees)
        db = rng.choice(degrees)
        a = draw(da)
        b = draw(db)
        if a is None or b is None:
            continue
        ab = gh.multiply(term.spec, a, b, 3)
        lhs = se.apply_differential(term, dspec, ab)
        rhs = gh.add(
            gh.multiply(term.spec, se.apply_differential(term, dspec, a), b, 3),
            gh.scalar_mul(
                (-1) ** da,
                gh.multiply(term.spec, a, se.apply_differential(term, dspec, b), 3),
                3,
            ),
            3,
        )
        assert lhs == rhs
        checked += 1
    assert checked >= 150


def test_validate_differential_passes_height_p_rule():
    term, dspec = _pterm_setup(3, bound=30)
    report = se.validate_differential(term, dspec)
    assert report["passed"]


def test_validate_differential_catches_bad_bidegree():
    term, dspec = _pterm_setup(3, bound=30)
    wrong = se.DifferentialSpec(dspec.r + 1, dspec.values)
    report = se.validate_differential(term, wrong)
    assert report["bad_bidegrees"] == ["x"]
    assert not report["passed"]


def test_validate_differential_catches_nonzero_square():
    gens = [gh.polynomial("a", 4), gh.exterior("b", 3), gh.polynomial("c", 2)]
    # d(a) = b and d(b) = c makes d(d(a)) = c != 0
    term = _term(3, gens, {"a": 2, "b": 1, "c": 0}, 10)
    dspec = se.DifferentialSpec(1, {"a": {((1, 1),): 1}, "b": {((2, 1),): 1}})
    report = se.validate_differential(term, dspec)
    assert ((0, 1),) in report["square_failures"]
    assert not report["passed"]


# ---------------------------------------------------------------------------
# page homology
# ---------------------------------------------------------------------------


def test_page_homology_polynomial_times_exterior():
    gens = [gh.polynomial("m", 2), gh.exterior("e", 1)]
    term = _term(3, gens, {"m": 2, "e": 1}, 14)
    dspec = se.DifferentialSpec(1, {"m": {((1, 1),): 1}})
    hom = se.page_homology(term, dspec, 12)
    # survivors: 1, m^p and m^{2p}, and m^{p-1}e and m^{2p-1}e
    assert hom == {(0, 0): 1, (5, 0): 1, (6, 0): 1, (11, 0): 1, (12, 0): 1}


def test_page_homology_rejects_off_target_images():
    gens = [gh.polynomial("m", 2), gh.exterior("e", 1)]
    term = _term(3, gens, {"m": 2, "e": 1}, 14)
    wrong = se.DifferentialSpec(2, {"m": {((1, 1),): 1}})
    with pytest.raises(ContractViolation):
        se.page_homology(term, wrong, 8)


def test_collapse_dims_is_the_dimension_series():
    term = se.bn_ss_term(3, 5, 24)
    assert se.collapse_dims(term, 24) == gh.poincare_series(term.spec, 24, 5)
    assert se.collapse_dims(term, 24)[:5] == [1, 0, 0, 0, 1]


# ---------------------------------------------------------------------------
# height-p homology of twisted divided towers
# ---------------------------------------------------------------------------


def test_p_term_single_tower_p3():
    report = se.verify_p_term(3, [2], 30)
    assert report["passed"]
    # homology is concentrated where the truncated tower lives
    assert report["homology"] == {(k, k): 1 for k in range(3)}


def test_p_term_two_towers_p3():
    report = se.verify_p_term(3, [2, 2], 30)
    assert report["passed"]
    assert report["homology"][(2, 2)] == 3


def test_p_term_single_tower_p5():
    report = se.verify_p_term(5, [2], 50)
    assert report["passed"]
    assert report["homology"] == {(k, k): 1 for k in range(5)}


def test_p_term_mixed_degrees():
    report = se.verify_p_term(3, [2, 6], 26)
    assert report["passed"]


def test_p_term_rejects_odd_degree():
    with pytest.raises(ValueError):
        se.verify_p_term(3, [3], 12)


# ---------------------------------------------------------------------------
# divided-power change of basis
# ---------------------------------------------------------------------------


def test_change_basis_first_replacement_content():
    report = se.change_basis_cycles(3, 1, (2,))
    assert report["labels"] == ["z", "x0", "y1"]
    # gamma_3(z') = gamma_3(z) - 2 gamma_3(x0) = gamma_3(z) + gamma_3(x0) mod 3
    assert report["replacements"][1] == {((0, 3),): 1, ((1, 3),): 1}
    assert report["passed"]


def test_change_basis_p3_depth_two():
    for coeffs in [(1,), (2, 2), (1, 2)]:
        report = se.change_basis_cycles(3, 2, coeffs)
        assert report["passed"], coeffs
        assert report["cycle_checks"] == [(1, True), (2, True)]
        assert report["power_checks"] == [(1, True), (2, True)]
        assert report["exchange_invertible"]


def test_change_basis_p5_depth_one():
    for coeffs in [(1,), (3, 1, 4)]:
        report = se.change_basis_cycles(5, 1, coeffs)
        assert report["passed"], coeffs


def test_change_basis_depth_two_touches_deeper_tower():
    report = se.change_basis_cycles(3, 2, (1,))
    z9 = report["replacements"][2]
    # the depth-2 replacement telescopes through four terms
    assert len(z9) == 4
    assert z9[((0, 9),)] == 1
    assert z9[((1, 9),)] == 2  # (-1)^3 mod 3


def test_change_basis_rejects_bad_input():
    with pytest.raises(ValueError):
        se.change_basis_cycles(3, 1, ())
    with pytest.raises(ValueError):
        se.change_basis_cycles(3, 1, (1,), gen_degree=3)


# ---------------------------------------------------------------------------
# shortest-differential candidates
# ---------------------------------------------------------------------------


def test_b3_p5_page_has_no_legal_differential():
    term = se.bn_ss_term(3, 5, 24)
    report = se.shortest_candidates(term, 24)
    assert report["indecomposable_support"] == [(3, 1), (15, 5)]
    assert report["primitive_support"] == [(3, 1)]
    assert report["candidates"] == []
    assert report["collapsed"]


def test_b2_p3_page_collapses():
    term = se.bn_ss_term(2, 3, 18)
    report = se.shortest_candidates(term, 18)
    assert report["indecomposable_support"] == [(2, 1)]
    assert report["collapsed"]


def test_candidate_detected_when_bidegrees_align():
    gens = [gh.exterior("u", 7), gh.divided("w", 6)]
    term = _term(3, gens, {"u": 5, "w": 3}, 13)
    report = se.shortest_candidates(term, 13)
    assert {"source": (5, 2), "target": (3, 3), "r": 2} in report["candidates"]
    assert not report["collapsed"]


# ---------------------------------------------------------------------------
# the two-column page and the power-class hitting problem
# ---------------------------------------------------------------------------


def test_two_column_differential_on_odd_coaction_classes():
    torus = tm.build_torus(2, 3, 20, tm.SteenrodSpec())
    page = se.TwoColumnTerm(torus)
    mu = {v: torus.index[f"mu_{v}"] for v in (1, 2)}
    tau0 = torus.index["tau0"]
    tau1 = torus.index["tau1"]
    assert page.d2({((tau0, 1),): 1}) == {
        1: {((mu[1], 1),): 1},
        2: {((mu[2], 1),): 1},
    }
    assert page.d2({((tau1, 1),): 1}) == {
        1: {((mu[1], 3),): 1},
        2: {((mu[2], 3),): 1},
    }
    # polynomial coaction classes suspend to zero; the unit is closed
    xi1 = torus.index["xi1"]
    assert page.d2({((xi1, 1),): 1}) == {}
    assert page.d2({gh.ONE: 1}) == {}


def test_two_column_differential_is_componentwise_derivation():
    torus = tm.build_torus(2, 3, 20, tm.SteenrodSpec())
    page = se.TwoColumnTerm(torus)
    tau0 = torus.index["tau0"]
    tau1 = torus.index["tau1"]
    spec = torus.spec
    prod = gh.multiply(spec, {((tau0, 1),): 1}, {((tau1, 1),): 1}, 3)
    image = page.d2(prod)
    for v in (1, 2):
        expected = gh.add(
            gh.multiply(spec, tm.sigma(torus, v, {((tau0, 1),): 1}), {((tau1, 1),): 1}, 3),
            gh.scalar_mul(
                -1,
                gh.multiply(spec, {((tau0, 1),): 1}, tm.sigma(torus, v, {((tau1, 1),): 1}), 3),
                3,
            ),
            3,
        )
        assert image[v] == expected


def test_two_column_differential_refuses_low_coordinates():
    torus = tm.build_torus(2, 3, 20, tm.SteenrodSpec())
    page = se.TwoColumnTerm(torus)
    mu1 = torus.index["mu_1"]
    with pytest.raises(tm.UnsupportedSigma):
        page.d2({((mu1, 1),): 1})


def test_hitting_problem_obstructed_small():
    for p, n, rows, cols in [(3, 2, 8, 3), (5, 2, 12, 5)]:
        report = se.rognes_check(p, n)
        assert report["obstructed"], (p, n)
        assert report["rows"] == rows
        assert report["cols"] == cols
        assert report["rank"] == cols  # the candidate columns are independent
        assert report["rank_gap"] == 1


def test_hitting_problem_obstructed_three_coordinates():
    report = se.rognes_check(5, 3)
    assert report["obstructed"]
    assert report["rows"] == 1053
    assert report["cols"] == 556
    assert report["rank_gap"] == 1


def test_hitting_problem_control_witness():
    for p, n in [(3, 2), (5, 2), (5, 3)]:
        report = se.rognes_check(p, n, include_witness=True)
        assert not report["obstructed"], (p, n)
        assert report["witness_coefficient"] == 1
        assert report["canonical_solves"]
        assert report["witness_verified"]


def test_hitting_problem_rejects_single_coordinate():
    with pytest.raises(ValueError):
        se.rognes_check(3, 1)
