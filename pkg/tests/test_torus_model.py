"""Tests for the torus algebra, suspension, projections and degree sets."""

from __future__ import annotations

import random

import pytest

from thhcalc import admissible_words as aw
from thhcalc import graded_hopf as gh
from thhcalc import torus_model as tm


def mono(t: tm.TorusAlgebra, *pairs) -> gh.Element:
    mon = tuple(sorted((t.index[label], e) for label, e in pairs))
    return {mon: 1}


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def test_build_torus_generator_labels():
    t = tm.build_torus(2, 3, 12)
    assert list(t.index) == ["mu_1", "mu_2", "rho_2 mu_1"]
    kinds = [g.kind for g in t.spec.generators]
    assert kinds == [gh.POLYNOMIAL, gh.POLYNOMIAL, gh.EXTERIOR]


def test_build_torus_three_coordinates():
    t = tm.build_torus(3, 3, 12)
    assert list(t.index) == [
        "mu_1",
        "mu_2",
        "mu_3",
        "rho_2 mu_1",
        "rho_3 mu_1",
        "rho_3 mu_2",
        "rho0_3 rho_2 mu_1",
    ]
    top = t.spec.generators[t.index["rho0_3 rho_2 mu_1"]]
    assert top.kind == gh.DIVIDED and top.degree == 4


def test_build_torus_with_coaction_block():
    t = tm.build_torus(1, 5, 30, tm.SteenrodSpec())
    labels = set(t.index)
    assert {"mu_1", "xi1", "tau0", "tau1"} <= labels
    assert "xi2" not in labels  # degree 48 > 30
    assert t.spec.generators[t.index["xi1"]].degree == 8
    assert t.spec.generators[t.index["tau1"]].degree == 9


def test_omit_tau_variant():
    spec = tm.SteenrodSpec(tm.OMIT_TAU, omitted=1)
    t = tm.build_torus(1, 3, 20, spec)
    assert "tau0" in t.index and "tau1" not in t.index and "tau2" in t.index
    assert spec.omitted_class_degree(3) == 4
    with pytest.raises(ValueError):
        tm.SteenrodSpec(tm.OMIT_TAU)
    with pytest.raises(ValueError):
        tm.SteenrodSpec(tm.FULL, omitted=2)


# ---------------------------------------------------------------------------
# suspension images
# ---------------------------------------------------------------------------


def test_sigma_on_coordinate_class():
    t = tm.build_torus(2, 3, 12)
    out = tm.sigma(t, 2, mono(t, ("mu_1", 1)))
    assert out == mono(t, ("rho_2 mu_1", 1))


def test_sigma_on_power_uses_group_like_rule():
    t = tm.build_torus(2, 3, 12)
    out = tm.sigma(t, 2, mono(t, ("mu_1", 4)))
    # 4 mu^3 sigma(mu)
    expected = gh.scalar_mul(4, mono(t, ("mu_1", 3), ("rho_2 mu_1", 1)), 3)
    assert out == expected
    assert tm.sigma(t, 2, mono(t, ("mu_1", 3))) == {}


def test_sigma_on_odd_word_gives_divided_generator():
    t = tm.build_torus(3, 3, 12)
    out = tm.sigma(t, 3, mono(t, ("rho_2 mu_1", 1)))
    assert out == mono(t, ("rho0_3 rho_2 mu_1", 1))


def test_sigma_on_divided_power_shifts_index():
    t = tm.build_torus(3, 3, 40, mode=gh.TRUNCATING)
    big = tm.build_torus(4, 3, 40)
    z = "rho0_3 rho_2 mu_1"
    out = tm.sigma(big, 4, {((big.index[z], 3),): 1})
    expected_label = "rho_4 rho0_3 rho_2 mu_1"
    assert out == {
        tuple(sorted(((big.index[z], 2), (big.index[expected_label], 1)))): 1
    }


def test_sigma_on_tau_and_xi():
    t = tm.build_torus(2, 3, 20, tm.SteenrodSpec())
    assert tm.sigma(t, 1, mono(t, ("xi1", 1))) == {}
    assert tm.sigma(t, 1, mono(t, ("tau0", 1))) == mono(t, ("mu_1", 1))
    assert tm.sigma(t, 2, mono(t, ("tau1", 1))) == mono(t, ("mu_2", 3))
    # tau2 would land at degree 18 as mu^9: present iff bound allows
    assert tm.sigma(t, 2, mono(t, ("tau2", 1))) == mono(t, ("mu_2", 9))


def test_sigma_truncates_or_raises_beyond_bound():
    t = tm.build_torus(2, 3, 12, tm.SteenrodSpec())
    # tau2 has degree 17 > 12 so it is not even a generator here
    assert "tau2" not in t.index
    # suspending tau1 lands at degree 6 <= 12: fine
    assert tm.sigma(t, 2, mono(t, ("tau1", 1))) == mono(t, ("mu_2", 3))
    strict = tm.build_torus(2, 3, 5, tm.SteenrodSpec(), mode=gh.STRICT)
    with pytest.raises(gh.DegreeOverflow):
        tm.sigma(strict, 2, mono(strict, ("tau1", 1)))
    lax = tm.build_torus(2, 3, 5, tm.SteenrodSpec())
    assert tm.sigma(lax, 2, mono(lax, ("tau1", 1))) == {}


def test_sigma_rejects_stale_coordinates():
    t = tm.build_torus(2, 3, 12)
    with pytest.raises(tm.UnsupportedSigma):
        tm.sigma(t, 1, mono(t, ("mu_1", 1)))
    with pytest.raises(tm.UnsupportedSigma):
        tm.sigma(t, 2, mono(t, ("rho_2 mu_1", 1)))
    with pytest.raises(tm.UnsupportedSigma):
        tm.sigma(t, 3, mono(t, ("mu_1", 1)))


def _random_label_bounded(t: tm.TorusAlgebra, degree: int, v: int, rng) -> gh.Element:
    """Random homogeneous element whose word labels stay below v."""
    pool = []
    for mon in gh.basis(t.spec, degree, t.p):
        ok = True
        for gi, _ in mon:
            tag = t.info[gi]
            if tag[0] == tm.WORD and max(tag[1]) >= v:
                ok = False
                break
        if ok:
            pool.append(mon)
    out: gh.Element = {}
    for _ in range(min(3, len(pool))):
        mon = rng.choice(pool)
        c = rng.randrange(1, t.p)
        v2 = (out.get(mon, 0) + c) % t.p
        if v2:
            out[mon] = v2
        elif mon in out:
            del out[mon]
    return out


def test_sigma_is_a_derivation_randomized():
    rng = random.Random(97)
    t = tm.build_torus(3, 3, 24, tm.SteenrodSpec())
    v = 3
    for _ in range(300):
        d1 = rng.randrange(1, 10)
        d2 = rng.randrange(1, 10)
        a = _random_label_bounded(t, d1, v, rng)
        b = _random_label_bounded(t, d2, v, rng)
        if not a or not b:
            continue
        lhs = tm.sigma(t, v, gh.multiply(t.spec, a, b, t.p))
        rhs = gh.add(
            gh.multiply(t.spec, tm.sigma(t, v, a), b, t.p),
            gh.scalar_mul(
                (-1) ** d1, gh.multiply(t.spec, a, tm.sigma(t, v, b), t.p), t.p
            ),
            t.p,
        )
        assert lhs == rhs


def test_sigma_image_lies_in_augmentation_ideal():
    t = tm.build_torus(3, 5, 22)
    for gi, tag in enumerate(t.info):
        if tag[0] != tm.WORD or max(tag[1]) >= 3:
            continue
        image = tm.sigma(t, 3, {((gi, 1),): 1})
        assert tm.in_p_ideal(t, image), t.spec.generators[gi].label


# ---------------------------------------------------------------------------
# projections
# ---------------------------------------------------------------------------


def test_project_subtorus():
    t = tm.build_torus(2, 3, 12)
    elem = gh.add(
        mono(t, ("mu_1", 2)),
        gh.scalar_mul(2, mono(t, ("rho_2 mu_1", 1), ("mu_2", 1)), 3),
        3,
    )
    kept = tm.project_subtorus(t, elem, {1})
    assert kept == mono(t, ("mu_1", 2))
    assert tm.project_subtorus(t, elem, {1, 2}) == elem


def test_project_top_cell():
    t = tm.build_torus(2, 3, 12)
    elem = gh.add(
        mono(t, ("rho_2 mu_1", 1)),
        gh.scalar_mul(2, mono(t, ("rho_2 mu_1", 1), ("mu_1", 1)), 3),
        3,
    )
    kept = tm.project_top_cell(t, elem)
    assert kept == mono(t, ("rho_2 mu_1", 1))


def test_project_top_cell_after_sigma():
    # suspending a word hits the top cell exactly when its labels filled
    # all but the last coordinate
    t = tm.build_torus(3, 3, 24)
    for gi, tag in enumerate(t.info):
        if tag[0] != tm.WORD or max(tag[1]) >= 3:
            continue
        image = tm.sigma(t, 3, {((gi, 1),): 1})
        surviving = tm.project_top_cell(t, image)
        if tag[1] == (1, 2):
            assert surviving == image and image
        else:
            assert surviving == {}


def test_in_p_ideal():
    t = tm.build_torus(2, 3, 12, tm.SteenrodSpec())
    assert not tm.in_p_ideal(t, mono(t, ("mu_1", 3)))
    assert not tm.in_p_ideal(t, {gh.ONE: 1})
    assert tm.in_p_ideal(t, mono(t, ("rho_2 mu_1", 1)))
    assert tm.in_p_ideal(t, mono(t, ("tau0", 1)))
    assert tm.in_p_ideal(t, mono(t, ("mu_1", 2), ("xi1", 1)))
    mixed = gh.add(mono(t, ("mu_1", 1)), mono(t, ("rho_2 mu_1", 1)), 3)
    assert not tm.in_p_ideal(t, mixed)


# ---------------------------------------------------------------------------
# partition degree sets
# ---------------------------------------------------------------------------


def test_n_delta_degrees_two_singletons():
    degrees = tm.n_delta_degrees(2, [(1,), (2,)], 18, 3)
    assert degrees == {4: False, 8: False, 12: False}


def test_n_delta_degrees_with_pairs():
    delta = [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]
    degrees = tm.n_delta_degrees(3, delta, 18, 3)
    assert degrees == {
        5: True,
        6: False,
        9: True,
        10: False,
        14: False,
        18: False,
    }


def test_n_delta_degrees_validates_family():
    with pytest.raises(ValueError):
        tm.n_delta_degrees(3, [(1, 2), (3,)], 18, 3)  # missing singletons
    with pytest.raises(ValueError):
        tm.n_delta_degrees(2, [(1,), (2,), (5,)], 18, 3)


def test_multifold_primitive_degree_check_sweep():
    for p, ns in ((3, (2, 3)), (5, (2, 3, 4, 5))):
        for n in ns:
            report = tm.multifold_primitive_degree_check(n, p, 2 * p**2)
            assert report["passed"], report["violations"]


def test_multifold_primitive_degree_check_guards():
    with pytest.raises(ValueError):
        tm.multifold_primitive_degree_check(1, 3, 18)
    with pytest.raises(ValueError):
        tm.multifold_primitive_degree_check(4, 3, 18)


# ---------------------------------------------------------------------------
# dimension series
# ---------------------------------------------------------------------------


def test_torus_poincare_factorizations():
    for p in (3, 5):
        for n in (1, 2, 3):
            report = tm.torus_poincare_report(n, p, 4 * p)
            assert report["passed"], (n, p)


def test_torus_series_small_by_hand():
    # n = 2, p = 3, degrees 0..4: 1; 0; mu_1, mu_2; rho_2 mu_1; mu^2s
    report = tm.torus_poincare_report(2, 3, 4)
    assert report["series"][:5] == [1, 0, 2, 1, 3]
