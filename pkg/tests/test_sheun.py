from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsklyanin.catalog import AWParams, make_AW, make_sheun_basis
from qsklyanin.exactalg import RatF, sym
from qsklyanin.qop import QOp, chi, degree_profile, op_apply
from qsklyanin.sheun import (
    BASIS_WORDS,
    NotHeunShape,
    NotReducible,
    OpWord,
    QHawParams,
    SHeunParams,
    build_qhaw,
    coords_to_qhaw,
    expand,
    extract_heun_data,
    factor_expand,
    parse_word,
    pi4_closed_form,
    r_closed_form,
    random_admissible_word,
    raising_coefficients,
    realize,
    realize_coords,
    reduce_quadratic,
    rewrite_rules,
    rr_rule,
    sheun_operator,
    solve_raising,
    verify_no_new_constraints,
)

s, z = sym("s"), sym("z")
q = s**2


def test_pi4_matches_closed_form():
    assert solve_raising().pi4() == pi4_closed_form()


def test_a2_is_mirror_of_a1():
    sol = solve_raising()
    assert sol.A2 == sol.A1.invert_var("z")


def test_raising_low_degrees():
    p = SHeunParams()
    img0 = raising_coefficients(0)
    assert img0.coeff(1) == p.a01
    assert img0.coords()[0] == p.a00
    img1 = raising_coefficients(1)
    assert img1.coeff(2) == p.a12 and img1.coeff(1) == p.a11


def test_no_new_constraints_up_to_ten():
    assert verify_no_new_constraints(10)


def test_corrupted_a1_is_rejected():
    # z^2 T+ + z^-2 T- raises degree by two
    bad = solve_raising().A1 + z**2
    assert not verify_no_new_constraints(4, A1=bad)


def test_no_new_constraints_argument_check():
    with pytest.raises(ValueError):
        verify_no_new_constraints(1)


@pytest.mark.parametrize(
    "units, name",
    [
        ({"a10": 1}, "L"),
        ({"a00": 1}, "M1"),
        ({"a11": 1}, "M2"),
        ({"a01": 1}, "R1"),
        ({"a01": s**2, "a12": 1}, "R2"),
    ],
)
def test_unit_choices_give_basis(units, name):
    assert sheun_operator(SHeunParams.unit(**units)) == make_sheun_basis()[name]


def test_a12_alone_is_r2_minus_q_r1():
    g = make_sheun_basis()
    assert sheun_operator(SHeunParams.unit(a12=1)) == g["R2"] - g["R1"].scale(q)


def test_basis_is_linearly_independent():
    # images of 1 and chi_1 determine the five coefficients
    g = make_sheun_basis()
    rows = []
    for name in ("L", "M1", "M2", "R1", "R2"):
        a = op_apply(g[name], RatF.const(1))
        b = op_apply(g[name], z + 1 / z)
        rows.append((a, b))
    assert len({(r[0].to_text(), r[1].to_text()) for r in rows}) == 5


@pytest.mark.parametrize("name, shift", [("L", -1), ("M1", 0), ("M2", 0), ("R1", 1), ("R2", 1)])
def test_degree_profile(name, shift):
    for n, deg, _ in degree_profile(make_sheun_basis()[name], 8):
        assert deg <= n + shift
        if n >= 2:
            assert deg == n + shift


def test_heun_data_matches_closed_forms():
    p = QHawParams()
    data = extract_heun_data(build_qhaw(p))
    assert data.r == r_closed_form(p)
    assert data.p1_x == p.beta2
    assert data.p1_const == p.alpha3


def test_alpha3_only():
    data = extract_heun_data(build_qhaw(QHawParams.only(alpha3=1)))
    r = data.r
    assert r[1] == q**4 and r[3] == q**4 + q**2 and r[5] == q**2
    assert all(r[k].is_zero() for k in (0, 2, 4, 6))
    assert data.p1_const == RatF.const(1) and data.p1_x.is_zero()


def test_beta_zero_stabilizes_degree():
    p = QHawParams(beta1=0, beta2=0, beta3=0)
    for n, deg, _ in degree_profile(build_qhaw(p), 8):
        assert deg <= n


def test_aw_operator_base_q2_has_constant_p1():
    data = extract_heun_data(make_AW(AWParams(r=2)))
    assert data.p1_x.is_zero()


def test_not_heun_shape():
    with pytest.raises(NotHeunShape):
        extract_heun_data(make_sheun_basis()["L"])


@pytest.mark.parametrize("lhs", sorted(rewrite_rules(), key=str))
def test_rewrite_rules_hold_in_realization(lhs):
    assert realize({lhs: RatF.const(1)}) == realize(rewrite_rules()[lhs])


def test_rr_rule_holds_in_realization():
    lhs, rhs = rr_rule()
    assert realize(lhs) == realize(rhs)


def test_r1_squared_is_not_reducible():
    with pytest.raises(NotReducible):
        reduce_quadratic(parse_word("(* R1 R1)"))


def test_cubic_word_is_not_reducible():
    with pytest.raises(NotReducible):
        reduce_quadratic(parse_word("(* L M1 M2)"))


def test_parse_word_roundtrip_and_errors():
    w = parse_word('(+ (* "2/1" L M1) R2 "1/1*s^2")')
    assert parse_word(w.to_sexpr()) == w
    assert expand(w)[("L", "M1")] == RatF.const(2)
    for bad in ["(* L", "(% L M1)", "", "(* L M1) R1", ")", "()"]:
        with pytest.raises(ValueError):
            parse_word(bad)
    with pytest.raises(ValueError):
        OpWord.scalar(z)


def test_constant_fold_matches_relation():
    # 1 = M1^2 + M2^2 + (q + 1/q) M1 M2 + (q + 1/q)(q - 1/q)^2 L^2 in the realization
    coords = {b: RatF.const(0) for b in BASIS_WORDS}
    coords[()] = RatF.const(1)
    p = coords_to_qhaw(coords)
    assert build_qhaw(p) == QOp({0: RatF.const(1)})


def test_random_words_reduce_soundly():
    rng = random.Random(7)
    for _ in range(100):
        w = random_admissible_word(rng)
        assert realize_coords(reduce_quadratic(w)) == realize(w)


def _rand_scalars(rng, n):
    return [RatF(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]


def test_factor_expand_instances_raise_by_at_most_one():
    rng = random.Random(11)
    for _ in range(50):
        res = factor_expand(_rand_scalars(rng, 3), _rand_scalars(rng, 5), _rand_scalars(rng, 1)[0])
        assert build_qhaw(res.params) == res.Q
        for n, deg, _ in degree_profile(res.Q, 4):
            assert deg <= n + 1


def test_factor_expand_argument_check():
    with pytest.raises(ValueError):
        factor_expand([1, 2], [1, 2, 3, 4, 5], 0)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_sheun_operators_raise_by_at_most_one(cs):
    p = SHeunParams(*cs)
    S = sheun_operator(p)
    for n, deg, _ in degree_profile(S, 4):
        assert deg <= n + 1
