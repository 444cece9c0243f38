from __future__ import annotations

import pytest

from qsklyanin.awpoly import (
    NormalizationVanishes,
    NotInvariant,
    NotProportional,
    RepMatrix,
    aw_eigenvalue,
    aw_polynomial,
    aw_polynomial_monic,
    eigencheck,
    matrix_rep,
    proportionality_check,
    qpoch,
)
from qsklyanin.catalog import AWParams, CombCoeffs, make_ABCD, make_AW, make_contiguity, make_M
from qsklyanin.exactalg import RatF, sym
from qsklyanin.qop import SymPoly, chi, identity, one

s, z = sym("s"), sym("z")
a, b, c, d = (sym(n) for n in "abcd")
q = s**2


def test_qpoch():
    assert qpoch(a, q, 0) == RatF.const(1)
    assert qpoch(a, q, 2) == (1 - a) * (1 - a * q)


def test_p0_is_one_and_p1_closed_form():
    p = AWParams()
    assert aw_polynomial(0, p) == one()
    # p_1 = 2 lambda-free closed form: (1 - abcd) x... checked through the 4phi3 by hand:
    # a^-1 (ab,ac,ad;q)_1 [1 + (1-q^-1)(1-abcd)q (1-az)(1-a/z) / ((1-ab)(1-ac)(1-ad)(1-q))]
    p1 = aw_polynomial(1, p)
    assert p1.coeff(1) == 1 - a * b * c * d
    assert p1.degree == 1


def test_p1_leading_coefficient_in_general_base():
    p = AWParams(r=2)
    Q = q**2
    for n in range(1, 4):
        lead = aw_polynomial(n, p).coeff(n)
        assert lead == qpoch(a * b * c * d * Q ** (n - 1), Q, n)


def test_degree_checked():
    with pytest.raises(ValueError):
        aw_polynomial(-1)


def test_normalization_vanishes():
    with pytest.raises(NormalizationVanishes):
        aw_polynomial(1, AWParams(a, 1 / a, c, d))


def test_monic_variant_is_rescaled_polynomial():
    p = AWParams()
    full = aw_polynomial(2, p)
    assert aw_polynomial_monic(2, p).scale(full.coeff(2)) == full


def test_eigenvalues_base_q():
    p = AWParams()
    op = make_AW(p)
    for n in range(4):
        res = eigencheck(op, aw_polynomial(n, p))
        assert res.is_eigen
        assert res.eigenvalue == q**-n * (1 - q**n) * (1 - a * b * c * d * q ** (n - 1))
        assert res.eigenvalue == aw_eigenvalue(n, p)


def test_eigencheck_reports_residual_for_non_eigenvector():
    res = eigencheck(make_AW(AWParams()), chi(2))
    assert not res.is_eigen
    assert not res.residual.is_zero()


def test_cont1_scalar_n2():
    p = AWParams(r=2)
    mu = make_contiguity(p)["mu"]
    res = proportionality_check(mu, aw_polynomial(2, p), aw_polynomial(2, p.scaled(-1, -1, 1, 1)))
    assert res.proportional
    assert res.scalar == q**-2 * (1 - a * b * q**2)


def test_shift_lowering_n2():
    p = AWParams(r=2)
    tau = make_contiguity(p)["tau"]
    res = proportionality_check(tau, aw_polynomial(2, p), aw_polynomial(1, p.scaled(1, 1, 1, 1)), strict=True)
    assert res.scalar == q**2 * (1 - q**-4) * (1 - a * b * c * d * q**2)


def test_proportionality_strict_raises():
    with pytest.raises(NotProportional) as exc:
        proportionality_check(identity(), chi(1), chi(2), strict=True)
    assert not exc.value.residual.is_zero()


def test_factorized_eigenvalue_n2():
    p = AWParams(r=2)
    op = make_M(CombCoeffs.from_ab(p)) @ make_M(CombCoeffs.from_cd(p))
    res = eigencheck(op, aw_polynomial(2, p))
    assert res.is_eigen
    assert res.eigenvalue == q**-4 * (1 - a * b * q**4) * (1 - c * d * q**2)


def test_repmatrix_algebra():
    m = RepMatrix.from_rows([[1, 2], [0, 1]])
    assert (m @ RepMatrix.identity(2)) == m
    assert (m - m).is_zero()
    with pytest.raises(ValueError):
        RepMatrix.from_rows([[1, 2]])


def test_matrix_rep_columns_are_images():
    m = matrix_rep(make_ABCD(s**2)["C"], 3)
    # C = 2Y/(q - 1/q); Y chi_1 = q - 1/q, so C maps chi_1 to the constant 2
    assert m.entries[0][1] == RatF.const(2)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_para_truncation_gives_invariant_span(N):
    g = make_ABCD(s ** (N - 1))
    for k in "ABCD":
        assert matrix_rep(g[k], N).dim == N


def test_generic_t_leaks():
    with pytest.raises(NotInvariant) as exc:
        matrix_rep(make_ABCD()["B"], 3)
    assert exc.value.leakage and all(not v.is_zero() for v in exc.value.leakage.values())


def test_wrong_sign_truncation_leaks():
    with pytest.raises(NotInvariant):
        matrix_rep(make_ABCD(s**-2)["B"], 3)
