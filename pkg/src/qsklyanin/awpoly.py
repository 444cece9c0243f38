"""Askey-Wilson polynomials and their operator checks.

Polynomials are built from the terminating 4phi3 sum literally (n + 1
terms, exact) and returned in the chi basis.  Matrix representations use
the basis ``{1, chi_1, ..., chi_{N-1}}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .catalog import AWParams
from .exactalg import RatF, sym
from .qop import QOp, SymPoly, apply_sym, chi, chi_expand, one

__all__ = [
    "EigenResult",
    "NormalizationVanishes",
    "NotInvariant",
    "NotProportional",
    "ProportionalityResult",
    "RepMatrix",
    "aw_polynomial",
    "aw_polynomial_monic",
    "eigencheck",
    "matrix_rep",
    "proportionality_check",
    "qpoch",
]


class NormalizationVanishes(ArithmeticError):
    pass


class NotProportional(ValueError):
    def __init__(self, message: str, residual: SymPoly | None = None):
        super().__init__(message)
        self.residual = residual


class NotInvariant(ValueError):
    def __init__(self, message: str, leakage: dict[int, RatF]):
        super().__init__(message)
        self.leakage = leakage


def qpoch(x: RatF, base: RatF, n: int) -> RatF:
    """(x; base)_n = prod_{j<n} (1 - x base^j)."""
    out = RatF.const(1)
    term = x
    for _ in range(n):
        out = out * (1 - term)
        term = term * base
    return out


def _base(p: AWParams) -> RatF:
    return sym("s") ** (2 * p.r)


def _phi_sum(n: int, p: AWParams) -> RatF:
    """The 4phi3 sum as a Laurent polynomial in z."""
    Q = _base(p)
    a, b, c, d = p.a, p.b, p.c, p.d
    z = sym("z")
    top = [Q ** (-n), a * b * c * d * Q ** (n - 1)]
    bottom = [a * b, a * c, a * d, Q]
    total = RatF.const(0)
    coef = RatF.const(1)
    zpart = RatF.const(1)
    for k in range(n + 1):
        if k:
            num = RatF.const(1)
            for x in top:
                num = num * (1 - x * Q ** (k - 1))
            den = RatF.const(1)
            for x in bottom:
                den = den * (1 - x * Q ** (k - 1))
            if den.is_zero():
                raise NormalizationVanishes(f"lower parameter Pochhammer vanishes at k={k}")
            coef = coef * num * Q / den
            aq = a * Q ** (k - 1)
            zpart = zpart * (1 - aq * z) * (1 - aq / z)
        if coef.is_zero():
            break
        total = total + coef * zpart
    return total


def aw_polynomial(n: int, p: AWParams | None = None) -> SymPoly:
    """p_n(x; a, b, c, d | q^r) in the chi basis."""
    p = p or AWParams()
    if n < 0:
        raise ValueError("degree must be non-negative")
    if p.a.is_zero():
        raise NormalizationVanishes("a = 0")
    Q = _base(p)
    pre = qpoch(p.a * p.b, Q, n) * qpoch(p.a * p.c, Q, n) * qpoch(p.a * p.d, Q, n)
    if pre.is_zero():
        raise NormalizationVanishes("(ab, ac, ad; q)_n vanishes")
    poly = chi_expand(_phi_sum(n, p) * pre / p.a**n)
    if poly.degree != n:
        raise NormalizationVanishes(f"degree dropped to {poly.degree}")
    return poly


def aw_polynomial_monic(n: int, p: AWParams | None = None) -> SymPoly:
    """p_n scaled so its chi_n coefficient is 1; usable when the usual prefactor degenerates."""
    p = p or AWParams()
    poly = chi_expand(_phi_sum(n, p))
    lead = poly.coeff(n)
    if lead.is_zero():
        raise NormalizationVanishes("leading chi coefficient vanishes")
    return poly.scale(1 / lead)


def aw_eigenvalue(n: int, p: AWParams | None = None) -> RatF:
    """lambda_n = Q^-n (1 - Q^n)(1 - abcd Q^(n-1)) with Q = q^r."""
    p = p or AWParams()
    Q = _base(p)
    return Q ** (-n) * (1 - Q**n) * (1 - p.e4 * Q ** (n - 1))


@dataclass(frozen=True)
class EigenResult:
    is_eigen: bool
    eigenvalue: RatF
    residual: SymPoly


@dataclass(frozen=True)
class ProportionalityResult:
    proportional: bool
    scalar: RatF
    residual: SymPoly


def eigencheck(op: QOp, f: SymPoly) -> EigenResult:
    if f.is_zero():
        raise ValueError("f must be nonzero")
    g = apply_sym(op, f)
    n = f.degree
    lam = g.coeff(n) / f.coeff(n)
    residual = g - f.scale(lam)
    return EigenResult(residual.is_zero(), lam, residual)


def proportionality_check(op: QOp, f: SymPoly, g: SymPoly, *, strict: bool = False) -> ProportionalityResult:
    """Find sigma with op f = sigma g.  With ``strict`` a failure raises NotProportional."""
    if g.is_zero():
        raise ValueError("g must be nonzero")
    h = apply_sym(op, f)
    n = g.degree
    sigma = h.coeff(n) / g.coeff(n)
    residual = h - g.scale(sigma)
    if strict and not residual.is_zero():
        raise NotProportional("image is not proportional to the target", residual)
    return ProportionalityResult(residual.is_zero(), sigma, residual)


# ---------------------------------------------------------------------------
# matrix representations


@dataclass(frozen=True)
class RepMatrix:
    """Matrix of an operator on span{1, chi_1, ..., chi_{dim-1}} (columns are images)."""

    dim: int
    entries: tuple[tuple[RatF, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RepMatrix":
        dim = len(rows)
        ents = tuple(tuple(v if isinstance(v, RatF) else RatF.const(v) for v in row) for row in rows)
        if any(len(r) != dim for r in ents):
            raise ValueError("matrix must be square")
        return cls(dim, ents)

    @classmethod
    def identity(cls, dim: int) -> "RepMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        n = self._check(other)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = RatF.const(0)
                for k in range(n):
                    x, y = self.entries[i][k], other.entries[k][j]
                    if not x.is_zero() and not y.is_zero():
                        acc = acc + x * y
                row.append(acc)
            rows.append(row)
        return RepMatrix.from_rows(rows)

    __mul__ = __matmul__

    def __add__(self, other: "RepMatrix") -> "RepMatrix":
        n = self._check(other)
        return RepMatrix.from_rows(
            [[self.entries[i][j] + other.entries[i][j] for j in range(n)] for i in range(n)]
        )

    def __neg__(self) -> "RepMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RepMatrix") -> "RepMatrix":
        return self + (-other)

    def scale(self, c) -> "RepMatrix":
        c = c if isinstance(c, RatF) else RatF.const(c)
        return RepMatrix.from_rows([[c * v for v in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.entries for v in row)

    def _check(self, other: "RepMatrix") -> int:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return self.dim

    def to_text(self) -> str:
        return "\n".join("[" + ", ".join(v.to_text() for v in row) + "]" for row in self.entries)


def basis_vector(j: int) -> SymPoly:
    return one() if j == 0 else chi(j)


def matrix_rep(op: QOp, N: int) -> RepMatrix:
    if N < 1:
        raise ValueError("dimension must be positive")
    cols = []
    for j in range(N):
        coords = apply_sym(op, basis_vector(j)).coords()
        leak = {k: v for k, v in coords.items() if k >= N}
        if leak:
            raise NotInvariant(f"image of basis vector {j} leaves the span", leak)
        cols.append([coords.get(k, RatF.const(0)) for k in range(N)])
    return RepMatrix.from_rows([[cols[j][i] for j in range(N)] for i in range(N)])
