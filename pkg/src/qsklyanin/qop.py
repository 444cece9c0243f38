"""q-difference operators in normal form ``sum_k c_k(z) T^k``.

``T`` is the shift ``f(z) -> f(q z)`` with ``q = s**2``.  Operators are
stored coefficient-first, so composition pushes shifts through the right
factor's coefficients: ``(f T^j)(g T^k) = f * g(q^j z) * T^(j+k)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .exactalg import RatF, parse_ratf, sym

__all__ = [
    "NotLaurent",
    "NotSymmetric",
    "QOp",
    "SymPoly",
    "chi",
    "chi_expand",
    "commutator",
    "degree_profile",
    "op_apply",
    "op_compose",
    "op_equal",
    "op_from_terms",
    "q_commutator",
]

Z = "z"
S = "s"


class NotLaurent(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


def _shift(f: RatF, k: int) -> RatF:
    # z -> q^k z with q = s^2
    return f.scale_var(Z, S, 2 * k)


class QOp:
    """Immutable operator ``sum_k terms[k] * T^k``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, RatF] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            if not isinstance(c, RatF):
                c = RatF.const(c)
            if not c.is_zero():
                clean[int(k)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @property
    def terms(self) -> dict[int, RatF]:
        return dict(self._terms)

    def coeff(self, k: int) -> RatF:
        return self._terms.get(k, RatF.const(0))

    def shifts(self) -> list[int]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- algebra ----------------------------------------------------------

    def __add__(self, other) -> "QOp":
        other = _as_op(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return QOp(out)

    __radd__ = __add__

    def __neg__(self) -> "QOp":
        return QOp({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "QOp":
        return self + (-_as_op(other))

    def __rsub__(self, other) -> "QOp":
        return _as_op(other) - self

    def __mul__(self, other) -> "QOp":
        if isinstance(other, QOp):
            return op_compose(self, other)
        if isinstance(other, (RatF, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "QOp":
        if isinstance(other, (RatF, int)):
            return self.scale(other)
        return NotImplemented

    def __matmul__(self, other: "QOp") -> "QOp":
        return op_compose(self, other)

    def __pow__(self, n: int) -> "QOp":
        out = identity()
        for _ in range(n):
            out = op_compose(out, self)
        return out

    def scale(self, c) -> "QOp":
        """Left multiplication by the function ``c``."""
        c = c if isinstance(c, RatF) else RatF.const(c)
        return QOp({k: c * v for k, v in self._terms.items()})

    def __call__(self, f: RatF) -> RatF:
        return op_apply(self, f)

    def __eq__(self, other) -> bool:
        return isinstance(other, QOp) and op_equal(self, other)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.to_json())
        return self._hash

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"shift": k, "num": c.num.to_text(), "den": c.den.to_text()}
                for k, c in self._terms.items()
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "QOp":
        terms = {}
        for t in data["terms"]:
            c = parse_ratf(t["num"]) / parse_ratf(t["den"])
            k = int(t["shift"])
            terms[k] = terms[k] + c if k in terms else c
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> "QOp":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {c}" for k, c in self._terms.items())
        return f"QOp({{{inner}}})"


def _as_op(x) -> QOp:
    if isinstance(x, QOp):
        return x
    if isinstance(x, (RatF, int)):
        return QOp({0: x})
    raise TypeError(f"cannot treat {type(x).__name__} as an operator")


def identity() -> QOp:
    return QOp({0: RatF.const(1)})


def mult(f: RatF) -> QOp:
    """Multiplication by a function of z."""
    return QOp({0: f})


def op_from_terms(terms: Iterable[tuple[int, RatF]]) -> QOp:
    acc: dict[int, RatF] = {}
    for k, c in terms:
        c = c if isinstance(c, RatF) else RatF.const(c)
        acc[k] = acc[k] + c if k in acc else c
    return QOp(acc)


def op_compose(A: QOp, B: QOp) -> QOp:
    acc: dict[int, RatF] = {}
    for j, f in A._terms.items():
        for k, g in B._terms.items():
            term = f * _shift(g, j)
            acc[j + k] = acc[j + k] + term if j + k in acc else term
    return QOp(acc)


def op_apply(A: QOp, f: RatF) -> RatF:
    out = RatF.const(0)
    for k, c in A._terms.items():
        out = out + c * _shift(f, k)
    return out


def commutator(A: QOp, B: QOp) -> QOp:
    return op_compose(A, B) - op_compose(B, A)


def q_commutator(A: QOp, B: QOp) -> QOp:
    """``q^(1/2) AB - q^(-1/2) BA`` with ``q^(1/2) = s``."""
    s = sym(S)
    return op_compose(A, B).scale(s) - op_compose(B, A).scale(1 / s)


def op_equal(A: QOp, B: QOp) -> bool:
    # the T^k are independent over the coefficient field
    return A._terms.keys() == B._terms.keys() and all(
        A._terms[k] == B._terms[k] for k in A._terms
    )


# ---------------------------------------------------------------------------
# symmetric Laurent polynomials


@dataclass(frozen=True)
class SymPoly:
    """Symmetric Laurent polynomial ``sum_n c_n chi_n`` with ``chi_0 = 2``.

    ``coords()`` gives the coordinates on ``{1, chi_1, chi_2, ...}``,
    where the constant coordinate is ``2 * c_0``.
    """

    chi_coeffs: tuple[tuple[int, RatF], ...]

    @classmethod
    def from_map(cls, coeffs: Mapping[int, RatF]) -> "SymPoly":
        items = []
        for n, c in sorted(coeffs.items()):
            c = c if isinstance(c, RatF) else RatF.const(c)
            if n < 0:
                raise ValueError("chi degrees are non-negative")
            if not c.is_zero():
                items.append((n, c))
        return cls(tuple(items))

    @classmethod
    def from_coords(cls, coords: Mapping[int, RatF]) -> "SymPoly":
        m = dict(coords)
        if 0 in m:
            m[0] = (m[0] if isinstance(m[0], RatF) else RatF.const(m[0])) / 2
        return cls.from_map(m)

    def as_map(self) -> dict[int, RatF]:
        return dict(self.chi_coeffs)

    def coords(self) -> dict[int, RatF]:
        m = self.as_map()
        if 0 in m:
            m[0] = m[0] * 2
        return m

    def coeff(self, n: int) -> RatF:
        return self.as_map().get(n, RatF.const(0))

    def is_zero(self) -> bool:
        return not self.chi_coeffs

    @property
    def degree(self) -> int:
        if not self.chi_coeffs:
            return -1
        return self.chi_coeffs[-1][0]

    def to_laurent(self) -> RatF:
        z = sym(Z)
        out = RatF.const(0)
        for n, c in self.chi_coeffs:
            out = out + c * (2 if n == 0 else z**n + z**-n)
        return out

    def __add__(self, other: "SymPoly") -> "SymPoly":
        m = self.as_map()
        for n, c in other.chi_coeffs:
            m[n] = m[n] + c if n in m else c
        return SymPoly.from_map(m)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "SymPoly":
        c = c if isinstance(c, RatF) else RatF.const(c)
        return SymPoly.from_map({n: c * v for n, v in self.chi_coeffs})

    def substitute(self, assignment: Mapping[str, RatF]) -> "SymPoly":
        out = {}
        for n, c in self.chi_coeffs:
            for k, v in assignment.items():
                c = c.substitute(k, v)
            out[n] = c
        return SymPoly.from_map(out)

    def to_text(self) -> str:
        if not self.chi_coeffs:
            return "0"
        return "\n".join(f"chi_{n}: {c.to_text()}" for n, c in self.chi_coeffs)


def chi(n: int) -> SymPoly:
    """chi_n = z^n + z^-n (so chi_0 is the constant 2)."""
    return SymPoly.from_map({n: RatF.const(1)})


def one() -> SymPoly:
    return SymPoly.from_map({0: RatF(1, 2)})


def chi_expand(f: RatF) -> SymPoly:
    try:
        parts, _ = f.coeffs_in(Z)
    except ValueError as exc:
        raise NotLaurent(str(exc)) from None
    for k, c in parts.items():
        mirror = parts.get(-k)
        if mirror is None or mirror != c:
            raise NotSymmetric(f"coefficient of z^{k} differs from z^{-k}")
    coeffs = {k: c for k, c in parts.items() if k > 0}
    if 0 in parts:
        coeffs[0] = parts[0] / 2
    return SymPoly.from_map(coeffs)


def apply_sym(A: QOp, f: SymPoly) -> SymPoly:
    return chi_expand(op_apply(A, f.to_laurent()))


def parity(p: SymPoly) -> int | None:
    """0 or 1 if every chi_n present has that parity, None if mixed or zero."""
    ps = {n % 2 for n, _ in p.chi_coeffs}
    return ps.pop() if len(ps) == 1 else None


def degree_profile(A: QOp, n_max: int) -> list[tuple[int, int, bool | None]]:
    """(n, degree of A chi_n, parity changed) for n = 0..n_max.

    For n = 0 the input is the constant 1.  Degree -1 means the image is 0;
    parity is None when the image is zero or of mixed parity.
    """
    out = []
    for n in range(n_max + 1):
        img = apply_sym(A, one() if n == 0 else chi(n))
        par = parity(img)
        out.append((n, img.degree, None if par is None else par != n % 2))
    return out
