"""Exact multivariate polynomials and rational functions over Q.

Polynomials are backed by FLINT's ``fmpq_mpoly``.  All values share one
polynomial context whose generators are the interned symbols sorted by
name, so FLINT's ``deglex`` order coincides with the canonical graded
lexicographic order used for hashing, sign normalization and text output.

A :class:`RatF` is always stored in canonical form: ``gcd(num, den) = 1``
and ``den`` is monic with respect to the canonical order.  Two rational
functions are therefore equal iff their numerators and denominators are
identical.
"""

from __future__ import annotations

import random
import re
import threading
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint

__all__ = [
    "DenominatorVanishes",
    "DivisionByZero",
    "ExactAlgError",
    "MissingSymbol",
    "MPoly",
    "ParseError",
    "PoleAtPoint",
    "RatF",
    "SingularSystem",
    "Sym",
    "arith",
    "divide",
    "equal",
    "intern",
    "linear_solve",
    "parse_ratf",
    "specialize",
    "substitute",
    "sym",
]


class ExactAlgError(ArithmeticError):
    pass


class DivisionByZero(ExactAlgError, ZeroDivisionError):
    pass


class DenominatorVanishes(ExactAlgError):
    pass


class PoleAtPoint(ExactAlgError):
    pass


class MissingSymbol(ExactAlgError, KeyError):
    pass


class SingularSystem(ExactAlgError):
    pass


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# symbols and the shared polynomial context

# Every indeterminate the package itself uses.  Interning anything else
# rebuilds the context; values from older contexts are lifted on contact.
_BASE_NAMES = (
    ["a", "b", "c", "d", "e", "s", "t", "w", "z"]
    + ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "kappa"]
    + ["a00", "a01", "a10", "a11", "a12"]
    + [f"alpha{i}" for i in range(1, 7)]
    + [f"beta{i}" for i in range(1, 4)]
    + [f"xi{i}" for i in range(1, 4)]
    + [f"eta{i}" for i in range(1, 6)]
)

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
_lock = threading.Lock()


class _Registry:
    def __init__(self, names: Iterable[str]):
        self.rebuild(sorted(set(names)))

    def rebuild(self, names: list[str]) -> None:
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "deglex")


_reg = _Registry(_BASE_NAMES)


class Sym:
    """An interned indeterminate.  Ordered and compared by name."""

    __slots__ = ("name",)
    _table: dict[str, "Sym"] = {}

    def __new__(cls, name: str) -> "Sym":
        with _lock:
            existing = cls._table.get(name)
            if existing is not None:
                return existing
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid symbol name {name!r}")
            obj = super().__new__(cls)
            obj.name = name
            cls._table[name] = obj
            if name not in _reg.index:
                _reg.rebuild(sorted(set(_reg.names) | {name}))
            return obj

    def __reduce__(self):
        return (Sym, (self.name,))

    def __repr__(self) -> str:
        return f"Sym({self.name!r})"

    def __str__(self) -> str:
        return self.name

    def __lt__(self, other: "Sym") -> bool:
        return self.name < other.name

    def __hash__(self) -> int:
        return hash(("Sym", self.name))


def intern(name: str | Sym) -> Sym:
    return name if isinstance(name, Sym) else Sym(name)


def _ctx():
    return _reg.ctx


def _lift(p):
    ctx = _reg.ctx
    if p.context() is ctx:
        return p
    return p.project_to_context(ctx)


def _var_index(var: str | Sym) -> int:
    name = var.name if isinstance(var, Sym) else var
    intern(name)
    return _reg.index[name]


# ---------------------------------------------------------------------------
# polynomials


def _fmt_coef(c) -> str:
    f = Fraction(int(c.p), int(c.q))
    return f"{f.numerator}/{f.denominator}"


class MPoly:
    """Read-only view of a polynomial with canonical text output."""

    __slots__ = ("_p",)

    def __init__(self, p):
        self._p = p

    @property
    def raw(self):
        return self._p

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def terms(self) -> list[tuple[dict[str, int], Fraction]]:
        """Terms in canonical (descending graded-lex) order."""
        p = _lift(self._p)
        names = _reg.names
        out = []
        for exps, c in p.terms():
            mono = {names[i]: int(e) for i, e in enumerate(exps) if e}
            out.append((mono, Fraction(int(c.p), int(c.q))))
        return out

    def symbols(self) -> set[str]:
        p = _lift(self._p)
        degs = p.degrees()
        return {_reg.names[i] for i, d in enumerate(degs) if d > 0}

    def to_text(self) -> str:
        p = _lift(self._p)
        if p.is_zero():
            return "0/1"
        names = _reg.names
        parts = []
        for exps, c in p.terms():
            factors = [_fmt_coef(c)]
            factors += [f"{names[i]}^{int(e)}" for i, e in enumerate(exps) if e]
            parts.append("*".join(factors))
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"MPoly({self.to_text()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and _lift(self._p) == _lift(other._p)

    def __hash__(self) -> int:
        return hash(self.to_text())


# ---------------------------------------------------------------------------
# rational functions


def _to_fmpq(v) -> "flint.fmpq":
    if isinstance(v, flint.fmpq):
        return v
    f = Fraction(v)
    return flint.fmpq(f.numerator, f.denominator)


class RatF:
    """A rational function num/den in canonical form.  Immutable."""

    __slots__ = ("_num", "_den", "_shift_cache", "__weakref__")

    def __init__(self, num, den=None, *, _canonical: bool = False):
        ctx = _reg.ctx
        num = _lift(num) if hasattr(num, "context") else ctx.constant(_to_fmpq(num))
        if den is None:
            den = ctx.constant(1)
        else:
            den = _lift(den) if hasattr(den, "context") else ctx.constant(_to_fmpq(den))
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not _canonical:
            num, den = _normalize(num, den)
        self._num = num
        self._den = den
        self._shift_cache = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def _raw(cls, num, den) -> "RatF":
        obj = cls.__new__(cls)
        obj._num = num
        obj._den = den
        obj._shift_cache = None
        return obj

    @classmethod
    def const(cls, value) -> "RatF":
        ctx = _reg.ctx
        return cls._raw(ctx.constant(_to_fmpq(value)), ctx.constant(1))

    @classmethod
    def symbol(cls, name: str | Sym) -> "RatF":
        i = _var_index(name)
        ctx = _reg.ctx
        return cls._raw(ctx.gens()[i], ctx.constant(1))

    @classmethod
    def from_poly(cls, p: MPoly) -> "RatF":
        return cls(p.raw)

    # -- accessors --------------------------------------------------------

    @property
    def num(self) -> MPoly:
        return MPoly(self._num)

    @property
    def den(self) -> MPoly:
        return MPoly(self._den)

    def _parts(self):
        ctx = _reg.ctx
        if self._num.context() is ctx:
            return self._num, self._den
        return _lift(self._num), _lift(self._den)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_one(self) -> bool:
        return self._num.is_one() and self._den.is_one()

    def is_constant(self) -> bool:
        return self._num.is_constant() and self._den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        n = self._num.coefficient(0) if not self._num.is_zero() else flint.fmpq(0)
        d = self._den.coefficient(0)
        return Fraction(int(n.p), int(n.q)) / Fraction(int(d.p), int(d.q))

    def symbols(self) -> set[str]:
        return self.num.symbols() | self.den.symbols()

    def to_text(self) -> str:
        return f"{self.num.to_text()} / {self.den.to_text()}"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RatF({self.to_text()!r})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "RatF":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other) -> "RatF":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other, -1)

    def __rsub__(self, other) -> "RatF":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _add(other, self, -1)

    def __neg__(self) -> "RatF":
        n, d = self._parts()
        return RatF._raw(-n, d)

    def __pos__(self) -> "RatF":
        return self

    def __mul__(self, other) -> "RatF":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatF":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, _inverse(other))

    def __rtruediv__(self, other) -> "RatF":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(other, _inverse(self))

    def __pow__(self, k: int) -> "RatF":
        if not isinstance(k, int):
            return NotImplemented
        n, d = self._parts()
        if k < 0:
            if n.is_zero():
                raise DivisionByZero("zero to a negative power")
            n, d, k = d, n, -k
            lc = d.leading_coefficient()
            n, d = n / lc, d / lc
        return RatF._raw(n**k, d**k)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        a, b = self._parts(), other._parts()
        return a[0] == b[0] and a[1] == b[1]

    def __hash__(self) -> int:
        return hash(self.to_text())

    def __reduce__(self):
        return (parse_ratf, (self.to_text(),))

    # -- substitution -----------------------------------------------------

    def substitute(self, var: str | Sym, value) -> "RatF":
        return substitute(self, var, value)

    def scale_var(self, var: str | Sym, by: str | Sym, power: int) -> "RatF":
        """Return f(var * by**power) for the symbol ``by``; ``power`` may be negative."""
        if power == 0:
            return self
        key = (var, by, power)
        cache = self._shift_cache
        if cache is not None and key in cache:
            return cache[key]
        i, j = _var_index(var), _var_index(by)
        n, d = self._parts()
        res = _monomial_automorphism(n, d, lambda e: _scaled(e, i, j, power))
        if cache is None:
            self._shift_cache = cache = {}
        cache[key] = res
        return res

    def invert_var(self, var: str | Sym = "z") -> "RatF":
        """Return f(1/var)."""
        key = ("inv", var)
        cache = self._shift_cache
        if cache is not None and key in cache:
            return cache[key]
        i = _var_index(var)
        n, d = self._parts()
        res = _monomial_automorphism(n, d, lambda e: _negated(e, i))
        if cache is None:
            self._shift_cache = cache = {}
        cache[key] = res
        return res

    def specialize(self, assignment: Mapping) -> Fraction:
        return specialize(self, assignment)

    def coeffs_in(self, var: str | Sym) -> tuple[dict[int, "RatF"], "RatF"]:
        """Split as (sum_k c_k var^k) / D with D free of ``var``.

        Returns ``({k: c_k / D}, den_factor)`` only when the denominator is
        a monomial in ``var`` times a ``var``-free polynomial; exponents k may
        be negative.  Raises ValueError otherwise.
        """
        i = _var_index(var)
        n, d = self._parts()
        dd = d.to_dict()
        shift = None
        for e in dd:
            if shift is None:
                shift = int(e[i])
            elif e[i] != shift:
                raise ValueError("denominator is not a monomial in %s" % var)
        ctx = _reg.ctx
        dfree = {}
        for e, c in dd.items():
            e2 = list(e)
            e2[i] = 0
            dfree[tuple(e2)] = c
        dpoly = ctx.from_dict(dfree)
        groups: dict[int, dict] = {}
        for e, c in n.to_dict().items():
            k = int(e[i] - shift)
            e2 = list(e)
            e2[i] = 0
            groups.setdefault(k, {})[tuple(e2)] = c
        out = {k: RatF(ctx.from_dict(g), dpoly) for k, g in groups.items()}
        return out, RatF(dpoly)


def _scaled(e, i, j, power):
    e = list(e)
    e[j] += power * e[i]
    return e


def _negated(e, i):
    e = list(e)
    e[i] = -e[i]
    return e


def _monomial_automorphism(n, d, f) -> RatF:
    """Apply an exponent map that is an automorphism of the Laurent ring.

    Such maps preserve coprimality up to monomial factors, so only the
    monomial content needs redistributing.
    """
    ctx = _reg.ctx
    if n.is_zero():
        return RatF._raw(ctx.constant(0), ctx.constant(1))
    nterms = [(f(e), c) for e, c in n.to_dict().items()]
    dterms = [(f(e), c) for e, c in d.to_dict().items()]
    nv = len(_reg.names)
    nlow = [min(e[k] for e, _ in nterms) for k in range(nv)]
    dlow = [min(e[k] for e, _ in dterms) for k in range(nv)]
    net = [a - b for a, b in zip(nlow, dlow)]
    nd = {tuple(x - lo + max(m, 0) for x, lo, m in zip(e, nlow, net)): c for e, c in nterms}
    dd = {tuple(x - lo + max(-m, 0) for x, lo, m in zip(e, dlow, net)): c for e, c in dterms}
    num = ctx.from_dict(nd)
    den = ctx.from_dict(dd)
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num / lc, den / lc
    return RatF._raw(num, den)


def _coerce(x):
    if isinstance(x, RatF):
        return x
    if isinstance(x, (int, Fraction)):
        return RatF.const(x)
    if isinstance(x, MPoly):
        return RatF(x.raw)
    return NotImplemented


def _normalize(num, den):
    if num.is_zero():
        ctx = _reg.ctx
        return ctx.constant(0), ctx.constant(1)
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_constant():
            num = num / g
            den = den / g
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num / lc, den / lc
    return num, den


def _add(x: RatF, y: RatF, sign: int) -> RatF:
    xn, xd = x._parts()
    yn, yd = y._parts()
    if yn.is_zero():
        return x
    if xn.is_zero():
        return RatF._raw(yn if sign > 0 else -yn, yd)
    if sign < 0:
        yn = -yn
    if xd == yd:
        n = xn + yn
        if xd.is_one():
            return RatF._raw(n, xd)
        return RatF(n, xd)
    if xd.is_constant() and yd.is_constant():
        return RatF(xn * yd + yn * xd, xd * yd)
    g = xd.gcd(yd)
    if g.is_one():
        return RatF(xn * yd + yn * xd, xd * yd)
    xd1, yd1 = xd / g, yd / g
    n = xn * yd1 + yn * xd1
    if n.is_zero():
        return RatF.const(0)
    g2 = n.gcd(g)
    if not g2.is_one():
        n = n / g2
        g = g / g2
    return RatF(n, xd1 * g * yd1, _canonical=False)


def _mul(x: RatF, y: RatF) -> RatF:
    xn, xd = x._parts()
    yn, yd = y._parts()
    if xn.is_zero() or yn.is_zero():
        return RatF.const(0)
    if xd.is_one() and yd.is_one():
        return RatF._raw(xn * yn, xd)
    if not yd.is_one():
        g1 = xn.gcd(yd)
        if not g1.is_one():
            xn, yd = xn / g1, yd / g1
    if not xd.is_one():
        g2 = yn.gcd(xd)
        if not g2.is_one():
            yn, xd = yn / g2, xd / g2
    num, den = xn * yn, xd * yd
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num / lc, den / lc
    return RatF._raw(num, den)


def _inverse(x: RatF) -> RatF:
    n, d = x._parts()
    if n.is_zero():
        raise DivisionByZero("division by the zero rational function")
    lc = n.leading_coefficient()
    return RatF._raw(d / lc, n / lc)


# ---------------------------------------------------------------------------
# module-level operations


def sym(name: str | Sym) -> RatF:
    return RatF.symbol(name)


def arith(op: str, x: RatF, y: RatF | None = None) -> RatF:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown op {op!r}")


def divide(x: RatF, y: RatF) -> RatF:
    if _coerce(y).is_zero():
        raise DivisionByZero("division by zero")
    return x / y


def _subst_poly(p, i: int, vn, vd):
    """Return (H, deg) with H = vd**deg * p(var_i -> vn/vd)."""
    ctx = _reg.ctx
    groups: dict[int, dict] = {}
    for e, c in p.to_dict().items():
        k = e[i]
        e2 = list(e)
        e2[i] = 0
        groups.setdefault(k, {})[tuple(e2)] = c
    if not groups:
        return ctx.constant(0), 0
    deg = max(groups)
    coeffs = {k: ctx.from_dict(g) for k, g in groups.items()}
    acc = coeffs.get(deg, ctx.constant(0))
    vd_pow = ctx.constant(1)
    for k in range(deg - 1, -1, -1):
        vd_pow = vd_pow * vd
        acc = acc * vn
        if k in coeffs:
            acc = acc + coeffs[k] * vd_pow
    return acc, deg


def substitute(x: RatF, var: str | Sym, value) -> RatF:
    """Compose: x with ``var`` replaced by the rational function ``value``."""
    value = _coerce(value)
    i = _var_index(var)
    n, d = x._parts()
    vn, vd = value._parts()
    hn, dn = _subst_poly(n, i, vn, vd)
    hd, dd = _subst_poly(d, i, vn, vd)
    if hd.is_zero():
        raise DenominatorVanishes(f"denominator vanishes under {var} -> {value}")
    if dd > dn:
        hn = hn * vd ** (dd - dn)
    elif dn > dd:
        hd = hd * vd ** (dn - dd)
    return RatF(hn, hd)


def _value_vector(assignment: Mapping, x: RatF) -> list:
    vals = {}
    for k, v in assignment.items():
        name = k.name if isinstance(k, Sym) else str(k)
        vals[name] = _to_fmpq(v)
    needed = x.symbols()
    missing = sorted(needed - set(vals))
    if missing:
        raise MissingSymbol(", ".join(missing))
    return [vals.get(n, flint.fmpq(0)) for n in _reg.names]


def specialize(x: RatF, assignment: Mapping) -> Fraction:
    """Evaluate at a full rational point."""
    x = _coerce(x)
    vec = _value_vector(assignment, x)
    n, d = x._parts()
    dv = d(*vec)
    if dv == 0:
        raise PoleAtPoint("denominator vanishes at the given point")
    r = n(*vec) / dv
    return Fraction(int(r.p), int(r.q))


def partial_specialize(x: RatF, assignment: Mapping) -> RatF:
    """Substitute rational values for some symbols, keeping the rest symbolic."""
    out = x
    for k, v in assignment.items():
        out = substitute(out, k, RatF.const(v))
    return out


_PROBE_PRIME = (1 << 61) - 1


def _probe_values(names: Sequence[str], rng: random.Random) -> dict[str, int]:
    return {n: rng.randrange(2, _PROBE_PRIME) for n in names}


def _eval_mod(p, vals: Mapping[str, int]) -> int | None:
    acc = 0
    names = _reg.names
    for exps, c in p.terms():
        qd = int(c.q) % _PROBE_PRIME
        if qd == 0:
            return None
        term = int(c.p) * pow(qd, -1, _PROBE_PRIME)
        for k, e in enumerate(exps):
            if e:
                term = term * pow(vals[names[k]], int(e), _PROBE_PRIME) % _PROBE_PRIME
        acc = (acc + term) % _PROBE_PRIME
    return acc


def probe_differs(x: RatF, y: RatF, seed: int = 0, rounds: int = 2) -> bool:
    """Schwartz-Zippel probe modulo a 61-bit prime.

    True means x != y for certain; False means the probe found no
    difference (which is not a proof of equality).
    """
    xn, xd = x._parts()
    yn, yd = y._parts()
    names = sorted(x.symbols() | y.symbols())
    rng = random.Random(seed)
    for _ in range(rounds):
        vals = _probe_values(names, rng)
        parts = [_eval_mod(p, vals) for p in (xn, xd, yn, yd)]
        if any(v is None for v in parts) or parts[1] == 0 or parts[3] == 0:
            continue
        if (parts[0] * parts[3] - parts[2] * parts[1]) % _PROBE_PRIME:
            return True
    return False


def equal(x: RatF, y: RatF, *, probe: bool = False, seed: int = 0) -> bool:
    """Exact equality; with ``probe`` a random modular evaluation may answer False early."""
    x, y = _coerce(x), _coerce(y)
    if probe and probe_differs(x, y, seed):
        return False
    return x == y


def linear_solve(A: Sequence[Sequence], b: Sequence) -> list[RatF]:
    """Solve A x = b exactly by Gaussian elimination; the answer is checked by back-substitution."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("A must be square and match b")
    M = [[_coerce(v) for v in row] + [_coerce(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = None
        best = None
        for r in range(col, n):
            if not M[r][col].is_zero():
                size = len(M[r][col].to_text())
                if best is None or size < best:
                    piv, best = r, size
        if piv is None:
            raise SingularSystem("determinant is the zero rational function")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    x = [M[r][n] for r in range(n)]
    for row, bi in zip(A, b):
        lhs = RatF.const(0)
        for a_ij, x_j in zip(row, x):
            lhs = lhs + _coerce(a_ij) * x_j
        if lhs != _coerce(bi):
            raise SingularSystem("back-substitution check failed")
    return x


# ---------------------------------------------------------------------------
# parsing


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> RatF:
        if not self.toks:
            raise ParseError("empty expression")
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}")
        return v

    def expr(self) -> RatF:
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> RatF:
        v = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise ParseError("division by zero literal")
                v = v / w
        return v

    def unary(self) -> RatF:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatF:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            neg = False
            if self.peek() in ("-", "+"):
                neg = self.take() == "-"
            tok = self.take()
            if tok is None or not tok.isdigit():
                raise ParseError("exponent must be an integer literal")
            k = int(tok)
            return base ** (-k if neg else k)
        return base

    def atom(self) -> RatF:
        tok = self.take()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok == "(":
            v = self.expr()
            if self.take() != ")":
                raise ParseError("missing ')'")
            return v
        if tok.isdigit():
            return RatF.const(int(tok))
        if tok[0].isalpha() or tok[0] == "_":
            return RatF.symbol(tok)
        raise ParseError(f"unexpected token {tok!r}")


def parse_ratf(text: str) -> RatF:
    """Parse canonical ``num / den`` text or an ordinary arithmetic expression.

    A slash surrounded by spaces separates numerator and denominator at top
    level; everything else follows usual precedence with ``^`` or ``**`` for
    integer powers.
    """
    text = text.strip()
    if " / " in text:
        head, _, tail = text.partition(" / ")
        if " / " in tail:
            raise ParseError("more than one top-level ' / '")
        den = _Parser(tail).parse()
        if den.is_zero():
            raise ParseError("zero denominator")
        return _Parser(head).parse() / den
    return _Parser(text).parse()
