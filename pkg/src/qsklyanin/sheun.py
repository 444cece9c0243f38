"""S-Heun operators, the Heun-Askey-Wilson operator and quadratic word reduction.

An S-Heun operator ``A1(z) T+ + A2(z) T-`` raises the degree of polynomials
in ``x = z + 1/z`` by at most one.  Imposing that on ``1`` and ``chi_1``
fixes ``A1``, ``A2`` in terms of five free coefficients; higher ``chi_n``
add no constraints.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, fields
from typing import Mapping, Sequence

from .catalog import make_sheun_basis
from .exactalg import RatF, linear_solve, parse_ratf, sym
from .qop import (
    NotSymmetric,
    QOp,
    SymPoly,
    chi,
    chi_expand,
    identity,
    op_apply,
    one,
)

__all__ = [
    "BASIS_WORDS",
    "GENERATORS",
    "HeunData",
    "NotHeunShape",
    "NotReducible",
    "OpWord",
    "QHawParams",
    "SHeunParams",
    "build_qhaw",
    "extract_heun_data",
    "factor_expand",
    "parse_word",
    "realize",
    "reduce_quadratic",
    "rewrite_rules",
    "sheun_operator",
    "solve_raising",
    "verify_no_new_constraints",
]

GENERATORS = ("L", "M1", "M2", "R1", "R2")


def _q() -> RatF:
    return sym("s") ** 2


def _z() -> RatF:
    return sym("z")


def _R(v) -> RatF:
    return v if isinstance(v, RatF) else RatF.const(v)


@dataclass(frozen=True)
class SHeunParams:
    a00: RatF = field(default_factory=lambda: sym("a00"))
    a01: RatF = field(default_factory=lambda: sym("a01"))
    a10: RatF = field(default_factory=lambda: sym("a10"))
    a11: RatF = field(default_factory=lambda: sym("a11"))
    a12: RatF = field(default_factory=lambda: sym("a12"))

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _R(getattr(self, f.name)))

    @classmethod
    def unit(cls, **nonzero) -> "SHeunParams":
        vals = {f.name: RatF.const(0) for f in fields(cls)}
        vals.update({k: _R(v) for k, v in nonzero.items()})
        return cls(**vals)


@dataclass(frozen=True)
class QHawParams:
    alpha1: RatF = field(default_factory=lambda: sym("alpha1"))
    alpha2: RatF = field(default_factory=lambda: sym("alpha2"))
    alpha3: RatF = field(default_factory=lambda: sym("alpha3"))
    alpha4: RatF = field(default_factory=lambda: sym("alpha4"))
    alpha5: RatF = field(default_factory=lambda: sym("alpha5"))
    alpha6: RatF = field(default_factory=lambda: sym("alpha6"))
    beta1: RatF = field(default_factory=lambda: sym("beta1"))
    beta2: RatF = field(default_factory=lambda: sym("beta2"))
    beta3: RatF = field(default_factory=lambda: sym("beta3"))

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _R(getattr(self, f.name)))

    @classmethod
    def only(cls, **nonzero) -> "QHawParams":
        vals = {f.name: RatF.const(0) for f in fields(cls)}
        vals.update({k: _R(v) for k, v in nonzero.items()})
        return cls(**vals)

    def values(self) -> tuple[RatF, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


# ---------------------------------------------------------------------------
# raising condition


def raising_system() -> tuple[list[list[RatF]], list[RatF]]:
    """Matrix and right-hand side of the n = 0, 1 raising conditions in (A1, A2).

    S 1 = a00 + a01 chi_1 and S chi_1 = a10 + a11 chi_1 + a12 chi_2.
    """
    q, z = _q(), _z()
    p = SHeunParams()
    chi1 = z + 1 / z
    chi2 = z**2 + z**-2
    A = [[RatF.const(1), RatF.const(1)], [q * z + 1 / (q * z), z / q + q / z]]
    b = [p.a00 + p.a01 * chi1, p.a10 + p.a11 * chi1 + p.a12 * chi2]
    return A, b


@dataclass(frozen=True)
class RaisingSolution:
    A1: RatF
    A2: RatF

    def pi4(self) -> RatF:
        """Numerator polynomial of A1 over z(1 - z^2)(1 - q^2)."""
        z = _z()
        return self.A1 * z * (1 - z**2) * (1 - _q() ** 2)


def solve_raising() -> RaisingSolution:
    A, b = raising_system()
    A1, A2 = linear_solve(A, b)
    return RaisingSolution(A1, A2)


def pi4_closed_form(p: SHeunParams | None = None) -> RatF:
    p = p or SHeunParams()
    q, z = _q(), _z()
    return (
        (p.a12 * q - p.a01) * z**4
        + (q * p.a11 - p.a00) * z**3
        - ((1 + q**2) * p.a01 - q * p.a10) * z**2
        + q * (p.a11 - q * p.a00) * z
        + q * (p.a12 - q * p.a01)
    )


def sheun_operator(p: SHeunParams | None = None, A1: RatF | None = None) -> QOp:
    """The S-Heun operator for the given coefficients (or an explicit A1)."""
    if A1 is None:
        A1 = solve_raising().A1
        if p is not None:
            for f in fields(SHeunParams):
                A1 = A1.substitute(f.name, getattr(p, f.name))
    return QOp({1: A1, -1: A1.invert_var("z")})


def verify_no_new_constraints(n_max: int, A1: RatF | None = None) -> bool:
    """True when S chi_n stays in span{chi_0..chi_{n+1}} for 2 <= n <= n_max."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    S = sheun_operator(A1=A1)
    for n in range(2, n_max + 1):
        try:
            img = chi_expand(op_apply(S, chi(n).to_laurent()))
        except NotSymmetric:
            return False
        if img.degree > n + 1:
            return False
    return True


def raising_coefficients(n: int) -> SymPoly:
    """chi coefficients of S chi_n for the fully symbolic S."""
    return chi_expand(op_apply(sheun_operator(), (one() if n == 0 else chi(n)).to_laurent()))


# ---------------------------------------------------------------------------
# Heun-Askey-Wilson operator

QHAW_WORDS = (
    ("alpha1", ("L", "L")),
    ("alpha2", ("L", "M2")),
    ("alpha3", ("M1", "M1")),
    ("alpha4", ("M1", "M2")),
    ("alpha5", ("M2", "L")),
    ("alpha6", ("M2", "M2")),
    ("beta1", ("M1", "R1")),
    ("beta2", ("R1", "M1")),
    ("beta3", ("R2", "M2")),
)


def _word_op(word: Sequence[str]) -> QOp:
    basis = make_sheun_basis()
    out = identity()
    for g in word:
        out = out @ basis[g]
    return out


def build_qhaw(p: QHawParams | None = None) -> QOp:
    p = p or QHawParams()
    out = QOp()
    for name, word in QHAW_WORDS:
        c = getattr(p, name)
        if not c.is_zero():
            out = out + _word_op(word).scale(c)
    return out


class NotHeunShape(ValueError):
    pass


@dataclass(frozen=True)
class HeunData:
    r: tuple[RatF, ...]  # r_0 .. r_6
    p1_const: RatF  # p1(x) = p1_x * x + p1_const
    p1_x: RatF
    A1: RatF

    def q6(self) -> RatF:
        q = _q()
        z = _z()
        total = RatF.const(0)
        for k, rk in enumerate(self.r):
            total = total + rk * z**k
        return total / (q**2 * (q - 1 / q) ** 2)


def extract_heun_data(Q: QOp) -> HeunData:
    q, z = _q(), _z()
    if not set(Q.shifts()) <= {-2, 0, 2}:
        raise NotHeunShape(f"shifts {Q.shifts()} not within {{-2, 0, 2}}")
    A1 = Q.coeff(2)
    if Q.coeff(-2) != A1.invert_var("z"):
        raise NotHeunShape("T-^2 coefficient is not the z -> 1/z mirror of the T+^2 coefficient")
    q6 = A1 * z * (1 - z**2) * (1 - q**2 * z**2)
    try:
        parts, _ = q6.coeffs_in("z")
    except ValueError:
        raise NotHeunShape("Q6 is not a polynomial in z") from None
    if any(k < 0 or k > 6 for k in parts):
        raise NotHeunShape(f"Q6 has z-degrees {sorted(parts)} outside 0..6")
    scale = q**2 * (q - 1 / q) ** 2
    r = tuple(parts.get(k, RatF.const(0)) * scale for k in range(7))
    try:
        p1 = chi_expand(Q.coeff(0) + A1 + A1.invert_var("z"))
    except ValueError as exc:
        raise NotHeunShape(f"p1 is not a polynomial in x: {exc}") from None
    if p1.degree > 1:
        raise NotHeunShape(f"p1 has degree {p1.degree} in x")
    return HeunData(r, p1.coords().get(0, RatF.const(0)), p1.coeff(1), A1)


def r_closed_form(p: QHawParams | None = None) -> tuple[RatF, ...]:
    """Closed-form r_0..r_6 in terms of the alpha/beta coefficients."""
    p = p or QHawParams()
    q = _q()
    a1, a2, a3, a4, a5, a6, b1, b2, b3 = p.values()
    return (
        b2 * q**4 - b3 * q**4 + b1 * q**3 + b3 * q**2,
        a3 * q**4 - a4 * q**3 + a6 * q**2,
        -b3 * q**6 + b1 * q**5 + 2 * b2 * q**4 + (a5 + b1) * q**3 + (a2 + b2 - b3) * q**2 + b1 * q,
        -a4 * q**5 + (a3 + a6) * q**4 + a1 * q**3 + (a3 + a6) * q**2 - a4 * q,
        -b3 * q**6 + b1 * q**5 + (a2 + b2 - b3) * q**4 + (a5 + b1) * q**3 + 2 * b2 * q**2 + b1 * q,
        a6 * q**4 - a4 * q**3 + a3 * q**2,
        b1 * q**3 + b2 * q**2,
    )


# ---------------------------------------------------------------------------
# operator words and rewriting


class NotReducible(ValueError):
    def __init__(self, message: str, stuck=None):
        super().__init__(message)
        self.stuck = stuck


@dataclass(frozen=True)
class OpWord:
    """Expression tree: ("gen", name) | ("scalar", RatF) | ("+", kids) | ("*", (left, right))."""

    kind: str
    value: object

    @classmethod
    def gen(cls, name: str) -> "OpWord":
        if name not in GENERATORS:
            raise ValueError(f"unknown generator {name!r}")
        return cls("gen", name)

    @classmethod
    def scalar(cls, c) -> "OpWord":
        c = _R(c)
        if "z" in c.symbols():
            raise ValueError("scalars must not depend on z")
        return cls("scalar", c)

    @classmethod
    def add(cls, *kids: "OpWord") -> "OpWord":
        return cls("+", tuple(kids))

    @classmethod
    def mul(cls, left: "OpWord", right: "OpWord") -> "OpWord":
        return cls("*", (left, right))

    def __add__(self, other: "OpWord") -> "OpWord":
        return OpWord.add(self, other)

    def __mul__(self, other: "OpWord") -> "OpWord":
        return OpWord.mul(self, other)

    def to_sexpr(self) -> str:
        if self.kind == "gen":
            return self.value
        if self.kind == "scalar":
            return '"' + self.value.to_text() + '"'
        if self.kind == "+":
            return "(+ " + " ".join(k.to_sexpr() for k in self.value) + ")"
        left, right = self.value
        return f"(* {left.to_sexpr()} {right.to_sexpr()})"


def _sexpr_tokens(text: str) -> list[str]:
    toks, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            toks.append(ch)
            i += 1
        elif ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ValueError("unterminated string literal")
            toks.append(text[i : j + 1])
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            toks.append(text[i:j])
            i = j
    return toks


def parse_word(text: str) -> OpWord:
    """Parse ``(+ ...)`` / ``(* ...)`` s-expressions over L, M1, M2, R1, R2 and scalars.

    Scalars are bare tokens without spaces or double-quoted canonical
    rational-function text.
    """
    toks = _sexpr_tokens(text)
    pos = 0

    def node() -> OpWord:
        nonlocal pos
        if pos >= len(toks):
            raise ValueError("unexpected end of word")
        tok = toks[pos]
        pos += 1
        if tok == "(":
            if pos >= len(toks):
                raise ValueError("unexpected end of word")
            op = toks[pos]
            pos += 1
            kids = []
            while pos < len(toks) and toks[pos] != ")":
                kids.append(node())
            if pos >= len(toks):
                raise ValueError("missing ')'")
            pos += 1
            if not kids:
                raise ValueError(f"empty ({op} ...)")
            if op == "+":
                return OpWord.add(*kids)
            if op == "*":
                out = kids[0]
                for k in kids[1:]:
                    out = OpWord.mul(out, k)
                return out
            raise ValueError(f"unknown operator {op!r}")
        if tok == ")":
            raise ValueError("unexpected ')'")
        if tok in GENERATORS:
            return OpWord.gen(tok)
        literal = tok[1:-1] if tok.startswith('"') else tok
        return OpWord.scalar(parse_ratf(literal))

    w = node()
    if pos != len(toks):
        raise ValueError("trailing tokens after word")
    return w


NCPoly = dict  # tuple of generator names -> RatF


def _nc_add(acc: NCPoly, word: tuple, c: RatF) -> None:
    if c.is_zero():
        return
    v = acc.get(word)
    v = c if v is None else v + c
    if v.is_zero():
        acc.pop(word, None)
    else:
        acc[word] = v


def expand(w: OpWord) -> NCPoly:
    """Expand to a noncommutative polynomial {word: coefficient}."""
    if w.kind == "gen":
        return {(w.value,): RatF.const(1)}
    if w.kind == "scalar":
        return {(): w.value} if not w.value.is_zero() else {}
    if w.kind == "+":
        acc: NCPoly = {}
        for k in w.value:
            for word, c in expand(k).items():
                _nc_add(acc, word, c)
        return acc
    left, right = (expand(k) for k in w.value)
    acc = {}
    for w1, c1 in left.items():
        for w2, c2 in right.items():
            _nc_add(acc, w1 + w2, c1 * c2)
    return acc


BASIS_WORDS = (
    ("L", "L"),
    ("L", "M2"),
    ("M1", "M1"),
    ("M1", "M2"),
    ("M2", "L"),
    ("M2", "M2"),
    ("M1", "R1"),
    ("R1", "M1"),
    ("R2", "M2"),
    ("L",),
    ("M1",),
    ("M2",),
    ("R1",),
    ("R2",),
    (),
)


def rewrite_rules() -> dict[tuple, NCPoly]:
    """Oriented quadratic relations: non-basis word -> combination of other words.

    The [M1, M2] rule uses the scalar -(q - 1/q)^2 verified on the
    realization.
    """
    q = _q()
    qp, qm = q + 1 / q, q - 1 / q
    one_ = RatF.const(1)
    return {
        ("M2", "M1"): {("M1", "M2"): one_, ("L", "L"): qm**2},
        ("L", "M1"): {("M2", "L"): -one_},
        ("M1", "L"): {("L", "M1"): qp, ("L", "M2"): one_},
        ("L", "R1"): {(): one_, ("M2", "M2"): -one_},
        ("R1", "L"): {(): one_, ("M1", "M1"): -one_},
        ("L", "R2"): {("L", "L"): RatF.const(-2), ("M2", "M2"): 1 / q, ("M1", "M2"): one_, (): q},
        ("R2", "L"): {("L", "L"): RatF.const(-2), ("M2", "M2"): q, ("M2", "M1"): q**2},
        ("R1", "M2"): {("M1", "R1"): -one_},
        ("M1", "R2"): {("R2", "M2"): -one_, ("M2", "L"): 2 * qp, ("L", "M2"): -(qp**2)},
        ("R2", "M1"): {("R1", "M1"): q, ("M1", "R1"): -one_, ("L", "M1"): -(q**2 + q**-2)},
        ("M2", "R1"): {("R1", "M1"): one_, ("M1", "R1"): -qp, ("M2", "L"): qp * qm**2},
        ("M2", "R2"): {
            ("R2", "M2"): qp,
            ("R2", "M1"): one_,
            ("M1", "L"): 2 * qp,
            ("L", "M1"): -(2 * q**-2 + 1 + q**4),
        },
    }


def rr_rule() -> tuple[NCPoly, NCPoly]:
    """R2 R2 - q R2 R1 + q^-1 R1 R2 and the quadratic combination it equals."""
    q = _q()
    qp = q + 1 / q
    lhs = {("R2", "R2"): RatF.const(1), ("R2", "R1"): -q, ("R1", "R2"): 1 / q}
    rhs = {
        ("M1", "M2"): -2 * qp**2,
        ("M2", "M2"): -(qp**3),
        ("L", "L"): 2 * ((q**2 + q**-2) - (q**2 - q**-2) ** 2),
    }
    return lhs, rhs


_RR_WORDS = (("R1", "R1"), ("R1", "R2"), ("R2", "R1"), ("R2", "R2"))


def _reduce_nc(poly: NCPoly) -> NCPoly:
    poly = dict(poly)
    for word in poly:
        if len(word) > 2:
            raise NotReducible(f"word {word} has degree {len(word)} > 2", word)
    # the RR block only reduces as a multiple of the mixed relation
    lhs, rhs = rr_rule()
    rr = {w: poly.pop(w) for w in _RR_WORDS if w in poly}
    if rr:
        lam = rr.get(("R2", "R2"), RatF.const(0))
        mismatch = [w for w in _RR_WORDS if rr.get(w, RatF.const(0)) != lam * lhs.get(w, RatF.const(0))]
        if lam.is_zero() or mismatch:
            raise NotReducible("R-R terms are not a multiple of R2^2 - q R2 R1 + q^-1 R1 R2", rr)
        for w, c in rhs.items():
            _nc_add(poly, w, lam * c)
    rules = rewrite_rules()
    basis = set(BASIS_WORDS)
    for _ in range(64):
        dirty = [w for w in poly if w not in basis]
        if not dirty:
            return poly
        for w in dirty:
            c = poly.pop(w)
            if w not in rules:
                raise NotReducible(f"no rule for {w}", w)
            for w2, c2 in rules[w].items():
                _nc_add(poly, w2, c * c2)
    raise NotReducible("rewriting did not terminate", poly)


def reduce_quadratic(w: OpWord | NCPoly) -> dict[tuple, RatF]:
    """Coordinates of the word on BASIS_WORDS (all keys present, zeros included)."""
    poly = expand(w) if isinstance(w, OpWord) else w
    red = _reduce_nc(poly)
    return {b: red.get(b, RatF.const(0)) for b in BASIS_WORDS}


def realize(w: OpWord | NCPoly) -> QOp:
    poly = expand(w) if isinstance(w, OpWord) else w
    out = QOp()
    for word, c in poly.items():
        out = out + _word_op(word).scale(c)
    return out


def realize_coords(coords: Mapping[tuple, RatF]) -> QOp:
    return realize({w: c for w, c in coords.items() if not c.is_zero()})


def coords_to_qhaw(coords: Mapping[tuple, RatF]) -> QHawParams:
    """Fold the constant via M1^2 + M2^2 + (q+1/q) M2 M1 = 1; linear terms must vanish."""
    q = _q()
    qp, qm = q + 1 / q, q - 1 / q
    for w in BASIS_WORDS:
        if len(w) == 1 and not coords[w].is_zero():
            raise NotHeunShape(f"linear term {w[0]} present")
    c0 = coords[()]
    vals = {name: coords[word] for name, word in QHAW_WORDS}
    vals["alpha3"] = vals["alpha3"] + c0
    vals["alpha6"] = vals["alpha6"] + c0
    vals["alpha4"] = vals["alpha4"] + qp * c0
    vals["alpha1"] = vals["alpha1"] + qp * qm**2 * c0
    return QHawParams(**vals)


@dataclass(frozen=True)
class FactorResult:
    Q: QOp
    heun: HeunData
    coords: dict
    params: QHawParams


def factor_word(xi: Sequence, eta: Sequence, kappa) -> OpWord:
    left = OpWord.add(*(OpWord.scalar(c) * OpWord.gen(g) for c, g in zip(xi, ("L", "M1", "M2"))))
    right = OpWord.add(*(OpWord.scalar(c) * OpWord.gen(g) for c, g in zip(eta, GENERATORS)))
    return OpWord.add(left * right, OpWord.scalar(kappa))


def factor_expand(xi: Sequence, eta: Sequence, kappa) -> FactorResult:
    """Expand (xi . {L,M1,M2})(eta . {L,M1,M2,R1,R2}) + kappa and read off its data."""
    if len(xi) != 3 or len(eta) != 5:
        raise ValueError("xi needs 3 and eta needs 5 entries")
    word = factor_word(xi, eta, kappa)
    Q = realize(word)
    heun = extract_heun_data(Q)
    coords = reduce_quadratic(word)
    return FactorResult(Q, heun, coords, coords_to_qhaw(coords))


def random_admissible_word(rng: random.Random) -> OpWord:
    """A random quadratic word whose realization raises degree by at most one."""

    def scal():
        num = rng.randint(-9, 9)
        return OpWord.scalar(RatF(num, rng.randint(1, 5)) if num else RatF.const(rng.randint(1, 3)))

    def lin(gens):
        picks = rng.sample(list(gens), rng.randint(1, len(gens)))
        return OpWord.add(*(scal() * OpWord.gen(g) for g in picks))

    pieces = []
    for _ in range(rng.randint(1, 4)):
        kind = rng.random()
        if kind < 0.35:
            pieces.append(lin(("L", "M1", "M2")) * lin(GENERATORS))
        elif kind < 0.6:
            pieces.append(lin(GENERATORS) * lin(("L", "M1", "M2")))
        elif kind < 0.8:
            g1, g2 = rng.choice([(x, y) for x in GENERATORS for y in GENERATORS if not (x[0] == y[0] == "R")])
            pieces.append(scal() * (OpWord.gen(g1) * OpWord.gen(g2)))
        elif kind < 0.9:
            lam = scal()
            s = sym("s")
            rr = OpWord.add(
                OpWord.gen("R2") * OpWord.gen("R2"),
                OpWord.scalar(-(s**2)) * (OpWord.gen("R2") * OpWord.gen("R1")),
                OpWord.scalar(s**-2) * (OpWord.gen("R1") * OpWord.gen("R2")),
            )
            pieces.append(lam * rr)
        else:
            pieces.append(lin(GENERATORS))
    if rng.random() < 0.3:
        pieces.append(scal())
    return OpWord.add(*pieces)
