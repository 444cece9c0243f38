"""Constructors for the named q-difference operators.

Conventions: ``q = s**2``; ``t`` stands for ``q**nu`` so ``q**(2 nu) = t**2``.
Every constructor is a pure function of its (symbolic or specialized)
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

from .exactalg import RatF, sym
from .qop import QOp, identity, mult, op_compose, q_commutator

__all__ = [
    "AWParams",
    "CombCoeffs",
    "CATALOG",
    "by_name",
    "make_ABCD",
    "make_AW",
    "make_K",
    "make_M",
    "make_YUV",
    "make_contiguity",
    "make_hat_uq",
    "make_sheun_basis",
    "make_shift_basic",
]


def _q() -> RatF:
    return sym("s") ** 2


def _z() -> RatF:
    return sym("z")


def _R(v) -> RatF:
    return v if isinstance(v, RatF) else RatF.const(v)


@dataclass(frozen=True)
class AWParams:
    a: RatF = field(default_factory=lambda: sym("a"))
    b: RatF = field(default_factory=lambda: sym("b"))
    c: RatF = field(default_factory=lambda: sym("c"))
    d: RatF = field(default_factory=lambda: sym("d"))
    r: int = 1

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _R(getattr(self, name)))
        if self.r < 1:
            raise ValueError("base exponent r must be positive")

    @property
    def e1(self) -> RatF:
        return self.a + self.b + self.c + self.d

    @property
    def e2(self) -> RatF:
        a, b, c, d = self.a, self.b, self.c, self.d
        return a * b + a * c + a * d + b * c + b * d + c * d

    @property
    def e3(self) -> RatF:
        a, b, c, d = self.a, self.b, self.c, self.d
        return a * b * c + a * b * d + a * c * d + b * c * d

    @property
    def e4(self) -> RatF:
        return self.a * self.b * self.c * self.d

    def with_base(self, r: int) -> "AWParams":
        return replace(self, r=r)

    def scaled(self, ka: int, kb: int, kc: int, kd: int) -> "AWParams":
        """Parameters (a q^ka, b q^kb, c q^kc, d q^kd)."""
        q = _q()
        return replace(self, a=self.a * q**ka, b=self.b * q**kb, c=self.c * q**kc, d=self.d * q**kd)


@dataclass(frozen=True)
class CombCoeffs:
    """Coefficients of ``alpha Y + beta U + gamma V``."""

    alpha: RatF
    beta: RatF
    gamma: RatF = field(default_factory=lambda: RatF.const(1))

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, _R(getattr(self, name)))

    # presets ------------------------------------------------------------

    @classmethod
    def symbolic(cls, names=("alpha", "beta", "gamma")) -> "CombCoeffs":
        return cls(*(sym(n) for n in names))

    @classmethod
    def from_ab(cls, p: AWParams) -> "CombCoeffs":
        return cls(p.a + p.b, -p.a * p.b)

    @classmethod
    def from_cd(cls, p: AWParams) -> "CombCoeffs":
        q = _q()
        return cls((p.c + p.d) / q, -p.c * p.d / q**2)

    @classmethod
    def from_ab_bar(cls, p: AWParams) -> "CombCoeffs":
        q = _q()
        return cls((p.a + p.b) / q, -p.a * p.b / q**2)

    @classmethod
    def from_cd_bar(cls, p: AWParams) -> "CombCoeffs":
        return cls(p.c + p.d, -p.c * p.d)


# ---------------------------------------------------------------------------
# elementary operators


def make_shift_basic() -> dict[str, QOp]:
    return {"Tplus": QOp({1: 1}), "Tminus": QOp({-1: 1}), "I": identity()}


@lru_cache(maxsize=None)
def make_YUV() -> dict[str, QOp]:
    z = _z()
    w = 1 / (z - 1 / z)
    return {
        "Y": QOp({1: w, -1: -w}),
        "U": QOp({1: w * z, -1: -w / z}),
        "V": QOp({-1: w * z, 1: -w / z}),
    }


def make_hat_uq(t: RatF | None = None) -> dict[str, QOp]:
    t = sym("t") if t is None else _R(t)
    q, z = _q(), _z()
    qq = q - 1 / q
    return {
        "Ahat": QOp({1: 1 / t}),
        "Bhat": QOp({-1: z * t**2 / (2 * qq), 1: -z / (t**2 * 2 * qq)}),
        "Chat": QOp({1: 2 / (qq * z), -1: -2 / (qq * z)}),
        "Dhat": QOp({-1: t}),
    }


def make_ABCD(t: RatF | None = None) -> dict[str, QOp]:
    t = sym("t") if t is None else _R(t)
    q, z = _q(), _z()
    qq = q - 1 / q
    yuv = make_YUV()
    pre = 1 / (2 * qq * (z - 1 / z))
    t2 = t**2
    # q^{2nu}(z^2 T- - z^-2 T+) - q^{-2nu}(z^2 T+ - z^-2 T-) - (q+1/q)(T+ - T-)
    plus = -t2 / z**2 - z**2 / t2 - (q + 1 / q)
    minus = t2 * z**2 + 1 / (t2 * z**2) + (q + 1 / q)
    return {
        "A": yuv["U"].scale(1 / t),
        "B": QOp({1: pre * plus, -1: pre * minus}),
        "C": yuv["Y"].scale(2 / qq),
        "D": yuv["V"].scale(t),
    }


def make_M(c: CombCoeffs) -> QOp:
    yuv = make_YUV()
    return yuv["Y"].scale(c.alpha) + yuv["U"].scale(c.beta) + yuv["V"].scale(c.gamma)


def aw_coefficient(p: AWParams) -> RatF:
    """A^(r)(z) = (1-az)(1-bz)(1-cz)(1-dz) / ((1-z^2)(1-q^r z^2))."""
    z = _z()
    num = (1 - p.a * z) * (1 - p.b * z) * (1 - p.c * z) * (1 - p.d * z)
    return num / ((1 - z**2) * (1 - _q() ** p.r * z**2))


def make_AW(p: AWParams) -> QOp:
    A = aw_coefficient(p)
    Ainv = A.invert_var("z")
    return QOp({p.r: A, 0: -(A + Ainv), -p.r: Ainv})


@lru_cache(maxsize=None)
def make_sheun_basis() -> dict[str, QOp]:
    q, z = _q(), _z()
    pre = 1 / ((q - 1 / q) * (z - 1 / z))
    x = z + 1 / z
    diff = QOp({1: pre, -1: -pre})
    m1 = QOp({-1: pre * (q * z + 1 / (q * z)), 1: -pre * (z / q + q / z)})
    r2 = QOp(
        {
            -1: (q**2 * pre * x * z - z / (q - 1 / q)),
            1: (-q**2 * pre * x / z - 1 / ((q - 1 / q) * z)),
        }
    )
    return {
        "L": diff,
        "M1": m1,
        "M2": diff.scale(x),
        "R1": m1.scale(x),
        "R2": r2,
    }


def make_contiguity(p: AWParams | None = None) -> dict[str, QOp]:
    """mu^(a,b,c,d), its partner mu^(cq,dq,a/q,b/q), tau and tau* (base q^2)."""
    p = p or AWParams()
    q, z = _q(), _z()
    w = 1 / (z - 1 / z)

    def mu(a, b):
        return QOp(
            {
                1: -w / z * (1 - a * z / q) * (1 - b * z / q),
                -1: w * z * (1 - a / (q * z)) * (1 - b / (q * z)),
            }
        )

    quartic = (1 - p.a * z) * (1 - p.b * z) * (1 - p.c * z) * (1 - p.d * z)
    quartic_inv = quartic.invert_var("z")
    tau_star = QOp({1: w / q * quartic / z**2, -1: -w / q * quartic_inv * z**2})
    return {
        "mu": mu(p.a, p.b),
        "mu_adj": mu(p.c * q, p.d * q),
        "tau": make_YUV()["Y"],
        "tau_star": tau_star,
    }


def make_K(p: AWParams | None = None, variant: str = "generic_AW") -> dict[str, QOp]:
    p = p or AWParams()
    q, z = _q(), _z()
    if variant == "generic_AW":
        K0 = make_AW(p.with_base(1)) + identity().scale(1 + p.e4 / q)
    elif variant == "special_M":
        K0 = make_M(CombCoeffs.from_ab(p))
    else:
        raise ValueError(f"unknown K variant {variant!r}")
    K1 = mult(z + 1 / z)
    return {"K0": K0, "K1": K1, "K2": q_commutator(K0, K1)}


# ---------------------------------------------------------------------------
# name registry (generic symbolic parameters)


def _generic() -> dict[str, QOp]:
    p = AWParams()
    ops: dict[str, QOp] = {}
    ops.update(make_shift_basic())
    ops.update(make_YUV())
    ops.update(make_hat_uq())
    ops.update(make_ABCD())
    ops.update(make_sheun_basis())
    ops.update(make_contiguity(p))
    ops["x"] = mult(_z() + 1 / _z())
    ops["AW1"] = make_AW(p.with_base(1))
    ops["AW2"] = make_AW(p.with_base(2))
    ops["M_ab"] = make_M(CombCoeffs.from_ab(p))
    ops["M_cd"] = make_M(CombCoeffs.from_cd(p))
    ops["M_ab_bar"] = make_M(CombCoeffs.from_ab_bar(p))
    ops["M_cd_bar"] = make_M(CombCoeffs.from_cd_bar(p))
    ops["M"] = make_M(CombCoeffs.symbolic())
    for k, v in make_K(p, "special_M").items():
        ops[k] = v
    return ops


CATALOG = (
    "Tplus Tminus I Y U V Ahat Bhat Chat Dhat A B C D L M1 M2 R1 R2 "
    "mu mu_adj tau tau_star x AW1 AW2 M M_ab M_cd M_ab_bar M_cd_bar K0 K1 K2"
).split()


@lru_cache(maxsize=None)
def _generic_cached() -> dict[str, QOp]:
    return _generic()


def by_name(name: str) -> QOp:
    ops = _generic_cached()
    if name not in ops:
        raise KeyError(f"unknown catalog operator {name!r}")
    return ops[name]
