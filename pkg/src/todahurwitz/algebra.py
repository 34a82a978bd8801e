"""Exact coefficient algebras for concrete backgrounds ``f(t_0)``.

An :class:`Expr` is a finite rational combination of monomials, each keyed
by a tuple of exponents; multiplying monomials adds exponent tuples. The
meaning of the slots is fixed by the family:

``HurwitzFamily`` (``f = Q e^{beta t_0}``), key ``(q, e, b, p, L)``::

    Q^q * exp(e * beta * t_0) * beta^b * t_0^p * (log Q)^L

``HomogeneousFamily`` (``f = (alpha t_0)^{1/alpha}``), key ``(q, L)`` with
``u = alpha * t_0`` and rational ``q``::

    u^q * (log u)^L

Derivatives act termwise and exactly; no value of ``t_0`` is ever substituted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

__all__ = ["Expr", "HurwitzFamily", "HomogeneousFamily", "family_from_name"]


class Expr:
    """Immutable sparse polynomial-like element with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in dict(terms).items():
                c = Fraction(c)
                if c:
                    clean[key] = c
        self.terms: dict[tuple, Fraction] = clean

    @classmethod
    def _raw(cls, terms: dict) -> Expr:
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, key: tuple, coeff=1) -> Expr:
        return cls({key: coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Expr):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: Expr) -> Expr:
        if not other.terms:
            return self
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Expr._raw(out)

    def __neg__(self) -> Expr:
        return Expr._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Expr) -> Expr:
        return self + (-other)

    def __mul__(self, other) -> Expr:
        if not isinstance(other, Expr):
            c = Fraction(other)
            if not c:
                return Expr()
            return Expr._raw({k: v * c for k, v in self.terms.items()})
        out: dict[tuple, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                v = out.get(key, 0) + c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return Expr._raw(out)

    __rmul__ = __mul__

    def map_terms(self, fn: Callable[[tuple, Fraction], Iterable[tuple[tuple, Fraction]]]) -> Expr:
        """Apply a linear map defined on monomials."""
        out: dict[tuple, Fraction] = {}
        for key, c in self.terms.items():
            for k2, c2 in fn(key, c):
                v = out.get(k2, 0) + c2
                if v:
                    out[k2] = v
                else:
                    out.pop(k2, None)
        return Expr._raw(out)

    def items(self) -> Iterator[tuple[tuple, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __repr__(self) -> str:
        return f"Expr({dict(sorted(self.terms.items()))})"


@dataclass(frozen=True)
class HurwitzFamily:
    """``f(t_0) = Q exp(beta t_0)`` with ``Q`` and ``beta`` formal symbols."""

    name = "hurwitz"
    key_names = ("q_pow", "exp_coeff_d", "beta_pow", "t0_pow", "logq_pow")

    @staticmethod
    def zero() -> Expr:
        return Expr()

    @staticmethod
    def one() -> Expr:
        return Expr.monomial((0, 0, 0, 0, 0))

    @staticmethod
    def t0() -> Expr:
        return Expr.monomial((0, 0, 0, 1, 0))

    @staticmethod
    def beta() -> Expr:
        return Expr.monomial((0, 0, 1, 0, 0))

    def f(self) -> Expr:
        return Expr.monomial((1, 1, 0, 0, 0))

    def f_power_derivative(self, s: int, r: int) -> Expr:
        """``d_0^r (f^s) = (s beta)^r Q^s exp(s beta t_0)``."""
        return Expr.monomial((s, s, r, 0, 0), Fraction(s) ** r)

    def vacuum(self) -> Expr:
        """``beta t_0^3 / 6 + t_0^2 log(Q) / 2``."""
        return Expr({(0, 0, 1, 3, 0): Fraction(1, 6), (0, 0, 0, 2, 1): Fraction(1, 2)})

    @staticmethod
    def d0(x: Expr) -> Expr:
        def rule(key, c):
            q, e, b, p, L = key
            if e:
                yield (q, e, b + 1, p, L), c * e
            if p:
                yield (q, e, b, p - 1, L), c * p

        return x.map_terms(rule)

    @staticmethod
    def d_beta(x: Expr) -> Expr:
        def rule(key, c):
            q, e, b, p, L = key
            if b:
                yield (q, e, b - 1, p, L), c * b
            if e:
                yield (q, e, b, p + 1, L), c * e

        return x.map_terms(rule)

    @staticmethod
    def d_logq(x: Expr) -> Expr:
        """Derivative in ``log Q`` at fixed ``beta`` and ``t_0``."""

        def rule(key, c):
            q, e, b, p, L = key
            if q:
                yield key, c * q
            if L:
                yield (q, e, b, p, L - 1), c * L

        return x.map_terms(rule)

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class HomogeneousFamily:
    """``f(t_0) = (alpha t_0)^{1/alpha}`` for a positive rational ``alpha``."""

    alpha: Fraction

    name = "homogeneous"
    key_names = ("u_pow", "logu_pow")

    def __post_init__(self):
        a = Fraction(self.alpha)
        if a <= 0:
            raise ValueError("alpha must be positive")
        object.__setattr__(self, "alpha", a)

    @staticmethod
    def zero() -> Expr:
        return Expr()

    @staticmethod
    def one() -> Expr:
        return Expr.monomial((Fraction(0), 0))

    def t0(self) -> Expr:
        return Expr.monomial((Fraction(1), 0), 1 / self.alpha)

    def f(self) -> Expr:
        return Expr.monomial((1 / self.alpha, 0))

    def f_power_derivative(self, s: int, r: int) -> Expr:
        """Falling factorial: ``(s/alpha)_r * alpha^r * u^(s/alpha - r)``."""
        a = self.alpha
        q = Fraction(s) / a
        coeff = Fraction(1)
        for j in range(r):
            coeff *= (q - j) * a
        return Expr.monomial((q - r, 0), coeff)

    def vacuum(self) -> Expr:
        """``t_0^2 log(alpha t_0) / (2 alpha) - 3 t_0^2 / (4 alpha)`` in terms of ``u``."""
        a3 = self.alpha**3
        return Expr({(Fraction(2), 1): 1 / (2 * a3), (Fraction(2), 0): Fraction(-3) / (4 * a3)})

    def d0(self, x: Expr) -> Expr:
        a = self.alpha

        def rule(key, c):
            q, L = key
            if q:
                yield (q - 1, L), c * q * a
            if L:
                yield (q - 1, L - 1), c * L * a

        return x.map_terms(rule)

    def params(self) -> dict:
        return {"alpha": str(self.alpha)}


def family_from_name(name: str, alpha=None):
    if name == "hurwitz":
        return HurwitzFamily()
    if name == "homogeneous":
        if alpha is None:
            raise ValueError("homogeneous family needs alpha")
        return HomogeneousFamily(Fraction(alpha))
    raise ValueError(f"unknown family {name!r}")
