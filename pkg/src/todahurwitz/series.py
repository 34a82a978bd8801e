"""Truncated Taylor expansions of symmetric dispersionless Toda solutions and
exact checks of the identities they satisfy.

A :class:`TruncatedSeries` maps monomials ``t_Delta * tbar_Delta_bar`` (keyed
by the two sorted part tuples) to coefficients in a family's background
algebra. Only monomials with ``|Delta| <= bound`` and ``|Delta_bar| <= bound``
are stored; that set of discarded monomials is an ideal, so products and the
weight-preserving operators used below stay exact up to the bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from .algebra import Expr, HomogeneousFamily, HurwitzFamily
from .coefficients import nonzero_n_coeffs
from .partitions import Partition, enumerate_partitions, sigma

__all__ = [
    "TruncatedSeries",
    "IdentityResult",
    "CheckReport",
    "expand_tau",
    "check_mixed_derivatives",
    "check_toda_equation",
    "check_cut_and_join",
    "check_homogeneity",
    "run_all_checks",
    "format_monomial",
    "format_expr",
    "series_to_json",
]

Mono = tuple[tuple[int, ...], tuple[int, ...]]
VACUUM: Mono = ((), ())


def _insert(parts: tuple[int, ...], k: int) -> tuple[int, ...]:
    return tuple(sorted(parts + (k,), reverse=True))


def _remove_one(parts: tuple[int, ...], k: int) -> tuple[int, ...]:
    i = parts.index(k)
    return parts[:i] + parts[i + 1 :]


class TruncatedSeries:
    """Immutable truncated series in ``t``, ``tbar`` over a background algebra."""

    __slots__ = ("family", "bound", "coeffs")

    def __init__(self, family, bound: int, coeffs: dict[Mono, Expr] | None = None):
        self.family = family
        self.bound = bound
        self.coeffs: dict[Mono, Expr] = {}
        for mono, c in (coeffs or {}).items():
            if c and self._fits(mono):
                self.coeffs[mono] = c

    def _fits(self, mono: Mono) -> bool:
        return sum(mono[0]) <= self.bound and sum(mono[1]) <= self.bound

    def _new(self, coeffs: dict[Mono, Expr], bound: int | None = None) -> TruncatedSeries:
        return TruncatedSeries(self.family, self.bound if bound is None else bound, coeffs)

    def coefficient(self, delta, delta_bar) -> Expr:
        key = (tuple(sorted(delta, reverse=True)), tuple(sorted(delta_bar, reverse=True)))
        return self.coeffs.get(key, Expr())

    def monomials(self) -> list[Mono]:
        return sorted(self.coeffs, key=_mono_order)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedSeries) and self.coeffs == other.coeffs

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            out[mono] = out.get(mono, Expr()) + c
        return self._new(out, min(self.bound, other.bound))

    def __neg__(self) -> TruncatedSeries:
        return self._new({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def scale(self, factor) -> TruncatedSeries:
        """Multiply every coefficient by a rational or an :class:`Expr`."""
        return self._new({m: c * factor for m, c in self.coeffs.items()})

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        bound = min(self.bound, other.bound)
        out: dict[Mono, Expr] = {}
        for (a1, b1), c1 in self.coeffs.items():
            w1, v1 = sum(a1), sum(b1)
            for (a2, b2), c2 in other.coeffs.items():
                if w1 + sum(a2) > bound or v1 + sum(b2) > bound:
                    continue
                mono = (tuple(sorted(a1 + a2, reverse=True)), tuple(sorted(b1 + b2, reverse=True)))
                out[mono] = out.get(mono, Expr()) + c1 * c2
        return self._new(out, bound)

    def map_coeffs(self, fn: Callable[[Expr], Expr]) -> TruncatedSeries:
        return self._new({m: fn(c) for m, c in self.coeffs.items()})

    def d(self, k: int) -> TruncatedSeries:
        """``d / d t_k``."""
        out: dict[Mono, Expr] = {}
        for (a, b), c in self.coeffs.items():
            mult = a.count(k)
            if mult:
                mono = (_remove_one(a, k), b)
                out[mono] = out.get(mono, Expr()) + c * mult
        return self._new(out)

    def dbar(self, k: int) -> TruncatedSeries:
        """``d / d tbar_k``."""
        out: dict[Mono, Expr] = {}
        for (a, b), c in self.coeffs.items():
            mult = b.count(k)
            if mult:
                mono = (a, _remove_one(b, k))
                out[mono] = out.get(mono, Expr()) + c * mult
        return self._new(out)

    def times_t(self, k: int) -> TruncatedSeries:
        return self._new({(_insert(a, k), b): c for (a, b), c in self.coeffs.items()})

    def times_tbar(self, k: int) -> TruncatedSeries:
        return self._new({(a, _insert(b, k)): c for (a, b), c in self.coeffs.items()})

    def restrict(self, bound: int) -> TruncatedSeries:
        return self._new(self.coeffs, min(bound, self.bound))

    def constant(self) -> Expr:
        return self.coeffs.get(VACUUM, Expr())

    def exp_nilpotent(self) -> TruncatedSeries:
        """``exp(X)`` for ``X`` with zero constant term, summed until ``X^n`` truncates away."""
        if self.constant():
            raise ValueError("exp_nilpotent needs a series without constant term")
        one = self._new({VACUUM: self.family.one()})
        result = one
        power = one
        n = 0
        while True:
            n += 1
            power = power * self
            if not power.coeffs:
                return result
            result = result + power.scale(Fraction(1, factorial(n)))

    @classmethod
    def constant_series(cls, family, bound: int, value: Expr) -> TruncatedSeries:
        return cls(family, bound, {VACUUM: value})


def _mono_order(mono: Mono):
    a, b = mono
    return (sum(a) + sum(b), sum(a), tuple(-x for x in a), tuple(-x for x in b))


def expand_tau(family, bound: int) -> TruncatedSeries:
    """Taylor coefficients of the symmetric solution with background ``family``.

    The coefficient of ``t_Delta tbar_Delta_bar`` is
    ``sum_M N(M) * prod_j d_0^{r_j}(f^{s_j})``; the vacuum term is the family's
    ``F(t_0)``.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    coeffs: dict[Mono, Expr] = {VACUUM: family.vacuum()}
    for d in range(1, bound + 1):
        parts = enumerate_partitions(d)
        for delta in parts:
            for delta_bar in parts:
                total = Expr()
                for matrix, n_value in nonzero_n_coeffs(delta, delta_bar):
                    term = family.one() * n_value
                    for s, r in zip(matrix.s, matrix.r):
                        term = term * family.f_power_derivative(s, r)
                    total = total + term
                if total:
                    coeffs[(delta.parts, delta_bar.parts)] = total
    return TruncatedSeries(family, bound, coeffs)


# --- reports --------------------------------------------------------------


def format_monomial(mono: Mono) -> str:
    a, b = mono
    return "([" + ",".join(map(str, a)) + "]|[" + ",".join(map(str, b)) + "])"


def format_expr(expr: Expr, family) -> str:
    if not expr:
        return "0"
    pieces = []
    for key, c in expr.items():
        factors = [] if c == 1 else [str(c)]
        if isinstance(family, HurwitzFamily):
            q, e, b, p, L = key
            if q:
                factors.append("Q" if q == 1 else f"Q^{q}")
            if e:
                factors.append(f"exp({'' if e == 1 else e}beta*t0)")
            if b:
                factors.append("beta" if b == 1 else f"beta^{b}")
            if p:
                factors.append("t0" if p == 1 else f"t0^{p}")
            if L:
                factors.append("log(Q)" if L == 1 else f"log(Q)^{L}")
        else:
            q, L = key
            if q:
                factors.append(f"u^({q})")
            if L:
                factors.append("log(u)" if L == 1 else f"log(u)^{L}")
        pieces.append("*".join(factors) or "1")
    return " + ".join(pieces)


def _expr_json(expr: Expr, family) -> list[dict]:
    out = []
    for key, c in expr.items():
        entry = {name: str(v) if isinstance(v, Fraction) else v for name, v in zip(family.key_names, key)}
        entry["rational"] = f"{c.numerator}/{c.denominator}"
        out.append(entry)
    return out


def series_to_json(series: TruncatedSeries) -> dict:
    fam = series.family
    return {
        "family": fam.name,
        "params": fam.params(),
        "bound": series.bound,
        "terms": [
            {"delta": list(m[0]), "delta_bar": list(m[1]), "coeff": _expr_json(series.coeffs[m], fam)}
            for m in series.monomials()
        ],
    }


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    monomial: str
    passed: bool
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "monomial": self.monomial,
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass
class CheckReport:
    name: str
    family: str
    bound: int
    results: list[IdentityResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> IdentityResult | None:
        return next((r for r in self.results if not r.passed), None)

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "family": self.family,
            "bound": self.bound,
            "passed": self.passed,
            "n_identities": len(self.results),
            "results": [r.to_json() for r in self.results],
        }


def _compare(report: CheckReport, identity: str, lhs: TruncatedSeries, rhs: TruncatedSeries, bound: int) -> None:
    family = lhs.family
    monos = set(lhs.coeffs) | set(rhs.coeffs)
    monos = [m for m in monos if sum(m[0]) <= bound and sum(m[1]) <= bound]
    for mono in sorted(monos, key=_mono_order):
        left = lhs.coeffs.get(mono, Expr())
        right = rhs.coeffs.get(mono, Expr())
        report.results.append(
            IdentityResult(identity, format_monomial(mono), left == right, format_expr(left, family), format_expr(right, family))
        )


def _record(report: CheckReport, identity: str, mono: str, left: Expr, right: Expr, family) -> None:
    report.results.append(
        IdentityResult(identity, mono, left == right, format_expr(left, family), format_expr(right, family))
    )


def _f_power(family, i: int) -> Expr:
    return family.f_power_derivative(i, 0)


def check_mixed_derivatives(series: TruncatedSeries, family) -> CheckReport:
    """Single-row coefficients against ``i f^i`` and ``(prod parts / sigma) d_0^{k-1}(f^i)``.

    Expected values are built from ``f`` with the algebra's own ``d_0``, not
    from the universal coefficients.
    """
    report = CheckReport("mixed_derivatives", family.name, series.bound)
    D = series.bound
    for i in range(1, D + 1):
        for j in range(1, D + 1):
            expected = _f_power(family, i) * i if i == j else Expr()
            _record(report, "d_i dbar_j F = delta_ij i f^i", format_monomial(((i,), (j,))),
                    series.coefficient((i,), (j,)), expected, family)
    for i in range(1, D + 1):
        for w in range(1, D + 1):
            for other in enumerate_partitions(w):
                if other.length < 2:
                    continue
                if w == i:
                    x = _f_power(family, i)
                    for _ in range(other.length - 1):
                        x = family.d0(x)
                    prod_parts = 1
                    for p in other.parts:
                        prod_parts *= p
                    expected = x * Fraction(prod_parts, sigma(other))
                else:
                    expected = Expr()
                _record(report, "d_i dbar_{j1..jk} F = j1..jk d0^{k-1} f^i", format_monomial(((i,), other.parts)),
                        series.coefficient((i,), other.parts), expected, family)
                _record(report, "dbar_i d_{j1..jk} F = j1..jk d0^{k-1} f^i", format_monomial((other.parts, (i,))),
                        series.coefficient(other.parts, (i,)), expected, family)
    return report


def check_toda_equation(series: TruncatedSeries, family, depth: int) -> CheckReport:
    """Leading extraction of the mixed Hirota equation: ``d_1 dbar_1 F = exp(d_0^2 F)``.

    Uses ``exp(d_0^2 F) = f * exp(d_0^2 (F - F_vac))``; the vacuum factor is
    justified by the separate identity ``d_0 f = f * d_0^3 F_vac``. Needs the
    expansion to weight ``depth + 1``; re-expands if ``series`` is too short.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if series.bound < depth + 1:
        series = expand_tau(family, depth + 1)
    report = CheckReport("toda_equation", family.name, depth)
    vac = series.constant()
    f = family.f()
    f3 = family.d0(family.d0(family.d0(vac)))
    _record(report, "d0 f = f * d0^3 F_vac", format_monomial(VACUUM), family.d0(f), f * f3, family)

    lhs = series.dbar(1).d(1).restrict(depth)
    rest = series.restrict(depth)
    rest = TruncatedSeries(family, depth, {m: c for m, c in rest.coeffs.items() if m != VACUUM})
    x = rest.map_coeffs(lambda c: family.d0(family.d0(c)))
    rhs = x.exp_nilpotent().scale(f)
    _compare(report, "d_1 dbar_1 F = exp(d0^2 F)", lhs, rhs, depth)
    return report


def _euler_weighted(series: TruncatedSeries, weight: Callable[[int], Fraction], barred: bool) -> TruncatedSeries:
    """``sum_k weight(k) * t_k d_k F`` (or the barred version)."""
    out = TruncatedSeries(series.family, series.bound, {})
    for k in range(1, series.bound + 1):
        w = weight(k)
        if not w:
            continue
        term = series.dbar(k).times_tbar(k) if barred else series.d(k).times_t(k)
        out = out + term.scale(w)
    return out


def check_cut_and_join(series: TruncatedSeries) -> CheckReport:
    """Both relations for ``d F / d log Q`` and ``d F / d beta`` (Hurwitz background)."""
    family = series.family
    if not isinstance(family, HurwitzFamily):
        raise ValueError("cut-and-join relations hold for the Hurwitz background only")
    D = series.bound
    report = CheckReport("cut_and_join", family.name, D)
    t0 = family.t0()
    sum_kt = _euler_weighted(series, lambda k: Fraction(k), barred=False)

    lhs1 = series.map_coeffs(family.d_logq)
    rhs1 = TruncatedSeries.constant_series(family, D, t0 * t0 * Fraction(1, 2)) + sum_kt
    _compare(report, "dF/dlogQ = t0^2/2 + sum k t_k d_k F", lhs1, rhs1, D)

    lhs2 = series.map_coeffs(family.d_beta)
    rhs2 = TruncatedSeries.constant_series(family, D, t0 * t0 * t0 * Fraction(1, 6)) + sum_kt.scale(t0)
    first = {k: series.d(k) for k in range(1, D + 1)}
    cut = TruncatedSeries(family, D, {})
    for k in range(1, D + 1):
        for l in range(1, D + 1 - k):  # noqa: E741
            cut = cut + series.d(k + l).times_t(k).times_t(l).scale(k * l)
            cut = cut + (first[k] * first[l]).times_t(k + l).scale(k + l)
    rhs2 = rhs2 + cut.scale(Fraction(1, 2))
    _compare(report, "dF/dbeta = t0^3/6 + t0 sum k t_k d_k F + cut-and-join", lhs2, rhs2, D)
    return report


def check_homogeneity(series: TruncatedSeries, family) -> CheckReport:
    """Homogeneity (Hurwitz) or quasi-homogeneity (homogeneous density)."""
    D = series.bound
    report = CheckReport("homogeneity", family.name, D)
    t0 = family.t0()
    t0_d0 = series.map_coeffs(lambda c: t0 * family.d0(c))
    if isinstance(family, HurwitzFamily):
        lhs = series.scale(2)
        tau_dtau = series.map_coeffs(lambda c: -(family.beta() * family.d_beta(c)))
        euler = _euler_weighted(series, lambda k: Fraction(1), False) + _euler_weighted(series, lambda k: Fraction(1), True)
        rhs = tau_dtau + t0_d0 + euler
        _compare(report, "2F = tau dF/dtau + t0 d0 F + sum (t_k d_k + tb_k db_k) F", lhs, rhs, D)
    elif isinstance(family, HomogeneousFamily):
        a = family.alpha
        lhs = series.scale(4 * a)
        weight = lambda k: 2 * a - k  # noqa: E731
        euler = _euler_weighted(series, weight, False) + _euler_weighted(series, weight, True)
        rhs = (
            TruncatedSeries.constant_series(family, D, -(t0 * t0))
            + t0_d0.scale(2 * a)
            + euler
        )
        _compare(report, "4aF = -t0^2 + 2a t0 d0 F + sum (2a-k)(t_k d_k + tb_k db_k) F", lhs, rhs, D)
    else:
        raise ValueError(f"unsupported family {family!r}")
    return report


def run_all_checks(family, bound: int, toda_depth: int | None = None) -> list[CheckReport]:
    """Expand once and run every check applicable to ``family``."""
    series = expand_tau(family, bound)
    if toda_depth is None:
        toda_depth = max(bound - 1, 0)
    reports = [check_mixed_derivatives(series, family)]
    if isinstance(family, HurwitzFamily):
        reports.append(check_toda_equation(series, family, toda_depth))
        reports.append(check_cut_and_join(series))
    reports.append(check_homogeneity(series, family))
    return reports
