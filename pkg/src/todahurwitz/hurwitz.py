"""Genus-0 double Hurwitz numbers from the universal coefficients, closed-form
references, and table generation.

For profiles ``Delta``, ``Delta_bar`` of weight ``d`` with ``l = len(Delta) +
len(Delta_bar) - 2`` simple branch points::

    H_0 = l! / (rho(Delta) rho(Delta_bar)) * sum_M  s_1^r_1 ... s_m^r_m * N(M)

where ``M = (s | r)`` runs over ordered matrices with ``sum s = d`` and
``sum r = l``. The ``r``-row constraint is ``l`` itself, not ``l + m``; this
is what makes ``N`` consistent with its own derivation (see
:mod:`todahurwitz.coefficients`).
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

from .coefficients import n_coeff, n_tilde
from .errors import BudgetExceeded, DomainError
from .oracle import DEFAULT_BUDGET, oracle_count
from .partitions import Partition, enumerate_coeff_matrices, enumerate_partitions, rho, sigma

__all__ = [
    "HurwitzRecord",
    "theorem_sum",
    "hurwitz_genus0",
    "ordered_hurwitz_genus0",
    "closed_form_values",
    "hurwitz_closed_form",
    "single_row_formula",
    "two_row_formula",
    "hurwitz_simple_formula",
    "evaluate_pair",
    "hurwitz_table",
    "record_to_json",
    "records_to_csv",
    "records_to_pretty",
    "format_fraction",
]


def _check_pair(delta, delta_bar) -> tuple[Partition, Partition]:
    delta = delta if isinstance(delta, Partition) else Partition(tuple(delta))
    delta_bar = delta_bar if isinstance(delta_bar, Partition) else Partition(tuple(delta_bar))
    if delta.weight != delta_bar.weight:
        raise DomainError(
            f"weights differ: |{delta}| = {delta.weight}, |{delta_bar}| = {delta_bar.weight}"
        )
    if delta.weight == 0:
        raise DomainError("Hurwitz numbers need non-empty profiles")
    return delta, delta_bar


def theorem_sum(delta, delta_bar) -> Fraction:
    """The ``N``-weighted sum ``sum_M s^r N(M)`` before the ``l!/(rho rho_bar)`` factor."""
    delta, delta_bar = _check_pair(delta, delta_bar)
    length = delta.length + delta_bar.length - 2
    total = Fraction(0)
    for matrix in enumerate_coeff_matrices(delta.weight, length):
        value = n_coeff(delta, delta_bar, matrix)
        if value:
            total += prod(s**r for s, r in zip(matrix.s, matrix.r)) * value
    return total


def ordered_hurwitz_genus0(i_list, ibar_list) -> Fraction:
    """Same as :func:`hurwitz_genus0` but with the index lists fed to ``N~`` in
    the given order instead of the canonical non-increasing one."""
    delta, delta_bar = _check_pair(i_list, ibar_list)
    length = delta.length + delta_bar.length - 2
    total = Fraction(0)
    for matrix in enumerate_coeff_matrices(delta.weight, length):
        value = n_tilde(tuple(i_list), tuple(ibar_list), matrix)
        if value:
            total += prod(s**r for s, r in zip(matrix.s, matrix.r)) * value
    scale = Fraction(factorial(length), rho(delta) * rho(delta_bar) * sigma(delta) * sigma(delta_bar))
    return scale * total


def hurwitz_genus0(delta, delta_bar) -> Fraction:
    """Genus-0 double Hurwitz number via the universal coefficients.

    >>> hurwitz_genus0(Partition((2, 1)), Partition((2, 1)))
    Fraction(4, 1)
    """
    delta, delta_bar = _check_pair(delta, delta_bar)
    length = delta.length + delta_bar.length - 2
    return Fraction(factorial(length), rho(delta) * rho(delta_bar)) * theorem_sum(delta, delta_bar)


# --- closed forms ---------------------------------------------------------


def single_row_formula(delta: Partition, n: int) -> Fraction:
    """``H_0(Delta | [n]) = (len(Delta) - 1)! / sigma(Delta) * n^(len(Delta) - 2)``."""
    ell = delta.length
    return Fraction(factorial(ell - 1), sigma(delta)) * Fraction(n) ** (ell - 2)


def two_row_formula(delta: Partition, delta_bar: Partition) -> Fraction:
    """``2 (d - min) / ((1 + [i1 = i2]) (1 + [j1 = j2]))`` for two-row profiles."""
    d = delta.weight
    low = min(delta.parts + delta_bar.parts)
    return Fraction(2 * (d - low), sigma(delta) * sigma(delta_bar))


def hurwitz_simple_formula(other: Partition) -> Fraction:
    """Hurwitz's count with ``[1^d]`` or ``[2, 1^(d-2)]`` opposite ``other = [k_1..k_n]``."""
    d, n = other.weight, other.length
    value = Fraction(factorial(d + n - 2), sigma(other)) * Fraction(d) ** (n - 3)
    for k in other.parts:
        value *= Fraction(k**k, factorial(k))
    return value


def _is_simple_profile(p: Partition) -> bool:
    d = p.weight
    return p.parts == (1,) * d or (d >= 2 and p.parts == (2,) + (1,) * (d - 2))


def closed_form_values(delta, delta_bar) -> dict[str, Fraction]:
    """Every applicable closed form, keyed by name, in dispatch order."""
    delta, delta_bar = _check_pair(delta, delta_bar)
    out: dict[str, Fraction] = {}
    if delta_bar.length == 1:
        out["single_row"] = single_row_formula(delta, delta_bar.weight)
    elif delta.length == 1:
        out["single_row"] = single_row_formula(delta_bar, delta.weight)
    if delta.length == 2 and delta_bar.length == 2:
        out["two_rows"] = two_row_formula(delta, delta_bar)
    if _is_simple_profile(delta):
        out["hurwitz"] = hurwitz_simple_formula(delta_bar)
    elif _is_simple_profile(delta_bar):
        out["hurwitz"] = hurwitz_simple_formula(delta)
    return out


def hurwitz_closed_form(delta, delta_bar) -> Fraction | None:
    """First applicable closed form (single row, two rows, Hurwitz), or ``None``.

    Raises ``ArithmeticError`` if two applicable formulas disagree.
    """
    values = closed_form_values(delta, delta_bar)
    if not values:
        return None
    distinct = set(values.values())
    if len(distinct) > 1:
        raise ArithmeticError(f"closed forms disagree for ({delta}|{delta_bar}): {values}")
    return next(iter(values.values()))


# --- records and tables ---------------------------------------------------


@dataclass(frozen=True)
class HurwitzRecord:
    delta: Partition
    delta_bar: Partition
    d: int
    l: int  # noqa: E741
    value: Fraction
    method: str = "theorem31"
    closed_form: Fraction | None = None
    oracle: Fraction | None = None
    oracle_count: int | None = None
    oracle_status: str | None = None  # "ok" | "budget_exceeded" | None when not requested


def evaluate_pair(delta, delta_bar, *, oracle: bool = False, budget: int = DEFAULT_BUDGET) -> HurwitzRecord:
    delta, delta_bar = _check_pair(delta, delta_bar)
    value = hurwitz_genus0(delta, delta_bar)
    closed = hurwitz_closed_form(delta, delta_bar)
    o_value = o_count = status = None
    if oracle:
        try:
            res = oracle_count(delta, delta_bar, budget)
        except BudgetExceeded:
            status = "budget_exceeded"
        else:
            o_value, o_count, status = res.value, res.count, "ok"
    return HurwitzRecord(
        delta=delta,
        delta_bar=delta_bar,
        d=delta.weight,
        l=delta.length + delta_bar.length - 2,
        value=value,
        closed_form=closed,
        oracle=o_value,
        oracle_count=o_count,
        oracle_status=status,
    )


def _evaluate_task(args):
    delta_parts, delta_bar_parts, oracle, budget = args
    return evaluate_pair(Partition(delta_parts), Partition(delta_bar_parts), oracle=oracle, budget=budget)


def table_pairs(d_max: int) -> list[tuple[Partition, Partition]]:
    return [
        (a, b)
        for d in range(1, d_max + 1)
        for a in enumerate_partitions(d)
        for b in enumerate_partitions(d)
    ]


def hurwitz_table(
    d_max: int, *, oracle: bool = False, budget: int = DEFAULT_BUDGET, jobs: int = 1
) -> list[HurwitzRecord]:
    """Records for every pair with ``1 <= d <= d_max``.

    Ordered by ``d``, then ``Delta``, then ``Delta_bar`` (each in
    reverse-lexicographic order). Worker count never affects the result.
    """
    if d_max < 1:
        raise DomainError("d_max must be at least 1")
    tasks = [(a.parts, b.parts, oracle, budget) for a, b in table_pairs(d_max)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_evaluate_task, tasks, chunksize=4))
    return [_evaluate_task(t) for t in tasks]


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _frac_json(x: Fraction | None):
    if x is None:
        return None
    return {"num": str(x.numerator), "den": str(x.denominator)}


def record_to_json(rec: HurwitzRecord) -> dict:
    out = {
        "delta": rec.delta.to_list(),
        "delta_bar": rec.delta_bar.to_list(),
        "d": rec.d,
        "l": rec.l,
        "value": _frac_json(rec.value),
        "method": rec.method,
        "closed_form": _frac_json(rec.closed_form),
        "oracle": None,
    }
    if rec.oracle_status == "ok":
        out["oracle"] = dict(_frac_json(rec.oracle), count=str(rec.oracle_count))
    elif rec.oracle_status is not None:
        out["oracle"] = {"status": rec.oracle_status}
    return out


CSV_FIELDS = ["delta", "delta_bar", "d", "l", "value", "method", "closed_form", "oracle", "oracle_count"]


def _csv_row(rec: HurwitzRecord) -> list[str]:
    oracle = ""
    if rec.oracle_status == "ok":
        oracle = format_fraction(rec.oracle)
    elif rec.oracle_status is not None:
        oracle = rec.oracle_status
    return [
        str(rec.delta),
        str(rec.delta_bar),
        str(rec.d),
        str(rec.l),
        format_fraction(rec.value),
        rec.method,
        "" if rec.closed_form is None else format_fraction(rec.closed_form),
        oracle,
        "" if rec.oracle_count is None else str(rec.oracle_count),
    ]


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(_csv_row(rec))
    return buf.getvalue()


def records_to_pretty(records) -> str:
    rows = [CSV_FIELDS] + [_csv_row(r) for r in records]
    widths = [max(len(row[i]) for row in rows) for i in range(len(CSV_FIELDS))]
    lines = []
    for n, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
