"""Brute-force genus-0 double Hurwitz numbers from transposition factorizations.

Counts tuples ``(alpha, tau_1, ..., tau_l, beta)`` in ``S_d`` with
``alpha`` of type ``Delta``, ``beta`` of type ``Delta_bar``, simple
transpositions ``tau_i``, ``alpha * tau_1 * ... * tau_l * beta = 1`` and a
transitive generated group, where ``l = len(Delta) + len(Delta_bar) - 2``.
The Hurwitz number is that count divided by ``d!``.

Only one representative ``alpha`` per class is enumerated; the count is then
multiplied by the class size. ``beta`` is never enumerated: it is the inverse
of ``alpha * tau_1 * ... * tau_l``, whose cycle type equals that of ``beta``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, DomainError
from .partitions import Partition, class_size

__all__ = [
    "DEFAULT_BUDGET",
    "OracleResult",
    "representative",
    "cycle_type",
    "compose",
    "is_transitive",
    "oracle_work",
    "oracle_count",
    "oracle_hurwitz_genus0",
]

DEFAULT_BUDGET = 5 * 10**8

Perm = tuple[int, ...]


def representative(p: Partition) -> Perm:
    """A permutation of cycle type ``p`` whose cycles are consecutive blocks."""
    images = []
    start = 0
    for part in p.parts:
        images.extend(range(start + 1, start + part))
        images.append(start)
        start += part
    return tuple(images)


def cycle_type(perm: Sequence[int]) -> Partition:
    seen = [False] * len(perm)
    lengths = []
    for x in range(len(perm)):
        if not seen[x]:
            c = 0
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                c += 1
            lengths.append(c)
    return Partition(tuple(lengths))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``(p * q)(x) = p(q(x))``."""
    return tuple(p[x] for x in q)


def is_transitive(gens: Sequence[Sequence[int]], d: int) -> bool:
    """True iff the group generated by ``gens`` has a single orbit on ``0..d-1``."""
    if d <= 1:
        return True
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = d
    for g in gens:
        if len(g) != d:
            raise ValueError(f"generator {g} does not act on {d} points")
        for x in range(d):
            rx, ry = find(x), find(g[x])
            if rx != ry:
                parent[ry] = rx
                components -= 1
    return components == 1


def oracle_work(delta: Partition, delta_bar: Partition) -> int:
    """Leaves visited by the search: ``C(d, 2) ** l`` for one fixed ``alpha``."""
    d = delta.weight
    length = delta.length + delta_bar.length - 2
    return comb(d, 2) ** length


@dataclass(frozen=True)
class OracleResult:
    delta: Partition
    delta_bar: Partition
    rep_count: int  # tuples with alpha fixed to one representative
    count: int  # rep_count * class_size(delta): all tuples
    value: Fraction  # count / d!


def _kernel_args(delta: Partition, delta_bar: Partition):
    d = delta.weight
    alpha = np.array(representative(delta), dtype=np.int64)
    labels0 = np.empty(d, dtype=np.int64)
    start = 0
    for part in delta.parts:
        labels0[start : start + part] = start
        start += part
    ta, tb = _kernels.transpositions(d)
    target = np.zeros(d + 1, dtype=np.int64)
    for part in delta_bar.parts:
        target[part] += 1
    return alpha, labels0, ta, tb, target


def _count_chunk(args):
    delta_parts, delta_bar_parts, first, transitive, backend = args
    alpha, labels0, ta, tb, target = _kernel_args(Partition(delta_parts), Partition(delta_bar_parts))
    length = len(delta_parts) + len(delta_bar_parts) - 2
    first = np.asarray(first, dtype=np.int64)
    fn = {
        "numba": _kernels.count_factorizations_numba,
        "numpy": _kernels.count_factorizations_numpy,
    }.get(backend, _kernels.count_factorizations)
    return fn(alpha, labels0, ta, tb, target, length, first, transitive)


def oracle_count(
    delta,
    delta_bar,
    budget: int = DEFAULT_BUDGET,
    *,
    transitive: bool = True,
    jobs: int = 1,
    backend: str | None = None,
) -> OracleResult:
    """Run the factorization search; see :func:`oracle_hurwitz_genus0`.

    ``transitive=False`` drops the connectivity filter (for instrumented
    comparisons only). ``backend`` forces ``"numba"`` or ``"numpy"``.
    """
    delta = delta if isinstance(delta, Partition) else Partition(tuple(delta))
    delta_bar = delta_bar if isinstance(delta_bar, Partition) else Partition(tuple(delta_bar))
    d = delta.weight
    if d != delta_bar.weight:
        raise DomainError(f"weights differ: |{delta}| = {d}, |{delta_bar}| = {delta_bar.weight}")
    if d == 0:
        raise DomainError("empty partitions have no coverings")
    work = oracle_work(delta, delta_bar)
    if work > budget:
        raise BudgetExceeded(work, budget)
    length = delta.length + delta_bar.length - 2
    ntrans = comb(d, 2)
    backend = backend or _kernels.BACKEND
    if length == 0 or ntrans == 0 or jobs <= 1:
        chunks = [list(range(max(ntrans, 0)))]
    else:
        chunks = [[t] for t in range(ntrans)]
    args = [(delta.parts, delta_bar.parts, c, transitive, backend) for c in chunks]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rep = sum(pool.map(_count_chunk, args))
    else:
        rep = sum(_count_chunk(a) for a in args)
    count = rep * class_size(delta)
    return OracleResult(delta, delta_bar, rep, count, Fraction(count, factorial(d)))


def oracle_hurwitz_genus0(delta, delta_bar, budget: int = DEFAULT_BUDGET, **kwargs) -> Fraction:
    """``H_0(Delta|Delta_bar)`` by exhaustive enumeration.

    Raises :class:`BudgetExceeded` before doing any work if
    ``C(d, 2) ** l`` exceeds ``budget``; never returns a partial count.

    >>> oracle_hurwitz_genus0(Partition((2, 1)), Partition((3,)))
    Fraction(1, 1)
    """
    return oracle_count(delta, delta_bar, budget, **kwargs).value
