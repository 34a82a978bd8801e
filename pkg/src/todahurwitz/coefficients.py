"""Universal coefficients of symmetric dispersionless Toda solutions.

Everything here is exact :class:`fractions.Fraction` arithmetic. The
recursive coefficient ``T_{i_1...i_k}(s | l)`` and the normalized
coefficient ``N_{(Delta|Delta_bar)}(s | r)`` are memoized in a
:class:`CoefficientCache` that can be persisted to a text file.

Index conventions
-----------------
``r`` rows obey ``sum(r) = k + k_bar - 2`` where ``k``, ``k_bar`` are the
numbers of parts. Each column of ``T`` in the sum defining ``N`` carries
``l_j = r_j - n_j + 1`` where ``n_j`` parts of the barred diagram land in
block ``j``; summing ``l_j`` over the ``m`` columns gives ``m + k - 2``, which
is exactly the constraint ``T`` requires.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from pathlib import Path
from typing import Sequence

from .errors import CacheVersionError, DomainError
from .partitions import (
    CoeffMatrix,
    Partition,
    compositions,
    count_typed_set_partitions,
    sigma,
)

__all__ = [
    "FORMULA_VERSION",
    "CoefficientCache",
    "get_cache",
    "set_cache",
    "clear_cache",
    "p_count",
    "t_pair",
    "t_multi",
    "n_tilde",
    "n_coeff",
    "nonzero_n_coeffs",
]

# Bump whenever any formula or convention in this module changes.
FORMULA_VERSION = "todahurwitz-coeff-1"

ZERO = Fraction(0)
ONE = Fraction(1)


class CoefficientCache:
    """Memo tables for ``T`` and ``N`` values.

    Reads are lock-free; inserts are serialized so concurrent threads never
    observe a partially written table.
    """

    def __init__(self):
        self.t: dict[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]], Fraction] = {}
        self.n: dict[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]], Fraction] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.t) + len(self.n)

    def put_t(self, key, value: Fraction) -> None:
        with self._lock:
            self.t.setdefault(key, value)

    def put_n(self, key, value: Fraction) -> None:
        with self._lock:
            self.n.setdefault(key, value)

    def clear(self) -> None:
        with self._lock:
            self.t.clear()
            self.n.clear()

    def merge(self, other: CoefficientCache) -> None:
        with self._lock:
            for k, v in other.t.items():
                self.t.setdefault(k, v)
            for k, v in other.n.items():
                self.n.setdefault(k, v)

    def save(self, path) -> None:
        """Write a sorted, line-oriented text file (exact round trip)."""
        lines = [f"version\t{FORMULA_VERSION}"]
        for (i_list, s, ell), v in sorted(self.t.items()):
            lines.append(f"T\t{_fmt(i_list)}\t{_fmt(s)}\t{_fmt(ell)}\t{v}")
        for (dl, db, s, r), v in sorted(self.n.items()):
            lines.append(f"N\t{_fmt(dl)}\t{_fmt(db)}\t{_fmt(s)}\t{_fmt(r)}\t{v}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> CoefficientCache:
        cache = cls()
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n").split("\t")
            if len(header) != 2 or header[0] != "version":
                raise CacheVersionError(f"{path}: missing version header")
            if header[1] != FORMULA_VERSION:
                raise CacheVersionError(
                    f"{path}: cache version {header[1]!r} != {FORMULA_VERSION!r}"
                )
            for lineno, line in enumerate(fh, start=2):
                fields = line.rstrip("\n").split("\t")
                if fields == [""]:
                    continue
                if fields[0] == "T" and len(fields) == 5:
                    key = (_unfmt(fields[1]), _unfmt(fields[2]), _unfmt(fields[3]))
                    cache.t[key] = Fraction(fields[4])
                elif fields[0] == "N" and len(fields) == 6:
                    key = tuple(_unfmt(x) for x in fields[1:5])
                    cache.n[key] = Fraction(fields[5])
                else:
                    raise ValueError(f"{path}:{lineno}: malformed cache line")
        return cache


def _fmt(xs: Sequence[int]) -> str:
    return ",".join(map(str, xs))


def _unfmt(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",")) if text else ()


_cache = CoefficientCache()


def get_cache() -> CoefficientCache:
    return _cache


def set_cache(cache: CoefficientCache) -> None:
    global _cache
    _cache = cache


def clear_cache() -> None:
    """Drop every memoized value (coefficients and helper tables)."""
    _cache.clear()
    p_count.cache_clear()
    _t_pair.cache_clear()


@lru_cache(maxsize=None)
def p_count(i: int, j: int, r: tuple[int, ...]) -> int:
    """Number of positive sequences ``(i_t), (j_t)`` with sums ``i``, ``j`` and
    ``i_t + j_t = r_t``.

    >>> p_count(2, 2, (2, 2))
    1
    """
    r = tuple(r)
    if sum(r) != i + j or any(x < 2 for x in r):
        return 0
    # ways[a] = number of ways to choose i_1..i_t with 1 <= i_t <= r_t - 1 summing to a
    ways = {0: 1}
    for rt in r:
        nxt: dict[int, int] = {}
        for a, w in ways.items():
            for it in range(1, rt):
                if a + it <= i:
                    nxt[a + it] = nxt.get(a + it, 0) + w
        ways = nxt
    return ways.get(i, 0)


def t_pair(i: int, j: int, p: Sequence[int]) -> Fraction:
    """``T_{ij}(p_1, ..., p_m)``: alternating sum of ``P_{ij}`` over ordered
    regroupings of ``p`` into consecutive blocks.

    >>> t_pair(1, 1, (1, 1))
    Fraction(-1, 2)
    """
    return _t_pair(i, j, tuple(p))


@lru_cache(maxsize=None)
def _t_pair(i: int, j: int, p: tuple[int, ...]) -> Fraction:
    m = len(p)
    if m == 0 or i + j != sum(p):
        return ZERO
    sign = 1 if m % 2 == 1 else -1  # (-1)^(m+1)
    total = ZERO
    for k in range(1, m + 1):
        for sizes in compositions(m, k):
            sums = []
            pos = 0
            for n_b in sizes:
                sums.append(sum(p[pos : pos + n_b]))
                pos += n_b
            count = p_count(i, j, tuple(sums))
            if count:
                total += Fraction(sign * count, k * prod(factorial(n_b) for n_b in sizes))
    return total


def t_multi(i_list: Sequence[int], s: Sequence[int], ell: Sequence[int]) -> Fraction:
    """Recursive coefficient ``T_{i_1...i_k}(s | l)``.

    Peels the last index ``i_k``: every contiguous column range ``a..b`` is
    merged into a single column ``(sum s - i_k | sum (l - 1))`` of the
    ``k - 1`` coefficient, weighted by a multinomial and ``T_{s, i_k}``.
    """
    i_list, s, ell = tuple(i_list), tuple(s), tuple(ell)
    if len(s) != len(ell):
        raise ValueError("s and l rows must have equal length")
    key = (i_list, s, ell)
    cache = _cache
    hit = cache.t.get(key)
    if hit is not None:
        return hit
    value = _t_multi_eval(i_list, s, ell)
    cache.put_t(key, value)
    return value


def _t_multi_eval(i_list, s, ell) -> Fraction:
    k, m = len(i_list), len(s)
    if k == 0 or m == 0:
        return ZERO
    if sum(s) != sum(i_list) or sum(ell) != m + k - 2 or min(ell) < 0:
        return ZERO
    if k == 1:
        return ONE if s == (i_list[0],) and ell == (0,) else ZERO
    if k == 2:
        return t_pair(i_list[0], i_list[1], s) if all(x == 1 for x in ell) else ZERO
    last = i_list[-1]
    head = i_list[:-1]
    total = ZERO
    for a in range(m):
        seg_s = 0
        seg_l = 0
        denom = 1
        for b in range(a, m):
            if ell[b] < 1:
                break
            seg_s += s[b]
            seg_l += ell[b] - 1
            denom *= factorial(ell[b] - 1)
            merged_s = seg_s - last
            if merged_s <= 0 or seg_l <= 0:
                continue
            inner = t_multi(head, s[:a] + (merged_s,) + s[b + 1 :], ell[:a] + (seg_l,) + ell[b + 1 :])
            if not inner:
                continue
            pair = t_pair(merged_s, last, s[a : b + 1])
            if pair:
                total += Fraction(factorial(seg_l), denom) * inner * pair
    return total


def n_tilde(i_list: Sequence[int], ibar_list: Sequence[int], matrix: CoeffMatrix) -> Fraction:
    """``N~`` for ordered index lists, without the automorphism factors.

    >>> n_tilde((3,), (2, 1), CoeffMatrix((3,), (1,)))
    Fraction(2, 1)
    """
    i_list, ibar_list = tuple(i_list), tuple(ibar_list)
    s, r = matrix.s, matrix.r
    k, kbar = len(i_list), len(ibar_list)
    total_i = sum(i_list)
    if total_i != sum(ibar_list) or total_i != sum(s) or sum(r) != k + kbar - 2:
        return ZERO
    acc = ZERO
    for n in _block_sizes(s, r, kbar):
        count = count_typed_set_partitions(ibar_list, s, n)
        if not count:
            continue
        ell = tuple(rj - nj + 1 for rj, nj in zip(r, n))
        t = t_multi(i_list, s, ell)
        if t:
            acc += count * t
    if not acc:
        return ZERO
    return acc * prod(i_list) * prod(ibar_list) / prod(s)


def _block_sizes(s, r, kbar):
    """Candidate ``n`` rows: ``1 <= n_j <= min(s_j, r_j + 1)``, summing to ``kbar``."""
    caps = [min(sj, rj + 1) for sj, rj in zip(s, r)]
    m = len(s)

    def rec(j, remaining, acc):
        if j == m:
            if remaining == 0:
                yield tuple(acc)
            return
        rest_min = m - j - 1
        for nj in range(1, min(caps[j], remaining - rest_min) + 1):
            yield from rec(j + 1, remaining - nj, acc + [nj])

    yield from rec(0, kbar, [])


def n_coeff(delta, delta_bar, matrix: CoeffMatrix) -> Fraction:
    """``N_{(Delta|Delta_bar)}(s | r)`` using the non-increasing order of parts.

    >>> n_coeff(Partition((2, 1)), Partition((2, 1)), CoeffMatrix((3,), (2,)))
    Fraction(4, 3)
    """
    delta = delta if isinstance(delta, Partition) else Partition(tuple(delta))
    delta_bar = delta_bar if isinstance(delta_bar, Partition) else Partition(tuple(delta_bar))
    if delta.weight != delta_bar.weight:
        raise DomainError(f"weights differ: |{delta}| = {delta.weight}, |{delta_bar}| = {delta_bar.weight}")
    key = (delta.parts, delta_bar.parts, matrix.s, matrix.r)
    cache = _cache
    hit = cache.n.get(key)
    if hit is not None:
        return hit
    value = n_tilde(delta.parts, delta_bar.parts, matrix) / (sigma(delta) * sigma(delta_bar))
    cache.put_n(key, value)
    return value


def nonzero_n_coeffs(delta: Partition, delta_bar: Partition) -> list[tuple[CoeffMatrix, Fraction]]:
    """All matrices with nonzero ``N`` for the pair, in enumeration order."""
    from .partitions import enumerate_coeff_matrices

    if delta.weight != delta_bar.weight:
        raise DomainError(f"weights differ: {delta.weight} != {delta_bar.weight}")
    if delta.weight == 0:
        return []
    r_total = delta.length + delta_bar.length - 2
    out = []
    for matrix in enumerate_coeff_matrices(delta.weight, r_total):
        value = n_coeff(delta, delta_bar, matrix)
        if value:
            out.append((matrix, value))
    return out
