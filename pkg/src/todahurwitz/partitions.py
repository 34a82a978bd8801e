"""Young diagrams, their statistics, and the enumeration primitives used by
the coefficient recursions.

Parts are always stored non-increasing. All enumerations return lists in a
fixed, documented order so that caches and fixtures are reproducible.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence

from .errors import PartitionParseError

__all__ = [
    "Partition",
    "CoeffMatrix",
    "TypedSetPartition",
    "parse_partition",
    "sigma",
    "rho",
    "class_size",
    "enumerate_partitions",
    "compositions",
    "enumerate_coeff_matrices",
    "typed_set_partitions",
    "count_typed_set_partitions",
]


@dataclass(frozen=True)
class Partition:
    """A Young diagram ``[mu_1 >= mu_2 >= ... >= mu_l > 0]``.

    The constructor accepts parts in any order and sorts them.

    >>> Partition((1, 3, 2))
    Partition([3, 2, 1])
    >>> Partition(()).weight
    0
    """

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if parts and parts[-1] < 1:
            raise PartitionParseError(f"parts must be positive, got {list(parts)}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"

    def to_list(self) -> list[int]:
        return list(self.parts)


_TOKEN_RE = re.compile(r"^[+]?\d+$")


def parse_partition(text: str) -> Partition:
    """Parse ``"[3,2,1]"``, ``"3,2,1"`` or ``"[]"`` into a :class:`Partition`."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    elif body.startswith("[") or body.endswith("]"):
        raise PartitionParseError(f"unbalanced brackets in {text!r}")
    body = body.strip()
    if not body:
        return Partition(())
    parts = []
    for raw in body.split(","):
        token = raw.strip()
        if not _TOKEN_RE.match(token):
            raise PartitionParseError(f"invalid part {token!r} in {text!r}")
        value = int(token)
        if value < 1:
            raise PartitionParseError(f"part {token!r} in {text!r} is not positive")
        parts.append(value)
    return Partition(tuple(parts))


def _as_partition(p) -> Partition:
    return p if isinstance(p, Partition) else Partition(tuple(p))


def sigma(p) -> int:
    """Order of the row-permutation group: product of multiplicity factorials."""
    return prod(factorial(m) for m in _as_partition(p).multiplicities().values())


def rho(p) -> int:
    """Product of all parts (1 for the empty diagram)."""
    return prod(_as_partition(p).parts)


def class_size(p) -> int:
    """Number of permutations of ``S_d`` with cycle type ``p``."""
    p = _as_partition(p)
    return factorial(p.weight) // (rho(p) * sigma(p))


def enumerate_partitions(d: int) -> list[Partition]:
    """All partitions of ``d`` in reverse-lexicographic order.

    >>> [str(p) for p in enumerate_partitions(4)]
    ['[4]', '[3,1]', '[2,2]', '[2,1,1]', '[1,1,1,1]']
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    return [Partition(parts) for parts in _partitions_bounded(d, d)]


@lru_cache(maxsize=None)
def _partitions_bounded(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_bounded(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def compositions(total: int, parts: int, minimum: int = 1) -> tuple[tuple[int, ...], ...]:
    """Ordered tuples of ``parts`` integers ``>= minimum`` summing to ``total``,
    in lexicographic order."""
    if parts == 0:
        return ((),) if total == 0 else ()
    if parts == 1:
        return ((total,),) if total >= minimum else ()
    out = []
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in compositions(total - first, parts - 1, minimum):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class CoeffMatrix:
    """An ordered two-row matrix ``(s_1 ... s_m | r_1 ... r_m)``.

    Column order matters. For ``m >= 2`` every ``r_j`` must be positive.
    """

    s: tuple[int, ...]
    r: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(x) for x in self.s)
        r = tuple(int(x) for x in self.r)
        if not s or len(s) != len(r):
            raise ValueError(f"bad matrix shape: s={s}, r={r}")
        if min(s) < 1 or min(r) < 0:
            raise ValueError(f"bad matrix entries: s={s}, r={r}")
        if len(s) >= 2 and min(r) < 1:
            raise ValueError(f"r entries must be positive when m >= 2: r={r}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "r", r)

    @classmethod
    def from_columns(cls, columns: Sequence[tuple[int, int]]) -> CoeffMatrix:
        return cls(tuple(c[0] for c in columns), tuple(c[1] for c in columns))

    @classmethod
    def parse(cls, text: str) -> CoeffMatrix:
        """Parse ``"s1,s2|r1,r2"`` (parentheses optional)."""
        body = text.strip().strip("()")
        try:
            top, bottom = body.split("|")
            s = tuple(int(x) for x in top.split(","))
            r = tuple(int(x) for x in bottom.split(","))
        except ValueError as exc:
            raise ValueError(f"cannot parse matrix {text!r}; expected 's1,..|r1,..'") from exc
        return cls(s, r)

    @property
    def m(self) -> int:
        return len(self.s)

    @property
    def columns(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.s, self.r))

    def __str__(self) -> str:
        return ",".join(map(str, self.s)) + "|" + ",".join(map(str, self.r))


@lru_cache(maxsize=None)
def _coeff_matrices(s_total: int, r_total: int) -> tuple[CoeffMatrix, ...]:
    out = [CoeffMatrix((s_total,), (r_total,))]
    for m in range(2, min(s_total, r_total) + 1):
        for s in compositions(s_total, m):
            for r in compositions(r_total, m):
                out.append(CoeffMatrix(s, r))
    return tuple(out)


def enumerate_coeff_matrices(s_total: int, r_total: int) -> list[CoeffMatrix]:
    """All ordered matrices with the given row sums.

    Ordered by ``m``, then lexicographically by the ``s`` row, then the ``r`` row.

    >>> [str(c) for c in enumerate_coeff_matrices(3, 2)]
    ['3|2', '1,2|1,1', '2,1|1,1']
    """
    if s_total < 1 or r_total < 0:
        raise ValueError("need s_total >= 1 and r_total >= 0")
    return list(_coeff_matrices(s_total, r_total))


@dataclass(frozen=True)
class TypedSetPartition:
    """Positions (0-based) of a value sequence assigned to ordered blocks."""

    blocks: tuple[tuple[int, ...], ...]

    def assignment(self, size: int) -> tuple[int, ...]:
        """Block index of every position."""
        out = [-1] * size
        for j, block in enumerate(self.blocks):
            for pos in block:
                out[pos] = j
        return tuple(out)


def typed_set_partitions(values: Sequence[int], s: Sequence[int], n: Sequence[int]) -> list[TypedSetPartition]:
    """Enumerate position assignments with block sizes ``n`` and block sums ``s``.

    Positions holding equal values are still distinct, so ``values=(2, 2)``
    into two blocks of sum 2 gives two assignments.
    """
    values = tuple(values)
    m = len(s)
    if len(n) != m:
        raise ValueError("s and n must have equal length")
    if sum(n) != len(values) or sum(s) != sum(values):
        return []
    out: list[TypedSetPartition] = []
    blocks: list[list[int]] = [[] for _ in range(m)]
    room = list(n)
    left = list(s)

    def place(pos: int) -> None:
        if pos == len(values):
            if not any(left):
                out.append(TypedSetPartition(tuple(tuple(b) for b in blocks)))
            return
        v = values[pos]
        for j in range(m):
            if room[j] and left[j] >= v:
                # remaining items must still fit: at least 1 per remaining slot
                if room[j] > 1 and left[j] - v < room[j] - 1:
                    continue
                if room[j] == 1 and left[j] != v:
                    continue
                blocks[j].append(pos)
                room[j] -= 1
                left[j] -= v
                place(pos + 1)
                left[j] += v
                room[j] += 1
                blocks[j].pop()

    place(0)
    return out


def count_typed_set_partitions(values: Sequence[int], s: Sequence[int], n: Sequence[int]) -> int:
    """Number of assignments :func:`typed_set_partitions` would return.

    Works on value multiplicities: ``c`` equal values split as ``c_1 + ... + c_m``
    contribute the multinomial ``c! / (c_1! ... c_m!)``.
    """
    if len(s) != len(n):
        raise ValueError("s and n must have equal length")
    if sum(n) != len(values) or sum(s) != sum(values):
        return 0
    groups = tuple(sorted(Counter(values).items(), reverse=True))
    return _count_typed(groups, tuple(n), tuple(s))


@lru_cache(maxsize=None)
def _count_typed(groups: tuple[tuple[int, int], ...], room: tuple[int, ...], left: tuple[int, ...]) -> int:
    if not groups:
        return 1 if not any(room) and not any(left) else 0
    (value, count), rest = groups[0], groups[1:]
    total = 0
    for split in _splits(count, room, left, value):
        new_room = tuple(r - c for r, c in zip(room, split))
        new_left = tuple(lt - c * value for lt, c in zip(left, split))
        sub = _count_typed(rest, new_room, new_left)
        if sub:
            total += _multinomial(count, split) * sub
    return total


def _splits(count: int, room: tuple[int, ...], left: tuple[int, ...], value: int) -> Iterator[tuple[int, ...]]:
    m = len(room)
    caps = [min(room[j], left[j] // value) for j in range(m)]

    def rec(j: int, remaining: int, acc: list[int]):
        if j == m - 1:
            if remaining <= caps[j]:
                yield tuple(acc + [remaining])
            return
        for c in range(min(caps[j], remaining) + 1):
            yield from rec(j + 1, remaining - c, acc + [c])

    yield from rec(0, count, [])


def _multinomial(total: int, split: Sequence[int]) -> int:
    return factorial(total) // prod(factorial(c) for c in split)
