"""Counting kernels for the transposition-factorization oracle.

Two interchangeable implementations of :func:`count_factorizations`:

* ``numba``: iterative depth-first search compiled with ``@njit``.
* ``numpy``: depth-first over a short prefix in Python, with the remaining
  levels expanded as one vectorized block.

The backend is numba when it imports and ``TODAHURWITZ_DISABLE_NUMBA`` is
unset or ``0``; otherwise numpy. Both return identical integers.

Kernel inputs (all ``int64`` numpy arrays):

``alpha``      fixed representative, one-line notation on ``0..d-1``
``labels0``    orbit label of each point under ``alpha`` (cycle id)
``ta, tb``     endpoints of the ``C(d, 2)`` transpositions
``target``     ``target[c]`` = number of ``c``-cycles required in the product
``first``      transposition indices allowed at the first level
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "HAVE_NUMBA",
    "count_factorizations",
    "count_factorizations_numba",
    "count_factorizations_numpy",
    "transpositions",
]

_DISABLE = os.environ.get("TODAHURWITZ_DISABLE_NUMBA", "0") not in ("", "0")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def transpositions(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints of all transpositions of ``0..d-1`` in lexicographic order."""
    pairs = [(a, b) for a in range(d) for b in range(a + 1, d)]
    ta = np.array([p[0] for p in pairs], dtype=np.int64)
    tb = np.array([p[1] for p in pairs], dtype=np.int64)
    return ta, tb


def _count_numba_impl(alpha, labels0, ta, tb, target, length, first, check_transitive):
    d = alpha.shape[0]
    ntrans = ta.shape[0]
    nfirst = first.shape[0]
    perm = alpha.copy()
    seen = np.zeros(d, np.int64)
    counts = np.zeros(d + 1, np.int64)

    ncomp0 = 0
    for x in range(d):
        if labels0[x] == x:
            ncomp0 += 1

    if length == 0:
        if check_transitive and ncomp0 != 1:
            return 0
        return _matches(perm, target, seen, counts)

    labels = np.empty((length + 1, d), np.int64)
    ncomp = np.empty(length + 1, np.int64)
    for x in range(d):
        labels[0, x] = labels0[x]
    ncomp[0] = ncomp0
    choice = np.full(length, -1, np.int64)
    applied = np.full(length, -1, np.int64)

    total = 0
    depth = 0
    while True:
        t_old = applied[depth]
        if t_old >= 0:
            a = ta[t_old]
            b = tb[t_old]
            tmp = perm[a]
            perm[a] = perm[b]
            perm[b] = tmp
            applied[depth] = -1
        choice[depth] += 1
        limit = nfirst if depth == 0 else ntrans
        if choice[depth] >= limit:
            choice[depth] = -1
            if depth == 0:
                break
            depth -= 1
            continue
        t = first[choice[depth]] if depth == 0 else choice[depth]
        a = ta[t]
        b = tb[t]
        tmp = perm[a]
        perm[a] = perm[b]
        perm[b] = tmp
        applied[depth] = t
        la = labels[depth, a]
        lb = labels[depth, b]
        if la != lb:
            for x in range(d):
                v = labels[depth, x]
                labels[depth + 1, x] = la if v == lb else v
            ncomp[depth + 1] = ncomp[depth] - 1
        else:
            for x in range(d):
                labels[depth + 1, x] = labels[depth, x]
            ncomp[depth + 1] = ncomp[depth]
        remaining = length - depth - 1
        if check_transitive and ncomp[depth + 1] - 1 > remaining:
            continue
        if remaining == 0:
            total += _matches(perm, target, seen, counts)
        else:
            depth += 1
    return total


def _matches_impl(perm, target, seen, counts):
    d = perm.shape[0]
    for c in range(d + 1):
        counts[c] = 0
    for x in range(d):
        seen[x] = 0
    for x in range(d):
        if seen[x] == 0:
            c = 0
            y = x
            while seen[y] == 0:
                seen[y] = 1
                y = perm[y]
                c += 1
            counts[c] += 1
    for c in range(d + 1):
        if counts[c] != target[c]:
            return 0
    return 1


if HAVE_NUMBA:
    _matches = njit(cache=True)(_matches_impl)
    _count_numba = njit(cache=True)(_count_numba_impl)
else:  # pragma: no cover
    _matches = _matches_impl
    _count_numba = None


def count_factorizations_numba(alpha, labels0, ta, tb, target, length, first, check_transitive=True) -> int:
    if not HAVE_NUMBA:  # pragma: no cover
        raise RuntimeError("numba is not available")
    return int(_count_numba(alpha, labels0, ta, tb, target, length, first, bool(check_transitive)))


# Rows per vectorized block in the numpy path.
_BLOCK_ROWS = 200_000


def count_factorizations_numpy(alpha, labels0, ta, tb, target, length, first, check_transitive=True) -> int:
    d = alpha.shape[0]
    ntrans = ta.shape[0]
    if length == 0:
        ok = _tail_count(alpha[None, :], labels0[None, :], target, check_transitive)
        return int(ok)

    tail = 1
    while tail < length and ntrans ** (tail + 1) <= _BLOCK_ROWS:
        tail += 1
    head = length - tail
    grids = np.indices((ntrans,) * tail).reshape(tail, -1).T.astype(np.int64)
    if head == 0:
        grids = grids[np.isin(grids[:, 0], first)]
    expected = _element_signature(target, d)

    total = 0

    def run_tail(perm, labels):
        nonlocal total
        rows = grids.shape[0]
        idx = np.arange(rows)
        P = np.broadcast_to(perm, (rows, d)).copy()
        L = np.broadcast_to(labels, (rows, d)).copy()
        for j in range(tail):
            a = ta[grids[:, j]]
            b = tb[grids[:, j]]
            pa = P[idx, a].copy()
            P[idx, a] = P[idx, b]
            P[idx, b] = pa
            la = L[idx, a]
            lb = L[idx, b]
            L = np.where(L == lb[:, None], la[:, None], L)
        total += int(_tail_mask(P, L, expected, check_transitive).sum())

    def dfs(level, perm, labels):
        if level == head:
            run_tail(perm, labels)
            return
        choices = first if level == 0 else range(ntrans)
        for t in choices:
            a, b = ta[t], tb[t]
            p2 = perm.copy()
            p2[a], p2[b] = perm[b], perm[a]
            la, lb = labels[a], labels[b]
            l2 = np.where(labels == lb, la, labels)
            if check_transitive and len(np.unique(l2)) - 1 > length - level - 1:
                continue
            dfs(level + 1, p2, l2)

    dfs(0, alpha.copy(), labels0.copy())
    return total


def _element_signature(target, d):
    # sorted per-point cycle lengths determine the cycle type
    sig = []
    for c in range(1, d + 1):
        sig.extend([c] * (c * int(target[c])))
    return np.array(sorted(sig), dtype=np.int64)


def _tail_mask(P, L, expected, check_transitive):
    rows, d = P.shape
    ident = np.arange(d)
    lengths = np.zeros((rows, d), np.int64)
    cur = P.copy()
    for k in range(1, d + 1):
        hit = (cur == ident) & (lengths == 0)
        lengths[hit] = k
        cur = np.take_along_axis(P, cur, axis=1)
    mask = (np.sort(lengths, axis=1) == expected).all(axis=1)
    if check_transitive:
        mask &= (L == L[:, :1]).all(axis=1)
    return mask


def _tail_count(P, L, target, check_transitive):
    expected = _element_signature(target, P.shape[1])
    return _tail_mask(P, L, expected, check_transitive).sum()


BACKEND = "numba" if HAVE_NUMBA and not _DISABLE else "numpy"


def count_factorizations(alpha, labels0, ta, tb, target, length, first, check_transitive=True) -> int:
    """Count ``(tau_1..tau_l)`` with ``alpha*tau_1*...*tau_l`` of the target
    cycle type (and, if requested, a transitive generated group)."""
    if BACKEND == "numba":
        return count_factorizations_numba(alpha, labels0, ta, tb, target, length, first, check_transitive)
    return count_factorizations_numpy(alpha, labels0, ta, tb, target, length, first, check_transitive)
