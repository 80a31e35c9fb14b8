"""Numeric inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``CUTFREE_NUMBA`` is not
``0``.  Both paths are always importable so that tests and the benchmark
can compare them.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("CUTFREE_NUMBA", "1") != "0"

# law codes reported by psc_violations
COMMUTATIVE, IDEMPOTENT, ASSOCIATIVE, BOTTOM, TOP, PSEUDOCOMPLEMENT = range(6)


# ---------------------------------------------------------------------------
# reflexive-transitive closure


def closure_numpy(rel):
    r = np.array(rel, dtype=np.bool_, copy=True)
    np.fill_diagonal(r, True)
    for k in range(r.shape[0]):
        r |= np.outer(r[:, k], r[k, :])
    return r


def _closure_loops(rel):
    n = rel.shape[0]
    r = rel.copy()
    for i in range(n):
        r[i, i] = True
    for k in range(n):
        for i in range(n):
            if r[i, k]:
                for j in range(n):
                    if r[k, j]:
                        r[i, j] = True
    return r


# ---------------------------------------------------------------------------
# order-preserving maps from generators into a finite poset


def maps_numpy(gen_leq, gen_bottom, gen_top, car_leq, bottom, top):
    """All maps g -> carrier with gen_leq[i,j] => car_leq[m_i, m_j].

    Generators flagged in ``gen_bottom`` go to ``bottom``, those in
    ``gen_top`` to ``top``.  Rows are in lexicographic order.
    """
    n = gen_leq.shape[0]
    size = car_leq.shape[0]
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((size,) * n).reshape(n, -1).T.astype(np.int64)
    ok = np.ones(grids.shape[0], dtype=np.bool_)
    for i in range(n):
        if gen_bottom[i]:
            ok &= grids[:, i] == bottom
        if gen_top[i]:
            ok &= grids[:, i] == top
        for j in range(n):
            if i != j and gen_leq[i, j]:
                ok &= car_leq[grids[:, i], grids[:, j]]
    return grids[ok]


def _maps_loops(gen_leq, gen_bottom, gen_top, car_leq, bottom, top):
    n = gen_leq.shape[0]
    size = car_leq.shape[0]
    total = 1
    for _ in range(n):
        total *= size
    out = np.empty((total, n), dtype=np.int64)
    cur = np.zeros(n, dtype=np.int64)
    count = 0
    for _ in range(total):
        ok = True
        for i in range(n):
            v = cur[i]
            if gen_bottom[i] and v != bottom:
                ok = False
                break
            if gen_top[i] and v != top:
                ok = False
                break
            for j in range(n):
                if i != j and gen_leq[i, j] and not car_leq[v, cur[j]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            for i in range(n):
                out[count, i] = cur[i]
            count += 1
        # odometer, last position fastest
        k = n - 1
        while k >= 0:
            cur[k] += 1
            if cur[k] < size:
                break
            cur[k] = 0
            k -= 1
    return out[:count]


# ---------------------------------------------------------------------------
# pseudocomplemented semilattice laws


def violations_numpy(meet, pcomp, bottom, top):
    """Rows (law, a, b, c) for every violated law instance."""
    n = meet.shape[0]
    idx = np.arange(n)
    rows = []

    def add(law, hits):
        for h in np.argwhere(hits):
            w = list(h) + [-1] * (3 - len(h))
            rows.append([law] + w)

    add(COMMUTATIVE, meet != meet.T)
    add(IDEMPOTENT, meet[idx, idx] != idx)
    left = meet[meet[:, :, None], idx[None, None, :]]
    right = meet[idx[:, None, None], meet[None, :, :]]
    add(ASSOCIATIVE, left != right)
    add(BOTTOM, meet[bottom, :] != bottom)
    add(TOP, meet[top, :] != idx)
    disjoint = meet == bottom
    below = meet[idx[None, :], pcomp[:, None]] == idx[None, :]
    add(PSEUDOCOMPLEMENT, disjoint != below)
    if not rows:
        return np.zeros((0, 4), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def _violations_loops(meet, pcomp, bottom, top):
    n = meet.shape[0]
    out = np.empty((n * n * n + 4 * n * n + 3 * n, 4), dtype=np.int64)
    k = 0
    for a in range(n):
        for b in range(n):
            if meet[a, b] != meet[b, a]:
                out[k, 0] = COMMUTATIVE
                out[k, 1] = a
                out[k, 2] = b
                out[k, 3] = -1
                k += 1
    for a in range(n):
        if meet[a, a] != a:
            out[k, 0] = IDEMPOTENT
            out[k, 1] = a
            out[k, 2] = -1
            out[k, 3] = -1
            k += 1
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if meet[meet[a, b], c] != meet[a, meet[b, c]]:
                    out[k, 0] = ASSOCIATIVE
                    out[k, 1] = a
                    out[k, 2] = b
                    out[k, 3] = c
                    k += 1
    for a in range(n):
        if meet[bottom, a] != bottom:
            out[k, 0] = BOTTOM
            out[k, 1] = a
            out[k, 2] = -1
            out[k, 3] = -1
            k += 1
    for a in range(n):
        if meet[top, a] != a:
            out[k, 0] = TOP
            out[k, 1] = a
            out[k, 2] = -1
            out[k, 3] = -1
            k += 1
    for a in range(n):
        for x in range(n):
            disjoint = meet[a, x] == bottom
            below = meet[x, pcomp[a]] == x
            if disjoint != below:
                out[k, 0] = PSEUDOCOMPLEMENT
                out[k, 1] = a
                out[k, 2] = x
                out[k, 3] = -1
                k += 1
    return out[:k]


if HAVE_NUMBA:
    closure_numba = njit(cache=True)(_closure_loops)
    maps_numba = njit(cache=True)(_maps_loops)
    violations_numba = njit(cache=True)(_violations_loops)
else:  # pragma: no cover
    closure_numba = closure_numpy
    maps_numba = maps_numpy
    violations_numba = violations_numpy


def transitive_closure(rel):
    rel = np.ascontiguousarray(rel, dtype=np.bool_)
    if USE_NUMBA:
        return closure_numba(rel)
    return closure_numpy(rel)


def order_preserving_maps(gen_leq, gen_bottom, gen_top, car_leq, bottom, top):
    args = (
        np.ascontiguousarray(gen_leq, dtype=np.bool_),
        np.ascontiguousarray(gen_bottom, dtype=np.bool_),
        np.ascontiguousarray(gen_top, dtype=np.bool_),
        np.ascontiguousarray(car_leq, dtype=np.bool_),
        int(bottom),
        int(top),
    )
    if USE_NUMBA:
        return maps_numba(*args)
    return maps_numpy(*args)


def psc_violations(meet, pcomp, bottom, top):
    args = (
        np.ascontiguousarray(meet, dtype=np.int64),
        np.ascontiguousarray(pcomp, dtype=np.int64),
        int(bottom),
        int(top),
    )
    if USE_NUMBA:
        return violations_numba(*args)
    return violations_numpy(*args)
