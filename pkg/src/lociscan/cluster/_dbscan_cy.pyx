# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled DBSCAN kernel.

Same algorithm as ``_dbscan_py`` (grid cells of side epsilon, two passes:
core flags, then input-order expansion) with the hot loops in C. Cells are
flat int64 keys over the offset cell coordinates; raises OverflowError when
the grid extent does not fit a flat key, which makes the dispatcher fall
back to the dict-keyed numpy kernel.
"""

from itertools import product

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline Py_ssize_t _bsearch(i64[::1] keys, i64 target) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = keys.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if keys[mid] < target:
            lo = mid + 1
        else:
            hi = mid
    if lo < keys.shape[0] and keys[lo] == target:
        return lo
    return -1


cdef Py_ssize_t _gather(i64[:, ::1] coords, i64[::1] extents, i64[:, ::1] offs,
                        i64[::1] ukeys, i64[::1] starts, i64[::1] order,
                        Py_ssize_t point, i64[::1] buf) noexcept nogil:
    """Collect candidate indices from the 3^d cells around ``point``'s cell."""
    cdef Py_ssize_t d = coords.shape[1]
    cdef Py_ssize_t noffs = offs.shape[0]
    cdef Py_ssize_t m = 0, o, j, t, k
    cdef i64 nkey, c
    cdef bint ok
    for o in range(noffs):
        ok = True
        nkey = 0
        for k in range(d):
            c = coords[point, k] + offs[o, k]
            if c < 0 or c >= extents[k]:
                ok = False
                break
            nkey = nkey * extents[k] + c
        if not ok:
            continue
        j = _bsearch(ukeys, nkey)
        if j < 0:
            continue
        for t in range(starts[j], starts[j + 1]):
            buf[m] = order[t]
            m += 1
    return m


def dbscan_labels(X, double eps, long min_pts):
    """Grid-indexed DBSCAN labeling; output matches the numpy kernel exactly."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0]
    labels_arr = np.full(n, -2, dtype=np.int64)
    if n == 0:
        return labels_arr
    cdef Py_ssize_t d = X.shape[1]

    with np.errstate(over="ignore"):
        scaled = X / eps
    if not np.isfinite(scaled).all() or float(np.abs(scaled).max(initial=0.0)) > 2.0 ** 62:
        from ..errors import ParameterError
        raise ParameterError("epsilon is too small relative to the data extent")
    coords_arr = np.floor(scaled).astype(np.int64)
    coords_arr -= coords_arr.min(axis=0)
    extents_arr = (coords_arr.max(axis=0) + 1).astype(np.int64)

    prod = 1
    for e in extents_arr.tolist():
        prod *= int(e)
    if prod > 2 ** 62:
        raise OverflowError("cell grid too large for flat int64 keys")

    keys_arr = np.zeros(n, dtype=np.int64)
    for k in range(d):
        keys_arr *= int(extents_arr[k])
        keys_arr += coords_arr[:, k]
    order_arr = np.argsort(keys_arr, kind="stable").astype(np.int64)
    sorted_keys = keys_arr[order_arr]
    boundaries = np.flatnonzero(np.diff(sorted_keys)) + 1
    starts_arr = np.concatenate(([0], boundaries, [n])).astype(np.int64)
    ukeys_arr = np.ascontiguousarray(sorted_keys[starts_arr[:-1]])
    offs_arr = np.array(list(product((-1, 0, 1), repeat=d)), dtype=np.int64)

    cdef double[:, ::1] Xv = X
    cdef i64[:, ::1] coords = coords_arr
    cdef i64[::1] extents = extents_arr
    cdef i64[:, ::1] offs = offs_arr
    cdef i64[::1] ukeys = ukeys_arr
    cdef i64[::1] starts = starts_arr
    cdef i64[::1] order = order_arr
    cdef i64[::1] lab = labels_arr

    core_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] core = core_arr
    buf_arr = np.empty(n, dtype=np.int64)
    cdef i64[::1] buf = buf_arr
    stack_arr = np.empty(n, dtype=np.int64)
    cdef i64[::1] stack = stack_arr

    cdef double eps2 = eps * eps, acc, diff
    cdef Py_ssize_t ncells = starts_arr.shape[0] - 1
    cdef Py_ssize_t ci, m, t, u, kk, i, top
    cdef i64 p, q, nb, cid
    cdef long cnt

    with nogil:
        # Pass 1: core flags, candidates gathered once per cell.
        for ci in range(ncells):
            p = order[starts[ci]]
            m = _gather(coords, extents, offs, ukeys, starts, order, p, buf)
            for t in range(starts[ci], starts[ci + 1]):
                p = order[t]
                cnt = 0
                for u in range(m):
                    q = buf[u]
                    acc = 0.0
                    for kk in range(d):
                        diff = Xv[p, kk] - Xv[q, kk]
                        acc += diff * diff
                    if acc <= eps2:
                        cnt += 1
                        if cnt >= min_pts:
                            break
                if cnt >= min_pts:
                    core[p] = 1

        # Pass 2: expansion in input order.
        cid = 0
        for i in range(n):
            if lab[i] != -2:
                continue
            if not core[i]:
                lab[i] = -1
                continue
            lab[i] = cid
            stack[0] = i
            top = 1
            while top > 0:
                top -= 1
                q = stack[top]
                if not core[q]:
                    continue
                m = _gather(coords, extents, offs, ukeys, starts, order, q, buf)
                for u in range(m):
                    nb = buf[u]
                    acc = 0.0
                    for kk in range(d):
                        diff = Xv[q, kk] - Xv[nb, kk]
                        acc += diff * diff
                    if acc <= eps2:
                        if lab[nb] == -1:
                            lab[nb] = cid
                        elif lab[nb] == -2:
                            lab[nb] = cid
                            stack[top] = nb
                            top += 1
            cid += 1

    return labels_arr
