"""Compiled inner loops for the exhaustive scans.

Everything here is 0-based and array-in/array-out; the public modules own the
1-based types and the report logic.
"""

import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is too old for numba and only produces a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True, parallel=True)
def scan_strata_xor(words, xs_rows, ks):
    """Scan every canonical ys-completion of each xs row, q = 2.

    ``words`` is the bit-packed label table, shape (n, n, W).  For row r the
    returned ``checked[r]`` counts leaves visited; if a zero-sum cycle is met
    the scan of that row stops there and ``fail_ys[r, :k]`` holds its ys.
    """
    R = xs_rows.shape[0]
    n = words.shape[0]
    W = words.shape[2]
    checked = np.zeros(R, np.int64)
    failed = np.zeros(R, np.bool_)
    fail_ys = np.full((R, n), -1, np.int64)
    for r in prange(R):
        k = ks[r]
        w = np.empty((k, n, W), np.uint64)
        for i in range(k):
            a = xs_rows[r, i]
            b = xs_rows[r, (i + 1) % k]
            for y in range(n):
                for t in range(W):
                    w[i, y, t] = words[a, y, t] ^ words[b, y, t]
        acc = np.zeros((k + 1, W), np.uint64)
        ys = np.full(k, -1, np.int64)
        used = np.zeros(n, np.bool_)
        count = 0
        level = 0
        while level >= 0:
            if ys[level] >= 0:
                used[ys[level]] = False
            y = ys[level] + 1
            if level == k - 1:
                while y < n and (used[y] or y <= ys[0]):
                    y += 1
            else:
                while y < n and used[y]:
                    y += 1
            if y >= n:
                ys[level] = -1
                level -= 1
                continue
            ys[level] = y
            if level == k - 1:
                count += 1
                zero = True
                for t in range(W):
                    if acc[level, t] ^ w[level, y, t] != 0:
                        zero = False
                        break
                if zero:
                    failed[r] = True
                    for i in range(k):
                        fail_ys[r, i] = ys[i]
                    break
                continue
            used[y] = True
            for t in range(W):
                acc[level + 1, t] = acc[level, t] ^ w[level, y, t]
            level += 1
            ys[level] = -1
        checked[r] = count
    return checked, failed, fail_ys


@njit(cache=True, parallel=True)
def scan_strata_mod(coords, q, xs_rows, ks):
    """Same scan as :func:`scan_strata_xor` for Z_q^d with alternating signs."""
    R = xs_rows.shape[0]
    n = coords.shape[0]
    d = coords.shape[2]
    checked = np.zeros(R, np.int64)
    failed = np.zeros(R, np.bool_)
    fail_ys = np.full((R, n), -1, np.int64)
    for r in prange(R):
        k = ks[r]
        w = np.empty((k, n, d), np.int64)
        for i in range(k):
            a = xs_rows[r, i]
            b = xs_rows[r, (i + 1) % k]
            for y in range(n):
                for t in range(d):
                    w[i, y, t] = (coords[a, y, t] - coords[b, y, t]) % q
        acc = np.zeros((k + 1, d), np.int64)
        ys = np.full(k, -1, np.int64)
        used = np.zeros(n, np.bool_)
        count = 0
        level = 0
        while level >= 0:
            if ys[level] >= 0:
                used[ys[level]] = False
            y = ys[level] + 1
            if level == k - 1:
                while y < n and (used[y] or y <= ys[0]):
                    y += 1
            else:
                while y < n and used[y]:
                    y += 1
            if y >= n:
                ys[level] = -1
                level -= 1
                continue
            ys[level] = y
            if level == k - 1:
                count += 1
                zero = True
                for t in range(d):
                    if (acc[level, t] + w[level, y, t]) % q != 0:
                        zero = False
                        break
                if zero:
                    failed[r] = True
                    for i in range(k):
                        fail_ys[r, i] = ys[i]
                    break
                continue
            used[y] = True
            for t in range(d):
                acc[level + 1, t] = (acc[level, t] + w[level, y, t]) % q
            level += 1
            ys[level] = -1
        checked[r] = count
    return checked, failed, fail_ys


@njit(cache=True)
def is_cycle_arr(tau):
    n = tau.shape[0]
    moved = 0
    start = -1
    for i in range(n):
        if tau[i] != i:
            moved += 1
            if start < 0:
                start = i
    if moved == 0:
        return False
    length = 1
    j = tau[start]
    while j != start:
        length += 1
        j = tau[j]
    return length == moved


@njit(cache=True, parallel=True)
def first_adjacent(P, Pinv):
    """For each row a, the smallest b > a with P[a] o P[b]^-1 a cycle, else -1."""
    K, n = P.shape
    out = np.full(K, -1, np.int64)
    for a in prange(K):
        tau = np.empty(n, np.int64)
        for b in range(a + 1, K):
            for i in range(n):
                tau[i] = P[a, Pinv[b, i]]
            if is_cycle_arr(tau):
                out[a] = b
                break
    return out


@njit(cache=True, parallel=True)
def pair_type_keys(P, Pinv, a0, a1, radix):
    """Cycle-type key of P[a] o P[b]^-1 for a0 <= a < a1 and all b.

    The key is sum_l m_l * radix[l], with m_l the number of l-cycles.
    """
    K, n = P.shape
    out = np.zeros((a1 - a0, K), np.int64)
    for a in prange(a0, a1):
        tau = np.empty(n, np.int64)
        seen = np.empty(n, np.bool_)
        for b in range(K):
            for i in range(n):
                tau[i] = P[a, Pinv[b, i]]
                seen[i] = False
            key = 0
            for i in range(n):
                if seen[i]:
                    continue
                length = 0
                j = i
                while not seen[j]:
                    seen[j] = True
                    length += 1
                    j = tau[j]
                key += radix[length]
            out[a - a0, b] = key
    return out


@njit(cache=True)
def count_full_cycles(P, Pinv):
    """Number of ordered pairs (a, b) with P[a] o P[b]^-1 an n-cycle."""
    K, n = P.shape
    total = 0
    tau = np.empty(n, np.int64)
    for a in range(K):
        for b in range(K):
            for i in range(n):
                tau[i] = P[a, Pinv[b, i]]
            length = 1
            j = tau[0]
            while j != 0:
                length += 1
                j = tau[j]
            if length == n:
                total += 1
    return total
