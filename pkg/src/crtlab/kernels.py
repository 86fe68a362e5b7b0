"""Hot array kernels behind the samplers and sums.

Every kernel is a deterministic array program: randomness is drawn by the
caller (from per-replicate streams) and passed in, so the compiled and
fallback paths produce identical samples.  With numba available (and
``CRTLAB_NO_JIT`` unset) the loop bodies are compiled with ``@njit``;
otherwise the pure numpy/Python implementations below are used.
``benchmarks/bench_kernels.py`` compares the two paths.
"""
from __future__ import annotations

import math

import numpy as np

from ._jit import USING_NUMBA, njit

__all__ = [
    "USING_NUMBA",
    "remy_build",
    "euler_tour",
    "subtree_leaf_counts",
    "build_argmin_table",
    "batch_range_argmin",
    "count_distinct_pair_lcas",
    "count_distinct_argmins",
    "dyck_heights_from_bridge",
    "greedy_disjoint_count",
    "chain_scan",
    "builtin_weight_pair_sum",
    "expected_sk_pairsum",
    "mis_exhaustive",
]


# ---------------------------------------------------------------------------
# tree construction (leaf-insertion process)
# ---------------------------------------------------------------------------

def _remy_build_impl(choices):
    # Node layout: 0 = planted root, 1 = leaf 0, then step i adds internal
    # node 2i and leaf node 2i+1.  choices[i-1] is uniform on
    # [0, 2*(2i-1)): edge id = choice >> 1, side = choice & 1, and edge e
    # joins node e+1 to its parent.
    n = choices.shape[0] + 1
    nn = 2 * n
    parent = np.full(nn, -1, np.int64)
    left = np.full(nn, -1, np.int64)
    right = np.full(nn, -1, np.int64)
    left[0] = 1
    parent[1] = 0
    for i in range(1, n):
        c = choices[i - 1]
        v = (c >> 1) + 1
        side = c & 1
        w = 2 * i
        u = 2 * i + 1
        p = parent[v]
        if left[p] == v:
            left[p] = w
        else:
            right[p] = w
        parent[w] = p
        parent[v] = w
        parent[u] = w
        if side == 0:
            left[w] = u
            right[w] = v
        else:
            left[w] = v
            right[w] = u
    return parent, left, right


def _euler_tour_impl(left, right):
    # Returns (euler, edepth, first, last): the visit sequence, its depth
    # profile, and the first/last visit index of every node.
    nn = left.shape[0]
    m = 2 * nn - 1
    euler = np.empty(m, np.int64)
    edepth = np.empty(m, np.int64)
    first = np.full(nn, -1, np.int64)
    last = np.full(nn, -1, np.int64)
    depth = np.zeros(nn, np.int64)
    stack_node = np.empty(nn + 1, np.int64)
    stack_state = np.empty(nn + 1, np.int64)
    sp = 0
    stack_node[0] = 0
    stack_state[0] = 0
    idx = 0
    while sp >= 0:
        u = stack_node[sp]
        st = stack_state[sp]
        if st == 0:
            first[u] = idx
        euler[idx] = u
        edepth[idx] = depth[u]
        last[u] = idx
        idx += 1
        ch = np.int64(-1)
        if st == 0:
            if left[u] != -1:
                ch = left[u]
            elif right[u] != -1:
                ch = right[u]
        elif st == 1:
            if left[u] != -1 and right[u] != -1:
                ch = right[u]
        if ch != -1:
            stack_state[sp] = st + 1
            depth[ch] = depth[u] + 1
            sp += 1
            stack_node[sp] = ch
            stack_state[sp] = 0
        else:
            sp -= 1
    return euler, edepth, first, last


def _subtree_leaf_counts_impl(left, right):
    nn = left.shape[0]
    counts = np.zeros(nn, np.int64)
    order = np.empty(nn, np.int64)
    stack = np.empty(nn + 1, np.int64)
    sp = 0
    stack[0] = 0
    top = 0
    while sp >= 0:
        u = stack[sp]
        sp -= 1
        order[top] = u
        top += 1
        if left[u] != -1:
            sp += 1
            stack[sp] = left[u]
        if right[u] != -1:
            sp += 1
            stack[sp] = right[u]
    for i in range(nn - 1, -1, -1):
        u = order[i]
        if left[u] == -1 and right[u] == -1:
            counts[u] = 1
        else:
            c = np.int64(0)
            if left[u] != -1:
                c += counts[left[u]]
            if right[u] != -1:
                c += counts[right[u]]
            counts[u] = c
    return counts


# ---------------------------------------------------------------------------
# sparse-table range argmin (leftmost tie-break)
# ---------------------------------------------------------------------------

def _table_levels(m):
    lv = 1
    while (1 << lv) <= m:
        lv += 1
    return lv


def _build_argmin_table_loop(values):
    m = values.shape[0]
    lv = 1
    while (1 << lv) <= m:
        lv += 1
    table = np.empty((lv, m), np.int32)
    for i in range(m):
        table[0, i] = i
    for j in range(1, lv):
        half = 1 << (j - 1)
        span = 1 << j
        for i in range(m - span + 1):
            a = table[j - 1, i]
            b = table[j - 1, i + half]
            if values[b] < values[a]:
                table[j, i] = b
            else:
                table[j, i] = a
    return table


def _build_argmin_table_numpy(values):
    m = values.shape[0]
    lv = _table_levels(m)
    table = np.empty((lv, m), np.int32)
    table[0] = np.arange(m, dtype=np.int32)
    for j in range(1, lv):
        half = 1 << (j - 1)
        span = 1 << j
        a = table[j - 1, : m - span + 1]
        b = table[j - 1, half : m - span + 1 + half]
        table[j, : m - span + 1] = np.where(values[b] < values[a], b, a)
    return table


def _batch_range_argmin_loop(table, values, lo, hi):
    nq = lo.shape[0]
    out = np.empty(nq, np.int64)
    for t in range(nq):
        l = lo[t]
        r = hi[t]
        span = r - l + 1
        j = 0
        while (1 << (j + 1)) <= span:
            j += 1
        a = table[j, l]
        b = table[j, r - (1 << j) + 1]
        if values[a] < values[b]:
            out[t] = a
        elif values[b] < values[a]:
            out[t] = b
        else:
            out[t] = a if a < b else b
    return out


def _batch_range_argmin_numpy(table, values, lo, hi):
    span = hi - lo + 1
    # exact for spans < 2**52; log2 is exact at powers of two so floor is safe
    j = np.floor(np.log2(span)).astype(np.int64)
    a = table[j, lo].astype(np.int64)
    b = table[j, hi - (1 << j) + 1].astype(np.int64)
    va = values[a]
    vb = values[b]
    out = np.where(va < vb, a, b)
    ties = va == vb
    out[ties] = np.minimum(a[ties], b[ties])
    return out


def _count_distinct_sorted(arr):
    n = arr.shape[0]
    if n == 0:
        return 0
    s = np.sort(arr)
    cnt = 1
    for i in range(1, n):
        if s[i] != s[i - 1]:
            cnt += 1
    return cnt


def _count_distinct_pair_lcas_loop(euler, edepth, first, table, leaf_nodes):
    k = leaf_nodes.shape[0] // 2
    lcas = np.empty(k, np.int64)
    for t in range(k):
        l = first[leaf_nodes[2 * t]]
        r = first[leaf_nodes[2 * t + 1]]
        if l > r:
            l, r = r, l
        span = r - l + 1
        j = 0
        while (1 << (j + 1)) <= span:
            j += 1
        a = table[j, l]
        b = table[j, r - (1 << j) + 1]
        if edepth[b] < edepth[a]:
            a = b
        lcas[t] = euler[a]
    return _count_distinct_sorted(lcas)


def _count_distinct_pair_lcas_numpy(euler, edepth, first, table, leaf_nodes):
    pos = first[leaf_nodes]
    lo = np.minimum(pos[0::2], pos[1::2])
    hi = np.maximum(pos[0::2], pos[1::2])
    idx = _batch_range_argmin_numpy(table, edepth, lo, hi)
    return int(np.unique(euler[idx]).shape[0])


def _count_distinct_argmins_loop(table, values, lo, hi):
    idx = _batch_range_argmin_loop(table, values, lo, hi)
    return _count_distinct_sorted(idx)


def _count_distinct_argmins_numpy(table, values, lo, hi):
    idx = _batch_range_argmin_numpy(table, values, lo, hi)
    return int(np.unique(idx).shape[0])


# ---------------------------------------------------------------------------
# lattice excursions
# ---------------------------------------------------------------------------

def _dyck_heights_from_bridge_loop(steps):
    # steps: +-1 with total sum -1; rotate just past the first prefix
    # minimum and drop the final down-step (cycle lemma).
    m = steps.shape[0]
    s = np.int64(0)
    best = np.int64(1)
    besti = np.int64(-1)
    for i in range(m):
        s += steps[i]
        if s < best:
            best = s
            besti = i
    heights = np.empty(m, np.int64)
    heights[0] = 0
    for t in range(m - 1):
        j = besti + 1 + t
        if j >= m:
            j -= m
        heights[t + 1] = heights[t] + steps[j]
    return heights


def _dyck_heights_from_bridge_numpy(steps):
    ps = np.cumsum(steps)
    i0 = int(np.argmin(ps))
    rot = np.concatenate((steps[i0 + 1 :], steps[: i0 + 1]))
    heights = np.empty(steps.shape[0], np.int64)
    heights[0] = 0
    np.cumsum(rot[:-1], out=heights[1:])
    return heights


# ---------------------------------------------------------------------------
# interval scans
# ---------------------------------------------------------------------------

def _greedy_disjoint_count_impl(lo_by_hi, hi_sorted):
    # inputs sorted by right endpoint; earliest-right-endpoint greedy
    cnt = np.int64(0)
    last = -np.inf
    for i in range(lo_by_hi.shape[0]):
        if lo_by_hi[i] > last:
            cnt += 1
            last = hi_sorted[i]
    return cnt


def _chain_scan_impl(mn_sorted, mx_sorted):
    # inputs sorted by max coordinate; keep points dominating the previous
    # selected max in both coordinates
    n = mn_sorted.shape[0]
    out = np.empty(n, np.float64)
    thr = -1.0
    c = 0
    for i in range(n):
        if mn_sorted[i] > thr:
            out[c] = mx_sorted[i]
            thr = mx_sorted[i]
            c += 1
    return out[:c].copy()


# ---------------------------------------------------------------------------
# divisor-weighted lattice sums (built-in weight fast path)
# ---------------------------------------------------------------------------

def _builtin_weight_pair_sum_loop(K, A, B, jlo, jhi, pref):
    total = 0.0
    for p in range(A, B + 1):
        qlo = (jlo + p - 1) // p
        if qlo < A:
            qlo = A
        qhi = jhi // p
        if qhi > B:
            qhi = B
        for q in range(qlo, qhi + 1):
            x = (p * q) / K
            total += pref * (1.0 - math.exp(-x)) / (x * math.sqrt(x))
    return total


def _builtin_weight_pair_sum_numpy(K, A, B, jlo, jhi, pref):
    total = 0.0
    for p in range(A, B + 1):
        qlo = max(A, -((-jlo) // p))
        qhi = min(B, jhi // p)
        if qlo > qhi:
            continue
        x = (p / K) * np.arange(qlo, qhi + 1, dtype=np.float64)
        total += float(np.sum((1.0 - np.exp(-x)) / (x * np.sqrt(x))))
    return pref * total


# ---------------------------------------------------------------------------
# matching-probability double sum (float path)
# ---------------------------------------------------------------------------

def _expected_sk_pairsum_impl(K, lgcat):
    # sum of P(p,q,K)*C(p,q,K) over p,q >= 1, p+q <= K; the caller
    # multiplies by (K-1).  C is the alternating inclusion-exclusion
    # series; for pq/K > 40 the series value is 1 within 2*exp(-pq/(2K)).
    logden = lgcat[K - 1] + math.log(K - 1.0)
    total = 0.0
    for p in range(1, K):
        for q in range(1, K - p + 1):
            r1 = K - p - q
            logp = (
                lgcat[p - 1]
                + lgcat[q - 1]
                + lgcat[r1]
                + math.log(K + 1.0 - p - q)
                - logden
            )
            if logp < -80.0:
                continue
            x = (p * q) / K
            if x > 40.0:
                cval = 1.0 - math.exp(-x)
            else:
                mn = p if p < q else q
                t = (p * q) / (K - 1.0)
                acc = 0.0
                sign = 1.0
                l = 1
                while True:
                    acc += sign * t
                    if l == mn:
                        break
                    ratio = ((p - l) * (q - l)) / ((K - 2.0 * l - 1.0) * (l + 1.0))
                    t = t * ratio
                    if ratio < 1.0 and t < 1e-17:
                        break
                    sign = -sign
                    l += 1
                cval = acc
            total += math.exp(logp) * cval
    return total


# ---------------------------------------------------------------------------
# exhaustive independent set (bitmask DP)
# ---------------------------------------------------------------------------

def _mis_exhaustive_impl(conflict):
    k = conflict.shape[0]
    size = 1 << k
    best = np.zeros(size, np.int64)
    for m in range(1, size):
        i = 0
        while (m >> i) & 1 == 0:
            i += 1
        skip = best[m ^ (1 << i)]
        take = 1 + best[m & ~(conflict[i] | (1 << i))]
        best[m] = take if take > skip else skip
    return best[size - 1]


if USING_NUMBA:
    remy_build = njit(_remy_build_impl)
    euler_tour = njit(_euler_tour_impl)
    subtree_leaf_counts = njit(_subtree_leaf_counts_impl)
    build_argmin_table = njit(_build_argmin_table_loop)
    batch_range_argmin = njit(_batch_range_argmin_loop)
    count_distinct_pair_lcas = njit(_count_distinct_pair_lcas_loop)
    count_distinct_argmins = njit(_count_distinct_argmins_loop)
    dyck_heights_from_bridge = njit(_dyck_heights_from_bridge_loop)
    greedy_disjoint_count = njit(_greedy_disjoint_count_impl)
    chain_scan = njit(_chain_scan_impl)
    builtin_weight_pair_sum = njit(_builtin_weight_pair_sum_loop)
    expected_sk_pairsum = njit(_expected_sk_pairsum_impl)
    mis_exhaustive = njit(_mis_exhaustive_impl)
else:
    remy_build = _remy_build_impl
    euler_tour = _euler_tour_impl
    subtree_leaf_counts = _subtree_leaf_counts_impl
    build_argmin_table = _build_argmin_table_numpy
    batch_range_argmin = _batch_range_argmin_numpy
    count_distinct_pair_lcas = _count_distinct_pair_lcas_numpy
    count_distinct_argmins = _count_distinct_argmins_numpy
    dyck_heights_from_bridge = _dyck_heights_from_bridge_numpy
    greedy_disjoint_count = _greedy_disjoint_count_impl
    chain_scan = _chain_scan_impl
    builtin_weight_pair_sum = _builtin_weight_pair_sum_numpy
    expected_sk_pairsum = _expected_sk_pairsum_impl
    mis_exhaustive = _mis_exhaustive_impl
