"""Hot loops over bitmask arrays.

Every public function here has two paths: a numba-compiled loop and a plain
numpy (or plain Python) fallback, chosen once at import time by
:data:`emk._accel.USE_NUMBA`.  Both paths return identical results; the
benchmark in ``benchmarks/bench_kernels.py`` times them against each other.

Masks enter the compiled loops as ``int64`` views so that bitwise operations
never mix signed and unsigned types.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# popcount
# ---------------------------------------------------------------------------


@njit
def _popcount_jit(masks):
    out = np.empty(masks.shape[0], np.int64)
    for i in range(masks.shape[0]):
        x = masks[i]
        c = 0
        while x != 0:
            x &= x - 1
            c += 1
        out[i] = c
    return out


def _popcount_np(masks):
    return np.bitwise_count(masks.view(np.uint64)).astype(np.int64)


def popcount(masks) -> np.ndarray:
    """Cardinality of every mask in ``masks``."""
    arr = np.ascontiguousarray(masks, dtype=np.uint64).view(np.int64)
    if USE_NUMBA:
        return _popcount_jit(arr)
    return _popcount_np(arr)


# ---------------------------------------------------------------------------
# disjointness counts
# ---------------------------------------------------------------------------


@njit
def _count_disjoint_jit(queries, pool):
    out = np.zeros(queries.shape[0], np.int64)
    for i in range(queries.shape[0]):
        e = queries[i]
        c = 0
        for j in range(pool.shape[0]):
            if pool[j] & e == 0:
                c += 1
        out[i] = c
    return out


def _count_disjoint_np(queries, pool, chunk=1 << 22):
    out = np.zeros(queries.shape[0], np.int64)
    if pool.shape[0] == 0 or queries.shape[0] == 0:
        return out
    step = max(1, chunk // pool.shape[0])
    for lo in range(0, queries.shape[0], step):
        block = queries[lo:lo + step, None] & pool[None, :]
        out[lo:lo + step] = np.count_nonzero(block == 0, axis=1)
    return out


def count_disjoint(queries, pool) -> np.ndarray:
    """For each query mask, the number of pool masks disjoint from it."""
    q = np.ascontiguousarray(queries, dtype=np.uint64).view(np.int64)
    p = np.ascontiguousarray(pool, dtype=np.uint64).view(np.int64)
    if USE_NUMBA:
        return _count_disjoint_jit(q, p)
    return _count_disjoint_np(q, p)


# ---------------------------------------------------------------------------
# subset closure (OR zeta transform over the Boolean lattice)
# ---------------------------------------------------------------------------


@njit
def _subset_closure_jit(indicator, n):
    g = indicator.copy()
    size = 1 << n
    for i in range(n):
        bit = 1 << i
        for mask in range(size):
            if mask & bit and g[mask ^ bit]:
                g[mask] = True
    return g


def _subset_closure_np(indicator, n):
    g = indicator.copy()
    for i in range(n):
        view = g.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return g


def subset_closure(indicator: np.ndarray, n: int) -> np.ndarray:
    """``g[c]`` is True iff some marked mask is a subset of ``c``."""
    ind = np.ascontiguousarray(indicator, dtype=np.bool_)
    if ind.shape[0] != 1 << n:
        raise ValueError("indicator length must be 2**n")
    if USE_NUMBA:
        return _subset_closure_jit(ind, n)
    return _subset_closure_np(ind, n)


# ---------------------------------------------------------------------------
# weighted set packing over all submasks of [n]
# ---------------------------------------------------------------------------


@njit
def _packing_dp_jit(members, weights, starts, n):
    size = 1 << n
    value = np.zeros(size, np.int64)
    choice = np.full(size, -1, np.int64)
    for mask in range(1, size):
        low = 0
        while not (mask >> low) & 1:
            low += 1
        best = value[mask & (mask - 1)]
        pick = -1
        for k in range(starts[low], starts[low + 1]):
            x = members[k]
            if x & ~mask == 0:
                cand = weights[k] + value[mask ^ x]
                if cand > best:
                    best = cand
                    pick = k
        value[mask] = best
        choice[mask] = pick
    return value, choice


def _packing_dp_py(members, weights, starts, n):
    size = 1 << n
    value = np.zeros(size, np.int64)
    choice = np.full(size, -1, np.int64)
    groups = [(members[starts[v]:starts[v + 1]], weights[starts[v]:starts[v + 1]])
              for v in range(n)]
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        best = value[mask & (mask - 1)]
        pick = -1
        xs, ws = groups[low]
        if xs.shape[0]:
            ok = np.flatnonzero((xs & ~mask) == 0)
            if ok.shape[0]:
                cand = ws[ok] + value[mask ^ xs[ok]]
                top = int(np.argmax(cand))
                if cand[top] > best:
                    best = cand[top]
                    pick = starts[low] + ok[top]
        value[mask] = best
        choice[mask] = pick
    return value, choice


def packing_dp(members: np.ndarray, weights: np.ndarray, n: int):
    """Maximum-weight packing of nonempty masks inside every submask of [n].

    ``members`` must be nonempty masks sorted by lowest set bit (then value);
    returns ``(value, choice, order)`` where ``value[mask]`` is the optimum
    inside ``mask`` and ``choice[mask]`` the index (into the sorted order) of
    the member covering the lowest vertex of ``mask``, or -1 if that vertex
    stays uncovered.
    """
    m = np.ascontiguousarray(members, dtype=np.uint64).view(np.int64)
    w = np.ascontiguousarray(weights, dtype=np.int64)
    low = _lowbit_index(m)
    order = np.lexsort((m, low))
    m = np.ascontiguousarray(m[order])
    w = np.ascontiguousarray(w[order])
    low = low[order]
    starts = np.searchsorted(low, np.arange(n + 1)).astype(np.int64)
    if USE_NUMBA:
        value, choice = _packing_dp_jit(m, w, starts, n)
    else:
        value, choice = _packing_dp_py(m, w, starts, n)
    return value, choice, m


def _lowbit_index(masks: np.ndarray) -> np.ndarray:
    u = masks.view(np.uint64)
    low = u & (~u + np.uint64(1))
    return np.bitwise_count(low - np.uint64(1)).astype(np.int64)


# ---------------------------------------------------------------------------
# up-set branch and bound for e(n, s)
# ---------------------------------------------------------------------------


@njit
def _upset_search(n, s, lower, ties, cap):
    """Largest up-closed families on [n] (without the empty set) with nu < s.

    Subsets are decided in order of decreasing size, colex within a size.
    ``nu[mask]`` holds the matching number of the current family restricted
    to subsets of ``mask``.  Returns (best, nodes, solutions, count, overflow)
    where solutions are two-word bitsets over the 2**n subsets.
    """
    size = 1 << n
    full = size - 1
    k = size - 1
    order = np.empty(k, np.int64)
    pc = np.empty(size, np.int64)
    for mask in range(size):
        c = 0
        x = mask
        while x:
            x &= x - 1
            c += 1
        pc[mask] = c
    pos = 0
    for card in range(n, 0, -1):
        for mask in range(1, size):
            if pc[mask] == card:
                order[pos] = mask
                pos += 1

    status = np.zeros(size, np.int8)  # 0 undecided, 1 in, 2 out
    nu = np.zeros(size, np.int64)
    saved = np.zeros((k + 1, size), np.int64)
    state = np.zeros(k + 1, np.int8)
    possible = np.zeros(size, np.bool_)
    sol = np.zeros((cap, 2), np.int64)
    nsol = 0
    overflow = False
    best = lower
    found = False
    count_in = 0
    nodes = 0

    pos = 0
    while pos >= 0:
        if pos == k:
            record = False
            if count_in > best or not found:
                best = count_in
                found = True
                nsol = 0
                overflow = False
                record = True
            elif count_in == best and ties:
                record = True
            if record:
                if nsol < cap:
                    lo = 0
                    hi = 0
                    for mask in range(size):
                        if status[mask] == 1:
                            if mask < 64:
                                lo |= 1 << mask
                            else:
                                hi |= 1 << (mask - 64)
                    sol[nsol, 0] = lo
                    sol[nsol, 1] = hi
                    nsol += 1
                else:
                    overflow = True
            pos -= 1
            continue

        x = order[pos]
        st = state[pos]
        if st == 0:
            nodes += 1
            # optimistic bound: every undecided set that could still join
            ub = count_in
            for p in range(pos, k):
                y = order[p]
                ok = 1 + nu[full ^ y] < s
                if ok:
                    for i in range(n):
                        b = 1 << i
                        if not y & b:
                            z = y | b
                            if status[z] == 2 or (status[z] == 0 and not possible[z]):
                                ok = False
                                break
                possible[y] = ok
                if ok:
                    ub += 1
            if ub < best or (ub == best and found and not ties):
                pos -= 1
                continue
            for i in range(size):
                saved[pos, i] = nu[i]
            state[pos] = 1
            if possible[x]:
                allowed = True
                for i in range(n):
                    b = 1 << i
                    if not x & b and status[x | b] != 1:
                        allowed = False
                        break
                if allowed:
                    status[x] = 1
                    count_in += 1
                    comp = full ^ x
                    sub = comp
                    while True:
                        mask = x | sub
                        cand = 1 + nu[mask ^ x]
                        if cand > nu[mask]:
                            nu[mask] = cand
                        if sub == 0:
                            break
                        sub = (sub - 1) & comp
                    pos += 1
                    continue
            st = 1
        if st == 1:
            if status[x] == 1:
                count_in -= 1
                for i in range(size):
                    nu[i] = saved[pos, i]
            status[x] = 2
            state[pos] = 2
            pos += 1
            continue
        # st == 2: both branches done
        status[x] = 0
        state[pos] = 0
        pos -= 1
    return best, nodes, sol[:nsol], nsol, overflow


def upset_search(n: int, s: int, lower: int = 0, ties: bool = False, cap: int = 1 << 16):
    """Branch and bound over up-sets; see :func:`_upset_search`."""
    if not 1 <= n <= 7:
        raise ValueError("up-set search supports 1 <= n <= 7")
    return _upset_search(np.int64(n), np.int64(s), np.int64(lower), bool(ties), np.int64(cap))


# ---------------------------------------------------------------------------
# shifted-family branch and bound for the blocker minimum
# ---------------------------------------------------------------------------


@njit
def _shifted_search(elems, covers, weights, packs, qt, t, lower, max_nodes):
    """Max total weight of a Gale down-set of q-subsets of [qt] with no perfect matching.

    ``elems`` is a linear extension of the shifting order, ``covers[i]``
    lists indices of the lower covers of ``elems[i]`` (-1 padded).
    ``pm[mask]`` records whether the current family partitions ``mask``.
    ``packs`` lists edge-disjoint perfect matchings (as element indices);
    each one that could still be completed must lose its lightest open member,
    which tightens the optimistic bound.  ``lower`` must be strictly below
    some achievable weight; the search then only looks for better families.
    """
    k = elems.shape[0]
    size = 1 << qt
    full = size - 1
    pm = np.zeros(size, np.bool_)
    pm[0] = True
    trail = np.empty(size, np.int64)
    tlen = 0
    mark = np.zeros(k + 1, np.int64)
    status = np.zeros(k, np.int8)
    state = np.zeros(k + 1, np.int8)
    possible = np.zeros(k, np.bool_)
    weight_in = 0
    best = lower
    nodes = 0
    best_status = np.zeros(k, np.int8)

    pos = 0
    while pos >= 0:
        if pos == k:
            if weight_in > best:
                best = weight_in
                for i in range(k):
                    best_status[i] = status[i]
            pos -= 1
            continue
        x = elems[pos]
        st = state[pos]
        if st == 0:
            nodes += 1
            if nodes > max_nodes:
                return -1, nodes, best_status
            ub = weight_in
            for p in range(pos, k):
                ok = not pm[full ^ elems[p]]
                if ok:
                    for c in range(covers.shape[1]):
                        j = covers[p, c]
                        if j < 0:
                            break
                        if status[j] == 2 or (status[j] == 0 and not possible[j]):
                            ok = False
                            break
                possible[p] = ok
                if ok:
                    ub += weights[p]
            for row in range(packs.shape[0]):
                lightest = -1
                open_row = True
                for c in range(packs.shape[1]):
                    j = packs[row, c]
                    if status[j] == 1:
                        continue
                    if status[j] == 2 or not possible[j]:
                        open_row = False
                        break
                    if lightest < 0 or weights[j] < lightest:
                        lightest = weights[j]
                if open_row and lightest > 0:
                    ub -= lightest
            if ub <= best:
                pos -= 1
                continue
            mark[pos] = tlen
            state[pos] = 1
            if possible[pos]:
                allowed = True
                for c in range(covers.shape[1]):
                    j = covers[pos, c]
                    if j < 0:
                        break
                    if status[j] != 1:
                        allowed = False
                        break
                if allowed:
                    status[pos] = 1
                    weight_in += weights[pos]
                    comp = full ^ x
                    sub = comp
                    while True:
                        mask = x | sub
                        if not pm[mask] and pm[mask ^ x]:
                            pm[mask] = True
                            trail[tlen] = mask
                            tlen += 1
                        if sub == 0:
                            break
                        sub = (sub - 1) & comp
                    pos += 1
                    continue
            st = 1
        if st == 1:
            if status[pos] == 1:
                weight_in -= weights[pos]
                while tlen > mark[pos]:
                    tlen -= 1
                    pm[trail[tlen]] = False
            status[pos] = 2
            state[pos] = 2
            pos += 1
            continue
        status[pos] = 0
        state[pos] = 0
        pos -= 1
    return best, nodes, best_status


def shifted_search(elems, covers, weights, packs, qt: int, t: int, lower: int = -1,
                   max_nodes: int = 1 << 62):
    """Branch and bound over shifted families; see :func:`_shifted_search`.

    Returns best = -1 when the node budget runs out.
    """
    return _shifted_search(
        np.ascontiguousarray(elems, dtype=np.int64),
        np.ascontiguousarray(covers, dtype=np.int64),
        np.ascontiguousarray(weights, dtype=np.int64),
        np.ascontiguousarray(packs, dtype=np.int64),
        np.int64(qt),
        np.int64(t),
        np.int64(lower),
        np.int64(max_nodes),
    )
