"""Hot loops, each in two flavours.

Every kernel ``foo`` has a numba version ``foo_nb`` and a pure-numpy
version ``foo_np`` with identical results. The public name ``foo`` is bound
to one of them at import time (see :mod:`lllkit._accel`).

Conventions: outcome rows hold 1-based codomain values; domain positions in
``dom`` arrays are 0-based columns.
"""

from __future__ import annotations

import numpy as np

from lllkit._accel import HAVE_NUMBA, USE_NUMBA, njit, prange

BACKEND = "numba" if USE_NUMBA else "numpy"

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
RESTART_MIX = 0xD1B54A32D192ED03
MASK64 = (1 << 64) - 1


# --------------------------------------------------------------------------
# injection enumeration


def enumerate_injections_np(m: int, n: int) -> np.ndarray:
    rows = np.arange(1, n + 1, dtype=np.int32).reshape(n, 1)
    for _ in range(1, m):
        used = np.zeros((rows.shape[0], n), dtype=bool)
        used[np.arange(rows.shape[0])[:, None], rows - 1] = True
        parent, value = np.nonzero(~used)
        rows = np.hstack([rows[parent], (value + 1).astype(np.int32)[:, None]])
    return np.ascontiguousarray(rows)


@njit(cache=True)
def _enumerate_injections_nb(m, n, count):
    out = np.empty((count, m), np.int32)
    cur = np.zeros(m, np.int64)
    used = np.zeros(n + 1, np.bool_)
    row = 0
    depth = 0
    while depth >= 0:
        prev = cur[depth]
        if prev > 0:
            used[prev] = False
        v = prev + 1
        while v <= n and used[v]:
            v += 1
        if v > n:
            cur[depth] = 0
            depth -= 1
            continue
        cur[depth] = v
        used[v] = True
        if depth == m - 1:
            for c in range(m):
                out[row, c] = cur[c]
            row += 1
        else:
            depth += 1
            cur[depth] = 0
    return out


def enumerate_injections_nb(m: int, n: int) -> np.ndarray:
    count = 1
    for t in range(m):
        count *= n - t
    return _enumerate_injections_nb(m, n, count)


# --------------------------------------------------------------------------
# canonical event realisation


def extension_mask_np(outcomes: np.ndarray, dom: np.ndarray, img: np.ndarray) -> np.ndarray:
    if dom.size == 0:
        return np.ones(outcomes.shape[0], dtype=bool)
    return np.all(outcomes[:, dom] == img, axis=1)


@njit(cache=True, parallel=True)
def extension_mask_nb(outcomes, dom, img):
    rows = outcomes.shape[0]
    out = np.empty(rows, np.bool_)
    r = dom.shape[0]
    for w in prange(rows):
        ok = True
        for t in range(r):
            if outcomes[w, dom[t]] != img[t]:
                ok = False
                break
        out[w] = ok
    return out


# --------------------------------------------------------------------------
# per-outcome membership codes and subset sums (fast zeta transform)


def event_codes_np(masks: np.ndarray) -> np.ndarray:
    k = masks.shape[0]
    if k == 0:
        return np.zeros(masks.shape[1], dtype=np.int64)
    weights = np.left_shift(np.int64(1), np.arange(k, dtype=np.int64))
    return (masks.astype(np.int64) * weights[:, None]).sum(axis=0)


@njit(cache=True, parallel=True)
def event_codes_nb(masks):
    k = masks.shape[0]
    rows = masks.shape[1]
    out = np.zeros(rows, np.int64)
    for w in prange(rows):
        code = 0
        for j in range(k):
            if masks[j, w]:
                code |= 1 << j
        out[w] = code
    return out


def subset_sums_np(counts: np.ndarray) -> np.ndarray:
    """``out[S] = sum(counts[T] for T subset of S)`` over bitmask indices."""
    g = np.array(counts, dtype=np.int64, copy=True)
    size = g.shape[0]
    bit = 1
    while bit < size:
        view = g.reshape(-1, 2, bit)
        view[:, 1, :] += view[:, 0, :]
        bit <<= 1
    return g


@njit(cache=True)
def subset_sums_nb(counts):
    g = counts.astype(np.int64).copy()
    size = g.shape[0]
    bit = 1
    while bit < size:
        for s in range(size):
            if s & bit:
                g[s] += g[s ^ bit]
        bit <<= 1
    return g


# --------------------------------------------------------------------------
# pairwise conflict matrix over dense matching tables
#
# fwd[a, u] is the 1-based image of domain point u under matching a (0 if
# u is outside its domain); inv[a, v] is the 1-based preimage of codomain
# point v (0 if outside its image).


def conflict_matrix_np(fwd: np.ndarray, inv: np.ndarray, chunk: int = 256) -> np.ndarray:
    k = fwd.shape[0]
    out = np.zeros((k, k), dtype=bool)
    for start in range(0, k, chunk):
        stop = min(start + chunk, k)
        a = fwd[start:stop, None, :]
        b = fwd[None, :, :]
        clash = ((a != 0) & (b != 0) & (a != b)).any(axis=2)
        a = inv[start:stop, None, :]
        b = inv[None, :, :]
        clash |= ((a != 0) & (b != 0) & (a != b)).any(axis=2)
        out[start:stop] = clash
    np.fill_diagonal(out, False)
    return out


@njit(cache=True)
def conflict_matrix_nb(fwd, inv):
    k = fwd.shape[0]
    m = fwd.shape[1]
    n = inv.shape[1]
    out = np.zeros((k, k), np.bool_)
    for a in range(k):
        for b in range(a + 1, k):
            clash = False
            for u in range(m):
                x = fwd[a, u]
                y = fwd[b, u]
                if x != 0 and y != 0 and x != y:
                    clash = True
                    break
            if not clash:
                for v in range(n):
                    x = inv[a, v]
                    y = inv[b, v]
                    if x != 0 and y != 0 and x != y:
                        clash = True
                        break
            out[a, b] = clash
            out[b, a] = clash
    return out


# --------------------------------------------------------------------------
# violated forbidden matchings for a single witness
#
# Matchings are packed CSR-style: matching t owns dom/img[offsets[t]:offsets[t+1]].


def violated_np(witness: np.ndarray, offsets: np.ndarray, dom: np.ndarray, img: np.ndarray, seg: np.ndarray) -> np.ndarray:
    k = offsets.shape[0] - 1
    if k == 0:
        return np.empty(0, dtype=np.int64)
    miss = np.bincount(seg, weights=(witness[dom] != img), minlength=k)
    return np.flatnonzero(miss == 0)


@njit(cache=True)
def violated_nb(witness, offsets, dom, img, seg):
    k = offsets.shape[0] - 1
    buf = np.empty(k, np.int64)
    count = 0
    for t in range(k):
        hit = True
        for q in range(offsets[t], offsets[t + 1]):
            if witness[dom[q]] != img[q]:
                hit = False
                break
        if hit:
            buf[count] = t
            count += 1
    return buf[:count]


def first_violated_np(witness, offsets, dom, img, seg) -> int:
    hits = violated_np(witness, offsets, dom, img, seg)
    return int(hits[0]) if hits.size else -1


@njit(cache=True)
def first_violated_nb(witness, offsets, dom, img, seg):
    k = offsets.shape[0] - 1
    for t in range(k):
        hit = True
        for q in range(offsets[t], offsets[t + 1]):
            if witness[dom[q]] != img[q]:
                hit = False
                break
        if hit:
            return t
    return -1


# --------------------------------------------------------------------------
# seeded resampling search
#
# The generator is SplitMix64. Restart r starts from the first SplitMix64
# output of state ``seed ^ (r * RESTART_MIX)``. A uniform draw below k is
# ``next() % k``.


def _splitmix_py(state: int) -> tuple[int, int]:
    state = (state + GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return state, z ^ (z >> 31)


def search_np(m, n, offsets, dom, img, seed, max_restarts, max_steps, random_select):
    """Python driver over the numpy violation kernel.

    Returns ``(found, witness, restart, total_steps, steps_in_restart)``.
    """
    k = offsets.shape[0] - 1
    seg = np.repeat(np.arange(k, dtype=np.int64), np.diff(offsets))
    seed &= MASK64
    total = 0
    perm = np.empty(n, dtype=np.int64)
    for restart in range(max_restarts):
        _, state = _splitmix_py(seed ^ ((restart * RESTART_MIX) & MASK64))
        perm[:] = np.arange(1, n + 1)
        for i in range(m):
            state, z = _splitmix_py(state)
            j = i + z % (n - i)
            perm[i], perm[j] = perm[j], perm[i]
        steps = 0
        while True:
            if random_select:
                hits = violated_np(perm, offsets, dom, img, seg)
                if hits.size == 0:
                    return True, perm[:m].copy(), restart, total, steps
                if steps == max_steps:
                    break
                state, z = _splitmix_py(state)
                idx = int(hits[z % hits.size])
            else:
                idx = first_violated_np(perm, offsets, dom, img, seg)
                if idx < 0:
                    return True, perm[:m].copy(), restart, total, steps
                if steps == max_steps:
                    break
            steps += 1
            total += 1
            for q in range(offsets[idx], offsets[idx + 1]):
                u = int(dom[q])
                if m == n:
                    if n < 2:
                        continue
                    state, z = _splitmix_py(state)
                    j = z % (n - 1)
                    if j >= u:
                        j += 1
                else:
                    state, z = _splitmix_py(state)
                    j = m + z % (n - m)
                perm[u], perm[j] = perm[j], perm[u]
    return False, perm[:m].copy(), max_restarts, total, 0


@njit(cache=True)
def _splitmix_nb(state):
    state = state + np.uint64(GOLDEN)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return state, z ^ (z >> np.uint64(31))


@njit(cache=True)
def _below_nb(z, k):
    return np.int64(z % np.uint64(k))


@njit(cache=True)
def _search_nb(m, n, offsets, dom, img, seed, max_restarts, max_steps, random_select):
    k = offsets.shape[0] - 1
    total = 0
    perm = np.empty(n, np.int64)
    buf = np.empty(max(k, 1), np.int64)
    for restart in range(max_restarts):
        _, state = _splitmix_nb(seed ^ (np.uint64(restart) * np.uint64(RESTART_MIX)))
        for v in range(n):
            perm[v] = v + 1
        for i in range(m):
            state, z = _splitmix_nb(state)
            j = i + _below_nb(z, n - i)
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
        steps = 0
        while True:
            count = 0
            for t in range(k):
                hit = True
                for q in range(offsets[t], offsets[t + 1]):
                    if perm[dom[q]] != img[q]:
                        hit = False
                        break
                if hit:
                    buf[count] = t
                    count += 1
                    if not random_select:
                        break
            if count == 0:
                return True, perm[:m].copy(), restart, total, steps
            if steps == max_steps:
                break
            if random_select:
                state, z = _splitmix_nb(state)
                idx = buf[_below_nb(z, count)]
            else:
                idx = buf[0]
            steps += 1
            total += 1
            for q in range(offsets[idx], offsets[idx + 1]):
                u = dom[q]
                if m == n:
                    if n < 2:
                        continue
                    state, z = _splitmix_nb(state)
                    j = _below_nb(z, n - 1)
                    if j >= u:
                        j += 1
                else:
                    state, z = _splitmix_nb(state)
                    j = m + _below_nb(z, n - m)
                tmp = perm[u]
                perm[u] = perm[j]
                perm[j] = tmp
    return False, perm[:m].copy(), max_restarts, total, 0


def search_nb(m, n, offsets, dom, img, seed, max_restarts, max_steps, random_select):
    found, witness, restart, total, steps = _search_nb(
        m, n, offsets, dom, img, np.uint64(seed & MASK64), max_restarts, max_steps, bool(random_select)
    )
    return bool(found), witness, int(restart), int(total), int(steps)


# --------------------------------------------------------------------------
# dispatch

if not HAVE_NUMBA:  # pragma: no cover
    enumerate_injections_nb = enumerate_injections_np
    extension_mask_nb = extension_mask_np
    event_codes_nb = event_codes_np
    subset_sums_nb = subset_sums_np
    conflict_matrix_nb = conflict_matrix_np
    violated_nb = violated_np
    first_violated_nb = first_violated_np
    search_nb = search_np

if USE_NUMBA:
    enumerate_injections = enumerate_injections_nb
    extension_mask = extension_mask_nb
    event_codes = event_codes_nb
    subset_sums = subset_sums_nb
    conflict_matrix = conflict_matrix_nb
    violated = violated_nb
    first_violated = first_violated_nb
    search = search_nb
else:
    enumerate_injections = enumerate_injections_np
    extension_mask = extension_mask_np
    event_codes = event_codes_np
    subset_sums = subset_sums_np
    conflict_matrix = conflict_matrix_np
    violated = violated_np
    first_violated = first_violated_np
    search = search_np
