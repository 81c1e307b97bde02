"""Compiled inner loops for simple random walks on CSR graphs.

All kernels take uniforms in [0, 1) from the caller instead of drawing their
own, so the random stream (and therefore every result) is fixed by the
caller's Philox generator.  A move from ``cur`` consumes one uniform ``u`` and
goes to neighbour ``floor(u * deg(cur))``; an isolated vertex stays put.
"""
import numpy as np
from numba import njit

# state slots for the resumable cover kernels
TRIAL, CUR, STEPS, REMAINING, MILESTONE = range(5)
NOT_HIT = np.iinfo(np.int64).max


@njit(cache=True, nogil=True, inline="always")
def _move(indptr, indices, cur, u):
    lo = indptr[cur]
    d = indptr[cur + 1] - lo
    if d == 0:
        return cur
    j = int(u * d)
    if j >= d:
        j = d - 1
    return indices[lo + j]


@njit(cache=True, nogil=True)
def cover_batch(indptr, indices, start, uniforms, state, visited, steps_out,
                ms_targets, ms_out, step_cap):
    """Run cover walks from ``start`` until ``steps_out`` is filled.

    Resumable: returns 0 when ``uniforms`` ran out (call again with fresh
    uniforms), 1 when all trials finished, -1 when ``step_cap`` was hit.
    ``ms_out[t, j]`` is the step at which trial t had visited
    ``ms_targets[j]`` distinct vertices.
    """
    n = indptr.size - 1
    n_ms = ms_targets.size
    trial = state[TRIAL]
    cur = state[CUR]
    steps = state[STEPS]
    remaining = state[REMAINING]
    ms = state[MILESTONE]
    k = 0
    status = 1
    while trial < steps_out.size:
        if remaining < 0:
            visited[:] = False
            visited[start] = True
            cur = start
            steps = 0
            remaining = n - 1
            ms = 0
            while ms < n_ms and ms_targets[ms] <= 1:
                ms_out[trial, ms] = 0
                ms += 1
        while remaining > 0:
            if k >= uniforms.size:
                status = 0
                break
            if steps >= step_cap:
                status = -1
                break
            cur = _move(indptr, indices, cur, uniforms[k])
            k += 1
            steps += 1
            if not visited[cur]:
                visited[cur] = True
                remaining -= 1
                seen = n - remaining
                while ms < n_ms and ms_targets[ms] <= seen:
                    ms_out[trial, ms] = steps
                    ms += 1
        if status != 1:
            break
        steps_out[trial] = steps
        trial += 1
        remaining = -1
    state[TRIAL] = trial
    state[CUR] = cur
    state[STEPS] = steps
    state[REMAINING] = remaining
    state[MILESTONE] = ms
    return status


@njit(cache=True, nogil=True)
def cover_single(indptr, indices, uniforms, state, first_visit, step_cap):
    """One resumable cover walk recording first-visit times (``-1`` = not yet)."""
    cur = state[CUR]
    steps = state[STEPS]
    remaining = state[REMAINING]
    k = 0
    status = 1
    while remaining > 0:
        if k >= uniforms.size:
            status = 0
            break
        if steps >= step_cap:
            status = -1
            break
        cur = _move(indptr, indices, cur, uniforms[k])
        k += 1
        steps += 1
        if first_visit[cur] < 0:
            first_visit[cur] = steps
            remaining -= 1
    state[CUR] = cur
    state[STEPS] = steps
    state[REMAINING] = remaining
    return status


@njit(cache=True, nogil=True)
def return_counts(indptr, indices, v, uniforms):
    """Per trial (row of ``uniforms``): number of visits to v in steps 1..L
    and the first such step (``NOT_HIT`` if none), L = row length."""
    trials, L = uniforms.shape
    counts = np.zeros(trials, dtype=np.int64)
    first = np.full(trials, NOT_HIT, dtype=np.int64)
    for t in range(trials):
        cur = v
        for s in range(L):
            cur = _move(indptr, indices, cur, uniforms[t, s])
            if cur == v:
                counts[t] += 1
                if first[t] == NOT_HIT:
                    first[t] = s + 1
    return counts, first


@njit(cache=True, nogil=True)
def window_first_hits(indptr, indices, targets, T, uniforms):
    """Walks from a uniform start (first uniform of each row), then one move
    per remaining uniform.  Returns ``H[t, j]``: the first step s >= T at
    which trial t sits on ``targets[j]`` (``NOT_HIT`` if never)."""
    n = indptr.size - 1
    trials, L = uniforms.shape
    slot = np.full(n, -1, dtype=np.int64)
    for j in range(targets.size):
        slot[targets[j]] = j
    H = np.full((trials, targets.size), NOT_HIT, dtype=np.int64)
    for t in range(trials):
        cur = int(uniforms[t, 0] * n)
        if cur >= n:
            cur = n - 1
        if T <= 0 and slot[cur] >= 0:
            H[t, slot[cur]] = 0
        for s in range(1, L):
            cur = _move(indptr, indices, cur, uniforms[t, s])
            if s >= T:
                j = slot[cur]
                if j >= 0 and H[t, j] == NOT_HIT:
                    H[t, j] = s
    return H


@njit(cache=True, nogil=True)
def occupancy(indptr, indices, start, uniforms):
    """Visit counts over steps 1..len(uniforms) of one walk, and the end vertex."""
    n = indptr.size - 1
    counts = np.zeros(n, dtype=np.int64)
    cur = start
    for k in range(uniforms.size):
        cur = _move(indptr, indices, cur, uniforms[k])
        counts[cur] += 1
    return counts, cur
