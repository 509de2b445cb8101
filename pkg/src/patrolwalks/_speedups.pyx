# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels.

Operation-for-operation mirror of ``patrolwalks._speedups_py`` (same
iteration order, same tie-breaking); see that module for the semantics.
Callers are responsible for 64-bit headroom checks.
"""

from itertools import combinations_with_replacement

import numpy as np

cimport numpy as cnp
from cython.operator cimport dereference
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

# compiled-size caps; the dispatcher routes anything larger to the pure module
MAX_N = 8
MAX_R = 4


def walk_feasible(cnp.int64_t[:] verts, cnp.int64_t[:] holds,
                  cnp.int64_t[:, :] dist, cnp.int64_t[:] r,
                  long long override_last_leg):
    cdef Py_ssize_t k = verts.shape[0]
    if k == 1:
        return True
    cdef Py_ssize_t n = r.shape[0]
    cdef cnp.int64_t[:] deadline = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i
    cdef int copy
    cdef long long t = 0
    cdef long long v
    for i in range(n):
        deadline[i] = r[i]
    for copy in range(2):
        for i in range(k):
            v = verts[i]
            if copy or i:
                if t > deadline[v]:
                    return False
            t += holds[i]
            deadline[v] = t + r[v]
            if copy == 1 and i == k - 1:
                break
            if override_last_leg >= 0 and i == k - 2:
                t += override_last_leg
            else:
                t += dist[v, verts[(i + 1) % k]]
    return True


def two_opt(cnp.int64_t[:] order_in, cnp.int64_t[:, :] dist):
    cdef Py_ssize_t n = order_in.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[:] o = out
    cdef Py_ssize_t i, j, lo, hi
    for i in range(n):
        o[i] = order_in[i]
    if n < 4:
        return [int(x) for x in out]
    cdef bint improved = True
    cdef long long a_prev, a, b, b_next, tmp
    while improved:
        improved = False
        for i in range(n - 1):
            a_prev = o[n - 1] if i == 0 else o[i - 1]
            a = o[i]
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue
                b = o[j]
                b_next = o[0] if j == n - 1 else o[j + 1]
                if (dist[a_prev, b] + dist[a, b_next]
                        < dist[a_prev, a] + dist[b, b_next]):
                    lo = i
                    hi = j
                    while lo < hi:
                        tmp = o[lo]
                        o[lo] = o[hi]
                        o[hi] = tmp
                        lo += 1
                        hi -= 1
                    improved = True
                    break
            if improved:
                break
    return [int(x) for x in out]


# ---------------------------------------------------------------------------
# Oracle lasso search (see the pure module for the state model)
# ---------------------------------------------------------------------------

cdef inline long long _pack(long long* sids, long long* svec, int R,
                            Py_ssize_t n, long long RR,
                            long long* svec_radix) noexcept nogil:
    cdef long long val = 0
    cdef int slot
    cdef Py_ssize_t u
    for slot in range(R - 1, -1, -1):
        val = val * RR + sids[slot]
    for u in range(n - 1, -1, -1):
        val = val * svec_radix[u] + svec[u]
    return val


cdef inline void _unpack(long long val, long long* sids, long long* svec,
                         int R, Py_ssize_t n, long long RR,
                         long long* svec_radix) noexcept nogil:
    cdef Py_ssize_t u
    cdef int slot
    for u in range(n):
        svec[u] = val % svec_radix[u]
        val //= svec_radix[u]
    for slot in range(R):
        sids[slot] = val % RR
        val //= RR


cdef inline long long _canon_pack(long long* sids, long long* svec, int R,
                                  Py_ssize_t n, long long RR,
                                  long long* svec_radix) noexcept nogil:
    cdef long long sorted_sids[4]
    cdef int a, b
    cdef long long key
    for a in range(R):
        sorted_sids[a] = sids[a]
    for a in range(1, R):
        key = sorted_sids[a]
        b = a - 1
        while b >= 0 and sorted_sids[b] > key:
            sorted_sids[b + 1] = sorted_sids[b]
            b -= 1
        sorted_sids[b + 1] = key
    return _pack(sorted_sids, svec, R, n, RR, svec_radix)


cdef _decode_frame(long long raw, int R, Py_ssize_t n, long long RR,
                   long long max_d, long long* svec_radix):
    cdef long long sids[4]
    cdef long long svec[8]
    cdef int slot
    _unpack(raw, sids, svec, R, n, RR, svec_radix)
    frame = []
    for slot in range(R):
        frame.append((int(sids[slot] // max_d), int(sids[slot] % max_d)))
    return tuple(frame)


def oracle_search(cnp.int64_t[:, :] dist, cnp.int64_t[:] r,
                  int robots, int horizon):
    cdef Py_ssize_t n = r.shape[0]
    cdef int R = robots
    if n > 8 or R > 4:
        raise ValueError("compiled oracle supports at most 8 vertices and 4 robots")

    cdef long long max_d = 1
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            if dist[i, j] > max_d:
                max_d = dist[i, j]
    cdef long long RR = (<long long> n) * max_d

    cdef long long others[8][8]
    cdef Py_ssize_t cnt
    for i in range(n):
        cnt = 0
        for j in range(n):
            if j != i:
                others[i][cnt] = j
                cnt += 1

    cdef long long svec_radix[8]
    for i in range(n):
        svec_radix[i] = r[i] + 1

    cdef unordered_map[long long, long long] memo
    cdef unordered_map[long long, int] onpath
    cdef unordered_map[long long, long long].iterator it_budget
    cdef unordered_map[long long, int].iterator it_path

    cdef vector[long long] raw_stack
    cdef vector[long long] canon_stack
    cdef vector[long long] cursor_stack
    cdef vector[long long] total_stack

    cdef long long sids[4]
    cdef long long svec[8]
    cdef long long csids[4]
    cdef long long csvec[8]
    cdef bint occupied[8]

    cdef long long raw0, key0, raw, key, craw, ckey
    cdef long long cursor, total, a_id, c, v, resid, w
    cdef int slot, depth, cdepth, jhit
    cdef bint descended, valid
    cdef long long budget
    cdef Py_ssize_t lvl

    for start in combinations_with_replacement(range(n), robots):
        for slot in range(R):
            sids[slot] = (<long long> start[slot]) * max_d
        for i in range(n):
            svec[i] = r[i]
        raw0 = _pack(sids, svec, R, n, RR, svec_radix)
        key0 = raw0  # start frames are already sorted
        it_budget = memo.find(key0)
        if it_budget != memo.end() and dereference(it_budget).second >= horizon:
            continue

        raw_stack.clear()
        canon_stack.clear()
        cursor_stack.clear()
        total_stack.clear()
        onpath.clear()

        total = 1
        for slot in range(R):
            total *= n  # all robots idle at a root
        raw_stack.push_back(raw0)
        canon_stack.push_back(key0)
        cursor_stack.push_back(0)
        total_stack.push_back(total)
        onpath[key0] = 0

        while raw_stack.size() > 0:
            depth = <int> raw_stack.size() - 1
            raw = raw_stack[depth]
            key = canon_stack[depth]
            cursor = cursor_stack[depth]
            total = total_stack[depth]
            _unpack(raw, sids, svec, R, n, RR, svec_radix)
            descended = False

            while cursor < total:
                a_id = cursor
                cursor += 1
                valid = True
                for i in range(n):
                    occupied[i] = False
                for slot in range(R):
                    v = sids[slot] // max_d
                    resid = sids[slot] % max_d
                    if resid > 0:
                        csids[slot] = v * max_d + (resid - 1)
                        if resid == 1:
                            occupied[v] = True
                    else:
                        c = a_id % n
                        a_id //= n
                        if c == 0:
                            csids[slot] = v * max_d
                            occupied[v] = True
                        else:
                            w = others[v][c - 1]
                            csids[slot] = w * max_d + (dist[v, w] - 1)
                            if dist[v, w] == 1:
                                occupied[w] = True
                for i in range(n):
                    # the clock ticks first: arriving one step past the
                    # deadline is late
                    if svec[i] - 1 < 0:
                        valid = False
                        break
                    csvec[i] = r[i] if occupied[i] else svec[i] - 1
                if not valid:
                    continue

                ckey = _canon_pack(csids, csvec, R, n, RR, svec_radix)
                it_path = onpath.find(ckey)
                if it_path != onpath.end() and depth + 1 <= horizon:
                    jhit = dereference(it_path).second
                    craw = _pack(csids, csvec, R, n, RR, svec_radix)
                    frames = []
                    for lvl in range(jhit, <Py_ssize_t> raw_stack.size()):
                        frames.append(_decode_frame(raw_stack[lvl], R, n, RR,
                                                    max_d, svec_radix))
                    closing = _decode_frame(craw, R, n, RR, max_d, svec_radix)
                    return frames, closing
                cdepth = depth + 1
                if cdepth > horizon - 1:
                    continue
                it_budget = memo.find(ckey)
                if (it_budget != memo.end()
                        and dereference(it_budget).second >= horizon - cdepth):
                    continue
                cursor_stack[depth] = cursor
                craw = _pack(csids, csvec, R, n, RR, svec_radix)
                total = 1
                for slot in range(R):
                    if csids[slot] % max_d == 0:
                        total *= n
                raw_stack.push_back(craw)
                canon_stack.push_back(ckey)
                cursor_stack.push_back(0)
                total_stack.push_back(total)
                onpath[ckey] = cdepth
                descended = True
                break

            if descended:
                continue
            budget = horizon - depth
            it_budget = memo.find(key)
            if it_budget == memo.end() or dereference(it_budget).second < budget:
                memo[key] = budget
            onpath.erase(key)
            raw_stack.pop_back()
            canon_stack.pop_back()
            cursor_stack.pop_back()
            total_stack.pop_back()
    return None
