"""Pure-Python kernels: periodic-walk feasibility, 2-opt sweeps, and the
bounded lasso search behind the exact oracle.

These are the reference implementations. The compiled module mirrors them
operation for operation (same iteration order, same tie-breaking) on int64
values; this module additionally accepts exact `Fraction` inputs and
arbitrary-magnitude integers, so it doubles as the fallback for inputs that
do not fit the fast path.
"""

from __future__ import annotations

from itertools import combinations_with_replacement


def walk_feasible(verts, holds, dist, r, override_last_leg=None):
    """Periodic feasibility of the timed walk (verts, holds) on the vertices
    it visits.

    Simulates two concatenated copies of the walk: each vertex's clock allows
    the next arrival no later than (last departure + r[v]), starting from a
    full grace period at time 0. ``override_last_leg`` replaces the travel
    duration of the leg into the final step (in both copies), which is how
    detour budgets are probed.
    """
    k = len(verts)
    if k == 1:
        return True
    deadline = {v: r[v] for v in set(verts)}
    t = holds[0] * 0  # zero of whatever numeric type holds use
    for copy in range(2):
        for i in range(k):
            v = verts[i]
            if copy or i:
                if t > deadline[v]:
                    return False
            t = t + holds[i]
            deadline[v] = t + r[v]
            if copy == 1 and i == k - 1:
                break
            if override_last_leg is not None and i == k - 2:
                t = t + override_last_leg
            else:
                t = t + dist[v][verts[(i + 1) % k]]
    return True


def two_opt(order, dist):
    """Improve a cyclic visiting order to 2-opt local optimality.

    First-improvement over (i, j) pairs in lexicographic order, restarting
    the sweep after every applied move; exact comparisons, deterministic.
    """
    order = list(order)
    n = len(order)
    if n < 4:
        return order
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            a_prev = order[i - 1]
            a = order[i]
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue
                b = order[j]
                b_next = order[(j + 1) % n]
                if (dist[a_prev][b] + dist[a][b_next]
                        < dist[a_prev][a] + dist[b][b_next]):
                    order[i:j + 1] = order[i:j + 1][::-1]
                    improved = True
                    break
            if improved:
                break
    return order


# ---------------------------------------------------------------------------
# Oracle lasso search
# ---------------------------------------------------------------------------
#
# State: per-robot (target_vertex, residual_steps) -- residual 0 means "at the
# vertex" -- plus the per-vertex expiry vector. One transition advances one
# grid step: robots in transit are forced, idle robots hold or depart, every
# unoccupied vertex's expiry drops by one and must stay nonnegative. Any
# transition into a state already on the DFS path closes a lasso, which is a
# feasible periodic schedule. States are memoized (robots sorted, since they
# are interchangeable) with the largest remaining step budget at which they
# were exhausted cycle-free.

def _radices(frame, n):
    return [1 if resid > 0 else n for _, resid in frame]


def _child(frame, svec, a_id, radices, dist, r, others):
    new_frame = []
    for slot, (v, resid) in enumerate(frame):
        if resid > 0:
            new_frame.append((v, resid - 1))
            continue
        c = a_id % radices[slot]
        a_id //= radices[slot]
        if c == 0:
            new_frame.append((v, 0))
        else:
            w = others[v][c - 1]
            new_frame.append((w, dist[v][w] - 1))
    occupied = {v for v, resid in new_frame if resid == 0}
    new_s = []
    for u in range(len(svec)):
        # the clock ticks first: an arrival one step past the deadline is late
        if svec[u] - 1 < 0:
            return None
        new_s.append(r[u] if u in occupied else svec[u] - 1)
    return tuple(new_frame), tuple(new_s)


def oracle_search(dist, r, robots, horizon):
    """Search for a lasso (transient + cycle, at most ``horizon`` steps in
    total) whose cycle certifies a feasible periodic schedule.

    dist and r are integers on the instance grid. Returns
    ``(cycle_frames, closing_frame)`` -- the raw robot frames of the cycle
    and the frame that closes it (a robot permutation of the first one) --
    or None when no lasso exists within the budget.
    """
    n = len(r)
    others = [[w for w in range(n) if w != v] for v in range(n)]
    memo: dict = {}

    for start in combinations_with_replacement(range(n), robots):
        frame0 = tuple((v, 0) for v in start)
        svec0 = tuple(r)
        key0 = (frame0, svec0)  # start frames are sorted already
        if memo.get(key0, -1) >= horizon:
            continue
        rad0 = _radices(frame0, n)
        total0 = 1
        for x in rad0:
            total0 *= x
        stack = [[frame0, svec0, key0, 0, rad0, total0]]
        onpath = {key0: 0}
        while stack:
            frame, svec, key, cursor, rad, total = stack[-1]
            depth = len(stack) - 1
            descended = False
            while cursor < total:
                a_id = cursor
                cursor += 1
                child = _child(frame, svec, a_id, rad, dist, r, others)
                if child is None:
                    continue
                cframe, csvec = child
                ckey = (tuple(sorted(cframe)), csvec)
                if ckey in onpath and depth + 1 <= horizon:
                    j = onpath[ckey]
                    return [lvl[0] for lvl in stack[j:]], cframe
                cdepth = depth + 1
                if cdepth > horizon - 1:
                    continue
                if memo.get(ckey, -1) >= horizon - cdepth:
                    continue
                stack[-1][3] = cursor
                crad = _radices(cframe, n)
                ctotal = 1
                for x in crad:
                    ctotal *= x
                stack.append([cframe, csvec, ckey, 0, crad, ctotal])
                onpath[ckey] = cdepth
                descended = True
                break
            if descended:
                continue
            budget = horizon - depth
            if memo.get(key, -1) < budget:
                memo[key] = budget
            onpath.pop(key)
            stack.pop()
    return None
