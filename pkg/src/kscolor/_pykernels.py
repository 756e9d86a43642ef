"""Pure-Python search kernels.

Same algorithms and visiting order as the compiled ``_ckernels`` module, so
both backends return identical assignments and statistics.
"""

from __future__ import annotations

BACKEND = "python"


def _incidence(n, frames, edges):
    point_frames = [[] for _ in range(n)]
    partners = [[] for _ in range(n)]
    for k, (a, b, c) in enumerate(frames):
        point_frames[a].append(k)
        point_frames[b].append(k)
        point_frames[c].append(k)
    for a, b in edges:
        partners[a].append(b)
        partners[b].append(a)
    return point_frames, partners


def dfs_solve(n, frames, edges, order):
    """Backtracking search with unit propagation.

    Returns ``(found, assignment, nodes, propagations)``.  ``order`` is the
    variable order; the value 1 is tried before 0.
    """
    frames = [tuple(f) for f in frames]
    point_frames, partners = _incidence(n, frames, edges)
    val = [-1] * n
    trail: list[int] = []
    nodes = 0
    props = 0

    def propagate(head):
        nonlocal props
        while head < len(trail):
            v = trail[head]
            head += 1
            if val[v] == 0:
                for u in partners[v]:
                    if val[u] == 0:
                        return False
                    if val[u] < 0:
                        val[u] = 1
                        trail.append(u)
                        props += 1
            for k in point_frames[v]:
                a, b, c = frames[k]
                va, vb, vc = val[a], val[b], val[c]
                ones = (va == 1) + (vb == 1) + (vc == 1)
                zeros = (va == 0) + (vb == 0) + (vc == 0)
                if zeros >= 2 or ones == 3:
                    return False
                free = 3 - ones - zeros
                if not free:
                    continue
                if zeros == 1:
                    for u in (a, b, c):
                        if val[u] < 0:
                            val[u] = 1
                            trail.append(u)
                            props += 1
                elif ones == 2:
                    for u in (a, b, c):
                        if val[u] < 0:
                            val[u] = 0
                            trail.append(u)
                            props += 1
        return True

    # decision stack of (variable, value, trail length before the decision)
    stack: list[tuple[int, int, int]] = []
    pos = 0
    while True:
        while pos < n and val[order[pos]] >= 0:
            pos += 1
        if pos == n:
            return True, val, nodes, props
        v = order[pos]
        start = len(trail)
        stack.append((v, 1, start))
        val[v] = 1
        trail.append(v)
        nodes += 1
        ok = propagate(start)
        while not ok:
            while stack:
                v, value, start = stack.pop()
                for u in trail[start:]:
                    val[u] = -1
                del trail[start:]
                if value == 1:
                    break
            else:
                return False, None, nodes, props
            # variables before the flipped one may have been unassigned
            pos = 0
            stack.append((v, 0, start))
            val[v] = 0
            trail.append(v)
            nodes += 1
            ok = propagate(start)


def count_solutions(n, frames, edges):
    """Count 0/1 assignments with every frame summing to 2 and every edge >= 1.

    Plain enumeration in index order; a constraint is checked once its
    highest-index member is assigned.  No propagation, so this stays an
    independent check on :func:`dfs_solve`.
    """
    closing_frames = [[] for _ in range(n)]
    closing_edges = [[] for _ in range(n)]
    for a, b, c in frames:
        closing_frames[max(a, b, c)].append((a, b, c))
    for a, b in edges:
        closing_edges[max(a, b)].append((a, b))
    if n == 0:
        return 1
    val = [0] * n
    count = 0
    # iterative DFS; next_value[i] is the next value to try at depth i
    next_value = [0] * (n + 1)
    depth = 0
    while depth >= 0:
        if depth == n:
            count += 1
            depth -= 1
            continue
        if next_value[depth] > 1:
            next_value[depth] = 0
            depth -= 1
            continue
        val[depth] = next_value[depth]
        next_value[depth] += 1
        ok = True
        for a, b, c in closing_frames[depth]:
            if val[a] + val[b] + val[c] != 2:
                ok = False
                break
        if ok:
            for a, b in closing_edges[depth]:
                if val[a] + val[b] < 1:
                    ok = False
                    break
        if ok:
            depth += 1
    return count
