# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; mirrors ``_pykernels`` step for step."""

from libc.stdlib cimport malloc, free

BACKEND = "cython"


cdef int _build_csr(int n, list pairs_by_point, int **start_out, int **data_out) except -1:
    cdef int total = 0, i, j, k = 0
    for i in range(n):
        total += len(pairs_by_point[i])
    cdef int *start = <int *> malloc((n + 1) * sizeof(int))
    cdef int *data = <int *> malloc((total if total > 0 else 1) * sizeof(int))
    if start == NULL or data == NULL:
        free(start)
        free(data)
        raise MemoryError()
    for i in range(n):
        start[i] = k
        for j in pairs_by_point[i]:
            data[k] = j
            k += 1
    start[n] = k
    start_out[0] = start
    data_out[0] = data
    return 0


def dfs_solve(int n, frames, edges, order):
    cdef int nf = len(frames)
    cdef int i, j, k, a, b, c, u, v, value, start, head, pos, va, vb, vc
    cdef int ones, zeros, free_count, ok, top
    cdef long nodes = 0, props = 0
    cdef list point_frames = [[] for _ in range(n)]
    cdef list partners = [[] for _ in range(n)]
    for k, f in enumerate(frames):
        for u in f:
            point_frames[u].append(k)
    for a, b in edges:
        partners[a].append(b)
        partners[b].append(a)

    cdef int *fr = <int *> malloc((3 * nf if nf > 0 else 1) * sizeof(int))
    cdef int *val = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    cdef int *trail = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    cdef int *ordr = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    # decision stack: variable, value, trail start
    cdef int *st_var = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    cdef int *st_val = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    cdef int *st_start = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    cdef int *pf_start = NULL
    cdef int *pf = NULL
    cdef int *pe_start = NULL
    cdef int *pe = NULL
    cdef int tlen = 0
    try:
        if fr == NULL or val == NULL or trail == NULL or ordr == NULL \
                or st_var == NULL or st_val == NULL or st_start == NULL:
            raise MemoryError()
        _build_csr(n, point_frames, &pf_start, &pf)
        _build_csr(n, partners, &pe_start, &pe)
        for k in range(nf):
            a, b, c = frames[k]
            fr[3 * k] = a
            fr[3 * k + 1] = b
            fr[3 * k + 2] = c
        for i in range(n):
            val[i] = -1
            ordr[i] = order[i]

        top = 0
        pos = 0
        while True:
            while pos < n and val[ordr[pos]] >= 0:
                pos += 1
            if pos == n:
                return True, [val[i] for i in range(n)], nodes, props
            v = ordr[pos]
            start = tlen
            st_var[top] = v
            st_val[top] = 1
            st_start[top] = start
            top += 1
            val[v] = 1
            trail[tlen] = v
            tlen += 1
            nodes += 1
            value = 1
            while True:
                # propagate from `start`
                ok = 1
                head = start
                while head < tlen and ok:
                    v = trail[head]
                    head += 1
                    if val[v] == 0:
                        for i in range(pe_start[v], pe_start[v + 1]):
                            u = pe[i]
                            if val[u] == 0:
                                ok = 0
                                break
                            if val[u] < 0:
                                val[u] = 1
                                trail[tlen] = u
                                tlen += 1
                                props += 1
                        if not ok:
                            break
                    for i in range(pf_start[v], pf_start[v + 1]):
                        k = pf[i]
                        a = fr[3 * k]
                        b = fr[3 * k + 1]
                        c = fr[3 * k + 2]
                        va = val[a]
                        vb = val[b]
                        vc = val[c]
                        ones = (va == 1) + (vb == 1) + (vc == 1)
                        zeros = (va == 0) + (vb == 0) + (vc == 0)
                        if zeros >= 2 or ones == 3:
                            ok = 0
                            break
                        free_count = 3 - ones - zeros
                        if free_count == 0:
                            continue
                        if zeros == 1:
                            value = 1
                        elif ones == 2:
                            value = 0
                        else:
                            continue
                        for j in range(3 * k, 3 * k + 3):
                            u = fr[j]
                            if val[u] < 0:
                                val[u] = value
                                trail[tlen] = u
                                tlen += 1
                                props += 1
                if ok:
                    break
                # backtrack to the most recent untried 0 branch
                while top > 0:
                    top -= 1
                    v = st_var[top]
                    value = st_val[top]
                    start = st_start[top]
                    for i in range(start, tlen):
                        val[trail[i]] = -1
                    tlen = start
                    if value == 1:
                        break
                else:
                    return False, None, nodes, props
                pos = 0
                st_var[top] = v
                st_val[top] = 0
                st_start[top] = start
                top += 1
                val[v] = 0
                trail[tlen] = v
                tlen += 1
                nodes += 1
    finally:
        free(fr)
        free(val)
        free(trail)
        free(ordr)
        free(st_var)
        free(st_val)
        free(st_start)
        free(pf_start)
        free(pf)
        free(pe_start)
        free(pe)


def count_solutions(int n, frames, edges):
    cdef int i, k, a, b, c, depth, ok
    cdef long long count = 0
    if n == 0:
        return 1
    cdef list closing_frames = [[] for _ in range(n)]
    cdef list closing_edges = [[] for _ in range(n)]
    for a, b, c in frames:
        closing_frames[max(a, b, c)].append(a)
        closing_frames[max(a, b, c)].append(b)
        closing_frames[max(a, b, c)].append(c)
    for a, b in edges:
        closing_edges[max(a, b)].append(a)
        closing_edges[max(a, b)].append(b)
    cdef int *cf_start = NULL
    cdef int *cf = NULL
    cdef int *ce_start = NULL
    cdef int *ce = NULL
    cdef int *val = <int *> malloc(n * sizeof(int))
    cdef int *nxt = <int *> malloc((n + 1) * sizeof(int))
    try:
        if val == NULL or nxt == NULL:
            raise MemoryError()
        _build_csr(n, closing_frames, &cf_start, &cf)
        _build_csr(n, closing_edges, &ce_start, &ce)
        for i in range(n + 1):
            nxt[i] = 0
        depth = 0
        while depth >= 0:
            if depth == n:
                count += 1
                depth -= 1
                continue
            if nxt[depth] > 1:
                nxt[depth] = 0
                depth -= 1
                continue
            val[depth] = nxt[depth]
            nxt[depth] += 1
            ok = 1
            i = cf_start[depth]
            while i < cf_start[depth + 1]:
                if val[cf[i]] + val[cf[i + 1]] + val[cf[i + 2]] != 2:
                    ok = 0
                    break
                i += 3
            if ok:
                i = ce_start[depth]
                while i < ce_start[depth + 1]:
                    if val[ce[i]] + val[ce[i + 1]] < 1:
                        ok = 0
                        break
                    i += 2
            if ok:
                depth += 1
        return count
    finally:
        free(val)
        free(nxt)
        free(cf_start)
        free(cf)
        free(ce_start)
        free(ce)
