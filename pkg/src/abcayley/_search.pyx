# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact coloring search; mirrors _search_py.dsatur_search step for step."""

from array import array

from libc.stdlib cimport calloc, free


cdef inline void _assign(int v, int c, int[::1] color, const int[::1] indptr, const int[::1] indices,
                         int *nbcount, int *sat, int width) noexcept nogil:
    cdef int t, w, k
    color[v] = c
    for t in range(indptr[v], indptr[v + 1]):
        w = indices[t]
        k = w * width + c
        if nbcount[k] == 0:
            sat[w] += 1
        nbcount[k] += 1


cdef inline void _unassign(int v, int[::1] color, const int[::1] indptr, const int[::1] indices,
                           int *nbcount, int *sat, int width) noexcept nogil:
    cdef int t, w, k
    cdef int c = color[v]
    color[v] = -1
    for t in range(indptr[v], indptr[v + 1]):
        w = indices[t]
        k = w * width + c
        nbcount[k] -= 1
        if nbcount[k] == 0:
            sat[w] -= 1


def dsatur_search(indptr_in, indices_in, int n, clique, long long budget):
    cdef int[::1] indptr = array("i", indptr_in)
    cdef int[::1] indices = array("i", indices_in) if len(indices_in) else array("i", [0])
    cdef int lb = len(clique)
    cdef int maxdeg = 0, d, v, i
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d
    cdef int width = maxdeg + 1
    cdef int ub = width + 1
    cdef int[::1] color = array("i", [-1] * n) if n else array("i", [0])
    cdef int[::1] best = array("i", [0] * n) if n else array("i", [0])
    cdef int *nbcount = <int *> calloc(<size_t> n * width + 1, sizeof(int))
    cdef int *sat = <int *> calloc(n + 1, sizeof(int))
    cdef int remaining = n - lb
    cdef int *order = <int *> calloc(remaining + 1, sizeof(int))
    cdef int *nextc = <int *> calloc(remaining + 1, sizeof(int))
    cdef int *prev_used = <int *> calloc(remaining + 1, sizeof(int))
    if nbcount == NULL or sat == NULL or order == NULL or nextc == NULL or prev_used == NULL:
        free(nbcount); free(sat); free(order); free(nextc); free(prev_used)
        raise MemoryError()

    cdef int used = 0
    for i in range(lb):
        _assign(<int> clique[i], i, color, indptr, indices, nbcount, sat, width)
        used = i + 1

    cdef long long nodes = 0
    cdef bint found = False
    cdef bint complete = True
    cdef int depth = 0
    cdef bint fresh = True
    cdef int bv, bs, bd, s, dv, limit, c, base

    with nogil:
        while True:
            if fresh:
                if depth == remaining and used < ub:
                    found = True
                    ub = used
                    best[:] = color
                    if ub <= lb:
                        break
                if used >= ub:
                    depth -= 1
                    if depth < 0:
                        break
                    fresh = False
                    _unassign(order[depth], color, indptr, indices, nbcount, sat, width)
                    used = prev_used[depth]
                    continue
                bv = -1
                bs = -1
                bd = -1
                for v in range(n):
                    if color[v] < 0:
                        s = sat[v]
                        dv = indptr[v + 1] - indptr[v]
                        if s > bs or (s == bs and dv > bd):
                            bv = v
                            bs = s
                            bd = dv
                order[depth] = bv
                nextc[depth] = 0
            v = order[depth]
            limit = used if used < ub - 1 else ub - 2
            c = nextc[depth]
            base = v * width
            while c <= limit and nbcount[base + c]:
                c += 1
            if c <= limit:
                if found and budget > 0 and nodes >= budget:
                    complete = False
                    break
                nodes += 1
                nextc[depth] = c + 1
                prev_used[depth] = used
                _assign(v, c, color, indptr, indices, nbcount, sat, width)
                if c + 1 > used:
                    used = c + 1
                depth += 1
                fresh = True
            else:
                depth -= 1
                if depth < 0:
                    break
                fresh = False
                _unassign(order[depth], color, indptr, indices, nbcount, sat, width)
                used = prev_used[depth]

    if not found:
        best[:] = color
        ub = used
    free(nbcount); free(sat); free(order); free(nextc); free(prev_used)
    return ub, [best[i] for i in range(n)], nodes, bool(complete)
