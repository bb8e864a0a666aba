"""Pure-Python exact coloring search (fallback for the compiled kernel).

Both implementations run the same iterative DSATUR branch and bound and
must return identical results; keep them in lockstep.
"""


def dsatur_search(indptr, indices, n, clique, budget):
    """Exact coloring by DSATUR branch and bound.

    ``indptr``/``indices`` is the CSR adjacency (no loops).  ``clique`` is a
    list of pairwise adjacent vertices, precolored ``0..q-1`` to break color
    symmetry and serving as the lower bound.  ``budget`` caps node
    expansions after the first complete coloring (``<= 0`` means no cap).

    Returns ``(best_k, coloring, nodes, complete)``; ``complete`` is True when
    ``best_k`` is proven optimal.
    """
    lb = len(clique)
    maxdeg = 0
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d
    width = maxdeg + 1
    ub = width + 1  # no coloring found yet
    color = [-1] * n
    nbcount = [0] * (n * width)
    sat = [0] * n
    best = [0] * n

    def assign(v, c):
        color[v] = c
        for t in range(indptr[v], indptr[v + 1]):
            w = indices[t]
            k = w * width + c
            if nbcount[k] == 0:
                sat[w] += 1
            nbcount[k] += 1

    def unassign(v):
        c = color[v]
        color[v] = -1
        for t in range(indptr[v], indptr[v + 1]):
            w = indices[t]
            k = w * width + c
            nbcount[k] -= 1
            if nbcount[k] == 0:
                sat[w] -= 1

    used = 0
    for i, v in enumerate(clique):
        assign(v, i)
        used = i + 1
    remaining = n - len(clique)

    order = [0] * (remaining + 1)
    nextc = [0] * (remaining + 1)
    prev_used = [0] * (remaining + 1)
    nodes = 0
    found = False
    complete = True
    depth = 0
    fresh = True

    while True:
        if fresh:
            if depth == remaining and used < ub:
                found = True
                ub = used
                best[:] = color
                if ub <= lb:
                    break
            if used >= ub:
                # nothing better below here: back into the last choice
                depth -= 1
                if depth < 0:
                    break
                fresh = False
                unassign(order[depth])
                used = prev_used[depth]
                continue
            # pick max saturation, then max degree, then smallest index
            bv = -1
            bs = -1
            bd = -1
            for v in range(n):
                if color[v] < 0:
                    s = sat[v]
                    if s > bs or (s == bs and indptr[v + 1] - indptr[v] > bd):
                        bv = v
                        bs = s
                        bd = indptr[v + 1] - indptr[v]
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
            assign(v, c)
            if c + 1 > used:
                used = c + 1
            depth += 1
            fresh = True
        else:
            depth -= 1
            if depth < 0:
                break
            fresh = False
            unassign(order[depth])
            used = prev_used[depth]

    if not found:
        # only possible if the clique itself covers everything
        best[:] = color
        ub = used
    return ub, best, nodes, complete
