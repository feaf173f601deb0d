"""Pure-Python versions of the hot kernels.

Used when the compiled extension is not available, and by the test suite
to cross-check the compiled path.
"""


def level_tables(sigma, tau, n):
    """Action and restriction tables of every state on the level-``n`` words.

    ``sigma`` and ``tau`` are indexed ``[letter][state]``. Words of length
    ``n`` are encoded as integers with the first letter most significant.
    Returns ``(perm, restr)`` as lists of lists indexed ``[state][word]``:
    ``perm[q][x]`` is the image of ``x`` under ``q`` and ``restr[q][x]`` the
    state reached after reading ``x``.
    """
    k = len(sigma)
    nstates = len(sigma[0]) if k else 0
    perm = [[0] for _ in range(nstates)]
    restr = [[q] for q in range(nstates)]
    block = 1
    for _ in range(n):
        new_perm = []
        new_restr = []
        for q in range(nstates):
            row_p = []
            row_r = []
            for a in range(k):
                t = tau[a][q]
                offset = sigma[a][q] * block
                row_p.extend([offset + y for y in perm[t]])
                row_r.extend(restr[t])
            new_perm.append(row_p)
            new_restr.append(row_r)
        perm, restr = new_perm, new_restr
        block *= k
    return perm, restr


def components(nvertices, src, dst):
    """Connected-component labels (smallest vertex of each component)."""
    parent = list(range(nvertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in zip(src, dst):
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    return [find(x) for x in range(nvertices)]
