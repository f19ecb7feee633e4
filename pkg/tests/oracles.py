"""Independent brute-force oracles shared by the tests."""


def gf_rank(rows, p):
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def brute_dimension_subgroups(perms, p):
    """G_i = {g : 1 - g in w^i}, straight from the definition in F_p[G]."""
    elems = [tuple(range(len(perms[0])))]
    frontier = list(elems)
    while frontier:
        new = []
        for g in frontier:
            for s in perms:
                h = tuple(s[g[i]] for i in range(len(g)))
                if h not in elems:
                    elems.append(h)
                    new.append(h)
        frontier = new
    n = len(elems)
    idx = {g: i for i, g in enumerate(elems)}

    def mult(u, v):
        out = [0] * n
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        g, h = elems[i], elems[j]
                        k = idx[tuple(h[g[t]] for t in range(len(g)))]
                        out[k] = (out[k] + a * b) % p
        return out

    def one_minus(g):
        v = [0] * n
        v[0] = 1
        v[idx[g]] = (v[idx[g]] - 1) % p
        return v

    w = [one_minus(g) for g in elems[1:]]
    power = w
    out = []
    for _ in range(n + 1):
        r = gf_rank(power, p) if power else 0
        members = {g for g in elems if gf_rank(power + [one_minus(g)], p) == r} if power else {elems[0]}
        out.append(members)
        if members == {elems[0]}:
            break
        power = [mult(a, b) for a in power for b in w]
        power = [v for v in power if any(v)]
    return out
