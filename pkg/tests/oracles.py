"""Independent reference computations used only by the tests.

Nothing here imports the package.  Each routine takes a different route to
the same numbers: Lie algebra cohomology through the exterior algebra
derivation, simplicial cohomology through a plain elimination, and Jacobi
checks through dense brackets.
"""

from fractions import Fraction
from itertools import combinations


def gauss_rank(rows):
    rows = [[Fraction(x) for x in r] for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


# exterior algebra: dict {increasing tuple: coefficient}

def wedge(a, b):
    out = {}
    for s, x in a.items():
        for t, y in b.items():
            if set(s) & set(t):
                continue
            seq = list(s) + list(t)
            inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
            key = tuple(sorted(seq))
            out[key] = out.get(key, 0) + (-x * y if inv % 2 else x * y)
    return {k: v for k, v in out.items() if v}


def koszul_d(structure, n, mono):
    """d on a monomial e^{i1}∧...∧e^{ip} extended from d e^k = -sum_{i<j} c^k_ij e^i∧e^j."""
    def d1(k):
        return {(i, j): -c[k] for (i, j), c in structure.items() if c[k]}
    out = {}
    for pos, k in enumerate(mono):
        left = {mono[:pos]: 1}
        right = {mono[pos + 1:]: 1}
        term = wedge(wedge(left, d1(k)), right)
        sgn = -1 if pos % 2 else 1
        for key, v in term.items():
            out[key] = out.get(key, 0) + sgn * v
    return {k: v for k, v in out.items() if v}


def ce_dims(structure, n, rep=None, width=1):
    """dim H^p(g; V) for p = 0..n.  ``rep[i]`` is the matrix of e_i on V (list of rows)."""
    rep = rep or [[[0] * width for _ in range(width)] for _ in range(n)]

    def basis(p):
        return [(m, t) for t in combinations(range(n), p) for m in range(width)]

    def d_matrix(p):
        src, tgt = basis(p), basis(p + 1)
        idx = {b: i for i, b in enumerate(tgt)}
        cols = []
        for m, t in src:
            col = [Fraction(0)] * len(tgt)
            for key, v in koszul_d(structure, n, t).items():
                col[idx[(m, key)]] += v
            for i in range(n):
                for key, v in wedge({(i,): 1}, {t: 1}).items():
                    for m2 in range(width):
                        a = rep[i][m2][m]
                        if a:
                            col[idx[(m2, key)]] += v * a
            cols.append(col)
        return [[cols[j][i] for j in range(len(src))] for i in range(len(tgt))] if tgt else []

    ranks = [gauss_rank(d_matrix(p)) if p < n else 0 for p in range(n + 1)]
    return [len(basis(p)) - ranks[p] - (ranks[p - 1] if p else 0) for p in range(n + 1)]


def simplicial_betti(vertices, maximal):
    simp = set()
    for s in maximal:
        for k in range(1, len(s) + 1):
            simp.update(combinations(sorted(s), k))
    simp.update((v,) for v in range(vertices))
    by = {}
    for s in simp:
        by.setdefault(len(s) - 1, []).append(s)
    top = max(by)
    for k in by:
        by[k].sort()

    def delta(p):
        src, tgt = by.get(p, []), by.get(p + 1, [])
        pos = {s: i for i, s in enumerate(src)}
        rows = []
        for t in tgt:
            r = [0] * len(src)
            for j in range(len(t)):
                r[pos[t[:j] + t[j + 1:]]] += (-1) ** j
            rows.append(r)
        return rows

    ranks = {p: gauss_rank(delta(p)) for p in range(top + 1)}
    return [len(by[p]) - ranks[p] - ranks.get(p - 1, 0) for p in range(top + 1)]


def components(vertices, maximal):
    parent = list(range(vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for s in maximal:
        for a in s[1:]:
            parent[find(a)] = find(s[0])
    return len({find(v) for v in range(vertices)})


# dense brackets

def lie_bracket(structure, n):
    def br(x, y):
        out = [Fraction(0)] * n
        for (i, j), c in structure.items():
            a = x[i] * y[j] - x[j] * y[i]
            if a:
                for k in range(n):
                    out[k] += a * c[k]
        return out
    return br


def semidirect_bracket(bstruct, nb, lstruct, nl, alpha, rho):
    """[b + l, b' + l'] = [b,b'] + rho(b,b') + alpha(b) l' - alpha(b') l + [l,l'] on Q^nb ⊕ Q^nl."""
    bb, ll = lie_bracket(bstruct, nb), lie_bracket(lstruct, nl)

    def act(m, v):
        return [sum(m[r][c] * v[c] for c in range(nl)) for r in range(nl)]

    def br(x, y):
        b1, l1, b2, l2 = x[:nb], x[nb:], y[:nb], y[nb:]
        top = bb(b1, b2)
        low = ll(l1, l2)
        for (i, j), v in rho.items():
            a = b1[i] * b2[j] - b1[j] * b2[i]
            low = [p + a * q for p, q in zip(low, v)]
        for i in range(nb):
            if b1[i]:
                low = [p + b1[i] * q for p, q in zip(low, act(alpha[i], l2))]
            if b2[i]:
                low = [p - b2[i] * q for p, q in zip(low, act(alpha[i], l1))]
        return top + low
    return br


def jacobi_failures(br, n):
    def e(i):
        return [Fraction(int(k == i)) for k in range(n)]
    bad = []
    for i, j, k in combinations(range(n), 3):
        x, y, z = e(i), e(j), e(k)
        s = [a + b + c for a, b, c in zip(br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))]
        if any(s):
            bad.append((i, j, k))
    return bad
