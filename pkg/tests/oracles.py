"""Deliberately naive reference implementations used as test oracles."""

from fractions import Fraction
from itertools import combinations
from math import gcd


def naive_smith_diagonal(A):
    """Nonzero invariant factors by textbook elementary operations, no transforms."""
    M = [list(r) for r in A]
    m = len(M)
    n = len(M[0]) if M else 0
    out = []
    t = 0
    while t < min(m, n):
        nz = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        M[t], M[i] = M[i], M[t]
        for r in M:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            for i in range(t + 1, m):
                q = M[i][t] // M[t][t]
                M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                if M[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = M[t][j] // M[t][t]
                for r in M:
                    r[j] -= q * r[t]
                if M[t][j]:
                    done = False
            if done:
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % M[t][t]]
                if not bad:
                    break
                i, _ = bad[0]
                M[t] = [a + b for a, b in zip(M[t], M[i])]
                continue
            nz = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j] and (i == t or j == t)]
            _, i, j = min(nz)
            M[t], M[i] = M[i], M[t]
            for r in M:
                r[t], r[j] = r[j], r[t]
        out.append(abs(M[t][t]))
        t += 1
    return out


def det(M):
    M = [[Fraction(x) for x in r] for r in M]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return int(d)


def determinantal_divisors(A):
    """Invariant factors from gcds of k x k minors."""
    m = len(A)
    n = len(A[0]) if A else 0
    ds = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        ds.append(g)
    return [ds[k] // ds[k - 1] for k in range(1, len(ds))]


def integer_homology(boundaries, ranks):
    """Betti numbers and torsion from dense boundary matrices via the naive SNF.

    ``boundaries[n]`` is the matrix of d_n with one row per degree-n cell.
    """
    out = []
    top = len(ranks) - 1
    for n in range(top + 1):
        dn = naive_smith_diagonal(boundaries[n]) if boundaries.get(n) else []
        up = naive_smith_diagonal(boundaries[n + 1]) if boundaries.get(n + 1) else []
        out.append((ranks[n] - len(dn) - len(up), tuple(d for d in up if d > 1)))
    return out
