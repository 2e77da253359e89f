"""Smith normal form over the integers, dense with transforms and sparse without."""

from __future__ import annotations

from dataclasses import dataclass


Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    if inner == 0:
        return [[0] * cols for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col) if a) for col in Bt] for row in A]


@dataclass
class SNFResult:
    """``A = U D V`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    ``U_inv`` and ``V_inv`` are kept alongside so callers never need to invert.
    """

    D: Matrix
    U: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def elementary_divisors(self) -> list[int]:
        return [d for d in self.diagonal if d]


class _Dense:
    """Working state for the dense algorithm."""

    def __init__(self, A: Matrix, n_cols: int, track: bool):
        self.m = len(A)
        self.n = n_cols
        self.D = [list(r) for r in A]
        self.track = track
        if track:
            self.U = identity(self.m)
            self.Ui = identity(self.m)
            self.V = identity(self.n)
            self.Vi = identity(self.n)

    # row i += c * row j
    def add_row(self, i, j, c):
        if not c:
            return
        D = self.D
        ri, rj = D[i], D[j]
        for k in range(self.n):
            if rj[k]:
                ri[k] += c * rj[k]
        if self.track:
            for row in self.U:
                row[j] -= c * row[i]
            a, b = self.Ui[i], self.Ui[j]
            for k in range(self.m):
                a[k] += c * b[k]

    def swap_rows(self, i, j):
        if i == j:
            return
        D = self.D
        D[i], D[j] = D[j], D[i]
        if self.track:
            for row in self.U:
                row[i], row[j] = row[j], row[i]
            self.Ui[i], self.Ui[j] = self.Ui[j], self.Ui[i]

    def negate_row(self, i):
        self.D[i] = [-x for x in self.D[i]]
        if self.track:
            for row in self.U:
                row[i] = -row[i]
            self.Ui[i] = [-x for x in self.Ui[i]]

    # col i += c * col j
    def add_col(self, i, j, c):
        if not c:
            return
        for row in self.D:
            if row[j]:
                row[i] += c * row[j]
        if self.track:
            a, b = self.V[j], self.V[i]
            for k in range(self.n):
                a[k] -= c * b[k]
            for row in self.Vi:
                row[i] += c * row[j]

    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.D:
            row[i], row[j] = row[j], row[i]
        if self.track:
            self.V[i], self.V[j] = self.V[j], self.V[i]
            for row in self.Vi:
                row[i], row[j] = row[j], row[i]

    def smallest(self, t):
        best = None
        for i in range(t, self.m):
            row = self.D[i]
            for j in range(t, self.n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return best
        return best

    def run(self):
        D = self.D
        t = 0
        while t < min(self.m, self.n):
            piv = self.smallest(t)
            if piv is None:
                break
            _, i, j = piv
            self.swap_rows(t, i)
            self.swap_cols(t, j)
            while True:
                p = D[t][t]
                moved = False
                for i in range(t + 1, self.m):
                    if D[i][t]:
                        self.add_row(i, t, -(D[i][t] // p))
                        if D[i][t]:
                            moved = True
                for j in range(t + 1, self.n):
                    if D[t][j]:
                        self.add_col(j, t, -(D[t][j] // p))
                        if D[t][j]:
                            moved = True
                if moved:
                    # a smaller remainder appeared in the pivot row or column
                    best = None
                    for i in range(t, self.m):
                        x = D[i][t]
                        if x and (best is None or abs(x) < best[0]):
                            best = (abs(x), i, t)
                    for j in range(t + 1, self.n):
                        x = D[t][j]
                        if x and abs(x) < best[0]:
                            best = (abs(x), t, j)
                    self.swap_rows(t, best[1])
                    self.swap_cols(t, best[2])
                    continue
                bad = None
                for i in range(t + 1, self.m):
                    for j in range(t + 1, self.n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if D[t][t] < 0:
                self.negate_row(t)
            t += 1


def smith_normal_form(A: Matrix, n_cols: int | None = None) -> SNFResult:
    """Smith normal form with unimodular transforms, ``A = U D V``.

    Pivots are chosen by smallest absolute value, ties broken by row then
    column order.  ``n_cols`` is needed only when ``A`` has no rows.
    """
    n = n_cols if n_cols is not None else (len(A[0]) if A else 0)
    w = _Dense(A, n, track=True)
    w.run()
    return SNFResult(w.D, w.U, w.V, w.Ui, w.Vi)


def dense_elementary_divisors(A: Matrix, n_cols: int | None = None) -> list[int]:
    n = n_cols if n_cols is not None else (len(A[0]) if A else 0)
    w = _Dense(A, n, track=False)
    w.run()
    return [w.D[i][i] for i in range(min(w.m, w.n)) if w.D[i][i]]


def sparse_elementary_divisors(rows: list[dict[int, int]]) -> list[int]:
    """Nonzero elementary divisors of a sparse matrix given as row dicts.

    Unit pivots are eliminated first (Markowitz-style choice of the pivot with
    the fewest fill-in candidates), each contributing a divisor 1; whatever is
    left goes through the dense algorithm.
    """
    rows = [dict(r) for r in rows if r]
    live = set(range(len(rows)))
    cols: dict[int, set[int]] = {}
    for r in live:
        for c in rows[r]:
            cols.setdefault(c, set()).add(r)
    units = 0
    while True:
        best = None
        for r in live:
            row = rows[r]
            lr = len(row) - 1
            for c, x in row.items():
                if x == 1 or x == -1:
                    cost = lr * (len(cols[c]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, r, c)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, r, c = best
        prow = rows[r]
        p = prow[c]
        live.discard(r)
        for k in prow:
            cols[k].discard(r)
        for other in list(cols[c]):
            orow = rows[other]
            factor = orow[c] * p  # p = +-1, so the quotient is exact
            for k, x in prow.items():
                y = orow.get(k, 0) - factor * x
                if y:
                    if k not in orow:
                        cols[k].add(other)
                    orow[k] = y
                else:
                    if k in orow:
                        del orow[k]
                        cols[k].discard(other)
            if not orow:
                live.discard(other)
        units += 1
    rest_rows = [rows[r] for r in sorted(live) if rows[r]]
    if not rest_rows:
        return [1] * units
    col_ids = sorted({c for row in rest_rows for c in row})
    idx = {c: k for k, c in enumerate(col_ids)}
    dense = []
    for row in rest_rows:
        line = [0] * len(col_ids)
        for c, x in row.items():
            line[idx[c]] = x
        dense.append(line)
    return [1] * units + dense_elementary_divisors(dense, len(col_ids))
