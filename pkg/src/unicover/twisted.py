"""Homology of the universal cover as a module over the group algebra.

For ``pi_1(X) = G`` finitely generated abelian, ``Z[G]`` is the quotient of
``R = Z[x_1, x_1inv, ...]`` by ``I = (x_i x_iinv - 1, x_j^{t_j} - 1)``.  The
chains of the cover form a free ``Z[G]``-module on the simplices of ``X``;
kernels and lifts are computed with strong Groebner bases over Z.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cover import abelian_twisting
from .errors import LiftFailure
from .fundamental_group import AbelianGroup, AbelianInvariants
from .groebner import groebner_basis, reduce_vec
from .poly import Poly, Ring, Vec, poly_add, poly_mul, vec_from_polys, vec_to_polys
from .simplicial import Simplex, SimplicialSet
from .snf import sparse_elementary_divisors

Column = list  # list of Poly


class GroupAlgebra:
    """Z[G] for ``G = Z/t_1 + ... + Z/t_l + Z^f`` as a quotient ring."""

    def __init__(self, invariants: AbelianInvariants):
        self.invariants = invariants
        names = []
        for i in range(len(invariants.torsion)):
            names += [f"t{i + 1}", f"t{i + 1}inv"]
        for i in range(invariants.free_rank):
            names += [f"f{i + 1}", f"f{i + 1}inv"]
        self.ring = Ring(names)
        R = self.ring
        one = R.one()
        gens = []
        for k in range(len(names) // 2):
            gens.append(poly_add(poly_mul(R.var(2 * k), R.var(2 * k + 1)), one, -1))
        for k, t in enumerate(invariants.torsion):
            gens.append(poly_add(R.var(2 * k, t), one, -1))
        self.ideal: list[Poly] = gens
        self.ideal_gb: list[Poly] = [vec_to_polys(v, 1)[0] for v in groebner_basis([vec_from_polys([q]) for q in gens])]
        self._gb_cache: dict[int, list[Vec]] = {}

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def ideal_module_gb(self, rank: int, offset: int = 0) -> list[Vec]:
        """Groebner basis of ``I R^rank`` placed at positions ``offset..``."""
        out = []
        for i in range(rank):
            for q in self.ideal_gb:
                out.append({(i + offset, e): c for e, c in q.items()})
        return out

    def normal_form(self, p: Poly) -> Poly:
        if not p or not self.ideal_gb:
            return dict(p)
        return vec_to_polys(reduce_vec(vec_from_polys([p]), self.ideal_module_gb(1)), 1)[0]

    def nf_column(self, col: Column) -> Column:
        return [self.normal_form(p) for p in col]

    def nu(self, g: tuple) -> Poly:
        """The monomial of a group element (torsion coordinates first)."""
        e = [0] * self.nvars
        l = len(self.invariants.torsion)
        for k, a in enumerate(g):
            if k < l:
                e[2 * k] = a
            elif a >= 0:
                e[2 * k] = a
            else:
                e[2 * k + 1] = -a
        return self.normal_form({tuple(e): 1})

    def element_of_monomial(self, e: tuple) -> tuple:
        out = []
        for k in range(self.nvars // 2):
            out.append(e[2 * k] - e[2 * k + 1])
        return AbelianGroup(self.invariants)._norm(tuple(out))

    def unit_inverse(self, p: Poly) -> Poly | None:
        """Inverse of ``+-monomial``; None for anything else."""
        if len(p) != 1:
            return None
        (e, c), = p.items()
        if c not in (1, -1):
            return None
        swapped = []
        for k in range(self.nvars // 2):
            swapped += [e[2 * k + 1], e[2 * k]]
        return self.normal_form({tuple(swapped): c})

    def mul(self, p: Poly, q: Poly) -> Poly:
        return self.normal_form(poly_mul(p, q))

    def format(self, p: Poly) -> str:
        return self.ring.format(p)


def group_algebra(invariants: AbelianInvariants) -> GroupAlgebra:
    return GroupAlgebra(invariants)


# -- matrices ---------------------------------------------------------------------------


def boundary_matrix(X: SimplicialSet, n: int, tau, GA: GroupAlgebra) -> list[list[Poly]]:
    """``m_{n-1} x m_n`` matrix of the cover's boundary as Z[G]-module map.

    Face ``d < n`` contributes ``(-1)^d``; the last face contributes
    ``(-1)^n nu(tau(sigma)^-1)``; degenerate faces contribute nothing.
    """
    rows = list(X.nondegenerate(n - 1)) if n >= 1 else []
    cols = list(X.nondegenerate(n))
    index = {g: i for i, g in enumerate(rows)}
    M = [[{} for _ in cols] for _ in rows]
    if n == 0:
        return M
    G = tau.group
    one = GA.ring.one()
    for j, x in enumerate(cols):
        s = Simplex(x, n)
        for d in range(n + 1):
            f = X.face(s, d)
            if f.is_degenerate:
                continue
            sign = -1 if d % 2 else 1
            coeff = one if d < n else GA.nu(G.inv(tau(s)))
            i = index[f.generator]
            M[i][j] = GA.normal_form(poly_add(M[i][j], coeff, sign))
    return M


def mat_mul(GA: GroupAlgebra, A: list[list[Poly]], B: list[list[Poly]], inner: int) -> list[list[Poly]]:
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        line = []
        for j in range(cols):
            acc: Poly = {}
            for k in range(inner):
                if row[k] and B[k][j]:
                    acc = poly_add(acc, poly_mul(row[k], B[k][j]))
            line.append(GA.normal_form(acc))
        out.append(line)
    return out


def columns(M: list[list[Poly]], ncols: int) -> list[Column]:
    return [[row[j] for row in M] for j in range(ncols)]


def from_columns(cols: list[Column], nrows: int) -> list[list[Poly]]:
    return [[c[i] for c in cols] for i in range(nrows)]


def _gb_syzygies(GA: GroupAlgebra, cols: list[Column], nrows: int) -> list[Column]:
    """Groebner basis of ``(c_j, e_j)`` and ``(I e_i, 0)``; keep what vanishes on the first block."""
    k = len(cols)
    gens = []
    for j, c in enumerate(cols):
        v = vec_from_polys(c)
        v[(nrows + j, GA.ring.one_exp)] = 1
        gens.append(v)
    gens += GA.ideal_module_gb(nrows)
    out: list[Column] = []
    seen = set()
    for v in groebner_basis(gens):
        if any(pos < nrows for pos, _ in v):
            continue
        col = GA.nf_column(vec_to_polys(v, k, nrows))
        if not any(col):
            continue
        key = tuple(tuple(sorted(p.items())) for p in col)
        if key not in seen:
            seen.add(key)
            out.append(col)
    return out


class ColumnReduction:
    """Column operations that clear every unit entry of a matrix.

    For a unit ``u`` at row i, column j, the other columns are reduced so row
    i holds only ``u``; then any kernel vector has j-th coordinate 0, and the
    kernel is the kernel of the remaining block.  ``expand`` and ``contract``
    translate between the original and the surviving coordinates.
    """

    def __init__(self, GA: GroupAlgebra, cols: list[Column], nrows: int):
        self.GA = GA
        self.ncols = len(cols)
        work = [list(c) for c in cols]
        alive_cols = list(range(len(cols)))
        alive_rows = list(range(nrows))
        self.ops: list[tuple[int, list[tuple[int, Poly]]]] = []
        while True:
            found = None
            for j in alive_cols:
                for i in alive_rows:
                    p = work[j][i]
                    if p and GA.unit_inverse(p) is not None:
                        found = (i, j, GA.unit_inverse(p))
                        break
                if found:
                    break
            if found is None:
                break
            i, j, u = found
            step = []
            for k in alive_cols:
                if k != j and work[k][i]:
                    c = GA.mul(work[k][i], u)
                    work[k] = [GA.normal_form(poly_add(a, poly_mul(c, b), -1)) for a, b in zip(work[k], work[j])]
                    step.append((k, c))
            self.ops.append((j, step))
            alive_cols.remove(j)
            alive_rows.remove(i)
        self.alive_cols = alive_cols
        self.alive_rows = alive_rows
        self.reduced = [[work[k][i] for i in alive_rows] for k in alive_cols]

    def expand(self, w: Column) -> Column:
        """Coordinates on the surviving columns to original coordinates."""
        GA = self.GA
        v: list[Poly] = [{} for _ in range(self.ncols)]
        for k, p in zip(self.alive_cols, w):
            v[k] = dict(p)
        for j, step in reversed(self.ops):
            acc = v[j]
            for k, c in step:
                if v[k]:
                    acc = poly_add(acc, poly_mul(c, v[k]), -1)
            v[j] = GA.normal_form(acc)
        return v

    def contract(self, v: Column) -> Column:
        """Inverse of ``expand``; the eliminated coordinates must come out 0."""
        GA = self.GA
        v = [dict(p) for p in v]
        for j, step in self.ops:
            acc = v[j]
            for k, c in step:
                if v[k]:
                    acc = poly_add(acc, poly_mul(c, v[k]))
            v[j] = GA.normal_form(acc)
        if any(v[j] for j, _ in self.ops):
            raise LiftFailure("vector is not in the kernel")
        return [v[k] for k in self.alive_cols]


def _kernel(GA: GroupAlgebra, cols: list[Column], nrows: int):
    """``(reduction, generators in the surviving coordinates)``."""
    red = ColumnReduction(GA, cols, nrows)
    m = len(red.alive_cols)
    if not red.alive_rows:
        basic = [[GA.ring.one() if i == k else {} for i in range(m)] for k in range(m)]
    else:
        basic = _gb_syzygies(GA, red.reduced, len(red.alive_rows))
    return red, basic


def syzygies(GA: GroupAlgebra, cols: list[Column], nrows: int) -> list[Column]:
    """Generators of ``{v : sum_j v_j cols[j] = 0}`` over ``R/I``."""
    red, basic = _kernel(GA, cols, nrows)
    return [red.expand(b) for b in basic]


class Lifter:
    """Writes columns as ``R/I``-combinations of fixed generators."""

    def __init__(self, GA: GroupAlgebra, gens: list[Column], nrows: int):
        self.GA, self.k, self.nrows = GA, len(gens), nrows
        vecs = []
        for j, c in enumerate(gens):
            v = vec_from_polys(c)
            v[(nrows + j, GA.ring.one_exp)] = 1
            vecs.append(v)
        vecs += GA.ideal_module_gb(nrows)
        self.gb = groebner_basis(vecs)

    def lift(self, target: Column) -> Column:
        r = reduce_vec(vec_from_polys(target), self.gb)
        if any(pos < self.nrows for pos, _ in r):
            raise LiftFailure("column is not in the image of the kernel generators")
        w = vec_to_polys(r, self.k, self.nrows)
        return self.GA.nf_column([{e: -c for e, c in p.items()} for p in w])


# -- presentations ------------------------------------------------------------------------


@dataclass
class ModulePresentation:
    """Quotient of ``A^ambient_rank`` by the span of ``relations`` (rows).

    With ``over_ring`` the relations include the ideal, so they present the
    module over the polynomial ring ``R``; otherwise they are read over
    ``R/I``.
    """

    algebra: GroupAlgebra
    ambient_rank: int
    relations: list[list[Poly]]
    over_ring: bool = False

    def formatted(self) -> list[list[str]]:
        return [[self.algebra.format(p) for p in row] for row in self.relations]

    def as_dict(self) -> dict:
        return {
            "variables": list(self.algebra.ring.names),
            "ambient_rank": self.ambient_rank,
            "relations": self.formatted(),
            "over": "polynomial ring" if self.over_ring else "group algebra",
        }


def _drop_unit_pivots(GA: GroupAlgebra, rank: int, rels: list[list[Poly]]):
    rels = [list(r) for r in rels if any(r)]
    while True:
        found = None
        for ri, row in enumerate(rels):
            for j, p in enumerate(row):
                u = GA.unit_inverse(p) if p else None
                if u is not None:
                    found = (ri, j, u)
                    break
            if found:
                break
        if found is None:
            return rank, rels
        ri, j, u = found
        piv = rels.pop(ri)
        new = []
        for row in rels:
            if row[j]:
                factor = GA.mul(row[j], u)
                row = [GA.normal_form(poly_add(a, poly_mul(factor, b), -1)) for a, b in zip(row, piv)]
            row = row[:j] + row[j + 1:]
            if any(row):
                new.append(row)
        rels = new
        rank -= 1


def twisted_homology(X: SimplicialSet, n: int, raw: bool = False, twisting=None) -> ModulePresentation:
    """Presentation of ``H_n`` of the universal cover over ``Z[pi_1(X)]``.

    Kernel generators ``N`` of ``M^n``, a lift ``M^{n+1} = N R1`` and the
    syzygies ``R2`` of ``N`` give the relations ``R1^T`` over ``R2^T``.
    The default output drops unit pivots and then adjoins the ideal
    relations to each generator; ``raw`` returns the unsimplified relations
    over the quotient ring.
    """
    G, tau = twisting if twisting is not None else abelian_twisting(X)
    GA = group_algebra(G.invariants)
    m_n = len(X.nondegenerate(n))
    m_prev = len(X.nondegenerate(n - 1)) if n >= 1 else 0
    Mn = boundary_matrix(X, n, tau, GA)
    Mn1 = boundary_matrix(X, n + 1, tau, GA)
    red, N = _kernel(GA, columns(Mn, m_n), m_prev)
    r = len(N)
    width = len(red.alive_cols)
    R1 = []
    if N and Mn1 and Mn1[0]:
        lifter = Lifter(GA, N, width)
        for c in columns(Mn1, len(Mn1[0])):
            R1.append(lifter.lift(red.contract(c)))
        full = [red.expand(col) for col in N]
        check = mat_mul(GA, from_columns(full, m_n), from_columns(R1, r), r)
        assert check == Mn1, "N R1 != M^{n+1}"
    R2 = syzygies(GA, N, width) if N else []
    rels = [row for row in R1 + R2 if any(row)]
    if raw:
        return ModulePresentation(GA, r, rels, over_ring=False)
    rank, rels = _drop_unit_pivots(GA, r, rels)
    for i in range(rank):
        for q in GA.ideal:
            row = [{} for _ in range(rank)]
            row[i] = dict(q)
            rels.append(row)
    return ModulePresentation(GA, rank, rels, over_ring=True)


def module_is_trivial(P: ModulePresentation) -> bool:
    """Every standard basis vector lies in the relation module."""
    if P.ambient_rank == 0:
        return True
    GA = P.algebra
    gens = [vec_from_polys(row) for row in P.relations if any(row)]
    gens += GA.ideal_module_gb(P.ambient_rank)
    gb = groebner_basis(gens)
    one = GA.ring.one_exp
    return all(not reduce_vec({(i, one): 1}, gb) for i in range(P.ambient_rank))


def integer_specialization(P: ModulePresentation):
    """Underlying abelian group of a presentation over a finite ``Z[G]``.

    Each relation row ``r`` becomes the integer rows ``g r`` for ``g`` in G in
    the regular representation.  Returns ``(betti, torsion)``.
    """
    GA = P.algebra
    G = AbelianGroup(GA.invariants)
    elems = G.elements()
    idx = {g: k for k, g in enumerate(elems)}
    size = len(elems)
    rows = []
    for rel in P.relations:
        for g in elems:
            out: dict[int, int] = {}
            for j, p in enumerate(rel):
                for e, c in p.items():
                    k = j * size + idx[G.mul(g, GA.element_of_monomial(e))]
                    v = out.get(k, 0) + c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
            if out:
                rows.append(out)
    divs = sparse_elementary_divisors(rows)
    return P.ambient_rank * size - len(divs), tuple(d for d in divs if d > 1)
