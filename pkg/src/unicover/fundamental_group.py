"""Edge-path presentations of the fundamental group and finite group tables."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

from .errors import ContractViolation, GroupTooLargeOrInfinite, NotConnected, NotSurjective, Unsupported
from .simplicial import SimplicialSet
from .snf import smith_normal_form

Word = tuple[int, ...]  # signed 1-based generator indices


# -- words -------------------------------------------------------------------


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def invert(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def _canonical_relator(word: Word) -> Word:
    """Representative of the relator's class under rotation and inversion."""
    if not word:
        return word
    cands = []
    for w in (word, invert(word)):
        for k in range(len(w)):
            cands.append(w[k:] + w[:k])
    return min(cands, key=lambda w: (len(w), [(abs(x), -x) for x in w]))


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    """Juxtaposed powers joined by ``*``; a proper power prints as ``(u)^k``."""
    if not word:
        return "1"
    n = len(word)
    for period in range(1, n // 2 + 1):
        if n % period == 0 and word == tuple(word[:period]) * (n // period) and period > 1:
            return f"({format_word(word[:period], names)})^{n // period}"
    parts = []
    i = 0
    while i < n:
        j = i
        while j < n and word[j] == word[i]:
            j += 1
        g = names[abs(word[i]) - 1]
        e = (j - i) * (1 if word[i] > 0 else -1)
        parts.append(g if e == 1 else f"{g}^{e}")
        i = j
    return "*".join(parts)


# -- trees and presentations ------------------------------------------------


@dataclass(frozen=True)
class MaximalTree:
    edges: frozenset
    root: str


def edge_ends(X: SimplicialSet, e: str) -> tuple[str, str]:
    """(source, target) = (d_1 e, d_0 e)."""
    d0, d1 = X.generator_faces(e)
    return d1.generator, d0.generator


def maximal_tree(X: SimplicialSet, basepoint: str | None = None) -> MaximalTree:
    """Breadth-first spanning tree; edges are tried in generator-list order."""
    verts = X.vertices()
    if not verts:
        raise ContractViolation("simplicial set has no vertices")
    root = verts[0] if basepoint is None else basepoint
    if root not in verts:
        raise ContractViolation(f"{root!r} is not a vertex")
    incident: dict[str, list[tuple[str, str]]] = {v: [] for v in verts}
    for e in X.nondegenerate(1):
        s, t = edge_ends(X, e)
        if s != t:
            incident[s].append((e, t))
            incident[t].append((e, s))
    order = {e: k for k, e in enumerate(X.nondegenerate(1))}
    for v in incident:
        incident[v].sort(key=lambda p: order[p[0]])
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for e, w in incident[u]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    for v in verts:
        if v not in seen:
            raise NotConnected(v)
    return MaximalTree(frozenset(tree), root)


@dataclass
class GroupPresentation:
    generators: list[str]
    relators: list[Word]

    def __str__(self):
        rel = ", ".join(format_word(r, self.generators) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rel} >"

    def evaluate_exponents(self) -> list[list[int]]:
        """Relator-exponent matrix (one row per relator)."""
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows


@dataclass
class EdgePathPresentation:
    """Presentation read off a maximal tree, with the word of every edge.

    ``edge_words`` maps each nondegenerate edge to a word in ``presentation``
    (tree edges map to the empty word).
    """

    presentation: GroupPresentation
    edge_words: dict[str, Word]
    tree: MaximalTree


def pi1_presentation(X: SimplicialSet, T: MaximalTree | None = None) -> GroupPresentation:
    return edge_path_presentation(X, T).presentation


def edge_path_presentation(X: SimplicialSet, T: MaximalTree | None = None) -> EdgePathPresentation:
    if T is None:
        T = maximal_tree(X)
    gens = [e for e in X.nondegenerate(1) if e not in T.edges]
    index = {e: k + 1 for k, e in enumerate(gens)}

    def letter(s) -> Word:
        if s.is_degenerate or s.generator not in index:
            return ()
        return (index[s.generator],)

    relators = []
    for t in X.nondegenerate(2):
        d0, d1, d2 = X.generator_faces(t)
        relators.append(free_reduce(letter(d2) + letter(d0) + invert(letter(d1))))
    words = {e: ((index[e],) if e in index else ()) for e in X.nondegenerate(1)}
    return EdgePathPresentation(GroupPresentation(gens, relators), words, T)


# -- Tietze simplification ---------------------------------------------------


def _substitute(word: Word, gen: int, image: Word) -> Word:
    out: list[int] = []
    inv_image = invert(image)
    for x in word:
        if abs(x) == gen:
            out.extend(image if x > 0 else inv_image)
        else:
            out.append(x)
    return free_reduce(out)


def simplify_presentation(P: GroupPresentation, max_length: int = 20000):
    """Eliminate generators that occur exactly once in some relator.

    Returns ``(Q, expressions)`` where ``expressions[j]`` writes the j-th
    generator of ``P`` as a word in the generators of ``Q``.
    """
    n = len(P.generators)
    exprs: list[Word] = [(j + 1,) for j in range(n)]
    rels = [cyclic_reduce(r) for r in P.relators]
    alive = set(range(1, n + 1))

    def tidy(rs):
        seen = set()
        out = []
        for r in rs:
            r = cyclic_reduce(r)
            if not r:
                continue
            key = _canonical_relator(r)
            if key in seen:
                continue
            seen.add(key)
            out.append(r)
        return out

    rels = tidy(rels)
    while True:
        best = None
        for ri, r in sorted(enumerate(rels), key=lambda p: (len(p[1]), p[0])):
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = [g for g in sorted(counts) if counts[g] == 1]
            if once:
                best = (ri, once[0])
                break
        if best is None:
            break
        ri, g = best
        r = rels[ri]
        pos = next(k for k, x in enumerate(r) if abs(x) == g)
        rot = r[pos:] + r[:pos]
        rest = rot[1:]
        image = invert(rest) if rot[0] > 0 else rest
        new = [_substitute(w, g, image) for k, w in enumerate(rels) if k != ri]
        if sum(map(len, new)) > max_length:
            break
        rels = tidy(new)
        exprs = [_substitute(w, g, image) for w in exprs]
        alive.discard(g)
    keep = sorted(alive)
    renum = {old: k + 1 for k, old in enumerate(keep)}

    def rename(w):
        return tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in w)

    Q = GroupPresentation([P.generators[g - 1] for g in keep], [rename(r) for r in rels])
    Q.relators.sort(key=lambda w: (len(w), [(abs(x), -x) for x in w]))
    return Q, [rename(w) for w in exprs]


# -- abelian groups ------------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __str__(self):
        parts = [f"C{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "0"

    @property
    def rank(self):
        return len(self.torsion) + self.free_rank

    @property
    def is_finite(self):
        return self.free_rank == 0


class AbelianGroup:
    """Z/t_1 + ... + Z/t_l + Z^f with elements as integer tuples."""

    def __init__(self, invariants: AbelianInvariants):
        self.invariants = invariants
        self.moduli = tuple(invariants.torsion) + (0,) * invariants.free_rank
        self.identity = (0,) * len(self.moduli)

    def _norm(self, v):
        return tuple(x % m if m else x for x, m in zip(v, self.moduli))

    def mul(self, a, b):
        return self._norm(tuple(x + y for x, y in zip(a, b)))

    def inv(self, a):
        return self._norm(tuple(-x for x in a))

    def power(self, a, k):
        return self._norm(tuple(k * x for x in a))

    @property
    def order(self):
        if self.invariants.free_rank:
            return None
        return reduce(lambda x, y: x * y, self.invariants.torsion, 1)

    @property
    def is_finite(self):
        return self.invariants.free_rank == 0

    def elements(self):
        if not self.is_finite:
            raise GroupTooLargeOrInfinite("the group is infinite and cannot be enumerated")
        out = [()]
        for t in self.invariants.torsion:
            out = [e + (k,) for e in out for k in range(t)]
        return out

    def evaluate(self, word: Sequence[int], images: Sequence) -> tuple:
        acc = self.identity
        for x in word:
            v = images[abs(x) - 1]
            acc = self.mul(acc, v if x > 0 else self.inv(v))
        return acc


@dataclass
class Abelianization:
    invariants: AbelianInvariants
    images: list[tuple[int, ...]]  # image of each generator, torsion coordinates first
    group: AbelianGroup


def abelianization(P: GroupPresentation) -> Abelianization:
    """Abelian invariants together with the quotient map on generators.

    With ``R = U D V`` the relator lattice becomes diagonal in the coordinates
    ``y = x V^-1``; generator j maps to row j of ``V^-1``.
    """
    n = len(P.generators)
    R = P.evaluate_exponents()
    snf = smith_normal_form(R, n)
    diag = snf.diagonal + [0] * (n - len(snf.diagonal))
    torsion_idx = [i for i, d in enumerate(diag) if d >= 2]
    free_idx = [i for i, d in enumerate(diag) if d == 0]
    inv = AbelianInvariants(tuple(diag[i] for i in torsion_idx), len(free_idx))
    G = AbelianGroup(inv)
    images = []
    for j in range(n):
        row = snf.V_inv[j]
        images.append(G._norm(tuple(row[i] for i in torsion_idx) + tuple(row[i] for i in free_idx)))
    return Abelianization(inv, images, G)


def abelian_invariants(P: GroupPresentation) -> AbelianInvariants:
    return abelianization(P).invariants


# -- finite groups -------------------------------------------------------------


@dataclass
class FiniteGroupTable:
    """A finite group as a multiplication table on ``0..order-1``.

    ``word_images[name]`` is the image of a presentation generator.
    """

    order: int
    mul_table: list[list[int]]
    identity: int = 0
    inverse: list[int] = field(default_factory=list)
    word_images: dict[str, int] = field(default_factory=dict)
    element_words: list[Word] | None = None

    def __post_init__(self):
        if not self.inverse:
            e = self.identity
            self.inverse = [row.index(e) for row in self.mul_table]

    def elements(self):
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    @property
    def is_finite(self):
        return True

    def evaluate(self, word: Sequence[int], images: Sequence[int]) -> int:
        acc = self.identity
        for x in word:
            v = images[abs(x) - 1]
            acc = self.mul_table[acc][v if x > 0 else self.inverse[v]]
        return acc

    def is_abelian(self) -> bool:
        t = self.mul_table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def subgroup_generated(self, gens: Iterable[int]) -> set[int]:
        gens = list(gens)
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            a = queue.popleft()
            for g in gens:
                b = self.mul_table[a][g]
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return seen

    def check_axioms(self) -> list[str]:
        bad = []
        n, t, e = self.order, self.mul_table, self.identity
        for a in range(n):
            if t[a][e] != a or t[e][a] != a:
                bad.append(f"identity law fails at {a}")
            if t[a][self.inverse[a]] != e:
                bad.append(f"inverse law fails at {a}")
            for b in range(n):
                for c in range(n):
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        bad.append(f"associativity fails at ({a},{b},{c})")
                        return bad
        return bad

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroupTable":
        return cls(n, [[(a + b) % n for b in range(n)] for a in range(n)])

    @classmethod
    def trivial(cls) -> "FiniteGroupTable":
        return cls(1, [[0]])

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]], limit: int = 100000):
        """Group generated by permutations (images of 0..d-1), plus the generators' indices."""
        gens = [tuple(g) for g in gens]
        d = len(gens[0]) if gens else 0
        ident = tuple(range(d))
        elems = [ident]
        index = {ident: 0}
        queue = deque([ident])
        while queue:
            p = queue.popleft()
            for g in gens:
                q = tuple(g[p[i]] for i in range(d))  # apply p then g
                if q not in index:
                    if len(elems) >= limit:
                        raise GroupTooLargeOrInfinite(f"permutation group exceeds {limit} elements")
                    index[q] = len(elems)
                    elems.append(q)
                    queue.append(q)
        n = len(elems)
        table = [[index[tuple(b[a[i]] for i in range(d))] for b in elems] for a in elems]
        return cls(n, table), [index[g] for g in gens], elems


# -- coset enumeration ---------------------------------------------------------


class _CosetTable:
    """HLT coset enumeration over the trivial subgroup with union-find coincidences."""

    def __init__(self, ngens: int, relators: list[Word], max_cosets: int):
        self.ncols = 2 * ngens
        self.rels = [[self.col(x) for x in r] for r in relators]
        self.max_cosets = max_cosets
        self.table: list[list[int | None]] = [[None] * self.ncols]
        self.parent = [0]
        self.live = 1

    @staticmethod
    def col(x: int) -> int:
        return 2 * (abs(x) - 1) + (0 if x > 0 else 1)

    @staticmethod
    def inv(c: int) -> int:
        return c ^ 1

    def new_coset(self) -> int:
        if self.live >= self.max_cosets:
            raise GroupTooLargeOrInfinite(
                f"coset enumeration exceeded {self.max_cosets} cosets (group too large or infinite)"
            )
        self.table.append([None] * self.ncols)
        self.parent.append(len(self.parent))
        self.live += 1
        return len(self.table) - 1

    def define(self, c: int, x: int) -> None:
        d = self.new_coset()
        self.table[c][x] = d
        self.table[d][self.inv(x)] = c

    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        self.parent[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        T = self.table
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = T[e][x]
                if f is None:
                    continue
                xi = self.inv(x)
                T[f][xi] = None
                e1, f1 = self.rep(e), self.rep(f)
                if T[e1][x] is not None:
                    self._merge(f1, T[e1][x], queue)
                elif T[f1][xi] is not None:
                    self._merge(e1, T[f1][xi], queue)
                else:
                    T[e1][x] = f1
                    T[f1][xi] = e1

    def scan_and_fill(self, c: int, w: list[int]) -> None:
        T = self.table
        n = len(w)
        f, b = c, c
        i, j = 0, n - 1
        while True:
            while i <= j and T[f][w[i]] is not None:
                f = T[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and T[b][self.inv(w[j])] is not None:
                b = T[b][self.inv(w[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                T[f][w[i]] = b
                T[b][self.inv(w[i])] = f
                return
            self.define(f, w[i])

    def run(self) -> None:
        c = 0
        while c < len(self.table):
            for w in self.rels:
                if not self.is_live(c):
                    break
                if w:
                    self.scan_and_fill(c, w)
            if self.is_live(c):
                for x in range(self.ncols):
                    if self.table[c][x] is None:
                        self.define(c, x)
            c += 1


def todd_coxeter(P: GroupPresentation, max_cosets: int = 100000) -> FiniteGroupTable:
    """Enumerate the cosets of the trivial subgroup and return the regular table.

    Element 0 is the identity; elements are numbered in breadth-first order of
    the coset graph, and ``element_words[k]`` is a shortest word reaching k.
    """
    ngens = len(P.generators)
    if ngens == 0:
        return FiniteGroupTable(1, [[0]], element_words=[()])
    ab = abelian_invariants(P)
    if ab.free_rank:
        raise GroupTooLargeOrInfinite("abelianization has a free summand, so the group is infinite")
    ct = _CosetTable(ngens, [cyclic_reduce(r) for r in P.relators], max_cosets)
    ct.run()
    T = ct.table
    # renumber live cosets breadth-first from the identity coset
    num = {0: 0}
    words: list[Word] = [()]
    order_list = [0]
    parent: list[tuple[int, int] | None] = [None]
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(ct.ncols):
            d = ct.rep(T[c][x])
            if d not in num:
                num[d] = len(order_list)
                order_list.append(d)
                g = x // 2 + 1
                words.append(words[num[c]] + ((g if x % 2 == 0 else -g),))
                parent.append((num[c], x))
                queue.append(d)
    n = len(order_list)
    act = [[num[ct.rep(T[c][x])] for x in range(ct.ncols)] for c in order_list]
    # mul[a][b]: follow the word of b starting at a, built up along the BFS tree
    mul = [[0] * n for _ in range(n)]
    for a in range(n):
        row = mul[a]
        row[0] = a
        for b in range(1, n):
            pb, x = parent[b]
            row[b] = act[row[pb]][x]
    images = {name: act[0][2 * k] for k, name in enumerate(P.generators)}
    return FiniteGroupTable(n, mul, 0, word_images=images, element_words=words)


# -- the pipeline used by covers ----------------------------------------------


@dataclass
class FundamentalGroup:
    """Everything the cover construction needs about pi_1(X).

    ``edge_values[e]`` is the image in ``group`` of the edge-path class of ``e``.
    """

    edge_path: EdgePathPresentation
    simplified: GroupPresentation
    expressions: list[Word]
    group: FiniteGroupTable
    edge_values: dict[str, int]


def fundamental_group(X: SimplicialSet, max_cosets: int = 100000, basepoint=None) -> FundamentalGroup:
    ep = edge_path_presentation(X, maximal_tree(X, basepoint))
    Q, exprs = simplify_presentation(ep.presentation)
    G = todd_coxeter(Q, max_cosets)
    gen_values = [G.evaluate(w, [G.word_images[g] for g in Q.generators]) for w in exprs]
    edge_values = {e: G.evaluate(w, gen_values) for e, w in ep.edge_words.items()}
    G.word_images = {g: gen_values[k] for k, g in enumerate(ep.presentation.generators)}
    for r in ep.presentation.relators:
        if G.evaluate(r, gen_values) != G.identity:
            raise AssertionError("relator does not evaluate to the identity")
    return FundamentalGroup(ep, Q, exprs, G, edge_values)


def is_abelian_presentation(P: GroupPresentation, max_cosets: int = 20000) -> bool:
    """Decide commutativity when possible; raises Unsupported otherwise."""
    n = len(P.generators)
    if n <= 1:
        return True
    rels = {_canonical_relator(cyclic_reduce(r)) for r in P.relators}
    if all(_canonical_relator((i, j, -i, -j)) in rels for i in range(1, n + 1) for j in range(i + 1, n + 1)):
        return True
    try:
        return todd_coxeter(P, max_cosets).is_abelian()
    except GroupTooLargeOrInfinite:
        raise Unsupported("cannot decide whether this infinite fundamental group is abelian") from None


def surjection_from_images(P: GroupPresentation, G: FiniteGroupTable, images: dict[str, int]) -> dict[str, int]:
    """Check that generator images define a surjective morphism onto ``G``."""
    missing = [g for g in P.generators if g not in images]
    if missing:
        raise ContractViolation(f"no image given for generator(s) {', '.join(missing)}")
    vals = [images[g] for g in P.generators]
    for r in P.relators:
        if G.evaluate(r, vals) != G.identity:
            raise ContractViolation(f"relator {format_word(r, P.generators)} is not respected")
    if len(G.subgroup_generated(vals)) != G.order:
        raise NotSurjective("the generator images do not generate the whole group")
    return dict(images)
