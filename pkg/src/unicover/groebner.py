"""Strong Groebner bases of submodules of free modules over Z[x_1..x_k]."""

from __future__ import annotations

import heapq

from .poly import Vec, divides, lead, mono_div, mono_lcm, vec_add, vec_scale_term


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """``(d, u, v)`` with ``d = gcd(a, b) = u a + v b`` and ``d >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _lcm(a: int, b: int) -> int:
    d, _, _ = ext_gcd(a, b)
    return abs(a * b) // d


class _Elem:
    __slots__ = ("vec", "pos", "mono", "lc")

    def __init__(self, vec: Vec):
        if not vec:
            raise ValueError("zero vector")
        (pos, mono), lc = lead(vec)
        if lc < 0:
            vec = {t: -c for t, c in vec.items()}
            lc = -lc
        self.vec = vec
        self.pos = pos
        self.mono = mono
        self.lc = lc


def reduce_vec(v: Vec, basis: list) -> Vec:
    """Full reduction of ``v`` by ``basis`` (a list of ``_Elem`` or vectors).

    A term is cancelled when some leading term divides it with a dividing
    coefficient; otherwise its coefficient is reduced modulo the smallest
    applicable leading coefficient.  The result is 0 for every member of
    the module when ``basis`` is a strong Groebner basis.
    """
    elems = [b if isinstance(b, _Elem) else _Elem(b) for b in basis]
    v = dict(v)
    rem: Vec = {}
    while v:
        (pos, mono), c = lead(v)
        exact = None
        best = None
        for g in elems:
            if g.pos != pos or not divides(g.mono, mono):
                continue
            if c % g.lc == 0:
                if exact is None or g.lc > exact.lc:
                    exact = g
            elif g.lc <= abs(c) and (best is None or g.lc < best.lc):
                best = g
        if exact is not None:
            v = vec_add(v, vec_scale_term(exact.vec, c // exact.lc, mono_div(mono, exact.mono)), -1)
            continue
        if best is not None:
            q = c // best.lc
            v = vec_add(v, vec_scale_term(best.vec, q, mono_div(mono, best.mono)), -1)
            continue
        rem[(pos, mono)] = c
        del v[(pos, mono)]
    return rem


def groebner_basis(gens: list[Vec]) -> list[Vec]:
    """Strong Groebner basis via S- and G-polynomials (Buchberger over Z).

    Pairs are processed lowest lcm degree first.  An element whose leading
    term becomes reducible by a newer one is retired and its reduction fed
    back in, which keeps coefficients from growing without bound.
    """
    G: list[_Elem] = []
    alive: list[bool] = []
    pairs: list[tuple[int, int, int]] = []  # heap of (degree of lcm, i, j)
    todo: list[Vec] = list(gens)

    def active():
        return [g for g, a in zip(G, alive) if a]

    def add(v: Vec):
        e = _Elem(v)
        k = len(G)
        for i, g in enumerate(G):
            if not alive[i] or g.pos != e.pos:
                continue
            if divides(e.mono, g.mono) and g.lc % e.lc == 0:
                alive[i] = False
                todo.append(g.vec)
                continue
            heapq.heappush(pairs, (e.pos, sum(mono_lcm(g.mono, e.mono)), i, k))
        G.append(e)
        alive.append(True)

    def drain():
        grew = False
        while todo:
            r = reduce_vec(todo.pop(), active())
            if r:
                add(r)
                grew = True
        if grew:
            _reduce_tails(G, alive)

    drain()
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if not (alive[i] and alive[j]):
            continue
        f, g = G[i], G[j]
        m = mono_lcm(f.mono, g.mono)
        mf, mg = mono_div(m, f.mono), mono_div(m, g.mono)
        L = _lcm(f.lc, g.lc)
        todo.append(vec_add(vec_scale_term(f.vec, L // f.lc, mf), vec_scale_term(g.vec, L // g.lc, mg), -1))
        if f.lc % g.lc and g.lc % f.lc:
            d, u, w = ext_gcd(f.lc, g.lc)
            todo.append(vec_add(vec_scale_term(f.vec, u, mf), vec_scale_term(g.vec, w, mg)))
        todo[:] = [c for c in todo if c]
        drain()
    return [e.vec for e in _minimal(active())]


def _reduce_tails(G: list[_Elem], alive: list[bool]) -> None:
    """Reduce every term below the leading one by the other live elements."""
    for i, e in enumerate(G):
        if not alive[i]:
            continue
        others = [g for k, g in enumerate(G) if alive[k] and k != i]
        head = (e.pos, e.mono)
        tail = {t: c for t, c in e.vec.items() if t != head}
        new = reduce_vec(tail, others)
        new[head] = e.lc
        e.vec = new


def _minimal(G: list[_Elem]) -> list[_Elem]:
    keep = []
    for i, e in enumerate(G):
        redundant = False
        for j, o in enumerate(G):
            if i == j or o.pos != e.pos or not divides(o.mono, e.mono) or e.lc % o.lc:
                continue
            same = o.mono == e.mono and o.lc == e.lc
            if not same or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(e)
    return keep


def in_module(v: Vec, gb: list[Vec]) -> bool:
    return not reduce_vec(v, gb)
