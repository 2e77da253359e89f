"""Sparse integer polynomials and free-module vectors over them.

A polynomial is a dict ``{exponent tuple: coefficient}``.  A module vector is
a dict ``{(position, exponent tuple): coefficient}``; a polynomial is the
special case where every position is 0.  Monomials are compared in degree
reverse lexicographic order with the first variable largest; module terms
are compared position over term, lower position first.
"""

from __future__ import annotations

from typing import Sequence

Exp = tuple[int, ...]
Poly = dict  # Exp -> int
Vec = dict  # (pos, Exp) -> int


def mono_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


def term_key(t):
    pos, e = t
    return (-pos, sum(e), tuple(-x for x in reversed(e)))


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def poly_add(p: Poly, q: Poly, c: int = 1) -> Poly:
    out = dict(p)
    for e, x in q.items():
        v = out.get(e, 0) + c * x
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, a in p.items():
        for e2, b in q.items():
            e = mono_mul(e1, e2)
            v = out.get(e, 0) + a * b
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_const(c: int, nvars: int) -> Poly:
    return {(0,) * nvars: c} if c else {}


def vec_from_polys(polys: Sequence[Poly], offset: int = 0) -> Vec:
    out: Vec = {}
    for i, p in enumerate(polys):
        for e, c in p.items():
            if c:
                out[(i + offset, e)] = c
    return out


def vec_to_polys(v: Vec, rank: int, offset: int = 0) -> list[Poly]:
    out: list[Poly] = [{} for _ in range(rank)]
    for (pos, e), c in v.items():
        if offset <= pos < offset + rank:
            out[pos - offset][e] = c
    return out


def vec_add(v: Vec, w: Vec, c: int = 1) -> Vec:
    return poly_add(v, w, c)


def vec_scale_term(v: Vec, c: int, m: Exp) -> Vec:
    """``c * x^m * v``."""
    return {(pos, mono_mul(e, m)): c * x for (pos, e), x in v.items()}


def lead(v: Vec):
    """Leading term ``((pos, exp), coeff)`` in position-over-term order."""
    t = max(v, key=term_key)
    return t, v[t]


class Ring:
    """``Z[x_1, ..., x_k]`` with named variables."""

    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        self.nvars = len(self.names)
        self.one_exp = (0,) * self.nvars

    def one(self) -> Poly:
        return {self.one_exp: 1}

    def var(self, i: int, power: int = 1) -> Poly:
        e = [0] * self.nvars
        e[i] = power
        return {tuple(e): 1}

    def format(self, p: Poly) -> str:
        """Terms in decreasing order, ``2*f1^2*f1inv - f1 + 3`` style."""
        if not p:
            return "0"
        out = []
        for k, e in enumerate(sorted(p, key=mono_key, reverse=True)):
            c = p[e]
            mono = "*".join(
                (self.names[i] if x == 1 else f"{self.names[i]}^{x}") for i, x in enumerate(e) if x
            )
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def parse_monomial(self, text: str) -> Exp:
        e = [0] * self.nvars
        for part in text.split("*"):
            name, _, power = part.partition("^")
            e[self.names.index(name)] += int(power) if power else 1
        return tuple(e)
