"""Small simplicial-set models used as examples, fixtures and test corpus."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .simplicial import Simplex, SimplicialSet, cartesian_product


def _nd(name, dim):
    return Simplex(name, dim)


def _degenerate_vertex(v: str, n: int) -> Simplex:
    """The totally degenerate n-simplex on a vertex."""
    return Simplex(v, n, tuple(range(n - 1, -1, -1)))


def standard_simplex(n: int) -> SimplicialSet:
    """Delta^n with one generator per nonempty vertex subset, named like ``[0,2,3]``."""
    gens: dict[int, list[str]] = {}
    faces = {}

    def label(vs):
        return "[" + ",".join(map(str, vs)) + "]"

    for k in range(n + 1):
        gens[k] = []
        for vs in combinations(range(n + 1), k + 1):
            gens[k].append(label(vs))
            if k:
                faces[label(vs)] = [_nd(label(vs[:i] + vs[i + 1:]), k - 1) for i in range(k + 1)]
    return SimplicialSet(gens, faces, name=f"Delta^{n}")


def circle() -> SimplicialSet:
    return SimplicialSet({0: ["v"], 1: ["e"]}, {"e": [_nd("v", 0)] * 2}, name="S^1")


def sphere(n: int) -> SimplicialSet:
    """S^n with one vertex and one n-cell whose faces are all degenerate."""
    if n == 0:
        return SimplicialSet({0: ["v", "w"]}, {}, name="S^0")
    return SimplicialSet(
        {0: ["v"], n: ["s"]}, {"s": [_degenerate_vertex("v", n - 1)] * (n + 1)}, name=f"S^{n}"
    )


def cyclic_nerve(m: int, top: int) -> SimplicialSet:
    """Nerve of Z/m truncated at dimension ``top``.

    A k-simplex is a bar ``[g_1|...|g_k]`` with entries in 1..m-1.  The inner
    face d_i multiplies the neighbouring entries; a resulting identity entry in
    position p is the degeneracy s_p.  The homology agrees with the lens space
    L(m) up to degree top - 1.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    gens: dict[int, list[str]] = {0: ["*"]}
    faces = {}

    def label(bar):
        return "[" + "|".join(map(str, bar)) + "]"

    def as_simplex(bar):
        if 0 in bar:
            p = bar.index(0)
            rest = bar[:p] + bar[p + 1:]
            inner = as_simplex(rest)
            return Simplex(inner.generator, len(bar), tuple(sorted(inner.degeneracies + (p,), reverse=True)))
        return Simplex(label(bar) if bar else "*", len(bar))

    def bars(k):
        if k == 0:
            yield ()
            return
        for b in bars(k - 1):
            for g in range(1, m):
                yield b + (g,)

    for k in range(1, top + 1):
        gens[k] = []
        for bar in bars(k):
            nm = label(bar)
            gens[k].append(nm)
            fs = [as_simplex(bar[1:])]
            for i in range(1, k):
                fs.append(as_simplex(bar[: i - 1] + ((bar[i - 1] + bar[i]) % m,) + bar[i + 1:]))
            fs.append(as_simplex(bar[:-1]))
            faces[nm] = fs
    return SimplicialSet(gens, faces, name=f"K(Z/{m},1)^({top})")


_RP_NAMES = ["v", "a", "t"]


def real_projective_space(n: int) -> SimplicialSet:
    """RP^n: one nondegenerate simplex per dimension (the nerve of Z/2 truncated).

    Generators are named v, a, t, then c3, c4, ...
    """
    names = [_RP_NAMES[k] if k < len(_RP_NAMES) else f"c{k}" for k in range(n + 1)]
    gens = {k: [names[k]] for k in range(n + 1)}
    faces = {}
    for k in range(1, n + 1):
        prev = _nd(names[k - 1], k - 1)
        inner = []
        for i in range(1, k):
            # merging two copies of the generator gives the identity at slot i-1
            inner.append(Simplex(names[k - 2], k - 1, (i - 1,)))
        faces[names[k]] = [prev] + inner + [prev]
    return SimplicialSet(gens, faces, name=f"RP^{n}")


def wedge_circle_sphere() -> SimplicialSet:
    """S^1 v S^2 with cells v, e, t."""
    return SimplicialSet(
        {0: ["v"], 1: ["e"], 2: ["t"]},
        {"e": [_nd("v", 0)] * 2, "t": [Simplex("v", 1, (0,))] * 3},
        name="S^1 v S^2",
    )


def torus() -> SimplicialSet:
    """Two-triangle torus with edges a, b and diagonal c."""
    a, b, c = (_nd(x, 1) for x in "abc")
    v = _nd("v", 0)
    return SimplicialSet(
        {0: ["v"], 1: ["a", "b", "c"], 2: ["T1", "T2"]},
        {"a": [v, v], "b": [v, v], "c": [v, v], "T1": [b, c, a], "T2": [a, c, b]},
        name="T^2",
    )


def presentation_complex(generators: Sequence[str], relators: Sequence[Sequence[int]], name="") -> SimplicialSet:
    """One-vertex 2-complex whose edge-path group is the given presentation.

    Relators are words of signed 1-based generator indices.  Each generator
    ``g`` contributes edges ``g`` and ``g^-1`` and a triangle forcing them to be
    inverse; each relator is triangulated as a fan from its first letter.
    """
    v = _nd("v", 0)
    dv = Simplex("v", 1, (0,))
    edges: list[str] = []
    tris: list[str] = []
    faces: dict[str, list[Simplex]] = {}

    def inv_name(g):
        return f"{g}^-1"

    for g in generators:
        edges += [g, inv_name(g)]
        faces[g] = [v, v]
        faces[inv_name(g)] = [v, v]
    for g in generators:
        nm = f"{g}*{g}^-1"
        tris.append(nm)
        faces[nm] = [_nd(g, 1), dv, _nd(inv_name(g), 1)]

    def letter(k):
        g = generators[abs(k) - 1]
        return _nd(g if k > 0 else inv_name(g), 1)

    def inverse_letter(k):
        return letter(-k)

    aux = 0
    for r, word in enumerate(relators):
        word = list(word)
        tag = f"r{r}"
        m = len(word)
        if m == 0:
            continue
        if m == 1:
            tris.append(tag)
            faces[tag] = [letter(word[0]), dv, dv]
            continue
        if m == 2:
            tris.append(tag)
            faces[tag] = [letter(word[1]), dv, letter(word[0])]
            continue
        current = letter(word[0])
        for i in range(1, m - 2):
            c = f"c{aux}"
            aux += 1
            edges.append(c)
            faces[c] = [v, v]
            nm = f"{tag}.{i}"
            tris.append(nm)
            faces[nm] = [letter(word[i]), _nd(c, 1), current]
            current = _nd(c, 1)
        nm = f"{tag}.{m - 2}"
        tris.append(nm)
        faces[nm] = [letter(word[m - 2]), inverse_letter(word[m - 1]), current]
    return SimplicialSet({0: ["v"], 1: edges, 2: tris}, faces, name=name or "presentation complex")


def sym3_complex() -> SimplicialSet:
    """Presentation complex of < a, b | b^2, a^3, (a*b)^2 >."""
    return presentation_complex(["a", "b"], [[2, 2], [1, 1, 1], [1, 2, 1, 2]], name="Sym(3) complex")


def sym3_times_rp3() -> SimplicialSet:
    return cartesian_product(sym3_complex(), real_projective_space(3), name="Sym(3) complex x RP^3")


def corpus() -> dict[str, SimplicialSet]:
    """Complexes with finite fundamental group used throughout the tests."""
    return {
        "point": standard_simplex(0),
        "delta2": standard_simplex(2),
        "s2": sphere(2),
        "rp2": real_projective_space(2),
        "rp3": real_projective_space(3),
        "lens3": cyclic_nerve(3, 3),
        "lens4": cyclic_nerve(4, 3),
        "sym3": sym3_complex(),
        "rp2xrp2": cartesian_product(real_projective_space(2), real_projective_space(2)),
    }
