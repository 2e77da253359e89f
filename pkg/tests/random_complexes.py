"""Random small reductions with a known answer, for the axiom property suite.

A top complex is a bottom complex plus contractible pairs ``q -> p``; the
obvious projection, inclusion and homotopy ``p |-> q`` form a reduction.  Both
ends are then scrambled by random unimodular changes of basis, which keeps
every identity while hiding the splitting.
"""

import random

from unicover.homalg import (
    ChainComplex,
    Equivalence,
    LinearMap,
    Reduction,
    add_into,
    chain_of,
    combine,
    compose,
    compose_reductions,
    lin_sum,
)
from unicover.morse import greedy_field, morse_reduction


def _matrix_map(table: dict, degree: int, name: str) -> LinearMap:
    return LinearMap(lambda n, g: dict(table.get(g, {})), degree, name)


def random_automorphism(rng, basis: dict, steps: int):
    """``(phi, phi_inv)`` as explicit tables, products of transvections."""
    fwd = {g: {g: 1} for gs in basis.values() for g in gs}
    bwd = {g: {g: 1} for gs in basis.values() for g in gs}
    degrees = [n for n, gs in basis.items() if len(gs) >= 2]
    for _ in range(steps if degrees else 0):
        n = rng.choice(degrees)
        i, j = rng.sample(basis[n], 2)
        c = rng.choice([-2, -1, 1, 2])
        # T(e_j) = e_j + c e_i, applied after what is there: phi <- T phi
        for g, img in fwd.items():
            if j in img:
                add_into(img, {i: c * img[j]})
        # phi_inv <- phi_inv T^-1: only the column of e_j changes
        bwd[j] = combine((1, bwd[j]), (-c, bwd[i]))
    return _matrix_map(fwd, 0, "phi"), _matrix_map(bwd, 0, "phi_inv")


def conjugate_complex(C: ChainComplex, phi, phi_inv, name="") -> ChainComplex:
    d = compose(phi, compose(C.diff, phi_inv))
    return ChainComplex(LinearMap(d.on_gen, -1, "d"), {n: C.basis(n) for n in C.degrees()}, name=name)


def random_bottom(rng, tag: str, max_deg: int, max_gens: int, mix: int) -> ChainComplex:
    basis = {n: [] for n in range(max_deg + 1)}
    d: dict = {}
    k = 0
    for n in range(max_deg + 1):
        for _ in range(rng.randint(0, max_gens)):
            basis[n].append((tag, n, k))
            k += 1
    # elementary pieces: some degree-n generators hit a multiple of a degree n-1 one
    for n in range(1, max_deg + 1):
        free_below = [x for x in basis[n - 1] if x not in d]
        rng.shuffle(free_below)
        for g in basis[n]:
            if free_below and rng.random() < 0.5:
                d[g] = {free_below.pop(): rng.choice([1, 2, 3, -2])}
    base = ChainComplex(_matrix_map(d, -1, "d"), basis, name=tag)
    phi, phi_inv = random_automorphism(rng, basis, mix)
    return conjugate_complex(base, phi, phi_inv, name=tag)


def random_reduction(rng, bottom: ChainComplex | None = None, tag="A", max_deg=3, max_gens=2, max_pairs=3, mix=6):
    """A random reduction ``top => bottom``."""
    if bottom is None:
        bottom = random_bottom(rng, tag + "b", max_deg, max_gens, mix)
    top_deg = max(bottom.max_degree, max_deg)
    basis = {n: list(bottom.basis(n)) for n in range(top_deg + 1)}
    d: dict = {g: dict(bottom.diff.on_gen(n, g)) for n in bottom.degrees() for g in bottom.basis(n)}
    h: dict = {}
    for k in range(rng.randint(0, max_pairs)):
        n = rng.randint(0, max(top_deg - 1, 0))
        p, q = (tag, "p", n, k), (tag, "q", n + 1, k)
        basis.setdefault(n, []).append(p)
        basis.setdefault(n + 1, []).append(q)
        d[q] = {p: 1}
        h[p] = {q: 1}
    in_bottom = {g for n in bottom.degrees() for g in bottom.basis(n)}
    split = ChainComplex(_matrix_map(d, -1, "d"), basis, name=tag)
    f0 = LinearMap(lambda n, g: {g: 1} if g in in_bottom else {}, 0, "f")
    g0 = LinearMap(lambda n, c: {c: 1}, 0, "g")
    h0 = _matrix_map(h, 1, "h")
    phi, phi_inv = random_automorphism(rng, basis, mix)
    top = conjugate_complex(split, phi, phi_inv, name=tag)
    return Reduction(top, bottom, compose(f0, phi_inv), compose(phi, g0), compose(phi, compose(h0, phi_inv)))


def random_conjugation_perturbation(rng, C: ChainComplex, steps: int) -> LinearMap:
    """``psi d psi^-1 - d`` for a random automorphism ``psi``: a perturbation of C."""
    basis = {n: C.basis(n) for n in C.degrees()}
    psi, psi_inv = random_automorphism(rng, basis, steps)
    delta = lin_sum((1, compose(psi, compose(C.diff, psi_inv))), (-1, C.diff))
    delta.name = "delta"
    return delta


def scrambled_equivalence(X, seed):
    """``DX => C(X)`` through random contractible summands, ``DX => critical complex``."""
    rng = random.Random(seed)
    CX = chain_of(X)
    r1 = random_reduction(rng, bottom=CX, tag="D", max_deg=X.max_dim, max_pairs=3, mix=8)
    r2 = compose_reductions(r1, morse_reduction(CX, greedy_field(CX)))
    return Equivalence(r1, r2)
