"""Discrete vector fields and their Morse reductions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .errors import ContractViolation, InadmissibleField
from .homalg import Chain, ChainComplex, LinearMap, Reduction, add_into, combine
from .simplicial import Simplex


@dataclass
class DiscreteVectorField:
    """Pairs ``(source, target)`` with ``source`` in degree n and ``target`` in degree n+1."""

    vectors: list[tuple[Hashable, Hashable]]
    lambda_bound: dict | None = None

    def __len__(self):
        return len(self.vectors)

    def as_dict(self) -> dict:
        return dict(self.vectors)

    def cells(self) -> set:
        return {c for v in self.vectors for c in v}


def degree_index(C: ChainComplex) -> dict:
    return {g: n for n in C.degrees() for g in C.basis(n)}


def validate_dvf(C: ChainComplex, V: DiscreteVectorField) -> list[str]:
    """Report cells of wrong degree, irregular faces and cells used twice."""
    deg = degree_index(C)
    bad = []
    seen: dict = {}
    for x, y in V.vectors:
        for c in (x, y):
            if c not in deg:
                bad.append(f"{c!r} is not a cell")
            elif c in seen:
                bad.append(f"{c!r} appears in more than one vector")
            seen[c] = True
        if x not in deg or y not in deg:
            continue
        if deg[y] != deg[x] + 1:
            bad.append(f"({x!r}, {y!r}): target degree is not source degree + 1")
            continue
        coeff = C.diff.on_gen(deg[y], y).get(x, 0)
        if coeff not in (1, -1):
            bad.append(f"({x!r}, {y!r}): incidence {coeff} is not a unit")
    return bad


@dataclass
class AdmissibilityCertificate:
    admissible: bool
    lam: dict = field(default_factory=dict)  # source -> longest path length
    cycle: list | None = None


def face_relation(X):
    """``faces(n, y)``: the nondegenerate faces of a simplex, with repetitions removed.

    Finer than the support of the differential, which loses faces whose
    incidences cancel.
    """

    def faces(n, y):
        if n == 0:
            return []
        s = Simplex(y, n)
        out = []
        for i in range(n + 1):
            f = X.face(s, i)
            if not f.is_degenerate and f.generator not in out:
                out.append(f.generator)
        return out

    return faces


def _arcs(C: ChainComplex, V: DiscreteVectorField, deg: dict, faces=None) -> dict:
    pairs = V.as_dict()
    arcs = {}
    for x, y in V.vectors:
        cells = faces(deg[y], y) if faces is not None else C.diff.on_gen(deg[y], y)
        arcs[x] = [z for z in cells if z != x and z in pairs]
    return arcs


def check_admissible(C: ChainComplex, V: DiscreteVectorField, faces=None) -> AdmissibilityCertificate:
    """Acyclicity of V-paths; returns the longest-path function or a cycle.

    Path steps follow the support of the differential, or ``faces(n, y)`` when
    given (see ``face_relation``).  Either way ``lam`` decreases along every
    step that the Morse homotopy uses.
    """
    deg = degree_index(C)
    arcs = _arcs(C, V, deg, faces)
    lam: dict = {}
    state: dict = {}  # 1 on stack, 2 done
    for start in arcs:
        if start in state:
            continue
        stack = [(start, iter(arcs[start]))]
        path = [start]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                state[node] = 2
                lam[node] = 1 + max((lam[z] for z in arcs[node]), default=-1)
                continue
            st = state.get(nxt)
            if st == 1:
                k = path.index(nxt)
                return AdmissibilityCertificate(False, {}, path[k:] + [nxt])
            if st is None:
                state[nxt] = 1
                stack.append((nxt, iter(arcs[nxt])))
                path.append(nxt)
    return AdmissibilityCertificate(True, lam, None)


class MorseReduction(Reduction):
    """Reduction onto the critical cells, remembering the field and its certificate."""

    vector_field: DiscreteVectorField
    certificate: AdmissibilityCertificate


def morse_reduction(C: ChainComplex, V: DiscreteVectorField, certificate=None, check: bool = True) -> MorseReduction:
    """Canonical reduction onto the critical complex of an admissible field.

    For a source x with target y and incidence e = [x : dy],
    ``h(x) = e (y - h(dy - e x))``; h vanishes on critical cells and targets.
    Then ``f = pi_crit (1 - d h)``, ``g = 1 - h d`` on critical cells and the
    critical differential is ``f d g``.  All reduction identities are checked
    before returning.
    """
    bad = validate_dvf(C, V)
    if bad:
        raise ContractViolation("invalid vector field: " + "; ".join(bad[:3]))
    if certificate is None:
        certificate = check_admissible(C, V)
    if not certificate.admissible:
        raise InadmissibleField(f"V-paths cycle through {certificate.cycle!r}")
    deg = degree_index(C)
    pairs = V.as_dict()
    targets = set(pairs.values())
    hvals: dict = {}

    def h_chain(chain: Chain) -> Chain:
        out: Chain = {}
        for z, c in chain.items():
            hz = hvals.get(z)
            if hz:
                add_into(out, hz, c)
        return out

    for x in sorted(pairs, key=lambda s: certificate.lam[s]):
        y = pairs[x]
        dy = C.diff.on_gen(deg[y], y)
        e = dy[x]
        rest = dict(dy)
        del rest[x]
        hvals[x] = combine((e, {y: 1}), (-e, h_chain(rest)))

    critical = {n: [g for g in C.basis(n) if g not in pairs and g not in targets] for n in C.degrees()}
    crit_set = {g for gs in critical.values() for g in gs}

    h = LinearMap(lambda n, g: hvals.get(g, {}), 1, "h_V")

    def f_fn(n, g):
        if g in crit_set:
            return {g: 1}
        if g in targets:
            return {}
        x = combine((1, {g: 1}), (-1, C.diff(n + 1, h.on_gen(n, g))))
        return {z: c for z, c in x.items() if z in crit_set}

    f = LinearMap(f_fn, 0, "f_V")
    g = LinearMap(lambda n, c: combine((1, {c: 1}), (-1, h(n - 1, C.diff.on_gen(n, c)))), 0, "g_V")
    dcrit = LinearMap(lambda n, c: f(n - 1, C.diff(n, g.on_gen(n, c))), -1, "d_V")
    bottom = ChainComplex(dcrit, critical, name=f"critical complex of {C.name}")
    r = MorseReduction(C, bottom, f, g, h)
    r.vector_field = V
    r.certificate = certificate
    if check:
        r.assert_valid()
    return r


# -- lifting to a cover ----------------------------------------------------------------


def induced_cover_dvf(cover, V: DiscreteVectorField) -> DiscreteVectorField:
    """Lift a field on the base to the cover, one copy per group element.

    A vector ``(x, y)`` lifts to ``((h, x), (h, y))`` unless ``x`` is the last
    face of ``y``, in which case the target is ``(h tau(y), y)``.
    """
    X, G, tau = cover.base, cover.group, cover.tau
    out = []
    lam = {}
    for h in G.elements():
        for x, y in V.vectors:
            n = X.dim_of(x)
            ys = X.simplex(y)
            if X.face(ys, n + 1) == Simplex(x, n):
                ty = G.mul(h, tau(ys))
            else:
                ty = h
            src = cover.name_of(h, x)
            out.append((src, cover.name_of(ty, y)))
            if V.lambda_bound is not None and x in V.lambda_bound:
                lam[src] = V.lambda_bound[x]
    return DiscreteVectorField(out, lam if V.lambda_bound is not None else None)


def greedy_field(C: ChainComplex, skip=None) -> DiscreteVectorField:
    """Greedy acyclic matching, top degree first, in basis order.

    ``skip(x, y)`` may veto a candidate pair.  No optimality is claimed.
    """
    paired: set = set()
    pairs: dict = {}
    arcs: dict = {}
    into: dict = {}  # cell -> sources whose target has the cell as a face
    for n in sorted(C.degrees(), reverse=True):
        for y in C.basis(n):
            if y in paired:
                continue
            dy = C.diff.on_gen(n, y)
            for x, c in dy.items():
                if c not in (1, -1) or x in paired:
                    continue
                if skip is not None and skip(x, y):
                    continue
                out = [z for z in dy if z != x and z in pairs]
                if _reaches(out, arcs, set(into.get(x, ()))):
                    continue
                pairs[x] = y
                arcs[x] = out
                for s in into.get(x, ()):
                    arcs[s].append(x)
                for z in dy:
                    if z != x:
                        into.setdefault(z, []).append(x)
                paired.update((x, y))
                break
    return DiscreteVectorField(list(pairs.items()))


def _reaches(starts: Iterable, arcs: dict, goal: set) -> bool:
    if not goal:
        return False
    seen = set()
    stack = list(starts)
    while stack:
        z = stack.pop()
        if z in goal:
            return True
        if z in seen:
            continue
        seen.add(z)
        stack.extend(arcs.get(z, ()))
    return False
