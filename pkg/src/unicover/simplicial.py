"""Finite simplicial sets with canonical degeneracy bookkeeping.

A simplex is stored as ``s_{j_k} ... s_{j_1} x`` with ``x`` a nondegenerate
generator and ``j_k > ... > j_1`` (the Eilenberg-Zilber normal form).  Internally
every degeneracy word is handled as the monotone surjection ``[n] -> [m]`` it
encodes, which turns the face/degeneracy identity table into plain function
composition.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import ContractViolation, SchemaError, TwistingViolation


@dataclass(frozen=True, slots=True)
class Simplex:
    generator: str
    dim: int
    degeneracies: tuple[int, ...] = ()

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degeneracies)

    @property
    def base_dim(self) -> int:
        return self.dim - len(self.degeneracies)

    def __str__(self):
        return simplex_name(self.degeneracies, self.generator)


def simplex_name(word: Sequence[int], generator: str) -> str:
    if not word:
        return generator
    return " ".join(f"s_{j}" for j in word) + " " + generator


def is_canonical_word(word: Sequence[int], base_dim: int) -> bool:
    """True iff ``word`` (outermost first) is strictly decreasing and applicable."""
    k = len(word)
    for pos, j in enumerate(word):
        if j < 0:
            return False
        if pos + 1 < k and not j > word[pos + 1]:
            return False
        # the operator applied at step t (t = 0 innermost) acts on dim base_dim + t
        if j > base_dim + (k - 1 - pos):
            return False
    return True


def surjection(word: Sequence[int], n: int) -> list[int]:
    """Monotone surjection ``[n] -> [n - len(word)]`` of a canonical word."""
    marks = set(word)
    out = []
    shift = 0
    for i in range(n + 1):
        if i > 0 and (i - 1) in marks:
            shift += 1
        out.append(i - shift)
    return out


def word_of(surj: Sequence[int]) -> tuple[int, ...]:
    return tuple(j for j in range(len(surj) - 2, -1, -1) if surj[j] == surj[j + 1])


def collapse(surj: Sequence[int], marks: Iterable[int]) -> list[int]:
    """Factor ``surj = s' o c`` where ``c`` collapses exactly ``marks``; return ``s'``."""
    marks = set(marks)
    return [v for i, v in enumerate(surj) if (i - 1) not in marks]


class SimplicialSet:
    """A finite simplicial set given by generators and their face tuples.

    ``faces[name]`` holds ``(d_0 x, ..., d_n x)`` for every generator of
    dimension ``n >= 1``; vertices have no entry (or an empty tuple).
    """

    def __init__(
        self,
        generators: dict[int, Sequence[str]],
        faces: dict[str, Sequence[Simplex]],
        name: str = "",
    ):
        self.name = name
        self._gens: dict[int, tuple[str, ...]] = {}
        self._dim: dict[str, int] = {}
        for n in sorted(generators):
            names = tuple(generators[n])
            if not names:
                continue
            self._gens[n] = names
            for g in names:
                if g in self._dim:
                    raise ContractViolation(f"generator {g!r} listed twice")
                self._dim[g] = n
        self._faces = {g: tuple(faces.get(g, ())) for g in self._dim}
        for g, n in self._dim.items():
            fs = self._faces[g]
            if n > 0 and len(fs) != n + 1:
                raise ContractViolation(f"{g!r} has {len(fs)} faces, expected {n + 1}")
            for s in fs:
                if s.generator not in self._dim:
                    raise ContractViolation(f"face of {g!r} names unknown generator {s.generator!r}")
                if s.dim != n - 1 or self._dim[s.generator] != s.base_dim:
                    raise ContractViolation(f"face {s} of {g!r} has wrong dimension")
                if not is_canonical_word(s.degeneracies, s.base_dim):
                    raise ContractViolation(f"non-canonical degeneracy word in face {s} of {g!r}")
        self._face_cache: dict[tuple[Simplex, int], Simplex] = {}

    # -- structure ---------------------------------------------------------

    @property
    def max_dim(self) -> int:
        return max(self._gens, default=-1)

    def nondegenerate(self, n: int) -> tuple[str, ...]:
        return self._gens.get(n, ())

    def generators(self) -> dict[int, tuple[str, ...]]:
        return dict(self._gens)

    def dim_of(self, name: str) -> int:
        return self._dim[name]

    def __contains__(self, name) -> bool:
        return name in self._dim

    def simplex(self, name: str) -> Simplex:
        return Simplex(name, self._dim[name])

    def generator_faces(self, name: str) -> tuple[Simplex, ...]:
        return self._faces[name]

    def counts(self) -> dict[int, int]:
        return {n: len(g) for n, g in self._gens.items()}

    def n_nondegenerate(self) -> int:
        return len(self._dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(g) for n, g in self._gens.items())

    def vertices(self) -> tuple[str, ...]:
        return self.nondegenerate(0)

    def __repr__(self):
        label = self.name or "Simplicial set"
        return f"{label} with {self.n_nondegenerate()} non-degenerate simplices"

    # -- face and degeneracy calculus --------------------------------------

    def face(self, s: Simplex, i: int) -> Simplex:
        n = s.dim
        if n == 0 or not 0 <= i <= n:
            raise ContractViolation(f"face index {i} out of range for {s} (dim {n})")
        key = (s, i)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        f = surjection(s.degeneracies, n)
        g = f[:i] + f[i + 1:]
        m = s.base_dim
        if len(set(g)) == m + 1:
            out = Simplex(s.generator, n - 1, word_of(g))
        else:
            k = f[i]
            g = [v if v < k else v - 1 for v in g]
            inner = self._faces[s.generator][k]
            fb = surjection(inner.degeneracies, m - 1)
            out = Simplex(inner.generator, n - 1, word_of([fb[v] for v in g]))
        self._face_cache[key] = out
        return out

    def degeneracy(self, s: Simplex, j: int) -> Simplex:
        return degenerate(s, j)


def degenerate(s: Simplex, j: int) -> Simplex:
    """``s_j s`` in canonical form; depends on no face data."""
    n = s.dim
    if not 0 <= j <= n:
        raise ContractViolation(f"degeneracy index {j} out of range for {s}")
    f = surjection(s.degeneracies, n)
    total = [f[i if i <= j else i - 1] for i in range(n + 2)]
    return Simplex(s.generator, n + 1, word_of(total))


def apply_word(word: Sequence[int], s: Simplex) -> Simplex:
    """``s_W s`` for a canonical word ``W`` acting on ``s``."""
    top = s.dim + len(word)
    w = surjection(word, top)
    f = surjection(s.degeneracies, s.dim)
    return Simplex(s.generator, top, word_of([f[v] for v in w]))


def normalize_face(X: SimplicialSet, s: Simplex, i: int) -> Simplex:
    """Canonical form of ``d_i s``."""
    return X.face(s, i)


# -- validation --------------------------------------------------------------


def validate_simplicial(X: SimplicialSet) -> list[str]:
    """Check ``d_i d_j = d_{j-1} d_i`` (i < j) on every generator; list violations."""
    bad = []
    for n in range(2, X.max_dim + 1):
        for g in X.nondegenerate(n):
            s = X.simplex(g)
            for j in range(n + 1):
                dj = X.face(s, j)
                for i in range(j):
                    lhs = X.face(dj, i)
                    rhs = X.face(X.face(s, i), j - 1)
                    if lhs != rhs:
                        bad.append(f"{g}: d_{i} d_{j} = {lhs} but d_{j - 1} d_{i} = {rhs}")
    return bad


# -- products ----------------------------------------------------------------


def _pair_name(a: Simplex, b: Simplex) -> str:
    return f"({a},{b})"


class ProductSimplicialSet(SimplicialSet):
    """Cartesian product; ``components[name]`` gives the pair of factor simplices."""

    def __init__(self, generators, faces, components, factors, name=""):
        super().__init__(generators, faces, name=name)
        self.components: dict[str, tuple[Simplex, Simplex]] = components
        self.factors = factors


def _split_pair(fx: Simplex, fy: Simplex, lookup: dict) -> Simplex:
    """Write ``(fx, fy)`` as a degeneracy of a nondegenerate product simplex."""
    n = fx.dim
    sx = surjection(fx.degeneracies, n)
    sy = surjection(fy.degeneracies, n)
    common = [j for j in range(n) if sx[j] == sx[j + 1] and sy[j] == sy[j + 1]]
    cx = collapse(sx, common)
    cy = collapse(sy, common)
    m = n - len(common)
    key = (Simplex(fx.generator, m, word_of(cx)), Simplex(fy.generator, m, word_of(cy)))
    c = surjection(tuple(sorted(common, reverse=True)), n)
    return Simplex(lookup[key], n, word_of(c))


def cartesian_product(X: SimplicialSet, Y: SimplicialSet, name: str = "") -> ProductSimplicialSet:
    """Product with coordinate-wise faces.

    Nondegenerate n-simplices are pairs ``(s_A x, s_B y)`` with ``A`` and ``B``
    disjoint, enumerated x-major, then y, then by the index sets.
    """
    gens: dict[int, list[str]] = defaultdict(list)
    components: dict[str, tuple[Simplex, Simplex]] = {}
    lookup: dict[tuple[Simplex, Simplex], str] = {}
    for p in range(X.max_dim + 1):
        for x in X.nondegenerate(p):
            for q in range(Y.max_dim + 1):
                for y in Y.nondegenerate(q):
                    for n in range(max(p, q), p + q + 1):
                        for A in combinations(range(n), n - p):
                            rest = [j for j in range(n) if j not in A]
                            for B in combinations(rest, n - q):
                                a = Simplex(x, n, tuple(reversed(A)))
                                b = Simplex(y, n, tuple(reversed(B)))
                                nm = _pair_name(a, b)
                                gens[n].append(nm)
                                components[nm] = (a, b)
                                lookup[(a, b)] = nm
    faces = {}
    for nm, (a, b) in components.items():
        n = a.dim
        if n == 0:
            continue
        faces[nm] = tuple(_split_pair(X.face(a, i), Y.face(b, i), lookup) for i in range(n + 1))
    label = name or f"{X.name or 'X'} x {Y.name or 'Y'}"
    return ProductSimplicialSet(gens, faces, components, (X, Y), name=label)


# -- K(H,0) and twisted products -------------------------------------------


class KH0(SimplicialSet):
    """K(H,0): the group's elements in every dimension, identity faces.

    Only the vertices are nondegenerate; the n-simplex for ``h`` is
    ``s_{n-1} ... s_0 h``.
    """

    def __init__(self, group):
        self.group = group
        super().__init__({0: [element_name(h) for h in group.elements()]}, {}, name=f"K(H,0), |H| = {group.order}")


def element_name(h) -> str:
    return str(h)


def fibre_name(h, x: str) -> str:
    return f"({element_name(h)},{x})"


class FibreProduct(SimplicialSet):
    """Simplicial set with generators ``(h, x)``, ``h`` in a discrete group.

    ``projection[name] = (h, x)``.
    """

    def __init__(self, generators, faces, projection, group, base, name=""):
        super().__init__(generators, faces, name=name)
        self.projection: dict[str, tuple[int, str]] = projection
        self.group = group
        self.base = base
        self._index = {v: k for k, v in projection.items()}

    def name_of(self, h, x: str) -> str:
        return self._index[(h, x)]


def fibre_product(
    group,
    B: SimplicialSet,
    last_face: Callable[[int, Simplex], int],
    name: str = "",
    cls=FibreProduct,
    **extra,
) -> FibreProduct:
    """Generators ``(h, x)`` for ``h`` in ``group`` and ``x`` nondegenerate in ``B``.

    ``d_i (h, x) = (h, d_i x)`` for ``i < n`` and
    ``d_n (h, x) = (last_face(h, x), d_n x)``; degeneracies act on ``x`` only.
    """
    elements = list(group.elements())
    gens: dict[int, list[str]] = defaultdict(list)
    projection = {}
    for n in range(B.max_dim + 1):
        for h in elements:
            for x in B.nondegenerate(n):
                nm = fibre_name(h, x)
                gens[n].append(nm)
                projection[nm] = (h, x)
    faces = {}
    for nm, (h, x) in projection.items():
        s = B.simplex(x)
        n = s.dim
        if n == 0:
            continue
        out = []
        for i in range(n + 1):
            f = B.face(s, i)
            k = h if i < n else last_face(h, s)
            out.append(Simplex(fibre_name(k, f.generator), n - 1, f.degeneracies))
        faces[nm] = tuple(out)
    return cls(gens, faces, projection, group, B, name=name, **extra)


def check_twisting(tau, B: SimplicialSet) -> None:
    """Verify the twisting-operator identities for a ``K(H,0)``-valued ``tau``.

    With identity faces in the fibre they read, for ``b`` of dimension ``n``:
    ``tau(b) = tau(d_i b)`` (i < n-1, n >= 2),
    ``tau(b) = tau(d_n b)^-1 tau(d_{n-1} b)`` (n >= 2),
    ``tau(s_i b) = tau(b)`` (i <= n-1) and ``tau(s_n b) = e``.
    """
    G = tau.group
    e = G.identity
    for n in range(0, B.max_dim + 1):
        for g in B.nondegenerate(n):
            b = B.simplex(g)
            t = tau(b) if n >= 1 else None
            if n >= 2:
                for i in range(n - 1):
                    if tau(B.face(b, i)) != t:
                        raise TwistingViolation(g, f"tau(d_{i} b) != tau(b)")
                rhs = G.mul(G.inv(tau(B.face(b, n))), tau(B.face(b, n - 1)))
                if rhs != t:
                    raise TwistingViolation(g, "tau(b) != tau(d_n b)^-1 tau(d_{n-1} b)")
            if n >= 1:
                for i in range(n):
                    if tau(degenerate(b, i)) != t:
                        raise TwistingViolation(g, f"tau(s_{i} b) != tau(b)")
            if tau(degenerate(b, n)) != e:
                raise TwistingViolation(g, f"tau(s_{n} b) is not the identity")


def twisted_product(G: KH0, B: SimplicialSet, tau, check: bool = True) -> FibreProduct:
    """``K(H,0) x_tau B`` with ``d_n (k, b) = (tau(b) k, d_n b)``."""
    H = G.group
    if check:
        check_twisting(tau, B)
    return fibre_product(
        H, B, lambda k, s: H.mul(tau(s), k), name=f"K(H,0) x_tau {B.name or 'B'}"
    )


# -- JSON format -------------------------------------------------------------
#
# {"dimensions": {"0": ["v"], "1": ["a"], ...},
#  "faces": {"a": [{"degeneracies": [], "generator": "v"}, ...], ...}}
#
# Degeneracy lists are strictly decreasing.  Extra top-level keys are ignored
# on input, which lets covers carry a "projection" sidecar.

SCHEMA_VERSION = "1"


def _face_json(s: Simplex) -> dict:
    return {"degeneracies": list(s.degeneracies), "generator": s.generator}


def to_json(X: SimplicialSet) -> dict:
    dims = {str(n): list(g) for n, g in X.generators().items()}
    faces = {}
    for n, names in X.generators().items():
        if n == 0:
            continue
        for g in names:
            faces[g] = [_face_json(s) for s in X.generator_faces(g)]
    return {"dimensions": dims, "faces": faces}


def from_json(obj, name: str = "") -> SimplicialSet:
    if not isinstance(obj, dict) or not isinstance(obj.get("dimensions"), dict):
        raise SchemaError('expected an object with a "dimensions" map')
    raw_faces = obj.get("faces", {})
    if not isinstance(raw_faces, dict):
        raise SchemaError('"faces" must be a map from generator name to face list')
    gens: dict[int, list[str]] = {}
    dim_of = {}
    for key, names in obj["dimensions"].items():
        try:
            n = int(key)
        except (TypeError, ValueError):
            raise SchemaError(f"dimension key {key!r} is not an integer") from None
        if n < 0 or not isinstance(names, list) or not all(isinstance(g, str) for g in names):
            raise SchemaError(f"dimension {key!r} must map to a list of generator names")
        gens[n] = list(names)
        for g in names:
            dim_of[g] = n
    faces = {}
    for g, fl in raw_faces.items():
        if g not in dim_of:
            raise SchemaError(f"faces given for unknown generator {g!r}")
        if not isinstance(fl, list):
            raise SchemaError(f"faces of {g!r} must be a list")
        out = []
        for d in fl:
            if not isinstance(d, dict) or "generator" not in d:
                raise SchemaError(f"malformed face descriptor in {g!r}: {d!r}")
            word = d.get("degeneracies", [])
            if not isinstance(word, list) or not all(isinstance(j, int) for j in word):
                raise SchemaError(f"malformed degeneracy list in {g!r}: {word!r}")
            tgt = d["generator"]
            if tgt not in dim_of:
                raise SchemaError(f"face of {g!r} names unknown generator {tgt!r}")
            if not is_canonical_word(word, dim_of[tgt]):
                raise SchemaError(f"non-canonical degeneracy word {word!r} in a face of {g!r}")
            out.append(Simplex(tgt, dim_of[tgt] + len(word), tuple(word)))
        faces[g] = out
    for g, n in dim_of.items():
        if n > 0 and g not in faces:
            raise SchemaError(f"generator {g!r} of dimension {n} has no faces")
    try:
        return SimplicialSet(gens, faces, name=name)
    except ContractViolation as exc:
        raise SchemaError(str(exc)) from None


def load(path, name: str = "") -> SimplicialSet:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_json(obj, name=name or Path(path).stem)


def dump(X: SimplicialSet, path) -> None:
    Path(path).write_text(json.dumps(to_json(X), indent=1) + "\n")
