"""Chain complexes, reductions and homological perturbation.

Chains are dicts ``{generator: coefficient}`` with nonzero integer
coefficients.  Every linear map is evaluated per generator and memoized, and
is called with the degree of its argument because generators alone need not
determine their degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, NamedTuple

from .errors import ContractViolation, NilpotencyFailure, NotEffective, ReductionAxiomError
from .simplicial import Simplex, SimplicialSet

Chain = dict


# -- chains ----------------------------------------------------------------------


def add_into(acc: Chain, chain: Chain, coeff: int = 1) -> Chain:
    for g, c in chain.items():
        v = acc.get(g, 0) + coeff * c
        if v:
            acc[g] = v
        else:
            acc.pop(g, None)
    return acc


def combine(*terms: tuple[int, Chain]) -> Chain:
    out: Chain = {}
    for coeff, chain in terms:
        add_into(out, chain, coeff)
    return out


def clean(chain: Chain) -> Chain:
    return {g: c for g, c in chain.items() if c}


# -- linear maps ---------------------------------------------------------------


class LinearMap:
    """A Z-linear map of fixed degree, defined on generators.

    ``fn(n, g)`` returns the image of the degree-n generator ``g``.
    """

    def __init__(self, fn: Callable[[int, Hashable], Chain], degree: int = 0, name: str = ""):
        self.fn = fn
        self.degree = degree
        self.name = name
        self._memo: dict = {}

    def on_gen(self, n: int, g) -> Chain:
        key = (n, g)
        hit = self._memo.get(key)
        if hit is None:
            hit = clean(self.fn(n, g))
            self._memo[key] = hit
        return hit

    def __call__(self, n: int, chain: Chain) -> Chain:
        out: Chain = {}
        for g, c in chain.items():
            add_into(out, self.on_gen(n, g), c)
        return out

    def __repr__(self):
        return f"LinearMap({self.name or self.fn!r}, degree={self.degree})"


def identity_map() -> LinearMap:
    return LinearMap(lambda n, g: {g: 1}, 0, "id")


def zero_map(degree: int = 0) -> LinearMap:
    return LinearMap(lambda n, g: {}, degree, "0")


def compose(F: LinearMap, G: LinearMap) -> LinearMap:
    """``F o G``."""
    return LinearMap(lambda n, g: F(n + G.degree, G.on_gen(n, g)), F.degree + G.degree, f"{F.name}.{G.name}")


def lin_sum(*terms: tuple[int, LinearMap]) -> LinearMap:
    degs = {m.degree for _, m in terms}
    if len(degs) > 1:
        raise ContractViolation("cannot add maps of different degrees")
    return LinearMap(
        lambda n, g: combine(*((c, m.on_gen(n, g)) for c, m in terms)),
        degs.pop(),
        "+".join(m.name for _, m in terms),
    )


# -- chain complexes -----------------------------------------------------------


class ChainComplex:
    """Free chain complex with differential of degree -1.

    Finite-listed when ``basis`` (degree -> list of generators) is given;
    otherwise function-backed, in which case ``degrees`` bounds the degrees
    and ``sample(n)`` supplies generators for spot checks.
    """

    def __init__(
        self,
        diff: LinearMap,
        basis: dict[int, list] | None = None,
        degrees: Iterable[int] | None = None,
        sample: Callable[[int], list] | None = None,
        name: str = "",
    ):
        self.diff = diff
        self.name = name
        self._basis = None if basis is None else {n: list(b) for n, b in basis.items()}
        if degrees is None:
            if basis is None:
                raise ContractViolation("a function-backed complex needs its degree range")
            degrees = [n for n, b in basis.items() if b]
        self._degrees = sorted(set(degrees))
        self._sample = sample

    @property
    def is_effective(self) -> bool:
        return self._basis is not None

    def degrees(self) -> list[int]:
        return list(self._degrees)

    @property
    def max_degree(self) -> int:
        return max(self._degrees, default=-1)

    def basis(self, n: int) -> list:
        if self._basis is None:
            raise NotEffective(f"{self.name or 'complex'} has no finite basis")
        return self._basis.get(n, [])

    def sample(self, n: int) -> list:
        if self._basis is not None:
            return self._basis.get(n, [])
        return list(self._sample(n)) if self._sample else []

    def d(self, n: int, chain: Chain) -> Chain:
        return self.diff(n, chain)

    def rank(self, n: int) -> int:
        return len(self.basis(n))

    def d_squared_violations(self) -> list[str]:
        bad = []
        for n in self._degrees:
            for g in self.sample(n):
                dd = self.diff(n - 1, self.diff.on_gen(n, g))
                if dd:
                    bad.append(f"d d {g!r} = {dd}")
        return bad

    def __repr__(self):
        kind = "effective" if self.is_effective else "locally effective"
        return f"<{kind} chain complex {self.name}>"


def perturbed(C: ChainComplex, delta: LinearMap, name: str = "") -> ChainComplex:
    if delta.degree != -1:
        raise ContractViolation("a perturbation has degree -1")
    return ChainComplex(
        lin_sum((1, C.diff), (1, delta)),
        C._basis,
        C._degrees,
        C._sample,
        name=name or f"{C.name}+delta",
    )


@dataclass
class Perturbation:
    complex: ChainComplex
    delta: LinearMap

    def violations(self) -> list[str]:
        return perturbed(self.complex, self.delta).d_squared_violations()


# -- normalized chains of a simplicial set ---------------------------------------


def simplicial_differential(X: SimplicialSet) -> LinearMap:
    def d(n, g):
        out: Chain = {}
        if n == 0:
            return out
        s = Simplex(g, n)
        for i in range(n + 1):
            f = X.face(s, i)
            if not f.is_degenerate:
                add_into(out, {f.generator: 1}, -1 if i % 2 else 1)
        return out

    return LinearMap(d, -1, "d")


def chain_of(X: SimplicialSet) -> ChainComplex:
    """Normalized chains: nondegenerate simplices, degenerate faces dropped."""
    basis = {n: list(X.nondegenerate(n)) for n in range(X.max_dim + 1)}
    return ChainComplex(simplicial_differential(X), basis, name=f"C({X.name})")


# -- reductions --------------------------------------------------------------------


@dataclass
class Reduction:
    """``top`` reduces onto ``bottom``: ``f: top -> bottom``, ``g: bottom -> top``, ``h: top -> top``."""

    top: ChainComplex
    bottom: ChainComplex
    f: LinearMap
    g: LinearMap
    h: LinearMap

    def violations(self, degrees: Iterable[int] | None = None) -> list[str]:
        return reduction_violations(self, degrees)

    def assert_valid(self, degrees=None) -> "Reduction":
        bad = self.violations(degrees)
        if bad:
            raise ReductionAxiomError("; ".join(bad[:5]))
        return self


@dataclass
class Equivalence:
    """Two reductions out of a common top complex."""

    left: Reduction
    right: Reduction

    def __post_init__(self):
        if self.left.top is not self.right.top:
            raise ContractViolation("the two reductions must share their top complex")


def reduction_violations(r: Reduction, degrees: Iterable[int] | None = None) -> list[str]:
    """Check the five reduction identities and the chain-map conditions per generator."""
    bad: list[str] = []
    D, C = r.top, r.bottom
    f, g, h = r.f, r.g, r.h
    tdeg = D.degrees() if degrees is None else list(degrees)
    bdeg = C.degrees() if degrees is None else list(degrees)
    for n in bdeg:
        for c in C.sample(n):
            x = {c: 1}
            if f(n, g(n, x)) != x:
                bad.append(f"f g != id on {c!r}")
            if h(n, g(n, x)):
                bad.append(f"h g != 0 on {c!r}")
            if g(n - 1, C.d(n, x)) != D.d(n, g(n, x)):
                bad.append(f"g is not a chain map on {c!r}")
    for n in tdeg:
        for a in D.sample(n):
            x = {a: 1}
            hx = h(n, x)
            lhs = combine(
                (1, g(n, f(n, x))),
                (1, D.d(n + 1, hx)),
                (1, h(n - 1, D.d(n, x))),
            )
            if lhs != x:
                bad.append(f"g f + d h + h d != id on {a!r}")
            if f(n + 1, hx):
                bad.append(f"f h != 0 on {a!r}")
            if h(n + 1, hx):
                bad.append(f"h h != 0 on {a!r}")
            if f(n - 1, D.d(n, x)) != C.d(n, f(n, x)):
                bad.append(f"f is not a chain map on {a!r}")
    return bad


def trivial_reduction(C: ChainComplex) -> Reduction:
    return Reduction(C, C, identity_map(), identity_map(), zero_map(1))


def compose_reductions(r1: Reduction, r2: Reduction) -> Reduction:
    """``r1: A => B`` then ``r2: B => C`` gives ``A => C``."""
    if r1.bottom is not r2.top:
        raise ContractViolation("r1.bottom must be r2.top")
    f = compose(r2.f, r1.f)
    g = compose(r1.g, r2.g)
    h = lin_sum((1, r1.h), (1, compose(r1.g, compose(r2.h, r1.f))))
    return Reduction(r1.top, r2.bottom, f, g, h)


# -- tensor products ---------------------------------------------------------------


class Tensor(NamedTuple):
    left: Hashable
    ldeg: int
    right: Hashable


def tensor_complex(A: ChainComplex, B: ChainComplex, name: str = "") -> ChainComplex:
    """``A (x) B`` with ``d(a (x) b) = da (x) b + (-1)^|a| a (x) db``."""

    def d(n, t: Tensor):
        p, q = t.ldeg, n - t.ldeg
        out: Chain = {}
        for a, c in A.diff.on_gen(p, t.left).items():
            out[Tensor(a, p - 1, t.right)] = c
        sign = -1 if p % 2 else 1
        for b, c in B.diff.on_gen(q, t.right).items():
            add_into(out, {Tensor(t.left, p, b): sign * c})
        return out

    degrees = sorted({p + q for p in A.degrees() for q in B.degrees()})

    def gens(n, pick_a, pick_b):
        out = []
        for p in A.degrees():
            q = n - p
            if q in B.degrees():
                for a in pick_a(p):
                    for b in pick_b(q):
                        out.append(Tensor(a, p, b))
        return out

    label = name or f"{A.name} (x) {B.name}"
    if A.is_effective and B.is_effective:
        basis = {n: gens(n, A.basis, B.basis) for n in degrees}
        return ChainComplex(LinearMap(d, -1, "d"), basis, name=label)
    return ChainComplex(
        LinearMap(d, -1, "d"), None, degrees, lambda n: gens(n, A.sample, B.sample), name=label
    )


def tensor_maps(F: LinearMap, G: LinearMap) -> LinearMap:
    """Koszul tensor: ``(F (x) G)(a (x) b) = (-1)^{|G||a|} F a (x) G b``."""

    def fn(n, t: Tensor):
        p = t.ldeg
        sign = -1 if (G.degree * p) % 2 else 1
        out: Chain = {}
        fa = F.on_gen(p, t.left)
        if not fa:
            return out
        gb = G.on_gen(n - p, t.right)
        for a, c1 in fa.items():
            for b, c2 in gb.items():
                out[Tensor(a, p + F.degree, b)] = sign * c1 * c2
        return out

    return LinearMap(fn, F.degree + G.degree, f"{F.name}(x){G.name}")


def tensor_reduction(r: Reduction, s: Reduction) -> Reduction:
    """Reduction ``top(r) (x) top(s) => bottom(r) (x) bottom(s)``.

    ``h = h_r (x) id + (g_r f_r) (x) h_s``.
    """
    top = tensor_complex(r.top, s.top)
    bottom = tensor_complex(r.bottom, s.bottom)
    f = tensor_maps(r.f, s.f)
    g = tensor_maps(r.g, s.g)
    gf = compose(r.g, r.f)
    h = lin_sum((1, tensor_maps(r.h, identity_map())), (1, tensor_maps(gf, s.h)))
    return Reduction(top, bottom, f, g, h)


# -- perturbation lemmas -------------------------------------------------------------


def tpl(r: Reduction, delta_bottom: LinearMap) -> tuple[Reduction, LinearMap]:
    """Trivial perturbation lemma: perturb the bottom, transport ``g delta f`` to the top."""
    delta_top = compose(r.g, compose(delta_bottom, r.f))
    delta_top.name = "g.delta.f"
    top = perturbed(r.top, delta_top)
    bottom = perturbed(r.bottom, delta_bottom)
    return Reduction(top, bottom, r.f, r.g, r.h), delta_top


def default_max_iter(*complexes: ChainComplex) -> int:
    """``1 + (largest degree) * (largest basis size)`` over the effective inputs."""
    best_deg, best_size = 0, 0
    for C in complexes:
        if not C.is_effective:
            continue
        for n in C.degrees():
            best_deg = max(best_deg, n)
            best_size = max(best_size, len(C.basis(n)))
    if best_size == 0:
        return 1000
    return 1 + max(best_deg, 1) * best_size


def _series(first: LinearMap, second: LinearMap, max_iter: int, label: str) -> LinearMap:
    """``sum_i (-1)^i (first second)^i`` evaluated per generator until a term vanishes."""

    def fn(n, x):
        term: Chain = {x: 1}
        total: Chain = {x: 1}
        for i in range(1, max_iter + 1):
            term = first(n + second.degree, second(n, term))
            if not term:
                return total
            add_into(total, term, -1 if i % 2 else 1)
        raise NilpotencyFailure(x, n, max_iter)

    return LinearMap(fn, 0, label)


def bpl(r: Reduction, delta_top: LinearMap, max_iter: int | None = None) -> tuple[Reduction, LinearMap]:
    """Basic perturbation lemma for a locally nilpotent ``h delta``.

    ``phi = sum (-1)^i (h delta)^i`` and ``psi = sum (-1)^i (delta h)^i``;
    the bottom perturbation is ``f delta phi g`` and the new maps are
    ``f psi``, ``phi g`` and ``phi h``.
    """
    if max_iter is None:
        max_iter = default_max_iter(r.top, r.bottom)
    phi = _series(r.h, delta_top, max_iter, "phi")
    psi = _series(delta_top, r.h, max_iter, "psi")
    delta_bottom = compose(r.f, compose(delta_top, compose(phi, r.g)))
    delta_bottom.name = "f.delta.phi.g"
    f = compose(r.f, psi)
    g = compose(phi, r.g)
    h = compose(phi, r.h)
    top = perturbed(r.top, delta_top)
    bottom = perturbed(r.bottom, delta_bottom)
    return Reduction(top, bottom, f, g, h), delta_bottom


# -- K(H,0) x X ------------------------------------------------------------------------


def group_sample(H, limit: int = 6) -> list:
    """All elements of a finite group, or a few small ones of an infinite one."""
    if H.is_finite:
        return list(H.elements())
    out = [H.identity]
    k = len(H.identity)
    for i in range(k):
        for c in (1, -1, 2):
            v = [0] * k
            v[i] = c
            out.append(H._norm(tuple(v)))
    return out[:limit] if len(out) > limit else out


def kh0_chain_complex(H) -> ChainComplex:
    """Normalized chains of K(H,0): the elements in degree 0, zero differential."""
    if H.is_finite:
        return ChainComplex(zero_map(-1), {0: list(H.elements())}, name="C(K(H,0))")
    return ChainComplex(zero_map(-1), None, [0], lambda n: group_sample(H) if n == 0 else [], name="C(K(H,0))")


def product_chain_complex(H, X: SimplicialSet) -> ChainComplex:
    """Normalized chains of K(H,0) x X on generators ``(k, x)``.

    Only the totally degenerate simplex of K(H,0) pairs with a nondegenerate
    ``x``, so the faces are ``(k, d_i x)``.
    """
    dX = simplicial_differential(X)

    def d(n, pair):
        k, x = pair
        return {(k, y): c for y, c in dX.on_gen(n, x).items()}

    degrees = [n for n in range(X.max_dim + 1) if X.nondegenerate(n)]

    def gens(n, elems):
        return [(k, x) for k in elems for x in X.nondegenerate(n)]

    if H.is_finite:
        basis = {n: gens(n, list(H.elements())) for n in degrees}
        return ChainComplex(LinearMap(d, -1, "d"), basis, name=f"C(K(H,0) x {X.name})")
    return ChainComplex(
        LinearMap(d, -1, "d"), None, degrees, lambda n: gens(n, group_sample(H)), name=f"C(K(H,0) x {X.name})"
    )


def ez_kh0(H, X: SimplicialSet) -> Reduction:
    """The Eilenberg-Zilber reduction for K(H,0) x X, which is an isomorphism.

    ``f(k, x) = k (x) x``, ``g`` is its inverse and ``h = 0``.
    """
    top = product_chain_complex(H, X)
    bottom = tensor_complex(kh0_chain_complex(H), chain_of(X))
    f = LinearMap(lambda n, p: {Tensor(p[0], 0, p[1]): 1}, 0, "f_ez")
    g = LinearMap(lambda n, t: {(t.left, t.right): 1} if t.ldeg == 0 else {}, 0, "g_ez")
    return Reduction(top, bottom, f, g, zero_map(1))


def twist_perturbation(H, X: SimplicialSet, tau) -> LinearMap:
    """``delta(k, x) = (-1)^n [(tau(x) k, d_n x) - (k, d_n x)]`` on the product chains."""

    def fn(n, pair):
        if n == 0:
            return {}
        k, x = pair
        s = Simplex(x, n)
        last = X.face(s, n)
        if last.is_degenerate:
            return {}
        t = tau(s)
        k2 = H.mul(t, k)
        if k2 == k:
            return {}
        sign = -1 if n % 2 else 1
        return {(k2, last.generator): sign, (k, last.generator): -sign}

    return LinearMap(fn, -1, "delta")
