"""Homology by Smith normal form and the perturbative homology of universal covers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .cover import TwistingOperator, universal_cover, universal_twisting
from .errors import CoverNotEffective, NilpotencyFailure, NotEffective
from .homalg import (
    Chain,
    ChainComplex,
    Equivalence,
    LinearMap,
    Reduction,
    Tensor,
    add_into,
    bpl,
    chain_of,
    compose,
    ez_kh0,
    kh0_chain_complex,
    tensor_reduction,
    tpl,
    trivial_reduction,
    twist_perturbation,
)
from .simplicial import Simplex, SimplicialSet
from .snf import SNFResult, smith_normal_form, sparse_elementary_divisors

__all__ = [
    "HomologyGroup",
    "SNFResult",
    "smith_normal_form",
    "homology",
    "homology_groups",
    "effective_homology_universal_cover",
    "homology_of_cover_direct",
]


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts += [f"C{t}" for t in self.torsion]
        return " x ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {"betti": self.betti, "torsion": list(self.torsion)}

    def reduced(self) -> "HomologyGroup":
        if self.degree != 0 or self.betti == 0:
            return self
        return HomologyGroup(0, self.betti - 1, self.torsion)


def _matrix_rows(C: ChainComplex, n: int) -> list[dict[int, int]]:
    """Rows of d_n (one per generator of degree n) in the basis of degree n-1."""
    index = {g: k for k, g in enumerate(C.basis(n - 1))}
    rows = []
    for g in C.basis(n):
        rows.append({index[y]: c for y, c in C.diff.on_gen(n, g).items()})
    return rows


class _Divisors:
    def __init__(self, C: ChainComplex):
        self.C = C
        self._cache: dict[int, list[int]] = {}

    def __call__(self, n: int) -> list[int]:
        if n not in self._cache:
            if not self.C.basis(n) or not self.C.basis(n - 1):
                self._cache[n] = []
            else:
                self._cache[n] = sparse_elementary_divisors(_matrix_rows(self.C, n))
        return self._cache[n]


def homology(C: ChainComplex, n: int, _div: _Divisors | None = None) -> HomologyGroup:
    """H_n of an effective complex from the elementary divisors of d_n and d_{n+1}."""
    if not C.is_effective:
        raise NotEffective(f"{C.name or 'complex'} is not effective; its homology cannot be computed")
    div = _div or _Divisors(C)
    rank_n = len(div(n))
    up = div(n + 1)
    betti = len(C.basis(n)) - rank_n - len(up)
    return HomologyGroup(n, betti, tuple(e for e in up if e > 1))


def homology_groups(C: ChainComplex, max_degree: int | None = None, reduced: bool = False) -> list[HomologyGroup]:
    """H_0 .. H_max_degree (default: the top degree of ``C``)."""
    if not C.is_effective:
        raise NotEffective(f"{C.name or 'complex'} is not effective; its homology cannot be computed")
    top = C.max_degree if max_degree is None else max_degree
    div = _Divisors(C)
    out = [homology(C, n, div) for n in range(0, top + 1)]
    if reduced and out:
        out[0] = out[0].reduced()
    return out


def homology_of_cover_direct(X: SimplicialSet, max_degree=None, reduced=False, max_cosets=100000):
    """Homology of the explicitly built universal cover."""
    return homology_groups(chain_of(universal_cover(X, max_cosets)), max_degree, reduced)


# -- closed forms for the perturbations ------------------------------------------


def _last_face(X: SimplicialSet, n: int, x) -> Simplex | None:
    f = X.face(Simplex(x, n), n)
    return None if f.is_degenerate else f


def _twisted_pairs(H, tau, k, n, x, X, transport):
    """``(-1)^n [(tau(x) k) (x) T(d_n x) - k (x) T(d_n x)]`` for a map ``T`` into some complex."""
    if n == 0:
        return {}
    last = _last_face(X, n, x)
    if last is None:
        return {}
    k2 = H.mul(tau(Simplex(x, n)), k)
    if k2 == k:
        return {}
    sign = -1 if n % 2 else 1
    out: Chain = {}
    for y, c in transport(n - 1, {last.generator: 1}).items():
        add_into(out, {Tensor(k2, 0, y): sign * c, Tensor(k, 0, y): -sign * c})
    return out


def first_twist_formula(H, X: SimplicialSet, tau) -> LinearMap:
    """Closed form of the perturbation induced on C(K(H,0)) (x) C(X)."""

    def fn(n, t: Tensor):
        return _twisted_pairs(H, tau, t.left, n, t.right, X, lambda m, c: c)

    return LinearMap(fn, -1, "delta1")


def _through(rho1X: Reduction, X, H, tau, after: LinearMap | None) -> LinearMap:
    def fn(n, t: Tensor):
        out: Chain = {}
        for sigma, c in rho1X.f.on_gen(n, t.right).items():
            def transport(m, chain):
                img = rho1X.g(m, chain)
                return after(m, img) if after is not None else img

            add_into(out, _twisted_pairs(H, tau, t.left, n, sigma, X, transport), c)
        return out

    return LinearMap(fn, -1 if after is None else 0, "delta2" if after is None else "h3.delta2")


def second_twist_formula(H, X: SimplicialSet, tau, rho1X: Reduction) -> LinearMap:
    """Closed form of the perturbation on C(K(H,0)) (x) DX, linear in ``f1 x``."""
    return _through(rho1X, X, H, tau, None)


def homotopy_twist_formula(H, X: SimplicialSet, tau, rho1X: Reduction, rho2X: Reduction) -> LinearMap:
    """Closed form of ``h3 o delta2``: ``h2 g1`` replaces ``g1`` in the second formula."""
    return _through(rho1X, X, H, tau, rho2X.h)


# -- the perturbative route ----------------------------------------------------------


@dataclass
class EffectiveHomologyResult:
    equivalence: Equivalence
    homology: list[HomologyGroup]
    rho1: Reduction  # C(K x_tau X) => C(K) (x)_t C(X)
    rho2: Reduction  # C(K) (x)_t DX => C(K) (x)_t C(X)
    rho3: Reduction  # C(K) (x)_t DX => C(K) (x)_t EX
    deltas: dict = field(default_factory=dict)


def identity_equivalence(X: SimplicialSet) -> Equivalence:
    C = chain_of(X)
    t = trivial_reduction(C)
    return Equivalence(t, Reduction(C, C, t.f, t.g, t.h))


def effective_homology_universal_cover(
    X: SimplicialSet,
    eqX: Equivalence | None = None,
    tau: TwistingOperator | None = None,
    H=None,
    max_iter: int | None = None,
    max_degree: int | None = None,
    reduced: bool = False,
    max_cosets: int = 100000,
) -> EffectiveHomologyResult:
    """Homology of the universal cover through perturbation of a product.

    ``eqX`` is ``(DX => C(X), DX => EX)`` with ``EX`` effective; ``tau`` and
    ``H`` default to the universal twisting of ``X``.  Infinite ``H`` and a
    non-nilpotent perturbation both end in CoverNotEffective.
    """
    if tau is None:
        H, tau = universal_twisting(X, max_cosets)
    elif H is None:
        H = tau.group
    if eqX is None:
        eqX = identity_equivalence(X)
    rho1X, rho2X = eqX.left, eqX.right
    CX = rho1X.bottom
    try:
        # steps 1-2: C(K(H,0) x X) => C(K(H,0)) (x) C(X), an isomorphism
        ez = ez_kh0(H, X)
        # step 3: tensor the equivalence of X with the identity of C(K(H,0))
        CK = kh0_chain_complex(H)
        idK = trivial_reduction(CK)
        rho2 = tensor_reduction(idK, rho1X)
        rho3 = tensor_reduction(idK, rho2X)
        # identify the structurally equal copies so the diagram shares its corners
        rho2.bottom = ez.bottom
        rho3.top = rho2.top
        # step 4: twist the product and carry the twist down
        delta = twist_perturbation(H, X, tau)
        rho1_hat, delta1 = bpl(ez, delta, max_iter)
        # step 5: lift to C(K) (x) DX
        rho2_hat, delta2 = tpl(rho2, delta1)
        # step 6: push down to C(K) (x) EX
        rho3_hat, delta3 = bpl(rho3, delta2, max_iter)
        rho3_hat.top = rho2_hat.top  # both are C(K) (x) DX perturbed by delta2
        left = Reduction(
            rho2_hat.top,
            rho1_hat.top,
            compose(rho1_hat.g, rho2_hat.f),
            compose(rho2_hat.g, rho1_hat.f),
            rho2_hat.h,
        )
        equivalence = Equivalence(left, rho3_hat)
        top = X.max_dim if max_degree is None else max_degree
        groups = homology_groups(rho3_hat.bottom, top, reduced)
    except NilpotencyFailure as exc:
        raise CoverNotEffective(f"the perturbation series does not terminate: {exc}") from exc
    except NotEffective as exc:
        raise CoverNotEffective(
            "the fundamental group is infinite, so C(K(H,0)) (x) EX has no finite basis "
            "and the cover has no effective homology along this route"
        ) from exc
    return EffectiveHomologyResult(
        equivalence, groups, rho1_hat, rho2_hat, rho3_hat,
        {"delta": delta, "delta1": delta1, "delta2": delta2, "delta3": delta3, "CX": CX},
    )
