"""Twisting operators and regular covers built as twisted products."""

from __future__ import annotations

from .errors import GroupTooLargeOrInfinite, TwistingViolation, Unsupported
from .fundamental_group import (
    FiniteGroupTable,
    MaximalTree,
    abelianization,
    edge_path_presentation,
    fundamental_group,
    is_abelian_presentation,
    maximal_tree,
    simplify_presentation,
    surjection_from_images,
)
from .simplicial import (
    FibreProduct,
    Simplex,
    SimplicialSet,
    cartesian_product,
    check_twisting,
    fibre_product,
    to_json,
)


class TwistingOperator:
    """tau : X -> H, determined by its values on nondegenerate edges.

    Vertices and degenerate edges go to the identity; in dimension >= 2 the
    value is that of the 0-th face.
    """

    def __init__(self, base: SimplicialSet, group, edge_values: dict):
        self.base = base
        self.group = group
        self.edge_values = dict(edge_values)
        self._cache: dict[Simplex, object] = {}

    def __call__(self, s: Simplex):
        hit = self._cache.get(s)
        if hit is not None:
            return hit
        if s.dim == 0 or (s.dim == 1 and s.is_degenerate):
            val = self.group.identity
        elif s.dim == 1:
            val = self.edge_values[s.generator]
        else:
            val = self(self.base.face(s, 0))
        self._cache[s] = val
        return val

    def is_trivial(self) -> bool:
        e = self.group.identity
        return all(v == e for v in self.edge_values.values())

    def check_edges(self) -> None:
        """tau(d_1 x) = tau(d_2 x) tau(d_0 x) on every nondegenerate 2-simplex."""
        G, X = self.group, self.base
        for t in X.nondegenerate(2):
            s = X.simplex(t)
            lhs = self(X.face(s, 1))
            rhs = G.mul(self(X.face(s, 2)), self(X.face(s, 0)))
            if lhs != rhs:
                raise TwistingViolation(t, "tau(d_1 x) != tau(d_2 x) tau(d_0 x)")


def build_tau(X: SimplicialSet, T: MaximalTree, group, generator_values: dict) -> TwistingOperator:
    """tau from values on the non-tree edges; tree edges go to the identity."""
    vals = {}
    for e in X.nondegenerate(1):
        vals[e] = group.identity if e in T.edges else generator_values[e]
    tau = TwistingOperator(X, group, vals)
    tau.check_edges()
    check_twisting(tau, X)
    return tau


class CoverSimplicialSet(FibreProduct):
    """Cover with generators ``(h, x)`` and ``d_n (h, x) = (h tau(x)^-1, d_n x)``."""

    def __init__(self, generators, faces, projection, group, base, name="", tau=None):
        super().__init__(generators, faces, projection, group, base, name=name)
        self.tau = tau

    def project(self, s: Simplex) -> Simplex:
        h, x = self.projection[s.generator]
        return Simplex(x, s.dim, s.degeneracies)

    def to_json(self) -> dict:
        out = to_json(self)
        out["projection"] = {nm: [h, x] for nm, (h, x) in self.projection.items()}
        return out


def cover_from_tau(X: SimplicialSet, tau: TwistingOperator, name: str = "") -> CoverSimplicialSet:
    G = tau.group
    return fibre_product(
        G,
        X,
        lambda h, s: G.mul(h, G.inv(tau(s))),
        name=name or f"cover of {X.name or 'X'} (|H| = {G.order})",
        cls=CoverSimplicialSet,
        tau=tau,
    )


def cover(X: SimplicialSet, H: FiniteGroupTable, images: dict, basepoint=None) -> CoverSimplicialSet:
    """Regular cover for a surjection pi_1(X) -> H given on the edge-path generators.

    ``images`` maps every non-tree edge (a generator of the edge-path
    presentation) to an element of ``H``.
    """
    ep = edge_path_presentation(X, maximal_tree(X, basepoint))
    surjection_from_images(ep.presentation, H, images)
    tau = build_tau(X, ep.tree, H, images)
    return cover_from_tau(X, tau)


def universal_cover(X: SimplicialSet, max_cosets: int = 100000, basepoint=None) -> CoverSimplicialSet:
    F = fundamental_group(X, max_cosets=max_cosets, basepoint=basepoint)
    tau = build_tau(X, F.edge_path.tree, F.group, F.group.word_images)
    return cover_from_tau(X, tau, name=f"universal cover of {X.name or 'X'}")


def product_cover(X: SimplicialSet, Y: SimplicialSet, max_cosets: int = 100000) -> SimplicialSet:
    return cartesian_product(universal_cover(X, max_cosets), universal_cover(Y, max_cosets))


def abelian_twisting(X: SimplicialSet, basepoint=None):
    """``(G, tau)`` with ``G`` the abelianization as an ``AbelianGroup``.

    Raises Unsupported unless pi_1(X) is known to be abelian, in which case
    tau classifies the universal cover.
    """
    ep = edge_path_presentation(X, maximal_tree(X, basepoint))
    Q, exprs = simplify_presentation(ep.presentation)
    if not is_abelian_presentation(Q):
        raise Unsupported("the fundamental group is not abelian")
    ab = abelianization(Q)
    G = ab.group
    gen_values = [G.evaluate(w, ab.images) for w in exprs]
    values = {e: G.evaluate(w, gen_values) for e, w in ep.edge_words.items()}
    tau = TwistingOperator(X, G, values)
    tau.check_edges()
    return G, tau


def universal_twisting(X: SimplicialSet, max_cosets: int = 100000, basepoint=None):
    """``(H, tau)`` classifying the universal cover.

    Finite fundamental groups come from coset enumeration.  An infinite but
    abelian group is returned as an ``AbelianGroup`` via the abelianization;
    other infinite groups are unsupported.
    """
    try:
        F = fundamental_group(X, max_cosets=max_cosets, basepoint=basepoint)
    except GroupTooLargeOrInfinite:
        ep = edge_path_presentation(X, maximal_tree(X, basepoint))
        Q, _ = simplify_presentation(ep.presentation)
        if abelianization(Q).invariants.is_finite:
            raise
        return abelian_twisting(X, basepoint)
    tau = build_tau(X, F.edge_path.tree, F.group, F.group.word_images)
    return F.group, tau
