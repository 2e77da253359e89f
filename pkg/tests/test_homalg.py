import random

import pytest
from hypothesis import given, settings, strategies as st

from random_complexes import random_conjugation_perturbation, random_reduction
from unicover import catalog
from unicover.cover import universal_twisting
from unicover.errors import ContractViolation, NilpotencyFailure, NotEffective, ReductionAxiomError
from unicover.homalg import (
    ChainComplex,
    Equivalence,
    LinearMap,
    Perturbation,
    Reduction,
    Tensor,
    bpl,
    chain_of,
    compose_reductions,
    ez_kh0,
    identity_map,
    perturbed,
    product_chain_complex,
    tensor_complex,
    tensor_reduction,
    tpl,
    trivial_reduction,
    twist_perturbation,
    zero_map,
)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_random_reductions_are_valid(seed):
    rng = random.Random(seed)
    r = random_reduction(rng)
    assert r.top.d_squared_violations() == []
    assert r.violations() == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_composition(seed):
    rng = random.Random(seed)
    r2 = random_reduction(rng, tag="B")
    r1 = random_reduction(rng, bottom=r2.top, tag="A")
    assert compose_reductions(r1, r2).violations() == []


def test_composition_requires_matching_ends():
    rng = random.Random(1)
    with pytest.raises(ContractViolation):
        compose_reductions(random_reduction(rng), random_reduction(rng))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_tensor_of_reductions(seed):
    rng = random.Random(seed)
    r = random_reduction(rng, tag="L", max_deg=2, max_gens=1, max_pairs=2)
    s = random_reduction(rng, tag="R", max_deg=2, max_gens=1, max_pairs=2)
    t = tensor_reduction(r, s)
    assert t.top.d_squared_violations() == []
    assert t.violations() == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_trivial_perturbation_lemma(seed):
    rng = random.Random(seed)
    r = random_reduction(rng)
    delta = random_conjugation_perturbation(rng, r.bottom, 3)
    assert Perturbation(r.bottom, delta).violations() == []
    r2, delta_top = tpl(r, delta)
    assert Perturbation(r.top, delta_top).violations() == []
    assert r2.violations() == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_basic_perturbation_lemma(seed):
    rng = random.Random(seed)
    r = random_reduction(rng)
    delta = random_conjugation_perturbation(rng, r.top, 1)
    try:
        r2, delta_bottom = bpl(r, delta, max_iter=50)
        r2.violations()
    except NilpotencyFailure:
        return
    assert r2.violations() == []
    assert r2.bottom.d_squared_violations() == []


def test_bpl_reports_non_nilpotent_perturbations():
    a, b = "a", "b"
    top = ChainComplex(LinearMap(lambda n, g: {a: 1} if g == b else {}, -1), {0: [a], 1: [b]})
    bottom = ChainComplex(zero_map(-1), {})
    h = LinearMap(lambda n, g: {b: 1} if g == a else {}, 1)
    r = Reduction(top, bottom, zero_map(0), zero_map(0), h)
    assert r.violations() == []
    # d + delta kills b, but delta h a = -a forever
    delta = LinearMap(lambda n, g: {a: -1} if g == b else {}, -1)
    r2, _ = bpl(r, delta, max_iter=25)
    with pytest.raises(NilpotencyFailure) as info:
        r2.f.on_gen(0, a)
    assert info.value.max_iter == 25


def test_broken_reduction_is_reported():
    C = chain_of(catalog.standard_simplex(1))
    r = Reduction(C, C, identity_map(), identity_map(), LinearMap(lambda n, g: {"[0,1]": 1} if n == 0 else {}, 1))
    assert r.violations()
    with pytest.raises(ReductionAxiomError):
        r.assert_valid()


# -- the semiline: an infinite contractible complex with an explicit homotopy -------------


def semiline_reduction():
    """Vertices 0, 1, 2, ... and edges (k, k+1), reduced onto a single point."""

    def d(n, g):
        if n == 1:
            k = g[1]
            return {("v", k + 1): 1, ("v", k): -1}
        return {}

    def h(n, g):
        if n == 0:
            return {("e", k): 1 for k in range(g[1])}
        return {}

    top = ChainComplex(
        LinearMap(d, -1, "d"),
        None,
        [0, 1],
        lambda n: [("v", k) for k in range(12)] if n == 0 else [("e", k) for k in range(12)],
        name="semiline",
    )
    point = ChainComplex(zero_map(-1), {0: ["*"]}, name="point")
    f = LinearMap(lambda n, g: {"*": 1} if n == 0 else {}, 0, "f")
    g = LinearMap(lambda n, c: {("v", 0): 1}, 0, "g")
    return Reduction(top, point, f, g, LinearMap(h, 1, "h"))


def test_semiline_reduction_axioms():
    r = semiline_reduction()
    assert not r.top.is_effective
    assert r.violations() == []
    assert r.h.on_gen(0, ("v", 3)) == {("e", 0): 1, ("e", 1): 1, ("e", 2): 1}
    with pytest.raises(NotEffective):
        r.top.basis(0)


# -- products with K(H,0) ---------------------------------------------------------------


@pytest.mark.parametrize("name", ["rp2", "lens3", "sym3"])
def test_ez_kh0_is_valid(corpus, name):
    X = corpus[name]
    H, tau = universal_twisting(X)
    r = ez_kh0(H, X)
    assert r.violations() == []
    delta = twist_perturbation(H, X, tau)
    assert Perturbation(r.top, delta).violations() == []
    r2, delta1 = bpl(r, delta)
    assert r2.violations() == []


def test_product_complex_for_infinite_groups_is_not_effective():
    X = catalog.wedge_circle_sphere()
    H, tau = universal_twisting(X)
    P = product_chain_complex(H, X)
    assert not P.is_effective
    assert P.d_squared_violations() == []
    assert Perturbation(P, twist_perturbation(H, X, tau)).violations() == []


def test_koszul_signs():
    C = chain_of(catalog.standard_simplex(1))
    T = tensor_complex(C, C)
    assert T.d_squared_violations() == []
    x = Tensor("[0,1]", 1, "[0,1]")
    assert T.d(2, {x: 1}) == {
        Tensor("[1]", 0, "[0,1]"): 1,
        Tensor("[0]", 0, "[0,1]"): -1,
        Tensor("[0,1]", 1, "[1]"): -1,
        Tensor("[0,1]", 1, "[0]"): 1,
    }


def test_equivalence_requires_shared_top():
    rng = random.Random(3)
    r = random_reduction(rng)
    with pytest.raises(ContractViolation):
        Equivalence(r, trivial_reduction(r.bottom))


def test_perturbed_requires_degree_minus_one():
    C = chain_of(catalog.circle())
    with pytest.raises(ContractViolation):
        perturbed(C, zero_map(0))
