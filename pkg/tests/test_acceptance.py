"""Acceptance criteria, one test each.  The terminal summary prints one
PASS/FAIL line per criterion (see conftest.py)."""

import json
import random
import time

import pytest

from conftest import fixture_path
from oracles import naive_smith_diagonal
from random_complexes import random_conjugation_perturbation, random_reduction, scrambled_equivalence
from test_snf import check_snf, random_matrix
from unicover import catalog
from unicover.cli import main
from unicover.cover import universal_cover, universal_twisting
from unicover.effective import (
    effective_homology_universal_cover,
    first_twist_formula,
    homology_groups,
    homology_of_cover_direct,
    homotopy_twist_formula,
    second_twist_formula,
)
from unicover.errors import CoverNotEffective, NilpotencyFailure
from unicover.fundamental_group import FiniteGroupTable
from unicover.homalg import (
    bpl,
    chain_of,
    compose_reductions,
    ez_kh0,
    kh0_chain_complex,
    tensor_reduction,
    tpl,
    trivial_reduction,
)
from unicover.morse import (
    check_admissible,
    face_relation,
    greedy_field,
    induced_cover_dvf,
    morse_reduction,
    validate_dvf,
)
from unicover.twisted import integer_specialization, module_is_trivial, twisted_homology


def run_cli(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main([*argv, "-o", str(out)])
    return code, json.loads(out.read_text()) if out.exists() else None


def as_strings(groups):
    """``{"betti": 1, "torsion": [2]}`` -> ``"Z x C2"``; 0 for the trivial group."""
    out = []
    for g in groups:
        parts = (["Z"] if g["betti"] == 1 else [f"Z^{g['betti']}"] if g["betti"] else []) + [f"C{t}" for t in g["torsion"]]
        out.append(" x ".join(parts) or "0")
    return out


@pytest.mark.criterion(1, "headline example: order 12, 4176 cells, cover and base homology")
def test_headline_example(tmp_path):
    start = time.perf_counter()
    path = str(fixture_path("s5xrp3"))
    code, pi1 = run_cli(tmp_path, "pi1", path)
    assert code == 0 and pi1["order"] == 12
    code, cov = run_cli(tmp_path, "universal-cover", path)
    assert code == 0 and cov["nondegenerate"] == 4176
    code, ch = run_cli(tmp_path, "cover-homology", path)
    assert code == 0
    assert as_strings(ch["reduced"]) == ["0", "0", "Z^11", "Z", "0", "Z^11"]
    code, base = run_cli(tmp_path, "homology", path)
    assert code == 0
    assert as_strings(base["reduced"]) == ["0", "C2 x C2", "Z x C2", "Z x C2 x C2", "C2", "Z"]
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(2, "perturbative route equals direct cover homology on finite fundamental groups")
def test_perturbative_route_equals_direct(corpus, s5xrp3):
    start = time.perf_counter()
    spaces = dict(corpus, s5xrp3=s5xrp3)
    for name, X in spaces.items():
        res = effective_homology_universal_cover(X)
        assert res.homology == homology_of_cover_direct(X), name
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(3, "circle wedge sphere: perturbative route refuses, twisted homology answers")
def test_wedge_failure_mode(tmp_path):
    X = catalog.wedge_circle_sphere()
    with pytest.raises(CoverNotEffective):
        effective_homology_universal_cover(X)
    path = str(fixture_path("wedge"))
    code, _ = run_cli(tmp_path, "cover-homology", path, "--via", "perturbation")
    assert code == CoverNotEffective.exit_code
    code, h1 = run_cli(tmp_path, "twisted-homology", path, "--degree", "1")
    assert code == 0 and h1["ambient_rank"] == 0 and h1["relations"] == []
    code, h2 = run_cli(tmp_path, "twisted-homology", path, "--degree", "2")
    assert code == 0
    assert h2["ambient_rank"] == 1
    assert h2["variables"] == ["f1", "f1inv"]
    assert h2["relations"] == [["f1*f1inv - 1"]]


def _axiom_cases(rng, kind):
    """Reductions of the given kind built from fresh random data."""
    if kind == "trivial":
        return [trivial_reduction(random_reduction(rng).top)]
    if kind == "compose":
        r2 = random_reduction(rng, tag="B")
        r1 = random_reduction(rng, bottom=r2.top, tag="A")
        return [compose_reductions(r1, r2)]
    if kind == "tensor":
        r = random_reduction(rng, tag="L", max_deg=2, max_gens=1, max_pairs=2)
        s = random_reduction(rng, tag="R", max_deg=2, max_gens=1, max_pairs=2)
        return [tensor_reduction(r, s)]
    if kind == "tpl":
        r = random_reduction(rng)
        return [tpl(r, random_conjugation_perturbation(rng, r.bottom, 3))[0]]
    if kind == "bpl":
        # A perturbation that is not nilpotent is reported, not reduced; draw again.
        while True:
            r = random_reduction(rng)
            try:
                r2, _ = bpl(r, random_conjugation_perturbation(rng, r.top, 1), max_iter=50)
                r2.violations()
            except NilpotencyFailure:
                continue
            return [r2]
    if kind == "ez_kh0":
        X = rng.choice([catalog.standard_simplex(2), catalog.circle(), catalog.real_projective_space(2), catalog.sphere(2)])
        return [ez_kh0(FiniteGroupTable.cyclic(rng.randint(1, 4)), X)]
    if kind == "morse":
        X = rng.choice([catalog.standard_simplex(3), catalog.real_projective_space(3), catalog.torus(), catalog.sym3_complex()])
        C = chain_of(X)
        keep = rng.uniform(0.2, 1.0)
        V = greedy_field(C, skip=lambda x, y: rng.random() > keep)
        return [morse_reduction(C, V, check=False)]
    raise ValueError(kind)


KINDS = ["trivial", "compose", "tensor", "tpl", "bpl", "ez_kh0", "morse"]


@pytest.mark.criterion(4, "1000 random reductions satisfy every reduction axiom on every generator")
def test_reduction_axiom_suite():
    rng = random.Random(20260516)
    checked = {k: 0 for k in KINDS}
    for i in range(1000):
        kind = KINDS[i % len(KINDS)]
        for r in _axiom_cases(rng, kind):
            assert r.violations() == [], kind
            checked[kind] += 1
    assert sum(checked.values()) == 1000
    assert all(checked.values())


@pytest.mark.criterion(5, "generic perturbation outputs equal the closed-form twist formulas")
def test_twist_formulas_on_corpus(corpus):
    compared = 0
    for name in ["rp2", "rp3", "lens3", "lens4", "sym3", "rp2xrp2"]:
        X = corpus[name]
        eq = scrambled_equivalence(X, 11)
        H, tau = universal_twisting(X)
        res = effective_homology_universal_cover(X, eqX=eq, tau=tau, H=H)
        d1 = first_twist_formula(H, X, tau)
        d2 = second_twist_formula(H, X, tau, eq.left)
        h3d2 = homotopy_twist_formula(H, X, tau, eq.left, eq.right)
        h3 = tensor_reduction(trivial_reduction(kh0_chain_complex(H)), eq.right).h
        B1 = res.rho1.bottom
        for n in B1.degrees():
            for g in B1.basis(n):
                assert res.deltas["delta1"].on_gen(n, g) == d1.on_gen(n, g), (name, g)
                compared += 1
        T2 = res.rho2.top
        for n in T2.degrees():
            for g in T2.basis(n):
                generic = res.deltas["delta2"].on_gen(n, g)
                assert generic == d2.on_gen(n, g), (name, g)
                assert h3(n - 1, generic) == h3d2.on_gen(n, g), (name, g)
                compared += 1
    assert compared > 0


@pytest.mark.criterion(6, "Morse suite: random fields, induced cover fields, critical counts")
def test_morse_suite(corpus):
    rng = random.Random(8)
    for name in ["delta2", "s2", "rp2", "rp3", "lens3", "lens4", "sym3", "rp2xrp2"]:
        X = corpus[name]
        CX = chain_of(X)
        top = X.max_dim
        for _ in range(3):
            keep = rng.uniform(0.2, 1.0)
            V = greedy_field(CX, skip=lambda x, y: rng.random() > keep)
            base_cert = check_admissible(CX, V, face_relation(X))
            assert base_cert.admissible
            r = morse_reduction(CX, V, base_cert)
            assert homology_groups(r.bottom, top) == homology_groups(CX, top), name
            cover = universal_cover(X)
            CC = chain_of(cover)
            W = induced_cover_dvf(cover, V)
            assert validate_dvf(CC, W) == []
            cert = check_admissible(CC, W, face_relation(cover))
            assert cert.admissible
            for src, _ in W.vectors:
                assert cert.lam[src] == base_cert.lam[cover.projection[src][1]]
            rc = morse_reduction(CC, W, cert)
            order = cover.group.order
            for n in CX.degrees():
                assert len(rc.bottom.basis(n)) == order * len(r.bottom.basis(n))


@pytest.mark.criterion(7, "twisted homology specializes to direct cover homology; torus module is trivial")
def test_twisted_cross_oracle(corpus):
    for name in ["delta2", "s2", "rp2", "rp3", "lens3", "lens4", "rp2xrp2"]:
        X = corpus[name]
        direct = homology_of_cover_direct(X)
        for raw in (False, True):
            for n in range(X.max_dim + 1):
                betti, torsion = integer_specialization(twisted_homology(X, n, raw=raw))
                assert (betti, torsion) == (direct[n].betti, direct[n].torsion), (name, n, raw)
    T = catalog.torus()
    assert module_is_trivial(twisted_homology(T, 1))
    assert module_is_trivial(twisted_homology(T, 2))


@pytest.mark.criterion(8, "Smith normal form of 500 random matrices against a naive oracle")
def test_snf_oracle():
    rng = random.Random(500)
    for _ in range(500):
        A = random_matrix(rng)
        assert check_snf(A) == naive_smith_diagonal(A)
