import random
from fractions import Fraction

import pytest

from orbifrob.cocycles import (FiniteGroupTable, NonabelianCocycle,
                               SuperGrading, TwoCocycle, schur_cocycle_sn,
                               twisted_group_ring)
from orbifrob.gfrob import (NotCyclic, extract_special, invariants,
                            load_gfrob, normalize_gamma,
                            reconstruct_from_special, save_gfrob, super_twist,
                            tensor_hat, twist_by_torsion, verify_axioms,
                            verify_special)
from orbifrob.cocycles import NotNormalizable
from orbifrob.sympow import build
from orbifrob.symgroup import Permutation, minimal_factorization

F = Fraction


def test_verify_group_ring(s3_group):
    rep = verify_axioms(twisted_group_ring(s3_group))
    assert rep.ok


def test_negative_controls(sym_z2_2_p0):
    A = sym_z2_2_p0.algebra
    bad = A.scaled_copy(mult_scale=lambda g, h: F(2) if (g, h) == (1, 1) else F(1))
    rep = verify_axioms(bad)
    assert not rep.ok and rep.first_failure().witness is not None
    bad = A.scaled_copy(action_scale=lambda g, h: F(-1) if (g, h) == (1, 1) else F(1))
    rep = verify_axioms(bad)
    assert not rep.ok
    assert {"twisted_commutativity", "projective_self_invariance"} & \
        {e.name for e in rep.failures()}
    bad = A.scaled_copy(metric_scale=lambda g: F(0) if g == 1 else F(1))
    rep = verify_axioms(bad)
    assert not rep["metric_nondegenerate"].ok


def test_tensor_hat_unit_and_product(s3_group, sym_z2_2_p0):
    G = s3_group
    Ra = twisted_group_ring(G, schur_cocycle_sn(3, group=G))
    Rt = twisted_group_ring(G)
    T = tensor_hat(Ra, Rt)
    assert T.tables_equal(Ra)       # tensoring with k[G] changes nothing
    lam = [F(1), F(2), F(3), F(4), F(5), F(6)]
    lam[G.e] = F(1)
    beta = TwoCocycle.coboundary(G, lam)
    prod = tensor_hat(twisted_group_ring(G, beta), Ra)
    direct = twisted_group_ring(G, beta.product(schur_cocycle_sn(3, group=G)))
    assert prod.tables_equal(direct)  # k^a (x) k^b = k^(ab)
    # closure: tensor of two passing algebras passes
    S2 = sym_z2_2_p0.algebra
    both = tensor_hat(S2, twisted_group_ring(S2.group))
    assert verify_axioms(both).ok


def test_twist_by_torsion_roundtrip(sym_z2_3_p0):
    A = sym_z2_3_p0.algebra
    G = A.group
    triv = TwoCocycle.trivial(G)
    assert twist_by_torsion(A, triv).tables_equal(A)
    alpha = schur_cocycle_sn(3, group=G)
    back = twist_by_torsion(twist_by_torsion(A, alpha), alpha.inverse())
    assert back.tables_equal(A)
    # the twist equals tensoring with the twisted group ring
    assert twist_by_torsion(A, alpha).tables_equal(
        tensor_hat(A, twisted_group_ring(G, alpha)))


def test_super_twist(sym_z2_3_p0, sym_z2_3_p1):
    A = sym_z2_3_p0.algebra
    G = A.group
    triv = SuperGrading.trivial(G)
    assert super_twist(A, triv).tables_equal(A)
    sg = SuperGrading.sign_grading(G)
    tw = super_twist(A, sg)
    assert tw.tables_equal(sym_z2_3_p1.algebra)
    assert verify_axioms(tw, super_mode=True).ok
    # applying the twist twice is the discrete torsion by
    # beta(g,h) = (-1)^(sigma(g)sigma(h)), not the identity
    n = G.order
    beta = TwoCocycle(G, [[F(-1 if sg(i) and sg(j) else 1) for j in range(n)]
                          for i in range(n)])
    assert super_twist(tw, sg).tables_equal(twist_by_torsion(A, beta))


def test_invariants_group_ring(s3_group):
    R = twisted_group_ring(s3_group)
    inv = invariants(R)
    assert inv.dim == len(s3_group.conjugacy_classes()) == 3
    assert inv.report.ok
    dense = invariants(R, method="dense")
    assert dense.dim == 3 and dense.report.ok


def test_invariants_sympow(sym_z2_2_p0, z2):
    assert invariants(sym_z2_2_p0.algebra).dim == 5
    S1 = build(z2, 2, 1, verify=False)
    assert invariants(S1.algebra).dim == 3
    assert invariants(S1.algebra, method="dense").dim == 3


def test_extract_special_values(s3_group, sym_z2_2_p0):
    alpha = schur_cocycle_sn(3, group=s3_group)
    sp = extract_special(twisted_group_ring(s3_group, alpha))
    e = s3_group.e
    for g in range(s3_group.order):
        assert sp.gamma_class_scalar(e, g) == 1       # unit row
        assert sp.gamma_class_scalar(g, e) == 1
    S = sym_z2_2_p0
    G = S.group
    ti = G.index[Permutation.transposition(1, 2, 2)]
    # gamma(t,t) = Delta(1) = 1 (x) z + z (x) 1 inside A_e = A (x) A
    assert sp is not None
    sp2 = extract_special(S.algebra)
    assert sp2.gamma[(ti, ti)] == (F(0), F(1), F(1), F(0))


def test_verify_special(sym_z2_3_p0, s3_group):
    assert verify_special(extract_special(sym_z2_3_p0.algebra)).ok
    alpha = schur_cocycle_sn(3, group=s3_group)
    assert verify_special(extract_special(
        twisted_group_ring(s3_group, alpha))).ok


def test_reconstruct_matches_and_rescale_invariance(sym_z2_3_p0):
    A = sym_z2_3_p0.algebra
    sp = extract_special(A)
    assert reconstruct_from_special(sp).tables_equal(A)
    # rescaling the generators does not change the reconstructed algebra
    rng = random.Random(13)
    gens = {gi: tuple(F(rng.randint(1, 5)) * x for x in sp.generators[gi])
            for gi in range(A.group.order)}
    gens[A.group.e] = sp.generators[A.group.e]
    sp_scr = extract_special(A, generators=gens)
    assert reconstruct_from_special(sp_scr).tables_equal(A)
    assert verify_axioms(reconstruct_from_special(sp_scr)).ok


def test_normalize_gamma_roundtrip(sym_z2_3_p0):
    A = sym_z2_3_p0.algebra
    G = A.group
    sp = extract_special(A)
    lam0, norm0 = normalize_gamma(sp)
    assert all(x == 1 for x in lam0)        # already normalized
    lengths = [s.n - len(s.cycles(include_fixed=True)) for s in G.elements]
    rng = random.Random(23)
    lam = [F(1)] * G.order
    for i in range(G.order):
        if lengths[i] >= 2:
            lam[i] = F(rng.randint(1, 6), rng.randint(1, 6))
    gens = {gi: tuple(lam[gi] * x for x in sp.generators[gi])
            for gi in range(G.order)}
    lam_rec, norm = normalize_gamma(extract_special(A, generators=gens))
    assert norm.gamma == sp.gamma
    assert norm.phi_values == sp.phi_values
    assert all(lam_rec[i] * lam[i] == 1 for i in range(G.order))


def test_normalize_gamma_rejects_corrupt(sym_z2_3_p0):
    A = sym_z2_3_p0.algebra
    G = A.group
    t12 = G.index[Permutation.transposition(1, 2, 3)]
    t23 = G.index[Permutation.transposition(2, 3, 3)]
    # zero the product on a transversal pair: the scalar gamma used by the
    # inductive rescaling is no longer invertible
    bad = A.scaled_copy(mult_scale=lambda g, h: F(0) if (g, h) == (t12, t23)
                        else F(1))
    with pytest.raises((NotNormalizable, NotCyclic)):
        normalize_gamma(extract_special(bad))


def test_gamma_inverse_factorization(sym_z2_3_p0):
    # gamma(s, s^-1) equals the product of gamma(t,t) over any minimal
    # factorization of s, as elements of A_e
    S = sym_z2_3_p0
    A = S.algebra
    G = S.group
    sp = extract_special(A)
    e = G.e
    for gi in range(G.order):
        s = G.elements[gi]
        prod = tuple(A.unit)
        for tau in minimal_factorization(s):
            ti = G.index[tau]
            prod = A.multiply(e, prod, e, sp.gamma[(ti, ti)])
        assert prod == sp.gamma[(gi, G.inv[gi])]


def test_phi_from_special_matches_parity(sym_z2_3_p1):
    sp = extract_special(sym_z2_3_p1.algebra)
    phi = sp.phi_cocycle()
    target = NonabelianCocycle.parity_cocycle(sym_z2_3_p1.group, 1)
    assert phi.values == target.values


def test_serialization_roundtrip(tmp_path, sym_z2_2_p0, s3_group):
    for A in (sym_z2_2_p0.algebra,
              twisted_group_ring(s3_group, schur_cocycle_sn(3, group=s3_group),
                                 SuperGrading.sign_grading(s3_group))):
        path = tmp_path / "alg.json"
        save_gfrob(A, path)
        B = load_gfrob(path)
        assert B.tables_equal(A, check_labels=True)
        save_gfrob(B, tmp_path / "alg2.json")
        assert (tmp_path / "alg.json").read_bytes() == \
            (tmp_path / "alg2.json").read_bytes()


def test_table_group_roundtrip(tmp_path):
    Z3 = FiniteGroupTable.cyclic(3)
    R = twisted_group_ring(Z3)
    path = tmp_path / "z3ring.json"
    save_gfrob(R, path)
    B = load_gfrob(path)
    assert B.tables_equal(R)
    assert verify_axioms(B).ok
