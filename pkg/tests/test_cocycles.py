import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbifrob.cocycles import (BadUnitScaling, FiniteGroupTable,
                               NonabelianCocycle, NotNormalizable,
                               SuperGrading, TwoCocycle, cocycle_from_json_dict,
                               cocycle_to_json, epsilon_table,
                               length_defect_sign_cocycle,
                               normalize_nonabelian_sn, rescale_pair,
                               schur_cocycle_sn, twisted_group_ring)
from orbifrob.gfrob import extract_special, verify_axioms
from orbifrob.symgroup import Permutation

F = Fraction


def transpositions(G):
    return [i for i, s in enumerate(G.elements)
            if len(s.cycles()) == 1 and len(s.cycles()[0]) == 2]


def test_group_table_basics(s3_group):
    G = s3_group
    assert G.order == 6
    assert G.element_str(G.e) == "()"
    for i in range(G.order):
        assert G.mult[i][G.inv[i]] == G.e
    assert len(G.conjugacy_classes()) == 3
    Z3 = FiniteGroupTable.cyclic(3)
    assert Z3.order == 3 and Z3.inv[1] == 2


def test_group_table_rejects_non_group():
    # a latin square that is not associative
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    with pytest.raises(ValueError):
        FiniteGroupTable.from_table("abcde", table)


def test_two_cocycle_validation(s3_group):
    G = s3_group
    lam = {G.elements[i]: F(i + 1) for i in range(G.order)}
    lam[G.elements[G.e]] = F(1)
    alpha = TwoCocycle.coboundary(G, lam)
    assert alpha.cocycle_identity_violation() is None
    vals = [[F(1)] * G.order for _ in range(G.order)]
    vals[1][1] = F(-1)
    with pytest.raises(ValueError):
        TwoCocycle(G, vals)      # breaks the cocycle identity
    vals = [[F(2)] * G.order for _ in range(G.order)]
    with pytest.raises(ValueError):
        TwoCocycle(G, vals)      # not normalized at the identity


def test_epsilon_trivial_and_commuting(s4_group):
    G = s4_group
    triv = TwoCocycle.trivial(G)
    assert all(triv.epsilon(i, j) == 1 for i in range(G.order)
               for j in range(G.order))
    alpha = schur_cocycle_sn(4, group=G)
    for i in range(G.order):
        for j in range(G.order):
            if G.commute(i, j):
                assert alpha.epsilon(i, j) * alpha.epsilon(j, i) == 1


def test_schur_cocycle(s4_group):
    G = s4_group
    alpha = schur_cocycle_sn(4, group=G)
    for t in transpositions(G):
        assert alpha(t, t) == 1
    t12 = G.index[Permutation.transposition(1, 2, 4)]
    t34 = G.index[Permutation.transposition(3, 4, 4)]
    assert alpha.epsilon(t12, t34) == -1
    assert alpha.commuting_transposition_class() == -1
    assert schur_cocycle_sn(3).commuting_transposition_class() is None


def test_schurdt_relations(s4_group):
    # the four epsilon relations of the twisted group ring
    G = s4_group
    alpha = schur_cocycle_sn(4, group=G)
    eps = epsilon_table(alpha)
    n = G.order
    for g in range(n):
        assert eps[g][G.e] == 1 and eps[g][g] == 1
    for g1 in range(n):
        for g2 in range(n):
            for h in range(n):
                assert eps[G.mult[g1][g2]][h] == \
                    eps[g1][G.conj(g2, h)] * eps[g2][h]
    for k in range(n):
        for g in range(n):
            for h in range(n):
                gh = G.mult[g][h]
                assert eps[k][gh] == eps[k][g] * eps[k][h] * \
                    alpha(G.conj(k, g), G.conj(k, h)) / alpha(g, h)
    for g in range(n):
        for h in range(n):
            m = G.commutator(g, h)
            rhs = eps[G.inv[g]][G.conj(g, h)] * \
                alpha(m, h) / alpha(m, G.conj(h, g))
            assert eps[h][g] == rhs


def test_eps_bicharacter_on_commuting(s4_group):
    G = s4_group
    alpha = schur_cocycle_sn(4, group=G)
    eps = alpha.epsilon
    n = G.order
    for g in range(n):
        for h in range(n):
            if not G.commute(g, h):
                continue
            assert eps(g, h) == eps(G.inv[h], g) == 1 / eps(h, g)
            for g2 in range(n):
                if G.commute(g2, h) and G.commute(G.mult[g][g2], h):
                    assert eps(G.mult[g][g2], h) == eps(g, h) * eps(g2, h)


def test_phi_one_cocycle_identity(s4_group):
    # phi_(gh,k) = phi_(g, hkh^-1) phi_(h,k), i.e. phi_gh = s(g)phi_h . phi_g
    G = s4_group
    for phi in (NonabelianCocycle.parity_cocycle(G, 1),
                NonabelianCocycle.from_two_cocycle(schur_cocycle_sn(4, group=G))):
        assert phi.identity_violation() is None


def test_rescale_pair_basics(s3_group):
    G = s3_group
    phi = NonabelianCocycle.parity_cocycle(G, 0)
    gamma = TwoCocycle.trivial(G)
    g2, p2 = rescale_pair(gamma, phi, [F(1)] * G.order)
    assert g2.values == gamma.values and p2.values == phi.values
    lam = [F(1), F(2), F(3), F(5), F(7), F(11)]
    lam[G.e] = F(1)
    g3, p3 = rescale_pair(gamma, phi, lam)
    assert g3.cocycle_identity_violation() is None   # coboundary is a cocycle
    assert p3.identity_violation() is None
    with pytest.raises(BadUnitScaling):
        rescale_pair(gamma, phi, [F(2)] * G.order)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=F(-5), max_value=F(5)), min_size=6,
                max_size=6))
def test_rescale_preserves_commuting_eps(lams):
    # epsilon on commuting pairs depends only on the class of alpha
    G = FiniteGroupTable.symmetric(3)
    if any(x == 0 for x in lams):
        return
    lam = list(lams)
    lam[G.e] = F(1)
    alpha = TwoCocycle.coboundary(G, lam)
    for i in range(G.order):
        for j in range(G.order):
            if G.commute(i, j):
                assert alpha.epsilon(i, j) == 1


def test_normalize_nonabelian_roundtrip(s4_group):
    G = s4_group
    rng = random.Random(5)
    for p in (0, 1):
        phi = NonabelianCocycle.parity_cocycle(G, p)
        lam = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(G.order)]
        lam[G.e] = F(1)
        _, scrambled = rescale_pair({}, phi, lam)
        lam_rec, normalized, p_rec = normalize_nonabelian_sn(scrambled)
        assert p_rec == p
        assert normalized.values == phi.values
        assert normalized.identity_violation() is None
    lam_id, norm_id, _ = normalize_nonabelian_sn(
        NonabelianCocycle.parity_cocycle(G, 1))
    assert all(x == 1 for x in lam_id)


def test_transposition_diagonal_is_constant(s4_group):
    # phi(t,t) is one fixed sign across all transpositions for every valid
    # nonabelian cocycle instance we can construct
    G = s4_group
    rng = random.Random(17)
    lam = [F(rng.randint(1, 8), rng.randint(1, 8)) for _ in range(G.order)]
    lam[G.e] = F(1)
    instances = [NonabelianCocycle.parity_cocycle(G, 0),
                 NonabelianCocycle.parity_cocycle(G, 1),
                 rescale_pair({}, NonabelianCocycle.parity_cocycle(G, 1), lam)[1],
                 NonabelianCocycle.from_two_cocycle(schur_cocycle_sn(4, group=G))]
    taus = transpositions(G)
    for phi in instances:
        assert len({phi(t, t) for t in taus}) == 1
        assert phi(taus[0], taus[0]) in (F(1), F(-1))


def test_normalize_nonabelian_rejects_mixed_parity(s4_group):
    # eps of the Schur cocycle has phi(t,t)=1 but phi(t,t')=-1: not
    # normalizable without a discrete-torsion twist
    G = s4_group
    alpha = schur_cocycle_sn(4, group=G)
    eps = NonabelianCocycle.from_two_cocycle(alpha)
    with pytest.raises(NotNormalizable):
        normalize_nonabelian_sn(eps)
    # twisting by the same class repairs it
    n = G.order
    twisted = NonabelianCocycle(
        G, [[eps(i, j) * alpha.epsilon(i, j) for j in range(n)] for i in range(n)])
    lam, normalized, p = normalize_nonabelian_sn(twisted)
    assert p == 0


def test_length_defect_cocycle(s4_group):
    G = s4_group
    alpha = length_defect_sign_cocycle(G)
    for t in transpositions(G):
        assert alpha(t, t) == -1
    assert alpha.commuting_transposition_class() == 1
    # normalized: alpha(s, t) = 1 on transversal pairs
    lengths = [s.n - len(s.cycles(include_fixed=True)) for s in G.elements]
    for i in range(G.order):
        for j in range(G.order):
            if lengths[G.mult[i][j]] == lengths[i] + lengths[j]:
                assert alpha(i, j) == 1


def test_twisted_group_ring_structures(s3_group):
    G = s3_group
    R = twisted_group_ring(G)
    assert verify_axioms(R).ok
    assert all(c == 1 for c in R.chi)
    sp = extract_special(R)
    assert all(v == 1 for v in sp.phi_values.values())
    alpha = schur_cocycle_sn(3, group=G)
    Ra = twisted_group_ring(G, alpha)
    # gamma = alpha and phi = eps for the twisted ring
    spa = extract_special(Ra)
    for i in range(G.order):
        for j in range(G.order):
            assert spa.gamma_class_scalar(i, j) == alpha(i, j)
            assert spa.phi_values[(i, j)] == alpha.epsilon(i, j)
        assert Ra.metric[i][0][0] == alpha(i, G.inv[i])
    sg = SuperGrading.sign_grading(G)
    Rs = twisted_group_ring(G, None, sg)
    assert verify_axioms(Rs, super_mode=True).ok
    assert [Rs.chi[i] for i in range(G.order)] == \
        [F(-1) if sg(i) else F(1) for i in range(G.order)]


def test_point_quotient_classification():
    # every structure on (+)_g k built from a 2-cocycle and a parity
    # homomorphism passes; breaking the cocycle identity is caught
    rng = random.Random(3)
    for G in (FiniteGroupTable.cyclic(2), FiniteGroupTable.cyclic(3),
              FiniteGroupTable.symmetric(3)):
        sigmas = [SuperGrading.trivial(G)]
        if G.is_symmetric_group():
            sigmas.append(SuperGrading.sign_grading(G))
        lam = [F(rng.randint(1, 7), rng.randint(1, 7)) for _ in range(G.order)]
        lam[G.e] = F(1)
        for alpha in (TwoCocycle.trivial(G), TwoCocycle.coboundary(G, lam)):
            for sigma in sigmas:
                R = twisted_group_ring(G, alpha, sigma)
                assert verify_axioms(R, super_mode=any(sigma.bits)).ok
                # classification: the structure is the twisted ring of its
                # own extracted cocycle data
                sp = extract_special(R)
                vals = [[sp.gamma_class_scalar(i, j) for j in range(G.order)]
                        for i in range(G.order)]
                back = twisted_group_ring(G, TwoCocycle(G, vals), sigma)
                assert back.tables_equal(R)
        # negative control: a non-cocycle gamma table fails verification
        bad = [[F(1)] * G.order for _ in range(G.order)]
        bad[1][1] = F(3)
        if TwoCocycle(G, bad, validate=False).cocycle_identity_violation():
            R = twisted_group_ring(G, TwoCocycle(G, bad, validate=False))
            assert not verify_axioms(R).ok


def test_super_grading_validation(s3_group):
    with pytest.raises(ValueError):
        SuperGrading(s3_group, [0, 1, 0, 0, 0, 0])
    sg = SuperGrading.sign_grading(s3_group)
    lengths = [s.n - len(s.cycles(include_fixed=True))
               for s in s3_group.elements]
    assert list(sg.bits) == [l % 2 for l in lengths]


def test_cocycle_json_roundtrip(s3_group):
    alpha = schur_cocycle_sn(3, group=s3_group)
    text = cocycle_to_json(alpha)
    back = cocycle_from_json_dict(json.loads(text))
    assert back.values == alpha.values
    back2 = cocycle_from_json_dict(json.loads(text), group=s3_group)
    assert back2.values == alpha.values
