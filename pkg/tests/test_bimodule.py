import random

import pytest

from iainfty.ainfty import AInftyMorphism
from iainfty.bimodule import (AInftyBimodule, adjunction_check, are_homotopy_equivalent, bimodule_check,
                              boxtimes, diagonal_bimodule, family_from_linear, find_homotopy, hom_complex,
                              hom_compose, hom_involution, homotopy_check, identity_family, induced_bimodule,
                              is_morphism, push_forward, shift_bimodule, tensor_functor_map)
from iainfty.corpus import (acyclic_dga, cyclic_group, dual_numbers, ground_field, homotopy_pair,
                            unit_inclusion)
from iainfty.linalg import Echelon, StructuralError, axpy, linear_extend

NEG = {"1": {"1": -1}, "e": {"e": -1}}


@pytest.fixture(scope="module")
def dual_diag():
    return diagonal_bimodule(dual_numbers())


@pytest.fixture(scope="module")
def pair():
    return homotopy_pair()


@pytest.mark.parametrize("name", ["K", "dual", "C2", "C4", "UT2", "dga", "m3"])
def test_diagonal_is_a_bimodule(fixtures, name):
    assert bimodule_check(diagonal_bimodule(fixtures[name]), 3).ok


def test_wrong_sign_right_action_rejected(dual_diag):
    P = dual_diag
    comps = {w: ({y: -c for y, c in img.items()} if len(w) == 2 and w[-1][0] == "a" else img)
             for w, img in P.components.items()}
    rep = bimodule_check(AInftyBimodule(P.algebra, P.space, comps, "flipped"), 3)
    assert not rep.ok
    assert rep.witnesses["involution"] == (("a", "1"), ("m", "1"))


def test_component_needs_one_module_letter(dual_diag):
    with pytest.raises(ValueError):
        AInftyBimodule(dual_diag.algebra, dual_diag.space, {(("a", "1"),): {("m", "1"): 1}})


def test_from_unsuspended_degree_rule():
    A = dual_numbers()
    with pytest.raises(ValueError, match="n-2"):
        AInftyBimodule.from_unsuspended(A, A.space, {(1, 1): {(("e",), "1", ("e",)): {"1": 1}}})


def test_induced_by_identity_is_diagonal(dual_diag):
    f = AInftyMorphism.identity(dual_diag.algebra)
    assert induced_bimodule(f, 3).components == dual_diag.components


def test_induced_bimodules_valid():
    aug = AInftyMorphism.linear(cyclic_group(2), ground_field(), {"g0": {"1": 1}, "g1": {"1": 1}})
    assert bimodule_check(induced_bimodule(aug, 3), 3).ok
    assert bimodule_check(induced_bimodule(unit_inclusion(acyclic_dga()), 3), 3).ok


def test_hom_complex_square_zero(pair):
    P, Q, f, g = pair
    for M, N in ((P, P), (P, Q), (Q, Q)):
        assert hom_complex(M, N, 1).complex().square_zero_failure() is None


def test_hom_of_ground_field():
    DK = diagonal_bimodule(ground_field())
    assert hom_complex(DK, DK, 3).homology() == {-2: 0, -1: 0, 0: 1}


def test_random_boundary_is_null_homotopic(pair):
    _, Q, _, _ = pair
    H = hom_complex(Q, Q, 1)
    rng = random.Random(7)
    keys = list(H.complex().components[1].keys)
    h = {k: Q.field(rng.randint(1, 3)) for k in rng.sample(keys, 6)}
    f = H.apply_d(h)
    assert f
    assert homotopy_check(H, f, {}, h)
    found = find_homotopy(H, f, {}, 0)
    assert found.found and homotopy_check(H, f, {}, found.homotopy)


def test_identity_not_null_homotopic_on_P(pair):
    P = pair[0]
    H = hom_complex(P, P, 2)
    assert not find_homotopy(H, identity_family(P), {}, 0).found


def test_inclusion_and_projection(pair):
    P, Q, f, g = pair
    assert is_morphism(hom_complex(P, Q, 1), f)
    assert is_morphism(hom_complex(Q, P, 1), g)
    assert hom_compose(g, f, P, Q, P, 1) == identity_family(P)
    assert are_homotopy_equivalent(f, g, P, Q, 1)


def test_shift_twice_preserves_square_zero(dual_diag):
    S = shift_bimodule(shift_bimodule(dual_diag), tag_suffix="''")
    assert bimodule_check(S, 2).ok


def test_box_tensor_weight_zero_orbits():
    # pairs (g_i, g_j) modulo (i, j) ~ (-i, -j): 4 fixed pairs and 6 orbits of size two
    D = diagonal_bimodule(cyclic_group(4))
    bt = boxtimes(D, D, 0)
    assert (bt.full_dim, bt.quotient_dim) == (16, 10)


def test_sign_involution_kills_the_line():
    DK = diagonal_bimodule(ground_field())
    M = DK.with_involution({"1": {"1": -1}})
    assert bimodule_check(M, 3).ok
    bt = boxtimes(M, DK, 2)
    assert bt.quotient_dim == 0
    assert all(v == 0 for v in bt.homology().values())


def test_literal_relation_descent_failure():
    D = diagonal_bimodule(cyclic_group(4))
    with pytest.raises(StructuralError):
        boxtimes(D, D, 2, check_descent=True)
    assert boxtimes(D, D, 2, relation="reversal", shape="cyclic").descent_failure() is None


def test_reversal_needs_cyclic_shape(dual_diag):
    with pytest.raises(ValueError):
        boxtimes(dual_diag, dual_diag, 1, relation="reversal")


def test_tensor_functor_map_is_chain_map_on_quotients(pair, dual_diag):
    P, Q, _, _ = pair
    M = dual_diag
    fmap = {k: {k: 1} for k in P.space.keys}
    F = tensor_functor_map(fmap, P, Q, M, 2)
    bp, bq = boxtimes(P, M, 2), boxtimes(Q, M, 2)
    for w in bp.cyclic.words:
        assert F(bp.cyclic.d(w)) == linear_extend(bq.cyclic.d, F({w: 1}))
    target = Echelon()
    for vs in bq.cyclic.relations(bq.relation_star).values():
        for v in vs:
            target.add(v)
    for vs in bp.cyclic.relations(bp.relation_star).values():
        for v in vs:
            assert target.contains(F(v))


def test_tensor_functor_needs_involutive_map(pair, dual_diag):
    P, Q, _, _ = pair
    with pytest.raises(ValueError):
        tensor_functor_map({k: {k: 1} for k in P.space.keys}, P.with_involution(NEG), Q, dual_diag, 1)


@pytest.mark.parametrize("make, L, dim", [
    # dim = #L-basis * #M-basis * #words * #N-basis, halved to zero or kept by the relation
    (lambda: (diagonal_bimodule(ground_field()),) * 3, 2, 3),
    (lambda: (diagonal_bimodule(dual_numbers()),) * 3, 2, 56),
    (lambda: (diagonal_bimodule(dual_numbers()).with_involution(NEG),
              diagonal_bimodule(dual_numbers()).with_involution(NEG),
              diagonal_bimodule(dual_numbers())), 1, 24),
])
def test_adjunction(make, L, dim):
    rep = adjunction_check(*make(), L)
    assert rep.ok
    assert rep.dim_left == rep.dim_right == dim


def test_adjunction_mixed_signs_vanish():
    P = diagonal_bimodule(dual_numbers())
    rep = adjunction_check(P.with_involution(NEG), P, P, 1)
    assert rep.ok and rep.dim_left == 0


@pytest.mark.parametrize("convention", ["literal", "conjugate"])
def test_involution_commutes_with_push_forward(dual_diag, convention):
    P = dual_diag
    H = hom_complex(P, P, 1)
    keys = list(H.complex().components[0].keys)
    phi = {k: P.field(i + 1) for i, k in enumerate(keys[:5])}
    f = {"1": {"1": 1}, "e": {"e": 2}}
    lhs = push_forward(f, hom_involution(phi, H, convention), H, P, P)
    rhs = hom_involution(push_forward(f, phi, H, P, P), H, convention)
    assert lhs == rhs


def test_hom_star_commutes_with_d(dual_diag):
    H = hom_complex(dual_diag, dual_diag, 2)
    assert H.star_commutes_with_d("conjugate") is None
