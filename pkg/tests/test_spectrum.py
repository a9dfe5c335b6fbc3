import numpy as np
import pytest

from gcstar.convolution import ArrowFunction
from gcstar.errors import CoverPreconditionError
from gcstar.fixtures import (disjoint_pair_z2, pair2, pair3, swap_action,
                             z2_groupoid, z3_groupoid)
from gcstar.groupoid import (FiniteGroup, disjoint_union, group_groupoid,
                             isotropy, orbits, pair_groupoid, reduction)
from gcstar.randgen import random_groupoid, random_subset, rng_from_seed
from gcstar.spectrum import (block_decomposition, check_families,
                             check_norm_estimates, check_phi_isometry,
                             check_regular_family_faithful, commutant_basis,
                             concrete_algebra, induce, induction_map,
                             morita_reduction_data, prim_partition,
                             verify_spectrum_decomposition)


def test_concrete_algebra_shapes():
    alg = concrete_algebra(pair3())
    assert alg.dim == 3  # one regular representation of the single orbit
    alg = concrete_algebra(z3_groupoid())
    assert alg.dim == 3
    alg = concrete_algebra(disjoint_pair_z2())
    assert alg.dim == 2 + 2


def test_wedderburn_pair_groupoid_single_full_block():
    dec = block_decomposition(pair3(), seed=1)
    assert [(b.dim, b.multiplicity) for b in dec.blocks] == [(3, 1)]


def test_wedderburn_z3_matches_discrete_fourier_characters():
    dec = block_decomposition(z3_groupoid(), seed=1)
    assert [b.dim for b in dec.blocks] == [1, 1, 1]
    omega = np.exp(2j * np.pi / 3)
    expected = {tuple(np.round([omega ** (j * k) for k in range(3)], 9))
                for j in range(3)}
    got = {tuple(np.round(b.traces, 9)) for b in dec.blocks}
    assert got == expected


def test_wedderburn_swap_action_single_two_dim_block():
    dec = block_decomposition(swap_action(), seed=1)
    assert [b.dim for b in dec.blocks] == [2]


def test_wedderburn_klein_four_has_four_characters():
    dec = block_decomposition(group_groupoid(FiniteGroup.klein_four()), seed=1)
    assert [b.dim for b in dec.blocks] == [1, 1, 1, 1]


def test_block_labels_are_seed_independent():
    G = disjoint_union([pair_groupoid(["1", "2"]),
                        group_groupoid(FiniteGroup.cyclic(3), unit="3")])
    dec1 = block_decomposition(G, seed=1)
    dec2 = block_decomposition(G, seed=99)
    assert dec1.labels == dec2.labels
    for b1, b2 in zip(dec1.blocks, dec2.blocks):
        assert b1.dim == b2.dim and b1.multiplicity == b2.multiplicity
        assert np.max(np.abs(np.array(b1.traces) - np.array(b2.traces))) < 1e-8


def test_commutant_dimension_equals_total_isotropy():
    rng = rng_from_seed(20)
    for _ in range(15):
        G = random_groupoid(rng, max_arrows=40)
        alg = concrete_algebra(G)
        basis = commutant_basis(alg)
        expected = sum(len(isotropy(G, min(orb, key=G.units.index)))
                       for orb in orbits(G))
        assert len(basis) == expected
        # every basis element genuinely commutes with every generator
        for B in basis[:3]:
            for g in list(G.arrows)[:10]:
                A = alg.generator_matrix(g)
                assert np.max(np.abs(A @ B - B @ A)) == 0.0


def test_block_census_on_random_groupoids():
    rng = rng_from_seed(21)
    for _ in range(10):
        G = random_groupoid(rng, max_arrows=40)
        dec = block_decomposition(G, seed=3)
        assert sum(b.dim ** 2 for b in dec.blocks) == G.n_arrows()
        assert sum(b.dim * b.multiplicity for b in dec.blocks) == dec.algebra.dim


def test_prim_partition_examples():
    dec = block_decomposition(pair3(), seed=1)
    inside, outside = prim_partition(dec, {"1"})
    assert inside == frozenset() and len(outside) == 1

    D = disjoint_pair_z2()
    dec = block_decomposition(D, seed=1)
    inside, outside = prim_partition(dec, {"3"})
    assert len(inside) == 1 and len(outside) == 2
    pair_block = next(b for b in dec.blocks if b.dim == 2)
    assert inside == {pair_block.label}

    inside, _ = prim_partition(dec, set(D.units))
    assert inside == frozenset()


def test_induction_examples():
    # the one-point corner of the full matrix block
    assert induce(pair3(), {"1"}, "B0", seed=1) == "B0"

    # the group part of a disjoint union induces to itself
    D = disjoint_pair_z2()
    ind = induction_map(D, {"3"}, seed=1)
    dec_labels = {b.label: b.dim for b in ind.dec.blocks}
    assert all(dec_labels[v] == 1 for v in ind.mapping.values())
    assert len(set(ind.mapping.values())) == 2

    # the full subset induces the identity on blocks
    ind = induction_map(D, set(D.units), seed=1)
    for j, B in ind.mapping.items():
        assert ind.dec_red.block(j).dim == ind.dec.block(B).dim
    assert frozenset(ind.mapping.values()) == frozenset(ind.dec.labels)


def test_induction_is_bijective_onto_complement():
    rng = rng_from_seed(22)
    for _ in range(10):
        G = random_groupoid(rng, max_arrows=40)
        U = random_subset(rng, G)
        ind = induction_map(G, U, seed=4)
        assert ind.ok
        assert len(set(ind.mapping.values())) == len(ind.mapping)
        assert frozenset(ind.mapping.values()) == ind.prim_outside


def test_invariant_subset_splits_the_spectrum():
    rng = rng_from_seed(23)
    for _ in range(10):
        G = random_groupoid(rng, max_arrows=40)
        orbs = orbits(G)
        V = frozenset().union(*(o for i, o in enumerate(orbs) if i % 2 == 0))
        if not V or V == set(G.units):
            continue
        dec = block_decomposition(G, seed=5)
        inside, outside = prim_partition(dec, V)
        ind = induction_map(G, V, seed=5, dec=dec)
        assert frozenset(ind.mapping.values()) == outside
        assert inside | outside == frozenset(dec.labels)
        assert not (inside & outside)


def test_phi_isometry_examples():
    rep = check_phi_isometry(pair2(), {"1"}, "1")
    assert rep.ok and rep.fiber_dim == 2 and rep.max_residual() < 1e-10

    G = pair3()
    rep = check_phi_isometry(G, set(G.units), "2")
    assert rep.ok and rep.max_residual() < 1e-10

    rep = check_phi_isometry(disjoint_pair_z2(), {"3"}, "3")
    assert rep.ok and rep.max_residual() < 1e-10


def test_phi_isometry_requires_membership():
    with pytest.raises(Exception):
        check_phi_isometry(pair2(), {"1"}, "2")


def test_norm_estimate_examples():
    # single deltas have norm one in both models
    G = pair3()
    dec = block_decomposition(G, seed=1)
    U = {"1", "2"}
    GU = reduction(G, U)
    dec_red = block_decomposition(GU, seed=1)
    for g in GU.arrows:
        f_red = ArrowFunction.delta(GU, g)
        assert abs(dec_red.block_norm(f_red) - 1.0) < 1e-9
        assert abs(dec.block_norm(f_red.extend_to(G)) - 1.0) < 1e-9

    # the group character oracle: delta_e + delta_s has norm two
    D = disjoint_pair_z2()
    decD = block_decomposition(D, seed=1)
    GU = reduction(D, {"3"})
    dec_red = block_decomposition(GU, seed=1)
    f = ArrowFunction(GU, {g: 1.0 for g in GU.arrows})
    assert abs(dec_red.block_norm(f) - 2.0) < 1e-9
    assert abs(decD.block_norm(f.extend_to(D)) - 2.0) < 1e-9

    rep = check_norm_estimates(G, U, trials=30, seed=6)
    assert rep.ok


def test_norm_estimates_randomized():
    rng = rng_from_seed(24)
    for _ in range(8):
        G = random_groupoid(rng, max_units=7, max_arrows=30)
        U = random_subset(rng, G)
        rep = check_norm_estimates(G, U, trials=5, seed=7)
        assert rep.max_equality_gap < 1e-9
        assert rep.min_induction_slack > -1e-9
        assert rep.max_regular_consistency < 1e-9


def test_spectrum_decomposition_examples():
    D = disjoint_pair_z2()
    rep = verify_spectrum_decomposition(D, [{"1", "2"}, {"3"}], seed=1)
    assert rep.ok
    assert len(rep.prim_all) == 3
    assert sorted(len(i) for i in rep.images) == [1, 2]

    P = pair3()
    rep = verify_spectrum_decomposition(P, [{"1"}, {"2"}], seed=1)
    assert rep.ok and len(rep.prim_all) == 1

    rep = verify_spectrum_decomposition(P, [set(P.units)], seed=1)
    assert rep.ok and rep.images == (rep.prim_all,)


def test_spectrum_decomposition_requires_admissible_cover():
    D = disjoint_pair_z2()
    with pytest.raises(CoverPreconditionError):
        verify_spectrum_decomposition(D, [{"1"}], seed=1)


def test_spectrum_decomposition_randomized():
    rng = rng_from_seed(25)
    from gcstar.randgen import random_admissible_cover
    for _ in range(10):
        G = random_groupoid(rng, max_arrows=40)
        cover = random_admissible_cover(rng, G)
        rep = verify_spectrum_decomposition(G, cover, seed=8)
        assert rep.ok


def test_check_families_examples():
    D = disjoint_pair_z2()
    dec = block_decomposition(D, seed=1)

    # regular representations, one per orbit, are faithful
    assert check_regular_family_faithful(D, seed=1, dec=dec)

    # only the trivial character of the group part: not exhaustive
    GU = reduction(D, {"3"})
    dec_red = block_decomposition(GU, seed=1)
    trivial = next(b.label for b in dec_red.blocks
                   if np.allclose(np.array(b.traces), 1.0))
    pair_label = block_decomposition(reduction(D, {"1", "2"}), seed=1).labels[0]
    rep = check_families(D, [({"1", "2"}, [pair_label]), ({"3"}, [trivial])],
                         seed=1, dec=dec)
    assert not rep.induced_family_faithful
    assert rep.corollary_holds  # no promise was made: one member is partial

    # every block everywhere: exhaustive, and the corollary bites
    full = []
    for U in ({"1", "2"}, {"3"}):
        labels = block_decomposition(reduction(D, U), seed=1).labels
        full.append((U, list(labels)))
    rep = check_families(D, full, seed=1, dec=dec)
    assert rep.all_faithful_downstairs and rep.induced_family_faithful
    assert rep.corollary_holds


def test_check_families_randomized_corollary():
    rng = rng_from_seed(26)
    from gcstar.randgen import random_admissible_cover
    for _ in range(8):
        G = random_groupoid(rng, max_arrows=40)
        cover = random_admissible_cover(rng, G)
        family = [(U, list(block_decomposition(reduction(G, U), seed=9).labels))
                  for U in cover]
        rep = check_families(G, family, seed=9)
        assert rep.all_faithful_downstairs
        assert rep.induced_family_faithful and rep.corollary_holds


def test_single_group_family_with_trivial_character_only():
    Z2 = z2_groupoid("*")
    dec = block_decomposition(Z2, seed=1)
    trivial = next(b.label for b in dec.blocks
                   if np.allclose(np.array(b.traces), 1.0))
    rep = check_families(Z2, [({"*"}, [trivial])], seed=1, dec=dec)
    assert not rep.induced_family_faithful        # the sign block is missed
    rep = check_families(Z2, [({"*"}, list(dec.labels))], seed=1, dec=dec)
    assert rep.induced_family_faithful


def test_induced_support_contains_induced_supports():
    # the support of an induced regular representation, computed upstairs,
    # contains the induced image of the support computed downstairs
    rng = rng_from_seed(28)
    from gcstar.spectrum import regular_support
    for _ in range(10):
        G = random_groupoid(rng, max_arrows=36)
        U = random_subset(rng, G)
        x = sorted(U, key=G.units.index)[0]
        ind = induction_map(G, U, seed=10)
        down = regular_support(reduction(G, U), x, ind.dec_red)
        lifted = {ind.mapping[j] for j in down}
        up = regular_support(G, x, ind.dec)
        assert lifted <= up


def test_regular_rep_support_is_full_spectrum_per_orbit():
    G = disjoint_pair_z2()
    dec = block_decomposition(G, seed=1)
    from gcstar.spectrum import regular_support
    supp_pair = regular_support(G, "1", dec)
    supp_group = regular_support(G, "3", dec)
    assert supp_pair | supp_group == set(dec.labels)
    assert not (supp_pair & supp_group)


def test_morita_examples():
    rep = morita_reduction_data(pair3(), {"1"})
    assert rep.ok and rep.saturation == {"1", "2", "3"}
    rep = morita_reduction_data(disjoint_pair_z2(), {"3"})
    assert rep.ok and rep.saturation == {"3"}


def test_morita_randomized():
    rng = rng_from_seed(27)
    for _ in range(15):
        G = random_groupoid(rng, max_arrows=40)
        U = random_subset(rng, G)
        assert morita_reduction_data(G, U).ok


def test_wedderburn_rejects_non_groupoid():
    from gcstar.errors import InputError
    from gcstar.fixtures import broken_pair3
    with pytest.raises(InputError):
        concrete_algebra(broken_pair3())


def test_empty_cover_member_contributes_nothing():
    D = disjoint_pair_z2()
    rep = verify_spectrum_decomposition(D, [{"1", "2"}, {"3"}, set()], seed=1)
    assert rep.ok
    assert rep.images[2] == frozenset()


def test_wedderburn_cluster_ambiguity_is_loud():
    from gcstar.errors import AmbiguityError
    from gcstar.spectrum import wedderburn
    alg = concrete_algebra(z3_groupoid())
    # an absurd clustering tolerance merges inequivalent blocks; the exact
    # dimension census catches it instead of reporting a wrong decomposition
    with pytest.raises(AmbiguityError):
        wedderburn(alg, seed=1, cluster_tol=100.0)
