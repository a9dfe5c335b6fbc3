import pytest

from gcstar.errors import InputError
from gcstar.groupoid import (FiniteGroup, FiniteGroupoid, GroupoidMorphism,
                             action_groupoid, direct_product, disjoint_union,
                             group_groupoid, is_invariant, isotropy, orbits,
                             pair_groupoid, reduction, relabel_units,
                             saturation, validate)
from gcstar.fixtures import broken_pair3, swap_action, trivial_action_two_points
from gcstar.randgen import random_groupoid, random_subset, rng_from_seed


def test_validate_pair_groupoid_clean():
    assert validate(pair_groupoid(["1", "2", "3"])).ok


def test_validate_redirected_composition_lists_associativity():
    report = validate(broken_pair3())
    assert not report.ok
    rules = {v.rule for v in report.violations}
    assert "associativity" in rules


def test_validate_swap_action_groupoid_clean():
    assert validate(swap_action()).ok


def test_validate_unit_law_fault():
    G = pair_groupoid(["1", "2"])
    inverse = dict(G.inverse)
    inverse[1] = 1  # (1,2) declared self-inverse
    bad = FiniteGroupoid(G.units, G.dom, G.ran, inverse, G.unit_arrow,
                         G.compose_table)
    report = validate(bad)
    assert not report.ok
    assert any(v.rule in ("inverse-endpoints", "inverse-law")
               for v in report.violations)


def test_reduction_of_pair_groupoid():
    G = pair_groupoid(["1", "2", "3"])
    R = reduction(G, {"1", "2"})
    assert set(R.units) == {"1", "2"}
    assert R.n_arrows() == 4
    assert validate(R).ok


def test_reduction_full_is_same_groupoid():
    G = pair_groupoid(["1", "2", "3"])
    R = reduction(G, set(G.units))
    assert R.units == G.units
    assert R.compose_table == G.compose_table


def test_reduction_of_swap_action_to_one_point_is_trivial():
    A = swap_action()
    R = reduction(A, {"a"})
    assert R.n_units() == 1 and R.n_arrows() == 1
    assert R.is_unit_arrow(R.arrows[0])


def test_reduction_rejects_strangers():
    with pytest.raises(InputError):
        reduction(pair_groupoid(["1"]), {"zz"})


def test_saturation_examples():
    P = pair_groupoid(["1", "2", "3"])
    assert saturation(P, {"1"}) == {"1", "2", "3"}
    D = disjoint_union([pair_groupoid(["1", "2"]),
                        group_groupoid(FiniteGroup.cyclic(2), unit="3")])
    assert saturation(D, {"3"}) == {"3"}
    assert saturation(swap_action(), {"a"}) == {"a", "b"}


def test_is_invariant_examples():
    P = pair_groupoid(["1", "2"])
    assert not is_invariant(P, {"1"})
    assert is_invariant(P, set(P.units))
    D = disjoint_union([pair_groupoid(["1", "2"]),
                        group_groupoid(FiniteGroup.cyclic(2), unit="3")])
    assert is_invariant(D, {"3"})


def test_orbits_and_isotropy_examples():
    P = pair_groupoid(["1", "2", "3"])
    assert orbits(P) == (frozenset({"1", "2", "3"}),)
    assert len(isotropy(P, "1")) == 1

    Z3 = group_groupoid(FiniteGroup.cyclic(3), unit="z")
    assert orbits(Z3) == (frozenset({"z"}),)
    assert isotropy(Z3, "z").order_profile() == (1, 3, 3)

    T = trivial_action_two_points()
    assert set(orbits(T)) == {frozenset({"p"}), frozenset({"q"})}
    assert len(isotropy(T, "p")) == 2
    assert len(isotropy(T, "q")) == 2


def test_action_groupoid_trivial_z3_is_group():
    Z3 = FiniteGroup.cyclic(3)
    A = action_groupoid(["p"], Z3, lambda x, g: x)
    assert validate(A).ok
    assert A.n_units() == 1 and A.n_arrows() == 3
    assert isotropy(A, "p").order_profile() == (1, 3, 3)


def test_action_groupoid_rejects_broken_action():
    Z2 = FiniteGroup.cyclic(2)
    # not a bijection for the nontrivial element: both points map to "a"
    act = {("a", 0): "a", ("b", 0): "b", ("a", 1): "a", ("b", 1): "a"}
    with pytest.raises(InputError, match="compatibility"):
        action_groupoid(["a", "b"], Z2, act)


def test_action_groupoid_rejects_broken_identity():
    Z2 = FiniteGroup.cyclic(2)
    act = {("a", 0): "b", ("b", 0): "a", ("a", 1): "b", ("b", 1): "a"}
    with pytest.raises(InputError, match="identity"):
        action_groupoid(["a", "b"], Z2, act)


def test_trivial_two_point_action_is_two_group_copies():
    from gcstar.isosearch import groupoid_isomorphism

    T = trivial_action_two_points()
    Z2 = FiniteGroup.cyclic(2)
    target = disjoint_union([group_groupoid(Z2, unit="p"),
                             group_groupoid(Z2, unit="q")])
    phi = groupoid_isomorphism(T, target)
    assert phi is not None and phi.check() == []


def test_saturation_rejects_strangers():
    with pytest.raises(InputError):
        saturation(pair_groupoid(["1"]), {"zz"})


def test_direct_product_and_disjoint_union_validate():
    G = direct_product(pair_groupoid(["x", "y"]),
                       group_groupoid(FiniteGroup.cyclic(2)))
    assert validate(G).ok
    assert G.n_arrows() == 8
    D = disjoint_union([pair_groupoid(["1", "2"]), pair_groupoid(["3"])])
    assert validate(D).ok
    assert D.n_arrows() == 5


def test_relabel_units_preserves_structure():
    G = pair_groupoid(["1", "2"])
    H = relabel_units(G, {"1": "a", "2": "b"})
    assert validate(H).ok
    assert set(H.units) == {"a", "b"}
    assert H.compose_table == G.compose_table


def test_morphism_identity_checks_clean():
    G = swap_action()
    phi = GroupoidMorphism.identity(G)
    assert phi.check() == []
    assert phi.is_isomorphism()
    composed = phi.then(phi)
    assert composed.arrow_map == phi.arrow_map
    assert composed.inverse_morphism().unit_map == phi.unit_map


def test_isotropy_groups_satisfy_group_axioms():
    rng = rng_from_seed(45)
    for _ in range(10):
        G = random_groupoid(rng, max_arrows=30)
        for x in G.units:
            assert isotropy(G, x).check() == []


def test_klein_four_group_table():
    K = FiniteGroup.klein_four()
    assert K.check() == []
    assert K.order_profile() == (1, 2, 2, 2)


def test_randomized_saturation_and_reduction_properties():
    rng = rng_from_seed(42)
    for _ in range(30):
        G = random_groupoid(rng)
        assert validate(G).ok
        U = random_subset(rng, G)
        W = saturation(G, U)
        # idempotent, monotone, and a union of orbits containing U
        assert saturation(G, W) == W
        assert U <= W
        for orb in orbits(G):
            assert orb <= W or not (orb & W)
        bigger = U | random_subset(rng, G)
        assert W <= saturation(G, bigger)
        # reduction composes
        A = random_subset(rng, G)
        B = frozenset(x for x in A if rng.random() < 0.6)
        if B:
            R1 = reduction(reduction(G, A), B)
            R2 = reduction(G, B)
            assert R1.units == R2.units
            assert R1.compose_table == R2.compose_table


def test_action_groupoids_orbit_and_stabilizer_structure():
    cases = []
    for k in (2, 3, 4):
        H = FiniteGroup.cyclic(k)
        units = [f"p{i}" for i in range(k)]
        rotation = {(units[i], g): units[(i + g) % k]
                    for i in range(k) for g in H.elements}
        cases.append((units, H, rotation))
        trivial = {(x, g): x for x in units for g in H.elements}
        cases.append((units, H, trivial))
    # a mixed action: a fixed point next to a swapped pair
    Z2 = FiniteGroup.cyclic(2)
    mixed_units = ["f", "s1", "s2"]
    mixed = {("f", 0): "f", ("f", 1): "f", ("s1", 0): "s1", ("s1", 1): "s2",
             ("s2", 0): "s2", ("s2", 1): "s1"}
    cases.append((mixed_units, Z2, mixed))

    for units, H, act in cases:
        A = action_groupoid(units, H, act)
        assert validate(A).ok
        assert A.n_arrows() == len(units) * len(H)
        for x in units:
            orbit = {act[(x, g)] for g in H.elements}
            assert orbit == next(o for o in orbits(A) if x in o)
            stabilizer = sum(1 for g in H.elements if act[(x, g)] == x)
            assert len(isotropy(A, x)) == stabilizer


def test_counting_measure_right_invariance_by_bijection_replay():
    rng = rng_from_seed(44)
    for _ in range(10):
        G = random_groupoid(rng, max_arrows=30)
        for g in G.arrows:
            image = [G.compose(h, g) for h in G.fiber(G.ran[g])]
            assert sorted(image) == sorted(G.fiber(G.dom[g]))
