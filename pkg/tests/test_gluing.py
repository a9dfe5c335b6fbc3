import pytest

from gcstar.errors import GluingConditionError, InputError
from gcstar.fixtures import (bmodel_family, disjoint_cover_family,
                             faulty_family, nested_family, unliftable_family)
from gcstar.gluing import (GluingFamily, check_weak_gluing,
                           family_from_reductions, glue)
from gcstar.groupoid import (FiniteGroup, GroupoidMorphism, direct_product,
                             group_groupoid, isotropy, orbits, pair_groupoid,
                             reduction, validate)
from gcstar.isosearch import groupoid_isomorphism


def test_identity_overlaps_are_clean():
    assert check_weak_gluing(nested_family()).ok


def test_unit_swap_fault_is_reported_as_cocycle_failure():
    report = check_weak_gluing(faulty_family())
    assert not report.ok
    assert report.cocycle_failures
    assert report.unit_pinning
    assert any("cocycle" in line for line in report.lines())


def test_split_pair_cover_fails_lifting():
    report = check_weak_gluing(unliftable_family())
    assert not report.ok
    assert report.lifting_failures
    assert not report.cocycle_failures


def test_glue_refuses_dirty_families():
    with pytest.raises(GluingConditionError):
        glue(faulty_family())
    with pytest.raises(GluingConditionError):
        glue(unliftable_family())


def test_glue_single_piece_is_the_piece():
    G = pair_groupoid(["1", "2", "3"])
    fam = family_from_reductions(G, [set(G.units)])
    glued = glue(fam)
    assert glued.n_arrows() == G.n_arrows()
    assert groupoid_isomorphism(glued, G) is not None


def test_glue_nested_cover_recovers_the_groupoid():
    G = pair_groupoid(["1", "2", "3"])
    fam = nested_family()
    glued = glue(fam)
    assert validate(glued).ok
    assert glued.n_arrows() == 9
    assert groupoid_isomorphism(glued, G) is not None


def test_glue_disjoint_cover_gives_disjoint_union():
    fam = disjoint_cover_family()
    glued = glue(fam)
    assert validate(glued).ok
    assert glued.n_arrows() == sum(p.n_arrows() for p in fam.pieces)
    assert len(orbits(glued)) == 2


def test_glue_boundary_model_family():
    fam = bmodel_family()
    assert check_weak_gluing(fam).ok
    glued = glue(fam)
    assert validate(glued).ok
    assert glued.n_arrows() == 11
    assert {frozenset(o) for o in orbits(glued)} == \
        {frozenset({"b"}), frozenset({"i1", "i2", "i3"})}
    assert len(isotropy(glued, "b")) == 2
    for U, piece in zip(fam.cover, fam.pieces):
        assert groupoid_isomorphism(reduction(glued, U), piece) is not None


def test_glue_is_order_independent_up_to_isomorphism():
    fam = bmodel_family()
    swapped = GluingFamily(
        cover=(fam.cover[1], fam.cover[0]),
        pieces=(fam.pieces[1], fam.pieces[0]),
        isos={(1, 0): fam.isos[(0, 1)], (0, 1): fam.isos[(1, 0)]},
    )
    assert groupoid_isomorphism(glue(fam), glue(swapped)) is not None


def _product_ids(A, B):
    """Encode/decode helpers for direct_product's arrow id layout."""
    a_ids = list(A.arrows)
    b_ids = list(B.arrows)
    a_idx = {g: i for i, g in enumerate(a_ids)}
    b_idx = {h: i for i, h in enumerate(b_ids)}
    nb = len(b_ids)

    def encode(g, h):
        return a_idx[g] * nb + b_idx[h]

    def decode(pid):
        q, r = divmod(pid, nb)
        return a_ids[q], b_ids[r]

    return encode, decode


def test_product_of_gluings_is_gluing_of_products():
    fam1 = nested_family()
    fam2 = disjoint_cover_family()
    cover, pieces, codecs = [], [], []
    pairs = [(i, j) for i in range(len(fam1.pieces)) for j in range(len(fam2.pieces))]
    for (i, j) in pairs:
        cover.append(frozenset((x, y) for x in fam1.cover[i] for y in fam2.cover[j]))
        pieces.append(direct_product(fam1.pieces[i], fam2.pieces[j]))
        codecs.append(_product_ids(fam1.pieces[i], fam2.pieces[j]))
    isos = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if a == b:
                continue
            overlap = cover[a] & cover[b]
            if not overlap:
                continue
            phi = fam1.phi(i, k)
            psi = fam2.phi(j, l)
            _, decode_a = codecs[a]
            encode_b, _ = codecs[b]
            src_red = reduction(pieces[a], overlap)
            arrow_map, unit_map = {}, {}
            for pid in src_red.arrows:
                g, h = decode_a(pid)
                arrow_map[pid] = encode_b(phi.arrow_map[g], psi.arrow_map[h])
            for (x, y) in src_red.units:
                unit_map[(x, y)] = (phi.unit_map[x], psi.unit_map[y])
            isos[(a, b)] = GroupoidMorphism(
                src_red, reduction(pieces[b], overlap), unit_map, arrow_map)
    prod_family = GluingFamily(cover, pieces, isos)
    assert check_weak_gluing(prod_family).ok
    lhs = glue(prod_family)
    rhs = direct_product(glue(fam1), glue(fam2))
    assert lhs.n_arrows() == rhs.n_arrows()
    assert groupoid_isomorphism(lhs, rhs) is not None


def test_family_constructor_rejects_mismatched_overlap_maps():
    G = pair_groupoid(["1", "2", "3"])
    fam = family_from_reductions(G, [{"1", "2", "3"}, {"2", "3"}])
    wrong_overlap = reduction(G, {"3"})
    bad = GroupoidMorphism.identity(wrong_overlap)
    isos = dict(fam.isos)
    isos[(0, 1)] = bad
    with pytest.raises(InputError):
        GluingFamily(fam.cover, fam.pieces, isos)


def test_family_constructor_requires_both_directions():
    G = pair_groupoid(["1", "2", "3"])
    fam = family_from_reductions(G, [{"1", "2", "3"}, {"2", "3"}])
    isos = {(0, 1): fam.isos[(0, 1)]}
    with pytest.raises(InputError, match="missing"):
        GluingFamily(fam.cover, fam.pieces, isos)


def test_family_constructor_rejects_non_isomorphisms():
    G = pair_groupoid(["1", "2", "3"])
    fam = family_from_reductions(G, [{"1", "2", "3"}, {"2", "3"}])
    overlap = reduction(G, {"2", "3"})
    collapse = {g: overlap.unit_arrow["2"] for g in overlap.arrows}
    bad = GroupoidMorphism(overlap, overlap,
                           {"2": "2", "3": "3"}, collapse)
    isos = dict(fam.isos)
    isos[(0, 1)] = bad
    with pytest.raises(InputError, match="isomorphism"):
        GluingFamily(fam.cover, fam.pieces, isos)


def test_glue_with_isotropy_overlap():
    # two charts both seeing the full group piece; overlap maps may twist
    Z3 = group_groupoid(FiniteGroup.cyclic(3), unit="z")
    G = pair_groupoid(["1", "2"])
    from gcstar.groupoid import disjoint_union
    big = disjoint_union([G, Z3])
    fam = family_from_reductions(big, [{"1", "2", "z"}, {"z"}])
    assert check_weak_gluing(fam).ok
    glued = glue(fam)
    assert validate(glued).ok
    assert glued.n_arrows() == big.n_arrows()
    assert groupoid_isomorphism(glued, big) is not None
