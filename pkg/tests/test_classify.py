import pytest

from ddks import catalog
from ddks.classify import (
    abelian_normal_prime_index,
    all_normal_subgroups,
    check_cct_witness,
    has_quotient_isomorphic_to,
    is_cct,
    mon,
)
from ddks.group import center, centralizer, is_isomorphic


def naive_cct(G):
    """Definition: [x,y] = [y,w] = 1 forces [x,w] = 1 on non-central elements."""
    Z = center(G)
    nc = [g for g in range(G.order) if g not in Z]
    for y in nc:
        cy = [x for x in nc if G.comm(x, y) == 0]
        for x in cy:
            for w in cy:
                if G.comm(x, w):
                    return False
    return True


@pytest.mark.parametrize("label", ["S3", "D8", "Q8", "A4", "S4", "D16", "SL(2,3)", "G(36,10)", "G(40,3)", "G(24,12)"])
def test_cct_matches_definition(label):
    G = catalog.load_group(label)
    v = is_cct(G)
    assert v.is_cct == naive_cct(G)
    if not v.is_cct:
        assert check_cct_witness(G, v.witness)


def test_abelian_is_vacuously_cct():
    v = is_cct(catalog.load_group("V4"))
    assert v.is_cct and v.vacuous


def test_non_cct_has_nonabelian_centralizer():
    G = catalog.load_group("G(36,10)")
    g = catalog.element(G, catalog.entry("G(36,10)").annotations["nonabelian_centralizer_of"])
    C = centralizer(G, g)
    assert C.order == 12 and any(G.comm(a, b) for a in C for b in C)


def test_mon_values():
    assert not mon(catalog.load_group("D12")).is_monolithic
    v = mon(catalog.load_group("S4"))
    assert v.is_monolithic and v.mon.order == 4
    v = mon(catalog.load_group("G(32,49)"))
    assert v.is_monolithic and v.mon == center(catalog.load_group("G(32,49)"))


def test_normal_subgroup_list_s4():
    Ns = all_normal_subgroups(catalog.load_group("S4"))
    assert [N.order for N in Ns] == [1, 4, 12, 24]


@pytest.mark.parametrize("label", ["G(54,5)", "G(54,6)"])
def test_normal_subgroups_match_annotation(label):
    G = catalog.load_group(label)
    want = {catalog.subgroup(G, ws) for ws in catalog.entry(label).annotations["normal_subgroups"]}
    have = {N for N in all_normal_subgroups(G) if N.order > 1}
    assert have == want


def test_quotient_detection():
    G = catalog.load_group("G(64,199)")
    found = has_quotient_isomorphic_to(G, catalog.load_group("G(32,49)"))
    assert found is not None
    N, proj = found
    assert N.order == 2 and N.is_normal()
    assert has_quotient_isomorphic_to(catalog.load_group("G(64,249)"), catalog.load_group("G(32,49)")) is None


def test_abelian_normal_prime_index_witnesses():
    hits = 0
    for lab in catalog.labels():
        ann = catalog.entry(lab).annotations
        if "abelian_normal_witness" in ann:
            G = catalog.load_group(lab)
            assert abelian_normal_prime_index(G, catalog.subgroup(G, ann["abelian_normal_witness"]))
            hits += 1
    assert hits > 0


def test_isomorphic_product_annotation():
    G = catalog.load_group("G(64,264)")
    from ddks.group import direct_product

    a, b = catalog.entry("G(64,264)").annotations["isomorphic_to_product"]
    assert is_isomorphic(G, direct_product(catalog.load_group(a), catalog.load_group(b))) is not None
