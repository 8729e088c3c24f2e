import pytest

from ddks import catalog
from ddks.automorphisms import automorphism_group
from ddks.classify import check_cct_witness, mon
from ddks.group import center, derived_subgroup


def test_manifest_shape():
    m = catalog.manifest()
    assert m["format"] == 1
    assert len(catalog.labels()) == len(m["groups"]) >= 130
    for lab, d in m["groups"].items():
        assert d["file"].startswith("groups/") and d["order"] > 0
        assert "source" in d.get("annotations", {}) or d["order"] < 36


def test_aliases_and_errors():
    assert catalog.resolve("S3xS3") == "G(36,10)"
    assert catalog.resolve("A5") == "G(60,5)"
    with pytest.raises(catalog.CatalogError):
        catalog.load_group("G(99,1)")
    with pytest.raises(catalog.CatalogError, match="external input required"):
        catalog.resolve("G(64,18)")


@pytest.mark.parametrize("label,order", [("G(36,10)", 36), ("G(64,249)", 64), ("A5", 60)])
def test_load(label, order):
    G = catalog.load_group(label)
    assert G.order == order and G.label == catalog.resolve(label)


def test_annotations_hold():
    checked = 0
    for lab in catalog.labels():
        ann = catalog.entry(lab).annotations
        if not ann:
            continue
        G = catalog.load_group(lab)
        if "non_cct_witness" in ann:
            assert check_cct_witness(G, tuple(catalog.element(G, w) for w in ann["non_cct_witness"]))
        if "center_order" in ann:
            assert center(G).order == ann["center_order"]
        if "derived_order" in ann:
            assert derived_subgroup(G).order == ann["derived_order"]
        if "center_words" in ann:
            assert catalog.subgroup(G, ann["center_words"]) <= center(G)
        if "derived_words" in ann:
            assert catalog.subgroup(G, ann["derived_words"]) == derived_subgroup(G)
        if "mon_words" in ann:
            assert mon(G).mon == catalog.subgroup(G, ann["mon_words"])
        if "monolithic" in ann and G.order <= 64:
            assert mon(G).is_monolithic == ann["monolithic"]
        if "aut_order" in ann and ann["aut_order"] <= 4096:
            assert len(automorphism_group(G)) == ann["aut_order"]
        checked += 1
    assert checked > 100


def test_user_file(tmp_path):
    f = tmp_path / "two.grp"
    f.write_text('group "a" { gens x; rel x^3 = 1; }\ngroup "b" { gens x, y; rel x^2 = y^2 = [x, y] = 1; }\n')
    assert catalog.load_group_file(f).order == 3
    assert catalog.load_group_file(f, "b").order == 4
    with pytest.raises(catalog.CatalogError):
        catalog.load_group_file(f, "c")


def test_element_words():
    G = catalog.load_group("G(64,199)")
    x1 = catalog.element(G, "x1")
    assert G.mul(x1, x1) == catalog.element(G, "x6")
    assert catalog.element(G, "[x1, x2]") == catalog.element(G, "x5")
