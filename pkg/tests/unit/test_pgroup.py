import json

import numpy as np
import pytest

from app.exceptions import CyclicGroup, InvalidGroup, NotMaximal, UnknownGroup
from app.services.pgroup import PGroup, SubgroupOfP, catalog, load_group_file


@pytest.mark.parametrize(
    "name,order,p",
    [
        ("C2^2", 4, 2),
        ("C4xC2", 8, 2),
        ("D8", 8, 2),
        ("Q8", 8, 2),
        ("M16", 16, 2),
        ("C3^2", 9, 3),
        ("Heis3", 27, 3),
        ("C9xC3", 27, 3),
    ],
)
def test_catalog_orders(name, order, p):
    group = catalog(name)
    assert group.order == order
    assert group.p == p


def test_catalog_unknown_name():
    with pytest.raises(UnknownGroup):
        catalog("Foo")


def test_catalog_mixed_primes():
    with pytest.raises(UnknownGroup):
        catalog("C2xC3")


def test_catalog_not_p_group():
    with pytest.raises(UnknownGroup):
        catalog("C6")


def test_is_cyclic():
    assert catalog("C4").is_cyclic()
    assert not catalog("C2^2").is_cyclic()


def test_element_orders():
    """В Q8 одна инволюция, в D8 - пять"""
    assert int((catalog("Q8").element_orders == 2).sum()) == 1
    assert int((catalog("D8").element_orders == 2).sum()) == 5
    assert catalog("Heis3").exponent == 3
    assert catalog("M16").exponent == 8


def test_inverse_and_commutator():
    group = catalog("D8")
    for a in range(group.order):
        assert group.multiply(a, group.inverse(a)) == 0
    assert any(group.commutator(a, b) != 0 for a in range(8) for b in range(8))


def test_power():
    group = catalog("C4")
    assert group.power(1, 2) == 2
    assert group.power(1, 4) == 0
    assert group.power(1, -1) == 3


@pytest.mark.parametrize("name,classes", [("D8", 5), ("Q8", 5), ("Heis3", 11), ("C2^2", 4)])
def test_conjugacy_classes(name, classes):
    group = catalog(name)
    found = group.conjugacy_classes()
    assert len(found) == classes
    assert sum(len(c) for c in found) == group.order
    assert group.class_representatives()[0] == (0, 1)


@pytest.mark.parametrize("name,rank", [("C2^2", 2), ("Q8", 2), ("D8", 2), ("C4xC2", 2), ("Heis3", 2), ("C2^3", 3)])
def test_frattini_rank(name, rank):
    assert catalog(name).frattini_rank == rank


def test_frattini_of_q8_is_center():
    group = catalog("Q8")
    assert group.frattini().order == 2


@pytest.mark.parametrize("name", ["C2^2", "Q8", "D8", "C4xC2", "C3^2", "Heis3", "C9xC3", "C2^3"])
def test_maximal_cover(name):
    """p+1 подгрупп индекса p, объединение - вся группа"""
    group = catalog(name)
    cover = group.maximal_cover()
    assert len(cover) == group.p + 1
    assert all(sub.index == group.p for sub in cover)
    assert set().union(*(sub.members for sub in cover)) == set(range(group.order))
    assert len(set(cover)) == group.p + 1


def test_maximal_cover_cyclic():
    with pytest.raises(CyclicGroup):
        catalog("C8").maximal_cover()


def test_hom_to_cp_is_homomorphism():
    group = catalog("Heis3")
    for sub in group.maximal_cover():
        phi = group.hom_to_cp(sub)
        assert set(np.nonzero(phi == 0)[0].tolist()) == set(sub.members)
        for a in range(group.order):
            for b in range(group.order):
                assert phi[group.table[a, b]] == (phi[a] + phi[b]) % group.p


def test_hom_to_cp_not_maximal():
    group = catalog("C2^2")
    with pytest.raises(NotMaximal):
        group.hom_to_cp(group.subgroup_generated([]))


def test_subgroup_validation():
    with pytest.raises(InvalidGroup):
        SubgroupOfP(catalog("C4"), [0, 1, 2])


def test_centralizer_and_normality():
    group = catalog("D8")
    center = [x for x in range(group.order) if group.centralizer(x).order == group.order]
    assert len(center) == 2
    for sub in group.maximal_cover():
        assert group.is_normal(sub)


def test_cyclic_subgroups_sorted():
    subgroups = catalog("C2^2").cyclic_subgroups()
    assert [s.order for s in subgroups] == [1, 2, 2, 2]


def test_fingerprint_distinguishes_d8_and_q8():
    assert catalog("D8").fingerprint() != catalog("Q8").fingerprint()
    assert catalog("D8").fingerprint()["order"] == 8


def test_invalid_table_not_latin():
    with pytest.raises(InvalidGroup):
        PGroup(2, [[0, 1], [1, 1]])


def test_invalid_order():
    table = [[(i + j) % 6 for j in range(6)] for i in range(6)]
    with pytest.raises(InvalidGroup):
        PGroup(2, table)


def test_invalid_prime():
    with pytest.raises(InvalidGroup):
        PGroup(4, [[0, 1], [1, 0]])


def test_load_group_file(tmp_path):
    group = catalog("C2^2")
    path = tmp_path / "v4.json"
    path.write_text(json.dumps({"p": 2, "order": 4, "table": group.table.tolist(), "name": "V4"}))
    loaded = load_group_file(path)
    assert loaded.name == "V4"
    assert np.array_equal(loaded.table, group.table)


def test_load_group_file_order_mismatch(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"p": 2, "order": 8, "table": [[0, 1], [1, 0]]}))
    with pytest.raises(InvalidGroup):
        load_group_file(path)


def test_load_group_file_missing(tmp_path):
    with pytest.raises(InvalidGroup):
        load_group_file(tmp_path / "missing.json")
