import math

import pytest

from rackd.catalog import (AUT_FORMS, CatalogError, DataCorruptionError, GroupSpec,
                           ParameterError, ambient_pair, embedded_specs,
                           format_group_data, load_data_file, load_group,
                           metacyclic, multiplicative_order, parse_group_data,
                           spec_from_group)
from rackd.permcore import conjugacy_classes, derived_subgroup

EXPECTED = {"M11": (11, 7920), "M12": (12, 95040), "M22": (22, 443520),
            "M12.2": (24, 190080), "M22.2": (22, 887040), "J2": (100, 604800),
            "J2.2": (100, 1209600), "L2(11)<M11": (11, 660)}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_embedded_groups(name):
    G = load_group(name)
    assert (G.degree, G.order) == EXPECTED[name]


@pytest.mark.parametrize("name,order", [
    ("Sym(5)", 120), ("S4", 24), ("Alt(6)", 360), ("A5", 60), ("Dih(6)", 12),
    ("PSL(2,7)", 168), ("L2(11)", 660), ("PSL(2,17)", 2448), ("PGL(2,7)", 336),
    ("Z12", 12), ("Z29:Z14", 406), ("Z7:Z3[k=2]", 21)])
def test_families(name, order):
    assert load_group(name).order == order


def test_aut_forms_have_index_two_derived():
    for L, aut in AUT_FORMS.items():
        A = load_group(aut)
        D = derived_subgroup(A)
        assert A.order == 2 * D.order
        assert load_group(L).order == D.order
        G, amb = ambient_pair(L)
        assert G.order == D.order and amb is A


def test_unknown_group_lists_names():
    with pytest.raises(CatalogError, match="M11"):
        load_group("NoSuchGroup")


def test_metacyclic_parameters():
    assert multiplicative_order(4, 29) == 14
    assert multiplicative_order(2, 47) == 23
    with pytest.raises(ParameterError, match="not 3"):
        metacyclic(5, 3, 2)
    with pytest.raises(ParameterError):
        metacyclic(6, 2, 3)


@pytest.mark.parametrize("a,b,k", [(29, 14, 4), (47, 23, 2), (23, 11, 2), (7, 3, 2),
                                   (11, 5, 3), (7, 6, 3)])
def test_metacyclic_order_a_classes(a, b, k):
    G = metacyclic(a, b, k)
    assert G.order == a * b
    assert G.degree == a + b
    n = sum(1 for c in conjugacy_classes(G) if c.element_order == a)
    phi = sum(1 for i in range(1, a) if math.gcd(i, a) == 1)
    assert n == phi // b


def test_data_round_trip(tmp_path):
    specs = list(embedded_specs().values())
    text = format_group_data(specs)
    path = tmp_path / "groups.txt"
    path.write_text(text, encoding="utf-8")
    again = load_data_file(path)
    assert [again[s.name] for s in specs] == specs
    assert spec_from_group("M11", load_group("M11")).build().order == 7920


def test_checksum_mismatch():
    spec = GroupSpec("bad", 3, ("(1,2,3)",), 6)
    with pytest.raises(DataCorruptionError, match="order 3"):
        spec.build()
    with pytest.raises(DataCorruptionError):
        parse_group_data("name x\ndegree 3\ncolour red\n")
    with pytest.raises(DataCorruptionError):
        parse_group_data("name x\ngen (1,2)\n")


def test_identity_generator_record():
    spec = parse_group_data("name triv\ndegree 3\norder 1\ngen ()\n")["triv"]
    assert spec.build().order == 1
