import random

import pytest

from rackd.catalog import cyclic, load_group, metacyclic, symmetric
from rackd.permcore import conjugacy_class, conjugacy_classes, parse_cycles
from rackd.typed import (CONJUGATE, SQUARES_COMMUTE, Inapplicable, NotInvolutionsError,
                         PairCertificate, Rejection, breuer_reduction, check_pair,
                         classify_class, involution_criterion, revalidate,
                         split_classes, useful_lemma_search, verify_certificate)
from rackd.verdict import BREUER, EXHAUSTIVE, INVOLUTION, NOT_TYPE_D, TYPE_D, UNKNOWN

from oracles import class_is_type_d, is_witness


def classes_by_order(G, order):
    return [c for c in conjugacy_classes(G) if c.element_order == order]


def test_check_pair_rejections():
    r = parse_cycles("(1,2,3,4)", 6)
    assert check_pair(r, r) == Rejection(SQUARES_COMMUTE)
    s = parse_cycles("(5,6)", 6)
    assert check_pair(r, s).reason == SQUARES_COMMUTE


def test_check_pair_conjugate_and_certificate():
    # (1,2,3) and (3,4,5) generate A5, where they are conjugate
    r = parse_cycles("(1,2,3)", 5)
    res = check_pair(r, parse_cycles("(3,4,5)", 5))
    assert isinstance(res, Rejection) and res.reason == CONJUGATE
    C = conjugacy_class(symmetric(5), parse_cycles("(1,2,3,4)", 5))
    v = classify_class(symmetric(5), C, strategy="exhaustive")
    assert v.status == TYPE_D and verify_certificate(v.certificate)


def test_tampered_certificate_fails():
    C = conjugacy_class(symmetric(5), parse_cycles("(1,2,3,4)", 5))
    cert = classify_class(symmetric(5), C).certificate
    bad = PairCertificate(cert.r, cert.r, cert.square, cert.commutator, cert.orbit)
    assert not verify_certificate(bad)
    short = PairCertificate(cert.r, cert.s, cert.square, cert.commutator, cert.orbit[:1])
    assert not verify_certificate(short)


def test_m11_order_8_and_11_exhaustive():
    G = load_group("M11")
    for order in (8, 11):
        for c in classes_by_order(G, order):
            v = classify_class(G, c, strategy="exhaustive")
            assert v.status == NOT_TYPE_D and v.proof_method == EXHAUSTIVE


def test_involution_criterion_transpositions():
    S7 = symmetric(7)
    C = conjugacy_class(S7, parse_cycles("(1,2)", 7))
    v = involution_criterion(C)
    assert v.status == NOT_TYPE_D and v.proof_method == INVOLUTION
    assert set(v.details["spectrum"]) == {1, 2, 3}
    assert sum(v.details["spectrum"].values()) == 21
    with pytest.raises(NotInvolutionsError):
        involution_criterion(conjugacy_class(S7, parse_cycles("(1,2,3)", 7)))


def test_involution_criterion_matches_exhaustive_in_s12():
    S12 = symmetric(12)
    C = conjugacy_class(S12, parse_cycles("(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)", 12))
    a = involution_criterion(C)
    b = classify_class(S12, C, strategy="exhaustive")
    assert a.status == b.status == TYPE_D
    assert revalidate(a) and revalidate(b)


@pytest.mark.parametrize("name", ["M11", "PSL(2,11)", "Sym(7)", "PGL(2,7)"])
def test_involution_criterion_agrees_with_scan(name):
    G = load_group(name)
    for c in classes_by_order(G, 2):
        assert involution_criterion(c).status == \
            classify_class(G, c, strategy="exhaustive").status


@pytest.mark.parametrize("name", ["Sym(4)", "Alt(5)", "Dih(6)", "Z7:Z3", "Sym(5)"])
def test_classify_matches_brute_force(name):
    G = load_group(name)
    for c in conjugacy_classes(G):
        v = classify_class(G, c, strategy="exhaustive")
        expected = class_is_type_d(c.elements, G.identity)
        assert (v.status == TYPE_D) == expected, c.label


def test_equivariance_on_random_conjugates():
    rng = random.Random(7)
    groups = [load_group("M11"), load_group("PSL(2,11)"), symmetric(6)]
    for k in range(100):
        G = groups[k % len(groups)]
        c = conjugacy_classes(G)[1 + rng.randrange(len(conjugacy_classes(G)) - 1)]
        r = c.representative
        s = c.elements[rng.randrange(c.size)]
        g = G.random_element(rng)
        gi = g.inverse()
        a = isinstance(check_pair(r, s), PairCertificate)
        b = isinstance(check_pair(gi * r * g, gi * s * g), PairCertificate)
        assert a == b == is_witness(r, s, G.identity)


def test_worker_count_does_not_change_witness():
    G = load_group("M11")
    for c in conjugacy_classes(G):
        if c.element_order not in (4, 6):
            continue
        one = classify_class(G, c, strategy="exhaustive", workers=1)
        two = classify_class(G, c, strategy="exhaustive", workers=2)
        assert one.status == two.status == TYPE_D
        assert (one.certificate.r, one.certificate.s) == (two.certificate.r, two.certificate.s)
        assert one.budget_spent["witness_index"] == two.budget_spent["witness_index"]


def test_same_seed_same_verdict():
    G = load_group("M12")
    c = classes_by_order(G, 10)[0]
    a = classify_class(G, c, strategy="random", budget=200, seed=4)
    b = classify_class(G, c, strategy="random", budget=200, seed=4)
    assert a.status == b.status == TYPE_D
    assert (a.certificate.r, a.certificate.s) == (b.certificate.r, b.certificate.s)


def test_random_search_never_proves_negative():
    G = load_group("M11")
    for c in classes_by_order(G, 11):
        v = classify_class(G, c, strategy="random", budget=50)
        assert v.status == UNKNOWN


def test_budget_limits():
    G = load_group("M11")
    c = classes_by_order(G, 11)[0]
    v = classify_class(G, c, strategy="exhaustive", budget=10)
    assert v.status == UNKNOWN
    auto = classify_class(G, c, strategy="auto", budget=10)
    assert auto.status == UNKNOWN
    with pytest.raises(ValueError):
        classify_class(G, c, strategy="guess")


def test_orbit_cap_gives_unknown():
    G = load_group("M11")
    c = classes_by_order(G, 11)[0]
    v = classify_class(G, c, strategy="exhaustive", orbit_cap=5)
    assert v.status == UNKNOWN


def test_singleton_class():
    Z5 = cyclic(5)
    c = conjugacy_classes(Z5)[1]
    assert classify_class(Z5, c).status == NOT_TYPE_D


def test_useful_lemma_s5_five_cycles():
    S5 = symmetric(5)
    A5 = load_group("Alt(5)")
    O = conjugacy_class(S5, parse_cycles("(1,2,3,4,5)", 5))
    parts = split_classes(A5, O)
    assert sorted(p.size for p in parts) == [12, 12]
    found = useful_lemma_search(S5, O, A5)
    expected = any(is_witness(r, s, S5.identity)
                   for r in parts[0].elements for s in parts[1].elements)
    assert (found is not None) == expected
    if found is not None:
        assert verify_certificate(found)


def test_useful_lemma_abelian_and_errors():
    Z6 = cyclic(6)
    O = conjugacy_classes(Z6)[-1]
    assert useful_lemma_search(Z6, O, Z6) is None
    with pytest.raises(ValueError):
        useful_lemma_search(Z6, O, symmetric(6))


def test_breuer_m11_order_11():
    G = load_group("M11")
    M = load_group("L2(11)<M11")
    for c in classes_by_order(G, 11):
        v = breuer_reduction(G, c, [M], completeness_attested=True)
        assert v.status == NOT_TYPE_D and v.proof_method == BREUER
        assert v.details["maximality_attested"] is True
        direct = classify_class(G, c, strategy="exhaustive")
        assert direct.status == NOT_TYPE_D


def test_breuer_inapplicable():
    S5 = symmetric(5)
    O = conjugacy_class(S5, parse_cycles("(1,2,3,4,5)", 5))
    res = breuer_reduction(S5, O, [load_group("Alt(5)")], completeness_attested=True)
    assert isinstance(res, Inapplicable) and res.subgroup == 0
    res = breuer_reduction(S5, O, [load_group("Alt(5)")], completeness_attested=False)
    assert isinstance(res, Inapplicable)
    with pytest.raises(ValueError):
        breuer_reduction(S5, O, [symmetric(4)], completeness_attested=True)


def test_metacyclic_leaves():
    G = metacyclic(29, 14, 4)
    leaves = classes_by_order(G, 29)
    assert len(leaves) == 2
    for c in leaves:
        assert classify_class(G, c).status == NOT_TYPE_D


def test_revalidate():
    S5 = symmetric(5)
    C = conjugacy_class(S5, parse_cycles("(1,2,3,4)", 5))
    v = classify_class(S5, C)
    assert revalidate(v)
    v.certificate.s = v.certificate.r
    assert not revalidate(v)
