"""Regenerate the embedded generator records in src/rackd/data/groups.txt.

Run once by hand; the output is committed. Needs ``pynauty`` for the
Hall-Janko graph step, which the package itself never imports.

* M12:2 on 24 points: stabilizer in M24 of a dodecad/complement pair.
* M22:2 on 22 points: stabilizer in M24 of a 2-set, restricted to the rest.
* J2:2 on 100 points: automorphism group of the Hall-Janko graph, built
  along the Suzuki chain L3(2) < U3(3) < J2.
"""

import itertools
import random
import sys

import pynauty

from rackd.permcore import (PermGroup, Permutation, conjugacy_classes,
                            derived_subgroup, format_cycles, parse_cycles)

M24_GENS = [
    "(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
    "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
    "(1,24)(2,23)(3,12)(4,16)(5,18)(6,10)(7,20)(8,14)(9,21)(11,17)(13,22)(15,19)",
]


def orbit_with_transversal(G, start, act):
    trans = {start: G.identity}
    order = [start]
    for o in order:
        for g in G.generators:
            o2 = act(o, g)
            if o2 not in trans:
                trans[o2] = trans[o] * g
                order.append(o2)
    return order, trans


def stabilizer(G, start, act, target, rng, batch=4):
    """Random Schreier generators until the stabilizer reaches ``target``."""
    orbit, trans = orbit_with_transversal(G, start, act)
    assert G.order % len(orbit) == 0 and G.order // len(orbit) == target
    gens = []
    while True:
        for _ in range(batch):
            o = orbit[rng.randrange(len(orbit))]
            g = G.generators[rng.randrange(len(G.generators))]
            h = trans[o] * g * trans[act(o, g)].inverse()
            assert act(start, h) == start
            if not h.is_identity():
                gens.append(h)
        H = PermGroup(G.degree, gens)
        if H.order == target:
            return H
        if H.order > target:
            raise AssertionError("stabilizer overshoot")


def shrink(G, rng, tries=200):
    """Two random elements generating G (fewer lines in the data file)."""
    for _ in range(tries):
        a, b = G.random_element(rng), G.random_element(rng)
        if PermGroup(G.degree, [a, b]).order == G.order:
            return [a, b]
    return list(G.generators)


def golay_dodecad(M24, rng):
    while True:
        g = M24.random_element(rng)
        m = g.order()
        if m % 2:
            continue
        inv = g ** (m // 2)
        fixed = [i for i in range(24) if inv(i) == i]
        if len(fixed) == 8:
            break
    octad = sum(1 << i for i in fixed)
    words, frontier = {octad}, [octad]
    while frontier:
        w = frontier.pop()
        for h in M24.generators:
            w2 = sum(1 << h(i) for i in range(24) if w >> i & 1)
            if w2 not in words:
                words.add(w2)
                frontier.append(w2)
    basis = []
    for w in words:
        for b in basis:
            w = min(w, w ^ b)
        if w:
            basis.append(w)
    assert len(basis) == 12, len(basis)
    for r in range(1, 1 << 12):
        c = 0
        for i, b in enumerate(basis):
            if r >> i & 1:
                c ^= b
        if bin(c).count("1") == 12:
            return frozenset(i for i in range(24) if c >> i & 1)


def act_set(s, g):
    return frozenset(g(i) for i in s)


def build_m12_2(rng):
    M24 = PermGroup(24, [parse_cycles(s, 24) for s in M24_GENS])
    D = golay_dodecad(M24, rng)
    Dc = frozenset(range(24)) - D
    pair = frozenset([D, Dc])
    act = lambda p, g: frozenset(act_set(s, g) for s in p)
    H = stabilizer(M24, pair, act, 190080, rng)
    return PermGroup(24, shrink(H, rng))


def build_m22_2(rng):
    M24 = PermGroup(24, [parse_cycles(s, 24) for s in M24_GENS])
    H = stabilizer(M24, frozenset([22, 23]), act_set, 887040, rng)
    rest = list(range(22))
    gens = [Permutation([g(i) for i in rest]) for g in shrink(H, rng)]
    return PermGroup(22, gens)


def graph_automorphisms(n, adj):
    g = pynauty.Graph(n, adjacency_dict={i: sorted(adj[i]) for i in range(n)})
    gens, grpsize1, grpsize2, _, _ = pynauty.autgrp(g)
    order = round(grpsize1 * 10 ** grpsize2)
    return PermGroup(n, [Permutation(p) for p in gens]), order


def srg_parameters(adj):
    n = len(adj)
    k = {len(a) for a in adj}
    lam, mu = set(), set()
    for i, j in itertools.combinations(range(n), 2):
        common = len(adj[i] & adj[j])
        (lam if j in adj[i] else mu).add(common)
    return n, k, lam, mu


def suzuki_step(G, base_adj, inv_orders):
    """Next graph of the chain: {inf} + old vertices + involutions of G."""
    n0 = len(base_adj)
    invs = sorted({x for x in _involutions(G)})
    n = 1 + n0 + len(invs)
    adj = [set() for _ in range(n)]

    def link(a, b):
        adj[a].add(b)
        adj[b].add(a)

    for v in range(n0):
        link(0, 1 + v)
        for w in base_adj[v]:
            link(1 + v, 1 + w)
    for k, t in enumerate(invs):
        for v in range(n0):
            if t(v) == v:
                link(1 + v, 1 + n0 + k)
        for l in range(k + 1, len(invs)):
            if (t * invs[l]).order() in inv_orders:
                link(1 + n0 + k, 1 + n0 + l)
    return adj


def _involutions(G):
    for c in conjugacy_classes(G):
        if c.element_order == 2:
            yield from c.elements


def fano_group():
    lines = [frozenset({i, (i + 1) % 7, (i + 3) % 7}) for i in range(7)]
    # collineations of the Fano plane via nauty on its incidence graph
    adj = [set() for _ in range(14)]
    for li, L in enumerate(lines):
        for p in L:
            adj[p].add(7 + li)
            adj[7 + li].add(p)
    A, order = graph_automorphisms(14, adj)
    assert order == 336  # PGL(2,7) = L3(2):2 incl. dualities
    L3 = derived_subgroup(A)
    assert L3.order == 168
    nonincidence = [set(range(7, 14)) - adj[p] if p < 7 else set(range(7)) - adj[p]
                    for p in range(14)]
    return L3, nonincidence


def build_j2_2():
    L3, nonincidence = fano_group()
    for orders in _order_sets():
        adj36 = suzuki_step(L3, nonincidence, orders)
        n, k, lam, mu = srg_parameters(adj36)
        if (n, k, lam, mu) == (36, {14}, {4}, {6}):
            break
    else:
        raise AssertionError("no U3(3) graph found")
    print("U3(3) graph rule: involution products of order", orders, file=sys.stderr)
    A36, order = graph_automorphisms(36, adj36)
    assert order == 12096, order
    U33 = derived_subgroup(A36)
    assert U33.order == 6048
    for orders in _order_sets():
        adj100 = suzuki_step(U33, [adj36[i] for i in range(36)], orders)
        if srg_parameters(adj100) == (100, {36}, {14}, {12}):
            break
    else:
        raise AssertionError("no Hall-Janko graph found")
    print("J2 graph rule: involution products of order", orders, file=sys.stderr)
    A100, order = graph_automorphisms(100, adj100)
    assert order == 1209600, order
    return A100


def _order_sets():
    pool = [2, 3, 4, 6, 7, 8, 12]
    for r in range(1, 4):
        for combo in itertools.combinations(pool, r):
            yield set(combo)


def find_subgroup(G, target_order, first_order, rng, tries=20000):
    """Random pair (x, y), x of the given order, generating a subgroup of target order."""
    for _ in range(tries):
        x = G.random_element(rng)
        if x.order() != first_order:
            continue
        y = G.random_element(rng)
        H = PermGroup(G.degree, [x, y])
        if H.order == target_order:
            return H
    raise AssertionError("subgroup not found")


def record(name, G):
    lines = [f"name {name}", f"degree {G.degree}", f"order {G.order}"]
    lines += [f"gen {format_cycles(g)}" for g in G.generators]
    return "\n".join(lines)


def main():
    rng = random.Random(20100825)
    out = []
    M12_2 = build_m12_2(rng)
    assert derived_subgroup(M12_2).order == 95040
    out.append(record("M12.2", M12_2))
    M22_2 = build_m22_2(rng)
    assert derived_subgroup(M22_2).order == 443520
    out.append(record("M22.2", M22_2))
    J2_2 = build_j2_2()
    J2_2 = PermGroup(100, shrink(J2_2, rng))
    out.append(record("J2.2", J2_2))
    J2 = derived_subgroup(J2_2)
    assert J2.order == 604800
    out.append(record("J2", PermGroup(100, shrink(J2, rng))))
    M11 = PermGroup(11, [parse_cycles("(1,2,3,4,5,6,7,8,9,10,11)", 11),
                         parse_cycles("(3,7,11,8)(4,10,5,6)", 11)])
    L211 = find_subgroup(M11, 660, 11, rng)
    out.append(record("L2(11)<M11", L211))
    print("\n\n".join(out))


if __name__ == "__main__":
    main()
