"""Twisted conjugacy classes and their semidirect-product realization.

An automorphism u of G is always given by a conjugator w from an ambient
group A normalizing G, with u(g) = w g w^-1. G acts on itself by
y . x = y x u(y^-1); the orbit of x is a rack under y <| z = y u(z y^-1),
and it sits inside G x| <u> as the conjugacy class of (x, u).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .permcore import (DEFAULT_ENUMERATION_CAP, ClassEnumerationError,
                       ConjugacyClass, PermGroup, Permutation,
                       conjugacy_classes, conjugation_orbit, derived_subgroup)
from .racks import FiniteRack, rack_from_table

import numpy as np

RACK_TABLE_LIMIT = 1024


class NormalizationError(ValueError):
    pass


class Automorphism:
    """g -> w g w^-1 restricted to G."""

    def __init__(self, group: PermGroup, ambient: PermGroup, conjugator: Permutation):
        self.group = group
        self.ambient = ambient
        self.conjugator = conjugator
        self._winv = conjugator.inverse()
        self.aut_order = self._map_order()
        self.is_outer = self._outer_flag()

    def __call__(self, g: Permutation) -> Permutation:
        return self.conjugator * g * self._winv

    def power(self, k: int, g: Permutation) -> Permutation:
        k %= self.aut_order
        for _ in range(k):
            g = self(g)
        return g

    def _map_order(self) -> int:
        gens = [g for g in self.group.generators if not g.is_identity()]
        images = list(gens)
        m = 1
        while True:
            images = [self(g) for g in images]
            if images == gens:
                return m
            m += 1

    def _outer_flag(self) -> bool | None:
        if self.group.contains(self.conjugator):
            return False
        # only decidable in the Aut(L) = L.2 setting
        A, G = self.ambient, self.group
        if A.order == 2 * G.order and derived_subgroup(A).order == G.order \
                and G.is_subgroup_of(derived_subgroup(A)):
            return True
        return None

    def __repr__(self) -> str:
        return (f"Automorphism(conjugator={self.conjugator}, "
                f"order={self.aut_order}, outer={self.is_outer})")


def automorphism_from_conjugator(G: PermGroup, A: PermGroup,
                                 w: Permutation) -> Automorphism:
    if w.degree != G.degree or A.degree != G.degree:
        raise NormalizationError("degree mismatch between G, A and the conjugator")
    if not A.contains(w):
        raise NormalizationError(f"conjugator {w} is not in the ambient group")
    winv = w.inverse()
    for g in G.generators:
        image = w * g * winv
        if not G.contains(image):
            raise NormalizationError(
                f"conjugator {w} does not normalize G: generator {g} maps to "
                f"{image}, which is not in G")
    return Automorphism(G, A, w)


# -- semidirect product -----------------------------------------------------

class SemidirectElement:
    """(g, t) in G x| <u>, multiplied as (g,a)(h,b) = (g u^a(h), a+b)."""

    __slots__ = ("g", "t", "product")

    def __init__(self, g: Permutation, t: int, product: "SemidirectProduct"):
        self.g = g
        self.t = t % product.aut_order
        self.product = product

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        P = self.product
        return SemidirectElement(self.g * P.act(self.t, other.g), self.t + other.t, P)

    def inverse(self) -> "SemidirectElement":
        P = self.product
        return SemidirectElement(P.act(-self.t, self.g.inverse()), -self.t, P)

    def __pow__(self, k: int) -> "SemidirectElement":
        base = self if k >= 0 else self.inverse()
        out, k = self.product.identity, abs(k)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return self.t == 0 and self.g.is_identity()

    def order(self) -> int:
        x, k = self, 1
        while not x.is_identity():
            x = x * self
            k += 1
        return k

    def __eq__(self, other) -> bool:
        return (isinstance(other, SemidirectElement) and self.t == other.t
                and self.g == other.g)

    def __hash__(self) -> int:
        return hash((self.g, self.t))

    def __str__(self) -> str:
        return f"({self.g}, u^{self.t})"

    __repr__ = __str__


class SemidirectProduct:
    """G x| <u> as pairs; plugs into the generic class machinery."""

    def __init__(self, group: PermGroup, aut: Automorphism):
        self.group = group
        self.aut = aut
        self.aut_order = aut.aut_order
        m = self.aut_order
        w = aut.conjugator
        self._wpow = [w ** k for k in range(m)]
        self._wpow_inv = [p.inverse() for p in self._wpow]
        self.order = group.order * m
        self.identity = SemidirectElement(group.identity, 0, self)
        self.generators = tuple(
            [SemidirectElement(g, 0, self) for g in group.generators]
            + ([SemidirectElement(group.identity, 1, self)] if m > 1 else []))
        self.name = f"{group.name or 'G'}:<u>"

    def act(self, k: int, g: Permutation) -> Permutation:
        k %= self.aut_order
        if k == 0:
            return g
        return self._wpow[k] * g * self._wpow_inv[k]

    def element(self, g: Permutation, t: int = 0) -> SemidirectElement:
        return SemidirectElement(g, t, self)

    def random_element(self, rng: random.Random) -> SemidirectElement:
        return SemidirectElement(self.group.random_element(rng),
                                 rng.randrange(self.aut_order), self)

    def contains(self, x: SemidirectElement) -> bool:
        return x.product is self and self.group.contains(x.g)

    __contains__ = contains

    def __repr__(self) -> str:
        return f"<SemidirectProduct {self.name} order={self.order}>"


def semidirect_product(G: PermGroup, u: Automorphism) -> SemidirectProduct:
    return SemidirectProduct(G, u)


# -- twisted classes --------------------------------------------------------

def twisted_action(u: Automorphism, y: Permutation, x: Permutation) -> Permutation:
    """y . x = y x u(y^-1)."""
    return y * x * u(y.inverse())


def twisted_op(u: Automorphism, y: Permutation, z: Permutation) -> Permutation:
    """y <| z = y u(z y^-1)."""
    return y * u(z * y.inverse())


@dataclass(eq=False)
class TwistedClass:
    group: PermGroup
    aut: Automorphism
    representative: Permutation
    elements: list
    rack: FiniteRack | None = None
    _index: dict = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self) -> dict:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return self._index

    def rack_checksum(self) -> str | None:
        return self.rack.checksum() if self.rack is not None else None

    def report(self) -> dict:
        return {"representative": str(self.representative),
                "conjugator": str(self.aut.conjugator),
                "aut_order": self.aut.aut_order,
                "outer": self.aut.is_outer,
                "orbit_size": self.size,
                "rack_checksum": self.rack_checksum()}


def twisted_class(G: PermGroup, u: Automorphism, x: Permutation,
                  cap: int = DEFAULT_ENUMERATION_CAP,
                  table_limit: int = RACK_TABLE_LIMIT) -> TwistedClass:
    """BFS orbit of x under the u-twisted action, with its rack table when
    the orbit has at most ``table_limit`` elements."""
    if not G.contains(x):
        raise ValueError(f"{x} is not in G")
    steps = [(y, u(y.inverse())) for y in G.generators]
    seen = {x}
    out = [x]
    i = 0
    while i < len(out):
        z = out[i]
        i += 1
        for y, uyinv in steps:
            nz = y * z * uyinv
            if nz not in seen:
                if len(out) >= cap:
                    raise ClassEnumerationError(x, cap)
                seen.add(nz)
                out.append(nz)
    tc = TwistedClass(G, u, x, out)
    if len(out) <= table_limit:
        idx = tc.index()
        n = len(out)
        T = np.empty((n, n), dtype=np.int64)
        w, winv = u.conjugator, u._winv
        for a, y in enumerate(out):
            yinv = y.inverse()
            for b, z in enumerate(out):
                T[a, b] = idx[y * w * z * yinv * winv]
        tc.rack = rack_from_table(T, labels=list(out))
    return tc


@dataclass
class CorrespondenceReport:
    holds: bool
    semidirect_size: int
    twisted_size: int
    tables_compared: bool
    mismatches: list = field(default_factory=list)


def verify_class_correspondence(G: PermGroup, u: Automorphism, x: Permutation,
                                cap: int = DEFAULT_ENUMERATION_CAP,
                                table_limit: int = RACK_TABLE_LIMIT) -> CorrespondenceReport:
    """Compare the class of (x, u) in G x| <u> with the twisted class of x,
    as sets and, for orbits up to ``table_limit``, as racks entry by entry."""
    P = SemidirectProduct(G, u)
    start = P.element(x, 1)
    left, _ = conjugation_orbit(start, P.generators, cap)
    right = twisted_class(G, u, x, cap, table_limit)
    mismatches = []
    for e in left:
        if e.t != start.t:
            mismatches.append(f"{e} lies outside G x {{u}}")
            break
    left_g = {e.g for e in left}
    right_g = set(right.elements)
    if left_g != right_g:
        extra = next(iter(left_g - right_g), None)
        missing = next(iter(right_g - left_g), None)
        mismatches.append(f"sets differ: semidirect-only {extra}, twisted-only {missing}")
    compared = False
    if not mismatches and right.rack is not None:
        compared = True
        T = right.rack.table
        idx = right.index()
        lifted = [P.element(y, 1) for y in right.elements]
        for a, ya in enumerate(lifted):
            yinv = ya.inverse()
            for b, yb in enumerate(lifted):
                prod = ya * yb * yinv
                if prod.t != start.t or idx.get(prod.g) != T[a, b]:
                    mismatches.append(
                        f"rack entry ({a},{b}): conjugation gives {prod}, "
                        f"twisted table gives {right.elements[T[a, b]]}")
                    break
            if mismatches:
                break
    return CorrespondenceReport(not mismatches, len(left), right.size, compared, mismatches)


def outer_classes(A: PermGroup, enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                  seed: int = 0) -> list[ConjugacyClass]:
    """Classes of A outside its derived subgroup, which must have index 2.

    Labels follow the ATLAS convention for L.2: inner classes first within
    each element order, outer classes continuing the letters.
    """
    D = derived_subgroup(A)
    if A.order != 2 * D.order:
        raise ValueError(
            f"derived subgroup has index {A.order // D.order}, expected 2")
    classes = conjugacy_classes(A, enumeration_cap, seed,
                                outer_test=lambda g: not D.contains(g))
    return [c for c in classes if not D.contains(c.representative)]
