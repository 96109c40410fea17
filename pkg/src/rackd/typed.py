"""Type-D decisions for conjugacy classes of finite groups.

A class is of type D when it holds r, s with (rs)^2 != (sr)^2 and r, s not
conjugate in <r, s>. Verdicts are proofs: TypeD carries a witness pair that
``verify_certificate`` re-checks from scratch, and NotTypeD is only returned
after an exhaustive scan, a complete involution product-order spectrum, or a
finished subgroup reduction. Random search can only ever find TypeD.

All scans fix r to the class representative. Simultaneous conjugation maps
witness pairs to witness pairs, so every pair is conjugate to one with r in
that position and nothing is lost. Conjugating by powers of r also fixes r,
so each s is only tried once per <r>-orbit.
"""

from __future__ import annotations

import logging
import multiprocessing
import random
from collections import Counter
from dataclasses import dataclass, field

from .permcore import (ClassEnumerationError, ConjugacyClass, conjugacy_classes,
                       conjugation_orbit)
from .verdict import (BREUER, EXHAUSTIVE, INVOLUTION, NOT_TYPE_D, TYPE_D,
                      UNKNOWN, TypeDVerdict)

log = logging.getLogger(__name__)

DEFAULT_ORBIT_CAP = 2_000_000
DEFAULT_BUDGET = 100_000

SQUARES_COMMUTE = "squares-commute"
CONJUGATE = "conjugate-in-subgroup"
ORBIT_CAP = "inconclusive (orbit cap)"


@dataclass(frozen=True)
class Rejection:
    reason: str
    orbit_size: int = 0


@dataclass(eq=False)
class PairCertificate:
    r: object
    s: object
    square: object          # (rs)^2
    commutator: object      # [(rs)^2, r], not the identity
    orbit: tuple            # conjugates of r under <r, s>
    orbit_complete: bool = True

    @property
    def orbit_size(self) -> int:
        return len(self.orbit)


def _is_identity(x) -> bool:
    return x == x * x


def squares_commute(r, s) -> bool:
    """(rs)^2 == (sr)^2, equivalently (rs)^2 commutes with r."""
    rs = r * s
    sr = s * r
    return rs * rs == sr * sr


def check_pair(r, s, orbit_cap: int = DEFAULT_ORBIT_CAP):
    """PairCertificate for (r, s), or a Rejection saying why not."""
    if squares_commute(r, s):
        return Rejection(SQUARES_COMMUTE)
    try:
        orbit, found = conjugation_orbit(r, [r, s], orbit_cap, stop=s)
    except ClassEnumerationError:
        return Rejection(ORBIT_CAP, orbit_cap)
    if found:
        return Rejection(CONJUGATE, len(orbit))
    rs = r * s
    square = rs * rs
    comm = square.inverse() * r.inverse() * square * r
    return PairCertificate(r, s, square, comm, tuple(orbit), True)


def verify_certificate(cert: PairCertificate) -> bool:
    """Independent re-check: recompute the squares and the commutator, and
    confirm the stored orbit holds r, misses s, and is closed under
    conjugation by r and s (so it contains the whole <r,s>-orbit of r)."""
    r, s = cert.r, cert.s
    rs, sr = r * s, s * r
    if rs * rs == sr * sr:
        return False
    sq = rs * rs
    if _is_identity(sq.inverse() * r.inverse() * sq * r):
        return False
    members = set(cert.orbit)
    if r not in members or s in members or not cert.orbit_complete:
        return False
    for g in (r, s):
        ginv = g.inverse()
        for x in members:
            if g * x * ginv not in members:
                return False
    return True


def _power_orbit(r, s):
    out = [s]
    rinv = r.inverse()
    x = s
    while True:
        x = r * x * rinv
        if x == s:
            return out
        out.append(x)


def _scan(r, candidates, orbit_cap, budget=None):
    """Scan candidates in order; first certificate wins.

    Returns (index, certificate | None, counters).
    """
    done = set()
    counters = Counter()
    for i, s in enumerate(candidates):
        if s in done:
            continue
        if budget is not None and counters["pairs"] >= budget:
            counters["budget_exhausted"] = 1
            return None, None, counters
        done.update(_power_orbit(r, s))
        counters["pairs"] += 1
        res = check_pair(r, s, orbit_cap)
        if isinstance(res, PairCertificate):
            return i, res, counters
        counters[res.reason] += 1
        counters["orbit_elements"] += res.orbit_size
    return None, None, counters


_WORK = {}


def _scan_chunk(args):
    lo, hi, orbit_cap = args
    r, elements = _WORK["r"], _WORK["elements"]
    i, cert, counters = _scan(r, elements[lo:hi], orbit_cap)
    return (None if i is None else lo + i), cert, dict(counters)


def _scan_parallel(r, elements, orbit_cap, workers):
    n = len(elements)
    bounds = [(n * k // workers, n * (k + 1) // workers, orbit_cap)
              for k in range(workers)]
    _WORK["r"], _WORK["elements"] = r, elements
    try:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers) as pool:
            results = pool.map(_scan_chunk, bounds)
    finally:
        _WORK.clear()
    counters = Counter()
    best = (None, None)
    for i, cert, c in results:
        counters.update(c)
        if i is not None and (best[0] is None or i < best[0]):
            best = (i, cert)
    return best[0], best[1], counters


def exhaustive_scan(C: ConjugacyClass, orbit_cap: int = DEFAULT_ORBIT_CAP,
                    budget: int | None = None, workers: int = 1) -> TypeDVerdict:
    r = C.representative
    if workers > 1 and budget is None:
        i, cert, counters = _scan_parallel(r, C.elements, orbit_cap, workers)
    else:
        i, cert, counters = _scan(r, C.elements, orbit_cap, budget)
    spent = dict(sorted(counters.items()))
    if cert is not None:
        spent["witness_index"] = i
        return TypeDVerdict.type_d(cert, budget_spent=spent)
    if counters.get("budget_exhausted"):
        return TypeDVerdict.unknown(budget_spent=spent,
                                    details={"reason": "pair budget exhausted"})
    if counters.get(ORBIT_CAP):
        return TypeDVerdict.unknown(budget_spent=spent,
                                    details={"reason": "orbit cap reached"})
    return TypeDVerdict.not_type_d(EXHAUSTIVE, budget_spent=spent)


def random_search(G, C: ConjugacyClass, budget: int, seed: int = 0,
                  orbit_cap: int = DEFAULT_ORBIT_CAP) -> TypeDVerdict:
    """Seeded random partners s; TypeD or Unknown, never NotTypeD."""
    rng = random.Random(seed)
    r = C.representative
    counters = Counter()
    for _ in range(budget):
        if C.elements is not None:
            s = C.elements[rng.randrange(len(C.elements))]
        else:
            g = G.random_element(rng)
            s = g.inverse() * r * g
        counters["pairs"] += 1
        res = check_pair(r, s, orbit_cap)
        if isinstance(res, PairCertificate):
            return TypeDVerdict.type_d(res, budget_spent=dict(counters))
        counters[res.reason] += 1
    return TypeDVerdict.unknown(budget_spent=dict(sorted(counters.items())),
                                details={"reason": "random search found no witness"})


class NotInvolutionsError(ValueError):
    pass


def involution_criterion(C: ConjugacyClass,
                         orbit_cap: int = DEFAULT_ORBIT_CAP) -> TypeDVerdict:
    """Classes of involutions: type D iff some |rs| is even and at least 6.

    <r, s> is dihedral of order 2|rs|; there (rs)^2 != (sr)^2 iff |rs| does
    not divide 4, and r, s are non-conjugate iff |rs| is even.
    """
    if C.element_order != 2:
        raise NotInvolutionsError(f"class {C.label or C.representative} is not "
                                  f"a class of involutions")
    r = C.representative
    spectrum = Counter()
    first = None
    for i, s in enumerate(C.elements):
        m = (r * s).order()
        spectrum[m] += 1
        if first is None and m % 2 == 0 and m >= 6:
            first = i
    spent = {"pairs": len(C.elements)}
    details = {"spectrum": dict(sorted(spectrum.items()))}
    if first is None:
        return TypeDVerdict.not_type_d(INVOLUTION, budget_spent=spent, details=details)
    res = check_pair(r, C.elements[first], orbit_cap)
    if not isinstance(res, PairCertificate):
        if res.reason == ORBIT_CAP:
            return TypeDVerdict.unknown(budget_spent=spent, details=details)
        raise AssertionError(f"dihedral pair rejected: {res}")
    spent["witness_index"] = first
    return TypeDVerdict.type_d(res, budget_spent=spent, details=details)


def classify_class(G, C: ConjugacyClass, strategy: str = "auto",
                   budget: int = DEFAULT_BUDGET, seed: int = 0,
                   orbit_cap: int = DEFAULT_ORBIT_CAP, workers: int = 1) -> TypeDVerdict:
    """Decide whether the class C of G is of type D.

    Strategies: ``exhaustive`` scans every partner of the representative;
    ``random`` tries ``budget`` seeded partners; ``involution`` applies the
    product-order criterion; ``auto`` takes the involution path for classes
    of involutions, then exhaustive if the class has at most ``budget``
    elements, else random.
    """
    if C.size == 1:
        # a singleton class only pairs r with itself
        return TypeDVerdict.not_type_d(EXHAUSTIVE, budget_spent={"pairs": 1})
    if strategy == "auto":
        if C.element_order == 2:
            strategy = "involution"
        elif C.size <= budget:
            strategy = "exhaustive"
        else:
            strategy = "random"
    if strategy == "involution":
        return involution_criterion(C, orbit_cap)
    if strategy == "exhaustive":
        if C.size > budget:
            return TypeDVerdict.unknown(
                budget_spent={"pairs": 0},
                details={"reason": f"class size {C.size} exceeds budget {budget}"})
        return exhaustive_scan(C, orbit_cap, workers=workers)
    if strategy == "random":
        return random_search(G, C, budget, seed, orbit_cap)
    raise ValueError(f"unknown strategy {strategy!r}")


def revalidate(verdict: TypeDVerdict) -> bool:
    if verdict.status == TYPE_D:
        return verify_certificate(verdict.certificate)
    return verdict.status in (NOT_TYPE_D, UNKNOWN)


# -- subgroup methods -------------------------------------------------------

def _require_subgroup(G, H):
    if H.degree != G.degree:
        raise ValueError(f"subgroup degree {H.degree} != group degree {G.degree}")
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")


def split_classes(H, O: ConjugacyClass, seed: int = 0) -> list[ConjugacyClass]:
    """The H-classes contained in the G-class O."""
    return [c for c in conjugacy_classes(H, seed=seed) if c.representative in O]


def useful_lemma_search(G, O: ConjugacyClass, H, budget: int = DEFAULT_BUDGET,
                        orbit_cap: int = DEFAULT_ORBIT_CAP, seed: int = 0):
    """Look for r, s in distinct H-classes inside O with (rs)^2 not commuting
    with r. Such a pair is never conjugate in <r, s> <= H, so the O is of
    type D; the pair is still run through ``check_pair`` before it is
    returned. Returns a PairCertificate or None."""
    _require_subgroup(G, H)
    parts = split_classes(H, O, seed)
    spent = 0
    for a in parts:
        r = a.representative
        for b in parts:
            if b is a:
                continue
            for s in b.elements:
                if spent >= budget:
                    return None
                spent += 1
                if squares_commute(r, s):
                    continue
                res = check_pair(r, s, orbit_cap)
                if isinstance(res, PairCertificate):
                    return res
                log.warning("lemma pair rejected by check_pair: %s", res)
    return None


@dataclass
class Inapplicable:
    reason: str
    subgroup: int | None = None
    details: dict = field(default_factory=dict)


def breuer_reduction(G, C: ConjugacyClass, subgroups, completeness_attested: bool,
                     orbit_cap: int = DEFAULT_ORBIT_CAP, seed: int = 0):
    """NotTypeD for C through classes of subgroups, or Inapplicable.

    The caller attests that ``subgroups`` represents every maximal subgroup
    meeting C; that is recorded, never checked. Each subgroup M must meet C
    in a single M-class m^M inside C, and each such m^M must be NotTypeD in M.
    """
    for M in subgroups:
        if M.degree != G.degree:
            raise ValueError(f"subgroup degree {M.degree} != group degree {G.degree}")
    if not completeness_attested:
        return Inapplicable("completeness of the subgroup list is not attested")
    tree = []
    for k, M in enumerate(subgroups):
        _require_subgroup(G, M)
        inside = split_classes(M, C, seed)
        node = {"subgroup": k, "name": M.name, "order": M.order,
                "classes_meeting": [c.size for c in inside]}
        if not inside:
            node["meets_class"] = False
            tree.append(node)
            continue
        if len(inside) > 1:
            return Inapplicable(
                f"class meets subgroup {k} in {len(inside)} of its classes",
                subgroup=k, details=node)
        leaf = inside[0]
        if not all(x in C for x in leaf.elements):
            return Inapplicable("subgroup class escapes the class", subgroup=k)
        verdict = exhaustive_scan(leaf, orbit_cap)
        node.update(meets_class=True, representative=str(leaf.representative),
                    leaf_size=leaf.size, leaf_status=verdict.status,
                    leaf_method=verdict.proof_method)
        tree.append(node)
        if verdict.status != NOT_TYPE_D:
            return Inapplicable(f"leaf class in subgroup {k} is {verdict.status}",
                                subgroup=k, details=node)
    if not any(n["meets_class"] for n in tree):
        return Inapplicable("no supplied subgroup meets the class")
    return TypeDVerdict.not_type_d(
        BREUER, budget_spent={"subgroups": len(subgroups)},
        details={"tree": tree, "maximality_attested": True})
