"""Permutation group arithmetic.

Permutations act on the points ``0..n-1`` and multiply left to right:
``(p * q)(i) == q(p(i))``, the convention used by GAP and the ATLAS, so
words in standard generators read the same way they do there.

Images are stored as ``bytes`` which limits the degree to 256 but lets
composition run through ``bytes.translate``.
"""

from __future__ import annotations

import math
import random
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

MAX_DEGREE = 256
_PAD = bytes(range(256))

DEFAULT_ENUMERATION_CAP = 2_000_000


class PermutationError(ValueError):
    """Raised for malformed permutations or degree mismatches."""


class ClassEnumerationError(RuntimeError):
    """A conjugacy class orbit outgrew the enumeration cap."""

    def __init__(self, representative, cap):
        self.representative = representative
        self.cap = cap
        super().__init__(
            f"orbit of {representative} exceeds enumeration cap {cap}")


class Permutation:
    __slots__ = ("_img",)

    def __init__(self, images: Iterable[int]):
        img = bytes(images) if not isinstance(images, bytes) else images
        n = len(img)
        if n > MAX_DEGREE:
            raise PermutationError(f"degree {n} exceeds {MAX_DEGREE}")
        if set(img) != set(range(n)) or len(set(img)) != n:
            raise PermutationError(f"not a bijection on 0..{n - 1}: {list(img)}")
        self._img = img

    @classmethod
    def _raw(cls, img: bytes) -> "Permutation":
        p = object.__new__(cls)
        p._img = img
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(_PAD[:degree])

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        return parse_cycles(text, degree)

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(self._img)

    @property
    def raw(self) -> bytes:
        return self._img

    def table(self) -> bytes:
        """256-entry translation table for ``bytes.translate``."""
        return self._img + _PAD[len(self._img):]

    def __call__(self, point: int) -> int:
        return self._img[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other._img) != len(self._img):
            raise PermutationError("degree mismatch in product")
        return Permutation._raw(self._img.translate(other.table()))

    def inverse(self) -> "Permutation":
        inv = bytearray(len(self._img))
        for i, j in enumerate(self._img):
            inv[j] = i
        return Permutation._raw(bytes(inv))

    __invert__ = inverse

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Permutation.identity(self.degree)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self, g: "Permutation") -> "Permutation":
        """``g * self * g**-1``."""
        return g * self * g.inverse()

    def commutator(self, other: "Permutation") -> "Permutation":
        """``self**-1 * other**-1 * self * other``."""
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return self._img == _PAD[:len(self._img)]

    def __bool__(self) -> bool:
        return not self.is_identity()

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        img = self._img
        seen = bytearray(len(img))
        out = []
        for i in range(len(img)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = 1
            j = img[i]
            while j != i:
                cyc.append(j)
                seen[j] = 1
                j = img[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.cycles(include_fixed=True)))

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def moved_points(self) -> list[int]:
        return [i for i, j in enumerate(self._img) if i != j]

    def first_moved(self) -> int | None:
        for i, j in enumerate(self._img):
            if i != j:
                return i
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self) -> int:
        return hash(self._img)

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img

    def __str__(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"

    def __reduce__(self):
        return (Permutation, (self._img,))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based cycle notation such as ``(1,2,3)(4,5)``.

    Cycles that overlap are multiplied left to right.
    """
    stripped = text.replace(" ", "")
    if stripped and _CYCLE_RE.sub("", stripped):
        raise PermutationError(f"cannot parse cycle notation {text!r}")
    result = Permutation.identity(degree)
    for body in _CYCLE_RE.findall(stripped):
        if not body:
            continue
        try:
            pts = [int(t) - 1 for t in body.split(",")]
        except ValueError:
            raise PermutationError(f"cannot parse cycle {body!r}") from None
        if len(set(pts)) != len(pts) or min(pts) < 0 or max(pts) >= degree:
            raise PermutationError(f"bad cycle ({body}) for degree {degree}")
        img = bytearray(_PAD[:degree])
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
        result = result * Permutation._raw(bytes(img))
    return result


def format_cycles(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + ",".join(str(i + 1) for i in c) + ")" for c in cyc)


# -- stabilizer chain -------------------------------------------------------

@dataclass
class _Level:
    point: int
    gens: list = field(default_factory=list)
    orbit: list = field(default_factory=list)
    # transversal[b] maps the base point to b; inv_transversal[b] undoes it
    transversal: dict = field(default_factory=dict)
    inv_transversal: dict = field(default_factory=dict)
    checked: set = field(default_factory=set)

    def add_gen(self, g: Permutation) -> None:
        self.gens.append(g)
        if not self.orbit:
            e = Permutation.identity(g.degree)
            self.orbit.append(self.point)
            self.transversal[self.point] = e
            self.inv_transversal[self.point] = e
        queue = deque(self.orbit)
        while queue:
            b = queue.popleft()
            for h in self.gens:
                c = h(b)
                if c not in self.transversal:
                    u = self.transversal[b] * h
                    self.transversal[c] = u
                    self.inv_transversal[c] = u.inverse()
                    self.orbit.append(c)
                    queue.append(c)


def _sift(levels: list[_Level], h: Permutation, start: int = 0):
    for k in range(start, len(levels)):
        lv = levels[k]
        b = h(lv.point)
        if b not in lv.inv_transversal:
            return h, k
        h = h * lv.inv_transversal[b]
    return h, len(levels)


def _schreier_sims(degree: int, gens: Sequence[Permutation]) -> list[_Level]:
    # Deterministic; base points are first moved points (Holt, Handbook 4.4.2).
    levels: list[_Level] = []
    gens = [g for g in gens if not g.is_identity()]
    for g in gens:
        if all(g(lv.point) == lv.point for lv in levels):
            levels.append(_Level(point=g.first_moved()))
    for i, lv in enumerate(levels):
        for g in gens:
            if all(g(levels[j].point) == levels[j].point for j in range(i)):
                lv.add_gen(g)

    i = len(levels) - 1
    while i >= 0:
        lv = levels[i]
        jump = None
        for b in list(lv.orbit):
            for xi, x in enumerate(lv.gens):
                if (b, xi) in lv.checked:
                    continue
                lv.checked.add((b, xi))
                h = lv.transversal[b] * x * lv.inv_transversal[x(b)]
                res, j = _sift(levels, h, i + 1)
                if res.is_identity():
                    continue
                if j == len(levels):
                    levels.append(_Level(point=res.first_moved()))
                for k in range(i + 1, j + 1):
                    levels[k].add_gen(res)
                jump = j
                break
            if jump is not None:
                break
        i = jump if jump is not None else i - 1
    return levels


class PermGroup:
    """A permutation group with an exact stabilizer chain.

    Immutable after construction.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = (),
                 name: str | None = None):
        gens = tuple(generators)
        for g in gens:
            if not isinstance(g, Permutation):
                raise PermutationError(f"generator {g!r} is not a Permutation")
            if g.degree != degree:
                raise PermutationError(
                    f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = gens
        self.name = name
        self._levels = _schreier_sims(degree, gens)
        self.order = math.prod(len(lv.orbit) for lv in self._levels)
        self._derived = None

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} order={self.order}>"

    def __len__(self) -> int:
        return self.order

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lv.point for lv in self._levels)

    def transversal_sizes(self) -> tuple[int, ...]:
        return tuple(len(lv.orbit) for lv in self._levels)

    def strong_generators(self) -> list[Permutation]:
        seen, out = set(), []
        for lv in self._levels:
            for g in lv.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise PermutationError(
                f"degree {p.degree} does not match group degree {self.degree}")
        res, _ = _sift(self._levels, p)
        return res.is_identity()

    __contains__ = contains

    def random_element(self, rng: random.Random) -> Permutation:
        """Uniformly random element: a product of random coset representatives."""
        g = self.identity
        for lv in reversed(self._levels):
            g = g * lv.transversal[lv.orbit[rng.randrange(len(lv.orbit))]]
        return g

    def elements(self) -> Iterator[Permutation]:
        """Every element, once each. Only sensible for small groups."""
        # element = u_last * ... * u_0, built by prepending deeper factors
        def walk(k, acc):
            if k == len(self._levels):
                yield acc
                return
            lv = self._levels[len(self._levels) - 1 - k]
            for b in lv.orbit:
                yield from walk(k + 1, acc * lv.transversal[b])
        yield from walk(0, self.identity)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_normal_in(self, other: "PermGroup") -> bool:
        return all(self.contains(h.conj(g))
                   for g in other.generators for h in self.generators)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a * b == b * a for i, a in enumerate(gs) for b in gs[i + 1:])

    def orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen:
                continue
            orb, queue = [start], deque([start])
            seen.add(start)
            while queue:
                b = queue.popleft()
                for g in self.generators:
                    c = g(b)
                    if c not in seen:
                        seen.add(c)
                        orb.append(c)
                        queue.append(c)
            out.append(orb)
        return out

    def subgroup(self, gens: Iterable[Permutation], name=None) -> "PermGroup":
        return PermGroup(self.degree, gens, name=name)


def group_from_generators(degree: int, gens: Iterable[Permutation],
                          name: str | None = None) -> PermGroup:
    return PermGroup(degree, gens, name=name)


def normal_closure(group: PermGroup, gens: Iterable[Permutation]) -> PermGroup:
    """Smallest subgroup containing ``gens`` that ``group`` normalizes."""
    current = [g for g in gens if not g.is_identity()]
    N = PermGroup(group.degree, current)
    while True:
        extra = []
        for n in list(current):
            for g in group.generators:
                c = n.conj(g)
                if not N.contains(c) and c not in extra:
                    extra.append(c)
                    break
        if not extra:
            return N
        current.extend(extra)
        N = PermGroup(group.degree, current)


def derived_subgroup(group: PermGroup) -> PermGroup:
    if group._derived is None:
        gs = group.generators
        comms = [a.commutator(b) for i, a in enumerate(gs) for b in gs[i + 1:]]
        D = normal_closure(group, comms)
        D.name = f"{group.name}'" if group.name else None
        group._derived = D
    return group._derived


# -- orbits and conjugacy classes -------------------------------------------

def _perm_conj_orbit(x: Permutation, gens: Sequence[Permutation], cap: int,
                     stop: Permutation | None = None):
    # bytes-level BFS of x under y -> g^-1 y g for g in gens
    tabs = [(g.inverse().raw, g.table()) for g in gens]
    seen = {x.raw}
    order = [x.raw]
    target = stop.raw if stop is not None else None
    if target is not None and target in seen:
        return order, True
    i = 0
    while i < len(order):
        y = order[i]
        i += 1
        ytab = y + _PAD[len(y):]
        for ginv, gtab in tabs:
            z = ginv.translate(ytab).translate(gtab)
            if z not in seen:
                if len(order) >= cap:
                    raise ClassEnumerationError(x, cap)
                seen.add(z)
                order.append(z)
                if z == target:
                    return order, True
    return order, False


def conjugation_orbit(x, gens: Sequence, cap: int = DEFAULT_ENUMERATION_CAP,
                      stop=None):
    """Orbit of ``x`` under conjugation by ``gens``, in BFS order.

    Returns ``(elements, found)`` where ``found`` says whether ``stop`` was
    reached; the BFS ends early when it is. Raises ClassEnumerationError once
    the orbit exceeds ``cap``.
    """
    if isinstance(x, Permutation) and all(isinstance(g, Permutation) for g in gens):
        raw, found = _perm_conj_orbit(x, gens, cap, stop)
        return [Permutation._raw(b) for b in raw], found
    pairs = [(g.inverse(), g) for g in gens]
    seen = {x}
    out = [x]
    if stop is not None and stop == x:
        return out, True
    i = 0
    while i < len(out):
        y = out[i]
        i += 1
        for ginv, g in pairs:
            z = ginv * y * g
            if z not in seen:
                if len(out) >= cap:
                    raise ClassEnumerationError(x, cap)
                seen.add(z)
                out.append(z)
                if stop is not None and z == stop:
                    return out, True
    return out, False


class ConjugacyClass:
    """A conjugacy class with its elements enumerated in BFS order."""

    __slots__ = ("group", "representative", "elements", "element_order",
                 "centralizer_order", "label", "_index")

    def __init__(self, group, representative, elements, label=None):
        self.group = group
        self.representative = representative
        self.elements = elements
        self.element_order = representative.order()
        if group.order % len(elements):
            raise ArithmeticError("class size does not divide group order")
        self.centralizer_order = group.order // len(elements)
        self.label = label
        self._index = None

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index(self) -> dict:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return self._index

    def __contains__(self, x) -> bool:
        return x in self.index()

    def position(self, x) -> int:
        return self.index()[x]

    def __repr__(self) -> str:
        return (f"<ConjugacyClass {self.label or '?'} order={self.element_order}"
                f" size={self.size}>")


def conjugacy_class(group, x, cap: int = DEFAULT_ENUMERATION_CAP) -> ConjugacyClass:
    elements, _ = conjugation_orbit(x, group.generators, cap)
    return ConjugacyClass(group, x, elements)


def _letters(i: int) -> str:
    letter = chr(ord("A") + i % 26)
    return letter if i < 26 else f"{letter}{i // 26}"


def _invariant(x):
    ct = getattr(x, "cycle_type", None)
    return ct() if ct is not None else x.order()


def conjugacy_classes(group, enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                      seed: int = 0, outer_test: Callable | None = None,
                      max_draws: int | None = None) -> list[ConjugacyClass]:
    """All conjugacy classes of ``group``, labelled ATLAS-style.

    Works for any finite group object with ``generators``, ``order``,
    ``identity`` and ``random_element(rng)`` whose elements support ``*``,
    ``inverse()``, ``order()``, equality and hashing.

    Representatives come from seeded uniform sampling plus the powers of each
    new representative. Classes are sorted by (element order, size, discovery)
    and lettered in that order. With ``outer_test`` (for a group with a
    distinguished index-2 subgroup) the classes failing the test come first
    within each order, so outer classes continue the letters, as in the ATLAS.
    """
    rng = random.Random(seed)
    found: list[ConjugacyClass] = []
    buckets: dict = {}
    total = 0
    pending = deque([group.identity])
    draws = 0

    def locate(x):
        for c in buckets.get(_invariant(x), ()):
            if x in c:
                return c
        return None

    while total < group.order:
        if pending:
            x = pending.popleft()
        else:
            draws += 1
            if max_draws is not None and draws > max_draws:
                raise RuntimeError("representative search exhausted its draw budget")
            x = group.random_element(rng)
        if locate(x) is not None:
            continue
        c = conjugacy_class(group, x, enumeration_cap)
        found.append(c)
        buckets.setdefault(_invariant(x), []).append(c)
        total += c.size
        m = c.element_order
        for d in range(2, m):
            if m % d == 0:
                pending.append(x ** d)
    if total != group.order:
        raise ArithmeticError("class sizes overshoot the group order")

    discovery = {id(c): i for i, c in enumerate(found)}
    if outer_test is None:
        key = lambda c: (c.element_order, c.size, discovery[id(c)])
    else:
        key = lambda c: (c.element_order, bool(outer_test(c.representative)),
                         c.size, discovery[id(c)])
    found.sort(key=key)
    counts: dict[int, int] = {}
    for c in found:
        k = counts.get(c.element_order, 0)
        counts[c.element_order] = k + 1
        c.label = f"{c.element_order}{_letters(k)}"
    return found
