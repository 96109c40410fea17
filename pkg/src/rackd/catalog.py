"""Embedded groups and parametric families.

Named groups live in ``data/groups.txt``: one record per group with
``name``, ``degree``, ``order`` and ``gen`` lines, records separated by blank
lines. The ``order`` line is a checksum verified on every load.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .permcore import (PermGroup, Permutation, derived_subgroup,
                       format_cycles, parse_cycles)


class CatalogError(KeyError):
    def __str__(self):
        return self.args[0]


class DataCorruptionError(RuntimeError):
    pass


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    name: str
    degree: int
    generators: tuple[str, ...]
    expected_order: int

    def build(self) -> PermGroup:
        gens = [parse_cycles(g, self.degree) for g in self.generators]
        G = PermGroup(self.degree, gens, name=self.name)
        if G.order != self.expected_order:
            raise DataCorruptionError(
                f"{self.name}: generators give order {G.order}, "
                f"record says {self.expected_order}")
        return G


def parse_group_data(text: str) -> dict[str, GroupSpec]:
    specs = {}
    for chunk in re.split(r"\n\s*\n", text):
        fields, gens = {}, []
        for line in chunk.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(" ")
            if key == "gen":
                gens.append(value.strip())
            elif key in ("name", "degree", "order"):
                fields[key] = value.strip()
            else:
                raise DataCorruptionError(f"unknown field {key!r} in group data")
        if not fields and not gens:
            continue
        try:
            spec = GroupSpec(fields["name"], int(fields["degree"]), tuple(gens),
                             int(fields["order"]))
        except KeyError as e:
            raise DataCorruptionError(f"group record missing {e.args[0]!r}") from None
        specs[spec.name] = spec
    return specs


def format_group_data(specs) -> str:
    records = []
    for s in specs:
        lines = [f"name {s.name}", f"degree {s.degree}", f"order {s.expected_order}"]
        lines += [f"gen {g}" for g in s.generators]
        records.append("\n".join(lines))
    return "\n\n".join(records) + "\n"


def spec_from_group(name: str, G: PermGroup) -> GroupSpec:
    return GroupSpec(name, G.degree, tuple(format_cycles(g) for g in G.generators),
                     G.order)


def load_data_file(path) -> dict[str, GroupSpec]:
    return parse_group_data(Path(path).read_text(encoding="utf-8"))


@functools.cache
def embedded_specs() -> dict[str, GroupSpec]:
    text = resources.files("rackd").joinpath("data/groups.txt").read_text("utf-8")
    return parse_group_data(text)


# -- parametric families ----------------------------------------------------

def _perm(images) -> Permutation:
    return Permutation(images)


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise ParameterError("cyclic group needs n >= 1")
    gens = [_perm([(i + 1) % n for i in range(n)])] if n > 1 else []
    return PermGroup(n, gens, name=f"Z{n}")


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise ParameterError("Sym(n) needs n >= 1")
    gens = []
    if n > 1:
        gens = [_perm([(i + 1) % n for i in range(n)]),
                _perm([1, 0] + list(range(2, n)))]
    return PermGroup(n, gens, name=f"Sym({n})")


def alternating(n: int) -> PermGroup:
    if n < 1:
        raise ParameterError("Alt(n) needs n >= 1")
    gens = []
    if n >= 3:
        three = [1, 2, 0] + list(range(3, n))
        if n % 2:
            long = [(i + 1) % n for i in range(n)]
        else:
            long = [0] + list(range(2, n)) + [1]
        gens = [_perm(three), _perm(long)]
    return PermGroup(n, gens, name=f"Alt({n})")


def dihedral(n: int) -> PermGroup:
    """Symmetries of the n-gon, order 2n."""
    if n < 3:
        raise ParameterError("Dih(n) needs n >= 3")
    rot = _perm([(i + 1) % n for i in range(n)])
    refl = _perm([(-i) % n for i in range(n)])
    return PermGroup(n, [rot, refl], name=f"Dih({n})")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def _primitive_root(q: int) -> int:
    for g in range(2, q):
        if multiplicative_order(g, q) == q - 1:
            return g
    return 1


def multiplicative_order(k: int, a: int) -> int:
    if math.gcd(k, a) != 1:
        raise ParameterError(f"{k} is not a unit mod {a}")
    m, x = 1, k % a
    while x != 1 % a:
        x = x * k % a
        m += 1
    return m


def _projective_line(q: int, f) -> Permutation:
    # points 0..q-1 are field elements, q is infinity
    return _perm([f(x) for x in range(q + 1)])


def _psl_pgl(q: int, projective_general: bool) -> PermGroup:
    if not _is_prime(q) or q < 5:
        raise ParameterError("only prime q >= 5 is supported")
    inf = q
    g = _primitive_root(q)
    mult = g if projective_general else g * g % q

    def translate(x):
        return x if x == inf else (x + 1) % q

    def scale(x):
        return x if x == inf else mult * x % q

    def invert(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return (-pow(x, -1, q)) % q

    gens = [_projective_line(q, f) for f in (translate, scale, invert)]
    name = f"PGL(2,{q})" if projective_general else f"PSL(2,{q})"
    return PermGroup(q + 1, gens, name=name)


def psl2(q: int) -> PermGroup:
    return _psl_pgl(q, False)


def pgl2(q: int) -> PermGroup:
    return _psl_pgl(q, True)


def metacyclic(a: int, b: int, k: int | None = None) -> PermGroup:
    """Z_a : Z_b, with the generator of Z_b acting as multiplication by k.

    Acts on a + b points: the affine action on Z_a, with the multiplier also
    cycling b extra points.
    """
    if a < 2 or b < 1:
        raise ParameterError("metacyclic group needs a >= 2 and b >= 1")
    if k is None:
        k = next((c for c in range(2, a) if math.gcd(c, a) == 1
                  and multiplicative_order(c, a) == b), None)
        if k is None:
            raise ParameterError(f"no multiplier of order {b} mod {a}")
    if math.gcd(k, a) != 1:
        raise ParameterError(f"gcd({k}, {a}) != 1")
    if multiplicative_order(k, a) != b:
        raise ParameterError(
            f"{k} has order {multiplicative_order(k, a)} mod {a}, not {b}")
    n = a + b
    shift = [(i + 1) % a for i in range(a)] + list(range(a, n))
    mult = [k * i % a for i in range(a)] + [a + (j + 1) % b for j in range(b)]
    return PermGroup(n, [_perm(shift), _perm(mult)], name=f"Z{a}:Z{b}")


# -- name resolution --------------------------------------------------------

_PATTERNS = [
    (re.compile(r"(?:Sym|S)\((\d+)\)|S(\d+)"), symmetric),
    (re.compile(r"(?:Alt|A)\((\d+)\)|A(\d+)"), alternating),
    (re.compile(r"Dih\((\d+)\)"), dihedral),
    (re.compile(r"(?:PSL|L)\(2,(\d+)\)|L2\((\d+)\)"), psl2),
    (re.compile(r"PGL\(2,(\d+)\)"), pgl2),
    (re.compile(r"Z(\d+)"), cyclic),
]
_METACYCLIC = re.compile(r"Z(\d+):Z(\d+)(?:\[k=(\d+)\])?")

FAMILY_HELP = ["Sym(n)", "Alt(n)", "Dih(n)", "PSL(2,q)", "PGL(2,q)", "Zn",
               "Za:Zb", "Za:Zb[k=m]"]

# Aut(L) forms stored directly; L is their derived subgroup.
AUT_FORMS = {"M12": "M12.2", "M22": "M22.2", "J2": "J2.2"}


def _match_family(name: str):
    for pattern, ctor in _PATTERNS:
        m = pattern.fullmatch(name)
        if m:
            return ctor, int(next(g for g in m.groups() if g is not None))
    return None


def available_names() -> list[str]:
    return sorted(embedded_specs()) + FAMILY_HELP


@functools.lru_cache(maxsize=64)
def load_group(name: str) -> PermGroup:
    specs = embedded_specs()
    if name in specs:
        return specs[name].build()
    m = _METACYCLIC.fullmatch(name)
    if m:
        a, b = int(m[1]), int(m[2])
        k = int(m[3]) if m[3] else None
        G = metacyclic(a, b, k)
        G.name = name
        return G
    family = _match_family(name)
    if family is not None:
        ctor, n = family
        G = ctor(n)
        G.name = name
        return G
    raise CatalogError(
        f"unknown group {name!r}; available: {', '.join(available_names())}")


def ambient_pair(name: str) -> tuple[PermGroup, PermGroup]:
    """(G, A) with G normal in A, for building automorphisms of G.

    Groups with a stored automorphism group are taken as its derived
    subgroup; Alt(n) and PSL(2,q) sit in Sym(n) and PGL(2,q); anything else
    sits in the symmetric group on its points, where conjugators must be
    checked to normalize it.
    """
    if name in AUT_FORMS:
        A = load_group(AUT_FORMS[name])
        return derived_subgroup(A), A
    G = load_group(name)
    family = _match_family(name)
    if family is not None and family[0] is alternating:
        return G, symmetric(family[1])
    if family is not None and family[0] is psl2:
        return G, pgl2(family[1])
    return G, symmetric(G.degree)


# Named instances swept by the property and acceptance suites.
SWEEP = (
    [f"Sym({n})" for n in range(3, 8)]
    + [f"Alt({n})" for n in range(4, 8)]
    + [f"Dih({n})" for n in range(3, 13)]
    + ["Z5", "Z12", "PSL(2,7)", "PSL(2,11)", "PSL(2,17)", "PGL(2,7)", "PGL(2,11)",
       "Z7:Z3", "Z7:Z6", "Z11:Z5", "Z23:Z11", "Z29:Z14", "Z47:Z23",
       "L2(11)<M11", "M11", "M12", "M22", "M12.2", "M22.2", "J2", "J2.2"]
)


def sweep_names(max_order: int | None = None) -> list[str]:
    names = []
    for name in SWEEP:
        if max_order is None or load_group(name).order <= max_order:
            names.append(name)
    return names
