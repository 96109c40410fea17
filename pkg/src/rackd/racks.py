"""Finite racks as operation tables, and type D straight from the definition.

``table[x][y]`` is ``x |> y``. This module knows nothing about groups beyond
building the conjugation rack of an enumerated class, so its type-D search
serves as an independent check on the group-theoretic one in ``typed``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .verdict import EXHAUSTIVE, TypeDVerdict


class RackAxiomError(ValueError):
    pass


class FiniteRack:
    __slots__ = ("table", "labels", "is_quandle")

    def __init__(self, table: np.ndarray, labels=None, is_quandle=None):
        self.table = table
        self.labels = labels
        if is_quandle is None:
            is_quandle = bool(np.all(table[np.arange(len(table)),
                                           np.arange(len(table))] == np.arange(len(table))))
        self.is_quandle = is_quandle

    @property
    def size(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def op(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def checksum(self) -> str:
        """64-bit BLAKE2 digest of the table, as hex."""
        data = np.ascontiguousarray(self.table, dtype="<i4").tobytes()
        return hashlib.blake2b(data, digest_size=8).hexdigest()

    def to_json(self) -> str:
        doc = {"table": self.table.tolist()}
        if self.labels is not None:
            doc["labels"] = [str(l) for l in self.labels]
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FiniteRack":
        doc = json.loads(text)
        return rack_from_table(doc["table"], labels=doc.get("labels"))

    def subrack(self, members) -> "FiniteRack":
        """The subrack on ``members`` (validated), relabelled 0..k-1."""
        members = sorted(set(int(m) for m in members))
        pos = {m: i for i, m in enumerate(members)}
        sub = self.table[np.ix_(members, members)]
        try:
            table = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub)
        except KeyError as e:
            raise RackAxiomError(f"not closed: {e.args[0]} escapes the subset") from None
        labels = [self.labels[m] for m in members] if self.labels is not None else members
        return rack_from_table(table, labels=labels)


def rack_from_table(table, labels=None) -> FiniteRack:
    T = np.asarray(table, dtype=np.int64)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise RackAxiomError("rack table must be a non-empty square array")
    n = len(T)
    if T.min() < 0 or T.max() >= n:
        raise RackAxiomError("table entries out of range")
    if labels is not None and len(labels) != n:
        raise RackAxiomError("labels length does not match table")
    expected = np.arange(n)
    for x in range(n):
        if not np.array_equal(np.sort(T[x]), expected):
            raise RackAxiomError(f"left translation by {x} is not a bijection")
    for x in range(n):
        row = T[x]
        lhs = row[T]                          # x |> (y |> z)
        rhs = T[row[:, None], row[None, :]]   # (x |> y) |> (x |> z)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            y, z = bad[0]
            raise RackAxiomError(
                f"self-distributivity fails at (x, y, z) = ({x}, {y}, {z})")
    return FiniteRack(T, labels)


def conjugation_rack(cls) -> FiniteRack:
    """Rack on an enumerated conjugacy class with x |> y = x y x^-1."""
    elements = getattr(cls, "elements", None)
    if elements is None:
        raise ValueError("conjugacy class is not enumerated")
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    T = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        xinv = x.inverse()
        for j, y in enumerate(elements):
            T[i, j] = index[x * y * xinv]
    return rack_from_table(T, labels=list(elements))


# -- type D -----------------------------------------------------------------

@dataclass(frozen=True)
class RackCertificate:
    """Witness pair and the decomposition Y = R u S it lives in."""
    r: int
    s: int
    R: frozenset
    S: frozenset


def _closure(T: np.ndarray, seeds) -> np.ndarray:
    mask = np.zeros(len(T), dtype=bool)
    mask[list(seeds)] = True
    while True:
        idx = np.flatnonzero(mask)
        new = np.zeros_like(mask)
        new[T[np.ix_(idx, idx)].ravel()] = True
        new |= mask
        if new.sum() == mask.sum():
            return idx
        mask = new


def _inner_orbit(T: np.ndarray, Y: np.ndarray, start: int) -> np.ndarray:
    mask = np.zeros(len(T), dtype=bool)
    mask[start] = True
    while True:
        idx = np.flatnonzero(mask)
        new = mask.copy()
        new[T[np.ix_(Y, idx)].ravel()] = True
        if new.sum() == mask.sum():
            return idx
        mask = new


def inner_orbit_representatives(X: FiniteRack) -> list[int]:
    """Smallest element of each orbit of the inner group of X."""
    T = X.table
    seen = np.zeros(len(T), dtype=bool)
    reps = []
    everything = np.arange(len(T))
    for x in range(len(T)):
        if not seen[x]:
            reps.append(x)
            seen[_inner_orbit(T, everything, x)] = True
    return reps


def verify_rack_certificate(X: FiniteRack, cert: RackCertificate) -> bool:
    """Re-check a decomposition from scratch: R and S disjoint, each a
    subrack, each stable under the other, and the witness inequality."""
    T = X.table
    R, S = cert.R, cert.S
    if not R or not S or R & S or cert.r not in R or cert.s not in S:
        return False
    Y = R | S
    for a in Y:
        for part in (R, S):
            for b in part:
                if int(T[a, b]) not in part:
                    return False
    r, s = cert.r, cert.s
    return int(T[r, T[s, T[r, s]]]) != s


def check_decomposition(X: FiniteRack, r: int, s: int, R, S) -> TypeDVerdict | None:
    """Accept a caller-supplied decomposition as a type-D certificate."""
    cert = RackCertificate(r, s, frozenset(R), frozenset(S))
    if verify_rack_certificate(X, cert):
        return TypeDVerdict.type_d(cert, budget_spent={"pairs": 0})
    return None


def rack_type_d(X: FiniteRack, budget: int | None = None) -> TypeDVerdict:
    """Decide type D by scanning pairs (r, s).

    For each pair the subrack Y generated by r and s is split into the
    orbits of r and s under the inner group of Y; disjoint orbits give the
    decomposition. r runs over one element per inner-group orbit of X, since
    inner automorphisms carry witnesses to witnesses; s runs over all of X.
    Finite closure under |> already gives closure under its inverse.
    """
    T = X.table
    n = len(T)
    pairs = 0
    if n < 2:
        return TypeDVerdict.not_type_d(EXHAUSTIVE, budget_spent={"pairs": 0})
    memo: dict[bytes, dict[int, np.ndarray]] = {}
    for r in inner_orbit_representatives(X):
        for s in range(n):
            if s == r:
                continue
            if budget is not None and pairs >= budget:
                return TypeDVerdict.unknown(budget_spent={"pairs": pairs},
                                            details={"reason": "pair budget exhausted"})
            pairs += 1
            if int(T[r, T[s, T[r, s]]]) == s:
                continue
            Y = _closure(T, (r, s))
            orbits = memo.setdefault(Y.tobytes(), {})
            if r not in orbits:
                orbits[r] = _inner_orbit(T, Y, r)
            R = orbits[r]
            if s in set(R.tolist()):
                continue
            S = _inner_orbit(T, Y, s)
            cert = RackCertificate(r, s, frozenset(R.tolist()), frozenset(S.tolist()))
            return TypeDVerdict.type_d(cert, budget_spent={"pairs": pairs})
    return TypeDVerdict.not_type_d(EXHAUSTIVE, budget_spent={"pairs": pairs})
