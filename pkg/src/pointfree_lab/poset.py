"""Finite posets used as carriers for distributive frames.

A frame built from a poset has the poset's downsets as elements, so the
poset plays the role of the join-irreducible skeleton.  Points are labelled
by strings; the order is a dense boolean table validated at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PosetInvalid


@dataclass(frozen=True)
class Poset:
    points: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        n = len(self.points)
        if len(set(self.points)) != n:
            raise PosetInvalid(f"duplicate point labels: {self.points}")
        if len(self.leq) != n or any(len(row) != n for row in self.leq):
            raise PosetInvalid("order table is not square")
        leq = self.leq
        for i in range(n):
            if not leq[i][i]:
                raise PosetInvalid(f"not reflexive at {self.points[i]}")
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise PosetInvalid(
                        f"not antisymmetric: {self.points[i]} <> {self.points[j]}"
                    )
                if leq[i][j]:
                    for k in range(n):
                        if leq[j][k] and not leq[i][k]:
                            raise PosetInvalid(
                                "not transitive: "
                                f"{self.points[i]}<={self.points[j]}<={self.points[k]}"
                            )

    @property
    def size(self) -> int:
        return len(self.points)

    def index(self, label: str) -> int:
        try:
            return self.points.index(label)
        except ValueError:
            raise PosetInvalid(f"unknown point {label!r}") from None

    def down_mask(self, i: int) -> int:
        """Bitmask of all points below or equal to point i."""
        return sum(1 << j for j in range(self.size) if self.leq[j][i])

    def down_masks(self) -> tuple[int, ...]:
        return tuple(self.down_mask(i) for i in range(self.size))

    @classmethod
    def from_relations(cls, points, relations) -> "Poset":
        """Build from labelled pairs (a, b) meaning a <= b.

        The reflexive-transitive closure is taken; antisymmetry failures
        surface as PosetInvalid.
        """
        points = tuple(points)
        n = len(points)
        idx = {p: i for i, p in enumerate(points)}
        table = [[i == j for j in range(n)] for i in range(n)]
        for a, b in relations:
            if a not in idx or b not in idx:
                raise PosetInvalid(f"relation uses unknown point: {a}<{b}")
            table[idx[a]][idx[b]] = True
        # Floyd-Warshall style closure.
        for k in range(n):
            for i in range(n):
                if table[i][k]:
                    row_k = table[k]
                    row_i = table[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        return cls(points, tuple(tuple(row) for row in table))

    @classmethod
    def chain(cls, n: int, prefix: str = "c") -> "Poset":
        points = tuple(f"{prefix}{i}" for i in range(n))
        leq = tuple(tuple(i <= j for j in range(n)) for i in range(n))
        return cls(points, leq)

    @classmethod
    def antichain(cls, labels) -> "Poset":
        points = tuple(labels)
        n = len(points)
        leq = tuple(tuple(i == j for j in range(n)) for i in range(n))
        return cls(points, leq)

    def is_antichain(self) -> bool:
        n = self.size
        return all(
            not self.leq[i][j] for i in range(n) for j in range(n) if i != j
        )


def enumerate_downsets(p: Poset) -> tuple[int, ...]:
    """All downsets of p as bitmasks, in a deterministic order.

    A mask m is a downset iff every point it contains brings its whole
    principal downset with it.  Sizes here stay tiny (the library targets
    posets of at most a dozen points), so the 2^n sweep is fine.
    """
    n = p.size
    if n > 20:
        raise PosetInvalid(f"poset too large to enumerate downsets ({n} points)")
    down = p.down_masks()
    out = []
    for m in range(1 << n):
        ok = True
        rest = m
        while rest:
            low = rest & (-rest)
            i = low.bit_length() - 1
            if down[i] & m != down[i]:
                ok = False
                break
            rest ^= low
        if ok:
            out.append(m)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return tuple(out)


def enumerate_antichains(p: Poset) -> tuple[tuple[int, ...], ...]:
    """All antichains of p (as tuples of point indices).

    Used only as an independent counting oracle: downsets correspond
    one-to-one with antichains of maximal elements.
    """
    n = p.size
    out = []
    for m in range(1 << n):
        members = [i for i in range(n) if m >> i & 1]
        if all(
            not p.leq[i][j]
            for i in members
            for j in members
            if i != j
        ):
            out.append(tuple(members))
    return tuple(out)
