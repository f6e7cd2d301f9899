"""The open-set frame of the one-point compactification of the naturals.

Representable elements are the finite open sets Fin(S) (subsets of the
naturals, never containing the limit point) and the cofinite open sets
Cofin(E) (everything except a finite set of naturals, always containing the
limit point).  All operations are closed-form on this data; the frame is
never enumerated.  Countable joins that leave the representable sublattice
are the business of ray families, not of this module.

`PowersetOmega` is the boolean algebra of finite/cofinite subsets of the
whole space with an independent limit-point flag.  It serves two roles:
codomain of the boolean embedding, and value space for closed-form ray
joins (the join of all finite prefixes is "all naturals, limit point
excluded", which is representable here but not as a Fin/Cofin open).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .errors import ForeignElement, NotComplemented
from .frames import FrameFlags, FrameMorphism


@dataclass(frozen=True)
class OmegaElement:
    """An open set: Fin stores its members, Cofin its excluded naturals."""

    cofin: bool
    data: frozenset[int]

    def __repr__(self):
        kind = "cofin" if self.cofin else "fin"
        return f"{kind}{{{','.join(map(str, sorted(self.data)))}}}"


def fin(*naturals) -> OmegaElement:
    return OmegaElement(False, frozenset(naturals))


def cofin(*naturals) -> OmegaElement:
    return OmegaElement(True, frozenset(naturals))


class OmegaFrame:
    is_finite = False
    name = "omega"

    bot = fin()
    top = cofin()

    def contains(self, a) -> bool:
        return isinstance(a, OmegaElement)

    def _check(self, *els):
        for a in els:
            if not self.contains(a):
                raise ForeignElement(f"{a!r} is not an omega-frame element")

    def leq(self, a, b) -> bool:
        self._check(a, b)
        if not a.cofin and not b.cofin:
            return a.data <= b.data
        if not a.cofin and b.cofin:
            return not (a.data & b.data)
        if a.cofin and not b.cofin:
            return False
        return b.data <= a.data

    def meet(self, a, b):
        self._check(a, b)
        if not a.cofin and not b.cofin:
            return OmegaElement(False, a.data & b.data)
        if not a.cofin and b.cofin:
            return OmegaElement(False, a.data - b.data)
        if a.cofin and not b.cofin:
            return OmegaElement(False, b.data - a.data)
        return OmegaElement(True, a.data | b.data)

    def join(self, a, b):
        self._check(a, b)
        if not a.cofin and not b.cofin:
            return OmegaElement(False, a.data | b.data)
        if not a.cofin and b.cofin:
            return OmegaElement(True, b.data - a.data)
        if a.cofin and not b.cofin:
            return OmegaElement(True, a.data - b.data)
        return OmegaElement(True, a.data & b.data)

    def pc(self, a):
        """Fin(S)* = Cofin(S) and Cofin(E)* = Fin(E).

        The largest open missing a finite S still contains the limit point;
        the largest open missing a cofinite set is the excluded finite part.
        """
        self._check(a)
        return OmegaElement(not a.cofin, a.data)

    def is_complemented(self, a) -> bool:
        # Every representable element is complemented: its pseudocomplement
        # flips the kind and joins back to the top.
        self._check(a)
        return True

    def complement(self, a):
        return self.pc(a)

    def is_boolean(self) -> bool:
        # The full open-set frame is not boolean; see classify().
        return False

    def classify(self) -> FrameFlags:
        """Closed-form classification of the full open-set frame.

        The representable sublattice is all complemented, but the frame
        itself contains opens like the set of even naturals, whose
        pseudocomplement is the odds: their join misses the limit point.
        The witness is verified by the eventually-periodic set calculus
        below rather than asserted.
        """
        w = disconnectivity_witness()
        assert w["verified"]
        return FrameFlags(
            boolean=False,
            extremally_disconnected=False,
            basically_disconnected=False,
            p_frame=False,
            witness=w["description"],
        )

    def random_element(self, rng, max_value: int = 30, max_size: int = 5):
        kind = rng.random() < 0.5
        size = rng.randint(0, max_size)
        data = frozenset(rng.sample(range(max_value), size))
        return OmegaElement(kind, data)

    def __repr__(self):
        return "OmegaFrame()"


OMEGA = OmegaFrame()


# -- powerset of the compactified space --------------------------------------


@dataclass(frozen=True)
class OmegaSet:
    """Finite or cofinite set of naturals plus a limit-point flag.

    For cofin=False `data` lists the members, for cofin=True the excluded
    naturals; `omega` records limit-point membership independently.
    """

    cofin: bool
    data: frozenset[int]
    omega: bool

    def nat_member(self, n: int) -> bool:
        return (n in self.data) != self.cofin

    def __repr__(self):
        kind = "cofin" if self.cofin else "fin"
        body = f"{kind}{{{','.join(map(str, sorted(self.data)))}}}"
        return body + ("+w" if self.omega else "")


class PowersetOmega:
    """Boolean algebra of finite/cofinite subsets of the space.

    Closed under all finite operations and complements; `pc` is the actual
    complement, so every element is complemented and the classification is
    all-true by the closed-form rule.
    """

    is_finite = False
    name = "2^(omega+1)"

    bot = OmegaSet(False, frozenset(), False)
    top = OmegaSet(True, frozenset(), True)

    def contains(self, a) -> bool:
        return isinstance(a, OmegaSet)

    def _check(self, *els):
        for a in els:
            if not self.contains(a):
                raise ForeignElement(f"{a!r} is not a powerset element")

    def _combine(self, a, b, op):
        tail = op(a.cofin, b.cofin)
        exceptions = frozenset(
            n
            for n in a.data | b.data
            if op(a.nat_member(n), b.nat_member(n)) != tail
        )
        return OmegaSet(tail, exceptions, op(a.omega, b.omega))

    def meet(self, a, b):
        self._check(a, b)
        return self._combine(a, b, lambda x, y: x and y)

    def join(self, a, b):
        self._check(a, b)
        return self._combine(a, b, lambda x, y: x or y)

    def leq(self, a, b) -> bool:
        return self.meet(a, b) == a

    def pc(self, a):
        self._check(a)
        return OmegaSet(not a.cofin, a.data, not a.omega)

    def is_complemented(self, a) -> bool:
        self._check(a)
        return True

    def complement(self, a):
        return self.pc(a)

    def is_boolean(self) -> bool:
        return True

    def classify(self) -> FrameFlags:
        return FrameFlags(True, True, True, True)

    def __repr__(self):
        return "PowersetOmega()"


POWERSET_OMEGA = PowersetOmega()

ALL_NATURALS = OmegaSet(True, frozenset(), False)


def omega_boolean_embedding() -> FrameMorphism:
    """Inclusion of the open-set frame into the powerset algebra."""

    def incl(a: OmegaElement) -> OmegaSet:
        return OmegaSet(a.cofin, a.data, a.cofin)

    return FrameMorphism(OMEGA, POWERSET_OMEGA, incl, label="incl_w")


# -- eventually periodic sets: the disconnectivity witness -------------------


@dataclass(frozen=True)
class NatSet:
    """Eventually periodic subset of the naturals.

    Membership of n is (n mod period in residues) xor (n in flips); the
    flips are finitely many pointwise corrections.  Closed under union,
    intersection and complement, which is all the witness check needs.
    """

    period: int
    residues: frozenset[int]
    flips: frozenset[int] = frozenset()

    def member(self, n: int) -> bool:
        return ((n % self.period) in self.residues) != (n in self.flips)

    def complement(self) -> "NatSet":
        comp = frozenset(r for r in range(self.period) if r not in self.residues)
        return NatSet(self.period, comp, self.flips)

    def _combine(self, other: "NatSet", op) -> "NatSet":
        p = lcm(self.period, other.period)
        residues = frozenset(
            r
            for r in range(p)
            if op(r % self.period in self.residues, r % other.period in other.residues)
        )
        bound = max(self.flips | other.flips, default=-1)
        flips = frozenset(
            n
            for n in range(bound + 1)
            if op(self.member(n), other.member(n)) != (n % p in residues)
        )
        return NatSet(p, residues, flips)

    def union(self, other):
        return self._combine(other, lambda x, y: x or y)

    def intersection(self, other):
        return self._combine(other, lambda x, y: x and y)

    def is_finite(self) -> bool:
        return not self.residues

    def is_everything(self) -> bool:
        return self.complement().is_finite() and not any(
            not self.member(n) for n in range(max(self.flips, default=0) + 1)
        ) and len(self.residues) == self.period

    def agrees_with(self, other: "NatSet", upto: int = 200) -> bool:
        return all(self.member(n) == other.member(n) for n in range(upto))


EVENS = NatSet(2, frozenset({0}))
ODDS = NatSet(2, frozenset({1}))
ALL_NATS_PATTERN = NatSet(1, frozenset({0}))
NO_NATS = NatSet(1, frozenset())


@dataclass(frozen=True)
class SpaceSet:
    """Subset of the compactified space: a NatSet plus the limit flag."""

    nats: NatSet
    omega: bool

    def interior(self) -> "SpaceSet":
        # A neighbourhood of the limit point must be cofinite on the
        # naturals, so the point survives only over a cofinite NatSet.
        keep = self.omega and self.nats.complement().is_finite()
        return SpaceSet(self.nats, keep)

    def complement(self) -> "SpaceSet":
        return SpaceSet(self.nats.complement(), not self.omega)

    def pc(self) -> "SpaceSet":
        return self.complement().interior()

    def union(self, other):
        return SpaceSet(self.nats.union(other.nats), self.omega or other.omega)

    def is_open(self) -> bool:
        return not self.omega or self.nats.complement().is_finite()

    def is_whole_space(self) -> bool:
        return self.omega and self.nats.complement().is_finite() and all(
            self.nats.member(n) for n in range(50)
        ) and len(self.nats.residues) == self.nats.period


def disconnectivity_witness() -> dict:
    """Verify that the even naturals witness every disconnectivity failure.

    The evens form an open (indeed cozero) set; their pseudocomplement is
    the odds, the double pseudocomplement is the evens again, and both
    joins miss the limit point.  One element therefore refutes boolean,
    extremally and basically disconnected, and the P-frame property at once.
    """
    a = SpaceSet(EVENS, False)
    star = a.pc()
    star_star = star.pc()
    ok = (
        a.is_open()
        and star.nats.agrees_with(ODDS)
        and not star.omega
        and star_star.nats.agrees_with(EVENS)
        and not star_star.omega
        and not a.union(star).is_whole_space()
        and not star.union(star_star).is_whole_space()
    )
    return {
        "verified": ok,
        "description": (
            "a = evens: a* = odds, a** = evens; "
            "a v a* and a* v a** are all naturals with the limit point missing"
        ),
    }
