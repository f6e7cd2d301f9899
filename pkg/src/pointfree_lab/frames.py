"""Finite frames and frame morphisms.

A finite frame is represented by the downsets of a poset, stored as int
bitmasks over the poset's points.  Meets and joins are then bit operations
and every join is enumerable, which keeps the whole calculus exact.

The pseudocomplement of a downset a is the downset of points whose
principal downset misses a; `rather_below`, disconnectivity classification,
booleanization, the embedding into the point powerset, and open quotients
are all derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .errors import ForeignElement, NotAFrameMap, NotComplemented, PosetInvalid
from .poset import Poset, enumerate_downsets


@dataclass(frozen=True)
class FrameFlags:
    boolean: bool
    extremally_disconnected: bool
    basically_disconnected: bool
    p_frame: bool
    witness: str | None = None

    def __post_init__(self):
        # The implications boolean => ED => BD and boolean => P-frame => BD
        # hold in any frame; a violation here is a bug, not bad input.
        assert not self.boolean or (self.extremally_disconnected and self.p_frame)
        assert not self.extremally_disconnected or self.basically_disconnected
        assert not self.p_frame or self.basically_disconnected


class FiniteFrame:
    """Downset lattice of a finite poset, with a designated cozero part.

    Elements are bitmasks; `bot` is the empty mask and `top` the full one.
    `coz_part` defaults to every element (each open of a finite space is a
    cozero set) and may be restricted to probe the cozero-relative flags
    independently of the global ones.
    """

    is_finite = True

    def __init__(self, base: Poset, coz_part=None, name: str | None = None):
        self.base = base
        self.name = name or "F"
        self.elements = enumerate_downsets(base)
        self._element_set = frozenset(self.elements)
        self.bot = 0
        self.top = (1 << base.size) - 1
        self._down = base.down_masks()
        if coz_part is None:
            self.coz_part = self.elements
        else:
            coz = tuple(sorted(set(coz_part), key=lambda m: (bin(m).count("1"), m)))
            for c in coz:
                if c not in self._element_set:
                    raise ForeignElement(f"cozero part contains non-element {c}")
            if self.bot not in coz or self.top not in coz:
                raise PosetInvalid("cozero part must contain BOT and TOP")
            for a in coz:
                for b in coz:
                    if (a | b) not in coz or (a & b) not in coz:
                        raise PosetInvalid(
                            "cozero part must be closed under meet and join"
                        )
            self.coz_part = coz
        self._pc = {}
        self._flags = None

    # -- lattice signature ------------------------------------------------

    def contains(self, a) -> bool:
        return isinstance(a, int) and a in self._element_set

    def _check(self, *els):
        for a in els:
            if not self.contains(a):
                raise ForeignElement(f"{a!r} is not an element of frame {self.name}")

    def leq(self, a, b) -> bool:
        self._check(a, b)
        return a & b == a

    def meet(self, a, b):
        self._check(a, b)
        return a & b

    def join(self, a, b):
        self._check(a, b)
        return a | b

    def iter_elements(self):
        return iter(self.elements)

    def pc(self, a):
        """Pseudocomplement: the largest element disjoint from a."""
        self._check(a)
        cached = self._pc.get(a)
        if cached is None:
            cached = sum(
                1 << i
                for i in range(self.base.size)
                if self._down[i] & a == 0
            )
            self._pc[a] = cached
        return cached

    def is_complemented(self, a) -> bool:
        return self.join(a, self.pc(a)) == self.top

    def complement(self, a):
        if not self.is_complemented(a):
            raise NotComplemented(f"{a} has no complement in {self.name}")
        return self.pc(a)

    def is_boolean(self) -> bool:
        return self.classify().boolean

    # -- classification ----------------------------------------------------

    def classify(self) -> FrameFlags:
        if self._flags is None:
            witness = None
            boolean = True
            ed = True
            for a in self.elements:
                if not self.is_complemented(a):
                    boolean = False
                star = self.pc(a)
                if star | self.pc(star) != self.top:
                    ed = False
                    if witness is None:
                        witness = f"a={a}"
            bd = all(
                self.pc(a) | self.pc(self.pc(a)) == self.top
                for a in self.coz_part
            )
            p_frame = all(self.is_complemented(a) for a in self.coz_part)
            self._flags = FrameFlags(boolean, ed, bd, p_frame, witness)
        return self._flags

    def __repr__(self):
        return f"FiniteFrame({self.name}, {len(self.elements)} elements)"


def build_frame(p: Poset, coz_part=None, name: str | None = None) -> FiniteFrame:
    return FiniteFrame(p, coz_part=coz_part, name=name)


def powerset_frame(labels, name: str | None = None) -> FiniteFrame:
    return FiniteFrame(Poset.antichain(labels), name=name or "2^X")


def pseudocomplement(frame, a):
    return frame.pc(a)


def rather_below(frame, a, b) -> bool:
    """a is rather below b when the pseudocomplement of a joins b to top."""
    return frame.join(frame.pc(a), b) == frame.top


def is_complemented(frame, a) -> bool:
    return frame.is_complemented(a)


def classify_frame(frame) -> FrameFlags:
    return frame.classify()


def join_all(frame, items):
    return reduce(frame.join, items, frame.bot)


def meet_all(frame, items):
    return reduce(frame.meet, items, frame.top)


# -- morphisms --------------------------------------------------------------


@dataclass(frozen=True)
class MorphismReport:
    frame_map: bool
    injective: bool | None
    surjective: bool | None
    dense: bool
    codense: bool
    violation: str | None
    mode: str  # "exhaustive" or "sampled"


class FrameMorphism:
    """Element map between two frames.

    For finite domains the map is a stored table and `check` is fully
    extensional; closed-form maps (the countable backends) carry a rule and
    are checked on supplied samples instead.
    """

    def __init__(self, domain, codomain, fn, label: str = "m", table=None):
        self.domain = domain
        self.codomain = codomain
        self._fn = fn
        self.label = label
        self._table = table

    @classmethod
    def from_table(cls, domain, codomain, table: dict, label: str = "m"):
        return cls(domain, codomain, table.__getitem__, label=label, table=table)

    def __call__(self, a):
        if not self.domain.contains(a):
            raise ForeignElement(f"{a!r} not in domain of {self.label}")
        out = self._fn(a)
        if not self.codomain.contains(out):
            raise ForeignElement(f"{self.label}({a!r}) fell outside the codomain")
        return out

    def after(self, other: "FrameMorphism") -> "FrameMorphism":
        """Composite self . other (apply `other` first)."""
        if other.codomain is not self.domain:
            raise ForeignElement("morphisms do not compose: codomain/domain mismatch")
        return FrameMorphism(
            other.domain,
            self.codomain,
            lambda a: self(other(a)),
            label=f"{self.label}.{other.label}",
        )

    def check(self, samples=None) -> MorphismReport:
        dom, cod = self.domain, self.codomain
        if getattr(dom, "is_finite", False):
            els = list(dom.iter_elements())
            mode = "exhaustive"
        else:
            if not samples:
                raise ValueError("sampled check needs sample elements")
            els = list(samples)
            mode = "sampled"

        violation = None
        if self(dom.bot) != cod.bot:
            violation = f"bottom: {self.label}(BOT) = {self(dom.bot)!r}, expected BOT"
        elif self(dom.top) != cod.top:
            violation = f"top: {self.label}(TOP) = {self(dom.top)!r}, expected TOP"
        else:
            for a in els:
                for b in els:
                    if self(dom.meet(a, b)) != cod.meet(self(a), self(b)):
                        violation = (
                            f"meet at ({a!r},{b!r}): "
                            f"{self(dom.meet(a, b))!r} != "
                            f"{cod.meet(self(a), self(b))!r}"
                        )
                        break
                    if self(dom.join(a, b)) != cod.join(self(a), self(b)):
                        violation = (
                            f"join at ({a!r},{b!r}): "
                            f"{self(dom.join(a, b))!r} != "
                            f"{cod.join(self(a), self(b))!r}"
                        )
                        break
                if violation:
                    break
        # On a finite lattice, preserving bottom and binary joins gives all
        # joins, since any join folds into binary ones.

        images = [self(a) for a in els]
        injective = len(set(images)) == len(set(els))
        surjective = None
        if getattr(cod, "is_finite", False) and mode == "exhaustive":
            surjective = set(images) == set(cod.iter_elements())
        dense = all(a == dom.bot for a in els if self(a) == cod.bot)
        codense = all(a == dom.top for a in els if self(a) == cod.top)
        return MorphismReport(
            frame_map=violation is None,
            injective=injective,
            surjective=surjective,
            dense=dense,
            codense=codense,
            violation=violation,
            mode=mode,
        )


def morphism_check(m: FrameMorphism, samples=None) -> MorphismReport:
    return m.check(samples=samples)


def ensure_frame_map(m: FrameMorphism, samples=None) -> MorphismReport:
    report = m.check(samples=samples)
    if not report.frame_map:
        raise NotAFrameMap(report.violation, witness=report.violation)
    return report


# -- constructions -----------------------------------------------------------


@dataclass(frozen=True)
class Booleanization:
    frame: FiniteFrame            # powerset of the regular atoms
    map: FrameMorphism            # a |-> a** transported to the new frame
    regular_elements: tuple       # fixed points of double pseudocomplement
    atoms: tuple                  # minimal nonzero regular elements

    def back(self, x):
        """View an element of the boolean frame back inside the original
        frame, as the regularization of the join of its atoms."""
        src = self.map.domain
        parts = [self.atoms[i] for i in range(len(self.atoms)) if x >> i & 1]
        joined = join_all(src, parts)
        return src.pc(src.pc(joined))


def booleanize(frame: FiniteFrame) -> Booleanization:
    """The regular-element boolean frame together with a |-> a**.

    Joins in the result are regularizations of unions; concretely the
    result is the powerset of the minimal nonzero regular elements and the
    map sends a to the set of atoms below a**.
    """
    regs = tuple(a for a in frame.elements if frame.pc(frame.pc(a)) == a)
    nonzero = [a for a in regs if a != frame.bot]
    atoms = tuple(
        a for a in nonzero
        if not any(b != a and b & a == b for b in nonzero)
    )
    assert len(regs) == 1 << len(atoms), "regular elements must form a powerset"
    target = powerset_frame(
        [f"r{i}" for i in range(len(atoms))], name=f"{frame.name}**"
    )
    table = {}
    for a in frame.elements:
        reg = frame.pc(frame.pc(a))
        table[a] = sum(1 << i for i, at in enumerate(atoms) if at & reg == at)
    m = FrameMorphism.from_table(frame, target, table, label="a->a**")
    return Booleanization(target, m, regs, atoms)


def boolean_embedding(frame: FiniteFrame) -> FrameMorphism:
    """Inclusion of the downset lattice into the powerset of its points.

    Downsets are already masks over the points, so the map is the identity
    on masks; it is injective and preserves all unions and intersections.
    """
    target = powerset_frame(frame.base.points, name=f"2^{frame.name}")
    table = {a: a for a in frame.elements}
    return FrameMorphism.from_table(frame, target, table, label="incl")


class OpenQuotientFrame:
    """The frame of elements below b, with b as its top.

    Works over any backing frame; meets, joins and order are inherited and
    the pseudocomplement is the parent's, cut down to b.
    """

    def __init__(self, parent, b):
        if not parent.contains(b):
            raise ForeignElement(f"{b!r} not in the parent frame")
        self.parent = parent
        self.b = b
        self.bot = parent.bot
        self.top = b
        self.name = f"{getattr(parent, 'name', 'F')}|{b!r}"
        self.is_finite = getattr(parent, "is_finite", False)

    def contains(self, a):
        return self.parent.contains(a) and self.parent.leq(a, self.b)

    def _check(self, *els):
        for a in els:
            if not self.contains(a):
                raise ForeignElement(f"{a!r} is not below {self.b!r}")

    def leq(self, a, c):
        self._check(a, c)
        return self.parent.leq(a, c)

    def meet(self, a, c):
        self._check(a, c)
        return self.parent.meet(a, c)

    def join(self, a, c):
        self._check(a, c)
        return self.parent.join(a, c)

    def pc(self, a):
        self._check(a)
        return self.parent.meet(self.parent.pc(a), self.b)

    def is_complemented(self, a):
        return self.join(a, self.pc(a)) == self.top

    def complement(self, a):
        if not self.is_complemented(a):
            raise NotComplemented(f"{a!r} has no complement below {self.b!r}")
        return self.pc(a)

    def is_boolean(self):
        # A downset of a boolean frame is boolean: a's complement below b
        # is (not a) meet b.
        return self.parent.is_boolean()

    def iter_elements(self):
        if not self.is_finite:
            raise ValueError("parent frame is not enumerable")
        return (a for a in self.parent.iter_elements() if self.parent.leq(a, self.b))

    def __repr__(self):
        return f"OpenQuotientFrame({self.name})"


def open_quotient(frame, b) -> FrameMorphism:
    """Surjective frame map c |-> c meet b onto the frame below b."""
    target = OpenQuotientFrame(frame, b)
    return FrameMorphism(
        frame, target, lambda c: frame.meet(c, b), label=f"quot@{b!r}"
    )
