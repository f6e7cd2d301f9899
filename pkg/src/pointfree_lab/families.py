"""Ray families: finite or template-described countable sets of steps.

A family carries a ray-join rule r |-> join of member rays at r.  For
explicit finite families the rule is the literal finite join.  Countable
families are first-class only through templates whose join has a closed
form: the truncates of a fixed element (whose ray join is the element's own
ray), and the prefix indicator family over the compactified naturals
(whose join at heights in [0, 1) is "all naturals, limit point excluded" —
an element of the powerset algebra, not of the open-set frame).

Each family declares the frame its ray joins live in, together with the
embedding of the base frame into it; for finite backends that embedding is
the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FamilyOracleInvalid, ForeignElement
from .omega import (
    ALL_NATURALS,
    OMEGA,
    POWERSET_OMEGA,
    OmegaElement,
    omega_boolean_embedding,
)
from .steps import (
    StepElement,
    as_fraction,
    constant,
    leq_step,
    meet_steps,
    merge_grids,
    ray,
    sub_steps,
    validate_step,
)


class RayFamily:
    """Interface: frame, members(), ray_join(r), grids, translation."""

    frame = None
    join_frame = None

    def embed(self, a):
        """Map a base-frame element into the join frame."""
        raise NotImplementedError

    def members(self):
        raise NotImplementedError

    def ray_join(self, r):
        raise NotImplementedError

    def grid_thresholds(self) -> tuple[Fraction, ...]:
        raise NotImplementedError

    def uses_representative_grid(self) -> bool:
        """Template families compare at piece representatives (midpoints);
        finite families compare at the merged thresholds themselves."""
        return False

    def translate(self, f0: StepElement) -> "RayFamily":
        raise NotImplementedError

    def validate(self):
        """Internal consistency: every member ray sits under the ray join."""
        F = self.join_frame
        for r in _probe_points(self.grid_thresholds()):
            rj = self.ray_join(r)
            for k in self.members():
                if not F.leq(self.embed(ray(k, r)), rj):
                    raise FamilyOracleInvalid(
                        f"member ray exceeds the declared join at r={r}"
                    )


def _probe_points(thresholds):
    if not thresholds:
        return (Fraction(0),)
    pts = [thresholds[0] - 1]
    pts.extend(thresholds)
    for a, b in zip(thresholds, thresholds[1:]):
        pts.append((a + b) / 2)
    pts.append(thresholds[-1] + 1)
    return tuple(sorted(set(pts)))


@dataclass(frozen=True)
class ExplicitFamily(RayFamily):
    steps: tuple[StepElement, ...]

    def __post_init__(self):
        if self.steps:
            first = self.steps[0].frame
            for s in self.steps[1:]:
                if s.frame is not first:
                    raise ForeignElement("family members span different frames")

    @property
    def frame(self):
        return self.steps[0].frame if self.steps else None

    @property
    def join_frame(self):
        return self.frame

    def embed(self, a):
        return a

    def members(self):
        return self.steps

    def ray_join(self, r):
        F = self.frame
        out = F.bot
        for s in self.steps:
            out = F.join(out, ray(s, r))
        return out

    def grid_thresholds(self):
        return merge_grids(*(s.thresholds for s in self.steps))

    def validate(self):
        # The ray join of an explicit family is the literal finite join, so
        # member domination is definitional; nothing to probe.
        return None

    def translate(self, f0: StepElement) -> "ExplicitFamily":
        return ExplicitFamily(tuple(sub_steps(s, f0) for s in self.steps))


@dataclass(frozen=True)
class TruncateFamily(RayFamily):
    """The members base meet n for n = 1, 2, ...; ray join is base's ray.

    Steps are bounded, so the members and their partial joins stabilize;
    `depth` controls how many members sampling-based checks consult and is
    pushed past the stabilization point automatically.
    """

    base: StepElement
    depth: int = 8

    @property
    def frame(self):
        return self.base.frame

    @property
    def join_frame(self):
        return self.base.frame

    def embed(self, a):
        return a

    def _span(self) -> int:
        top = max((t for t in self.base.thresholds), default=Fraction(0))
        return max(self.depth, int(top) + 2)

    def members(self):
        return tuple(
            meet_steps(self.base, constant(self.frame, n))
            for n in range(1, self._span() + 1)
        )

    def ray_join(self, r):
        return ray(self.base, r)

    def grid_thresholds(self):
        grid = set(self.base.thresholds)
        grid.update(Fraction(n) for n in range(1, self._span() + 1))
        return tuple(sorted(grid))

    def validate(self):
        super().validate()
        # Partial joins must reach the declared join: the last member's ray
        # equals the base's ray everywhere once n clears every threshold.
        last = self.members()[-1]
        for r in _probe_points(self.grid_thresholds()):
            partial = self.frame.bot
            for k in self.members():
                partial = self.frame.join(partial, ray(k, r))
            if partial != self.ray_join(r):
                raise FamilyOracleInvalid(
                    f"truncate joins did not stabilize to the base ray at r={r}"
                )
        if not leq_step(last, self.base):
            raise FamilyOracleInvalid("truncate member exceeds the base")

    def translate(self, f0: StepElement) -> RayFamily:
        if _is_constant(f0):
            c = _constant_value(f0)
            return ExplicitFamily(
                tuple(sub_steps(m, constant(self.frame, c)) for m in self.members())
            )
        return ExplicitFamily(tuple(sub_steps(m, f0) for m in self.members()))


def _is_constant(f: StepElement) -> bool:
    return len(f.thresholds) <= 1


def _constant_value(f: StepElement) -> Fraction:
    if not f.thresholds:
        return Fraction(0)
    return f.thresholds[0]


def prefix_indicator(n: int, shift=0) -> StepElement:
    """The member at index n: height 1 over the first n+1 naturals,
    lowered by `shift`."""
    shift = as_fraction(shift)
    support = OmegaElement(False, frozenset(range(n + 1)))
    return validate_step(
        OMEGA, (-shift, 1 - shift), (OMEGA.top, support, OMEGA.bot)
    )


@dataclass(frozen=True)
class PrefixIndicatorFamily(RayFamily):
    """Indicators of the finite prefixes {0..n}, shifted down by a constant.

    The ray join is closed form and lives in the powerset algebra: top
    below the lower threshold, "all naturals without the limit point" on
    the unit band, bottom above it.  The middle value is exactly what no
    Fin/Cofin open can express, which is the point of the family.
    """

    shift: Fraction = Fraction(0)
    depth: int = 6

    @property
    def frame(self):
        return OMEGA

    @property
    def join_frame(self):
        return POWERSET_OMEGA

    def embed(self, a):
        return omega_boolean_embedding()(a)

    def members(self):
        return tuple(prefix_indicator(n, self.shift) for n in range(self.depth))

    def ray_join(self, r):
        r = as_fraction(r) + self.shift
        if r < 0:
            return POWERSET_OMEGA.top
        if r < 1:
            return ALL_NATURALS
        return POWERSET_OMEGA.bot

    def grid_thresholds(self):
        return (-self.shift, 1 - self.shift)

    def uses_representative_grid(self) -> bool:
        return True

    def translate(self, f0: StepElement) -> "PrefixIndicatorFamily":
        if not _is_constant(f0):
            raise ValueError(
                "the prefix indicator family only translates by constants"
            )
        return PrefixIndicatorFamily(
            self.shift + _constant_value(f0), self.depth
        )


def explicit(*steps) -> ExplicitFamily:
    return ExplicitFamily(tuple(steps))


def truncates(base: StepElement, depth: int = 8) -> TruncateFamily:
    return TruncateFamily(base, depth)


def prefix_indicators(shift=0, depth: int = 6) -> PrefixIndicatorFamily:
    return PrefixIndicatorFamily(as_fraction(shift), depth)
