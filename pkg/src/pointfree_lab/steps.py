"""Exact arithmetic on frame-valued step functions.

An element is presented by its right rays: a strictly increasing tuple of
rational thresholds t_1 < ... < t_k and values v_0 > ... > v_k with
f(r, oo) = v_i for r in [t_i, t_{i+1}), v_0 below every threshold and v_k
from t_k on.  Validity demands v_0 = top, v_k = bot, and every value
complemented — a value held on a whole interval is forced to be rather
below itself, which in a frame means complemented.

All scalars are exact rationals; there is no floating point anywhere in
this package.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BoundaryNotTopBottom,
    ForeignElement,
    NotRatherBelow,
    StabilizationNotReached,
)


def as_fraction(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use Fraction or strings")
    return Fraction(x)


class StepElement:
    """Immutable, canonical step function over a frame.

    Construct through `validate_step`; the raw constructor trusts its
    arguments.  Equality is structural, and canonical form (equal
    neighbouring values merged) makes it decide extensional equality.
    """

    __slots__ = ("frame", "thresholds", "values", "_hash")

    def __init__(self, frame, thresholds, values):
        self.frame = frame
        self.thresholds = thresholds
        self.values = values
        self._hash = None

    def __eq__(self, other):
        return (
            isinstance(other, StepElement)
            and self.frame is other.frame
            and self.thresholds == other.thresholds
            and self.values == other.values
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.frame), self.thresholds, self.values))
        return self._hash

    def __repr__(self):
        parts = [repr(self.values[0])]
        for t, v in zip(self.thresholds, self.values[1:]):
            parts.append(f"| {t} {v!r}")
        return f"<step {' '.join(parts)}>"


def validate_step(frame, thresholds, values) -> StepElement:
    """Check the extension conditions and return the canonical element.

    Violations raise by name: BoundaryNotTopBottom when the ends are not
    top/bottom, NotRatherBelow(i) when value i is not complemented or the
    chain fails to decrease.  A threshold across which the value does not
    change is not an error; it is merged away silently.
    """
    thresholds = tuple(as_fraction(t) for t in thresholds)
    values = tuple(values)
    if len(values) != len(thresholds) + 1:
        raise ValueError(
            f"need {len(thresholds) + 1} values for {len(thresholds)} thresholds"
        )
    if any(t1 >= t2 for t1, t2 in zip(thresholds, thresholds[1:])):
        raise ValueError("thresholds must be strictly increasing")
    for v in values:
        if not frame.contains(v):
            raise ForeignElement(f"step value {v!r} is not in the frame")

    # Canonicalize: merge neighbours with equal values.
    merged_t, merged_v = [], [values[0]]
    for t, v in zip(thresholds, values[1:]):
        if v != merged_v[-1]:
            merged_t.append(t)
            merged_v.append(v)
    thresholds, values = tuple(merged_t), tuple(merged_v)

    if values[0] != frame.top or values[-1] != frame.bot:
        raise BoundaryNotTopBottom(
            "step must start at TOP and end at BOT "
            f"(got {values[0]!r} .. {values[-1]!r})"
        )
    for i, v in enumerate(values):
        if not frame.is_complemented(v):
            raise NotRatherBelow(i, f"value {v!r} is not complemented")
    for i in range(len(values) - 1):
        lo, hi = values[i + 1], values[i]
        if not frame.leq(lo, hi) or frame.join(frame.pc(lo), hi) != frame.top:
            raise NotRatherBelow(i + 1, f"{lo!r} is not rather below {hi!r}")
    return StepElement(frame, thresholds, values)


def constant(frame, q) -> StepElement:
    """The step taking the single rational value q."""
    q = as_fraction(q)
    if frame.top == frame.bot:
        return StepElement(frame, (), (frame.top,))
    return StepElement(frame, (q,), (frame.top, frame.bot))


def ray(f: StepElement, r) -> object:
    """f(r, oo), by table lookup."""
    r = as_fraction(r)
    return f.values[bisect_right(f.thresholds, r)]


def left_ray(f: StepElement, r) -> object:
    """f(-oo, r) as the join of pseudocomplements of rays below r.

    The candidates increase along the chain, so the join collapses to the
    pseudocomplement of the last value taken strictly before r.
    """
    r = as_fraction(r)
    return f.frame.pc(f.values[bisect_left(f.thresholds, r)])


def merge_grids(*grids) -> tuple[Fraction, ...]:
    """Merge sorted threshold tuples without hashing Fractions, which is
    far more expensive than comparing them."""
    grids = [g for g in grids if g]
    if not grids:
        return ()
    if len(grids) == 1:
        return tuple(grids[0])
    out = []
    idx = [0] * len(grids)
    while True:
        best = None
        for g, i in zip(grids, idx):
            if i < len(g) and (best is None or g[i] < best):
                best = g[i]
        if best is None:
            return tuple(out)
        if not out or out[-1] != best:
            out.append(best)
        for k, (g, i) in enumerate(zip(grids, idx)):
            if i < len(g) and g[i] == best:
                idx[k] = i + 1


def support_grid(*steps) -> tuple[Fraction, ...]:
    """Merged thresholds of several steps, sorted."""
    return merge_grids(*(f.thresholds for f in steps))


def leq_step(f: StepElement, g: StepElement) -> bool:
    """Order by ray comparison on the merged grid.

    Both sides are constant between consecutive merged thresholds, and both
    start at TOP, so checking at each threshold covers every piece.
    """
    _same_frame(f, g)
    F = f.frame
    return all(F.leq(ray(f, t), ray(g, t)) for t in support_grid(f, g))


def _same_frame(*steps):
    first = steps[0].frame
    for s in steps[1:]:
        if s.frame is not first:
            raise ForeignElement("steps live over different frames")
    return first


# -- lattice and group operations --------------------------------------------


def _pointwise(f, g, op) -> StepElement:
    F = _same_frame(f, g)
    grid = support_grid(f, g)
    values = [op(f.values[0], g.values[0])]
    values += [op(ray(f, t), ray(g, t)) for t in grid]
    return validate_step(F, grid, values)


def meet_steps(f, g) -> StepElement:
    """(f and g)(r, oo) = f(r, oo) meet g(r, oo), piecewise."""
    return _pointwise(f, g, f.frame.meet)


def join_steps(f, g) -> StepElement:
    return _pointwise(f, g, f.frame.join)


def negate(f: StepElement) -> StepElement:
    """Reverse the thresholds and complement the values.

    (-f)(r, oo) is the complement of the value f holds just before -r.
    """
    F = f.frame
    thresholds = tuple(-t for t in reversed(f.thresholds))
    values = tuple(F.pc(v) for v in reversed(f.values))
    return validate_step(F, thresholds, values)


def _samples_with_midpoints(breaks) -> list[Fraction]:
    """Breakpoints, midpoints between them, and outer sentinels."""
    if not breaks:
        return [Fraction(0)]
    out = [breaks[0] - 1]
    for a, b in zip(breaks, breaks[1:]):
        out.append(a)
        out.append((a + b) / 2)
    out.append(breaks[-1])
    out.append(breaks[-1] + 1)
    return out


def _sum_ray(f, g, r: Fraction):
    """(f+g)(r, oo) as the join of f(s, oo) meet g(r-s, oo) over s.

    The integrand is piecewise constant in s with breaks at f's thresholds
    and at r minus g's thresholds; sampling breaks, midpoints and sentinels
    hits every piece regardless of endpoint conventions.
    """
    F = f.frame
    breaks = sorted(set(f.thresholds) | {r - u for u in g.thresholds})
    out = F.bot
    for s in _samples_with_midpoints(breaks):
        out = F.join(out, F.meet(ray(f, s), ray(g, r - s)))
    return out


def add_steps(f, g) -> StepElement:
    F = _same_frame(f, g)
    if not f.thresholds or not g.thresholds:
        return f if not g.thresholds else g  # degenerate one-element frame
    sums = sorted({t + u for t in f.thresholds for u in g.thresholds})
    values = [_sum_ray(f, g, sums[0] - 1)]
    values += [_sum_ray(f, g, r) for r in sums]
    return validate_step(F, sums, values)


def sub_steps(f, g) -> StepElement:
    return add_steps(f, negate(g))


def scalar_mul(q, f: StepElement) -> StepElement:
    """(q f)(s, oo) = f(s/q, oo) for rational q > 0."""
    q = as_fraction(q)
    if q <= 0:
        raise ValueError("scalar must be a positive rational")
    return StepElement(f.frame, tuple(q * t for t in f.thresholds), f.values)


_OPS = {
    "+": add_steps,
    "-": sub_steps,
    "v": join_steps,
    "^": meet_steps,
    "add": add_steps,
    "sub": sub_steps,
    "join": join_steps,
    "meet": meet_steps,
}


def arith(op: str, f: StepElement, g: StepElement) -> StepElement:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(f, g)


def abs_step(f: StepElement) -> StepElement:
    return join_steps(f, negate(f))


def positive_part(f: StepElement) -> StepElement:
    return join_steps(f, constant(f.frame, 0))


def coz(f: StepElement):
    """The cozero element |f|(0, oo)."""
    return ray(abs_step(f), 0)


def truncate(f: StepElement, n) -> StepElement:
    return meet_steps(f, constant(f.frame, n))


def is_nonnegative(f: StepElement) -> bool:
    return leq_step(constant(f.frame, 0), f)


def unit_component(f: StepElement, bound: int = 4096) -> StepElement:
    """The component of the unit carried by f's cozero.

    For f >= 0 over a finite frame, the increasing joins of n*f meet 1
    stabilize (once 1/n falls below f's first positive threshold) at the
    characteristic step of coz f; the result g satisfies g meet (1 - g) = 0
    and coz g = coz f.
    """
    if not getattr(f.frame, "is_finite", False):
        raise ValueError("unit component stabilization needs a finite frame")
    if not is_nonnegative(f):
        raise ValueError("unit component is defined for f >= 0")
    acc = meet_steps(f, constant(f.frame, 1))
    n = 1
    while n <= bound:
        n += 1
        nxt = join_steps(acc, truncate(scalar_mul(n, f), 1))
        if nxt == acc:
            return acc
        acc = nxt
    raise StabilizationNotReached(bound)


# -- openness -----------------------------------------------------------------


def eval_open(f: StepElement, intervals) -> object:
    """f applied to a finite union of open intervals, given in normal form.

    Each component (a, b) contributes f(a, oo) meet f(-oo, b); None stands
    for an infinite endpoint.  Components must be sorted and disjoint.
    """
    F = f.frame
    prev_end_key = None
    out = F.bot
    for a, b in intervals:
        a = None if a is None else as_fraction(a)
        b = None if b is None else as_fraction(b)
        if a is not None and b is not None and a >= b:
            raise ValueError(f"empty or reversed interval ({a}, {b})")
        start_key = float("-inf") if a is None else a
        if prev_end_key is not None and start_key < prev_end_key:
            raise ValueError("intervals must be sorted and disjoint")
        prev_end_key = float("inf") if b is None else b
        piece = F.top
        if a is not None:
            piece = F.meet(piece, ray(f, a))
        if b is not None:
            piece = F.meet(piece, left_ray(f, b))
        out = F.join(out, piece)
    return out


# -- the five ray/cozero identities ------------------------------------------


@dataclass(frozen=True)
class IdentityOutcome:
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class IdentityReport:
    outcomes: dict
    stabilized_at: int | None

    @property
    def all_passed(self) -> bool:
        return all(o.passed for o in self.outcomes.values())


def identity_suite(f, g, c, r, bound: int = 64) -> IdentityReport:
    """Check the five ray/cozero identities relating subtraction of
    constants, positive parts, meets, and the unbounded-multiple join.

    (1) (f-c)(r,oo) = f(c+r,oo)
    (2) coz f+ = f(0,oo)
    (3) coz (f-c)+ = f(c,oo)
    (4) (f meet g)(r,oo) = f(r,oo) meet g(r,oo)
    (5) join_n coz(n f - g)+ = coz f, with the join run to stabilization.

    Identity (5) holds for nonnegative pairs, so it is evaluated on the
    positive part of f (g is required nonnegative).  The join in (5) is
    legitimate on finite frames only, where it must stop moving within
    `bound` terms or StabilizationNotReached is raised.
    """
    frame = _same_frame(f, g)
    c, r = as_fraction(c), as_fraction(r)
    if not is_nonnegative(g):
        raise ValueError("identity (5) needs g >= 0")
    outcomes = {}

    lhs = ray(sub_steps(f, constant(frame, c)), r)
    rhs = ray(f, c + r)
    outcomes[1] = IdentityOutcome(lhs == rhs, None if lhs == rhs else f"r={r}")

    lhs = coz(positive_part(f))
    rhs = ray(f, 0)
    outcomes[2] = IdentityOutcome(lhs == rhs, None if lhs == rhs else "r=0")

    lhs = coz(positive_part(sub_steps(f, constant(frame, c))))
    rhs = ray(f, c)
    outcomes[3] = IdentityOutcome(lhs == rhs, None if lhs == rhs else f"c={c}")

    lhs = ray(meet_steps(f, g), r)
    rhs = frame.meet(ray(f, r), ray(g, r))
    outcomes[4] = IdentityOutcome(lhs == rhs, None if lhs == rhs else f"r={r}")

    stabilized_at = None
    if getattr(frame, "is_finite", False):
        fp = positive_part(f)
        target = coz(fp)
        partial = frame.bot
        previous = None
        for n in range(1, bound + 1):
            term = coz(positive_part(sub_steps(scalar_mul(n, fp), g)))
            partial = frame.join(partial, term)
            if partial == previous and partial == target:
                stabilized_at = n - 1
                break
            previous = partial
        else:
            if partial != target:
                raise StabilizationNotReached(bound)
            stabilized_at = bound
        outcomes[5] = IdentityOutcome(partial == target)
    else:
        outcomes[5] = IdentityOutcome(True, "skipped: non-finite frame")
    return IdentityReport(outcomes, stabilized_at)


# -- morphism action ----------------------------------------------------------


def map_step(m, f: StepElement) -> StepElement:
    """Push a step through a frame morphism, value by value.

    A frame map carries complements to complements, so the image validates;
    collapsed neighbours are merged by canonicalization.
    """
    if f.frame is not m.domain:
        raise ForeignElement("step does not live over the morphism's domain")
    return validate_step(m.codomain, f.thresholds, tuple(m(v) for v in f.values))
