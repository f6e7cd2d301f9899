"""Pointwise supremum checking and its constructive witnesses.

A candidate f0 is the pointwise supremum of a family K when its right ray
agrees with the family's ray join at every height.  Both sides are
right-continuous step data over a merged threshold grid, so the check is a
finite comparison: finite families are compared at the merged thresholds
themselves (every piece starts at one), template families at declared
representatives between thresholds.

When the check fails for a dominating candidate, a single frame morphism
separates the family from the candidate: embed into a boolean frame, cut
down to the complement of the offending ray join, and every member is
pushed below a strictly negative constant while the candidate stays at
zero.  On boolean frames a failing instance also yields a positive gap
element that the candidate exceeds the whole family by.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EmptyDownset,
    HypothesisFailed,
    IsPointwise,
    NotATruncateSequence,
    NotAnUpperBound,
    NotComplemented,
)
from .families import ExplicitFamily, RayFamily, truncates
from .frames import FrameMorphism, boolean_embedding, open_quotient
from .omega import OMEGA, omega_boolean_embedding
from .steps import (
    StepElement,
    as_fraction,
    constant,
    leq_step,
    left_ray,
    map_step,
    meet_steps,
    merge_grids,
    negate,
    ray,
    sub_steps,
    validate_step,
)


@dataclass(frozen=True)
class PointwiseVerdict:
    is_upper_bound: bool
    is_pointwise: bool
    failing_ray: Fraction | None
    lhs: object | None  # family ray join at the failing ray
    rhs: object | None  # candidate ray there

    def __post_init__(self):
        assert not self.is_pointwise or self.is_upper_bound


def _comparison_grid(f0: StepElement, family: RayFamily) -> tuple:
    """Heights at which the two sides are compared.

    Thresholds plus a below-all sentinel decide equality for finite
    families (each side is constant from one threshold to the next).
    Template families declare representative points instead: midpoints
    between thresholds and outer sentinels, which also decide equality and
    keep the reported failing ray off the thresholds themselves.
    """
    grid = merge_grids(f0.thresholds, family.grid_thresholds())
    if not grid:
        return (Fraction(0),)
    if family.uses_representative_grid():
        pts = [grid[0] - 1]
        pts.extend((a + b) / 2 for a, b in zip(grid, grid[1:]))
        pts.append(grid[-1] + 1)
        return tuple(pts)
    return (grid[0] - 1,) + grid


def check_pointwise_sup(f0: StepElement, family: RayFamily) -> PointwiseVerdict:
    family.validate()
    upper = all(leq_step(k, f0) for k in family.members())
    for r in _comparison_grid(f0, family):
        lhs = family.ray_join(r)
        rhs = family.embed(ray(f0, r))
        if lhs != rhs:
            return PointwiseVerdict(upper, False, r, lhs, rhs)
    return PointwiseVerdict(upper, True, None, None, None)


def check_pointwise_inf(f0: StepElement, family: ExplicitFamily) -> PointwiseVerdict:
    """Dual check, by reflection: f0 is the pointwise inf of K exactly when
    -f0 is the pointwise sup of -K."""
    if not isinstance(family, ExplicitFamily):
        raise ValueError("the dual check supports explicit families")
    neg_family = ExplicitFamily(tuple(negate(k) for k in family.steps))
    v = check_pointwise_sup(negate(f0), neg_family)
    return PointwiseVerdict(
        v.is_upper_bound,
        v.is_pointwise,
        None if v.failing_ray is None else -v.failing_ray,
        v.lhs,
        v.rhs,
    )


def pointwise_inf_direct(f0: StepElement, family: ExplicitFamily) -> bool:
    """Left-ray comparison, used as a cross-check of the reflection route."""
    grid = sorted(set(f0.thresholds) | set(family.grid_thresholds()))
    probes = [g + Fraction(1, 2) for g in grid] + [
        (grid[0] - 1 if grid else Fraction(0))
    ]
    F = f0.frame
    for r in probes:
        join = F.bot
        for k in family.steps:
            join = F.join(join, left_ray(k, r))
        if join != left_ray(f0, r):
            return False
    return True


def translate_family(family: RayFamily, f0: StepElement) -> RayFamily:
    """The family shifted down by f0; checking against zero afterwards is
    equivalent to checking the original against f0."""
    return family.translate(f0)


# -- separation ---------------------------------------------------------------


@dataclass(frozen=True)
class SeparationCertificate:
    failing_ray: Fraction
    bound: Fraction                      # failing_ray / 2 < 0
    psi: FrameMorphism
    pushed_members: tuple[StepElement, ...]
    pushed_candidate: StepElement
    valid: bool


def _embedding_for(frame) -> FrameMorphism:
    if frame is OMEGA:
        return omega_boolean_embedding()
    return boolean_embedding(frame)


def separating_morphism(
    f0: StepElement, family: RayFamily
) -> SeparationCertificate:
    """A morphism under which the family joins strictly below the candidate.

    Requires a dominating candidate whose check fails: after translating
    the candidate to zero, some negative height has ray join short of top.
    The morphism is the boolean embedding followed by the open quotient at
    the complement of that join; each translated member lands at or below
    the constant failing_ray/2 while zero stays zero.
    """
    verdict = check_pointwise_sup(f0, family)
    if verdict.is_pointwise:
        raise IsPointwise("the candidate is already the pointwise supremum")
    if not verdict.is_upper_bound:
        bad = next(k for k in family.members() if not leq_step(k, f0))
        raise NotAnUpperBound(
            "candidate does not dominate the family; no negative failing ray",
            witness=bad,
        )
    translated = family.translate(f0)
    zero = constant(translated.frame, 0)
    tv = check_pointwise_sup(zero, translated)
    assert not tv.is_pointwise and tv.failing_ray is not None
    r = tv.failing_ray
    assert r < 0, "a dominated family fails only at negative heights"

    frame = translated.frame
    embed = _embedding_for(frame)
    M = embed.codomain
    # The failing join already lives in the boolean frame for template
    # families; embed it otherwise.
    a = tv.lhs
    if not M.contains(a):
        a = embed(a)
    b = M.complement(a)
    assert b != M.bot, "the failing join is below top, so its complement is nonzero"
    quot = open_quotient(M, b)
    psi = quot.after(embed)

    bound = r / 2
    target = constant(psi.codomain, bound)
    pushed = tuple(map_step(psi, k) for k in translated.members())
    pushed_zero = map_step(psi, zero)
    valid = (
        all(leq_step(p, target) for p in pushed)
        and pushed_zero == constant(psi.codomain, 0)
        and bound < 0
    )
    return SeparationCertificate(r, bound, psi, pushed, pushed_zero, valid)


# -- gap witness on boolean frames --------------------------------------------


@dataclass(frozen=True)
class GapWitness:
    chi: StepElement
    positive: bool
    dominates: bool


def gap_characteristic(
    f0: StepElement, family: RayFamily, r, s
) -> GapWitness:
    """A positive step the candidate exceeds the family by, on a boolean
    frame, built from the gap between f0's ray at s and the family join at
    r < s.

    chi is top below 0, the gap element on [0, s - r), bottom after.  The
    returned report confirms chi > 0 and f0 - chi >= k for every member.
    Raises HypothesisFailed when the gap element is bottom.
    """
    r, s = as_fraction(r), as_fraction(s)
    if s <= r:
        raise ValueError("need s > r")
    frame = f0.frame
    if not frame.is_boolean():
        raise ValueError("the gap construction requires a boolean frame")
    b = family.ray_join(r)
    if not frame.contains(b):
        raise ValueError("the family join must land in the base frame")
    a = frame.meet(ray(f0, s), frame.complement(b))
    if a == frame.bot:
        raise HypothesisFailed(
            f"no gap at r={r}, s={s}: the candidate ray is under the join"
        )
    chi = validate_step(frame, (0, s - r), (frame.top, a, frame.bot))
    zero = constant(frame, 0)
    positive = leq_step(zero, chi) and chi != zero
    residual = sub_steps(f0, chi)
    dominates = all(leq_step(k, residual) for k in family.members())
    return GapWitness(chi, positive, dominates)


def characteristic(frame, a) -> StepElement:
    """The two-valued step of a complemented element: top below 0, a on
    [0, 1), bottom from 1 on."""
    if not frame.is_complemented(a):
        raise NotComplemented(f"{a!r} is not complemented")
    return validate_step(frame, (0, 1), (frame.top, a, frame.bot))


# -- truncate sequences -------------------------------------------------------


STATIONARY = "stationary"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class TruncateSeq:
    """A sequence given by an explicit prefix and an eventual rule.

    `stationary` continues with the last prefix entry forever (the shape of
    the truncates of any bounded element); `unbounded` continues with the
    constants n, n+1, ..., the truncates of no element at all.
    """

    prefix: tuple[StepElement, ...]
    tail: str = STATIONARY

    def __post_init__(self):
        if not self.prefix:
            raise ValueError("need at least one prefix element")
        if self.tail not in (STATIONARY, UNBOUNDED):
            raise ValueError(f"unknown tail rule {self.tail!r}")

    @property
    def frame(self):
        return self.prefix[0].frame

    def member(self, n: int) -> StepElement:
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        if self.tail == STATIONARY:
            return self.prefix[-1]
        return constant(self.frame, n)


def truncates_of(h: StepElement, upto: int | None = None) -> TruncateSeq:
    """The truncate sequence of a nonnegative step, long enough to reach
    its stationary tail."""
    top = max((t for t in h.thresholds), default=Fraction(0))
    m = upto if upto is not None else max(1, int(top) + 1)
    prefix = tuple(meet_steps(h, constant(h.frame, n)) for n in range(1, m + 1))
    return TruncateSeq(prefix, STATIONARY)


def validate_truncate_seq(seq: TruncateSeq) -> bool:
    """Both truncate conditions, or NotATruncateSequence with the violated
    condition and witness index.

    (1) g_{n+1} meet n = g_n for every n.  Within the prefix this is a
        finite check; across a stationary tail it reduces to the last entry
        sitting at or below its own index, and an unbounded tail satisfies
        it identically.
    (2) the left rays g_n(-oo, n) must join to top.  A stationary tail
        reaches top once n clears the last entry's thresholds; the
        unbounded constants hold their left ray at bottom forever, which is
        the canonical violation.
    """
    F = seq.frame
    m = len(seq.prefix)
    for n in range(1, m):
        expected = meet_steps(seq.member(n + 1), constant(F, n))
        if expected != seq.member(n):
            raise NotATruncateSequence(1, n)
    if seq.tail == STATIONARY:
        last = seq.prefix[-1]
        if not leq_step(last, constant(F, m)):
            raise NotATruncateSequence(1, m)
    else:
        boundary = meet_steps(seq.member(m + 1), constant(F, m))
        if boundary != seq.member(m):
            raise NotATruncateSequence(1, m)

    if seq.tail == UNBOUNDED:
        # left ray of the constant n at n is bottom: the join never moves.
        raise NotATruncateSequence(2, m + 1)
    last = seq.prefix[-1]
    horizon = max(
        m + 1, int(max((t for t in last.thresholds), default=Fraction(0))) + 2
    )
    join = F.bot
    for n in range(1, horizon + 1):
        join = F.join(join, left_ray(seq.member(n), n))
    if join != F.top:
        raise NotATruncateSequence(2, horizon)
    return True


def reconstruct(seq: TruncateSeq) -> StepElement:
    """The element whose truncates the sequence is.

    Validation first; for a stationary tail the element is the last prefix
    entry, whose truncates reproduce the prefix by the chain condition.
    The result is the pointwise join of its own truncate family.
    """
    validate_truncate_seq(seq)
    h = seq.prefix[-1]
    for n in range(1, len(seq.prefix) + 1):
        if meet_steps(h, constant(seq.frame, n)) != seq.member(n):
            raise NotATruncateSequence(1, n)
    verdict = check_pointwise_sup(h, truncates(h))
    assert verdict.is_pointwise
    return h


# -- downsets and mobility ----------------------------------------------------


def _vec(entries) -> tuple[Fraction, ...]:
    return tuple(as_fraction(e) for e in entries)


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _vec_pos(a) -> tuple:
    return tuple(max(x, Fraction(0)) for x in a)


def _vec_scale(n, a):
    return tuple(n * x for x in a)


@dataclass(frozen=True)
class DownsetSpec:
    """A downset of rational vectors, generated by finitely many vectors
    plus arithmetic rays u, u+d, u+2d, ... of generators.

    Rays present infinitely generated downsets finitely; without them a
    downset generated by finitely many vectors is bounded above by their
    join and can never absorb a positive shift.
    """

    dim: int
    base: tuple[tuple[Fraction, ...], ...] = ()
    rays: tuple[tuple[tuple[Fraction, ...], tuple[Fraction, ...]], ...] = ()

    def __post_init__(self):
        if not self.base and not self.rays:
            raise EmptyDownset("downset has no generators")
        for v in self.base:
            if len(v) != self.dim:
                raise ValueError("generator has the wrong dimension")
        for u, d in self.rays:
            if len(u) != self.dim or len(d) != self.dim:
                raise ValueError("ray has the wrong dimension")
            if any(x < 0 for x in d) or all(x == 0 for x in d):
                raise ValueError("ray direction must be nonzero and >= 0")

    def contains(self, x) -> bool:
        x = _vec(x)
        if any(_vec_leq(x, g) for g in self.base):
            return True
        for u, d in self.rays:
            # x <= u + n d for some integer n >= 0: each coordinate gives a
            # lower bound on n (or an absolute constraint when d_c = 0).
            need = Fraction(0)
            ok = True
            for xc, uc, dc in zip(x, u, d):
                if dc == 0:
                    if xc > uc:
                        ok = False
                        break
                else:
                    gap = (xc - uc) / dc
                    if gap > need:
                        need = gap
            if ok:
                return True
        return False

    def generator_instances(self, unroll: int = 4):
        out = list(self.base)
        for u, d in self.rays:
            for n in range(unroll + 1):
                out.append(_vec_add(u, _vec_scale(n, d)))
        return out


@dataclass(frozen=True)
class Mobility:
    mobile: bool
    witness: tuple | None = None
    reason: str = ""


def _absorbs_shift(z: DownsetSpec, g) -> bool:
    """Decide Z + g inside Z for the presented class.

    Base generators are checked by membership.  A ray absorbs the shift
    when some nonnegative multiple of its direction dominates g: then every
    instance moves to a later instance of the same ray.
    """
    for v in z.base:
        if not z.contains(_vec_add(v, g)):
            return False
    for u, d in z.rays:
        p = Fraction(0)
        ok = True
        for gc, dc in zip(g, d):
            if dc == 0:
                if gc > 0:
                    ok = False
                    break
            else:
                q = gc / dc
                if q > p:
                    p = q
        if not ok:
            return False
        steps_up = int(p) + (0 if p == int(p) else 1)
        if not _vec_leq(_vec_add(u, g), _vec_add(u, _vec_scale(steps_up, d))):
            return False
    return True


def is_mobile(z: DownsetSpec, unroll: int = 4) -> Mobility:
    """Mobile means no positive shift maps the downset into itself.

    Candidate shifts come from the positive parts of differences of
    generator instances and from the ray directions themselves; a downset
    that absorbs any shift absorbs one of these.  Finitely generated bases
    alone are always mobile: following a shift around the finite generator
    set would force a positive element below zero.
    """
    gens = z.generator_instances(unroll)
    candidates = []
    seen = set()
    for u, d in z.rays:
        if d not in seen:
            seen.add(d)
            candidates.append(d)
    for i, a in enumerate(gens):
        for b in gens:
            diff = _vec_pos(tuple(x - y for x, y in zip(b, a)))
            if any(c > 0 for c in diff) and diff not in seen:
                seen.add(diff)
                candidates.append(diff)
    for g in candidates:
        if _absorbs_shift(z, g):
            return Mobility(False, witness=g, reason="absorbed shift")
    if not z.rays:
        return Mobility(True, reason="bounded: finitely many generators")
    return Mobility(True, reason="no candidate shift is absorbed")
