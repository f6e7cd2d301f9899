"""Spatial oracles: rational function lattices on finite discrete sets and
on the compactified naturals.

Elements are plain rational vectors (finite case) or eventually constant
rational sequences; both carry the coordinatewise group and lattice
structure with the all-ones vector as unit.  The hat of an element is the
step whose ray at height r is the open set where the element exceeds r;
this is an order embedding into the step world and supplies ground truth
for every frame-level verdict at desk scale.

Convex subgroups of these backends are exactly the support subgroups (all
elements vanishing on a fixed zero set), which keeps kernel predicates,
kernel generation, and pointwise closure decidable by finite search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import NotConvex
from .frames import FiniteFrame, powerset_frame
from .omega import OMEGA, OmegaElement
from .pointwise import PointwiseVerdict, check_pointwise_sup
from .families import ExplicitFamily, PrefixIndicatorFamily
from .steps import StepElement, as_fraction, validate_step


# -- finite X vectors ---------------------------------------------------------


def vec(entries) -> tuple[Fraction, ...]:
    return tuple(as_fraction(e) for e in entries)


def vec_join(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def vec_meet(a, b):
    return tuple(min(x, y) for x, y in zip(a, b))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(q, a):
    q = as_fraction(q)
    return tuple(q * x for x in a)


def vec_abs(a):
    return tuple(abs(x) for x in a)


def vec_pos(a):
    return tuple(max(x, Fraction(0)) for x in a)


def vec_leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def zeros(n) -> tuple:
    return (Fraction(0),) * n


def ones(n) -> tuple:
    return (Fraction(1),) * n


def point_frame(n: int) -> FiniteFrame:
    """The powerset frame over n labelled points."""
    return powerset_frame([f"x{i + 1}" for i in range(n)], name=f"2^{n}")


def hat(g, frame: FiniteFrame) -> StepElement:
    """The step with ray {x : g(x) > r} over the powerset frame."""
    g = vec(g)
    levels = sorted(set(g))
    values = [frame.top]
    for t in levels:
        values.append(sum(1 << i for i, x in enumerate(g) if x > t))
    return validate_step(frame, levels, values)


def unhat(f: StepElement) -> tuple[Fraction, ...]:
    """Inverse of `hat`: each coordinate drops out at its own value."""
    n = f.frame.base.size
    out = []
    for i in range(n):
        drop = next(
            idx for idx, v in enumerate(f.values) if not (v >> i) & 1
        )
        out.append(f.thresholds[drop - 1])
    return tuple(out)


# -- eventually constant sequences --------------------------------------------


@dataclass(frozen=True)
class ECSeq:
    """Eventually constant rational sequence; continuous by construction,
    the value at the limit point being the tail."""

    prefix: tuple[Fraction, ...]
    tail: Fraction

    @classmethod
    def make(cls, prefix, tail) -> "ECSeq":
        prefix = tuple(as_fraction(x) for x in prefix)
        tail = as_fraction(tail)
        while prefix and prefix[-1] == tail:
            prefix = prefix[:-1]
        return cls(prefix, tail)

    def value(self, k: int) -> Fraction:
        return self.prefix[k] if k < len(self.prefix) else self.tail

    def __repr__(self):
        body = ",".join(str(x) for x in self.prefix)
        return f"seq[{body}] tail {self.tail}"


def seq_zip(a: ECSeq, b: ECSeq, op) -> ECSeq:
    span = max(len(a.prefix), len(b.prefix))
    prefix = [op(a.value(k), b.value(k)) for k in range(span)]
    return ECSeq.make(prefix, op(a.tail, b.tail))


def seq_join(a, b):
    return seq_zip(a, b, max)


def seq_meet(a, b):
    return seq_zip(a, b, min)


def seq_add(a, b):
    return seq_zip(a, b, lambda x, y: x + y)


def seq_sub(a, b):
    return seq_zip(a, b, lambda x, y: x - y)


def seq_scale(q, a: ECSeq) -> ECSeq:
    q = as_fraction(q)
    return ECSeq.make([q * x for x in a.prefix], q * a.tail)


def seq_leq(a: ECSeq, b: ECSeq) -> bool:
    span = max(len(a.prefix), len(b.prefix))
    return all(a.value(k) <= b.value(k) for k in range(span)) and a.tail <= b.tail


def seq_const(q) -> ECSeq:
    return ECSeq.make((), q)


def prefix_sequence(n: int) -> ECSeq:
    """Height 1 on the naturals up to n, zero beyond and at the limit."""
    return ECSeq.make((Fraction(1),) * (n + 1), Fraction(0))


def hat_seq(g: ECSeq) -> StepElement:
    """The step over the open-set frame with ray {x : g(x) > r}.

    When the tail clears r the ray is cofinite and owns the limit point;
    otherwise it is the finite set of prefix positions above r.
    """
    levels = sorted(set(g.prefix) | {g.tail})
    values = [OMEGA.top]
    for t in levels:
        if g.tail > t:
            excluded = frozenset(
                k for k, x in enumerate(g.prefix) if x <= t
            )
            values.append(OmegaElement(True, excluded))
        else:
            included = frozenset(
                k for k, x in enumerate(g.prefix) if x > t
            )
            values.append(OmegaElement(False, included))
    return validate_step(OMEGA, levels, values)


def unhat_seq(f: StepElement) -> ECSeq:
    """Inverse of `hat_seq` on its image."""
    tail_idx = max(
        (i for i, v in enumerate(f.values) if v.cofin), default=0
    )
    tail = f.thresholds[tail_idx] if tail_idx < len(f.thresholds) else None
    assert tail is not None
    relevant = set()
    for v in f.values:
        relevant.update(v.data)
    span = max(relevant, default=-1) + 1

    def coord(k: int) -> Fraction:
        drop = next(
            i
            for i, v in enumerate(f.values)
            if not (k in v.data if not v.cofin else k not in v.data)
        )
        return f.thresholds[drop - 1]

    return ECSeq.make([coord(k) for k in range(span)], tail)


# -- convex subgroups ---------------------------------------------------------


@dataclass(frozen=True)
class SupportSubgroup:
    """All vectors vanishing on the zero set; convex by construction."""

    dim: int
    zero_set: frozenset[int]

    def contains(self, g) -> bool:
        g = vec(g)
        return all(g[i] == 0 for i in self.zero_set)

    def __repr__(self):
        zs = ",".join(str(i) for i in sorted(self.zero_set))
        return f"K(zero_set={{{zs}}})"


@dataclass(frozen=True)
class PredicateSubgroup:
    """A subgroup presented only by a membership rule; used to surface
    non-convex presentations such as integer lattices."""

    dim: int
    membership: object
    label: str = "K"

    def contains(self, g) -> bool:
        return self.membership(vec(g))


def integer_lattice(dim: int) -> PredicateSubgroup:
    return PredicateSubgroup(
        dim, lambda g: all(x.denominator == 1 for x in g), label="Z^n"
    )


def value_grid(dim: int, values) -> list[tuple]:
    values = [as_fraction(v) for v in values]
    return [tuple(p) for p in product(values, repeat=dim)]


DEFAULT_GRID_VALUES = (
    Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0),
    Fraction(1, 2), Fraction(1), Fraction(2),
)


def check_convexity(k, grid=None):
    """Search the grid for 0 <= h <= g with g in K but h outside.

    Returns the violating pair or None.  Support subgroups never violate;
    integer lattices fail at half of any positive member.
    """
    grid = grid if grid is not None else value_grid(k.dim, DEFAULT_GRID_VALUES)
    members = [g for g in grid if k.contains(g) and vec_leq(zeros(k.dim), g)]
    for g in members:
        for h in grid:
            if vec_leq(zeros(k.dim), h) and vec_leq(h, g) and not k.contains(h):
                return (h, g)
    return None


def _all_multiple_parts_in(k, f, g) -> bool:
    """Decide whether (n f - g)+ lies in K for every n >= 1.

    Coordinatewise the positive part only grows with n and its behaviour
    stabilizes once n f clears g wherever f is positive, so checking a few
    small n plus the stabilizing multiple decides the full quantifier.
    """
    ns = {1, 2}
    for fi, gi in zip(f, g):
        if fi > 0 and gi > 0:
            ns.add(int(gi / fi) + 2)
    return all(k.contains(vec_pos(vec_sub(vec_scale(n, f), g))) for n in ns)


def is_w_kernel(k, grid=None) -> bool:
    """Archimedean-quotient plus unit condition, checked on a grid.

    Raises NotConvex for non-convex presentations.  The first condition
    asks that f land in K whenever every (n f - g)+ does; the second that
    g land in K whenever g meet 1 does.  Support subgroups pass both: the
    unbounded-multiple premise forces f to vanish on the zero set.
    """
    violation = check_convexity(k, grid)
    if violation is not None:
        raise NotConvex(
            f"presented subgroup is not convex: {violation[0]} <= {violation[1]}",
            witness=violation,
        )
    grid = grid if grid is not None else value_grid(k.dim, DEFAULT_GRID_VALUES)
    positives = [g for g in grid if vec_leq(zeros(k.dim), g)]
    unit = ones(k.dim)
    for g in positives:
        if k.contains(vec_meet(g, unit)) and not k.contains(g):
            return False
    for f in positives:
        if k.contains(f):
            continue
        if any(_all_multiple_parts_in(k, f, g) for g in positives):
            return False
    return True


def kernel_generated(dim: int, elements) -> SupportSubgroup:
    """Smallest support kernel containing the given vectors: vanish exactly
    where they all vanish."""
    els = [vec(e) for e in elements]
    zero = frozenset(
        i for i in range(dim) if all(e[i] == 0 for e in els)
    )
    return SupportSubgroup(dim, zero)


def bounded_kernel_membership(g, h, n_bound: int = 20, m_bound: int = 20) -> bool:
    """Membership of h in the kernel generated by g >= 0, by the bounded
    search: for every n some multiple of g dominates (n|h| - 1)+."""
    g, h = vec(g), vec(h)
    for n in range(1, n_bound + 1):
        target = vec_pos(
            tuple(n * abs(x) - 1 for x in h)
        )
        if not any(
            vec_leq(target, vec_scale(m, g)) for m in range(m_bound + 1)
        ):
            return False
    return True


@dataclass(frozen=True)
class KernelFrame:
    frame: FiniteFrame
    kernels: tuple[SupportSubgroup, ...]
    to_open: dict          # kernel -> frame element
    lattice_iso: bool


def madden_frame(dim: int) -> KernelFrame:
    """All support kernels ordered by inclusion, with the bijection onto
    the powerset frame taking a kernel to the complement of its zero set.

    Meets intersect zero... rather: kernel intersection unions the zero
    sets, the generated join intersects them, and both transport to the
    open-set operations; the check below verifies the transport on every
    pair.
    """
    frame = point_frame(dim)
    kernels = tuple(
        SupportSubgroup(dim, frozenset(i for i in range(dim) if z >> i & 1))
        for z in range(1 << dim)
    )
    to_open = {
        k: sum(1 << i for i in range(dim) if i not in k.zero_set)
        for k in kernels
    }
    iso = True
    for k1 in kernels:
        for k2 in kernels:
            inter = SupportSubgroup(dim, k1.zero_set | k2.zero_set)
            joined = SupportSubgroup(dim, k1.zero_set & k2.zero_set)
            if to_open[inter] != frame.meet(to_open[k1], to_open[k2]):
                iso = False
            if to_open[joined] != frame.join(to_open[k1], to_open[k2]):
                iso = False
    return KernelFrame(frame, kernels, to_open, iso)


def is_pointwise_closed(
    k, grid=None, family_size: int = 2
) -> bool:
    """Search for a finite subset of K+ whose coordinatewise join escapes K.

    Finite joins are honest pointwise suprema here, so a miss up to the
    configured bounds reports closure at that bound.  Support subgroups are
    closed outright: a join of vectors vanishing on Z vanishes on Z.
    """
    violation = check_convexity(k, grid)
    if violation is not None:
        raise NotConvex(
            f"presented subgroup is not convex: {violation[0]} <= {violation[1]}",
            witness=violation,
        )
    grid = grid if grid is not None else value_grid(k.dim, DEFAULT_GRID_VALUES)
    members = [
        g for g in grid if k.contains(g) and vec_leq(zeros(k.dim), g)
    ]
    from itertools import combinations

    for size in range(1, family_size + 1):
        for fam in combinations(members, size):
            join = fam[0]
            for g in fam[1:]:
                join = vec_join(join, g)
            if not k.contains(join):
                return False
    return True


# -- the oracle ---------------------------------------------------------------


@dataclass(frozen=True)
class OracleReport:
    coordinatewise_sup: object
    candidate_is_sup: bool
    candidate_is_upper_bound: bool
    frame_verdict: PointwiseVerdict
    agree: bool


def oracle_sup_check(
    f0, members, frame: FiniteFrame | None = None, hat_cache: dict | None = None
) -> OracleReport:
    """Compare the coordinatewise verdict with the frame-level one.

    Finite discrete case: the coordinatewise join of a finite family is its
    honest supremum, and over a powerset frame the step-level check must
    say pointwise exactly when the candidate equals that join.  Exhaustive
    sweeps may pass a shared `hat_cache` to avoid rebuilding steps.
    """
    members = [vec(m) for m in members]
    if not members:
        raise ValueError("the oracle needs a nonempty family")
    f0 = vec(f0)
    frame = frame if frame is not None else point_frame(len(f0))

    def cached_hat(g):
        if hat_cache is None:
            return hat(g, frame)
        step = hat_cache.get(g)
        if step is None:
            step = hat_cache[g] = hat(g, frame)
        return step

    sup = members[0]
    for m in members[1:]:
        sup = vec_join(sup, m)
    is_sup = f0 == sup
    is_ub = all(vec_leq(m, f0) for m in members)
    family = ExplicitFamily(tuple(cached_hat(m) for m in members))
    verdict = check_pointwise_sup(cached_hat(f0), family)
    return OracleReport(
        sup, is_sup, is_ub, verdict, agree=(is_sup == verdict.is_pointwise)
    )


@dataclass(frozen=True)
class OmegaOracleReport:
    least_upper_bound: ECSeq
    candidate_is_sup: bool
    frame_verdict: PointwiseVerdict
    reproduces_gap: bool


def omega_prefix_sup_check(f0: ECSeq, depth: int = 6) -> OmegaOracleReport:
    """The prefix indicator family against a candidate, on both levels.

    Among eventually constant sequences the least upper bound of the
    prefix indicators is the constant one: any majorant is eventually a
    constant at least one and dominates every earlier position.  The frame
    check must still refuse pointwise-ness: at heights inside (0, 1) the
    member rays join to all naturals but the candidate's ray owns the
    limit point.
    """
    lub = seq_const(1)
    is_sup = f0 == lub
    family = PrefixIndicatorFamily(Fraction(0), depth)
    verdict = check_pointwise_sup(hat_seq(f0), family)
    return OmegaOracleReport(
        lub,
        is_sup,
        verdict,
        reproduces_gap=(is_sup and not verdict.is_pointwise),
    )


# -- spatial truncate sequences (oracle side) ---------------------------------


def seq_truncates(h: ECSeq, upto: int) -> list[ECSeq]:
    return [seq_meet(h, seq_const(n)) for n in range(1, upto + 1)]


def validate_seq_truncates(gs: list[ECSeq]) -> bool:
    for n in range(1, len(gs)):
        if seq_meet(gs[n], seq_const(n)) != gs[n - 1]:
            return False
    return True
