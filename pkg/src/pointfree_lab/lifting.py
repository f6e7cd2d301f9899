"""Canonical lifting of piecewise-linear operations to step elements.

The lifted value at a right ray (r, oo) is the join, over boxes of open
rational intervals that the operation maps into (r, oo), of the meets of
the arguments on the box sides.  This module evaluates that join directly
and serves as the independent oracle for the closed-form arithmetic in
`steps`.

Supported operation specs are maxima of blocks, where each block is either
a single affine function or a minimum of affine functions that each touch
at most one coordinate.  That grammar covers every operation the package
needs: sums, differences, scalar multiples, lattice joins and meets,
positive parts and absolute values.  The preimage of (r, oo) under such a
spec is a finite union of regions, each an open box or an open half-plane;
the join over boxes inside a region is computed exactly:

* box region: the region itself is the best box;
* half-plane with two active coordinates: every maximal box has its corner
  on the boundary line, so the join is a one-parameter sweep along the
  line, and the sweep is piecewise constant with breaks where an endpoint
  crosses an argument threshold.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import GridOverflow, UnsupportedLift
from .steps import (
    StepElement,
    as_fraction,
    left_ray,
    ray,
    validate_step,
    _samples_with_midpoints,
)


def max_grid_default() -> int:
    return int(os.environ.get("PFLAB_MAX_GRID", "10000"))


@dataclass(frozen=True)
class Affine:
    """coeffs . x + const, over rationals."""

    coeffs: tuple[Fraction, ...]
    const: Fraction

    def active(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)


@dataclass(frozen=True)
class PLSpec:
    """Max over blocks of mins over affines."""

    blocks: tuple[tuple[Affine, ...], ...]
    arity: int


def affine(coeffs, const=0) -> Affine:
    return Affine(tuple(as_fraction(c) for c in coeffs), as_fraction(const))


def pl_affine(coeffs, const=0) -> PLSpec:
    a = affine(coeffs, const)
    return PLSpec(((a,),), len(a.coeffs))


def pl_max(*specs: PLSpec) -> PLSpec:
    arity = specs[0].arity
    if any(s.arity != arity for s in specs):
        raise UnsupportedLift("mixed arities in max")
    return PLSpec(tuple(b for s in specs for b in s.blocks), arity)


def pl_min(*specs: PLSpec) -> PLSpec:
    """Distribute min over the max blocks of the arguments."""
    arity = specs[0].arity
    if any(s.arity != arity for s in specs):
        raise UnsupportedLift("mixed arities in min")
    blocks = [()]
    for s in specs:
        blocks = [acc + b for acc in blocks for b in s.blocks]
    return PLSpec(tuple(tuple(b) for b in blocks), arity)


# Ready-made specs for the group and lattice operations.
PL_IDENTITY = pl_affine((1,))
PL_NEGATE = pl_affine((-1,))
PL_ADD = pl_affine((1, 1))
PL_SUB = pl_affine((1, -1))
PL_JOIN = pl_max(pl_affine((1, 0)), pl_affine((0, 1)))
PL_MEET = pl_min(pl_affine((1, 0)), pl_affine((0, 1)))
PL_POSITIVE = pl_max(pl_affine((1,)), pl_affine((0,), 0))
PL_ABS = pl_max(pl_affine((1,)), pl_affine((-1,)))


def pl_scale(q) -> PLSpec:
    return pl_affine((as_fraction(q),))


def pl_constant(q, arity=1) -> PLSpec:
    return PLSpec(((affine((0,) * arity, q),),), arity)


def _block_kind(block) -> str:
    actives = [a.active() for a in block]
    if all(len(act) <= 1 for act in actives):
        return "axis"
    if len(block) == 1 and len(actives[0]) == 2:
        return "halfplane"
    raise UnsupportedLift(
        "block must be axis-separable or a single affine in two variables"
    )


def _axis_value(block, fs, r, frame):
    """Meet of argument values over the open box cut out by the block."""
    lower = {}
    upper = {}
    for atom in block:
        act = atom.active()
        if not act:
            if atom.const <= r:
                return frame.bot
            continue
        i = act[0]
        c = atom.coeffs[i]
        bound = (r - atom.const) / c
        if c > 0:
            if i not in lower or bound > lower[i]:
                lower[i] = bound
        else:
            if i not in upper or bound < upper[i]:
                upper[i] = bound
    out = frame.top
    for i in set(lower) | set(upper):
        lo = lower.get(i)
        hi = upper.get(i)
        if lo is not None and hi is not None and lo >= hi:
            return frame.bot
        piece = frame.top
        if lo is not None:
            piece = frame.meet(piece, ray(fs[i], lo))
        if hi is not None:
            piece = frame.meet(piece, left_ray(fs[i], hi))
        out = frame.meet(out, piece)
    return out


def _halfplane_value(atom, fs, r, frame, cap):
    """Sweep maximal corner boxes along the line coeffs.x + const = r.

    For a positive coefficient the box side is a right ray, for a negative
    one a left ray; with the corner on the line the box sits inside the
    open half-plane.  The sweep is piecewise constant with breaks where
    either endpoint crosses a threshold of its argument.
    """
    i, j = atom.active()
    ai, aj = atom.coeffs[i], atom.coeffs[j]
    fi, fj = fs[i], fs[j]
    breaks = set(fi.thresholds)
    breaks.update((r - atom.const - aj * u) / ai for u in fj.thresholds)
    breaks = sorted(breaks)
    if len(breaks) > cap:
        raise GridOverflow(f"half-plane sweep needs {len(breaks)} breakpoints")
    out = frame.bot
    for x in _samples_with_midpoints(breaks):
        y = (r - atom.const - ai * x) / aj
        xval = ray(fi, x) if ai > 0 else left_ray(fi, x)
        yval = ray(fj, y) if aj > 0 else left_ray(fj, y)
        out = frame.join(out, frame.meet(xval, yval))
    return out


def _lift_ray(w: PLSpec, fs, r, frame, cap):
    out = frame.bot
    for block in w.blocks:
        kind = _block_kind(block)
        if kind == "axis":
            val = _axis_value(block, fs, r, frame)
        else:
            val = _halfplane_value(block[0], fs, r, frame, cap)
        out = frame.join(out, val)
    return out


def _candidate_thresholds(w: PLSpec, fs) -> list[Fraction]:
    """Rational r at which the lifted ray can change value.

    Axis atoms change where an interval endpoint crosses a threshold of its
    coordinate: r = c*t + const.  Constant atoms change at their own value.
    Half-plane blocks change where the boundary line passes through a grid
    vertex: r = a_i*t + a_j*u + const.
    """
    cands = set()
    for block in w.blocks:
        if _block_kind(block) == "axis":
            for atom in block:
                act = atom.active()
                if not act:
                    cands.add(atom.const)
                    continue
                i = act[0]
                c = atom.coeffs[i]
                for t in fs[i].thresholds:
                    cands.add(c * t + atom.const)
        else:
            atom = block[0]
            i, j = atom.active()
            for t in fs[i].thresholds:
                for u in fs[j].thresholds:
                    cands.add(atom.coeffs[i] * t + atom.coeffs[j] * u + atom.const)
    return sorted(cands)


def lift(w: PLSpec, fs, max_grid: int | None = None) -> StepElement:
    """Evaluate the lifting of w at the given steps, ray by ray.

    The result's thresholds lie among the images of grid vertices under w;
    a midpoint consistency pass re-derives each piece's value between
    candidates and refuses to return if anything moved, which would mean
    the spec fell outside the supported grammar.
    """
    fs = tuple(fs)
    if len(fs) != w.arity:
        raise UnsupportedLift(f"spec has arity {w.arity}, got {len(fs)} arguments")
    if not fs:
        raise UnsupportedLift("need at least one argument")
    frame = fs[0].frame
    for f in fs[1:]:
        if f.frame is not frame:
            raise UnsupportedLift("arguments live over different frames")
    cap = max_grid if max_grid is not None else max_grid_default()

    cands = _candidate_thresholds(w, fs)
    if len(cands) > cap:
        raise GridOverflow(f"{len(cands)} candidate thresholds exceed the cap")
    if not cands:
        cands = [Fraction(0)]

    values = [_lift_ray(w, fs, cands[0] - 1, frame, cap)]
    for r in cands:
        values.append(_lift_ray(w, fs, r, frame, cap))
    for m in range(len(cands) - 1):
        mid = (cands[m] + cands[m + 1]) / 2
        if _lift_ray(w, fs, mid, frame, cap) != values[m + 1]:
            raise UnsupportedLift("ray grid incomplete for this spec")
    if _lift_ray(w, fs, cands[-1] + 1, frame, cap) != values[-1]:
        raise UnsupportedLift("ray grid incomplete above the last candidate")
    return validate_step(frame, cands, values)
