"""Hypergeometric correction series and the mirror coordinate change.

For each ray i the correction series sums, over curve classes d with total
anticanonical pairing zero that are negative exactly at coordinate i, the
factorial ratio (-1)^{d_i} (-d_i - 1)! / prod_{j != i} d_j!.  The coordinate
change multiplies each variable by the exponential of a combination of these
series; its formal inverse is computed by fixed-point iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .fans import CurveClass, CurveLattice, FanError, fan_polytope_vertices
from .series import (
    DiagonalUnitMap,
    MultiSeries,
    TruncationBox,
    add,
    invert_diagonal_unit,
    substitute,
)


def enumerate_g0_classes(lattice: CurveLattice, i: int, box: TruncationBox):
    """All correction classes for ray i with basis exponents inside the box.

    Walks b = -d_i from 1 up to the largest value attainable in the box, and
    for each b walks weak compositions of b into the other ray coordinates,
    keeping compositions that close up to a kernel class with in-box
    nonnegative basis exponents.  Returns (CurveClass, exponent) pairs.
    """
    if not lattice.nef_verified:
        raise FanError("correction enumeration needs a nef-verified basis")
    if box.arity != lattice.rank:
        raise FanError("box arity must equal the lattice rank")
    fan = lattice.fan
    m = fan.num_rays
    n = fan.dimension
    row_i = lattice.pairing_row(i)
    bound = sum(
        max(0, -row_i[a]) * box.caps[a] for a in range(lattice.rank)
    )
    out = []
    others = [j for j in range(m) if j != i]
    for b in range(1, bound + 1):
        # compositions of b over `others`, pruned by the ray-sum constraint
        # being completable (checked only at the leaves; sizes here are small)
        stack = [([], b)]
        while stack:
            prefix, rem = stack.pop()
            pos = len(prefix)
            if pos == len(others) - 1:
                candidates = [prefix + [rem]]
                for comp in candidates:
                    d = [0] * m
                    d[i] = -b
                    for j, v in zip(others, comp):
                        d[j] = v
                    if any(
                        sum(d[j] * fan.rays[j][t] for j in range(m)) != 0
                        for t in range(n)
                    ):
                        continue
                    cls = CurveClass(tuple(d))
                    exps = lattice.coordinates(cls)
                    if exps is None:
                        continue
                    if any(e < 0 for e in exps):
                        raise FanError(
                            "negative basis exponent for a correction class; "
                            "the basis is not nef"
                        )
                    if box.contains(tuple(exps)):
                        out.append((cls, tuple(exps)))
            else:
                for v in range(rem + 1):
                    stack.append((prefix + [v], rem - v))
    out.sort(key=lambda t: (sum(t[1]), t[1]))
    return out


def g0_series(lattice: CurveLattice, i: int, box: TruncationBox) -> MultiSeries:
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for cls, exps in enumerate_g0_classes(lattice, i, box):
        b = -cls[i]
        num = Fraction((-1) ** b * factorial(b - 1))
        den = 1
        for j, dj in enumerate(cls):
            if j != i:
                den *= factorial(dj)
        coeffs[exps] = coeffs.get(exps, Fraction(0)) + num / den
    return MultiSeries.from_dict(box, coeffs)


@dataclass(frozen=True)
class GZeroFamily:
    """One correction series per ray, in the pre-change variables."""

    lattice: CurveLattice
    series: tuple[MultiSeries, ...]

    @property
    def box(self):
        return self.series[0].box

    def nonzero_rays(self):
        return [i for i, s in enumerate(self.series) if not s.is_zero()]


def compute_g0_family(lattice: CurveLattice, box: TruncationBox) -> GZeroFamily:
    fan = lattice.fan
    vertices = fan_polytope_vertices(fan)
    series = []
    for i in range(fan.num_rays):
        if i in vertices:
            # vertex rays admit no correction class at all
            series.append(MultiSeries.zero(box))
        else:
            series.append(g0_series(lattice, i, box))
    return GZeroFamily(lattice, tuple(series))


@dataclass(frozen=True)
class MirrorMapPair:
    """Both directions of the coordinate change, as diagonal-unit maps.

    `forward` expresses the corrected variables in terms of the raw ones
    (q_a = x_a * exp(forward_a)); `inverse` goes back, and the composition is
    the identity within the box.
    """

    forward: DiagonalUnitMap
    inverse: DiagonalUnitMap


def assemble_mirror_map(g0: GZeroFamily) -> MirrorMapPair:
    """Forward component a is -sum_i a(i, a) * g0_i; inverse by iteration."""
    lattice = g0.lattice
    box = g0.box
    comps = []
    for a in range(lattice.rank):
        u = MultiSeries.zero(box)
        for i, s in enumerate(g0.series):
            coeff = lattice.pairing(i, a)
            if coeff and not s.is_zero():
                u = add(u, s.scale(-coeff))
        comps.append(u)
    forward = DiagonalUnitMap(tuple(comps))
    inverse = invert_diagonal_unit(forward)
    return MirrorMapPair(forward, inverse)


def pullback_g0(g0: GZeroFamily, mm: MirrorMapPair):
    """Each correction series composed with the inverse coordinate change."""
    return tuple(
        s if s.is_zero() else substitute(s, mm.inverse) for s in g0.series
    )
