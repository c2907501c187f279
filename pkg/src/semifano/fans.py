"""Smooth complete toric fans and their curve-class lattices.

Rays are primitive integer vectors in Z^n; maximal cones are given as index
sets and are required input (the fan is never guessed from rays alone).
Curve classes live in the kernel of Z^m -> Z^n, d |-> sum_i d_i v_i, with the
i-th coordinate of d equal to the intersection number against the i-th toric
divisor.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .intlinalg import (
    det_rational,
    lattice_membership,
    left_kernel_basis,
    rational_rank,
    same_lattice,
    solve_rational,
)


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """A simplicial fan: dimension, primitive ray generators, maximal cones.

    Ray and cone indices are 0-based internally; the JSON input layer uses
    1-based cone entries.
    """

    dimension: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(v) for v in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(c)) for c in self.max_cones)
        )

    @property
    def num_rays(self):
        return len(self.rays)

    def walls(self):
        """Map from (n-1)-subsets of cones to the list of cones containing them."""
        seen: dict[tuple[int, ...], list[int]] = {}
        for ci, cone in enumerate(self.max_cones):
            for wall in combinations(cone, self.dimension - 1):
                seen.setdefault(wall, []).append(ci)
        return seen


@dataclass(frozen=True)
class CurveClass:
    """Element of H_2: an integer vector of pairings with the toric divisors."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    def chern_number(self):
        return sum(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]


@dataclass(frozen=True)
class CurveLattice:
    """A chosen Z-basis of the curve-class lattice of a fan.

    `basis[a]` is the a-th basis class; the pairing matrix entry a(i, a) is
    simply coordinate i of basis class a.  `nef_verified` records whether
    every wall curve class has nonnegative coordinates in this basis, which
    downstream series code relies on for nonnegative exponents.
    """

    fan: Fan
    basis: tuple[CurveClass, ...]
    nef_verified: bool = False

    @property
    def rank(self):
        return len(self.basis)

    def pairing(self, ray_index, basis_index):
        return self.basis[basis_index][ray_index]

    def pairing_row(self, ray_index):
        """All pairings of ray_index's divisor with the basis classes."""
        return tuple(b[ray_index] for b in self.basis)

    def coordinates(self, cls: CurveClass):
        """Integer coordinates of a kernel class in the chosen basis, or None."""
        return lattice_membership([b.coefficients for b in self.basis], cls.coefficients)

    def class_from_coordinates(self, exps):
        m = self.fan.num_rays
        coeffs = [sum(e * b[i] for e, b in zip(exps, self.basis)) for i in range(m)]
        return CurveClass(tuple(coeffs))


def _is_primitive(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g == 1


def validate_fan(fan: Fan):
    """Check smoothness, completeness and primitivity; returns list of violations."""
    violations = []
    n = fan.dimension
    if n <= 0:
        return ["dimension must be positive"]
    for i, v in enumerate(fan.rays):
        if len(v) != n:
            violations.append(f"ray {i + 1} has wrong length")
        elif all(x == 0 for x in v):
            violations.append(f"ray {i + 1} is zero")
        elif not _is_primitive(v):
            violations.append(f"ray {i + 1} is not primitive")
    if len(set(fan.rays)) != len(fan.rays):
        violations.append("rays are not pairwise distinct")
    if violations:
        return violations
    for cone in fan.max_cones:
        if len(cone) != n or any(k < 0 or k >= fan.num_rays for k in cone):
            violations.append(f"cone {tuple(k + 1 for k in cone)} is not a valid index set")
            continue
        d = det_rational([list(fan.rays[k]) for k in cone])
        if abs(d) != 1:
            violations.append(
                f"cone {tuple(k + 1 for k in cone)} determinant {int(d)}, non-smooth"
            )
    if violations:
        return violations
    for wall, cones in fan.walls().items():
        if len(cones) != 2:
            violations.append(
                f"wall {tuple(k + 1 for k in wall)} shared by {len(cones)} cone(s)"
            )
    return violations


def require_valid(fan: Fan):
    violations = validate_fan(fan)
    if violations:
        raise FanError("; ".join(violations))


def cone_coordinates(fan: Fan, sigma, k):
    """Integer coordinates of ray k in the unimodular basis given by cone sigma."""
    cone = fan.max_cones[sigma]
    A = [[fan.rays[c][j] for c in cone] for j in range(fan.dimension)]
    x = solve_rational(A, list(fan.rays[k]))
    coords = tuple(int(c) for c in x)
    assert all(c.denominator == 1 for c in x)
    return coords


def alpha_class(fan: Fan, sigma, k):
    """Curve class of the k-th superpotential term relative to cone sigma."""
    cone = fan.max_cones[sigma]
    if k in cone:
        raise FanError(f"ray {k + 1} belongs to the chosen cone")
    coords = cone_coordinates(fan, sigma, k)
    d = [0] * fan.num_rays
    d[k] = 1
    for j, c in enumerate(cone):
        d[c] -= coords[j]
    cls = CurveClass(tuple(d))
    if any(sum(d[i] * fan.rays[i][j] for i in range(fan.num_rays)) != 0
           for j in range(fan.dimension)):
        raise FanError("alpha class is not in the curve lattice; inconsistent fan data")
    return cls


def wall_curve_classes(fan: Fan):
    """Primitive relation class of every wall, with the two opposite rays at +1."""
    classes = []
    for wall, cones in sorted(fan.walls().items()):
        c0, c1 = cones
        x = next(r for r in fan.max_cones[c0] if r not in wall)
        y = next(r for r in fan.max_cones[c1] if r not in wall)
        coords = cone_coordinates(fan, c0, y)
        cone = fan.max_cones[c0]
        d = [0] * fan.num_rays
        d[y] += 1
        d[x] += 1
        # v_y = -v_x + sum over wall rays of coords * v_c, so the relation is
        # v_x + v_y - sum coords * v_c = 0
        for j, c in enumerate(cone):
            if c == x:
                assert coords[j] == -1
            else:
                d[c] -= coords[j]
        classes.append(CurveClass(tuple(d)))
    # dedupe preserving order
    seen = set()
    out = []
    for c in classes:
        if c.coefficients not in seen:
            seen.add(c.coefficients)
            out.append(c)
    return out


def is_semi_fano(fan: Fan):
    """(flag, witness): anticanonical pairing nonnegative on all wall classes."""
    for c in wall_curve_classes(fan):
        if c.chern_number() < 0:
            return False, c
    return True, None


def fan_polytope_vertices(fan: Fan):
    """Indices of rays that are vertices of the convex hull of all rays.

    Exact test by Caratheodory: v is a non-vertex iff it is a convex
    combination of at most n+1 of the other rays, checked by solving the
    barycentric system over Q.
    """
    m = fan.num_rays
    n = fan.dimension
    out = set()
    for i in range(m):
        others = [j for j in range(m) if j != i]
        if not _in_convex_hull(fan.rays[i], [fan.rays[j] for j in others], n):
            out.add(i)
    return out


def _in_convex_hull(p, points, n):
    for size in range(1, min(len(points), n + 1) + 1):
        for sub in combinations(points, size):
            # solve sum l_k q_k = p, sum l_k = 1, l_k >= 0
            A = [[sub[k][j] for k in range(size)] for j in range(n)]
            A.append([1] * size)
            b = list(p) + [1]
            lam = solve_rational(A, b)
            if lam is None:
                continue
            ok = all(v >= 0 for v in lam)
            # solve_rational zero-fills free vars; re-verify the combination
            if ok and all(
                sum(lam[k] * sub[k][j] for k in range(size)) == p[j] for j in range(n)
            ) and sum(lam) == 1:
                return True
    return False


def nef_check(lattice: CurveLattice):
    """(flag, witness): every wall class has nonnegative basis coordinates."""
    if lattice.rank == 0:
        return True, None
    for c in wall_curve_classes(lattice.fan):
        exps = lattice.coordinates(c)
        if exps is None or any(e < 0 for e in exps):
            return False, c
    return True, None


def _kernel_basis(fan: Fan):
    V = [list(v) for v in fan.rays]
    return left_kernel_basis(V)


def curve_lattice(fan: Fan, basis=None) -> CurveLattice:
    """Build a verified curve lattice, choosing a nef basis when possible.

    A supplied basis is checked for kernel membership and for spanning the
    full kernel lattice (index one, via the Smith-normal-form route of
    `lattice_membership`).  Without one, the kernel basis is replaced by a
    combination of wall classes whenever some l of them form a Z-basis in
    which all wall classes have nonnegative coordinates.
    """
    kernel = _kernel_basis(fan)
    l = len(kernel)
    if basis is not None:
        rows = [tuple(int(x) for x in b) for b in basis]
        for b in rows:
            if any(sum(b[i] * fan.rays[i][j] for i in range(fan.num_rays)) != 0
                   for j in range(fan.dimension)):
                raise FanError(f"supplied basis class {b} is not a curve class")
        if len(rows) != l or not same_lattice(kernel, [list(b) for b in rows]):
            raise FanError("supplied basis does not span the full curve lattice")
        lat = CurveLattice(fan, tuple(CurveClass(b) for b in rows))
    else:
        lat = _choose_nef_basis(fan, kernel)
    if rational_rank([list(b.coefficients) for b in lat.basis]) != l:
        raise FanError("basis matrix is rank-deficient")
    ok, _ = nef_check(lat)
    return CurveLattice(fan, lat.basis, nef_verified=ok)


def _choose_nef_basis(fan: Fan, kernel):
    l = len(kernel)
    if l == 0:
        return CurveLattice(fan, ())
    walls = wall_curve_classes(fan)
    for sub in combinations(walls, l):
        rows = [list(c.coefficients) for c in sub]
        if not same_lattice(kernel, rows):
            continue
        cand = CurveLattice(fan, tuple(sub))
        ok, _ = nef_check(cand)
        if ok:
            return cand
    return CurveLattice(fan, tuple(CurveClass(tuple(b)) for b in kernel))
