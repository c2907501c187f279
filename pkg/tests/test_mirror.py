from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semifano import (
    Fan,
    FanError,
    MultiSeries,
    TruncationBox,
    assemble_mirror_map,
    compute_g0_family,
    curve_lattice,
    enumerate_g0_classes,
    g0_series,
    log_series,
    pullback_g0,
)
from semifano.series import compose
from conftest import fixture_fan, fixture_lattice


def test_enumerate_f2_section_multiples():
    _, lattice = fixture_lattice("f2")
    found = enumerate_g0_classes(lattice, 3, TruncationBox((3, 3)))
    assert [(c.coefficients, e) for c, e in found] == [
        ((k, 0, k, -2 * k), (k, 0)) for k in (1, 2, 3)
    ]


def test_enumerate_vertex_ray_empty():
    _, lattice = fixture_lattice("f2")
    for i in (0, 1, 2):
        assert enumerate_g0_classes(lattice, i, TruncationBox((3, 3))) == []


def test_enumerate_fano_empty():
    _, lattice = fixture_lattice("p2")
    for i in range(3):
        assert enumerate_g0_classes(lattice, i, TruncationBox((4,))) == []


def test_enumerate_requires_nef_basis():
    fan, _ = fixture_fan("f2")
    lattice = curve_lattice(fan, [[1, 0, 1, -2], [1, 1, 1, -1]])
    with pytest.raises(FanError):
        enumerate_g0_classes(lattice, 3, TruncationBox((3, 3)))


def test_g0_f2_closed_form():
    _, lattice = fixture_lattice("f2")
    s = g0_series(lattice, 3, TruncationBox((6, 6)))
    expected = {
        (k, 0): Fraction(factorial(2 * k - 1), factorial(k) ** 2)
        for k in range(1, 7)
    }
    assert s.to_dict() == expected


def test_g0_kp2_bundle_closed_form():
    # the compactified canonical bundle over the plane: the only correction
    # sits at the inner ray, with local-surface coefficients
    _, lattice = fixture_lattice("kp2-bundle")
    box = TruncationBox((4, 4))
    fam = compute_g0_family(lattice, box)
    nonzero = fam.nonzero_rays()
    assert nonzero == [0]
    s = fam.series[0].to_dict()
    fiber_axis = {e for e in s}
    assert all(sum(1 for x in e if x) == 1 for e in fiber_axis)
    var = next(a for e in s for a, x in enumerate(e) if x)
    for b in range(1, 5):
        exp = tuple(b if a == var else 0 for a in range(2))
        assert s[exp] == Fraction((-1) ** b * factorial(3 * b - 1),
                                  factorial(b) ** 3)


def threefold_closed_forms(caps):
    """The two-variable and one-variable closed forms for the threefold rays."""

    def f_coef(k1, k2):
        if k1 >= 2 * k2 >= 0 and (k1, k2) != (0, 0):
            return Fraction(
                (-1) ** (3 * k1 - k2 - 1) * factorial(3 * k1 - k2 - 1),
                factorial(k1) ** 2 * factorial(k2) * factorial(k1 - 2 * k2),
            )
        return Fraction(0)

    def g_coef(k1, k2):
        if k2 >= 3 * k1 >= 0 and (k1, k2) != (0, 0):
            return Fraction(
                (-1) ** (2 * k2 - k1 - 1) * factorial(2 * k2 - k1 - 1),
                factorial(k1) ** 2 * factorial(k2) * factorial(k2 - 3 * k1),
            )
        return Fraction(0)

    def h_coef(k):
        if k > 0:
            return Fraction((-1) ** (2 * k - 1) * factorial(2 * k - 1),
                            factorial(k) ** 2)
        return Fraction(0)

    return f_coef, g_coef, h_coef


def test_g0_threefold_closed_forms_small():
    _, lattice = fixture_lattice("threefold-example")
    f_coef, g_coef, h_coef = threefold_closed_forms((5, 5))
    box = TruncationBox((5, 5, 0, 0))
    s1 = g0_series(lattice, 0, box).to_dict()
    s2 = g0_series(lattice, 1, box).to_dict()
    for k1 in range(6):
        for k2 in range(6):
            e = (k1, k2, 0, 0)
            assert s1.get(e, Fraction(0)) == -f_coef(k1, k2)
            assert s2.get(e, Fraction(0)) == -g_coef(k1, k2)
    box4 = TruncationBox((0, 0, 0, 5))
    s4 = g0_series(lattice, 3, box4).to_dict()
    for k in range(1, 6):
        assert s4.get((0, 0, 0, k), Fraction(0)) == -h_coef(k)


def test_mirror_map_f2():
    _, lattice = fixture_lattice("f2")
    box = TruncationBox((5, 5))
    fam = compute_g0_family(lattice, box)
    mm = assemble_mirror_map(fam)
    g4 = fam.series[3]
    assert mm.forward.components[0] == g4.scale(2)
    assert mm.forward.components[1] == g4.scale(-1)
    ident = compose(mm.forward, mm.inverse)
    assert ident.is_identity()
    assert compose(mm.inverse, mm.forward).is_identity()


def test_mirror_map_fano_identity():
    for name, caps in (("p2", (4,)), ("p1xp1", (3, 3)), ("p1cubed", (2, 2, 2))):
        _, lattice = fixture_lattice(name)
        fam = compute_g0_family(lattice, TruncationBox(caps))
        mm = assemble_mirror_map(fam)
        assert mm.forward.is_identity()
        assert mm.inverse.is_identity()


def test_mirror_round_trip_all_fixtures():
    for name, caps in (
        ("f2", (5, 5)),
        ("f2-blowup", (4, 4, 4)),
        ("kp2-bundle", (4, 4)),
        ("threefold-example", (3, 3, 3, 3)),
    ):
        _, lattice = fixture_lattice(name)
        mm = assemble_mirror_map(compute_g0_family(lattice, TruncationBox(caps)))
        assert compose(mm.forward, mm.inverse).is_identity(), name
        assert compose(mm.inverse, mm.forward).is_identity(), name


def test_pullback_f2_is_log():
    _, lattice = fixture_lattice("f2")
    box = TruncationBox((5, 5))
    fam = compute_g0_family(lattice, box)
    mm = assemble_mirror_map(fam)
    pulled = pullback_g0(fam, mm)
    one_plus_q1 = MultiSeries.from_dict(box, {(0, 0): 1, (1, 0): 1})
    assert pulled[3] == log_series(one_plus_q1)
    for i in (0, 1, 2):
        assert pulled[i].is_zero()


def brute_force_classes(lattice, i, box):
    """Scan every exponent vector in the box and keep the qualifying classes."""
    from itertools import product

    out = []
    for exps in product(*[range(c + 1) for c in box.caps]):
        if not any(exps):
            continue
        cls = lattice.class_from_coordinates(exps)
        d = cls.coefficients
        if sum(d) != 0 or d[i] >= 0:
            continue
        if any(d[j] < 0 for j in range(len(d)) if j != i):
            continue
        out.append((d, exps))
    out.sort(key=lambda t: (sum(t[1]), t[1]))
    return out


FIXTURE_CAPS = {
    "p2": 1,
    "p1xp1": 2,
    "f2": 2,
    "kp2-bundle": 2,
    "f2-blowup": 3,
}


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_enumeration_matches_cube_scan(data):
    name = data.draw(st.sampled_from(sorted(FIXTURE_CAPS)))
    _, lattice = fixture_lattice(name)
    caps = tuple(
        data.draw(st.integers(0, 4)) for _ in range(FIXTURE_CAPS[name])
    )
    box = TruncationBox(caps)
    i = data.draw(st.integers(0, lattice.fan.num_rays - 1))
    fast = [
        (c.coefficients, e) for c, e in enumerate_g0_classes(lattice, i, box)
    ]
    assert fast == brute_force_classes(lattice, i, box)


def test_determinism_under_cone_shuffling():
    doc_fan, basis = fixture_fan("f2")
    box = TruncationBox((4, 4))
    reference = g0_series(curve_lattice(doc_fan, basis), 3, box)
    import random

    rng = random.Random(7)
    for _ in range(5):
        cones = list(doc_fan.max_cones)
        rng.shuffle(cones)
        shuffled = Fan(doc_fan.dimension, doc_fan.rays, tuple(cones))
        lattice = curve_lattice(shuffled, basis)
        assert g0_series(lattice, 3, box) == reference
