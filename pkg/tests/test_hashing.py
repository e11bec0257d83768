import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lshlab import rng as rngmod
from lshlab.hashing import (
    Concatenation,
    Constant,
    CoordinateProjection,
    CoordinateSubset,
    DimensionMismatch,
    ExplicitTable,
    MinHashPermutation,
    PairCollapse,
    Parity,
    bit_sampling_family,
    bit_sampling_profile,
    collision_by_distance,
    collision_probability,
    evaluate,
    exact_sensitivity,
    family_descriptor,
    family_from_descriptor,
    family_from_json,
    family_to_json,
    finite_family,
    function_descriptor,
    function_from_descriptor,
    minhash_family,
    pack_labels,
    power,
    trivial_family,
    unpack_label,
)
from lshlab.points import Point


# ---------------------------------------------------------------------------
# evaluate


def test_evaluate_projection():
    h = CoordinateProjection(5, 3)
    assert evaluate(h, Point.from01("01011")) == 1
    assert evaluate(h, Point.from01("01001")) == 0


def test_evaluate_constant():
    h = Constant(4)
    assert all(evaluate(h, Point(v, 4)) == 0 for v in range(16))


def test_evaluate_parity():
    h = Parity(5, (0, 1))
    assert evaluate(h, Point.from01("11010")) == 0
    assert evaluate(h, Point.from01("10010")) == 1


def test_evaluate_rejects_dimension_mismatch():
    h = CoordinateProjection(5, 3)
    with pytest.raises(DimensionMismatch):
        evaluate(h, Point(0, 4))


def test_subset_and_pair_collapse():
    h = CoordinateSubset(4, (1, 3))
    assert evaluate(h, Point.from01("0101")) == 3
    pc = PairCollapse(3, 1, 6)
    assert evaluate(pc, Point(1, 3)) == 0
    assert evaluate(pc, Point(6, 3)) == 0
    labels = {evaluate(pc, Point(v, 3)) for v in range(8)}
    assert len(labels) == 7  # the pair shares one label, the rest stay apart


def test_collision_codes_match_eval():
    fns = [
        CoordinateProjection(4, 2),
        CoordinateSubset(4, (0, 3)),
        Parity(4, (1, 2, 3)),
        Constant(4),
        PairCollapse(4, 3, 9),
        MinHashPermutation(4, (2, 0, 3, 1)),
        Concatenation((CoordinateProjection(4, 1), Parity(4, (0, 2)))),
    ]
    for h in fns:
        codes = h.collision_codes()
        raw = [h(Point(v, 4)) for v in range(16)]
        for a in range(16):
            for b in range(16):
                assert (codes[a] == codes[b]) == (raw[a] == raw[b])


# ---------------------------------------------------------------------------
# label packing


@given(st.lists(st.integers(2, 40), min_size=1, max_size=6))
def test_packing_bijective(bounds):
    g = np.random.default_rng(0)
    labels = tuple(int(g.integers(0, b)) for b in bounds)
    packed = pack_labels(labels, bounds)
    assert unpack_label(packed, bounds) == labels
    assert 0 <= packed < math.prod(bounds)


def test_packing_validates():
    with pytest.raises(ValueError):
        pack_labels((5,), (4,))
    with pytest.raises(ValueError):
        unpack_label(100, (4, 4))


def test_concatenation_collides_iff_components_do():
    parts = (CoordinateProjection(3, 0), Parity(3, (1, 2)))
    h = Concatenation(parts)
    for a in range(8):
        for b in range(8):
            x, y = Point(a, 3), Point(b, 3)
            assert (h(x) == h(y)) == all(p(x) == p(y) for p in parts)


# ---------------------------------------------------------------------------
# bit sampling


def test_bit_sampling_family_shape():
    fam = bit_sampling_family(3)
    assert len(fam.atoms) == 3
    assert all(w == Fraction(1, 3) for w, _ in fam.atoms)
    single = bit_sampling_family(1)
    assert len(single.atoms) == 1 and single.atoms[0][0] == 1
    with pytest.raises(ValueError):
        bit_sampling_family(0)


def test_bit_sampling_exact_sensitivity_d8():
    prof = exact_sensitivity(bit_sampling_family(8), 1, 2)
    assert prof.p_exact == Fraction(7, 8)
    assert prof.q_exact == Fraction(6, 8)
    prof = exact_sensitivity(bit_sampling_family(8), 2, 4)
    assert prof.p_exact == Fraction(6, 8)
    assert prof.q_exact == Fraction(4, 8)


def test_bit_sampling_profile_values():
    prof = bit_sampling_profile(100, 10, 2)
    assert prof.p == 0.9 and prof.q == 0.8
    assert prof.rho == pytest.approx(0.4721647344828152, abs=1e-12)
    prof = bit_sampling_profile(10**5, 1, 2)
    assert prof.rho == pytest.approx(0.5, abs=1e-4)
    with pytest.raises(ValueError, match="degenerate q"):
        bit_sampling_profile(10, 4, 3)


def test_bit_sampling_rho_increases_to_limit():
    # rho climbs toward 1/c as r/d shrinks
    rhos = [bit_sampling_profile(d, 1, 2).rho for d in (10, 100, 1000, 10**5)]
    assert rhos == sorted(rhos)
    assert all(r < 0.5 for r in rhos)


@given(st.integers(2, 14))
@settings(deadline=None)
def test_bit_sampling_sensitivity_formula_all_thresholds(d):
    by_dist = collision_by_distance(bit_sampling_family(d))
    for m in range(d + 1):
        assert by_dist[m] == Fraction(d - m, d)


# ---------------------------------------------------------------------------
# power


def test_power_identity():
    fam = bit_sampling_family(4)
    p1 = power(fam, 1)
    prof = exact_sensitivity(p1, 1, 2)
    base = exact_sensitivity(fam, 1, 2)
    assert prof.p_exact == base.p_exact and prof.q_exact == base.q_exact
    with pytest.raises(ValueError):
        power(fam, 0)


def test_power_bit_sampling_squares():
    prof = exact_sensitivity(power(bit_sampling_family(8), 2), 1, 2)
    assert prof.p_exact == Fraction(7, 8) ** 2
    assert prof.q_exact == Fraction(6, 8) ** 2


@settings(deadline=None, max_examples=30)
@given(
    d=st.integers(2, 6),
    k=st.integers(1, 3),
    seed=st.integers(0, 10**6),
)
def test_power_collision_probability_is_kth_power(d, k, seed):
    g = np.random.default_rng(seed)
    fns = [
        ExplicitTable(d, tuple(int(v) for v in g.integers(0, 3, 1 << d)))
        for _ in range(int(g.integers(1, 4)))
    ]
    raw = g.random(len(fns)) + 0.05
    weights = [float(w) for w in raw / raw.sum()]
    weights[-1] = float(1 - math.fsum(weights[:-1]))
    fam = finite_family(fns, weights)
    powered = power(fam, k)
    x = Point(int(g.integers(0, 1 << d)), d)
    y = Point(int(g.integers(0, 1 << d)), d)
    base = collision_probability(fam, x, y)
    assert collision_probability(powered, x, y) == base**k


def test_power_large_support_falls_back_to_sampling():
    fam = power(bit_sampling_family(128), 57)
    assert fam.atoms is None
    fns = fam.sample(3, seed=11)
    assert all(len(f.parts) == 57 for f in fns)
    assert fam.sample(3, seed=11) == fns


# ---------------------------------------------------------------------------
# minhash


def _jaccard(a: int, b: int) -> Fraction:
    inter = (a & b).bit_count()
    union = (a | b).bit_count()
    return Fraction(inter, union) if union else Fraction(1)


def test_minhash_identical_and_disjoint():
    fam = minhash_family(4, exact=True)
    a = Point.from01("1010")
    assert collision_probability(fam, a, a) == 1
    b = Point.from01("0101")
    assert collision_probability(fam, a, b) == 0


def test_minhash_one_of_three():
    fam = minhash_family(4, exact=True)
    a = Point.from01("1100")
    b = Point.from01("0110")
    assert collision_probability(fam, a, b) == Fraction(1, 3)


@settings(deadline=None, max_examples=25)
@given(d=st.integers(2, 5), av=st.integers(0, 31), bv=st.integers(0, 31))
def test_minhash_collision_law_matches_jaccard(d, av, bv):
    mask = (1 << d) - 1
    a, b = Point(av & mask, d), Point(bv & mask, d)
    fam = minhash_family(d, exact=True)
    assert len(fam.atoms) == math.factorial(d)
    assert collision_probability(fam, a, b) == _jaccard(a.value, b.value)


def test_minhash_empty_sets_collide():
    h = MinHashPermutation(4, (0, 1, 2, 3))
    empty = Point(0, 4)
    assert h(empty) == 4  # reserved sentinel
    assert h(empty) != h(Point.from01("1000"))


def test_minhash_sampler_reproducible():
    fam = minhash_family(12)
    assert fam.atoms is None
    assert fam.sample(5, seed=3) == fam.sample(5, seed=3)
    assert fam.sample(5, seed=3) != fam.sample(5, seed=4)


# ---------------------------------------------------------------------------
# trivial family


def test_trivial_family_d2():
    fam = trivial_family(2, 1)
    assert len(fam.atoms) == 4
    prof = exact_sensitivity(fam, 1, 2)
    assert prof.q == 0
    assert prof.rho is None and "trivial regime" in prof.rho_note


def test_trivial_family_d3_collision_rate():
    fam = trivial_family(3, 1)
    assert len(fam.atoms) == 12
    x, y = Point(0, 3), Point(1, 3)
    assert collision_probability(fam, x, y) == Fraction(1, 12)


def test_trivial_family_far_pairs_never_collide():
    fam = trivial_family(4, 1)
    for xv in range(16):
        for yv in range(16):
            if (xv ^ yv).bit_count() >= 2:
                assert collision_probability(fam, Point(xv, 4), Point(yv, 4)) == 0


def test_trivial_family_rejects_r_zero():
    with pytest.raises(ValueError):
        trivial_family(3, 0)


# ---------------------------------------------------------------------------
# exact sensitivity


def test_constant_family_profile():
    from lshlab.hashing import constant_family

    prof = exact_sensitivity(constant_family(4), 1, 2)
    assert prof.p == 1 and prof.q == 1
    assert prof.rho is None


def test_exact_sensitivity_validates():
    fam = bit_sampling_family(4)
    with pytest.raises(ValueError):
        exact_sensitivity(fam, 3, 2)
    with pytest.raises(ValueError):
        exact_sensitivity(fam, 1, 7)
    with pytest.raises(ValueError):
        exact_sensitivity(power(bit_sampling_family(128), 2), 1, 2)


def test_symmetric_path_agrees_with_full_enumeration():
    fam = bit_sampling_family(6)
    general = finite_family([h for _, h in fam.atoms])  # same atoms, symmetry flag off
    for r, cr in ((1, 2), (2, 4), (1, 5)):
        a = exact_sensitivity(fam, r, cr)
        b = exact_sensitivity(general, r, cr)
        assert a.p_exact == b.p_exact and a.q_exact == b.q_exact


def test_mixed_weights_full_path():
    fns = [CoordinateProjection(4, 0), Constant(4)]
    fam = finite_family(fns, [0.25, 0.75])
    prof = exact_sensitivity(fam, 1, 3)
    # constant always collides; projection 0 collides unless coordinate 0 differs
    assert prof.p == pytest.approx(0.75 + 0.25 * 0, abs=1e-12) or prof.p <= 1
    x, y = Point(0, 4), Point(1, 4)
    assert collision_probability(fam, x, y) == Fraction(3, 4)


# ---------------------------------------------------------------------------
# family plumbing


def test_family_weight_validation():
    fns = [Constant(3), CoordinateProjection(3, 0)]
    with pytest.raises(ValueError):
        finite_family(fns, [0.5, 0.6])
    with pytest.raises(ValueError):
        finite_family(fns, [1.5, -0.5])


def test_family_sampling_reproducible():
    fam = bit_sampling_family(9)
    assert fam.sample(20, seed=42) == fam.sample(20, seed=42)


def test_descriptor_roundtrip_named_families():
    for fam in (
        bit_sampling_family(6),
        minhash_family(5),
        minhash_family(4, exact=True),
        trivial_family(3, 1),
        power(bit_sampling_family(5), 2),
        power(power(bit_sampling_family(4), 2), 2),
    ):
        doc = family_descriptor(fam)
        clone = family_from_descriptor(doc)
        assert family_descriptor(clone) == doc
        assert clone.dim == fam.dim
        assert clone.sample(4, seed=9) == fam.sample(4, seed=9)
        assert family_from_json(family_to_json(fam)).sample(2, seed=1) == fam.sample(2, seed=1)


def test_descriptor_roundtrip_generic_finite():
    g = np.random.default_rng(8)
    fns = [
        ExplicitTable(3, tuple(int(v) for v in g.integers(0, 4, 8))),
        Parity(3, (0, 2)),
    ]
    raw = [0.3, 0.7]
    fam = finite_family(fns, raw)
    doc = family_descriptor(fam)
    clone = family_from_descriptor(doc)
    assert clone.atoms == fam.atoms


def test_function_descriptor_roundtrip():
    fns = [
        CoordinateProjection(7, 2),
        CoordinateSubset(7, (1, 4)),
        Parity(7, (0, 6)),
        Constant(7),
        ExplicitTable(2, (3, 1, 4, 1)),
        MinHashPermutation(3, (2, 0, 1)),
        PairCollapse(4, 2, 13),
        Concatenation((CoordinateProjection(4, 0), CoordinateProjection(4, 3))),
    ]
    for h in fns:
        assert function_from_descriptor(function_descriptor(h)) == h
