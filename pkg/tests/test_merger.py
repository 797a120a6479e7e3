from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmult import errors
from ffmult import merger as mg
from ffmult.ff import field_make, rng_stream
from ffmult.selftest import (
    clip_redistribute,
    excess_mass_grid_minimum,
    statistical_distance_subset_max,
)

F4 = field_make(2, 2)
F5 = field_make(5)
F64 = field_make(2, 6)


# ---------------------------------------------------------------------------
# merger construction and evaluation
# ---------------------------------------------------------------------------

def test_lagrange_basis_two_nodes():
    ms = mg.merger_make(F5, 1, 2)
    assert ms.gamma == (0, 1)
    # c1(u) = 1 - u, c2(u) = u
    assert ms.basis[0] == (1, 4)
    assert ms.basis[1] == (0, 1)


def test_single_block_merger_is_identity():
    ms = mg.merger_make(F5, 2, 1)
    assert ms.basis == ((1,),)
    for u in range(5):
        assert mg.f_dw(ms, [(3, 1)], u) == (3, 1)


def test_too_few_field_elements():
    with pytest.raises(errors.TooFewFieldElements):
        mg.merger_make(field_make(2), 1, 3)


def test_duplicate_nodes_rejected():
    with pytest.raises(errors.DuplicateNodes):
        mg.merger_make(F5, 1, 2, gamma=(1, 1))


def test_f_dw_node_interpolation_and_unity():
    ms = mg.merger_make(F4, 2, 3)
    blocks = [(0, 1), (2, 3), (1, 1)]
    for i, g in enumerate(ms.gamma):
        assert mg.f_dw(ms, blocks, g) == blocks[i]
    for u in range(4):
        assert mg.f_dw(ms, [(2, 3)] * 3, u) == (2, 3)


def test_f_dw_worked_example_f5():
    ms = mg.merger_make(F5, 1, 2)
    # (1-4)*2 + 4*3 = 6 = 1 mod 5
    assert mg.f_dw(ms, [(2,), (3,)], 4) == (1,)


def test_f_dw_dimension_mismatch():
    ms = mg.merger_make(F5, 2, 2)
    with pytest.raises(errors.DimensionMismatch):
        mg.f_dw(ms, [(1, 2)], 0)


# ---------------------------------------------------------------------------
# seed length
# ---------------------------------------------------------------------------

def test_seed_length_examples():
    assert mg.seed_length(Fraction(1, 2), Fraction(1, 2), 2) == 6
    assert mg.seed_length(1, Fraction(1, 2), 1) == 2
    with pytest.raises(errors.InvalidParameters):
        mg.seed_length(0, Fraction(1, 2), 2)
    with pytest.raises(errors.InvalidParameters):
        mg.seed_length(Fraction(1, 2), 1, 2)


def test_seed_length_monotone_in_delta():
    prev = 0
    for denom in (1, 2, 3, 4, 5, 8, 16):
        d = mg.seed_length(Fraction(1, denom), Fraction(1, 2), 2)
        assert d >= prev
        prev = d


def test_seed_length_meets_size_hypothesis():
    for delta, eps, blocks in [
        (Fraction(1, 2), Fraction(1, 2), 2),
        (Fraction(1, 3), Fraction(1, 4), 3),
        (Fraction(2, 3), Fraction(1, 2), 5),
    ]:
        d = mg.seed_length(delta, eps, blocks)
        ratio = Fraction(2 * blocks) / eps
        a, b = delta.numerator, delta.denominator
        # q = 2^d satisfies q^delta >= 2L/eps, compared via b-th powers
        assert Fraction(2) ** (d * a) >= ratio ** b
        if d > 0:
            assert Fraction(2) ** ((d - 1) * a) < ratio ** b  # and d is minimal


# ---------------------------------------------------------------------------
# exact distributions
# ---------------------------------------------------------------------------

def test_single_block_distribution_uniform():
    ms = mg.merger_make(F4, 1, 1)
    src = mg.SourceSpec(F4, 1, 1, 0, {})
    dist = mg.exact_output_distribution(ms, src)
    assert dist == mg.Distribution.uniform([(c,) for c in range(4)])


def test_identical_blocks_distribution_uniform():
    ms = mg.merger_make(F4, 1, 2)
    src = mg.SourceSpec(F4, 1, 2, 0, {1: mg.IdentityMap()})
    dist = mg.exact_output_distribution(ms, src)
    assert dist == mg.Distribution.uniform([(c,) for c in range(4)])


def test_constant_zero_block_hand_table():
    # 16 (x, u) pairs: u with c1(u) = 0 sends everything to zero
    ms = mg.merger_make(F4, 1, 2)
    src = mg.SourceSpec(F4, 1, 2, 0, {1: mg.ConstantMap((0,))})
    dist = mg.exact_output_distribution(ms, src)
    expected = {(0,): Fraction(7, 16), (1,): Fraction(3, 16),
                (2,): Fraction(3, 16), (3,): Fraction(3, 16)}
    assert dist == mg.Distribution(expected, 4)


def test_distribution_dimension_mismatch():
    ms = mg.merger_make(F4, 2, 2)
    src = mg.SourceSpec(F4, 1, 2, 0, {1: mg.IdentityMap()})
    with pytest.raises(errors.DimensionMismatch):
        mg.exact_output_distribution(ms, src)


def test_uniform_index_placement():
    # the uniform block may sit at any index; node interpolation still holds
    ms = mg.merger_make(F5, 1, 2)
    src = mg.SourceSpec(F5, 1, 2, 1, {0: mg.ConstantMap((2,))})
    dist = mg.exact_output_distribution(ms, src)
    assert sum(dist.probs.values()) == 1
    assert dist.universe_size == 5


# ---------------------------------------------------------------------------
# statistical distance and entropy
# ---------------------------------------------------------------------------

def test_statistical_distance_examples():
    u = mg.Distribution.uniform([0, 1])
    assert mg.statistical_distance(u, u) == 0
    a = mg.Distribution.point_mass(0, universe_size=2)
    b = mg.Distribution.point_mass(1, universe_size=2)
    assert mg.statistical_distance(a, b) == 1
    p = mg.Distribution({0: Fraction(3, 4), 1: Fraction(1, 4)}, 2)
    assert mg.statistical_distance(p, u) == Fraction(1, 4)


def test_statistical_distance_universe_mismatch():
    with pytest.raises(errors.UniverseMismatch):
        mg.statistical_distance(
            mg.Distribution.uniform([0, 1]), mg.Distribution.uniform([0, 1, 2])
        )


def rational_dists(size):
    return st.lists(
        st.integers(0, 12), min_size=size, max_size=size
    ).filter(lambda w: sum(w) > 0).map(
        lambda w: mg.Distribution(
            {i: Fraction(x, sum(w)) for i, x in enumerate(w) if x}, size
        )
    )


@settings(max_examples=40, deadline=None)
@given(rational_dists(4), rational_dists(4), rational_dists(4))
def test_statistical_distance_is_a_metric(p, r, s):
    assert mg.statistical_distance(p, r) == mg.statistical_distance(r, p)
    assert mg.statistical_distance(p, p) == 0
    assert (
        mg.statistical_distance(p, r)
        <= mg.statistical_distance(p, s) + mg.statistical_distance(s, r)
    )


@settings(max_examples=30, deadline=None)
@given(rational_dists(5), rational_dists(5))
def test_half_l1_equals_subset_maximum(p, r):
    assert mg.statistical_distance(p, r) == statistical_distance_subset_max(p, r)


def test_min_entropy_examples():
    u8 = mg.Distribution.uniform(range(8))
    h = mg.min_entropy(u8)
    assert h.max_prob == Fraction(1, 8)
    assert h.at_least(3) and not h.at_least(4)
    assert h.bits == 3.0
    assert mg.min_entropy(mg.Distribution.point_mass("x")).bits == 0.0
    p = mg.Distribution({0: Fraction(3, 4), 1: Fraction(1, 4)}, 2)
    assert mg.min_entropy(p).max_prob == Fraction(3, 4)
    assert mg.min_entropy(p).at_least(Fraction(2, 5))  # 3/4 <= 2^(-2/5)
    assert not mg.min_entropy(p).at_least(Fraction(1, 2))  # 3/4 > 2^(-1/2)


def test_distance_to_min_entropy_examples():
    u4 = mg.Distribution.uniform(range(4))
    assert mg.distance_to_min_entropy(u4, 2) == 0
    point = mg.Distribution.point_mass(0, universe_size=2)
    assert mg.distance_to_min_entropy(point, 1) == Fraction(1, 2)
    tri = mg.Distribution({0: Fraction(1, 2), 1: Fraction(1, 4), 2: Fraction(1, 4)}, 3)
    assert mg.distance_to_min_entropy(tri, threshold=Fraction(1, 3)) == Fraction(1, 6)


def test_distance_zero_iff_capped():
    p = mg.Distribution({0: Fraction(1, 2), 1: Fraction(1, 2)}, 4)
    assert mg.distance_to_min_entropy(p, 1) == 0
    assert mg.distance_to_min_entropy(p, 2) > 0


def test_universe_too_small():
    point = mg.Distribution.point_mass(0, universe_size=2)
    with pytest.raises(errors.UniverseTooSmall):
        mg.distance_to_min_entropy(point, 2)  # would need 4 outcomes


def test_distance_parameter_validation():
    u = mg.Distribution.uniform(range(4))
    with pytest.raises(errors.InvalidParameters):
        mg.distance_to_min_entropy(u)
    with pytest.raises(errors.InvalidParameters):
        mg.distance_to_min_entropy(u, 1, threshold=Fraction(1, 2))
    with pytest.raises(errors.InvalidParameters):
        mg.distance_to_min_entropy(u, Fraction(3, 2))  # non-integer bit count


def test_excess_mass_against_lp_oracle():
    scipy = pytest.importorskip("scipy.optimize")
    rng = rng_stream(808, 0)
    for _ in range(25):
        size = 2 + int(rng.integers(5))
        weights = [int(w) for w in rng.integers(0, 10, size=size)]
        if sum(weights) == 0:
            continue
        total = sum(weights)
        p = mg.Distribution(
            {i: Fraction(w, total) for i, w in enumerate(weights) if w}, size
        )
        cap = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1)][int(rng.integers(4))]
        if size * cap < 1:
            continue
        got = mg.distance_to_min_entropy(p, threshold=cap)
        # LP: minimize (1/2) sum |p_i - r_i| over 0 <= r_i <= cap, sum r = 1
        import numpy as np

        pv = np.array([float(p.mass(i)) for i in range(size)])
        # variables: r (size), s (size) with s_i >= |p_i - r_i|
        c = np.concatenate([np.zeros(size), 0.5 * np.ones(size)])
        A_ub, b_ub = [], []
        for i in range(size):
            row1 = np.zeros(2 * size)
            row1[i], row1[size + i] = 1.0, -1.0
            A_ub.append(row1)
            b_ub.append(pv[i])
            row2 = np.zeros(2 * size)
            row2[i], row2[size + i] = -1.0, -1.0
            A_ub.append(row2)
            b_ub.append(-pv[i])
        A_eq = [np.concatenate([np.ones(size), np.zeros(size)])]
        res = scipy.linprog(
            c,
            A_ub=np.array(A_ub),
            b_ub=np.array(b_ub),
            A_eq=np.array(A_eq),
            b_eq=[1.0],
            bounds=[(0.0, float(cap))] * size + [(0.0, None)] * size,
            method="highs",
        )
        assert res.success
        assert abs(res.fun - float(got)) < 1e-9


def test_excess_mass_against_exact_grid_oracle():
    rng = rng_stream(808, 1)
    for _ in range(10):
        size = 2 + int(rng.integers(3))
        weights = [int(w) for w in rng.integers(0, 6, size=size)]
        if sum(weights) == 0:
            continue
        total = sum(weights)
        p = mg.Distribution(
            {i: Fraction(w, total) for i, w in enumerate(weights) if w}, size
        )
        cap = Fraction(1, 2)
        if size * cap < 1:
            continue
        got = mg.distance_to_min_entropy(p, threshold=cap)
        assert got == excess_mass_grid_minimum(p, cap)
        witness = clip_redistribute(p, cap)
        assert witness.max_prob() <= cap
        assert mg.statistical_distance(p, witness) == got


# ---------------------------------------------------------------------------
# the merger theorem
# ---------------------------------------------------------------------------

def test_flagship_parameters_n1():
    report = mg.verify_merger_theorem(Fraction(1, 2), Fraction(1, 2), 2, 1)
    assert report["seed_length"] == 6 and report["q"] == 64
    assert report["entropy_threshold_bits"] == 3
    assert report["all_ok"]
    labels = [e["source"]["label"] for e in report["sources"]]
    assert "identical-blocks" in labels and "affine-image" in labels
    for e in report["sources"]:
        assert e["distance"] <= Fraction(1, 2)


def test_single_block_theorem_distance_zero():
    report = mg.verify_merger_theorem(Fraction(1, 2), Fraction(1, 2), 1, 1)
    assert all(e["distance"] == 0 for e in report["sources"])


def test_enumeration_cap():
    with pytest.raises(errors.EnumerationTooLarge):
        mg.verify_merger_theorem(Fraction(1, 2), Fraction(1, 2), 2, 4)


def test_non_integer_threshold_rejected():
    with pytest.raises(errors.InvalidParameters):
        mg.verify_merger_theorem(Fraction(1, 3), Fraction(1, 3), 2, 1)


def test_distribution_validation():
    with pytest.raises(errors.InvalidParameters):
        mg.Distribution({0: Fraction(1, 2)}, 2)  # masses do not sum to 1
    with pytest.raises(errors.InvalidParameters):
        mg.Distribution({0: Fraction(3, 2), 1: Fraction(-1, 2)}, 2)
