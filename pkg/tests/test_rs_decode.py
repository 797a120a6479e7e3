import itertools
from fractions import Fraction
from math import comb

import pytest

from ffmult import errors
from ffmult import rs_decode as rs
from ffmult.ff import field_make, rng_stream
from ffmult.interpolate import count_weighted_monomials
from ffmult.mvpoly import MultiPoly, multiplicity

F3 = field_make(3)
F5 = field_make(5)
F7 = field_make(7)

WORKED = rs.RSInstance(F5, (0, 1, 2, 3, 4), (0, 1, 2, 0, 0), k=1, t=3)


# ---------------------------------------------------------------------------
# instances and bounds
# ---------------------------------------------------------------------------

def test_instance_validation():
    with pytest.raises(errors.InvalidParameters):
        rs.RSInstance(F5, (0, 0, 1), (1, 2, 3), k=1, t=2)  # repeated alpha
    with pytest.raises(errors.InvalidParameters):
        rs.RSInstance(F5, (0, 1, 2), (1, 2, 3), k=3, t=2)  # k >= n
    with pytest.raises(errors.InvalidParameters):
        rs.RSInstance(F5, (0, 1, 2), (1, 2, 3), k=0, t=2)  # k = 0 excluded
    with pytest.raises(errors.InvalidParameters):
        rs.RSInstance(F5, (0, 1, 2), (1, 2, 3), k=1, t=4)  # t > n impossible


def test_rate_and_gamma():
    assert WORKED.rate == Fraction(1, 5)
    assert WORKED.gamma == Fraction(3, 5)


def test_list_size_bound_values():
    assert rs.list_size_bound(Fraction(3, 5), Fraction(1, 5)) == Fraction(15, 2)
    # gamma = 1, rate -> 0: the bound approaches 2 from above
    tiny = Fraction(1, 10 ** 6)
    assert rs.list_size_bound(1, tiny) - 2 < Fraction(1, 10 ** 5)
    assert rs.list_size_bound(1, tiny) > 2
    # barely inside the Johnson region: large but finite and positive
    near = rs.list_size_bound(Fraction(1, 2), Fraction(1, 4) - Fraction(1, 10 ** 6))
    assert near > 1000


def test_list_size_bound_validation():
    with pytest.raises(errors.InvalidParameters):
        rs.list_size_bound(Fraction(1, 2), Fraction(1, 2))  # gamma^2 <= R
    with pytest.raises(errors.InvalidParameters):
        rs.list_size_bound(Fraction(3, 2), Fraction(1, 2))


# ---------------------------------------------------------------------------
# parameter selection
# ---------------------------------------------------------------------------

def test_choose_params_default_slack():
    params = rs.choose_params(WORKED)
    assert params.m >= 1
    assert WORKED.t * params.m > params.d
    assert comb(params.m + 1, 2) * WORKED.n < count_weighted_monomials(
        WORKED.k, params.d, params.theta
    )
    assert params.theta == Fraction(5, 7)


def test_choose_params_small_slack_shrinks_m():
    small = rs.choose_params(WORKED, Fraction(1, 16))
    big = rs.choose_params(WORKED)
    assert small.m <= big.m
    assert small.m == 2 and small.d == 5


def test_below_johnson_radius():
    inst = rs.RSInstance(F5, (0, 1, 2, 3), (0, 0, 0, 0), k=1, t=2)
    # gamma^2 = 1/4 = R exactly
    with pytest.raises(errors.BelowJohnsonRadius):
        rs.choose_params(inst)
    with pytest.raises(errors.BelowJohnsonRadius):
        rs.list_decode(inst)


def test_no_feasible_m_cap(monkeypatch):
    monkeypatch.setattr(rs, "M_SEARCH_CAP", 1)
    with pytest.raises(errors.NoFeasibleM):
        rs.choose_params(WORKED, Fraction(1, 16))  # needs m = 2


# ---------------------------------------------------------------------------
# interpolation stage
# ---------------------------------------------------------------------------

def test_gs_interpolate_single_point():
    inst = rs.RSInstance(F3, (0, 1), (0, 0), k=1, t=2)
    params = rs.GSParams(m=1, d=1, theta=Fraction(1, 2), ydeg_cap=1, eps=Fraction(1, 4))
    Q = rs.gs_interpolate(inst, params)
    assert not Q.is_zero
    assert Q.eval_codes((0, 0)) == 0


def test_gs_interpolate_multiplicity_postcondition():
    params = rs.choose_params(WORKED, Fraction(1, 16))
    Q = rs.gs_interpolate(WORKED, params, verify=True)
    for a, b in zip(WORKED.alphas, WORKED.betas):
        assert multiplicity(Q, (a, b)) >= params.m
    # weighted degree stays within the bound
    assert all(i + WORKED.k * j <= params.d for (i, j) in Q.terms)
    assert all(j <= params.ydeg_cap for (_, j) in Q.terms)


# ---------------------------------------------------------------------------
# Y-root extraction
# ---------------------------------------------------------------------------

def test_y_roots_simple():
    Q = MultiPoly(F3, 2, {(0, 1): 1, (1, 0): F3.neg(1)})  # Y - X
    assert rs.y_roots(Q, 1) == [(0, 1)]


def test_y_roots_two_roots_canonical_order():
    # (Y - X)(Y - 1) over F_3: constant 1 sorts before X
    Y = MultiPoly(F3, 2, {(0, 1): 1})
    X = MultiPoly(F3, 2, {(1, 0): 1})
    one = MultiPoly.constant(F3, 2, 1)
    Q = (Y - X) * (Y - one)
    assert rs.y_roots(Q, 1) == [(1, 0), (0, 1)]


def test_y_roots_no_roots():
    Q = MultiPoly(F3, 2, {(0, 2): 1, (0, 0): 1})  # Y^2 + 1, -1 non-square mod 3
    assert rs.y_roots(Q, 0) == []


def test_y_roots_zero_polynomial_rejected():
    with pytest.raises(errors.ZeroPolynomial):
        rs.y_roots(MultiPoly.zero(F3, 2), 1)


def test_y_roots_with_x_power_factor():
    # X^2 * (Y - X): stripping the X factor must not lose the root
    Y = MultiPoly(F3, 2, {(0, 1): 1})
    X = MultiPoly(F3, 2, {(1, 0): 1})
    Q = X * X * (Y - X)
    assert (0, 1) in rs.y_roots(Q, 1)


def test_y_roots_matches_bruteforce_random():
    rng = rng_stream(911, 0)
    from ffmult.selftest import random_poly

    for _ in range(30):
        q = (3, 5)[int(rng.integers(2))]
        spec = field_make(q)
        k = int(rng.integers(3))
        Q = random_poly(spec, 2, rng, max_deg=4, max_terms=5, nonzero=True)
        got = rs.y_roots(Q, k, cross_validate=False)
        want = rs.y_roots_bruteforce(Q, k)
        assert got == want


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

def test_brute_force_worked_example():
    assert rs.brute_force_decode(WORKED) == [(0, 0), (0, 1)]


def test_brute_force_search_cap():
    f = field_make(2, 6)
    inst = rs.RSInstance(f, tuple(range(8)), tuple(range(8)), k=3, t=8)
    with pytest.raises(errors.SearchSpaceTooLarge):
        rs.brute_force_decode(inst)


def test_brute_force_contains_interpolant_at_full_agreement():
    # k = q - 1, t = n: the Lagrange interpolant always qualifies
    rng = rng_stream(911, 1)
    for _ in range(5):
        betas = tuple(int(b) for b in rng.integers(5, size=5))
        inst = rs.RSInstance(F5, (0, 1, 2, 3, 4), betas, k=4, t=5)
        out = rs.brute_force_decode(inst)
        assert len(out) == 1
        f = out[0]
        assert all(
            rs.poly_eval_univariate(f, a, F5) == b
            for a, b in zip(inst.alphas, inst.betas)
        )


def test_list_decode_worked_example():
    out = rs.list_decode(WORKED, eps=Fraction(1, 16))
    assert out == [(0, 0), (0, 1)]  # the zero polynomial and X


def test_list_decode_default_slack_end_to_end():
    # the default slack needs m = 12, d = 35: one full run through the
    # large interpolation system keeps that path honest
    assert rs.list_decode(WORKED) == [(0, 0), (0, 1)]


def test_list_decode_perfect_agreement_returns_codeword():
    betas = tuple(F5.add(F5.mul(2, a), 3) for a in range(5))  # f = 3 + 2X
    inst = rs.RSInstance(F5, (0, 1, 2, 3, 4), betas, k=1, t=5)
    assert rs.list_decode(inst, eps=Fraction(1, 16)) == [(3, 2)]


def test_oracle_equivalence_random_spot():
    rng = rng_stream(911, 2)
    params_cache = {}
    for _ in range(60):
        q, k, t = [(5, 1, 3), (7, 1, 4), (7, 2, 5)][int(rng.integers(3))]
        spec = field_make(q)
        betas = tuple(int(b) for b in rng.integers(q, size=q))
        inst = rs.RSInstance(spec, tuple(range(q)), betas, k=k, t=t)
        key = (q, k, t)
        if key not in params_cache:
            params_cache[key] = rs.choose_params(inst, Fraction(1, 16))
        assert rs.list_decode(inst, params=params_cache[key]) == rs.brute_force_decode(inst)


def test_list_size_within_bound_random():
    rng = rng_stream(911, 3)
    bound = rs.list_size_bound(Fraction(3, 5), Fraction(1, 5))
    for _ in range(100):
        betas = tuple(int(b) for b in rng.integers(5, size=5))
        inst = rs.RSInstance(F5, (0, 1, 2, 3, 4), betas, k=1, t=3)
        assert len(rs.brute_force_decode(inst)) <= bound


def test_decode_all_words_tiny_field():
    # exhaustive equivalence on every received word over F_3
    inst0 = rs.RSInstance(F3, (0, 1, 2), (0, 0, 0), k=1, t=3)
    params = rs.choose_params(inst0, Fraction(1, 16))
    for betas in itertools.product(range(3), repeat=3):
        inst = rs.RSInstance(F3, (0, 1, 2), betas, k=1, t=3)
        assert rs.list_decode(inst, params=params) == rs.brute_force_decode(inst)


def test_instance_json_roundtrip(tmp_path):
    data = rs.instance_to_json(WORKED)
    assert data == {
        "field": "5",
        "alphas": [0, 1, 2, 3, 4],
        "betas": [0, 1, 2, 0, 0],
        "k": 1,
        "t": 3,
    }
    again = rs.instance_from_json(data)
    assert again == WORKED
