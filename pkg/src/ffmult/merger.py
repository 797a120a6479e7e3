"""The curve merger over F_q^n with exact statistical analysis.

The merger evaluates the canonical degree-(L-1) curve through L input
blocks at a seed point u: output = sum_i c_i(u) * x_i, where the c_i are
the Lagrange basis polynomials on L distinct nodes.  Output distributions
of adversarial somewhere-random sources are computed by full enumeration
with exact rational probabilities; closeness to a min-entropy threshold is
the excess-mass distance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DimensionMismatch,
    DuplicateNodes,
    EnumerationTooLarge,
    InvalidParameters,
    TooFewFieldElements,
    UniverseMismatch,
    UniverseTooSmall,
)
from .ff import FieldSpec, field_make
from .mvpoly import coerce_point

ENUMERATION_CAP = 10 ** 7


# -- exact finite distributions -------------------------------------------------


class Distribution:
    """A finite probability distribution with exact rational masses.

    Only the support is stored; ``universe_size`` fixes the ambient outcome
    space (needed by min-entropy thresholds on sparse supports).
    """

    __slots__ = ("probs", "universe_size")

    def __init__(self, probs: dict, universe_size: int):
        clean = {}
        total = Fraction(0)
        for outcome, mass in probs.items():
            mass = Fraction(mass)
            if mass < 0:
                raise InvalidParameters(f"negative probability for {outcome}")
            if mass:
                clean[outcome] = mass
                total += mass
        if total != 1:
            raise InvalidParameters(f"probabilities sum to {total}, not 1")
        if len(clean) > universe_size:
            raise InvalidParameters("support exceeds the declared universe")
        self.probs = clean
        self.universe_size = universe_size

    @classmethod
    def uniform(cls, outcomes) -> "Distribution":
        outcomes = list(outcomes)
        mass = Fraction(1, len(outcomes))
        return cls({o: mass for o in outcomes}, len(outcomes))

    @classmethod
    def point_mass(cls, outcome, universe_size: int = 1) -> "Distribution":
        return cls({outcome: Fraction(1)}, universe_size)

    def mass(self, outcome) -> Fraction:
        return self.probs.get(outcome, Fraction(0))

    def max_prob(self) -> Fraction:
        return max(self.probs.values())

    def __eq__(self, other):
        return (
            isinstance(other, Distribution)
            and self.universe_size == other.universe_size
            and self.probs == other.probs
        )

    def __repr__(self):
        return f"Distribution({len(self.probs)} outcomes of {self.universe_size})"


def statistical_distance(p: Distribution, r: Distribution) -> Fraction:
    """Half the L1 distance, equal to the max probability gap over events."""
    if p.universe_size != r.universe_size:
        raise UniverseMismatch(
            f"universes of size {p.universe_size} and {r.universe_size}"
        )
    keys = set(p.probs) | set(r.probs)
    return sum((abs(p.mass(o) - r.mass(o)) for o in keys), Fraction(0)) / 2


class MinEntropy:
    """Min-entropy as the exact rational max outcome probability.

    Comparisons against a threshold m go through max_prob <= 2^(-m), done on
    integers, so no floating point enters the decision.
    """

    __slots__ = ("max_prob",)

    def __init__(self, max_prob: Fraction):
        self.max_prob = Fraction(max_prob)

    @property
    def bits(self) -> float:
        from math import log2

        return -log2(self.max_prob)

    def at_least(self, m) -> bool:
        m = Fraction(m)
        a, b = m.numerator, m.denominator
        num, den = self.max_prob.numerator, self.max_prob.denominator
        if a >= 0:
            return num ** b * 2 ** a <= den ** b
        return num ** b <= den ** b * 2 ** (-a)

    def __eq__(self, other):
        if isinstance(other, MinEntropy):
            return self.max_prob == other.max_prob
        return NotImplemented

    def __repr__(self):
        return f"MinEntropy(max_prob={self.max_prob})"


def min_entropy(p: Distribution) -> MinEntropy:
    return MinEntropy(p.max_prob())


def min_entropy_threshold(m) -> Fraction:
    """The probability cap 2^(-m) for an integer-valued threshold m."""
    m = Fraction(m)
    if m.denominator != 1 or m < 0:
        raise InvalidParameters(
            f"threshold must be a non-negative integer number of bits, got {m}"
        )
    return Fraction(1, 2 ** m.numerator)


def distance_to_min_entropy(p: Distribution, m=None, *, threshold: Fraction | None = None) -> Fraction:
    """Minimum statistical distance from p to any distribution of min-entropy
    >= m on the same universe, by the excess-mass formula.

    Pass either an integer bit threshold m or the probability cap 2^(-m)
    directly as ``threshold`` (useful when 2^(-m) is rational but m is not).
    """
    if (m is None) == (threshold is None):
        raise InvalidParameters("pass exactly one of m and threshold")
    cap = min_entropy_threshold(m) if threshold is None else Fraction(threshold)
    if not 0 < cap <= 1:
        raise InvalidParameters(f"probability cap must lie in (0, 1], got {cap}")
    if p.universe_size * cap < 1:
        raise UniverseTooSmall(
            f"no distribution on {p.universe_size} outcomes has max probability <= {cap}"
        )
    return sum(
        (mass - cap for mass in p.probs.values() if mass > cap), Fraction(0)
    )


# -- the curve merger -------------------------------------------------------------


@dataclass(frozen=True)
class MergerSpec:
    """Field, block dimension, node set, and the Lagrange mixing basis.

    basis[i] holds the coefficients (low-to-high) of the unique degree
    (num_blocks - 1) polynomial that is 1 at gamma[i] and 0 at the other
    nodes; the basis sums to the constant 1.
    """

    spec: FieldSpec
    n: int
    num_blocks: int
    gamma: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    def mix_coeffs(self, u) -> tuple[int, ...]:
        """(c_1(u), ..., c_L(u)) for a seed element u."""
        uc = self.spec.coerce(u)
        return tuple(_uni_eval(c, uc, self.spec) for c in self.basis)


def _uni_eval(coeffs, x: int, spec: FieldSpec) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = spec.add(spec.mul(acc, x), c)
    return acc


def _uni_mul(a, b, spec: FieldSpec) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = spec.add(out[i + j], spec.mul(ai, bj))
    return out


def merger_make(spec: FieldSpec, n: int, num_blocks: int, gamma=None) -> MergerSpec:
    """Build the merger for L blocks of F_q^n, on L distinct nodes.

    gamma defaults to the first L elements in canonical enumeration order.
    """
    if spec.q < num_blocks:
        raise TooFewFieldElements(
            f"q = {spec.q} < {num_blocks} blocks: no distinct nodes available"
        )
    if num_blocks < 1:
        raise InvalidParameters("need at least one block")
    if gamma is None:
        gamma = tuple(range(num_blocks))
    else:
        gamma = tuple(spec.coerce(g) for g in gamma)
    if len(gamma) != num_blocks:
        raise DimensionMismatch(f"{len(gamma)} nodes for {num_blocks} blocks")
    if len(set(gamma)) != num_blocks:
        raise DuplicateNodes(f"nodes must be distinct, got {gamma}")

    basis = []
    for i, gi in enumerate(gamma):
        num = [1]
        denom = 1
        for j, gj in enumerate(gamma):
            if j == i:
                continue
            num = _uni_mul(num, [spec.neg(gj), 1], spec)
            denom = spec.mul(denom, spec.sub(gi, gj))
        inv = spec.inv(denom)
        coeffs = tuple(spec.mul(c, inv) for c in num)
        basis.append(coeffs + (0,) * (num_blocks - len(coeffs)))
    ms = MergerSpec(spec, n, num_blocks, gamma, tuple(basis))

    # construction invariants: interpolation conditions and partition of unity
    for i, gi in enumerate(gamma):
        for j, gj in enumerate(gamma):
            want = 1 if i == j else 0
            assert _uni_eval(ms.basis[i], gj, spec) == want
    total = [0] * num_blocks
    for coeffs in ms.basis:
        total = [spec.add(a, c) for a, c in zip(total, coeffs)]
    assert total[0] == 1 and not any(total[1:])
    return ms


def f_dw(ms: MergerSpec, blocks, u) -> tuple[int, ...]:
    """Evaluate the canonical curve through the blocks at seed u.

    f(blocks, gamma_i) returns block i exactly; when all blocks coincide the
    output is that common value for every u.
    """
    if len(blocks) != ms.num_blocks:
        raise DimensionMismatch(f"{len(blocks)} blocks, expected {ms.num_blocks}")
    pts = [coerce_point(ms.spec, ms.n, b) for b in blocks]
    mix = ms.mix_coeffs(u)
    spec = ms.spec
    out = []
    for coord in range(ms.n):
        acc = 0
        for ci, pt in zip(mix, pts):
            acc = spec.add(acc, spec.mul(ci, pt[coord]))
        out.append(acc)
    return tuple(out)


# -- adversarial sources ----------------------------------------------------------


class BlockMap:
    """A deterministic map F_q^n -> F_q^n used as a correlated block."""

    kind = "abstract"

    def apply(self, spec: FieldSpec, point: tuple[int, ...]) -> tuple[int, ...]:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"type": self.kind}


class IdentityMap(BlockMap):
    kind = "identical"

    def apply(self, spec, point):
        return point


class ConstantMap(BlockMap):
    kind = "constant"

    def __init__(self, value: tuple[int, ...]):
        self.value = tuple(value)

    def apply(self, spec, point):
        return self.value

    def describe(self):
        return {"type": self.kind, "value": list(self.value)}


class CoordinatePermutationMap(BlockMap):
    kind = "permutation"

    def __init__(self, perm: tuple[int, ...]):
        self.perm = tuple(perm)

    def apply(self, spec, point):
        return tuple(point[j] for j in self.perm)

    def describe(self):
        return {"type": self.kind, "perm": list(self.perm)}


class AffineMap(BlockMap):
    kind = "affine"

    def __init__(self, matrix, offset):
        self.matrix = tuple(tuple(row) for row in matrix)
        self.offset = tuple(offset)

    def apply(self, spec, point):
        out = []
        for row, off in zip(self.matrix, self.offset):
            acc = off
            for a, x in zip(row, point):
                acc = spec.add(acc, spec.mul(a, x))
            out.append(acc)
        return tuple(out)

    def describe(self):
        return {
            "type": self.kind,
            "matrix": [list(r) for r in self.matrix],
            "offset": list(self.offset),
        }


class TableMap(BlockMap):
    kind = "table"

    def __init__(self, table: dict):
        self.table = dict(table)

    def apply(self, spec, point):
        return self.table[point]

    def describe(self):
        return {"type": self.kind, "entries": len(self.table)}


@dataclass(frozen=True)
class SourceSpec:
    """A simple somewhere-random source: block ``uniform_index`` is uniform
    over F_q^n and every other block is a deterministic function of it."""

    spec: FieldSpec
    n: int
    num_blocks: int
    uniform_index: int
    block_maps: dict
    label: str = ""

    def __post_init__(self):
        if not 0 <= self.uniform_index < self.num_blocks:
            raise InvalidParameters(f"uniform block index {self.uniform_index} out of range")
        missing = [
            j
            for j in range(self.num_blocks)
            if j != self.uniform_index and j not in self.block_maps
        ]
        if missing:
            raise InvalidParameters(f"missing block maps for indices {missing}")

    def realize(self, v: tuple[int, ...]) -> list[tuple[int, ...]]:
        return [
            v if j == self.uniform_index else self.block_maps[j].apply(self.spec, v)
            for j in range(self.num_blocks)
        ]

    def describe(self) -> dict:
        return {
            "label": self.label,
            "uniform_index": self.uniform_index,
            "maps": {
                str(j): bm.describe() for j, bm in sorted(self.block_maps.items())
            },
        }


def exact_output_distribution(ms: MergerSpec, src: SourceSpec) -> Distribution:
    """The exact distribution of the merger output, enumerating all q^n
    values of the uniform block against all q seeds with weight q^-(n+1)."""
    if src.spec is not ms.spec or src.n != ms.n or src.num_blocks != ms.num_blocks:
        raise DimensionMismatch("source and merger dimensions differ")
    spec, n, q = ms.spec, ms.n, ms.spec.q
    # scalar multiplication tables per seed: mix_tabs[u][i][code]
    mix_tabs = []
    for u in range(q):
        mix = ms.mix_coeffs(u)
        mix_tabs.append([[spec.mul(ci, x) for x in range(q)] for ci in mix])
    add = spec.add
    counts: dict[tuple[int, ...], int] = {}
    for v in itertools.product(range(q), repeat=n):
        blocks = src.realize(v)
        for u in range(q):
            tabs = mix_tabs[u]
            out = []
            for coord in range(n):
                acc = 0
                for i, blk in enumerate(blocks):
                    acc = add(acc, tabs[i][blk[coord]])
                out.append(acc)
            key = tuple(out)
            counts[key] = counts.get(key, 0) + 1
    total = q ** (n + 1)
    return Distribution(
        {o: Fraction(c, total) for o, c in counts.items()}, q ** n
    )


def seed_length(delta, eps, num_blocks: int) -> int:
    """ceil((1/delta) * log2(2L/eps)): the seed length whose field q = 2^d
    meets the merger theorem's size hypothesis q >= (2L/eps)^(1/delta)."""
    delta, eps = Fraction(delta), Fraction(eps)
    if not 0 < delta <= 1 or not 0 < eps < 1 or num_blocks < 1:
        raise InvalidParameters(
            f"need 0 < delta <= 1, 0 < eps < 1, blocks >= 1; "
            f"got {delta}, {eps}, {num_blocks}"
        )
    ratio = 2 * num_blocks / eps
    a, b = delta.numerator, delta.denominator
    rn, rd = ratio.numerator, ratio.denominator
    d = 0
    # smallest d with 2^(d*delta) >= ratio, compared exactly via b-th powers
    while 2 ** (d * a) * rd ** b < rn ** b:
        d += 1
    return d


def default_adversarial_family(spec: FieldSpec, n: int, num_blocks: int) -> list[SourceSpec]:
    """The fixed adversarial stress family: identical blocks, constant
    blocks (zero and all-ones), a coordinate rotation, and an affine image."""
    others = [j for j in range(num_blocks) if j != 0]

    def mk(label: str, factory) -> SourceSpec:
        return SourceSpec(
            spec=spec,
            n=n,
            num_blocks=num_blocks,
            uniform_index=0,
            block_maps={j: factory() for j in others},
            label=label,
        )

    rotation = tuple((j + 1) % n for j in range(n))
    matrix = tuple(
        tuple(1 if (c == r or c == r + 1) else 0 for c in range(n)) for r in range(n)
    )
    ones = (1,) * n
    return [
        mk("identical-blocks", IdentityMap),
        mk("constant-zero", lambda: ConstantMap((0,) * n)),
        mk("constant-ones", lambda: ConstantMap(ones)),
        mk("coordinate-rotation", lambda: CoordinatePermutationMap(rotation)),
        mk("affine-image", lambda: AffineMap(matrix, ones)),
    ]


def verify_merger_theorem(delta, eps, num_blocks: int, n: int, sources=None) -> dict:
    """Check the merger guarantee at q = 2^seed_length: every source in the
    adversarial family lands within eps of min-entropy (1-delta)*n*log2(q).

    The theorem quantifies over all somewhere-random sources; the family
    here is the documented machine-checkable substitute.
    """
    delta, eps = Fraction(delta), Fraction(eps)
    d = seed_length(delta, eps, num_blocks)
    q = 2 ** d
    if q ** (n + 1) > ENUMERATION_CAP:
        raise EnumerationTooLarge(f"q^(n+1) = {q ** (n + 1)} exceeds {ENUMERATION_CAP}")
    spec = field_make(2, d)
    m = (1 - delta) * n * d
    if m.denominator != 1:
        raise InvalidParameters(
            f"entropy threshold (1-delta)*n*d = {m} is not an integer bit count"
        )
    m_int = int(m)
    ms = merger_make(spec, n, num_blocks)
    if sources is None:
        sources = default_adversarial_family(spec, n, num_blocks)
    entries = []
    for src in sources:
        dist = exact_output_distribution(ms, src)
        gap = distance_to_min_entropy(dist, m_int)
        entries.append(
            {
                "source": src.describe(),
                "distance": gap,
                "ok": gap <= eps,
            }
        )
    return {
        "seed_length": d,
        "q": q,
        "entropy_threshold_bits": m_int,
        "epsilon": eps,
        "sources": entries,
        "all_ok": all(e["ok"] for e in entries),
    }
