"""Exact arithmetic over finite fields F_q with q = p^e.

Elements are canonically encoded as integers in [0, q): the code
``c_0 + c_1*p + ... + c_{e-1}*p^{e-1}`` stands for the residue polynomial
``c_0 + c_1*X + ... + c_{e-1}*X^{e-1}`` modulo the canonical irreducible
modulus shipped in ``moduli.txt``.  For e = 1 the code is just the residue
mod p.  :class:`FieldElement` wraps a code together with its field; hot
loops may use the integer-code operations on :class:`FieldSpec` directly.

Enumeration order is code order, i.e. lexicographic on coefficient vectors
with the constant term varying fastest, which is stable across runs because
the modulus table is version-controlled data.

Randomness comes from the counter-based Philox-4x64-10 generator (numpy),
seeded by a single 64-bit integer; independent streams for parallel trials
derive from (seed, stream-index) key pairs.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import (
    DivisionByZero,
    MissingModulusEntry,
    NonPrimeCharacteristic,
    SpecMismatch,
    UnsupportedSize,
)

SIZE_CAP = 2 ** 20          # largest supported q
_LOG_TABLE_CAP = 2 ** 16    # build log/exp multiplication tables up to here


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=1)
def _modulus_table() -> dict[tuple[int, int], tuple[int, ...]]:
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    text = resources.files(__package__).joinpath("moduli.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [int(tok) for tok in line.split()]
        p, e, coeffs = parts[0], parts[1], tuple(parts[2:])
        if len(coeffs) != e + 1 or coeffs[-1] != 1:
            raise MissingModulusEntry(f"malformed modulus entry for ({p}, {e})")
        table[(p, e)] = coeffs
    return table


class FieldElement:
    """An element of F_q in canonical (fully reduced) representation.

    Equality and hashing are on (field, code); the coefficient vector is
    available via :attr:`coeffs`.
    """

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        self.spec = spec
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.code_to_coeffs(self.code)

    def _other_code(self, other) -> int:
        # bare ints are element codes, same as everywhere else in the API
        if isinstance(other, FieldElement):
            if other.spec is not self.spec:
                raise SpecMismatch("operands belong to different fields")
            return other.code
        if isinstance(other, int):
            return self.spec.coerce(other)
        return NotImplemented

    def __add__(self, other):
        c = self._other_code(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._other_code(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub(self.code, c))

    def __rsub__(self, other):
        c = self._other_code(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub(c, self.code))

    def __mul__(self, other):
        c = self._other_code(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._other_code(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.mul(self.code, self.spec.inv(c)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.spec, self.spec.pow(self.code, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec is other.spec and self.code == other.code
        if isinstance(other, int):
            return 0 <= other < self.spec.q and self.code == other
        return NotImplemented

    def __hash__(self):
        return hash((id(self.spec), self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"F{self.spec.q}({self.code})"


class FieldSpec:
    """A finite field F_q, q = p^e, with canonical modulus and element codes.

    Use :func:`field_make` to construct; equal (p, e) always share one
    instance, hence the identical modulus.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus  # length e+1, low-to-high, monic; unused for e=1
        self._exp: list[int] | None = None
        self._log: list[int] | None = None

    # -- element codecs -------------------------------------------------------

    def code_to_coeffs(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.e):
            out.append(code % p)
            code //= p
        return tuple(out)

    def coeffs_to_code(self, coeffs) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + (c % self.p)
        return code

    def from_int(self, value: int) -> int:
        """Embed an integer via the prime subfield (value mod p)."""
        return value % self.p

    def element(self, value) -> FieldElement:
        return FieldElement(self, self.coerce(value))

    def coerce(self, value) -> int:
        """Accept a FieldElement of this field or an int code in [0, q)."""
        if isinstance(value, FieldElement):
            if value.spec is not self:
                raise SpecMismatch("element belongs to a different field")
            return value.code
        code = int(value)
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} outside [0, {self.q})")
        return code

    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self):
        """All q elements in canonical enumeration order."""
        return [FieldElement(self, c) for c in range(self.q)]

    # -- integer-code arithmetic ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p, out, mul = self.p, 0, 1
        for _ in range(self.e):
            out += ((a + b) % p) * mul
            a //= p
            b //= p
            mul *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p, out, mul = self.p, 0, 1
        for _ in range(self.e):
            out += (-a % p) % p * mul
            a //= p
            mul *= p
        return out

    def _mul_raw(self, a: int, b: int) -> int:
        """Polynomial multiplication of codes, reduced by the modulus."""
        p, e = self.p, self.e
        av = self.code_to_coeffs(a)
        bv = self.code_to_coeffs(b)
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(av):
            if ai:
                for j, bj in enumerate(bv):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        mod = self.modulus
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(e):
                    prod[i - e + j] = (prod[i - e + j] - c * mod[j]) % p
        return self.coeffs_to_code(prod[:e])

    def _ensure_tables(self) -> None:
        if self._exp is not None or self.q > _LOG_TABLE_CAP:
            return
        q = self.q
        factors = _prime_factors(q - 1)
        g = None
        for cand in range(1, q):
            if all(self._pow_raw(cand, (q - 1) // r) != 1 for r in factors):
                g = cand
                break
        assert g is not None, "no multiplicative generator found"
        exp = [1] * (q - 1)
        log = [0] * q
        acc = 1
        for i in range(1, q - 1):
            acc = self._mul_raw(acc, g)
            exp[i] = acc
            log[acc] = i
        log[1] = 0
        self._exp, self._log = exp, log

    def _pow_raw(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self._mul_raw(result, a)
            a = self._mul_raw(a, a)
            n >>= 1
        return result

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        self._ensure_tables()
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no multiplicative inverse")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        self._ensure_tables()
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self._pow_raw(a, self.q - 2)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.e == 1:
            return pow(a, n, self.p)
        if a == 0:
            return 1 if n == 0 else 0
        self._ensure_tables()
        if self._exp is not None:
            return self._exp[(self._log[a] * n) % (self.q - 1)]
        return self._pow_raw(a, n)

    # -- misc ------------------------------------------------------------------

    def __repr__(self):
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e})"

    def __reduce__(self):  # pickle back through the canonical cache
        return (field_make, (self.p, self.e))


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def field_make(p: int, e: int = 1) -> FieldSpec:
    """Construct (or fetch the cached) F_{p^e} with the canonical modulus.

    Specs are singletons per (p, e), so equal parameters always share the
    identical modulus and may be compared by identity.
    """
    return _field_make(int(p), int(e))


@lru_cache(maxsize=None)
def _field_make(p: int, e: int) -> FieldSpec:
    if p < 2 or not is_prime(p):
        raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
    if e < 1:
        raise UnsupportedSize(f"extension degree must be >= 1, got {e}")
    if p ** e > SIZE_CAP:
        raise UnsupportedSize(f"{p}^{e} exceeds the supported cap {SIZE_CAP}")
    if e == 1:
        return FieldSpec(p, 1, (0, 1))
    modulus = _modulus_table().get((p, e))
    if modulus is None:
        raise MissingModulusEntry(f"no canonical modulus shipped for ({p}, {e})")
    return FieldSpec(p, e, modulus)


def parse_field_spec(text: str) -> FieldSpec:
    """Parse 'p' or 'p^e' into a field, e.g. '5' or '2^6'."""
    text = text.strip()
    if "^" in text:
        p_str, e_str = text.split("^", 1)
        return field_make(int(p_str), int(e_str))
    return field_make(int(text), 1)


def field_enumerate(spec: FieldSpec) -> list[FieldElement]:
    """All q elements, zero first, constant term fastest; stable across runs."""
    return spec.elements()


def rng_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox-4x64-10 generator keyed by (seed, stream)."""
    key = np.array([seed % 2 ** 64, stream % 2 ** 64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))

def field_sample(spec: FieldSpec, rng: np.random.Generator) -> FieldElement:
    """Uniform draw over the q elements; identical seed => identical sequence."""
    return FieldElement(spec, int(rng.integers(spec.q)))


def sample_point(spec: FieldSpec, n: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform point of F_q^n, as a tuple of element codes."""
    return tuple(int(c) for c in rng.integers(spec.q, size=n))


# -- modulus verification (used by the self-test suite) ------------------------

def verify_modulus_irreducible(spec: FieldSpec) -> bool:
    """Exhaustive factor check of the canonical modulus over F_p.

    Trial-divides by every monic polynomial of degree 1..e//2; intended for
    the supported desk-scale sizes only.
    """
    if spec.e == 1:
        return True
    p, e = spec.p, spec.e
    mod = list(spec.modulus)

    def poly_rem(a: list[int], b: list[int]) -> list[int]:
        a = a[:]
        db = len(b) - 1
        inv_lead = pow(b[-1], p - 2, p)
        for i in range(len(a) - 1, db - 1, -1):
            c = (a[i] * inv_lead) % p
            if c:
                for j in range(db + 1):
                    a[i - db + j] = (a[i - db + j] - c * b[j]) % p
        return a[:db]

    for deg in range(1, e // 2 + 1):
        for packed in range(p ** deg):
            divisor, v = [], packed
            for _ in range(deg):
                divisor.append(v % p)
                v //= p
            divisor.append(1)  # monic
            if not any(poly_rem(mod, divisor)):
                return False
    return True
