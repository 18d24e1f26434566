"""Exact coefficient fields: the rationals, prime fields, and small extensions.

Scalars are plain hashable Python values -- `Fraction` in characteristic zero,
`int` in ``[0, p)`` for a prime field, and a little-endian ``tuple[int, ...]``
of length m for F_{p^m} with m > 1.  A `Field` object supplies the arithmetic
on those values, so containers (polynomial dicts, matrix rows) never have to
wrap scalars in element classes; hashing, equality and copying stay cheap.

Binomial coefficients in characteristic p are evaluated through the base-p
digit (Lucas) decomposition, never through big factorials reduced afterwards.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import FieldError

#: primes at or above this bound keep plain-list rows (int64 safety margin)
_NUMPY_PRIME_LIMIT = 1 << 31


class Field:
    """Common interface; concrete subclasses carry the actual arithmetic.

    Attributes
    ----------
    char : int
        The characteristic; 0 selects exact-rational mode.
    degree : int
        Extension degree over the prime field (1 for Q and F_p).
    order : int or None
        Number of elements, None when infinite.
    """

    char: int
    degree: int
    order: int | None
    zero = None
    one = None

    # -- arithmetic on scalar values ------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        """a**n for n >= 0 by binary powering."""
        if n < 0:
            return self.inv(self.pow(a, -n))
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def scalar_root(self, a, e: int):
        """The p^e-th root of `a` (e-fold inverse Frobenius); identity at e = 0.

        Frobenius is bijective on finite fields, so the root exists and is
        unique.  In characteristic zero only e = 0 is ever requested.
        """
        for _ in range(e):
            a = self.frobenius_root(a)
        return a

    def frobenius_root(self, a):
        raise NotImplementedError

    def elements(self):
        """Iterate over all field elements (finite fields only)."""
        raise FieldError("cannot enumerate an infinite field")

    def random(self, rng):
        raise NotImplementedError

    def to_text(self, a) -> str:
        raise NotImplementedError

    def from_text(self, text: str):
        raise NotImplementedError

    # -- vectorized helpers used by the echelon code --------------------
    def vec_submul(self, target: list, factor, source: list) -> None:
        """In-place target -= factor * source over dense scalar lists."""
        for i, s in enumerate(source):
            if s != self.zero:
                target[i] = self.sub(target[i], self.mul(factor, s))

    def vec_scale(self, row: list, factor) -> list:
        return [self.mul(factor, x) for x in row]

    # -- dense row storage -----------------------------------------------
    # Echelon bases spend nearly all their time in row -= factor * row ops,
    # so the storage layer is pluggable: the generic version keeps plain
    # lists of scalars, and fields that can do better (small prime fields
    # via numpy) override these seven hooks.

    def canon(self, a):
        """Normalize a scalar coming out of row storage (identity here)."""
        return a

    def make_row(self, vals) -> list:
        return list(vals)

    def row_to_list(self, row) -> list:
        return list(row)

    def row_get(self, row, j):
        return row[j]

    def row_first_nonzero(self, row) -> int:
        for j, c in enumerate(row):
            if c != self.zero:
                return j
        return -1

    def row_scale(self, row, factor):
        return [self.mul(factor, c) for c in row]

    def row_submul(self, target, factor, source) -> None:
        self.vec_submul(target, factor, source)


class Rationals(Field):
    """Exact rational coefficients (the characteristic-zero mode)."""

    char = 0
    degree = 1
    order = None
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero")
        return 1 / a

    def pow(self, a, n):
        return a ** n

    def from_int(self, n):
        return Fraction(n)

    def is_zero(self, a):
        return a == 0

    def frobenius_root(self, a):
        raise FieldError("no Frobenius in characteristic zero")

    def random(self, rng):
        # small numerators/denominators keep downstream arithmetic readable
        num = rng.randint(-4, 4)
        den = rng.randint(1, 3)
        return Fraction(num, den)

    def to_text(self, a):
        return str(a)

    def from_text(self, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"not an exact rational: {text!r}") from exc

    def vec_submul(self, target, factor, source):
        for i, s in enumerate(source):
            if s:
                target[i] = target[i] - factor * s

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash(("Q",))

    def __repr__(self):
        return "Rationals()"


class PrimeField(Field):
    """F_p with int scalars in [0, p)."""

    degree = 1

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise FieldError(f"characteristic must be prime, got {p}")
        self.p = p
        self.char = p
        self.order = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError("division by zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, n):
        if n < 0:
            return self.inv(pow(a, -n, self.p))
        return pow(a, n, self.p)

    def from_int(self, n):
        return n % self.p

    def is_zero(self, a):
        return a == 0

    def frobenius_root(self, a):
        # x -> x^p is the identity on F_p, so every element is its own p-th root
        return a

    def elements(self):
        return iter(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)

    def to_text(self, a):
        return str(a)

    def from_text(self, text):
        try:
            return int(text) % self.p
        except ValueError as exc:
            raise FieldError(f"not an integer scalar: {text!r}") from exc

    def vec_submul(self, target, factor, source):
        p = self.p
        for i, s in enumerate(source):
            if s:
                target[i] = (target[i] - factor * s) % p

    # numpy-backed rows: products stay below p**2 < 2**62, safely inside
    # int64, for any prime this package will realistically meet
    def canon(self, a):
        return int(a)

    def make_row(self, vals):
        if self.p >= _NUMPY_PRIME_LIMIT:
            return list(vals)
        return np.array(vals, dtype=np.int64)

    def row_to_list(self, row):
        return [int(c) for c in row]

    def row_get(self, row, j):
        return int(row[j])

    def row_first_nonzero(self, row):
        if isinstance(row, list):
            for j, c in enumerate(row):
                if c:
                    return j
            return -1
        nz = np.nonzero(row)[0]
        return int(nz[0]) if nz.size else -1

    def row_scale(self, row, factor):
        if isinstance(row, list):
            return [(factor * c) % self.p for c in row]
        return (row * int(factor)) % self.p

    def row_submul(self, target, factor, source):
        if isinstance(target, list):
            self.vec_submul(target, factor, source)
            return
        target -= int(factor) * source
        target %= self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


# ---------------------------------------------------------------------------
# dense univariate helpers over F_p (used only to run F_{p^m}); coefficient
# lists are little-endian and not normalized unless stated.

def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    lead_inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        q = (a[-1] * lead_inv) % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - q * mi) % p
        _poly_trim(a)
    return a


def _poly_divmod(a: list[int], b: list[int], p: int):
    a = list(a)
    db = len(b) - 1
    lead_inv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c = (a[-1] * lead_inv) % p
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _poly_trim(a)
    return _poly_trim(q), a


def _is_irreducible(f: list[int], p: int) -> bool:
    # trial division by every monic polynomial of degree <= deg(f)/2;
    # fine for the tiny extension degrees this package targets
    d = len(f) - 1
    for t in range(1, d // 2 + 1):
        for lower in itertools.product(range(p), repeat=t):
            g = list(lower) + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lower coefficients of the first monic irreducible of degree m over F_p.

    Candidates are enumerated in base-p counting order of their coefficient
    tuples, which makes the choice deterministic and reproducible.
    """
    for k in itertools.count():
        digits = []
        n = k
        for _ in range(m):
            digits.append(n % p)
            n //= p
        if n:
            raise FieldError(f"no irreducible of degree {m} over F_{p} found")
        f = digits + [1]
        if _poly_trim(list(f)) != f:
            continue  # impossible for monic, kept for clarity
        if _is_irreducible(f, p):
            return tuple(digits)
    raise FieldError("unreachable")


class ExtensionField(Field):
    """F_{p^m}, m >= 2, as F_p[g] modulo a monic irreducible of degree m.

    Scalars are little-endian tuples of length m over [0, p); the residue
    class of the variable is exposed as `generator` and prints as ``g``.
    """

    def __init__(self, p: int, m: int, modulus: tuple[int, ...] | None = None):
        if m < 2:
            raise FieldError("use PrimeField for extension degree 1")
        base = PrimeField(p)  # validates primality
        self.p = p
        self.m = m
        self.char = p
        self.degree = m
        self.order = p ** m
        if modulus is None:
            modulus = default_modulus(p, m)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m:
            raise FieldError(f"modulus needs {m} lower coefficients, got {len(modulus)}")
        full = list(modulus) + [1]
        if not _is_irreducible(full, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._full = full
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)
        self.generator = tuple(1 if i == 1 else 0 for i in range(m))
        del base

    def _wrap(self, coeffs: list[int]) -> tuple[int, ...]:
        return tuple(coeffs[i] if i < len(coeffs) else 0 for i in range(self.m))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        prod = _poly_mul(list(a), list(b), self.p)
        return self._wrap(_poly_mod(prod, self._full, self.p))

    def inv(self, a):
        if self.is_zero(a):
            raise FieldError("division by zero")
        # extended Euclid in F_p[x]
        p = self.p
        r0, r1 = self._full, _poly_trim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_trim([
                (x - y) % p
                for x, y in itertools.zip_longest(s0, _poly_mul(q, s1, p), fillvalue=0)
            ])
        # r0 is now a nonzero constant gcd
        c_inv = pow(r0[0], p - 2, p)
        return self._wrap([(c_inv * x) % p for x in s0])

    def from_int(self, n):
        return ((n % self.p),) + (0,) * (self.m - 1)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def frobenius_root(self, a):
        # Frobenius x -> x^p has order m, so the inverse is x -> x^(p^(m-1))
        return self.pow(a, self.p ** (self.m - 1))

    def elements(self):
        for tup in itertools.product(range(self.p), repeat=self.m):
            yield tup

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.m))

    def to_text(self, a):
        parts = []
        for k, c in enumerate(a):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                gpow = "g" if k == 1 else f"g^{k}"
                parts.append(gpow if c == 1 else f"{c}*{gpow}")
        return "+".join(parts) if parts else "0"

    def from_text(self, text):
        text = text.replace(" ", "")
        if not text:
            raise FieldError("empty scalar")
        value = self.zero
        for term in text.split("+"):
            if not term:
                raise FieldError(f"malformed scalar: {text!r}")
            coeff = 1
            power = 0
            for factor in term.split("*"):
                if factor == "g":
                    power += 1
                elif factor.startswith("g^"):
                    power += int(factor[2:])
                else:
                    coeff *= int(factor)
            value = self.add(value, self.mul(self.from_int(coeff),
                                             self.pow(self.generator, power)))
        return value

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.p == self.p
                and other.m == self.m and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("Fpm", self.p, self.m, self.modulus))

    def __repr__(self):
        return f"ExtensionField({self.p}, {self.m}, modulus={self.modulus})"


def make_field(char: int, ext_degree: int = 1, modulus=None) -> Field:
    """Field from instance-file style data; char 0 selects exact rationals."""
    if char == 0:
        if ext_degree != 1:
            raise FieldError("extension degree must be 1 in characteristic zero")
        return Rationals()
    if ext_degree == 1:
        return PrimeField(char)
    return ExtensionField(char, ext_degree, tuple(modulus) if modulus else None)


def field_binomial(field: Field, n: int, k: int):
    """C(n, k) as a field scalar; base-p digit product in characteristic p."""
    if k < 0 or k > n:
        return field.zero
    p = field.char
    if p == 0:
        return Fraction(math.comb(n, k))
    acc = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return field.zero
        acc = (acc * math.comb(nd, kd)) % p
        n //= p
        k //= p
    return field.from_int(acc)
