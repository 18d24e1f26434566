"""Truncated multivariate polynomials ("jets") with divided-power derivatives.

A polynomial is a plain dict mapping exponent tuples to nonzero field
scalars; the empty dict is zero.  A `JetRing` fixes the coefficient field,
the variable names, and a truncation bound T: ring products drop every
monomial of total degree above T, so ring elements represent classes modulo
the (T+1)-st power of the maximal ideal at the origin.

Derivatives are the divided-power (Hasse) operators: the I-th operator sends
X^J to binom(J, I)·X^{J-I} with the binomial evaluated inside the field --
via the base-p digit rule in characteristic p -- which keeps them nonzero
where iterated d/dx would vanish.

Monomial order is graded lexicographic throughout: lower total degree first,
and within a degree the tuple that is lexicographically larger (earlier
variable carries more weight) comes first.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import DimensionMismatch, ParseError, RingMismatch
from .fields import Field, field_binomial

#: order value of the zero polynomial
ORD_INFINITY = math.inf


def grlex_key(expts: tuple[int, ...]):
    """Sort key placing monomials in graded-lex order (ascending)."""
    return (sum(expts), tuple(-e for e in expts))


class JetRing:
    """Polynomial arithmetic over `field` in `names`, truncated at degree `trunc`."""

    __slots__ = ("field", "names", "nvars", "trunc", "_monomial_cache",
                 "_index_cache")

    def __init__(self, field: Field, names: tuple[str, ...] | list[str], trunc: int):
        if trunc < 0:
            raise ValueError(f"truncation bound must be >= 0, got {trunc}")
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        for nm in names:
            if not nm.isidentifier() or nm == "g":
                raise ValueError(f"bad variable name {nm!r}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.trunc = trunc
        self._monomial_cache: dict[int, list[tuple[int, ...]]] = {}
        self._index_cache: dict[int, dict[tuple[int, ...], int]] = {}

    def __eq__(self, other):
        return (isinstance(other, JetRing) and other.field == self.field
                and other.names == self.names and other.trunc == self.trunc)

    def __hash__(self):
        return hash((self.field, self.names, self.trunc))

    def __repr__(self):
        return f"JetRing({self.field!r}, {self.names}, trunc={self.trunc})"

    # -- constructors -----------------------------------------------------
    def zero(self) -> dict:
        return {}

    def one(self) -> dict:
        return {(0,) * self.nvars: self.field.one}

    def constant(self, c) -> dict:
        if c == self.field.zero:
            return {}
        return {(0,) * self.nvars: c}

    def variable(self, i: int) -> dict:
        expts = tuple(1 if j == i else 0 for j in range(self.nvars))
        return {expts: self.field.one}

    def monomial(self, expts: tuple[int, ...], coeff=None) -> dict:
        if len(expts) != self.nvars:
            raise DimensionMismatch(f"exponent tuple {expts} for {self.nvars} variables")
        if coeff is None:
            coeff = self.field.one
        if coeff == self.field.zero or sum(expts) > self.trunc:
            return {}
        return {tuple(expts): coeff}

    def check_member(self, f: dict) -> None:
        for e in f:
            if len(e) != self.nvars:
                raise RingMismatch(f"monomial {e} does not fit {self.nvars} variables")

    # -- ring operations ---------------------------------------------------
    def add(self, f: dict, g: dict) -> dict:
        F = self.field
        out = dict(f)
        for e, c in g.items():
            s = F.add(out.get(e, F.zero), c)
            if s == F.zero:
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def sub(self, f: dict, g: dict) -> dict:
        F = self.field
        out = dict(f)
        for e, c in g.items():
            s = F.sub(out.get(e, F.zero), c)
            if s == F.zero:
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def neg(self, f: dict) -> dict:
        F = self.field
        return {e: F.neg(c) for e, c in f.items()}

    def scale(self, c, f: dict) -> dict:
        F = self.field
        if c == F.zero:
            return {}
        return {e: F.mul(c, v) for e, v in f.items()}

    def mul(self, f: dict, g: dict) -> dict:
        """Product truncated to total degree <= self.trunc."""
        F = self.field
        cap = self.trunc
        out: dict = {}
        for e1, c1 in f.items():
            d1 = sum(e1)
            if d1 > cap:
                continue
            for e2, c2 in g.items():
                if d1 + sum(e2) > cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = F.add(out.get(e, F.zero), F.mul(c1, c2))
                if s == F.zero:
                    out.pop(e, None)
                else:
                    out[e] = s
        return out

    def mul_monomial(self, f: dict, expts: tuple[int, ...], coeff=None) -> dict:
        """coeff * X^expts * f, truncated; a fast path for pure monomial factors."""
        F = self.field
        if coeff is None:
            coeff = F.one
        if coeff == F.zero:
            return {}
        cap = self.trunc
        shift = sum(expts)
        out = {}
        for e, c in f.items():
            if sum(e) + shift > cap:
                continue
            out[tuple(a + b for a, b in zip(e, expts))] = F.mul(coeff, c)
        return out

    def power(self, f: dict, n: int) -> dict:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, f)
        return out

    def is_zero(self, f: dict) -> bool:
        return not f

    def coefficient(self, f: dict, expts: tuple[int, ...]):
        return f.get(tuple(expts), self.field.zero)

    def degree(self, f: dict) -> int:
        """Total degree of the representative; -1 for zero."""
        return max((sum(e) for e in f), default=-1)

    # -- truncation and orders ----------------------------------------------
    def truncate(self, f: dict, n: int) -> dict:
        """Drop all monomials of total degree strictly above n."""
        return {e: c for e, c in f.items() if sum(e) <= n}

    def ord_at_origin(self, f: dict):
        """Smallest total degree of a monomial present; inf for the zero dict.

        This is the order of vanishing at the origin of the representative
        polynomial; whether that says anything about an underlying power
        series past degree `trunc` is the caller's concern.
        """
        if not f:
            return ORD_INFINITY
        return min(sum(e) for e in f)

    def graded_part(self, f: dict, d: int) -> dict:
        return {e: c for e, c in f.items() if sum(e) == d}

    # -- monomial enumeration -------------------------------------------------
    def monomials_of_degree(self, d: int) -> list[tuple[int, ...]]:
        """All exponent tuples of total degree exactly d, graded-lex order."""
        cached = self._monomial_cache.get(d)
        if cached is None:
            cached = sorted(self._compositions(d), key=grlex_key)
            self._monomial_cache[d] = cached
        return cached

    def _compositions(self, d: int):
        n = self.nvars
        if n == 1:
            yield (d,)
            return

        def rec(remaining, slots):
            if slots == 1:
                yield (remaining,)
                return
            for first in range(remaining + 1):
                for rest in rec(remaining - first, slots - 1):
                    yield (first,) + rest

        yield from rec(d, n)

    def monomials_up_to(self, n: int) -> list[tuple[int, ...]]:
        out = []
        for d in range(n + 1):
            out.extend(self.monomials_of_degree(d))
        return out

    def monomial_index(self, n: int) -> dict[tuple[int, ...], int]:
        """Position of each monomial of degree <= n in graded-lex order."""
        cached = self._index_cache.get(n)
        if cached is None:
            cached = {e: i for i, e in enumerate(self.monomials_up_to(n))}
            self._index_cache[n] = cached
        return cached

    def vector_of(self, f: dict, index: dict[tuple[int, ...], int], width: int) -> list:
        """Dense coefficient vector of f over the given monomial index."""
        F = self.field
        vec = [F.zero] * width
        for e, c in f.items():
            pos = index.get(e)
            if pos is None:
                raise DimensionMismatch(f"monomial {e} outside the indexed range")
            vec[pos] = c
        return vec

    # -- divided-power derivatives ------------------------------------------
    def hasse_deriv(self, f: dict, I: tuple[int, ...]) -> dict:
        """The I-th divided-power derivative: X^J -> binom(J, I) X^{J-I}.

        Computed on the stored representative.  When f is only known modulo
        degree > trunc, the result is only trustworthy modulo degree
        > trunc - |I|; callers that care re-truncate.
        """
        F = self.field
        I = tuple(I)
        if len(I) != self.nvars:
            raise DimensionMismatch(f"derivative index {I} for {self.nvars} variables")
        out: dict = {}
        for J, c in f.items():
            coeff = c
            ok = True
            for j, i in zip(J, I):
                if i == 0:
                    continue
                if j < i:
                    ok = False
                    break
                b = field_binomial(F, j, i)
                if b == F.zero:
                    ok = False
                    break
                coeff = F.mul(coeff, b)
            if not ok:
                continue
            e = tuple(j - i for j, i in zip(J, I))
            s = F.add(out.get(e, F.zero), coeff)
            if s == F.zero:
                out.pop(e, None)
            else:
                out[e] = s
        return out

    # -- evaluation and substitution ------------------------------------------
    def evaluate(self, f: dict, point: list | tuple):
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point of length {len(point)} for {self.nvars} variables")
        F = self.field
        total = F.zero
        for e, c in f.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = F.mul(term, F.pow(x, k))
            total = F.add(total, term)
        return total

    def translate_to_point(self, f: dict, point: list | tuple) -> dict:
        """f(X + c): recenter so the chosen point becomes the new origin.

        Expanded one variable at a time with (x+c)^j = sum_k binom(j,k) c^(j-k) x^k;
        the binomials are field scalars, so this is exact in any characteristic.
        Degrees never grow, hence no truncation loss.
        """
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point of length {len(point)} for {self.nvars} variables")
        F = self.field
        out = f
        for v, c in enumerate(point):
            if c == F.zero:
                continue
            nxt: dict = {}
            powers = {0: F.one}  # cache c^t
            for e, coeff in out.items():
                j = e[v]
                for k in range(j + 1):
                    b = field_binomial(F, j, k)
                    if b == F.zero:
                        continue
                    t = j - k
                    cp = powers.get(t)
                    if cp is None:
                        cp = F.pow(c, t)
                        powers[t] = cp
                    term = F.mul(coeff, F.mul(b, cp))
                    ne = e[:v] + (k,) + e[v + 1:]
                    s = F.add(nxt.get(ne, F.zero), term)
                    if s == F.zero:
                        nxt.pop(ne, None)
                    else:
                        nxt[ne] = s
            out = nxt
        return dict(out)

    def substitute_linear(self, f: dict, matrix: list[list]) -> dict:
        """f(M·X): replace each variable x_i by the linear form sum_j M[i][j] x_j.

        Linear substitution preserves total degree, so truncated arithmetic
        loses nothing here.
        """
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise DimensionMismatch("substitution matrix must be square of size nvars")
        F = self.field
        forms = []
        for i in range(n):
            form = {}
            for j, c in enumerate(matrix[i]):
                if c != F.zero:
                    form[tuple(1 if t == j else 0 for t in range(n))] = c
            forms.append(form)
        # cache powers of each substituted form as they come up
        pow_cache: dict[tuple[int, int], dict] = {}

        def form_power(i: int, k: int) -> dict:
            if k == 0:
                return self.one()
            got = pow_cache.get((i, k))
            if got is None:
                got = self.mul(form_power(i, k - 1), forms[i])
                pow_cache[(i, k)] = got
            return got

        out: dict = {}
        for e, c in f.items():
            term = self.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = self.mul(term, form_power(i, k))
            out = self.add(out, term)
        return out

    # -- text form --------------------------------------------------------
    def to_text(self, f: dict) -> str:
        if not f:
            return "0"
        F = self.field
        char0 = F.char == 0
        terms = []
        for e in sorted(f, key=grlex_key, reverse=True):
            c = f[e]
            factors = []
            for name, k in zip(self.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            negative = False
            if char0 and c < 0:
                negative = True
                c = -c
            ctext = F.to_text(c)
            if "+" in ctext:
                ctext = f"({ctext})"
            if factors and c == F.one:
                body = "*".join(factors)
            elif factors:
                body = "*".join([ctext] + factors)
            else:
                body = ctext
            terms.append(("-" if negative else "+", body))
        sign0, body0 = terms[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in terms[1:]:
            text += sign + body
        return text

    def from_text(self, text: str) -> dict:
        """Parse `3*x^2*y+z-1` style polynomial text.

        Terms are split on top-level + and -, factors on *; a factor is an
        integer, a rational a/b (characteristic zero), a parenthesized field
        scalar, a bare scalar like g or g^2 (extension fields), or var[^k].
        """
        src = text.replace(" ", "")
        if not src:
            raise ParseError("empty polynomial text")
        F = self.field
        name_to_idx = {nm: i for i, nm in enumerate(self.names)}
        result = self.zero()
        i = 0
        n = len(src)
        sign = 1
        if src[0] in "+-":
            sign = -1 if src[0] == "-" else 1
            i = 1
        while i <= n - 1:
            # scan one term up to the next top-level +/-
            j = i
            depth = 0
            while j < n:
                ch = src[j]
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                    if depth < 0:
                        raise ParseError(f"unbalanced ')' in {text!r}")
                elif ch in "+-" and depth == 0 and j > i and src[j - 1] != "^":
                    break
                j += 1
            if depth != 0:
                raise ParseError(f"unbalanced '(' in {text!r}")
            term_src = src[i:j]
            if not term_src:
                raise ParseError(f"empty term in {text!r}")
            coeff = F.one if sign == 1 else F.neg(F.one)
            expts = [0] * self.nvars
            for factor in self._split_factors(term_src):
                if factor.startswith("("):
                    try:
                        scalar = F.from_text(factor[1:-1])
                    except Exception as err:
                        raise ParseError(
                            f"parenthesized factor {factor!r} is not a "
                            f"scalar") from err
                    coeff = F.mul(coeff, scalar)
                    continue
                base, caret, exp = factor.partition("^")
                k = 1
                if caret and not exp:
                    raise ParseError(f"bad exponent in {factor!r}")
                if exp:
                    try:
                        k = int(exp)
                    except ValueError as err:
                        raise ParseError(f"bad exponent in {factor!r}") from err
                    if k < 0:
                        raise ParseError(f"negative exponent in {factor!r}")
                if base in name_to_idx:
                    expts[name_to_idx[base]] += k
                else:
                    try:
                        scalar = F.from_text(factor)
                    except Exception as err:
                        raise ParseError(f"unknown factor {factor!r} in {text!r}") from err
                    coeff = F.mul(coeff, scalar)
            if sum(expts) > self.trunc:
                raise ParseError(
                    f"term {term_src!r} has degree {sum(expts)}, beyond the "
                    f"window (T={self.trunc})")
            result = self.add(result, self.monomial(tuple(expts), coeff))
            if j >= n:
                break
            sign = -1 if src[j] == "-" else 1
            i = j + 1
            if i >= n:
                raise ParseError(f"dangling sign in {text!r}")
        return result

    @staticmethod
    def _split_factors(term: str) -> list[str]:
        parts = []
        depth = 0
        start = 0
        for j, ch in enumerate(term):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "*" and depth == 0:
                parts.append(term[start:j])
                start = j + 1
        parts.append(term[start:])
        if any(not p for p in parts):
            raise ParseError(f"stray '*' in {term!r}")
        return parts

    # -- randomness (used by the search harnesses) --------------------------
    def random_poly(self, rng, max_deg: int, n_terms: int, min_deg: int = 0) -> dict:
        """A random polynomial with up to n_terms monomials in the degree window."""
        pool = [e for d in range(min_deg, max_deg + 1)
                for e in self.monomials_of_degree(d)]
        out = self.zero()
        for _ in range(n_terms):
            e = pool[rng.randrange(len(pool))]
            c = self.field.random(rng)
            out = self.add(out, self.monomial(e, c))
        return out


def count_monomials(nvars: int, degree: int) -> int:
    """Number of monomials of total degree exactly `degree` in nvars variables."""
    return math.comb(degree + nvars - 1, nvars - 1)


def count_monomials_up_to(nvars: int, degree: int) -> int:
    return math.comb(degree + nvars, nvars)


def exact_ord(f: dict):
    """Order at the origin of an untruncated polynomial dict (inf for zero)."""
    if not f:
        return ORD_INFINITY
    return min(sum(e) for e in f)


def scalar_from_instance(field: Field, value):
    """Coerce a JSON-level coefficient (int, string) into a field scalar."""
    if isinstance(value, int):
        return field.from_int(value)
    if isinstance(value, str):
        return field.from_text(value)
    if field.char == 0 and isinstance(value, float) and value == int(value):
        return Fraction(int(value))
    raise ParseError(f"cannot read scalar {value!r}")
