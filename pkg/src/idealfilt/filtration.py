"""Rationally-graded ideal systems generated by weighted polynomials.

A `Filtration` is presented by finitely many pairs (f, a) with f a nonzero
polynomial and a > 0 a rational weight ("level").  The object it presents
assigns to every rational t the ideal spanned by all products of generators
whose levels sum to at least t, together with everything of level <= 0
(the whole ring).  All computations here happen inside a truncated
polynomial ring, so every answer about the level-t slice is an answer about
that slice modulo degree > T, where T is the ring's truncation bound.

The two nontrivial algorithms:

* `d_saturate` closes the presentation under divided-power derivatives,
  adding (D_I f, a - |I|) for every 0 < |I| < ceil(a), iterating until no
  new pair appears.  Levels drop by at least 1 per step, so this terminates.

* `level_slice_basis` enumerates the *minimal* multisets of generators whose
  level-sum reaches t (removing any single factor drops the sum below t),
  multiplies each out as a jet, and spans the ideal those products generate.
  Sorting factors by generator index makes every proper prefix of a minimal
  multiset have level-sum < t, so a depth-first search that only extends
  while the running sum is below t finds all of them.  Multisets whose
  factors' vanishing orders sum past T are skipped: their product is
  invisible at this truncation.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .errors import PreconditionError, SliceTruncationCaveat, TruncationError
from .jetring import JetRing, grlex_key
from .linalg import Echelon


def _monic_key(ring: JetRing, f: dict):
    """Hashable form of f scaled so its graded-lex leading coefficient is 1."""
    lead = max(f, key=grlex_key)
    c = f[lead]
    if c != ring.field.one:
        f = ring.scale(ring.field.inv(c), f)
    return frozenset(f.items())


class Filtration:
    """Finitely presented weighted ideal system inside a truncated ring."""

    __slots__ = ("ring", "pairs", "saturated", "_seen", "_slice_cache",
                 "_product_cache")

    def __init__(self, ring: JetRing, pairs, saturated: bool = False):
        self.ring = ring
        self.pairs: list[tuple[dict, Fraction]] = []
        self.saturated = saturated
        self._seen: set = set()
        self._slice_cache: dict[Fraction, Echelon] = {}
        self._product_cache: dict[Fraction, list[dict]] = {}
        for f, a in pairs:
            self.push(f, a)

    def push(self, f: dict, a) -> bool:
        """Add a generator pair; drops trivial ones, dedups up to scaling."""
        a = Fraction(a)
        if not f or a <= 0:
            return False
        if self.ring.degree(f) > self.ring.trunc:
            raise TruncationError(
                f"generator of degree {self.ring.degree(f)} exceeds the "
                f"truncation bound {self.ring.trunc}")
        key = (_monic_key(self.ring, f), a)
        if key in self._seen:
            return False
        self._seen.add(key)
        self.pairs.append((f, a))
        return True

    def max_level(self) -> Fraction:
        return max((a for _, a in self.pairs), default=Fraction(0))

    def describe(self) -> list[tuple[str, str]]:
        return [(self.ring.to_text(f), str(a)) for f, a in self.pairs]

    # ------------------------------------------------------------------
    def minimal_products(self, t) -> list[dict]:
        """Jets of products over minimal generator multisets reaching level t.

        Only multisets whose factors' orders sum to at most T contribute a
        nonzero jet; the rest are dropped.  Requires t > 0 and no unit
        generator (both cases short-circuit in `level_slice_basis`).
        """
        t = Fraction(t)
        cached = self._product_cache.get(t)
        if cached is not None:
            return cached
        ring = self.ring
        gens = self.pairs
        ords = [ring.ord_at_origin(f) for f, _ in gens]
        products: list[dict] = []
        # stack entry: (next generator index, level sum, ord sum, jet so far,
        #               levels of chosen factors)
        def dfs(start: int, lvl: Fraction, ord_sum: int, jet: dict, chosen: list):
            if lvl >= t:
                if all(lvl - a < t for a in chosen):  # minimality
                    if jet:
                        products.append(jet)
                return
            for i in range(start, len(gens)):
                f, a = gens[i]
                if ord_sum + ords[i] > ring.trunc:
                    continue
                nxt = ring.mul(jet, f)
                if not nxt:
                    continue
                chosen.append(a)
                dfs(i, lvl + a, ord_sum + ords[i], nxt, chosen)
                chosen.pop()

        dfs(0, Fraction(0), 0, ring.one(), [])
        self._product_cache[t] = products
        return products

    def level_slice_basis(self, t, monomials: list[tuple[int, ...]] | None = None) -> Echelon:
        """Echelon basis of the level-t slice modulo degree > T.

        Columns follow `monomials` (default: all monomials of degree <= T in
        graded-lex order).  The slice is the ideal generated by the minimal
        products, so each product is inserted together with all its monomial
        multiples that survive truncation.
        """
        t = Fraction(t)
        ring = self.ring
        default_order = monomials is None
        if default_order:
            cached = self._slice_cache.get(t)
            if cached is not None:
                return cached
            monomials = ring.monomials_up_to(ring.trunc)
        index = {e: i for i, e in enumerate(monomials)}
        width = len(monomials)
        ech = Echelon(ring.field, width)
        full_target = width

        if t > ring.trunc + 1:
            warnings.warn(
                f"slice at level {t} lies beyond the truncation window "
                f"(T = {ring.trunc}); the computed span may be trivial",
                SliceTruncationCaveat, stacklevel=2)

        if t <= 0:
            # everything belongs below level zero
            for e in monomials:
                ech.insert(ring.vector_of(ring.monomial(e), index, width))
        elif any(ring.ord_at_origin(f) == 0 for f, _ in self.pairs):
            # a generator is a unit at the origin, so a high enough power of
            # it reaches any level while staying a unit: the slice is everything
            for e in monomials:
                ech.insert(ring.vector_of(ring.monomial(e), index, width))
        else:
            for g in self.minimal_products(t):
                base_ord = ring.ord_at_origin(g)
                for k in range(ring.trunc - base_ord + 1):
                    for K in ring.monomials_of_degree(k):
                        if ech.rank == full_target:
                            break
                        ech.insert(ring.vector_of(
                            ring.mul_monomial(g, K), index, width))
                if ech.rank == full_target:
                    break
        if default_order:
            self._slice_cache[t] = ech
        return ech

    def membership(self, f: dict, t) -> bool:
        """Whether f lies in the level-t slice, modulo degree > T.

        One-sided: a positive answer certifies membership up to degree > T
        corrections only; a negative answer is exact (the slice's image mod
        degree > T already misses f).
        """
        ring = self.ring
        ech = self.level_slice_basis(t)
        index = ring.monomial_index(ring.trunc)
        vec = ring.vector_of(ring.truncate(f, ring.trunc), index, len(index))
        return ech.contains(vec)

    def in_support(self, point) -> bool:
        """Whether every generator vanishes at `point` to at least its level.

        Exact polynomial arithmetic: the order of f at the point is read off
        the recentered representative, with no modulo-degree hedging.
        """
        ring = self.ring
        for f, a in self.pairs:
            shifted = ring.translate_to_point(f, point)
            if ring.ord_at_origin(shifted) < a:
                return False
        return True

    def localize(self, point) -> "Filtration":
        """The same weighted system presented around a new origin.

        Derivative closure survives recentering (divided-power operators
        commute with translation), so the saturation flag carries over.
        """
        ring = self.ring
        moved = [(ring.translate_to_point(f, point), a) for f, a in self.pairs]
        return Filtration(ring, moved, saturated=self.saturated)

    def substitute_linear(self, matrix) -> "Filtration":
        """Apply an invertible linear change of coordinates to every generator."""
        ring = self.ring
        moved = [(ring.substitute_linear(f, matrix), a) for f, a in self.pairs]
        return Filtration(ring, moved, saturated=self.saturated)


def generate(ring: JetRing, pairs) -> Filtration:
    """The weighted ideal system presented by (polynomial, level) pairs."""
    return Filtration(ring, pairs)


def d_saturate(filt: Filtration) -> Filtration:
    """Close the presentation under divided-power derivatives.

    For every pair (f, a) and every index I with 0 < |I| < ceil(a), the pair
    (D_I f, a - |I|) joins the presentation; new pairs are processed the same
    way until nothing nontrivial appears.  The result presents the smallest
    derivative-closed system containing the input.
    """
    ring = filt.ring
    out = Filtration(ring, filt.pairs, saturated=True)
    queue = list(out.pairs)
    while queue:
        f, a = queue.pop()
        ceil_a = -(-a.numerator // a.denominator)
        for total in range(1, ceil_a):
            for I in ring.monomials_of_degree(total):
                g = ring.hasse_deriv(f, I)
                if out.push(g, a - total):
                    queue.append((g, a - total))
    return out


def level_slice_basis(filt: Filtration, t, monomials=None) -> Echelon:
    return filt.level_slice_basis(t, monomials)


def membership(filt: Filtration, f: dict, t) -> bool:
    return filt.membership(f, t)


def in_support(filt: Filtration, point) -> bool:
    return filt.in_support(point)


def localize(filt: Filtration, point) -> Filtration:
    return filt.localize(point)


def require_saturated(filt: Filtration, what: str) -> None:
    if not filt.saturated:
        raise PreconditionError(
            f"{what} expects a derivative-closed presentation; "
            "call d_saturate first")
