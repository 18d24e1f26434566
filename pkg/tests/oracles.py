"""Independent reference computations the tests check the package against.

Everything here deliberately avoids the package's own algorithms: binomials
come from math.comb on big integers instead of the carry decomposition,
Hasse derivatives from the raw coefficient formula, and ideal membership
from sympy Groebner bases.  Slow is fine; these only run on small cases.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy as sp


def comb_mod(n: int, k: int, p: int) -> int:
    """Binomial coefficient reduced mod p, via exact big-integer arithmetic."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k) % p


def hasse_of_monomial(J: tuple[int, ...], I: tuple[int, ...], p: int):
    """(coefficient mod p, exponent tuple) of the I-th divided derivative of
    X^J, or None when it dies."""
    if any(i > j for i, j in zip(I, J)):
        return None
    c = 1
    for j, i in zip(J, I):
        c = c * math.comb(j, i)
    c = c % p if p else Fraction(c)
    if c == 0:
        return None
    return c, tuple(j - i for j, i in zip(J, I))


def hasse_poly(f: dict, I: tuple[int, ...], p: int) -> dict:
    """Apply hasse_of_monomial term by term; plain dict arithmetic."""
    out: dict = {}
    for J, c in f.items():
        hit = hasse_of_monomial(J, I, p)
        if hit is None:
            continue
        scale, K = hit
        merged = (out.get(K, 0) + c * scale)
        merged = merged % p if p else merged
        if merged:
            out[K] = merged
        elif K in out:
            del out[K]
    return out


def _to_sympy(f: dict, symbols) -> sp.Expr:
    expr = sp.Integer(0)
    for expts, c in f.items():
        term = sp.Integer(int(c) if not isinstance(c, Fraction) else c)
        for s, e in zip(symbols, expts):
            term *= s ** e
        expr += term
    return expr


def groebner_member(f: dict, gens: list[dict], nvars: int, trunc: int,
                    p: int) -> bool:
    """Is f in the ideal of gens plus all monomials of degree trunc+1,
    over GF(p) (or QQ when p == 0)?  Groebner reduction, nothing shared
    with the package's echelon code."""
    symbols = sp.symbols(f"s0:{nvars}")
    domain = sp.GF(p) if p else sp.QQ
    basis = [_to_sympy(g, symbols) for g in gens if g]
    for expts in _degree_tuples(nvars, trunc + 1):
        basis.append(_to_sympy({expts: 1}, symbols))
    G = sp.groebner(basis, *symbols, order="grevlex", domain=domain)
    target = _to_sympy(f, symbols)
    return G.reduce(target)[1] == 0


def _degree_tuples(nvars: int, total: int):
    if nvars == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _degree_tuples(nvars - 1, total - head):
            yield (head,) + rest


def min_total_degree(f: dict):
    """Order at the origin, read straight off the support."""
    return min(sum(e) for e in f) if f else None


def slice_products(pairs, t: Fraction):
    """Every multiset of generator indices whose level sum reaches t and
    stays minimal (dropping any element falls short).  Brute force."""
    out = []
    n = len(pairs)

    def rec(start: int, chosen: list[int], total: Fraction):
        if total >= t:
            if all(total - pairs[i][1] < t for i in chosen):
                out.append(tuple(chosen))
            return
        for i in range(start, n):
            chosen.append(i)
            rec(i, chosen, total + pairs[i][1])
            chosen.pop()

    if n:
        rec(0, [], Fraction(0))
    return out
