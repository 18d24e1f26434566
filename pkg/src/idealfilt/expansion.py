"""Constrained power-series expansion along a pure generator system.

Fix a system H = (h_1, ..., h_N) whose entry l opens, in its own coordinates,
with the monomial y_l^{q_l} (q_l = p^{e_l}).  Every jet f then decomposes
uniquely as

    f  =  sum_B  a_B * H^B        (B running over N-tuples of exponents)

where each coefficient a_B only contains monomials whose y_l-exponent stays
below q_l for l <= N.  The decomposition is computed degree by degree: the
smallest monomial y^I of the residue splits as I = [B] + K with k_l = i_l
mod q_l, the reduced part c*y^K joins a_B, and c*y^K*(H^B - y^{[B]}) -- a jet
of strictly higher order -- is pushed back into the residue.  Everything is
exact modulo degree > T.

On top of the expansion this module provides the order of an element along
the system, computed two independent ways (the order of the constant
coefficient a_O, and the largest n with f in (H) + m^n by incremental linear
algebra), and machine checks of two statements about coefficients of slice
elements: every a_B of an element of the level-a slice sits in the
level-(a - |[B]|) slice, and -- in the sharpened form that needs a slope nu
below the system's minimal order ratio -- vanishes to order at least
ceil(nu*(a - |[B]|)), with the primed slices multiplying back into level a.

Truncation-aware results use `OrdValue`: exact n, "at least b" (a finite
value hidden past the window), or "infinite" (provably, or up to the window
when a bound accompanies it).  All verdicts here are one-sided in the same
way slice membership is: a refutation is exact, a pass certifies the claim
modulo degree > T.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvariantViolation, PreconditionError
from .filtration import Filtration, require_saturated
from .jetring import ORD_INFINITY, grlex_key
from .leading import LGS, jump_degree
from .linalg import Echelon, invert_matrix, matrix_rank


class OrdValue:
    """Order-like quantity as visible at finite truncation.

    kind is "exact" (value known), "at_least" (finite, hidden past the
    bound in `value`), or "infinite" (value None when provable, otherwise
    the certified bound below which nothing was seen).
    """

    __slots__ = ("kind", "value")

    EXACT = "exact"
    AT_LEAST = "at_least"
    INFINITE = "infinite"

    def __init__(self, kind: str, value=None):
        if kind not in (self.EXACT, self.AT_LEAST, self.INFINITE):
            raise ValueError(f"bad OrdValue kind {kind!r}")
        if kind != self.INFINITE and value is None:
            raise ValueError(f"{kind} needs a value")
        self.kind = kind
        self.value = value

    @classmethod
    def exact(cls, v):
        return cls(cls.EXACT, v)

    @classmethod
    def at_least(cls, bound):
        return cls(cls.AT_LEAST, bound)

    @classmethod
    def infinite(cls, bound=None):
        return cls(cls.INFINITE, bound)

    @property
    def is_exact(self) -> bool:
        return self.kind == self.EXACT

    @property
    def is_censored(self) -> bool:
        return self.kind != self.EXACT

    def lower_bound(self):
        """Largest value certainly <= the true quantity; None means +infinity."""
        return self.value

    def upper_bound(self):
        """Smallest value certainly >= the true quantity; None when unbounded."""
        return self.value if self.kind == self.EXACT else None

    def certainly_greater(self, other: "OrdValue") -> bool:
        """True only when every reading of self exceeds every reading of other."""
        hi = other.upper_bound()
        if hi is None:
            return False
        lo = self.lower_bound()
        return lo is None or lo > hi

    def scaled(self, factor) -> "OrdValue":
        if self.value is None:
            return OrdValue(self.kind, None)
        return OrdValue(self.kind, self.value * Fraction(factor))

    def __eq__(self, other):
        return (isinstance(other, OrdValue) and other.kind == self.kind
                and other.value == self.value)

    def __hash__(self):
        return hash((self.kind, self.value))

    def __repr__(self):
        return f"OrdValue({self.kind!r}, {self.value!r})"

    def to_text(self) -> str:
        if self.kind == self.EXACT:
            return str(self.value)
        if self.kind == self.AT_LEAST:
            return f">={self.value}"
        return "infinity" if self.value is None else f"infinity|>={self.value}"

    def to_json(self):
        return {"kind": self.kind,
                "value": None if self.value is None else str(self.value)}


class Expander:
    """Cached expansion machinery for one generator system."""

    __slots__ = ("lgs", "ring", "N", "qs", "O", "_products", "_tails",
                 "_ideal_echelon", "_filt_y")

    def __init__(self, lgs: LGS):
        ring = lgs.ring
        for l, (h, e) in enumerate(zip(lgs.entries_y, lgs.jumps)):
            q = jump_degree(ring.field, e)
            lead = ring.monomial(tuple(q if t == l else 0 for t in range(ring.nvars)))
            if ring.truncate(h, q) != lead:
                raise PreconditionError(
                    f"entry {l} does not open with its coordinate power; "
                    "the expansion needs the system's own coordinates")
        self.lgs = lgs
        self.ring = ring
        self.N = lgs.size
        self.qs = lgs.orders()
        self.O = (0,) * self.N
        self._products: dict[tuple, dict] = {self.O: ring.one()}
        self._tails: dict[tuple, dict] = {}
        self._ideal_echelon: Echelon | None = None
        self._filt_y: Filtration | None = None

    # -- multi-index helpers ----------------------------------------------
    def weighted(self, B: tuple) -> int:
        """|[B]| = sum q_l * b_l."""
        return sum(q * b for q, b in zip(self.qs, B))

    def bracket(self, B: tuple) -> tuple:
        """The exponent vector (q_1 b_1, ..., q_N b_N, 0, ..., 0)."""
        d = self.ring.nvars
        return tuple(self.qs[l] * B[l] if l < self.N else 0 for l in range(d))

    def product(self, B: tuple) -> dict:
        """The jet of H^B, truncated like every ring product."""
        got = self._products.get(B)
        if got is None:
            l = next(i for i, b in enumerate(B) if b)
            prev = tuple(b - 1 if i == l else b for i, b in enumerate(B))
            got = self.ring.mul(self.product(prev), self.lgs.entries_y[l])
            self._products[B] = got
        return got

    def tail(self, B: tuple) -> dict:
        got = self._tails.get(B)
        if got is None:
            got = self.ring.sub(self.product(B), self.ring.monomial(self.bracket(B)))
            self._tails[B] = got
        return got

    # -- the expansion proper -----------------------------------------------
    def expand(self, f: dict) -> dict[tuple, dict]:
        """Split f (already in the system's coordinates) into {B: a_B}.

        The constant index O is always present.  Each a_B obeys the exponent
        window (y_l-exponents below q_l for l <= N) and is accurate modulo
        degree > T - |[B]|, which is as much of it as the truncated product
        a_B * H^B can ever show.
        """
        ring = self.ring
        N, qs = self.N, self.qs
        rem = ring.truncate(f, ring.trunc)
        out: dict[tuple, dict] = {self.O: {}}
        for deg in range(ring.trunc + 1):
            batch = sorted((e for e in rem if sum(e) == deg), key=grlex_key)
            for e in batch:
                c = rem.pop(e)
                B = tuple(e[l] // qs[l] for l in range(N))
                red = tuple(e[l] % qs[l] if l < N else e[l]
                            for l in range(ring.nvars))
                # e <-> (B, red) is a bijection and tail pushes only create
                # strictly higher degrees, so each slot is written once.
                out.setdefault(B, {})[red] = c
                if B == self.O:
                    continue
                t = self.tail(B)
                if t:
                    rem = ring.sub(rem, ring.mul_monomial(t, red, c))
        return {B: aB for B, aB in out.items() if aB or B == self.O}

    def reassemble(self, coeffs: dict[tuple, dict]) -> dict:
        ring = self.ring
        total = ring.zero()
        for B, aB in coeffs.items():
            total = ring.add(total, ring.mul(aB, self.product(B)))
        return total

    # -- membership along (H) + powers of the maximal ideal ---------------
    def _graded_echelon(self, base_polys: list[dict]) -> Echelon:
        """Echelon of span(base) + m^n for every n at once.

        Base ideal rows go in first (epoch 0, the n = T+1 stage); then all
        monomials of degree T, T-1, ..., 1, marking an epoch after each
        degree, so the prefix at epoch T+1-n spans base + m^n modulo degree
        > T.  Forward-only reduction keeps every prefix a genuine echelon of
        its own stage.
        """
        ring = self.ring
        index = ring.monomial_index(ring.trunc)
        width = len(index)
        ech = Echelon(ring.field, width)
        for g in base_polys:
            base_ord = ring.ord_at_origin(g)
            if base_ord == ORD_INFINITY:
                continue
            for k in range(ring.trunc - int(base_ord) + 1):
                if ech.rank == width:
                    break
                for K in ring.monomials_of_degree(k):
                    ech.insert(ring.vector_of(ring.mul_monomial(g, K), index, width))
        ech.mark_epoch()
        F = ring.field
        for deg in range(ring.trunc, 0, -1):
            for K in ring.monomials_of_degree(deg):
                vec = [F.zero] * width
                vec[index[K]] = F.one
                ech.insert(vec)
            ech.mark_epoch()
        return ech

    def ideal_echelon(self) -> Echelon:
        if self._ideal_echelon is None:
            self._ideal_echelon = self._graded_echelon(self.lgs.entries_y)
        return self._ideal_echelon

    def member_with_floor(self, ech: Echelon, f: dict, n: int) -> bool:
        """Whether f lies in (echelon base) + m^n, modulo degree > T."""
        ring = self.ring
        T = ring.trunc
        if n <= 0:
            return True
        if n > T + 1:
            raise PreconditionError(f"floor {n} reaches past the window (T={T})")
        index = ring.monomial_index(T)
        vec = ring.vector_of(ring.truncate(f, T), index, len(index))
        prefix = ech.rank_at_epoch(T + 1 - n)
        return ech.in_prefix_span(vec, prefix)

    def in_h_ideal(self, f: dict) -> bool:
        """f in (h_1, ..., h_N), modulo degree > T."""
        return self.member_with_floor(self.ideal_echelon(), f, self.ring.trunc + 1)

    def ord_by_membership(self, f: dict) -> OrdValue:
        if not f:
            return OrdValue.infinite()
        ech = self.ideal_echelon()
        T = self.ring.trunc
        if self.member_with_floor(ech, f, T + 1):
            return OrdValue.at_least(T + 1)
        lo, hi = 0, T + 1  # member at lo, not at hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.member_with_floor(ech, f, mid):
                lo = mid
            else:
                hi = mid
        return OrdValue.exact(lo)

    # -- shared by the coefficient checks -----------------------------------
    def filt_y(self, filt: Filtration) -> Filtration:
        if filt is self.lgs.filt:
            if self._filt_y is None:
                self._filt_y = filt.substitute_linear(self.lgs.C_inv)
            return self._filt_y
        return filt.substitute_linear(self.lgs.C_inv)


def get_expander(lgs: LGS) -> Expander:
    exp = lgs.scratch.get("expander")
    if exp is None:
        exp = Expander(lgs)
        lgs.scratch["expander"] = exp
    return exp


# ---------------------------------------------------------------------------
# coordinate-compatibility checks

def check_associated(lgs: LGS) -> bool:
    """Does entry l open with exactly y_l^{q_l} in the system's coordinates?"""
    ring = lgs.ring
    for l, (h, e) in enumerate(zip(lgs.entries_y, lgs.jumps)):
        q = jump_degree(ring.field, e)
        lead = ring.monomial(tuple(q if t == l else 0 for t in range(ring.nvars)))
        if ring.truncate(h, q) != lead:
            return False
    return True


def check_weakly_associated(lgs: LGS, coords=None) -> bool:
    """Invertibility of the pure-coefficient minors at the origin.

    For each jump value e, take the entries l with e_l <= e and the matching
    coordinate slots; the matrix whose (i, l) entry is the coefficient of
    y_i^{p^e} in h_l^{p^{e-e_l}} must be invertible.  An associated system
    gives identity matrices.  `coords` (rows of a linear change y = M*x)
    substitutes a candidate frame for the system's own; a frame whose pure
    directions sit in the wrong slots fails through a singular minor.
    """
    ring = lgs.ring
    F = ring.field
    if coords is None:
        entries = lgs.entries_y
    else:
        inv = invert_matrix(F, [list(r) for r in coords])
        entries = [ring.substitute_linear(h, inv) for h in lgs.entries_x()]
    for e in sorted(set(lgs.jumps)):
        q = jump_degree(F, e)
        idxs = [l for l in range(lgs.size) if lgs.jumps[l] <= e]
        powered = {l: ring.power(entries[l], q // jump_degree(F, lgs.jumps[l]))
                   for l in idxs}
        rows = []
        for i in idxs:
            target = tuple(q if t == i else 0 for t in range(ring.nvars))
            rows.append([ring.coefficient(powered[l], target) for l in idxs])
        if matrix_rank(F, rows) != len(idxs):
            return False
    return True


# ---------------------------------------------------------------------------
# public expansion interface

class ExpansionResult:
    """The coefficients {B: a_B} of one expansion, in system coordinates."""

    __slots__ = ("lgs", "coeffs", "trunc")

    def __init__(self, lgs: LGS, coeffs: dict[tuple, dict]):
        self.lgs = lgs
        self.coeffs = coeffs
        self.trunc = lgs.ring.trunc

    def constant(self) -> dict:
        return self.coeffs.get((0,) * self.lgs.size, {})

    def get(self, B) -> dict:
        return self.coeffs.get(tuple(B), {})

    def items(self):
        return sorted(self.coeffs.items())

    def to_records(self) -> list[dict]:
        ring = self.lgs.ring
        exp = get_expander(self.lgs)
        return [{"B": list(B), "levelBB": str(exp.weighted(B)),
                 "a_B": ring.to_text(aB)}
                for B, aB in self.items()]


def expand(f: dict, lgs: LGS) -> ExpansionResult:
    """Expand f (local coordinates of the extraction point) along the system."""
    exp = get_expander(lgs)
    return ExpansionResult(lgs, exp.expand(lgs.to_y(f)))


def reassemble(result: ExpansionResult) -> dict:
    """Inverse of expand, back in the local coordinates: sum of a_B * H^B."""
    exp = get_expander(result.lgs)
    return result.lgs.from_y(exp.reassemble(result.coeffs))


def ord_h_expansion(f: dict, lgs: LGS) -> OrdValue:
    """Order along the system, read off the constant coefficient a_O."""
    if not f:
        return OrdValue.infinite()
    exp = get_expander(lgs)
    a0 = exp.expand(lgs.to_y(f))[(0,) * lgs.size]
    if not a0:
        return OrdValue.at_least(lgs.ring.trunc + 1)
    return OrdValue.exact(int(lgs.ring.ord_at_origin(a0)))


def ord_h_membership(f: dict, lgs: LGS) -> OrdValue:
    """Order along the system as sup{n : f in (H) + m^n}, found by bisection.

    Independent of the expansion: only the ideal rows, the monomial rows and
    prefix-rank queries of one incremental echelon are involved.
    """
    if not f:
        return OrdValue.infinite()
    exp = get_expander(lgs)
    return exp.ord_by_membership(lgs.to_y(f))


# ---------------------------------------------------------------------------
# coefficient-statement harnesses

def _as_level(a) -> Fraction:
    a = Fraction(a)
    if a <= 0:
        raise PreconditionError(f"level must be positive, got {a}")
    return a


def check_fcl(filt: Filtration, f: dict, a, lgs: LGS) -> dict:
    """Every coefficient a_B of a level-a slice element must sit in the
    level-(a - |[B]|) slice.  Verified modulo degree > T; any failing B is
    listed and refutes the statement at this truncation."""
    require_saturated(filt, "check_fcl")
    a = _as_level(a)
    if not filt.membership(f, a):
        raise PreconditionError("f is not a visible member of the level-a slice")
    exp = get_expander(lgs)
    filt_y = exp.filt_y(filt)
    ring = lgs.ring
    rows = []
    holds = True
    for B, aB in sorted(exp.expand(lgs.to_y(f)).items()):
        t = a - exp.weighted(B)
        ok = t <= 0 or filt_y.membership(aB, t)
        holds = holds and ok
        rows.append({"B": list(B), "level": str(t), "member": ok,
                     "a_B": ring.to_text(aB)})
    return {"holds": holds, "coefficients": rows, "truncation": ring.trunc,
            "level": str(a)}


def _eta(exp: Expander, g: dict, coeffs: dict[tuple, dict]):
    """The pair (ord g, smallest B whose term attains it); None for zero g."""
    ring = exp.ring
    nu = ring.ord_at_origin(g)
    if nu == ORD_INFINITY:
        return None
    nu = int(nu)
    candidates = [B for B, aB in coeffs.items()
                  if aB and int(ring.ord_at_origin(aB)) + exp.weighted(B) == nu]
    if not candidates:
        raise InvariantViolation(
            "no coefficient attains the order of its own expansion")
    return (nu, min(candidates))


def _eta_less(x, y) -> bool:
    """Strict comparison with None acting as +infinity."""
    if x is None:
        return False
    if y is None:
        return True
    return x < y


def fcl_iterate(filt: Filtration, f: dict, a, lgs: LGS, max_steps: int) -> dict:
    """Run the contraction g -> g - H^{B_o} * D_{[B_o]} g from the smallest
    term of the expansion, tracking the certificate conditions:

      (0)_n  g_n stays in the ideal (H),
      (1)_n  a_O + g_n stays in the level-a slice,
      (2)_n  eta(g) = (ord g, smallest attaining B) strictly grows.

    Stops when g vanishes modulo degree > T or after max_steps.  The report
    carries the slice-membership verdict for the constant coefficient
    (a_O, a), which is what the iteration is evidence for.
    """
    require_saturated(filt, "fcl_iterate")
    a = _as_level(a)
    if not filt.membership(f, a):
        raise PreconditionError("f is not a visible member of the level-a slice")
    exp = get_expander(lgs)
    ring = lgs.ring
    filt_y = exp.filt_y(filt)
    fy = lgs.to_y(f)
    a0 = exp.expand(fy)[(0,) * lgs.size]
    g = ring.sub(fy, a0)

    steps = []
    holds = True
    previous_eta = None
    exhausted = False
    n = 0
    while True:
        eta = _eta(exp, g, exp.expand(g)) if g else None
        increased = True if n == 0 else _eta_less(previous_eta, eta)
        cond0 = exp.in_h_ideal(g)
        cond1 = filt_y.membership(ring.add(a0, g), a)
        steps.append({"step": n, "in_ideal": cond0, "sum_member": cond1,
                      "eta_increased": increased,
                      "eta": None if eta is None else [eta[0], list(eta[1])]})
        holds = holds and cond0 and cond1 and increased
        if eta is None:
            break
        if n >= max_steps:
            exhausted = True
            break
        previous_eta = eta
        B_o = eta[1]
        if B_o == (0,) * lgs.size:
            raise InvariantViolation(
                "the reduced part came out ahead; g left the ideal (H)")
        deriv = ring.hasse_deriv(g, exp.bracket(B_o))
        g = ring.sub(g, ring.mul(exp.product(B_o), deriv))
        n += 1

    return {"holds": holds and not exhausted, "steps": steps,
            "iterations": n, "exhausted": exhausted,
            "constant_term_member": filt_y.membership(a0, a),
            "truncation": ring.trunc, "level": str(a)}


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def check_coefficient_lemma(filt: Filtration, a, nu, lgs: LGS) -> dict:
    """Sharpened coefficient statement at vanishing-order slope nu.

    Forward: every basis element of the level-a slice expands with, for each
    B, a coefficient lying in the level-t slice (t = a - |[B]|) *and*
    vanishing to order at least ceil(nu*t).  Reverse: products s'*H^B, with
    s' running over a basis of the level-t slice intersected with
    m^{ceil(nu*t)} and |[B]| < a + q_N, land back in the level-a slice.
    Requires nu certified below the system's minimal order ratio.
    """
    require_saturated(filt, "check_coefficient_lemma")
    a = _as_level(a)
    nu = Fraction(nu)
    if nu < 0:
        raise PreconditionError(f"the slope must be nonnegative, got {nu}")
    from .invariants import mu_tilde  # deferred: invariants builds on this module
    mu = mu_tilde(filt, lgs)
    mu_floor = mu.lower_bound()
    if mu_floor is not None and nu >= mu_floor:
        raise PreconditionError(
            f"slope {nu} is not certified below the minimal order ratio "
            f"({mu.to_text()})")

    exp = get_expander(lgs)
    ring = lgs.ring
    F = ring.field
    filt_y = exp.filt_y(filt)
    T = ring.trunc
    q_N = max(exp.qs, default=1)

    forward = []
    holds = True
    basis = filt_y.level_slice_basis(a)
    monos = ring.monomials_up_to(T)
    for i in range(basis.rank):
        row = basis.row_as_list(i)
        fpoly = {m: c for m, c in zip(monos, row) if c != F.zero}
        for B, aB in sorted(exp.expand(fpoly).items()):
            t = a - exp.weighted(B)
            if t <= 0:
                continue
            floor = _ceil_fraction(nu * t)
            member = filt_y.membership(aB, t)
            deep_enough = ring.ord_at_origin(aB) >= floor
            holds = holds and member and deep_enough
            if not (member and deep_enough):
                forward.append({"basis_row": i, "B": list(B), "level": str(t),
                                "member": member, "ord_floor": floor,
                                "floor_met": deep_enough,
                                "a_B": ring.to_text(aB)})

    reverse = []
    for B in _indices_up_to(exp, min(T, _ceil_fraction(a + q_N) - 1)):
        t = a - exp.weighted(B)
        HB = exp.product(B)
        if t <= 0:
            if not filt_y.membership(HB, a):
                holds = False
                reverse.append({"B": list(B), "level": str(t),
                                "witness": "H^B itself"})
            continue
        floor = _ceil_fraction(nu * t)
        for s in _deep_slice_basis(filt_y, t, floor):
            if not filt_y.membership(ring.mul(s, HB), a):
                holds = False
                reverse.append({"B": list(B), "level": str(t),
                                "witness": ring.to_text(s)})
    return {"holds": holds, "forward_failures": forward,
            "reverse_failures": reverse, "nu": str(nu), "level": str(a),
            "truncation": T, "mu_tilde": mu.to_text()}


def _indices_up_to(exp: Expander, max_weight: int) -> list[tuple]:
    """All N-tuples B with |[B]| <= max_weight (including the zero tuple)."""
    out: list[tuple] = []

    def rec(pos: int, left: int, acc: list[int]):
        if pos == exp.N:
            out.append(tuple(acc))
            return
        q = exp.qs[pos]
        b = 0
        while q * b <= left:
            acc.append(b)
            rec(pos + 1, left - q * b, acc)
            acc.pop()
            b += 1

    if max_weight >= 0:
        rec(0, max_weight, [])
    return out


def _deep_slice_basis(filt_y: Filtration, t: Fraction, floor: int) -> list[dict]:
    """Basis of (level-t slice) intersected with m^floor, modulo degree > T.

    Column trick: monomials of degree below the floor come first, so echelon
    rows whose pivot falls in the tail block have no low-degree support and
    together span exactly the intersection.
    """
    ring = filt_y.ring
    F = ring.field
    monos = ring.monomials_up_to(ring.trunc)
    if floor <= 0:
        basis = filt_y.level_slice_basis(t)
        return [{m: c for m, c in zip(monos, basis.row_as_list(i)) if c != F.zero}
                for i in range(basis.rank)]
    shallow = [m for m in monos if sum(m) < floor]
    deep = [m for m in monos if sum(m) >= floor]
    columns = shallow + deep
    ech = filt_y.level_slice_basis(t, monomials=columns)
    cut = len(shallow)
    out = []
    for i in range(ech.rank):
        if ech.pivots[i] >= cut:
            row = ech.row_as_list(i)
            out.append({m: c for m, c in zip(columns, row) if c != F.zero})
    return out
