"""Incremental row echelon forms over an exact field.

The central object is `Echelon`: rows are inserted one at a time, reduced
against the rows already present, normalized to pivot 1, and then frozen.
Because stored rows are never reduced backwards, any prefix of the insertion
history is itself a valid echelon basis of the span of the rows inserted up
to that point.  Callers exploit this to grow one basis through several
"epochs" (e.g. adding relaxation rows degree by degree) and still ask rank
questions about each stage.

Row storage is delegated to the field (plain scalar lists by default, numpy
arrays for small prime fields); column meaning is owned by the caller.  An
optional tag travels with each independent row so the caller can recover
which original datum produced a given pivot.
"""

from __future__ import annotations

from bisect import insort

from .errors import DimensionMismatch, LinearAlgebraError


class Echelon:
    """Growing echelon basis with per-row tags and epoch bookkeeping."""

    __slots__ = ("field", "width", "rows", "pivots", "tags", "_by_column",
                 "_epoch_sizes")

    def __init__(self, field, width: int):
        self.field = field
        self.width = width
        self.rows: list = []
        self.pivots: list[int] = []   # pivot column of rows[i], in insert order
        self.tags: list = []
        self._by_column: list[tuple[int, int]] = []  # (pivot col, row idx) sorted
        self._epoch_sizes: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce_in_place(self, work, nrows: int | None = None):
        F = self.field
        for col, ridx in self._by_column:
            if nrows is not None and ridx >= nrows:
                continue
            c = F.row_get(work, col)
            if c != F.zero:
                F.row_submul(work, c, self.rows[ridx])
        return work

    def reduce(self, vec) -> list:
        """Remainder of vec after elimination by the current rows (as a list)."""
        if len(vec) != self.width:
            raise DimensionMismatch(f"row has {len(vec)} entries, expected {self.width}")
        work = self._reduce_in_place(self.field.make_row(vec))
        return self.field.row_to_list(work)

    def insert(self, vec, tag=None) -> bool:
        """Reduce and store vec; True if it added a new dimension."""
        F = self.field
        if len(vec) != self.width:
            raise DimensionMismatch(f"row has {len(vec)} entries, expected {self.width}")
        work = self._reduce_in_place(F.make_row(vec))
        piv = F.row_first_nonzero(work)
        if piv < 0:
            return False
        lead = F.row_get(work, piv)
        if lead != F.one:
            work = F.row_scale(work, F.inv(lead))
        insort(self._by_column, (piv, len(self.rows)))
        self.rows.append(work)
        self.pivots.append(piv)
        self.tags.append(tag)
        return True

    def contains(self, vec) -> bool:
        if len(vec) != self.width:
            raise DimensionMismatch(f"row has {len(vec)} entries, expected {self.width}")
        work = self._reduce_in_place(self.field.make_row(vec))
        return self.field.row_first_nonzero(work) < 0

    def row_as_list(self, i: int) -> list:
        return self.field.row_to_list(self.rows[i])

    # -- epochs ----------------------------------------------------------
    def mark_epoch(self) -> int:
        """Record the current rank; returns the epoch index."""
        self._epoch_sizes.append(len(self.rows))
        return len(self._epoch_sizes) - 1

    def rank_at_epoch(self, epoch: int) -> int:
        return self._epoch_sizes[epoch]

    def in_prefix_span(self, vec, nrows: int) -> bool:
        """Membership in the span of the first nrows stored rows.

        Valid because rows are frozen at insertion: the first nrows rows are
        exactly the echelon produced by the first nrows successful inserts.
        """
        if len(vec) != self.width:
            raise DimensionMismatch(f"row has {len(vec)} entries, expected {self.width}")
        work = self._reduce_in_place(self.field.make_row(vec), nrows)
        return self.field.row_first_nonzero(work) < 0


def solve_unique(field, matrix: list[list], rhs: list[list]) -> list[list]:
    """Solve M x = b for each b in rhs, demanding a square full-rank M.

    matrix is a list of rows; rhs a list of right-hand-side vectors of the
    same height.  Returns solutions as column vectors (lists).  Raises
    LinearAlgebraError when M is singular or non-square.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise LinearAlgebraError("matrix is not square")
    for b in rhs:
        if len(b) != n:
            raise DimensionMismatch("right-hand side has wrong height")
    F = field
    # gaussian elimination with augmented columns, pivot = first usable row
    aug = [list(matrix[i]) + [b[i] for b in rhs] for i in range(n)]
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if aug[r][col] != F.zero:
                pivot_row = r
                break
        if pivot_row is None:
            raise LinearAlgebraError("matrix is singular")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv = F.inv(aug[col][col])
        aug[col] = [F.mul(inv, c) for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != F.zero:
                F.vec_submul(aug[r], aug[r][col], aug[col])
    return [[aug[i][n + k] for i in range(n)] for k in range(len(rhs))]


def invert_matrix(field, matrix: list[list]) -> list[list]:
    """Inverse of a square matrix as a list of rows."""
    n = len(matrix)
    cols = solve_unique(field, matrix,
                        [[field.one if i == j else field.zero for i in range(n)]
                         for j in range(n)])
    # cols[j] is the j-th column of the inverse; transpose into rows
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def matrix_rank(field, rows: list[list]) -> int:
    if not rows:
        return 0
    ech = Echelon(field, len(rows[0]))
    for row in rows:
        ech.insert(list(row))
    return ech.rank


def mat_vec(field, matrix: list[list], vec: list) -> list:
    F = field
    out = []
    for row in matrix:
        acc = F.zero
        for a, b in zip(row, vec):
            if a != F.zero and b != F.zero:
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out


def mat_mul(field, A: list[list], B: list[list]) -> list[list]:
    F = field
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = [[F.zero] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a == F.zero:
                continue
            Bt = B[t]
            for j in range(m):
                b = Bt[j]
                if b != F.zero:
                    Oi[j] = F.add(Oi[j], F.mul(a, b))
    return out
