"""Exact linear algebra over prime fields F_p.

Matrices are sparse maps ``(row, col) -> value`` together with an explicit
shape.  Every elimination follows a fixed, documented pivot order, so ranks,
kernel bases and solution vectors are reproducible run to run -- the CLI's
byte-identical report guarantee bottoms out here.

Two elimination strategies are used:

* a natural-order reduced row echelon form (columns scanned left to right,
  pivot on the smallest available row index) that kernels and solves are
  built on, and
* a fewest-entries pivot heuristic for rank-only questions on matrices at or
  above the dense/sparse cutoff, where natural order can fill in badly.

Both strategies return identical ranks; the heuristic is never used for
kernels or solutions, whose coordinate vectors are part of the public
contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

Vector = Tuple[int, ...]

#: below this size (both dimensions) rank questions run dense elimination
_DENSE_CUTOFF = 64


class ContractViolation(Exception):
    """A pair of maps handed to homology_dim does not compose to zero."""


# ---------------------------------------------------------------------------
# matrix container
# ---------------------------------------------------------------------------


@dataclass
class FpSparseMatrix:
    """A rows x cols matrix over F_p stored as a {(row, col): value} map.

    Values are arbitrary ints; operations reduce mod p on entry.  The matrix
    acts on column vectors: it represents a linear map F_p^cols -> F_p^rows.
    """

    rows: int
    cols: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    @staticmethod
    def from_dense(data: Sequence[Sequence[int]]) -> "FpSparseMatrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        entries: Dict[Tuple[int, int], int] = {}
        for r, row in enumerate(data):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix data")
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = v
        return FpSparseMatrix(nrows, ncols, entries)

    @staticmethod
    def from_columns(rows: int, columns: Sequence[Dict[int, int]]) -> "FpSparseMatrix":
        """Assemble a matrix from per-column {row: value} maps."""
        entries: Dict[Tuple[int, int], int] = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                if not 0 <= r < rows:
                    raise ValueError("row index out of range")
                if v:
                    entries[(r, c)] = v
        return FpSparseMatrix(rows, len(columns), entries)

    @staticmethod
    def identity(n: int) -> "FpSparseMatrix":
        return FpSparseMatrix(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def mul_vec(self, vec: Sequence[int], p: int) -> Vector:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [0] * self.rows
        for (r, c), v in self.entries.items():
            out[r] += v * vec[c]
        return tuple(x % p for x in out)

    def compose(self, inner: "FpSparseMatrix", p: int) -> "FpSparseMatrix":
        """Matrix product self @ inner (apply inner first)."""
        if self.cols != inner.rows:
            raise ValueError("shapes do not compose")
        # group inner entries by row so each self entry is visited once per hit
        by_row: Dict[int, List[Tuple[int, int]]] = {}
        for (r, c), v in inner.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: Dict[Tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                acc[key] = acc.get(key, 0) + v * w
        entries = {k: v % p for k, v in acc.items() if v % p}
        return FpSparseMatrix(self.rows, inner.cols, entries)

    def transpose(self) -> "FpSparseMatrix":
        return FpSparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def is_zero(self, p: int) -> bool:
        return all(v % p == 0 for v in self.entries.values())


# ---------------------------------------------------------------------------
# elimination cores
# ---------------------------------------------------------------------------


def _sparse_rows(m: FpSparseMatrix, p: int) -> List[Dict[int, int]]:
    rows: List[Dict[int, int]] = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        vv = v % p
        if vv:
            rows[r][c] = vv
    return rows


def _rref(rows: List[Dict[int, int]], cols: int, p: int) -> List[Tuple[int, Dict[int, int]]]:
    """Reduced row echelon form in natural pivot order.

    Columns are scanned in increasing order; the pivot for a column is the
    smallest-index active row touching it.  Returns (pivot column, row map)
    pairs in increasing pivot-column order, with each pivot normalized to 1
    and eliminated from every other returned row.  Consumes the input rows.
    """
    col_index: Dict[int, Set[int]] = {}
    for rid, row in enumerate(rows):
        for c in row:
            col_index.setdefault(c, set()).add(rid)

    pivots: List[Tuple[int, Dict[int, int]]] = []
    for c in range(cols):
        touching = col_index.get(c)
        if not touching:
            continue
        rid = min(touching)
        piv = rows[rid]
        for cc in piv:
            col_index[cc].discard(rid)
        inv = pow(piv[c], -1, p)
        piv = {cc: (vv * inv) % p for cc, vv in piv.items()}
        for other_id in list(col_index.get(c, ())):
            other = rows[other_id]
            f = other[c]
            for cc, vv in piv.items():
                nv = (other.get(cc, 0) - f * vv) % p
                if nv:
                    if cc not in other:
                        col_index.setdefault(cc, set()).add(other_id)
                    other[cc] = nv
                elif cc in other:
                    del other[cc]
                    col_index[cc].discard(other_id)
        pivots.append((c, piv))

    # clear pivot columns from the pivot rows above them
    for i in range(len(pivots) - 1, -1, -1):
        c, piv = pivots[i]
        for j in range(i):
            rowj = pivots[j][1]
            f = rowj.get(c)
            if not f:
                continue
            for cc, vv in piv.items():
                nv = (rowj.get(cc, 0) - f * vv) % p
                if nv:
                    rowj[cc] = nv
                elif cc in rowj:
                    del rowj[cc]
    return pivots


def _rank_dense(m: FpSparseMatrix, p: int) -> int:
    mat = [[v % p for v in row] for row in m.to_dense()]
    nrows, ncols = m.rows, m.cols
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if mat[r][c]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        prow = [(x * inv) % p for x in mat[rank]]
        mat[rank] = prow
        for r in range(nrows):
            if r != rank and mat[r][c]:
                f = mat[r][c]
                mat[r] = [(x - f * y) % p for x, y in zip(mat[r], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_sparse(m: FpSparseMatrix, p: int) -> int:
    rows = _sparse_rows(m, p)
    col_index: Dict[int, Set[int]] = {}
    for rid, row in enumerate(rows):
        for c in row:
            col_index.setdefault(c, set()).add(rid)
    rank = 0
    while col_index:
        c = min(col_index, key=lambda cc: (len(col_index[cc]), cc))
        touching = col_index[c]
        if not touching:
            del col_index[c]
            continue
        rid = min(touching, key=lambda r: (len(rows[r]), r))
        piv = rows[rid]
        for cc in piv:
            col_index[cc].discard(rid)
        inv = pow(piv[c], -1, p)
        piv = {cc: (vv * inv) % p for cc, vv in piv.items()}
        for other_id in list(col_index.get(c, ())):
            other = rows[other_id]
            f = other[c]
            for cc, vv in piv.items():
                nv = (other.get(cc, 0) - f * vv) % p
                if nv:
                    if cc not in other:
                        col_index.setdefault(cc, set()).add(other_id)
                    other[cc] = nv
                elif cc in other:
                    del other[cc]
                    col_index[cc].discard(other_id)
        del col_index[c]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def rank(m: FpSparseMatrix, p: int) -> int:
    """Rank of m over F_p."""
    if m.rows < _DENSE_CUTOFF and m.cols < _DENSE_CUTOFF:
        return _rank_dense(m, p)
    return _rank_sparse(m, p)


def kernel_basis(m: FpSparseMatrix, p: int) -> List[Vector]:
    """Deterministic basis of ker(m) over F_p.

    One vector per free column, in increasing free-column order; the free
    coordinate is set to 1 and pivot coordinates are read off the reduced
    echelon form.
    """
    pivots = _rref(_sparse_rows(m, p), m.cols, p)
    pivot_cols = {c for c, _ in pivots}
    basis: List[Vector] = []
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        v = [0] * m.cols
        v[free] = 1
        for c, row in pivots:
            coeff = row.get(free)
            if coeff:
                v[c] = (-coeff) % p
        basis.append(tuple(v))
    return basis


def solve_membership(m: FpSparseMatrix, b: Sequence[int], p: int) -> Optional[Vector]:
    """A solution x of m x = b over F_p, or None when b is not in the image.

    The returned solution sets every free variable to zero, making it the
    unique echelon-form representative.
    """
    if len(b) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    rows = _sparse_rows(m, p)
    sentinel = m.cols
    for r, val in enumerate(b):
        vv = val % p
        if vv:
            rows[r][sentinel] = vv
    pivots = _rref(rows, m.cols + 1, p)
    x = [0] * m.cols
    for c, row in pivots:
        if c == sentinel:
            return None
        x[c] = row.get(sentinel, 0)
    return tuple(x)


def homology_dim(d_in: FpSparseMatrix, d_out: FpSparseMatrix, p: int) -> int:
    """dim ker(d_out) - rank(d_in) for a composable pair with d_out d_in = 0.

    d_in lands in the middle space (d_in.rows == d_out.cols); the composite
    is recomputed and must vanish, otherwise ContractViolation is raised.
    """
    if d_in.rows != d_out.cols:
        raise ValueError("differentials do not compose: d_in.rows != d_out.cols")
    if not d_out.compose(d_in, p).is_zero(p):
        raise ContractViolation("d_out o d_in is nonzero")
    return (d_out.cols - rank(d_out, p)) - rank(d_in, p)
