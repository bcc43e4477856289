"""Integer-matrix Smith normal form and abelianization of presentations.

All arithmetic is exact over Python ints; elimination pivots on the
smallest nonzero entry to keep coefficient growth in check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .presentations import Presentation
from .words import Word, exponent_vector


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        if cols is not None:
            ncols = cols
        return IntMatrix(len(rows), ncols, tuple(rows))

    @staticmethod
    def identity(n: int) -> IntMatrix:
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = list(zip(*other.entries)) if other.entries else []
        prod = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
            for row in self.entries
        )
        if not bt:
            prod = tuple(() for _ in range(self.rows))
        return IntMatrix(self.rows, other.cols, prod)


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V`` is diagonal with nonnegative entries d1 | d2 | ..."""

    diagonal: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix

    def diag_matrix(self, rows: int, cols: int) -> IntMatrix:
        d = self.diagonal
        return IntMatrix(
            rows,
            cols,
            tuple(
                tuple(d[i] if i == j and i < len(d) else 0 for j in range(cols))
                for i in range(rows)
            ),
        )


def _det_sign_is_unit(mat: list[list[int]]) -> bool:
    # fraction-free Gaussian elimination determinant; only |det| == 1 matters
    n = len(mat)
    a = [row[:] for row in mat]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return False
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        for i in range(k + 1, n):
            while a[i][k]:
                q = a[k][k] // a[i][k]
                for j in range(k, n):
                    a[k][j] -= q * a[i][j]
                a[k], a[i] = a[i], a[k]
                det = -det
        det *= a[k][k]
        if a[k][k] == 0:
            return False
        # renormalize not needed: we only do integer row ops
    return abs(det) == 1


def snf(a: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms.

    Returns ``SNFResult`` with ``u @ a @ v`` diagonal, the diagonal
    nonnegative and each entry dividing the next.
    """
    n, m = a.rows, a.cols
    work = [list(row) for row in a.entries]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vt = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_op(i: int, j: int, q: int) -> None:  # row_i -= q * row_j
        wi, wj = work[i], work[j]
        for k in range(m):
            wi[k] -= q * wj[k]
        ui, uj = u[i], u[j]
        for k in range(n):
            ui[k] -= q * uj[k]

    def col_op(i: int, j: int, q: int) -> None:  # col_i -= q * col_j
        for row in work:
            row[i] -= q * row[j]
        for row in vt:
            row[i] -= q * row[j]

    def swap_rows(i: int, j: int) -> None:
        work[i], work[j] = work[j], work[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in work:
            row[i], row[j] = row[j], row[i]
        for row in vt:
            row[i], row[j] = row[j], row[i]

    t = 0
    while True:
        # locate the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, n):
            row = work[i]
            for j in range(t, m):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        # clear row and column t
        dirty = False
        for i in range(t + 1, n):
            if work[i][t]:
                q = work[i][t] // work[t][t]
                row_op(i, t, q)
                if work[i][t]:
                    dirty = True
        for j in range(t + 1, m):
            if work[t][j]:
                q = work[t][j] // work[t][t]
                col_op(j, t, q)
                if work[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide every entry of the remaining block
        piv = work[t][t]
        offender = None
        for i in range(t + 1, n):
            row = work[i]
            for j in range(t + 1, m):
                if row[j] % piv:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # fold the offending row into row t
            continue
        t += 1

    diag = []
    for i in range(min(n, m)):
        x = work[i][i]
        if x < 0:
            for k in range(m):
                work[i][k] = -work[i][k]
            for k in range(n):
                u[i][k] = -u[i][k]
            x = -x
        diag.append(x)
    # push zeros to the end (they already are: zero block remains last)
    um = IntMatrix.from_rows(u, n)
    vm = IntMatrix.from_rows(vt, m)
    result = SNFResult(diagonal=tuple(diag), u=um, v=vm)
    _check_snf(a, result)
    return result


def _check_snf(a: IntMatrix, r: SNFResult) -> None:
    d = r.diagonal
    for i in range(len(d) - 1):
        if d[i] == 0 and d[i + 1] != 0:
            raise AssertionError("zero before nonzero in diagonal")
        if d[i] and d[i + 1] % d[i]:
            raise AssertionError(f"divisibility chain broken: {d}")
    prod = r.u @ a @ r.v
    if prod != r.diag_matrix(a.rows, a.cols):
        raise AssertionError("U @ A @ V != diag")
    if a.rows and not _det_sign_is_unit([list(row) for row in r.u.entries]):
        raise AssertionError("U not unimodular")
    if a.cols and not _det_sign_is_unit([list(row) for row in r.v.entries]):
        raise AssertionError("V not unimodular")


def lattice_rank(rows: Sequence[Sequence[int]], cols: int) -> int:
    """Rank of the integer lattice spanned by the given row vectors."""
    if not rows:
        return 0
    result = snf(IntMatrix.from_rows(rows, cols))
    return sum(1 for d in result.diagonal if d != 0)


@dataclass(frozen=True)
class AbelianInvariants:
    """H_1 of a presented group: torsion invariant factors and free rank."""

    torsion: tuple[int, ...]
    free_rank: int

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def abelianization(p: Presentation) -> AbelianInvariants:
    """Invariant factors of the abelianization, from the exponent-sum matrix."""
    ngens = len(p.generators)
    rows = []
    for r in p.relators:
        vec = exponent_vector(r)
        if p.is_doubled:
            rows.append(list(vec))
        else:
            rows.append(list(vec[: p.rank]))
    if not rows:
        return AbelianInvariants(torsion=(), free_rank=ngens)
    result = snf(IntMatrix.from_rows(rows, ngens))
    nonzero = [d for d in result.diagonal if d != 0]
    torsion = tuple(d for d in nonzero if d != 1)
    return AbelianInvariants(torsion=torsion, free_rank=ngens - len(nonzero))
