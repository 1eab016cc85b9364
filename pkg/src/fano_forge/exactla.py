"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
results are exact at any size.  Matrices are small (desk scale), so the
algorithms favour clarity over asymptotic speed.

Conventions
-----------
``hnf(M)`` returns ``(H, U)`` with ``H == U @ M`` where ``U`` is unimodular
and ``H`` is in row Hermite normal form: the nonzero rows come first, each
pivot is positive and lies strictly to the right of the pivot above it, and
every entry above a pivot lies in ``[0, pivot)``.  Zero rows sit at the
bottom.  This is the canonical form used for all test fixtures.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

RatVector = tuple  # tuple of Fraction


class IntMatrix:
    """Immutable dense integer matrix."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows in IntMatrix")
        else:
            width = ncols or 0
        if ncols is not None and data and width != ncols:
            raise ValueError("column count mismatch")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)], ncols=n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntMatrix":
        if not cols:
            return cls([])
        return cls(zip(*cols))

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def columns(self) -> tuple:
        return tuple(zip(*self._rows)) if self._rows else ()

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> "IntMatrix":
        if not self._rows:
            return IntMatrix([], ncols=0)
        return IntMatrix(zip(*self._rows))

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return self.nrows

    def __eq__(self, other):
        if isinstance(other, IntMatrix):
            return self._rows == other._rows and self.shape == other.shape
        if isinstance(other, (list, tuple)):
            return self._rows == tuple(tuple(r) for r in other)
        return NotImplemented

    def __hash__(self):
        return hash((self._rows, self.ncols))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self._rows]})"

    def __neg__(self):
        return IntMatrix([[-x for x in r] for r in self._rows], ncols=self.ncols)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows],
                ncols=other.ncols,
            )
        # treat as a column vector
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def det(self) -> int:
        return det(self)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[self._rows[i][j] for j in cols] for i in rows], ncols=len(cols))


def as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix(M)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def det(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in as_matrix(M).rows]
    n = len(A)
    if n == 0:
        return 1
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf(M) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form: returns ``(H, U)`` with ``H == U @ M``."""
    M = as_matrix(M)
    m, n = M.shape
    H = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for j in range(n):
        if r >= m:
            break
        # fold every entry below row r in column j into row r
        for i in range(r + 1, m):
            if H[i][j] == 0:
                continue
            a, b = H[r][j], H[i][j]
            g, s, t = _xgcd(a, b)
            p, q = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(Hr, Hi)]
            H[i] = [-q * x + p * y for x, y in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
            U[i] = [-q * x + p * y for x, y in zip(Ur, Ui)]
        piv = H[r][j]
        if piv == 0:
            continue
        if piv < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
            piv = -piv
        for i in range(r):
            q = H[i][j] // piv
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return IntMatrix(H, ncols=n), IntMatrix(U, ncols=m)


def hnf_pivots(H: IntMatrix) -> list[tuple[int, int]]:
    """(row, col) positions of the pivots of a matrix already in HNF."""
    out = []
    for i, row in enumerate(H.rows):
        for j, x in enumerate(row):
            if x:
                out.append((i, j))
                break
    return out


def rank(M) -> int:
    return len(hnf_pivots(hnf(M)[0]))


def snf(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns ``(S, U, V)`` with ``S == U @ M @ V``.

    The diagonal entries are nonnegative and satisfy ``d1 | d2 | ...``.
    """
    M = as_matrix(M)
    m, n = M.shape
    S = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, k, a, b, c, d):
        # rows (i, k) <- [[a, b], [c, d]] @ rows (i, k)
        for mat in (S, U):
            ri, rk = mat[i], mat[k]
            mat[i] = [a * x + b * y for x, y in zip(ri, rk)]
            mat[k] = [c * x + d * y for x, y in zip(ri, rk)]

    def col_op(j, k, a, b, c, d):
        # cols (j, k) <- cols (j, k) @ [[a, c], [b, d]]
        for mat in (S, V):
            for row in mat:
                x, y = row[j], row[k]
                row[j] = a * x + b * y
                row[k] = c * x + d * y

    t = 0
    while t < min(m, n):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        if pi != t:
            row_op(t, pi, 0, 1, 1, 0)
        if pj != t:
            col_op(t, pj, 0, 1, 1, 0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if S[i][t]:
                    a, b = S[t][t], S[i][t]
                    if b % a == 0:
                        row_op(t, i, 1, 0, -(b // a), 1)
                    else:
                        g, s, u = _xgcd(a, b)
                        row_op(t, i, s, u, -b // g, a // g)
                        changed = True
            for j in range(t + 1, n):
                if S[t][j]:
                    a, b = S[t][t], S[t][j]
                    if b % a == 0:
                        col_op(t, j, 1, 0, -(b // a), 1)
                    else:
                        g, s, u = _xgcd(a, b)
                        col_op(t, j, s, u, -b // g, a // g)
                        changed = True
            if changed:
                continue
            # enforce divisibility of the rest of the block by the pivot
            d = S[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % d),
                None,
            )
            if bad is None:
                break
            # add the offending row to row t and redo the clearing
            row_op(t, bad[0], 1, 1, 0, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return IntMatrix(S, ncols=n), IntMatrix(U, ncols=m), IntMatrix(V, ncols=n)


def smith_invariants(M) -> list[int]:
    S = snf(M)[0]
    return [S[i, i] for i in range(min(S.shape)) if S[i, i] != 0]


def kernel_basis(M) -> list[tuple[int, ...]]:
    """Saturated basis of the integer kernel ``{v : M v = 0}``, in HNF."""
    M = as_matrix(M)
    n = M.ncols
    if M.nrows == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    H, U = hnf(M.T)
    basis = [U[i] for i in range(n) if not any(H[i])]
    if not basis:
        return []
    Hk, _ = hnf(IntMatrix(basis, ncols=n))
    return [r for r in Hk.rows if any(r)]


def solve_rational(A, b) -> tuple[Fraction, ...] | None:
    """Solve ``A x = b`` over the rationals.

    Returns the unique solution, or ``None`` when the system is inconsistent
    or underdetermined.
    """
    rows = A.rows if isinstance(A, IntMatrix) else A
    A = [[Fraction(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [A[i] + [Fraction(b[i])] for i in range(m)]
    row = 0
    pivcols = []
    for col in range(n):
        p = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if p is None:
            continue
        aug[row], aug[p] = aug[p], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivcols.append(col)
        row += 1
    if any(aug[i][n] != 0 for i in range(row, m)):
        return None
    if len(pivcols) < n:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivcols):
        x[c] = aug[i][n]
    return tuple(x)


def inverse_rational(M) -> list[list[Fraction]] | None:
    """Exact inverse of a square integer matrix, or ``None`` if singular."""
    M = as_matrix(M)
    n = M.nrows
    if M.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in M[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        p = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if p is None:
            return None
        aug[col], aug[p] = aug[p], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def same_row_lattice(A, B) -> bool:
    """True iff ``A`` and ``B`` differ by a unimodular row transformation."""
    HA, _ = hnf(A)
    HB, _ = hnf(B)
    nzA = [r for r in HA.rows if any(r)]
    nzB = [r for r in HB.rows if any(r)]
    return nzA == nzB
