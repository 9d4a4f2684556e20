"""Interval vectors/matrices and the small rigorous linear algebra kit.

Everything here is sized for the proofs in this package: dense interval
containers, midpoint-preconditioned interval Gauss, QR-based
near-orthogonalization of point matrices, and 2x2 spectral bounds.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, RankDeficient, SingularPivot
from .intervals import Interval

__all__ = [
    "IntervalVector",
    "IntervalMatrix",
    "solve_gauss",
    "near_orthogonalize",
    "eig_bounds_2x2",
    "posdef_sym_2x2",
    "EigBounds",
]


def _as_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval(float(x))


class IntervalVector:
    """Fixed-dimension vector of intervals."""

    __slots__ = ("data",)

    def __init__(self, entries: Iterable):
        self.data = [_as_interval(e) for e in entries]
        if not self.data:
            raise DimensionMismatch("empty vector")

    @staticmethod
    def zeros(n: int) -> "IntervalVector":
        return IntervalVector([Interval(0.0)] * n)

    @property
    def dim(self) -> int:
        return len(self.data)

    def __len__(self):
        return len(self.data)

    def __iter__(self):
        return iter(self.data)

    def __getitem__(self, i) -> Interval:
        return self.data[i]

    def __repr__(self):
        return "(" + ", ".join(repr(e) for e in self.data) + ")"

    def __add__(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector([a + b for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector([a - b for a, b in zip(self.data, other.data)])

    def __neg__(self):
        return IntervalVector([-a for a in self.data])

    def scale(self, s) -> "IntervalVector":
        s = _as_interval(s)
        return IntervalVector([a * s for a in self.data])

    def _check(self, other):
        if not isinstance(other, IntervalVector) or other.dim != self.dim:
            raise DimensionMismatch(f"{self.dim} vs {getattr(other, 'dim', '?')}")

    def mid(self) -> list[float]:
        return [e.mid() for e in self.data]

    def diam(self) -> list[float]:
        return [e.diam() for e in self.data]

    def max_diam(self) -> float:
        return max(e.diam() for e in self.data)

    def norm_max(self) -> float:
        return max(e.mag() for e in self.data)

    def contains(self, other) -> bool:
        if isinstance(other, IntervalVector):
            return all(a.contains(b) for a, b in zip(self.data, other.data))
        return all(a.contains(x) for a, x in zip(self.data, other))

    def contains_in_interior(self, other: "IntervalVector") -> bool:
        return all(a.contains_in_interior(b) for a, b in zip(self.data, other.data))

    def intersect(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector([a.intersect(b) for a, b in zip(self.data, other.data)])

    def intersects(self, other: "IntervalVector") -> bool:
        return all(a.intersects(b) for a, b in zip(self.data, other.data))

    def hull(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector([a.hull(b) for a, b in zip(self.data, other.data)])

    def inflate(self, eps: float) -> "IntervalVector":
        return IntervalVector([a.inflate(eps) for a in self.data])

    def subset_of(self, other: "IntervalVector") -> bool:
        return other.contains(self)


class IntervalMatrix:
    """Rectangular grid of intervals, row-major."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[_as_interval(e) for e in row] for row in rows]
        if not self.rows or not self.rows[0]:
            raise DimensionMismatch("empty matrix")
        nc = len(self.rows[0])
        if any(len(r) != nc for r in self.rows):
            raise DimensionMismatch("ragged rows")

    @staticmethod
    def identity(n: int) -> "IntervalMatrix":
        return IntervalMatrix(
            [[Interval(1.0) if i == j else Interval(0.0) for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(nr: int, nc: int) -> "IntervalMatrix":
        return IntervalMatrix([[Interval(0.0)] * nc for _ in range(nr)])

    @staticmethod
    def from_point(a: np.ndarray) -> "IntervalMatrix":
        return IntervalMatrix([[Interval(float(v)) for v in row] for row in a])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]))

    def __getitem__(self, ij) -> Interval:
        i, j = ij
        return self.rows[i][j]

    def __repr__(self):
        return "[" + "; ".join(", ".join(repr(e) for e in r) for r in self.rows) + "]"

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return IntervalMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return IntervalMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def scale(self, s) -> "IntervalMatrix":
        s = _as_interval(s)
        return IntervalMatrix([[a * s for a in row] for row in self.rows])

    def matvec(self, v: IntervalVector) -> IntervalVector:
        nr, nc = self.shape
        if v.dim != nc:
            raise DimensionMismatch(f"matvec {self.shape} vs {v.dim}")
        out = []
        for row in self.rows:
            acc = row[0] * v.data[0]
            for j in range(1, nc):
                acc = acc + row[j] * v.data[j]
            out.append(acc)
        return IntervalVector(out)

    def matmul(self, other: "IntervalMatrix") -> "IntervalMatrix":
        nr, nc = self.shape
        mr, mc = other.shape
        if nc != mr:
            raise DimensionMismatch(f"matmul {self.shape} vs {other.shape}")
        out = []
        for i in range(nr):
            row = []
            for j in range(mc):
                acc = self.rows[i][0] * other.rows[0][j]
                for k in range(1, nc):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return IntervalMatrix(out)

    def transpose(self) -> "IntervalMatrix":
        nr, nc = self.shape
        return IntervalMatrix([[self.rows[i][j] for i in range(nr)] for j in range(nc)])

    def mid(self) -> np.ndarray:
        return np.array([[e.mid() for e in row] for row in self.rows])

    def max_diam(self) -> float:
        return max(e.diam() for row in self.rows for e in row)

    def contains_point(self, a: np.ndarray) -> bool:
        return all(
            self.rows[i][j].contains(float(a[i, j]))
            for i in range(self.shape[0])
            for j in range(self.shape[1])
        )

    def hull(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return IntervalMatrix(
            [[a.hull(b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def column(self, j: int) -> IntervalVector:
        return IntervalVector([row[j] for row in self.rows])


def solve_gauss(A: IntervalMatrix, b: IntervalVector) -> IntervalVector:
    """Enclosure of {x : A0 x = b0, A0 in A, b0 in b}.

    Preconditions by the approximate inverse of mid(A), then runs interval
    Gaussian elimination with mignitude pivoting.  Raises SingularPivot if
    any pivot interval contains zero (A not verifiably regular).
    """
    nr, nc = A.shape
    if nr != nc:
        raise DimensionMismatch("solve_gauss needs a square matrix")
    if b.dim != nr:
        raise DimensionMismatch("rhs dimension mismatch")
    return solve_gauss_multi(A, [b])[0]


def solve_gauss_multi(A: IntervalMatrix, rhs_list) -> list[IntervalVector]:
    """solve_gauss for several right-hand sides sharing one elimination."""
    nr, nc = A.shape
    if nr != nc:
        raise DimensionMismatch("solve_gauss needs a square matrix")
    for b in rhs_list:
        if b.dim != nr:
            raise DimensionMismatch("rhs dimension mismatch")
    mid = A.mid()
    try:
        pre = np.linalg.inv(mid)
    except np.linalg.LinAlgError:
        pre = np.eye(nr)
    if not np.all(np.isfinite(pre)):
        pre = np.eye(nr)
    P = IntervalMatrix.from_point(pre)
    M = P.matmul(A)
    return _gauss_multi(M, [P.matvec(b).data[:] for b in rhs_list])


def _gauss_multi(M: IntervalMatrix, rhs_cols: list[list[Interval]]) -> list[IntervalVector]:
    n = M.shape[0]
    a = [row[:] for row in M.rows]
    perm = list(range(n))
    for k in range(n):
        piv, best = k, a[perm[k]][k].mig()
        for i in range(k + 1, n):
            m = a[perm[i]][k].mig()
            if m > best:
                piv, best = i, m
        perm[k], perm[piv] = perm[piv], perm[k]
        pk = a[perm[k]][k]
        if pk.contains(0.0):
            raise SingularPivot(f"pivot {pk} at column {k}")
        rk = perm[k]
        for i in range(k + 1, n):
            ri = perm[i]
            factor = a[ri][k] / pk
            for j in range(k + 1, n):
                a[ri][j] = a[ri][j] - factor * a[rk][j]
            for v in rhs_cols:
                v[ri] = v[ri] - factor * v[rk]
    out = []
    for v in rhs_cols:
        x = [Interval(0.0)] * n
        for k in range(n - 1, -1, -1):
            rk = perm[k]
            acc = v[rk]
            for j in range(k + 1, n):
                acc = acc - a[rk][j] * x[j]
            x[k] = acc / a[rk][k]
        out.append(IntervalVector(x))
    return out


def solve_gauss_matrix(A: IntervalMatrix, B: IntervalMatrix) -> IntervalMatrix:
    """Multi-column solve_gauss; encloses A^{-1} B."""
    cols = solve_gauss_multi(A, [B.column(j) for j in range(B.shape[1])])
    n = A.shape[0]
    return IntervalMatrix([[cols[j][i] for j in range(B.shape[1])] for i in range(n)])


def near_orthogonalize(a: np.ndarray) -> np.ndarray:
    """Column-orthonormal point matrix close to a, via QR on floats.

    Raises RankDeficient when a is numerically rank-deficient; callers keep
    their previous frame in that case.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("near_orthogonalize needs a square matrix")
    if not np.all(np.isfinite(a)):
        raise RankDeficient("non-finite entries")
    q, r = np.linalg.qr(a)
    d = np.abs(np.diag(r))
    if np.any(d < 1e-13 * max(1.0, float(np.max(d)))):
        raise RankDeficient("QR produced a (near) zero diagonal")
    # fix column signs so Q -> I when a -> I
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


class EigBounds:
    """Spectral verdict for a 2x2 interval matrix."""

    __slots__ = ("kind", "lam1", "lam2", "re", "im")

    def __init__(self, kind, lam1=None, lam2=None, re=None, im=None):
        self.kind = kind  # "real" | "complex" | "indeterminate"
        self.lam1 = lam1
        self.lam2 = lam2
        self.re = re
        self.im = im

    def __repr__(self):
        if self.kind == "real":
            return f"EigBounds(real, {self.lam1}, {self.lam2})"
        if self.kind == "complex":
            return f"EigBounds(complex, re={self.re}, |im|={self.im})"
        return "EigBounds(indeterminate)"


def eig_bounds_2x2(A: IntervalMatrix) -> EigBounds:
    """Eigenvalue bounds via interval trace/determinant."""
    if A.shape != (2, 2):
        raise DimensionMismatch("eig_bounds_2x2 needs a 2x2 matrix")
    t = A[0, 0] + A[1, 1]
    d = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    disc = t.sqr() - d * 4.0
    if disc.lo > 0.0:
        s = disc.sqrt()
        lam1 = (t + s) * 0.5
        lam2 = (t - s) * 0.5
        return EigBounds("real", lam1=lam1, lam2=lam2)
    if disc.hi < 0.0:
        s = (-disc).sqrt()
        return EigBounds("complex", re=t * 0.5, im=s * 0.5)
    return EigBounds("indeterminate")


def posdef_sym_2x2(M: IntervalMatrix) -> bool:
    """Sylvester check for a symmetric 2x2 interval matrix.

    The off-diagonal entries are hulled into a single interval so that the
    determinant uses m12^2 (via sqr) rather than m12*m21; this exploits the
    symmetry of every point selection.
    """
    if M.shape != (2, 2):
        raise DimensionMismatch("posdef_sym_2x2 needs a 2x2 matrix")
    m11 = M[0, 0]
    m22 = M[1, 1]
    m12 = M[0, 1].hull(M[1, 0])
    if not m11.lo > 0.0:
        return False
    det = m11 * m22 - m12.sqr()
    return det.lo > 0.0
