"""Exact rational scalars, vectors, matrices and sparse tensors.

Everything in this package computes over Q with `fractions.Fraction`;
no floating point appears anywhere, so every check elsewhere is a
zero-tolerance equality.  Matrices are tuples of tuples of Fractions,
vectors are tuples of Fractions.  All functions are pure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class ExactError(Exception):
    pass


class SingularMatrix(ExactError):
    pass


class DegenerateForm(ExactError):
    pass


class ShapeMismatch(ExactError):
    pass


ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Promote an int, string "p/q" or Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot promote {x!r} to an exact rational")


def parse_rat(s: str) -> Fraction:
    """Parse "p/q" or "p".  Floats and decimal points are rejected."""
    s = s.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational literal: {s!r}")
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def format_rat(x: Fraction) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(entries: Iterable) -> tuple:
    return tuple(rat(x) for x in entries)


def zeros(n: int) -> tuple:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> tuple:
    return tuple(ONE if j == i else ZERO for j in range(n))


def add_vec(a, b):
    return tuple(x + y for x, y in zip(a, b))


def scale_vec(c, a):
    c = rat(c)
    return tuple(c * x for x in a)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def mat(rows) -> tuple:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ShapeMismatch("ragged matrix")
    return m


def identity_matrix(n: int) -> tuple:
    return tuple(unit_vector(n, i) for i in range(n))


def mat_vec(m, v) -> tuple:
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m) -> tuple:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form.  Returns (rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = ONE / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols=None) -> list[tuple]:
    """Basis of the right kernel, one vector per free column of the RREF."""
    if not rows:
        if ncols is None:
            return []
        return [unit_vector(ncols, i) for i in range(ncols)]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def solve_linear(matrix, rhs) -> tuple:
    """Solve matrix * x = rhs exactly for square invertible matrix.

    Raises SingularMatrix when the matrix is rank-deficient.
    """
    m = mat(matrix)
    b = vec(rhs)
    n = len(m)
    if n != len(b) or any(len(r) != n for r in m):
        raise ShapeMismatch("solve_linear needs a square system")
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if len(pivots) != n or any(p >= n for p in pivots):
        raise SingularMatrix(f"matrix of rank {rank(m)} < {n}")
    return tuple(red[i][n] for i in range(n))


def solve_many(matrix, rhs_columns) -> list[tuple]:
    """Solve one square system against several right-hand sides."""
    m = mat(matrix)
    n = len(m)
    cols = [vec(c) for c in rhs_columns]
    aug = [list(row) + [c[i] for c in cols] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if len(pivots) < n or any(p >= n for p in pivots[:n]):
        raise SingularMatrix("rank-deficient system")
    return [tuple(red[i][n + j] for i in range(n)) for j in range(len(cols))]


def invert(matrix) -> tuple:
    n = len(matrix)
    cols = solve_many(matrix, [unit_vector(n, i) for i in range(n)])
    return transpose(cols)


class BilinearForm:
    """A square grid of exact rationals, used as a pairing on a basis."""

    def __init__(self, rows):
        self.rows = mat(rows)
        self.dim = len(self.rows)
        if any(len(r) != self.dim for r in self.rows):
            raise ShapeMismatch("bilinear form must be square")
        self._rank = None

    def __call__(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def apply(self, a, b) -> Fraction:
        return dot(a, mat_vec(self.rows, b))

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = rank(self.rows)
        return self._rank

    def is_nondegenerate(self) -> bool:
        return self.rank == self.dim

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.rows == other.rows

    def __repr__(self):
        return f"BilinearForm({[[format_rat(x) for x in r] for r in self.rows]})"


def dual_basis(form: BilinearForm) -> list[tuple]:
    """Columns v_j with form(e_i, v_j) = delta_ij.

    Raises DegenerateForm when the form has no dual basis.
    """
    try:
        cols = solve_many(form.rows, [unit_vector(form.dim, j) for j in range(form.dim)])
    except SingularMatrix as err:
        raise DegenerateForm(str(err)) from None
    return cols


class SparseTensor:
    """Multi-dimensional array over Q storing only nonzero entries.

    Canonical form: no stored entry is zero and every index is within
    the declared shape.  Iteration is in sorted index order, so reports
    and serialized files are reproducible.
    """

    __slots__ = ("shape", "entries")

    def __init__(self, shape: Sequence[int], entries=None):
        self.shape = tuple(int(d) for d in shape)
        if any(d < 0 for d in self.shape):
            raise ShapeMismatch(f"bad shape {self.shape}")
        table = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for idx, val in items:
                idx = tuple(int(i) for i in idx)
                if len(idx) != len(self.shape):
                    raise ShapeMismatch(f"index {idx} has wrong arity for {self.shape}")
                if any(not (0 <= i < d) for i, d in zip(idx, self.shape)):
                    raise ShapeMismatch(f"index {idx} out of bounds {self.shape}")
                val = rat(val)
                if val != 0:
                    v = table.get(idx, ZERO) + val if idx in table else val
                    if v == 0:
                        table.pop(idx, None)
                    else:
                        table[idx] = v
        self.entries = table

    def __getitem__(self, idx) -> Fraction:
        return self.entries.get(tuple(idx), ZERO)

    def __iter__(self):
        return iter(sorted(self.entries.items()))

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return (isinstance(other, SparseTensor) and self.shape == other.shape
                and self.entries == other.entries)

    def __repr__(self):
        return f"SparseTensor(shape={self.shape}, nnz={len(self.entries)})"

    def scaled(self, c) -> "SparseTensor":
        c = rat(c)
        if c == 0:
            return SparseTensor(self.shape)
        return SparseTensor(self.shape, {k: c * v for k, v in self.entries.items()})

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        table = dict(self.entries)
        for k, v in other.entries.items():
            w = table.get(k, ZERO) + v
            if w == 0:
                table.pop(k, None)
            else:
                table[k] = w
        out = SparseTensor(self.shape)
        out.entries = table
        return out


def tensor_product(a: SparseTensor, b: SparseTensor) -> SparseTensor:
    out = SparseTensor(a.shape + b.shape)
    table = {}
    for ka, va in a.entries.items():
        for kb, vb in b.entries.items():
            table[ka + kb] = va * vb
    out.entries = table
    return out


def contract(t: SparseTensor, pairs: Sequence[tuple[int, int]]) -> SparseTensor:
    """Trace out pairs of axes of a single tensor.

    `pairs` is a pairing plan: each (i, j) pairs axis i with axis j;
    the paired axes must have equal dimension and no axis may be used
    twice.  Output shape is the unpaired axes in their original order.
    """
    used = set()
    for i, j in pairs:
        for ax in (i, j):
            if not 0 <= ax < len(t.shape):
                raise ShapeMismatch(f"axis {ax} out of range for {t.shape}")
            if ax in used:
                raise ShapeMismatch(f"axis {ax} paired twice")
            used.add(ax)
        if t.shape[i] != t.shape[j]:
            raise ShapeMismatch(f"cannot pair axes of size {t.shape[i]} and {t.shape[j]}")
    keep = [ax for ax in range(len(t.shape)) if ax not in used]
    out = SparseTensor(tuple(t.shape[ax] for ax in keep))
    table = {}
    for idx, val in t.entries.items():
        if any(idx[i] != idx[j] for i, j in pairs):
            continue
        key = tuple(idx[ax] for ax in keep)
        w = table.get(key, ZERO) + val
        if w == 0:
            table.pop(key, None)
        else:
            table[key] = w
    out.entries = table
    return out


def contract_with(a: SparseTensor, b: SparseTensor,
                  pairs: Sequence[tuple[int, int]]) -> SparseTensor:
    """Contract axes of `a` against axes of `b` (a convenience wrapper:
    tensor product followed by a self-contraction)."""
    shifted = [(i, len(a.shape) + j) for i, j in pairs]
    return contract(tensor_product(a, b), shifted)
