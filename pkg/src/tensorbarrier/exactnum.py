"""Exact rational scalars and dense linear algebra.

Scalars are ``fractions.Fraction`` throughout: field operations are exact
and values are always normalized (gcd 1, positive denominator).  Matrices
are dense and immutable.  Subspaces are stored via their unique reduced
row-echelon basis, so equality of subspaces is equality of bases.

Row reduction internally runs on integer-scaled rows (fraction-free
cross-multiplication, rows kept primitive), which is much faster than
Fraction pivoting; results are normalized back to Fractions at the end.
The reduced row-echelon form is unique, so the fast path changes nothing
observable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal "p/q" or "p" (q = 1). Rejects q = 0."""
    if not isinstance(text, str):
        raise ValueError(f"rational literal must be a string, got {type(text).__name__}")
    try:
        value = Fraction(text.strip())
    except ZeroDivisionError:
        raise ValueError(f"rational literal {text!r} has zero denominator") from None
    except ValueError:
        raise ValueError(f"malformed rational literal {text!r}") from None
    return value


def format_rational(q: Fraction) -> str:
    return str(q)


def as_fraction(value) -> Fraction:
    """Coerce int / str / Fraction to Fraction; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ValueError(f"cannot use {type(value).__name__} as an exact scalar")


class Matrix:
    """Immutable dense matrix over Fraction."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows_data: Iterable[Iterable]):
        data = tuple(tuple(as_fraction(x) for x in row) for row in rows_data)
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        if any(len(row) != self.cols for row in data):
            raise ValueError("ragged rows in matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        m = object.__new__(cls)
        m.data = tuple((_ZERO,) * cols for _ in range(rows))
        m.rows, m.cols = rows, cols
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = object.__new__(cls)
        m.data = tuple(
            tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)
        )
        m.rows = m.cols = n
        return m

    @classmethod
    def from_flat(cls, rows: int, cols: int, flat: Sequence) -> "Matrix":
        flat = list(flat)
        if len(flat) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(flat)}")
        return cls([flat[r * cols : (r + 1) * cols] for r in range(rows)])

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in row] for row in self.data])

    def scale(self, c) -> "Matrix":
        c = as_fraction(c)
        return Matrix([[c * a for a in row] for row in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ocols = other.cols
        out = []
        for row in self.data:
            acc = [_ZERO] * ocols
            for a, orow in zip(row, other.data):
                if a:
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        m = object.__new__(Matrix)
        m.data = tuple(tuple(r) for r in out)
        m.rows, m.cols = self.rows, ocols
        return m

    def apply(self, vector: Sequence) -> tuple:
        """Matrix times column vector."""
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        vec = [as_fraction(x) for x in vector]
        return tuple(
            sum((a * b for a, b in zip(row, vec) if a and b), _ZERO)
            for row in self.data
        )

    def transpose(self) -> "Matrix":
        m = object.__new__(Matrix)
        if self.rows == 0 or self.cols == 0:
            m.data = ((),) * self.cols if self.rows == 0 else ()
        else:
            m.data = tuple(zip(*self.data))
        m.rows, m.cols = self.cols, self.rows
        return m

    def vec(self) -> tuple:
        """Row-major flattening."""
        return tuple(x for row in self.data for x in row)

    @classmethod
    def from_vec(cls, rows: int, cols: int, flat: Sequence) -> "Matrix":
        return cls.from_flat(rows, cols, flat)

    def is_zero(self) -> bool:
        return all(not x for row in self.data for x in row)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            x == (_ONE if i == j else _ZERO)
            for i, row in enumerate(self.data)
            for j, x in enumerate(row)
        )

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n = self.rows
        work = [list(row) + [_ONE if i == j else _ZERO for j in range(n)] for i, row in enumerate(self.data)]
        for col in range(n):
            piv = next((r for r in range(col, n) if work[r][col]), None)
            if piv is None:
                raise ValueError("matrix is singular")
            work[col], work[piv] = work[piv], work[col]
            inv_p = 1 / work[col][col]
            work[col] = [x * inv_p for x in work[col]]
            for r in range(n):
                if r != col and work[r][col]:
                    f = work[r][col]
                    work[r] = [x - f * y for x, y in zip(work[r], work[col])]
        return Matrix([row[n:] for row in work])

    def _same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("matrix shape mismatch")


def vstack(matrices: Sequence[Matrix]) -> Matrix:
    cols = matrices[0].cols
    if any(m.cols != cols for m in matrices):
        raise ValueError("column count mismatch in vstack")
    out = object.__new__(Matrix)
    out.data = tuple(row for m in matrices for row in m.data)
    out.rows = sum(m.rows for m in matrices)
    out.cols = cols
    return out


# ---------------------------------------------------------------------------
# integer fast path


def _int_row(row: Sequence[Fraction]) -> list[int]:
    """Scale a Fraction row to a primitive integer row (same span)."""
    mult = 1
    for x in row:
        d = x.denominator
        mult = mult // gcd(mult, d) * d
    ints = [int(x * mult) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _reduce_int_row(vec: list[int], rows: list[list[int]], pivots: list[int]) -> list[int]:
    """Reduce an integer row against echelon rows (cross-multiplication).

    The whole vector is rescaled by the pivot value at every elimination
    step; stored rows have their first nonzero at their pivot, so entries
    left of the pivot just pick up the scale factor.
    """
    for row, p in zip(rows, pivots):
        c = vec[p]
        if c:
            q = row[p]
            for j in range(len(vec)):
                vec[j] = vec[j] * q - row[j] * c
    g = 0
    for v in vec:
        g = gcd(g, v)
        if g == 1:
            return vec
    if g > 1:
        vec = [v // g for v in vec]
    return vec


class SpanBuilder:
    """Incremental exact span of row vectors over the rationals.

    Rows are kept as primitive integer vectors in echelon order (strictly
    increasing pivots), which makes membership tests and dimension growth
    cheap.  Intended for closure-style iterations; convert to a canonical
    Subspace at the end.
    """

    __slots__ = ("width", "_rows", "_pivots")

    def __init__(self, width: int, rows: Iterable[Sequence] = ()):
        self.width = width
        self._rows: list[list[int]] = []
        self._pivots: list[int] = []
        for row in rows:
            self.add(row)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _prepare(self, vector: Sequence) -> list[int]:
        if len(vector) != self.width:
            raise ValueError("vector width mismatch")
        if all(isinstance(x, int) for x in vector):
            vec = list(vector)
        else:
            vec = _int_row([as_fraction(x) for x in vector])
        return _reduce_int_row(vec, self._rows, self._pivots)

    def add(self, vector: Sequence) -> bool:
        """Add a vector to the span; True if the dimension grew."""
        vec = self._prepare(vector)
        p = next((j for j, v in enumerate(vec) if v), None)
        if p is None:
            return False
        at = 0
        while at < len(self._pivots) and self._pivots[at] < p:
            at += 1
        self._rows.insert(at, vec)
        self._pivots.insert(at, p)
        return True

    def contains(self, vector: Sequence) -> bool:
        return all(v == 0 for v in self._prepare(vector))

    def int_rows(self) -> list[list[int]]:
        return [list(r) for r in self._rows]


def _rref_int(int_rows: list[list[int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Full Gauss-Jordan on integer rows; returns RREF Fraction rows + pivots."""
    rows = [list(r) for r in int_rows if any(r)]
    echelon: list[list[int]] = []
    pivots: list[int] = []
    for vec in rows:
        vec = _reduce_int_row(vec, echelon, pivots)
        p = next((j for j, v in enumerate(vec) if v), None)
        if p is None:
            continue
        at = 0
        while at < len(pivots) and pivots[at] < p:
            at += 1
        echelon.insert(at, vec)
        pivots.insert(at, p)
    # eliminate above pivots, then normalize
    for i in range(len(echelon) - 1, -1, -1):
        p = pivots[i]
        base = echelon[i]
        for k in range(i):
            c = echelon[k][p]
            if c:
                q = base[p]
                row = echelon[k]
                for j in range(len(row)):
                    row[j] = row[j] * q - base[j] * c
                g = 0
                for v in row:
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    echelon[k] = [v // g for v in row]
    frac_rows = []
    for vec, p in zip(echelon, pivots):
        inv_p = Fraction(1, 1) / vec[p]
        frac_rows.append([x * inv_p for x in vec])
    return frac_rows, pivots


def rref(m: Matrix) -> tuple[Matrix, int, tuple[int, ...]]:
    """Unique reduced row-echelon form of m, with rank and pivot columns.

    Zero rows are kept (the result has the same shape as m).
    """
    int_rows = [_int_row(row) for row in m.data]
    frac_rows, pivots = _rref_int(int_rows)
    rank = len(frac_rows)
    padded = frac_rows + [[_ZERO] * m.cols for _ in range(m.rows - rank)]
    reduced = Matrix(padded) if padded else Matrix.zeros(0, m.cols)
    return reduced, rank, tuple(pivots)


def rank(m: Matrix) -> int:
    sb = SpanBuilder(m.cols)
    for row in m.data:
        sb.add(row)
    return sb.dim


class Subspace:
    """Linear subspace of K^ambient_dim with canonical RREF basis.

    Two subspaces are equal iff their basis matrices are identical.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, rows: Iterable[Sequence] = ()):
        rows = [list(r) for r in rows]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("basis row length does not match ambient dimension")
        if rows:
            int_rows = [_int_row([as_fraction(x) for x in r]) for r in rows]
            frac_rows, _ = _rref_int(int_rows)
        else:
            frac_rows = []
        self.ambient_dim = ambient_dim
        self.basis = Matrix(frac_rows) if frac_rows else Matrix.zeros(0, ambient_dim)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim).data)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def rows(self) -> tuple:
        return self.basis.data

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains_vector(self, vector: Sequence) -> bool:
        sb = SpanBuilder(self.ambient_dim, self.basis.data)
        return sb.contains(vector)

    def contains(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        sb = SpanBuilder(self.ambient_dim, self.basis.data)
        return all(sb.contains(r) for r in other.basis.data)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of K^{self.ambient_dim})"


def kernel(m: Matrix) -> Subspace:
    """Right kernel {v : m v = 0} as a canonical subspace of K^cols."""
    reduced, rk, pivots = rref(m)
    free_cols = [j for j in range(m.cols) if j not in pivots]
    vectors = []
    for f in free_cols:
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i, f]
        vectors.append(v)
    for v in vectors:
        image = m.apply(v)
        if any(image):
            raise AssertionError("kernel basis vector failed verification")
    return Subspace(m.cols, vectors)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace(a.ambient_dim, list(a.basis.data) + list(b.basis.data))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of stacked-basis coordinates.

    A dependency sum(c_i a_i) + sum(d_j b_j) = 0 yields the intersection
    element sum(c_i a_i); all intersection elements arise this way.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.ambient_dim)
    stacked = vstack([a.basis, b.basis])
    deps = kernel(stacked.transpose())
    p = a.dim
    vectors = []
    for c in deps.basis.data:
        w = [_ZERO] * a.ambient_dim
        for coeff, row in zip(c[:p], a.basis.data):
            if coeff:
                for j, x in enumerate(row):
                    if x:
                        w[j] += coeff * x
        vectors.append(w)
    return Subspace(a.ambient_dim, vectors)


def complement_within(inner: Subspace, outer: Subspace) -> Subspace:
    """Deterministic direct complement C with C + inner = outer (direct).

    Greedy over outer's RREF basis vectors, lowest pivot first: a basis
    vector is taken iff it is independent from inner plus the vectors
    already taken.
    """
    if inner.ambient_dim != outer.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not outer.contains(inner):
        raise ValueError("inner subspace is not contained in outer subspace")
    sb = SpanBuilder(inner.ambient_dim, inner.basis.data)
    chosen = []
    for row in outer.basis.data:
        if sb.add(row):
            chosen.append(row)
    return Subspace(inner.ambient_dim, chosen)


def preimage(m: Matrix, target: Subspace) -> Subspace:
    """{x : m x in target}, a subspace of K^cols.

    Reduction against the target's RREF basis is linear, so the preimage
    is the kernel of the residue map composed with m.
    """
    if target.ambient_dim != m.rows:
        raise ValueError("target ambient dimension must match row count")
    basis = target.basis.data
    pivots = [next(j for j, x in enumerate(row) if x) for row in basis]
    residue_cols = []
    for j in range(m.cols):
        v = list(m.column(j))
        for row, p in zip(basis, pivots):
            c = v[p]
            if c:
                for jj, x in enumerate(row):
                    if x:
                        v[jj] -= c * x
        residue_cols.append(v)
    residue_matrix = Matrix(list(zip(*residue_cols))) if residue_cols else Matrix.zeros(m.rows, 0)
    return kernel(residue_matrix)
