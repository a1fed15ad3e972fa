"""Order-3 tensors with exact entries.

Dense storage: the target inputs are desk-scale (dims up to roughly a
dozen per axis; Kronecker powers are guarded).  Entries are Fractions,
indexed (i, j, k) row-major with the first axis slowest.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .exactnum import Matrix, SpanBuilder, as_fraction, format_rational, rank

_ZERO = Fraction(0)
_ONE = Fraction(1)

MAX_DENSE_ENTRIES = 10**7


class ResourceGuardError(RuntimeError):
    """Raised when an operation would exceed its entry-count guard."""


class Tensor3:
    """Dense order-3 tensor over Fraction."""

    __slots__ = ("dims", "entries")

    def __init__(self, dims: Sequence[int], entries: Sequence):
        n1, n2, n3 = (int(d) for d in dims)
        if min(n1, n2, n3) < 1:
            raise ValueError("tensor dimensions must be positive")
        entries = tuple(as_fraction(x) for x in entries)
        if len(entries) != n1 * n2 * n3:
            raise ValueError(f"expected {n1 * n2 * n3} entries, got {len(entries)}")
        self.dims = (n1, n2, n3)
        self.entries = entries

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> "Tensor3":
        n1, n2, n3 = dims
        t = object.__new__(cls)
        t.dims = (n1, n2, n3)
        t.entries = (_ZERO,) * (n1 * n2 * n3)
        return t

    @classmethod
    def from_triples(cls, dims: Sequence[int], triples: Iterable) -> "Tensor3":
        """Build from (i, j, k, value) items; omitted positions are zero.

        Duplicate index triples are rejected.
        """
        n1, n2, n3 = dims
        flat = [_ZERO] * (n1 * n2 * n3)
        seen = set()
        for i, j, k, v in triples:
            if not (0 <= i < n1 and 0 <= j < n2 and 0 <= k < n3):
                raise ValueError(f"index ({i},{j},{k}) out of range for dims {tuple(dims)}")
            if (i, j, k) in seen:
                raise ValueError(f"duplicate entry at ({i},{j},{k})")
            seen.add((i, j, k))
            flat[(i * n2 + j) * n3 + k] = as_fraction(v)
        t = object.__new__(cls)
        t.dims = (n1, n2, n3)
        t.entries = tuple(flat)
        return t

    def __getitem__(self, idx):
        i, j, k = idx
        n1, n2, n3 = self.dims
        if not (0 <= i < n1 and 0 <= j < n2 and 0 <= k < n3):
            raise IndexError(f"index ({i},{j},{k}) out of range")
        return self.entries[(i * n2 + j) * n3 + k]

    def nonzero(self) -> list[tuple[int, int, int, Fraction]]:
        n1, n2, n3 = self.dims
        out = []
        pos = 0
        for i in range(n1):
            for j in range(n2):
                for k in range(n3):
                    v = self.entries[pos]
                    if v:
                        out.append((i, j, k, v))
                    pos += 1
        return out

    @property
    def nnz(self) -> int:
        return sum(1 for v in self.entries if v)

    def is_zero(self) -> bool:
        return all(not v for v in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor3)
            and self.dims == other.dims
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.dims, self.entries))

    def __repr__(self):
        return f"Tensor3(dims={self.dims}, nnz={self.nnz})"

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "entries": [
                {"i": i, "j": j, "k": k, "v": format_rational(v)}
                for i, j, k, v in self.nonzero()
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Tensor3":
        if not isinstance(d, dict) or "dims" not in d or "entries" not in d:
            raise ValueError("tensor file must contain 'dims' and 'entries'")
        dims = d["dims"]
        if not (isinstance(dims, list) and len(dims) == 3 and all(isinstance(x, int) for x in dims)):
            raise ValueError("'dims' must be a list of three integers")
        triples = []
        for pos, item in enumerate(d["entries"]):
            try:
                i, j, k = item["i"], item["j"], item["k"]
                v = as_fraction(item["v"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"entries[{pos}]: {exc}") from None
            triples.append((i, j, k, v))
        try:
            return cls.from_triples(dims, triples)
        except ValueError as exc:
            raise ValueError(f"entries: {exc}") from None


# ---------------------------------------------------------------------------
# contractions, flattenings, conciseness


def _check_axis(axis: int):
    if axis not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")


def contract(t: Tensor3, x: Sequence, axis: int) -> Matrix:
    """Contract t with the covector x on the given axis.

    The result is a matrix over the remaining two axes in their original
    order (axis 1 -> rows j, cols k; axis 2 -> rows i, cols k; axis 3 ->
    rows i, cols j).
    """
    _check_axis(axis)
    n1, n2, n3 = t.dims
    if len(x) != t.dims[axis - 1]:
        raise ValueError(f"covector length {len(x)} does not match axis dim {t.dims[axis - 1]}")
    x = [as_fraction(c) for c in x]
    if axis == 1:
        out = [[_ZERO] * n3 for _ in range(n2)]
        for i, c in enumerate(x):
            if c:
                base = i * n2 * n3
                for j in range(n2):
                    row = out[j]
                    off = base + j * n3
                    for k in range(n3):
                        v = t.entries[off + k]
                        if v:
                            row[k] += c * v
        return Matrix(out)
    if axis == 2:
        out = [[_ZERO] * n3 for _ in range(n1)]
        for j, c in enumerate(x):
            if c:
                for i in range(n1):
                    row = out[i]
                    off = (i * n2 + j) * n3
                    for k in range(n3):
                        v = t.entries[off + k]
                        if v:
                            row[k] += c * v
        return Matrix(out)
    out = [[_ZERO] * n2 for _ in range(n1)]
    for k, c in enumerate(x):
        if c:
            for i in range(n1):
                row = out[i]
                for j in range(n2):
                    v = t.entries[(i * n2 + j) * n3 + k]
                    if v:
                        row[j] += c * v
    return Matrix(out)


def flattening(t: Tensor3, axis: int) -> Matrix:
    """The dims[axis] x (product of the other dims) coordinate matrix whose
    rows are the contractions with the standard dual basis."""
    _check_axis(axis)
    n1, n2, n3 = t.dims
    if axis == 1:
        step = n2 * n3
        rows = [t.entries[i * step : (i + 1) * step] for i in range(n1)]
    elif axis == 2:
        rows = [
            tuple(
                t.entries[(i * n2 + j) * n3 + k]
                for i in range(n1)
                for k in range(n3)
            )
            for j in range(n2)
        ]
    else:
        rows = [
            tuple(
                t.entries[(i * n2 + j) * n3 + k]
                for i in range(n1)
                for j in range(n2)
            )
            for k in range(n3)
        ]
    return Matrix(rows)


def flattening_rank(t: Tensor3, axis: int) -> int:
    return rank(flattening(t, axis))


def n_of_t(t: Tensor3) -> int:
    """Maximum of the three flattening ranks."""
    return max(flattening_rank(t, axis) for axis in (1, 2, 3))


def is_concise(t: Tensor3) -> tuple[bool, bool, bool]:
    return tuple(
        flattening_rank(t, axis) == t.dims[axis - 1] for axis in (1, 2, 3)
    )


# ---------------------------------------------------------------------------
# genericity on the first axis


def _slice_rank_at(slices_int: list[list[list[int]]], point: Sequence[int], m: int) -> bool:
    """True iff the integer combination of axis-1 slices at `point` is invertible."""
    combo = [[0] * m for _ in range(m)]
    for c, sl in zip(point, slices_int):
        if c:
            for r in range(m):
                srow = sl[r]
                crow = combo[r]
                for j in range(m):
                    v = srow[j]
                    if v:
                        crow[j] += c * v
    sb = SpanBuilder(m)
    for row in combo:
        sb.add(row)
    return sb.dim == m


def one_generic_witness(
    t: Tensor3,
    *,
    seed: int = 0,
    deterministic: bool = False,
    probes: int = 40,
) -> tuple[Fraction, ...] | None:
    """Covector x on axis 1 with contract(t, x, 1) invertible, or None.

    det(sum_i x_i slice_i) has total degree at most m = dims[2], so it is
    identically zero iff it vanishes on the grid {0..m}^n1; the grid walk
    is the deterministic certificate for None.  Random integer points in
    [-B, B] with B = m * n1 * 16 are probed first unless `deterministic`.
    Any hit is re-verified by exact rank computation.
    """
    n1, n2, n3 = t.dims
    if n2 != n3:
        raise ValueError("axis-1 genericity needs dims[2] == dims[3]")
    m = n2
    flat = flattening(t, 1)
    slices_int = []
    for i in range(n1):
        row = flat.row(i)
        mult = 1
        for x in row:
            d = x.denominator
            if d != 1:
                mult = mult * d // gcd(mult, d)
        ints = [int(x * mult) for x in row]
        slices_int.append([ints[r * m : (r + 1) * m] for r in range(m)])

    def verified(point):
        x = tuple(Fraction(c) for c in point)
        matrix = contract(t, x, 1)
        if rank(matrix) == m:
            return x
        return None

    if not deterministic:
        rng = random.Random(seed)
        bound = m * n1 * 16
        for _ in range(probes):
            point = [rng.randint(-bound, bound) for _ in range(n1)]
            if _slice_rank_at(slices_int, point, m):
                hit = verified(point)
                if hit is not None:
                    return hit
    for point in itertools.product(range(m + 1), repeat=n1):
        if _slice_rank_at(slices_int, point, m):
            hit = verified(point)
            if hit is not None:
                return hit
    return None


# ---------------------------------------------------------------------------
# restrictions and products


@dataclass(frozen=True)
class RestrictionTriple:
    """Three linear maps, one per factor; phi_k has t.dims[k] columns."""

    phi1: Matrix
    phi2: Matrix
    phi3: Matrix

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "RestrictionTriple":
        return cls(*(Matrix.identity(d) for d in dims))

    def compose(self, first: "RestrictionTriple") -> "RestrictionTriple":
        """self applied after `first` (matrix product per factor)."""
        return RestrictionTriple(
            self.phi1 @ first.phi1, self.phi2 @ first.phi2, self.phi3 @ first.phi3
        )


def restrict(t: Tensor3, phi: RestrictionTriple) -> Tensor3:
    """Multilinear action of (phi1, phi2, phi3) on the three factors."""
    for axis, mat in enumerate((phi.phi1, phi.phi2, phi.phi3)):
        if mat.cols != t.dims[axis]:
            raise ValueError(
                f"phi{axis + 1} has {mat.cols} columns, tensor axis has dim {t.dims[axis]}"
            )
    # one axis at a time, visiting only nonzero entries
    current: dict[tuple[int, int, int], Fraction] = {
        (i, j, k): v for i, j, k, v in t.nonzero()
    }
    maps = (phi.phi1, phi.phi2, phi.phi3)
    dims = list(t.dims)
    for axis in range(3):
        mat = maps[axis]
        nxt: dict[tuple[int, int, int], Fraction] = {}
        for idx, v in current.items():
            src = idx[axis]
            for dst in range(mat.rows):
                c = mat[dst, src]
                if c:
                    key = list(idx)
                    key[axis] = dst
                    key = tuple(key)
                    acc = nxt.get(key)
                    nxt[key] = c * v if acc is None else acc + c * v
        current = {k: v for k, v in nxt.items() if v}
        dims[axis] = mat.rows
    return Tensor3.from_triples(dims, [(i, j, k, v) for (i, j, k), v in current.items()])


def kron(t: Tensor3, u: Tensor3, *, max_entries: int | None = None) -> Tensor3:
    """Kronecker product per factor.

    Index order is row-major per factor: the pair (i, i') becomes
    i * u.dims[0] + i', and likewise on the other axes.
    """
    guard = MAX_DENSE_ENTRIES if max_entries is None else max_entries
    n1, n2, n3 = t.dims
    m1, m2, m3 = u.dims
    total = n1 * m1 * n2 * m2 * n3 * m3
    if total > guard:
        raise ResourceGuardError(
            f"product would have {total} entries, above the guard of {guard}"
        )
    flat = [_ZERO] * total
    d2, d3 = n2 * m2, n3 * m3
    for i, j, k, v in t.nonzero():
        for ii, jj, kk, w in u.nonzero():
            a = i * m1 + ii
            b = j * m2 + jj
            c = k * m3 + kk
            flat[(a * d2 + b) * d3 + c] = v * w
    out = object.__new__(Tensor3)
    out.dims = (n1 * m1, d2, d3)
    out.entries = tuple(flat)
    return out


def kron_power(t: Tensor3, m: int, *, max_entries: int | None = None) -> Tensor3:
    if m < 1:
        raise ValueError("power must be at least 1")
    acc = t
    for _ in range(m - 1):
        acc = kron(acc, t, max_entries=max_entries)
    return acc


# ---------------------------------------------------------------------------
# standard generator tensors


def diagonal_tensor(n: int) -> Tensor3:
    if n < 1:
        raise ValueError("size must be at least 1")
    return Tensor3.from_triples((n, n, n), [(i, i, i, 1) for i in range(n)])


def unit_tensor() -> Tensor3:
    return diagonal_tensor(1)


def matmul_tensor(a: int, b: int, c: int) -> Tensor3:
    """Structure tensor of (a x b) times (b x c) matrix multiplication,
    dims (ab, bc, ac)."""
    if min(a, b, c) < 1:
        raise ValueError("matrix multiplication sizes must be at least 1")
    triples = []
    for i in range(a):
        for j in range(b):
            for k in range(c):
                triples.append((i * b + j, j * c + k, i * c + k, 1))
    return Tensor3.from_triples((a * b, b * c, a * c), triples)
