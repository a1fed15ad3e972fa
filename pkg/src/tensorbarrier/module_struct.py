"""Conversions between module presentations.

A module of dimension n over a polynomial ring in n-1 variables is
presented by the commuting matrices giving the variable actions (the
identity action is implicit).  This module converts between that
presentation, structure-constant presentations of commutative unital
algebras, and order-3 tensors, including the extraction of a commuting
family from a tensor with an invertible first-axis contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .exactnum import (
    Matrix,
    SpanBuilder,
    Subspace,
    as_fraction,
    complement_within,
    format_rational,
)
from .tensor import Tensor3, one_generic_witness

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NotOneGeneric(Exception):
    """No covector on the first axis gives an invertible contraction."""


class NotCommuting(Exception):
    """Normalized slices do not commute; the tensor cannot have minimal
    border rank, so no module presentation exists for it."""


def _as_int_matrix(m: Matrix) -> list[list[int]]:
    """Scale a Fraction matrix to integers (span-preserving for our uses)."""
    mult = 1
    for row in m.data:
        for x in row:
            d = x.denominator
            if d != 1:
                g = gcd(mult, d)
                mult = mult // g * d
    return [[int(x * mult) for x in row] for row in m.data]


def _int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    cols = len(b[0])
    out = [[0] * cols for _ in range(n)]
    for i, arow in enumerate(a):
        orow = out[i]
        for t, v in enumerate(arow):
            if v:
                brow = b[t]
                for j in range(cols):
                    w = brow[j]
                    if w:
                        orow[j] += v * w
    return out


@dataclass(frozen=True)
class CommutingFamily:
    """Module presentation: n-1 pairwise commuting n x n generator matrices.

    The generators are the actions of the degree-one variables; the action
    of 1 is the identity and is implicit.
    """

    n: int
    generators: tuple[Matrix, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("module dimension must be at least 1")
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(gens) != self.n - 1:
            raise ValueError(
                f"expected {self.n - 1} generators for dimension {self.n}, got {len(gens)}"
            )
        for g in gens:
            if g.rows != self.n or g.cols != self.n:
                raise ValueError("generator shape does not match module dimension")
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                if gens[a] @ gens[b] != gens[b] @ gens[a]:
                    raise NotCommuting(f"generators {a + 1} and {b + 1} do not commute")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "generators": [
                [format_rational(x) for x in g.vec()] for g in self.generators
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CommutingFamily":
        if not isinstance(d, dict) or "n" not in d or "generators" not in d:
            raise ValueError("family file must contain 'n' and 'generators'")
        n = d["n"]
        if not isinstance(n, int) or n < 1:
            raise ValueError("'n' must be a positive integer")
        gens = []
        for pos, flat in enumerate(d["generators"]):
            if not isinstance(flat, list) or len(flat) != n * n:
                raise ValueError(
                    f"generators[{pos}] must be a row-major list of {n * n} rationals"
                )
            try:
                gens.append(Matrix.from_flat(n, n, [as_fraction(x) for x in flat]))
            except ValueError as exc:
                raise ValueError(f"generators[{pos}]: {exc}") from None
        return cls(n, tuple(gens))


@dataclass(frozen=True)
class AlgebraPresentation:
    """Commutative unital algebra by structure constants over a spanning
    set (g0 = 1, g1, ..., g_{d-1}); c[i][j][k] is the g_k-coordinate of
    g_i * g_j."""

    d: int
    c: tuple

    def __post_init__(self):
        d = self.d
        if d < 1:
            raise ValueError("algebra dimension must be at least 1")
        c = tuple(
            tuple(tuple(as_fraction(x) for x in row) for row in plane)
            for plane in self.c
        )
        object.__setattr__(self, "c", c)
        if len(c) != d or any(len(p) != d for p in c) or any(
            len(r) != d for p in c for r in p
        ):
            raise ValueError("structure constants must form a d x d x d array")
        for i in range(d):
            for j in range(d):
                if c[i][j] != c[j][i]:
                    raise ValueError(f"structure constants not commutative at ({i},{j})")
        for j in range(d):
            for k in range(d):
                expected = _ONE if j == k else _ZERO
                if c[0][j][k] != expected:
                    raise ValueError("index 0 must act as the unit")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    for l in range(d):
                        lhs = sum(
                            (c[i][j][m] * c[m][k][l] for m in range(d) if c[i][j][m]),
                            _ZERO,
                        )
                        rhs = sum(
                            (c[j][k][m] * c[i][m][l] for m in range(d) if c[j][k][m]),
                            _ZERO,
                        )
                        if lhs != rhs:
                            raise ValueError(
                                f"structure constants not associative at ({i},{j},{k})"
                            )

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "c": [
                [[format_rational(x) for x in row] for row in plane]
                for plane in self.c
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "AlgebraPresentation":
        if not isinstance(d, dict) or "d" not in d or "c" not in d:
            raise ValueError("algebra file must contain 'd' and 'c'")
        dim = d["d"]
        if not isinstance(dim, int) or dim < 1:
            raise ValueError("'d' must be a positive integer")
        return cls(dim, d["c"])


@dataclass(frozen=True)
class MatrixAlgebra:
    """Unital commutative subalgebra of n x n matrices, stored as the
    canonical subspace of row-major matrix coordinates."""

    n: int
    basis: Subspace
    contains_identity: bool

    def __post_init__(self):
        if self.basis.ambient_dim != self.n * self.n:
            raise ValueError("basis ambient dimension must be n^2")
        mats = self.basis_matrices()
        ident = Matrix.identity(self.n)
        has_identity = self.basis.contains_vector(ident.vec())
        if has_identity != self.contains_identity:
            raise ValueError("contains_identity flag is wrong")
        if not has_identity:
            raise ValueError("matrix algebra must contain the identity")
        sb = SpanBuilder(self.n * self.n, self.basis.basis.data)
        for a in mats:
            for b in mats:
                prod = a @ b
                if not sb.contains(prod.vec()):
                    raise ValueError("basis is not closed under multiplication")
                if prod != b @ a:
                    raise ValueError("matrix algebra is not commutative")

    @property
    def dim(self) -> int:
        return self.basis.dim

    def basis_matrices(self) -> list[Matrix]:
        return [Matrix.from_vec(self.n, self.n, row) for row in self.basis.rows()]


# ---------------------------------------------------------------------------
# structure tensors


def structure_tensor(f: CommutingFamily) -> Tensor3:
    """Structure tensor of the module: slice 0 is the identity action,
    slice i >= 1 encodes multiplication by generator i.

    Entry (i, j, k) is the k-th coordinate of generator_i applied to the
    j-th module basis vector.
    """
    n = f.n
    triples = [(0, j, j, _ONE) for j in range(n)]
    for i, g in enumerate(f.generators, start=1):
        for k in range(n):
            row = g.row(k)
            for j in range(n):
                if row[j]:
                    triples.append((i, j, k, row[j]))
    return Tensor3.from_triples((n, n, n), triples)


def structure_tensor_of_algebra(a: AlgebraPresentation) -> Tensor3:
    """Structure tensor with entries the structure constants themselves."""
    d = a.d
    triples = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                v = a.c[i][j][k]
                if v:
                    triples.append((i, j, k, v))
    return Tensor3.from_triples((d, d, d), triples)


def _action_slice(t: Tensor3, i: int) -> Matrix:
    """Slice i as an endomorphism matrix: rows are the third-axis (output)
    index, columns the second-axis (input) index."""
    n1, n2, n3 = t.dims
    return Matrix(
        [[t[i, j, k] for j in range(n2)] for k in range(n3)]
    )


@dataclass(frozen=True)
class ExtractionResult:
    """Outcome of reading a module presentation off a tensor."""

    family: CommutingFamily
    witness: tuple[Fraction, ...]
    normalizer: Matrix  # left factor applied to every slice map
    slice_span_dim: int
    padding: int


def module_from_tensor(
    t: Tensor3, *, seed: int = 0, deterministic: bool = False
) -> ExtractionResult:
    """Extract a commuting family from an (n, n, n) tensor.

    Finds a covector making one first-axis slice invertible, normalizes
    all slices by that slice's inverse (so the witness slice becomes the
    identity), checks pairwise commutativity, and picks a deterministic
    spanning list (identity, v_1, ..., v_{n-1}) of the slice span.  When
    the slices span fewer than n dimensions, the list is padded with zero
    generators; those land in the annihilator and show up as the kernel
    dimension of the degree-one filtration.
    """
    n1, n2, n3 = t.dims
    if not (n1 == n2 == n3):
        raise ValueError(f"tensor must be cubic, got dims {t.dims}")
    n = n1
    alpha = one_generic_witness(t, seed=seed, deterministic=deterministic)
    if alpha is None:
        raise NotOneGeneric(
            "no covector on axis 1 yields an invertible contraction"
        )
    norm = _action_slice_combination(t, alpha).inverse()
    slices = [norm @ _action_slice(t, i) for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if slices[a] @ slices[b] != slices[b] @ slices[a]:
                raise NotCommuting(
                    f"normalized slices {a} and {b} do not commute; "
                    "the tensor does not have minimal border rank"
                )
    ident = Matrix.identity(n)
    combo = _combine(slices, alpha)
    if not combo.is_identity():
        raise AssertionError("witness slice failed to normalize to the identity")
    span = Subspace(n * n, [s.vec() for s in slices])
    d = span.dim
    ident_line = Subspace(n * n, [ident.vec()])
    rest = complement_within(ident_line, span)
    generators = [Matrix.from_vec(n, n, row) for row in rest.rows()]
    padding = (n - 1) - len(generators)
    generators += [Matrix.zeros(n, n)] * padding
    family = CommutingFamily(n, tuple(generators))
    return ExtractionResult(
        family=family,
        witness=alpha,
        normalizer=norm,
        slice_span_dim=d,
        padding=padding,
    )


def _action_slice_combination(t: Tensor3, x: Sequence[Fraction]) -> Matrix:
    n1, n2, n3 = t.dims
    out = [[_ZERO] * n2 for _ in range(n3)]
    for i, c in enumerate(x):
        if c:
            for k in range(n3):
                row = out[k]
                for j in range(n2):
                    v = t[i, j, k]
                    if v:
                        row[j] += c * v
    return Matrix(out)


def _combine(mats: list[Matrix], coeffs: Sequence[Fraction]) -> Matrix:
    acc = Matrix.zeros(mats[0].rows, mats[0].cols)
    for m, c in zip(mats, coeffs):
        if c:
            acc = acc + m.scale(c)
    return acc


# ---------------------------------------------------------------------------
# algebra closure


@lru_cache(maxsize=128)
def algebra_closure(f: CommutingFamily) -> MatrixAlgebra:
    """Smallest subspace of n x n matrices containing the identity and all
    generators and closed under products.

    Worklist closure: whenever a product escapes the current span it is
    added and later multiplied by every generator in turn.  Terminates in
    at most n^2 growth steps.
    """
    n = f.n
    ident_int = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    gens_int = [_as_int_matrix(g) for g in f.generators]
    sb = SpanBuilder(n * n)
    basis_mats: list[list[list[int]]] = []

    def try_add(mat: list[list[int]]) -> bool:
        if sb.add([x for row in mat for x in row]):
            basis_mats.append(mat)
            return True
        return False

    try_add(ident_int)
    for g in gens_int:
        try_add(g)
    frontier = list(basis_mats)
    while frontier:
        fresh = []
        for mat in frontier:
            for g in gens_int:
                prod = _int_matmul(mat, g)
                if try_add(prod):
                    fresh.append(prod)
        frontier = fresh
    basis = Subspace(n * n, [[x for row in m for x in row] for m in basis_mats])
    return MatrixAlgebra(n=n, basis=basis, contains_identity=True)


def algebra_presentation(alg: MatrixAlgebra) -> AlgebraPresentation:
    """Structure constants of a matrix algebra over the deterministic
    spanning set (identity, then the greedy complement of its line)."""
    n = alg.n
    ident = Matrix.identity(n)
    ident_line = Subspace(n * n, [ident.vec()])
    rest = complement_within(ident_line, alg.basis)
    basis_mats = [ident] + [Matrix.from_vec(n, n, row) for row in rest.rows()]
    d = len(basis_mats)
    coord_matrix = Matrix([m.vec() for m in basis_mats]).transpose()
    # solve coord_matrix * x = vec(product) for each product
    inv_like = _solver(coord_matrix)
    c = [[[None] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            coords = inv_like(basis_mats[i] @ basis_mats[j])
            for k in range(d):
                c[i][j][k] = coords[k]
    return AlgebraPresentation(d, tuple(tuple(tuple(row) for row in plane) for plane in c))


def _solver(coord_matrix: Matrix):
    """Left-inverse application for a full-column-rank coordinate matrix."""
    from .exactnum import rref

    cols = coord_matrix.cols

    def solve(product: Matrix):
        target = product.vec()
        augmented = Matrix(
            [list(row) + [t] for row, t in zip(coord_matrix.data, target)]
        )
        reduced, rk, pivots = rref(augmented)
        if rk != cols or any(p >= cols for p in pivots):
            raise ValueError("product is outside the algebra span")
        solution = [_ZERO] * cols
        for r, p in enumerate(pivots):
            solution[p] = reduced[r, cols]
        return solution

    return solve
