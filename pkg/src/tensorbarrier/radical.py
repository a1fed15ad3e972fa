"""Nilradical, filtrations, support counting, and the semisimplicity verdict.

The nilpotent part of a finite-dimensional commutative matrix algebra over
the rationals is the kernel of the trace form (x, y) -> Tr(xy): nilpotent
times commuting gives nilpotent (trace zero), and a kernel element has all
power traces zero, which over characteristic zero forces nilpotency.  Every
basis vector of the result is re-verified by exact powering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import Matrix, SpanBuilder, Subspace, kernel, preimage
from .module_struct import CommutingFamily, MatrixAlgebra, _as_int_matrix, _int_matmul, algebra_closure

_ZERO = Fraction(0)


@dataclass(frozen=True)
class FiltrationProfile:
    """Numeric skeleton of one module analysis.

    r: nilpotency index; m: module layer dims; t: degree-one filtration
    dims (length r + 1); s: successive differences of t (length r);
    kernel_dim = t[r]; supp_count = dim_a - dim_rad.
    """

    r: int
    m: tuple[int, ...]
    t: tuple[int, ...]
    s: tuple[int, ...]
    kernel_dim: int
    dim_a: int
    dim_rad: int
    supp_count: int
    semisimple: bool

    def __post_init__(self):
        n = self.t[0]
        if self.r < 1 or len(self.m) != self.r or len(self.t) != self.r + 1:
            raise ValueError("filtration lengths do not match the nilpotency index")
        if self.s != tuple(
            self.t[i] - self.t[i + 1] for i in range(self.r)
        ):
            raise ValueError("s must be the successive differences of t")
        if any(x < 0 for x in self.s):
            raise ValueError("t must be weakly decreasing")
        if self.kernel_dim != self.t[-1]:
            raise ValueError("kernel_dim must equal the last t value")
        if sum(self.m) != n or sum(self.s) + self.kernel_dim != n:
            raise ValueError("layer dimensions must sum to the module dimension")
        if any(mi < 1 for mi in self.m):
            raise ValueError("module layers must strictly drop until zero")
        if self.supp_count != self.dim_a - self.dim_rad:
            raise ValueError("supp_count must equal dim_a - dim_rad")
        if not 1 <= self.supp_count <= n:
            raise ValueError("supp_count out of range")
        if self.semisimple != (self.dim_rad == 0):
            raise ValueError("semisimple must mean trivial nilradical")

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "m": list(self.m),
            "t": list(self.t),
            "s": list(self.s),
            "kernel_dim": self.kernel_dim,
            "dim_A": self.dim_a,
            "dim_rad": self.dim_rad,
            "supp": self.supp_count,
            "semisimple": self.semisimple,
        }


def _unvec_int(row, n: int) -> list[list[int]]:
    return [list(row[r * n : (r + 1) * n]) for r in range(n)]


def _is_nilpotent_int(mat: list[list[int]], n: int) -> bool:
    """A nilpotent n x n matrix has x^n = 0; square until the exponent
    reaches n."""
    power = mat
    exponent = 1
    while exponent < n:
        if all(v == 0 for row in power for v in row):
            return True
        power = _int_matmul(power, power)
        exponent *= 2
    return all(v == 0 for row in power for v in row)


def nilradical(alg: MatrixAlgebra) -> Subspace:
    """Subspace of nilpotent elements, via the trace-form kernel."""
    mats = [_as_int_matrix(m) for m in alg.basis_matrices()]
    d = len(mats)
    n = alg.n
    if d == 0:
        return Subspace.zero(n * n)
    gram = [[0] * d for _ in range(d)]
    for p in range(d):
        a = mats[p]
        for q in range(p, d):
            b = mats[q]
            tr = 0
            for i in range(n):
                arow = a[i]
                for j in range(n):
                    v = arow[j]
                    if v:
                        tr += v * b[j][i]
            gram[p][q] = tr
            gram[q][p] = tr
    coeff_kernel = kernel(Matrix(gram))
    vectors = []
    for coords in coeff_kernel.rows():
        acc = [[_ZERO] * n for _ in range(n)]
        for c, mat in zip(coords, mats):
            if c:
                for i in range(n):
                    row = mat[i]
                    arow = acc[i]
                    for j in range(n):
                        if row[j]:
                            arow[j] += c * row[j]
        vectors.append([x for row in acc for x in row])
    rad = Subspace(n * n, vectors)
    for row in rad.rows():
        mat = _as_int_matrix(Matrix.from_vec(n, n, row))
        if not _is_nilpotent_int(mat, n):
            raise AssertionError("trace-form kernel produced a non-nilpotent element")
    return rad


def rad_powers(rad: Subspace) -> list[Subspace]:
    """[rad^1, rad^2, ..., rad^r] where rad^r is the first zero power."""
    n = _side(rad)
    chain = [rad]
    rad_mats = [_unvec_int(r, n) for r in (SpanBuilder(n * n, rad.rows()).int_rows())]
    current = rad_mats
    while chain[-1].dim > 0:
        sb = SpanBuilder(n * n)
        next_mats = []
        for a in current:
            for b in rad_mats:
                prod = _int_matmul(a, b)
                if sb.add([x for row in prod for x in row]):
                    next_mats.append(prod)
        chain.append(Subspace(n * n, [[x for row in m for x in row] for m in next_mats]))
        current = next_mats
        if len(chain) > n * n + 1:
            raise AssertionError("nilradical power chain failed to terminate")
    return chain


def nilpotency_index(rad: Subspace) -> int:
    """Minimal r >= 1 with rad^r = 0."""
    return len(rad_powers(rad))


def _side(rad: Subspace) -> int:
    n = int(round(rad.ambient_dim**0.5))
    if n * n != rad.ambient_dim:
        raise ValueError("subspace ambient dimension is not a perfect square")
    return n


def module_filtration(rad: Subspace, n: int) -> tuple[int, ...]:
    """Layer dims m_i = dim(rad^i M) - dim(rad^{i+1} M) for i < r."""
    spaces = _module_spaces(rad, n)
    return tuple(spaces[i].dim - spaces[i + 1].dim for i in range(len(spaces) - 1))


def _module_spaces(rad: Subspace, n: int) -> list[Subspace]:
    """[M, rad M, rad^2 M, ..., rad^r M = 0] as subspaces of K^n."""
    chain = [Subspace.full(n)]
    for power in rad_powers(rad):
        columns = []
        for row in power.rows():
            mat = Matrix.from_vec(n, n, row)
            columns.extend(mat.column(j) for j in range(n))
        chain.append(Subspace(n, columns))
    return chain


def _lambda_matrix(f: CommutingFamily) -> Matrix:
    """Matrix of c -> c_0 I + sum c_i v_i from K^n to matrix coordinates."""
    n = f.n
    cols = [Matrix.identity(n).vec()] + [g.vec() for g in f.generators]
    return Matrix(cols).transpose()


def degree_one_filtration(f: CommutingFamily, rad: Subspace) -> tuple[int, ...]:
    """Dims t_i of the preimages of rad^i under the degree-one action map,
    for i = 0..r.  t_0 = n and t_r is the kernel dimension of the map."""
    lam = _lambda_matrix(f)
    chain = rad_powers(rad)
    dims = [f.n]
    for power in chain:
        dims.append(preimage(lam, power).dim)
    return tuple(dims)


@lru_cache(maxsize=128)
def profile(f: CommutingFamily) -> FiltrationProfile:
    """Full filtration profile of a module presentation."""
    alg = algebra_closure(f)
    rad = nilradical(alg)
    m = module_filtration(rad, f.n)
    t = degree_one_filtration(f, rad)
    r = len(m)
    s = tuple(t[i] - t[i + 1] for i in range(r))
    return FiltrationProfile(
        r=r,
        m=m,
        t=t,
        s=s,
        kernel_dim=t[-1],
        dim_a=alg.dim,
        dim_rad=rad.dim,
        supp_count=alg.dim - rad.dim,
        semisimple=rad.dim == 0,
    )
