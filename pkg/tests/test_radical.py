import random

import pytest

from tensorbarrier.exactnum import Matrix, Subspace, complement_within
from tensorbarrier.module_struct import CommutingFamily, algebra_closure
from tensorbarrier.radical import (
    FiltrationProfile,
    _is_nilpotent_int,
    degree_one_filtration,
    module_filtration,
    nilpotency_index,
    nilradical,
    profile,
    rad_powers,
)

from fixtures import (
    diagonal_family,
    e_matrix,
    jordan_family,
    module3_family,
    module4_family,
)
from oracles import sympy_trace_form_kernel_dim


class TestNilradical:
    def test_module4_radical_is_the_three_nilpotents(self):
        alg = algebra_closure(module4_family())
        rad = nilradical(alg)
        expected = Subspace(
            16,
            [
                e_matrix(4, 0, 2).vec(),
                e_matrix(4, 0, 3).vec(),
                e_matrix(4, 1, 2).vec(),
            ],
        )
        assert rad == expected

    def test_diagonal_algebra_has_zero_radical(self):
        alg = algebra_closure(diagonal_family(3))
        assert nilradical(alg).is_zero()

    def test_jordan_block_radical(self):
        n = 4
        alg = algebra_closure(jordan_family(n))
        rad = nilradical(alg)
        shift = jordan_family(n).generators[0]
        powers = []
        acc = Matrix.identity(n)
        for _ in range(n - 1):
            acc = acc @ shift
            powers.append(acc.vec())
        assert rad == Subspace(n * n, powers)

    def test_kernel_dim_matches_sympy_gram(self):
        for fam in (module4_family(), module3_family(), jordan_family(4)):
            alg = algebra_closure(fam)
            rad = nilradical(alg)
            mats = [m.data for m in alg.basis_matrices()]
            assert rad.dim == sympy_trace_form_kernel_dim(mats)

    def test_every_basis_element_nilpotent_and_complement_not(self):
        rng = random.Random(31)
        for _ in range(8):
            fam = _poly_family(rng, rng.randint(2, 5))
            alg = algebra_closure(fam)
            rad = nilradical(alg)
            n = fam.n
            for row in rad.rows():
                mat = Matrix.from_vec(n, n, row)
                ints = [[int(x * _common_den(row)) for x in mat.row(i)] for i in range(n)]
                assert _is_nilpotent_int(ints, n)
            comp = complement_within(rad, alg.basis)
            for row in comp.rows():
                mat = Matrix.from_vec(n, n, row)
                den = _common_den(row)
                ints = [[int(x * den) for x in mat.row(i)] for i in range(n)]
                assert not _is_nilpotent_int(ints, n)


class TestNilpotencyIndex:
    def test_zero_radical(self):
        assert nilpotency_index(Subspace.zero(9)) == 1

    def test_module4(self):
        alg = algebra_closure(module4_family())
        assert nilpotency_index(nilradical(alg)) == 2

    def test_module3(self):
        alg = algebra_closure(module3_family())
        assert nilpotency_index(nilradical(alg)) == 3

    def test_jordan(self):
        for n in (2, 3, 5):
            alg = algebra_closure(jordan_family(n))
            assert nilpotency_index(nilradical(alg)) == n

    def test_powers_strictly_decrease(self):
        alg = algebra_closure(jordan_family(5))
        chain = rad_powers(nilradical(alg))
        dims = [sp.dim for sp in chain]
        assert dims == sorted(dims, reverse=True)
        assert dims[-1] == 0


class TestModuleFiltration:
    def test_module4(self):
        alg = algebra_closure(module4_family())
        assert module_filtration(nilradical(alg), 4) == (2, 2)

    def test_semisimple(self):
        alg = algebra_closure(diagonal_family(3))
        assert module_filtration(nilradical(alg), 3) == (3,)

    def test_jordan(self):
        n = 4
        alg = algebra_closure(jordan_family(n))
        assert module_filtration(nilradical(alg), n) == (1,) * n


class TestDegreeOneFiltration:
    def test_module4(self):
        fam = module4_family()
        rad = nilradical(algebra_closure(fam))
        assert degree_one_filtration(fam, rad) == (4, 3, 0)

    def test_module3(self):
        fam = module3_family()
        rad = nilradical(algebra_closure(fam))
        assert degree_one_filtration(fam, rad) == (3, 2, 1, 1)

    def test_semisimple_injective(self):
        fam = diagonal_family(3)
        rad = nilradical(algebra_closure(fam))
        assert degree_one_filtration(fam, rad) == (3, 0)


class TestProfile:
    def test_module4_golden(self):
        p = profile(module4_family())
        assert (p.r, p.m, p.t, p.s) == (2, (2, 2), (4, 3, 0), (1, 3))
        assert p.kernel_dim == 0
        assert (p.dim_a, p.dim_rad, p.supp_count) == (4, 3, 1)
        assert not p.semisimple

    def test_module3_golden(self):
        p = profile(module3_family())
        assert (p.r, p.m, p.t, p.s) == (3, (1, 1, 1), (3, 2, 1, 1), (1, 1, 0))
        assert p.kernel_dim == 1
        assert (p.dim_a, p.dim_rad, p.supp_count) == (3, 2, 1)
        assert not p.semisimple

    def test_diagonal_distinct_golden(self):
        p = profile(diagonal_family(3))
        assert (p.r, p.m, p.t) == (1, (3,), (3, 0))
        assert p.supp_count == 3
        assert p.semisimple

    def test_json_keys(self):
        d = profile(module4_family()).to_json_dict()
        assert set(d) == {"r", "m", "t", "s", "kernel_dim", "dim_A", "dim_rad", "supp", "semisimple"}

    def test_validation_rejects_inconsistent(self):
        with pytest.raises(ValueError):
            FiltrationProfile(
                r=1, m=(3,), t=(3, 1), s=(2,), kernel_dim=1,
                dim_a=3, dim_rad=1, supp_count=3, semisimple=False,
            )

    def test_support_degree_properties_on_random_families(self):
        rng = random.Random(41)
        for _ in range(25):
            fam = _poly_family(rng, rng.randint(2, 5))
            p = profile(fam)
            assert p.supp_count <= fam.n
            if p.supp_count == fam.n:
                assert p.dim_rad == 0
            assert sum(p.m) == fam.n
            assert sum(p.s) + p.kernel_dim == fam.n
            if not p.semisimple:
                assert p.t[1] >= 1


def _common_den(row):
    den = 1
    for x in row:
        den = den * x.denominator // __import__("math").gcd(den, x.denominator)
    return den


def _poly_family(rng: random.Random, n: int) -> CommutingFamily:
    upper = [[rng.randint(-2, 2) if c > r else 0 for c in range(n)] for r in range(n)]
    diag = [rng.randint(-1, 1) for _ in range(n)]
    base = Matrix(
        [[upper[r][c] + (diag[r] if r == c else 0) for c in range(n)] for r in range(n)]
    )
    gens = []
    for _ in range(n - 1):
        coeffs = [rng.randint(-2, 2) for _ in range(3)]
        acc = Matrix.identity(n).scale(coeffs[0])
        power = Matrix.identity(n)
        for c in coeffs[1:]:
            power = power @ base
            acc = acc + power.scale(c)
        gens.append(acc)
    return CommutingFamily(n, tuple(gens))
