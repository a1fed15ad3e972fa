"""Shared fixtures: the two worked modules used across the suite.

module4: K^4 with three commuting elementary nilpotents E13, E14, E23 as
generator actions.  Its structure tensor has seven nonzero terms.

module3: K^3 (basis 1, x, x^2 of a truncated polynomial line) where the
first generator is the nilpotent shift (x-multiplication, cube zero) and
the second acts as zero.  Its structure tensor has five nonzero terms;
the matching algebra presentation has six.
"""

from __future__ import annotations

from tensorbarrier.exactnum import Matrix
from tensorbarrier.module_struct import AlgebraPresentation, CommutingFamily


def e_matrix(n, r, c):
    rows = [[0] * n for _ in range(n)]
    rows[r][c] = 1
    return Matrix(rows)


def module4_family() -> CommutingFamily:
    return CommutingFamily(
        4,
        (
            e_matrix(4, 0, 2),  # E13
            e_matrix(4, 0, 3),  # E14
            e_matrix(4, 1, 2),  # E23
        ),
    )


MODULE4_SIGMA_TRIPLES = {
    (0, 0, 0): 1,
    (0, 1, 1): 1,
    (0, 2, 2): 1,
    (0, 3, 3): 1,
    (1, 2, 0): 1,
    (2, 3, 0): 1,
    (3, 2, 1): 1,
}


def module3_family() -> CommutingFamily:
    shift = Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    zero = Matrix.zeros(3, 3)
    return CommutingFamily(3, (shift, zero))


MODULE3_SIGMA_TRIPLES = {
    (0, 0, 0): 1,
    (0, 1, 1): 1,
    (0, 2, 2): 1,
    (1, 0, 1): 1,
    (1, 1, 2): 1,
}


def truncated_line_algebra() -> AlgebraPresentation:
    """Structure constants of the span (1, x, x^2) with x^3 = 0."""
    d = 3
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for j in range(d):
        c[0][j][j] = 1
        c[j][0][j] = 1
    c[1][1][2] = 1
    return AlgebraPresentation(d, tuple(tuple(tuple(r) for r in p) for p in c))


ALGEBRA3_SIGMA_TRIPLES = {
    (0, 0, 0): 1,
    (0, 1, 1): 1,
    (0, 2, 2): 1,
    (1, 0, 1): 1,
    (1, 1, 2): 1,
    (2, 0, 2): 1,
}


def jordan_family(n: int) -> CommutingFamily:
    """Single full nilpotent Jordan block as the first generator, zero others."""
    shift = Matrix([[1 if r == c + 1 else 0 for c in range(n)] for r in range(n)])
    zeros = [Matrix.zeros(n, n)] * (n - 2)
    return CommutingFamily(n, (shift, *zeros))


def diagonal_family(n: int, values=None) -> CommutingFamily:
    """Generators diagonal with the given value vectors (defaults to
    powers of distinct entries, giving a semisimple module)."""
    if values is None:
        base = list(range(1, n + 1))
        values = [[b**p for b in base] for p in range(1, n)]
    gens = tuple(
        Matrix([[v[i] if i == j else 0 for j in range(n)] for i in range(n)])
        for v in values
    )
    return CommutingFamily(n, gens)
