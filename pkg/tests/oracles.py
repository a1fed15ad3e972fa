"""Independent oracles used by the test suite.

Everything here recomputes expected values through a different route than
the library (sympy exact matrices, scipy LP, brute-force enumeration), so
a bug in the library's linear algebra cannot silently confirm itself.
"""

from __future__ import annotations

from fractions import Fraction

import sympy


def sym(m):
    """Library Matrix (or row iterable) -> sympy Matrix over Rational."""
    rows = m.data if hasattr(m, "data") else m
    rows = [[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sympy.Rational(x) for x in row] for row in rows]
    if not rows:
        return sympy.zeros(0, 0)
    return sympy.Matrix(rows)


def sympy_rank(rows) -> int:
    return sym(rows).rank()


def sympy_rref(rows):
    reduced, pivots = sym(rows).rref()
    frac = [
        [Fraction(int(x.p), int(x.q)) for x in reduced.row(i)]
        for i in range(reduced.rows)
    ]
    return frac, list(pivots)


def sympy_nullspace_dim(rows) -> int:
    m = sym(rows)
    return m.cols - m.rank()


def sympy_span_dim(vectors) -> int:
    """Dimension of the span of a list of coefficient vectors."""
    rows = [[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sympy.Rational(x) for x in v] for v in vectors]
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def sympy_closure_dim(n: int, generator_rows: list[list[list]]) -> int:
    """Dimension of the unital algebra generated by the given n x n matrices.

    Worklist closure with sympy arithmetic only.
    """
    gens = [sym(g) for g in generator_rows]
    eye = sympy.eye(n)
    basis: list[sympy.Matrix] = []
    span = sympy.zeros(0, n * n)

    def tryadd(mat):
        nonlocal span
        vec = sympy.Matrix([[mat[i, j] for i in range(n) for j in range(n)]])
        cand = span.col_join(vec)
        if cand.rank() > span.rank():
            span = cand
            basis.append(mat)
            return True
        return False

    tryadd(eye)
    for g in gens:
        tryadd(g)
    grew = True
    while grew:
        grew = False
        for b in list(basis):
            for g in gens:
                if tryadd(b * g):
                    grew = True
    return len(basis)


def sympy_trace_form_kernel_dim(basis_mats: list[list[list]]) -> int:
    """Kernel dimension of the Gram matrix of (x, y) -> Tr(xy)."""
    mats = [sym(b) for b in basis_mats]
    d = len(mats)
    gram = sympy.Matrix(d, d, lambda p, q: (mats[p] * mats[q]).trace())
    return d - gram.rank()
