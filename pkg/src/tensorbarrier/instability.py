"""Block structures, subtight numberings, instability certificates, and the
quantitative barrier bounds.

The certificate for a non-semisimple module blocks the structure tensor by
the two nilradical filtrations: the first axis by the degree-one layers
(with a dedicated trailing block for the annihilator kernel), the module
axes by the radical layers.  With labels a1(i) = a2(i) = i, a3(i) = -i the
realized block support only meets triples with label sum <= 0, while the
dimension-weighted average labels sum to a strictly positive margin.

All decisions run on exact rationals.  exp and log only appear when a
bound is rendered as a decimal string, which is done with interval
arithmetic at escalating precision until the requested digits stabilize.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import iv, mp, mpf, nstr

from .exactnum import Matrix, Subspace, complement_within, preimage
from .module_struct import CommutingFamily, algebra_closure, structure_tensor
from .radical import (
    FiltrationProfile,
    _lambda_matrix,
    _module_spaces,
    nilradical,
    profile,
    rad_powers,
)
from .simplex import lp_maximize
from .tensor import RestrictionTriple, Tensor3, kron, restrict

_ZERO = Fraction(0)
_ONE = Fraction(1)

KERNEL_RULE_DEDICATED = "dedicated"
KERNEL_RULE_DROPPED = "dropped"

WEIGHTING_UNWEIGHTED = "unweighted"
WEIGHTING_DIMS = "dim_weighted"


class InternalSubtightnessViolation(AssertionError):
    """The realized block support broke the guaranteed label bound."""


@dataclass(frozen=True)
class BlockedTensor:
    """Tensor with an ordered partition of each axis into contiguous,
    non-empty blocks."""

    tensor: Tensor3
    blocks: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        blocks = tuple(tuple(int(b) for b in axis) for axis in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for axis, dims in enumerate(blocks):
            if any(b <= 0 for b in dims):
                raise ValueError("blocks must be non-empty")
            if sum(dims) != self.tensor.dims[axis]:
                raise ValueError(
                    f"axis {axis + 1} blocks sum to {sum(dims)}, expected {self.tensor.dims[axis]}"
                )

    def offsets(self, axis: int) -> list[int]:
        out = [0]
        for b in self.blocks[axis - 1]:
            out.append(out[-1] + b)
        return out

    def block_of(self, axis: int, index: int) -> int:
        off = 0
        for pos, b in enumerate(self.blocks[axis - 1]):
            off += b
            if index < off:
                return pos
        raise IndexError(f"index {index} outside axis {axis}")


@dataclass(frozen=True)
class Numbering:
    """Integer label per block per axis."""

    a1: tuple[int, ...]
    a2: tuple[int, ...]
    a3: tuple[int, ...]

    def labels(self, axis: int) -> tuple[int, ...]:
        return (self.a1, self.a2, self.a3)[axis - 1]


def block_support(b: BlockedTensor) -> frozenset[tuple[int, int, int]]:
    """Block triples containing at least one nonzero entry."""
    lookup = [
        [b.block_of(axis, i) for i in range(b.tensor.dims[axis - 1])]
        for axis in (1, 2, 3)
    ]
    out = set()
    for i, j, k, _ in b.tensor.nonzero():
        out.add((lookup[0][i], lookup[1][j], lookup[2][k]))
    return frozenset(out)


def is_subtight(
    support: Iterable[tuple[int, int, int]], numbering: Numbering, s: int
) -> bool:
    """True iff a1(i1) + a2(i2) + a3(i3) <= s on every support triple."""
    return all(
        numbering.a1[i1] + numbering.a2[i2] + numbering.a3[i3] <= s
        for i1, i2, i3 in support
    )


@dataclass(frozen=True)
class Certificate:
    """Subtight-instability certificate for a blocked structure tensor.

    axis1_layers and axis23_layers record (label, dim) for the full formal
    index sets, including axis-1 layers of dimension zero; those carry no
    block in the blocked tensor but do count in the label sum of squares.
    """

    blocked: BlockedTensor
    numbering: Numbering
    s: int
    abar: tuple[Fraction, Fraction, Fraction]
    margin: Fraction
    sum_sq: int
    axis1_layers: tuple[tuple[int, int], ...]
    axis23_layers: tuple[tuple[int, int], ...]
    kernel_dim: int
    kernel_rule: str
    profile: FiltrationProfile | None
    basis_axis1: Matrix | None
    basis_axis23: Matrix | None

    def support(self) -> frozenset[tuple[int, int, int]]:
        return block_support(self.blocked)

    def to_json_dict(self) -> dict:
        return {
            "s": self.s,
            "blocks": [list(axis) for axis in self.blocked.blocks],
            "numbering": [list(self.numbering.a1), list(self.numbering.a2), list(self.numbering.a3)],
            "support": sorted(list(t) for t in self.support()),
            "abar": [str(a) for a in self.abar],
            "margin": str(self.margin),
            "sum_sq": self.sum_sq,
            "axis1_layers": [list(p) for p in self.axis1_layers],
            "axis23_layers": [list(p) for p in self.axis23_layers],
            "kernel_dim": self.kernel_dim,
            "kernel_rule": self.kernel_rule,
        }


def _weighted_labels(layers: Sequence[tuple[int, int]], n: int) -> Fraction:
    return sum((Fraction(dim, n) * label for label, dim in layers), _ZERO)


def module_certificate(
    f: CommutingFamily,
    p: FiltrationProfile | None = None,
    *,
    kernel_rule: str = KERNEL_RULE_DEDICATED,
) -> Certificate | None:
    """Certificate that the structure tensor is 0-subtight-unstable, or
    None when the module is semisimple.

    Axis 1 is blocked by the degree-one filtration layers (dims s_0 ..
    s_{r-1}); the part of degree-one space acting as zero either gets a
    dedicated trailing block labeled r (default, maximizing the margin) or
    is merged into the last layer block ("dropped" rule, matching a
    construction whose final layer takes no complement).  Axes 2 and 3 are
    blocked by the module layers (dims m_i), labeled i and -i.
    """
    if kernel_rule not in (KERNEL_RULE_DEDICATED, KERNEL_RULE_DROPPED):
        raise ValueError(f"unknown kernel rule {kernel_rule!r}")
    if p is None:
        p = profile(f)
    if p.semisimple:
        return None
    n = f.n
    r = p.r

    alg = algebra_closure(f)
    rad = nilradical(alg)
    module_spaces = _module_spaces(rad, n)  # M, rad M, ..., rad^r M = 0
    lam = _lambda_matrix(f)
    levels = [Subspace.full(n)] + [preimage(lam, pw) for pw in rad_powers(rad)]

    # module layers: M_i complements rad^{i+1} M inside rad^i M
    m_layer_rows: list[tuple] = []
    axis23_blocks: list[int] = []
    for i in range(r):
        layer = complement_within(module_spaces[i + 1], module_spaces[i])
        m_layer_rows.extend(layer.rows())
        axis23_blocks.append(layer.dim)
    basis23 = Matrix(m_layer_rows)

    # degree-one layers: R_i complements level_{i+1} inside level_i
    r_layer_rows: list[list] = []
    s_dims: list[int] = []
    for i in range(r):
        layer = complement_within(levels[i + 1], levels[i])
        r_layer_rows.append(list(layer.rows()))
        s_dims.append(layer.dim)
    kernel_rows = list(levels[r].rows())
    kernel_dim = len(kernel_rows)

    axis1_layers: list[tuple[int, int]] = [(i, s_dims[i]) for i in range(r)]
    if kernel_rule == KERNEL_RULE_DEDICATED:
        if kernel_dim:
            axis1_layers.append((r, kernel_dim))
            r_layer_rows.append(kernel_rows)
        axis1_labels_all = [lab for lab, _ in axis1_layers]
    else:
        r_layer_rows[r - 1].extend(kernel_rows)
        axis1_layers[r - 1] = (r - 1, s_dims[r - 1] + kernel_dim)
        axis1_labels_all = [lab for lab, _ in axis1_layers]

    basis1 = Matrix([row for rows in r_layer_rows for row in rows])

    sigma = structure_tensor(f)
    transformed = restrict(
        sigma,
        RestrictionTriple(basis1, basis23, basis23.inverse().transpose()),
    )

    blocks1 = [dim for _, dim in axis1_layers if dim]
    labels1 = [lab for lab, dim in axis1_layers if dim]
    blocked = BlockedTensor(transformed, (tuple(blocks1), tuple(axis23_blocks), tuple(axis23_blocks)))
    numbering = Numbering(
        tuple(labels1),
        tuple(range(r)),
        tuple(-i for i in range(r)),
    )

    support = block_support(blocked)
    if not is_subtight(support, numbering, 0):
        raise InternalSubtightnessViolation(
            "certificate support exceeded the guaranteed labels"
        )

    axis23_layers = tuple((i, axis23_blocks[i]) for i in range(r))
    abar1 = _weighted_labels(axis1_layers, n)
    abar2 = _weighted_labels(axis23_layers, n)
    abar3 = _weighted_labels([(-lab, dim) for lab, dim in axis23_layers], n)
    if abar2 + abar3 != 0:
        raise AssertionError("module-axis labels must cancel exactly")
    margin = abar1 + abar2 + abar3
    if margin <= 0:
        raise AssertionError("non-semisimple module must give a positive margin")

    sum_sq = sum(lab * lab for lab in axis1_labels_all) + 2 * sum(
        i * i for i in range(r)
    )
    return Certificate(
        blocked=blocked,
        numbering=numbering,
        s=0,
        abar=(abar1, abar2, abar3),
        margin=margin,
        sum_sq=sum_sq,
        axis1_layers=tuple(axis1_layers),
        axis23_layers=axis23_layers,
        kernel_dim=kernel_dim,
        kernel_rule=kernel_rule,
        profile=p,
        basis_axis1=basis1,
        basis_axis23=basis23,
    )


# ---------------------------------------------------------------------------
# combinatorial instability LP


@dataclass(frozen=True)
class LPWitness:
    """Exponents certifying combinatorial instability: weighted sums are
    zero per axis and every support triple sums to at least delta > 0."""

    u1: tuple[Fraction, ...]
    u2: tuple[Fraction, ...]
    u3: tuple[Fraction, ...]
    delta: Fraction

    def to_json_dict(self) -> dict:
        return {
            "u1": [str(v) for v in self.u1],
            "u2": [str(v) for v in self.u2],
            "u3": [str(v) for v in self.u3],
            "delta": str(self.delta),
        }


def combinatorial_lp(
    support: Iterable[tuple[int, int, int]],
    block_dims: tuple[Sequence[int], Sequence[int], Sequence[int]],
) -> LPWitness | None:
    """Maximize delta subject to u1(i1) + u2(i2) + u3(i3) >= delta on the
    support, sum_i n_k(i) u_k(i) = 0 per axis, and -1 <= u <= 1.

    Encoded for the equality-form simplex by the shift w = u + 1 (so
    w is in [0, 2]) with one slack per support row and per upper bound.
    delta = 0 with u = 0 is always feasible, so the LP is never
    infeasible, and the support rows bound delta, so never unbounded.
    Returns a witness iff the optimum is strictly positive.
    """
    support = sorted(set(support))
    if not support:
        raise ValueError("support must be non-empty")
    dims = [list(map(int, axis)) for axis in block_dims]
    counts = [len(axis) for axis in dims]
    for i1, i2, i3 in support:
        if not (0 <= i1 < counts[0] and 0 <= i2 < counts[1] and 0 <= i3 < counts[2]):
            raise ValueError(f"support triple ({i1},{i2},{i3}) outside the blocking")
    offsets = [0, counts[0], counts[0] + counts[1]]
    n_u = sum(counts)
    n_support = len(support)
    # columns: w (n_u), delta, support slacks, box slacks
    n_cols = n_u + 1 + n_support + n_u
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for axis in range(3):
        row = [_ZERO] * n_cols
        for i, w in enumerate(dims[axis]):
            row[offsets[axis] + i] = Fraction(w)
        rows.append(row)
        rhs.append(Fraction(sum(dims[axis])))
    for t, (i1, i2, i3) in enumerate(support):
        row = [_ZERO] * n_cols
        row[offsets[0] + i1] += _ONE
        row[offsets[1] + i2] += _ONE
        row[offsets[2] + i3] += _ONE
        row[n_u] = Fraction(-1)
        row[n_u + 1 + t] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(3))
    for i in range(n_u):
        row = [_ZERO] * n_cols
        row[i] = _ONE
        row[n_u + 1 + n_support + i] = _ONE
        rows.append(row)
        rhs.append(Fraction(2))
    objective = [_ZERO] * n_cols
    objective[n_u] = _ONE
    result = lp_maximize(objective, rows, rhs)
    if result.status != "optimal":
        raise AssertionError(f"instability LP cannot be {result.status}")
    delta = result.value
    if delta <= 0:
        return None
    w = result.x[:n_u]
    u = [v - 1 for v in w]
    u1 = tuple(u[offsets[0] : offsets[0] + counts[0]])
    u2 = tuple(u[offsets[1] : offsets[1] + counts[1]])
    u3 = tuple(u[offsets[2] : offsets[2] + counts[2]])
    for axis, uk in enumerate((u1, u2, u3)):
        if sum((Fraction(wt) * v for wt, v in zip(dims[axis], uk)), _ZERO) != 0:
            raise AssertionError("weighted axis sum must vanish exactly")
    for i1, i2, i3 in support:
        if u1[i1] + u2[i2] + u3[i3] < delta:
            raise AssertionError("support constraint violated at the optimum")
    return LPWitness(u1, u2, u3, delta)


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundsReport:
    """Quantitative consequences of a certificate.

    The canonical exponent is margin^2 / (6 sum_sq) with the unweighted
    label sum of squares; the asymptotic slice rank of the tensor is at
    most n exp(-exponent).  The printed closed-form lower bound uses its
    own denominator and is reported verbatim next to the canonical one;
    the two do not reduce to each other, which `corollary_note` records.
    Logs are natural; the irreversibility and barrier values are
    base-independent since the base cancels in the ratio.
    """

    n: int
    margin: Fraction
    sum_sq: int
    weighting: str
    exponent: Fraction
    sr_upper: str
    irreversibility_lb: str
    omega_barrier: str
    corollary_bound: str | None
    corollary_note: str | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "margin": str(self.margin),
            "sum_sq": self.sum_sq,
            "weighting": self.weighting,
            "exponent": str(self.exponent),
            "sr_upper": self.sr_upper,
            "irreversibility_lb": self.irreversibility_lb,
            "omega_barrier": self.omega_barrier,
            "corollary_bound": self.corollary_bound,
            "corollary_note": self.corollary_note,
        }


def stable_decimal(build, digits: int = 12) -> str:
    """Decimal with `digits` significant digits certified by interval
    arithmetic: precision escalates until both interval endpoints print
    identically."""
    for prec in (80, 160, 320, 640, 1280, 2560):
        old_iv, old_mp = iv.prec, mp.prec
        try:
            iv.prec = prec
            mp.prec = prec
            x = build(iv)
            lo, hi = (mpf(v) for v in x._mpi_)
            s_lo = nstr(lo, digits)
            s_hi = nstr(hi, digits)
        finally:
            iv.prec, mp.prec = old_iv, old_mp
        if s_lo == s_hi:
            return s_lo
    raise ArithmeticError(f"could not stabilize {digits} digits")


def _iv_fraction(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


def bounds(
    c: Certificate,
    n: int,
    *,
    weighting: str = WEIGHTING_UNWEIGHTED,
    digits: int = 12,
) -> BoundsReport:
    """Slice-rank, irreversibility and barrier values from a certificate."""
    if n < 2:
        raise ValueError("bounds need n >= 2 (log n must be positive)")
    if c.margin <= 0:
        raise ValueError("bounds need a strictly positive margin")
    if weighting == WEIGHTING_UNWEIGHTED:
        sum_sq = c.sum_sq
    elif weighting == WEIGHTING_DIMS:
        sum_sq = sum(dim * lab * lab for lab, dim in c.axis1_layers) + 2 * sum(
            dim * lab * lab for lab, dim in c.axis23_layers
        )
    else:
        raise ValueError(f"unknown weighting {weighting!r}")
    exponent = c.margin * c.margin / (6 * sum_sq)

    sr_upper = stable_decimal(
        lambda ctx: ctx.mpf(n) * ctx.exp(-_iv_fraction(ctx, exponent)), digits
    )
    irrev = stable_decimal(
        lambda ctx: ctx.log(ctx.mpf(n))
        / (ctx.log(ctx.mpf(n)) - _iv_fraction(ctx, exponent)),
        digits,
    )
    omega = stable_decimal(
        lambda ctx: 2
        * ctx.log(ctx.mpf(n))
        / (ctx.log(ctx.mpf(n)) - _iv_fraction(ctx, exponent)),
        digits,
    )

    corollary = None
    note = None
    if c.profile is not None:
        p = c.profile
        num = Fraction(sum(i * si for i, si in enumerate(p.s))) ** 2
        den_rat = Fraction(6 * n * n * (2 * sum(mi * mi for mi in p.m) + sum(p.s)))
        q = num / den_rat
        corollary = stable_decimal(
            lambda ctx: ctx.log(ctx.mpf(n))
            / (ctx.log(ctx.mpf(n)) - _iv_fraction(ctx, q)),
            digits,
        )
        note = (
            "closed-form bound uses its printed denominator "
            "(2*sum m_i^2 + sum s_i) and ignores the kernel block; it does "
            "not reduce to the canonical exponent"
        )
    return BoundsReport(
        n=n,
        margin=c.margin,
        sum_sq=sum_sq,
        weighting=weighting,
        exponent=exponent,
        sr_upper=sr_upper,
        irreversibility_lb=irrev,
        omega_barrier=omega,
        corollary_bound=corollary,
        corollary_note=note,
    )


# ---------------------------------------------------------------------------
# products of blocked tensors


def kron_blocked(
    bt: BlockedTensor,
    nt: Numbering,
    bu: BlockedTensor,
    nu: Numbering,
    *,
    max_entries: int | None = None,
) -> tuple[BlockedTensor, Numbering]:
    """Kronecker product with product blocks and summed labels.

    Product indices are permuted so each block pair occupies a contiguous
    range, ordered lexicographically by (block of t, block of u).
    """
    prod = kron(bt.tensor, bu.tensor, max_entries=max_entries)
    perms = []
    blocks = []
    labels = []
    for axis in (1, 2, 3):
        t_off = bt.offsets(axis)
        u_off = bu.offsets(axis)
        u_dim = bu.tensor.dims[axis - 1]
        order = []
        dims_axis = []
        labs_axis = []
        for p, bp in enumerate(bt.blocks[axis - 1]):
            for q, bq in enumerate(bu.blocks[axis - 1]):
                for i in range(t_off[p], t_off[p] + bp):
                    for j in range(u_off[q], u_off[q] + bq):
                        order.append(i * u_dim + j)
                dims_axis.append(bp * bq)
                labs_axis.append(nt.labels(axis)[p] + nu.labels(axis)[q])
        perms.append(order)
        blocks.append(tuple(dims_axis))
        labels.append(tuple(labs_axis))
    mats = []
    for axis, order in enumerate(perms):
        size = prod.dims[axis]
        rows = [[0] * size for _ in range(size)]
        for new, old in enumerate(order):
            rows[new][old] = 1
        mats.append(Matrix(rows))
    permuted = restrict(prod, RestrictionTriple(*mats))
    return (
        BlockedTensor(permuted, tuple(blocks)),
        Numbering(*labels),
    )
