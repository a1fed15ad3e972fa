"""Minimal coordinate-slice covers: exact upper bounds on slice rank.

Covering every nonzero entry by axis-aligned slices yields a slice
decomposition, so the minimal cover size bounds the slice rank from above
in the presented basis.  Minimality is certified by branch and bound
(three-way branch on an uncovered cell) when the greedy start is small
enough; otherwise the greedy cover is returned uncertified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .instability import bounds, module_certificate, stable_decimal
from .module_struct import CommutingFamily, structure_tensor
from .radical import profile
from .tensor import ResourceGuardError, Tensor3, kron

MAX_COVER_CELLS = 10**5
CERTIFY_LIMIT = 20


@dataclass(frozen=True)
class CoverResult:
    """Slices are (axis, index) pairs with axis in 1..3.  `certified` means
    the branch-and-bound search proved minimality."""

    size: int
    slices: tuple[tuple[int, int], ...]
    certified: bool

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "slices": [list(s) for s in self.slices],
            "certified": self.certified,
        }


def _greedy_cover(cells: list[tuple[int, int, int]]) -> list[tuple[int, int]]:
    remaining = set(cells)
    chosen = []
    while remaining:
        counts: dict[tuple[int, int], int] = {}
        for i, j, k in remaining:
            for key in ((1, i), (2, j), (3, k)):
                counts[key] = counts.get(key, 0) + 1
        best = min(counts, key=lambda key: (-counts[key], key))
        chosen.append(best)
        axis, idx = best
        remaining = {c for c in remaining if c[axis - 1] != idx}
    return chosen


def _matching_lower_bound(cells: list[tuple[int, int, int]]) -> int:
    used = [set(), set(), set()]
    count = 0
    for i, j, k in cells:
        if i not in used[0] and j not in used[1] and k not in used[2]:
            used[0].add(i)
            used[1].add(j)
            used[2].add(k)
            count += 1
    return count


def min_cover(t: Tensor3, *, node_budget: int = 5_000_000) -> CoverResult:
    """Minimal number of axis-aligned slices covering all nonzero entries.

    Certified exhaustively when the greedy bound is at most CERTIFY_LIMIT
    and the search fits the node budget; the uncovered-cell branch is
    exhaustive because any cover must use one of the cell's three slices.
    """
    cells = [(i, j, k) for i, j, k, _ in t.nonzero()]
    if len(cells) > MAX_COVER_CELLS:
        raise ResourceGuardError(
            f"{len(cells)} nonzero entries exceed the cover guard of {MAX_COVER_CELLS}"
        )
    if not cells:
        return CoverResult(0, (), True)
    greedy = _greedy_cover(cells)
    best: list[tuple[int, int]] = list(greedy)
    if len(greedy) > CERTIFY_LIMIT:
        return CoverResult(len(greedy), tuple(sorted(greedy)), False)

    nodes = 0
    exhausted = True

    def search(remaining: list[tuple[int, int, int]], chosen: list[tuple[int, int]]):
        nonlocal best, nodes, exhausted
        nodes += 1
        if nodes > node_budget:
            exhausted = False
            return
        if not remaining:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + _matching_lower_bound(remaining) >= len(best):
            return
        i, j, k = remaining[0]
        for axis, idx in ((1, i), (2, j), (3, k)):
            rest = [c for c in remaining if c[axis - 1] != idx]
            chosen.append((axis, idx))
            search(rest, chosen)
            chosen.pop()

    search(cells, [])
    return CoverResult(len(best), tuple(sorted(best)), exhausted)


@dataclass(frozen=True)
class PowerExperimentRow:
    power: int
    cover: CoverResult
    bound_decimal: str

    def to_json_dict(self) -> dict:
        return {
            "power": self.power,
            "cover": self.cover.size,
            "cover_certified": self.cover.certified,
            "bound": self.bound_decimal,
        }


def power_experiment(
    f: CommutingFamily,
    m: int,
    *,
    max_entries: int | None = None,
    digits: int = 12,
) -> list[PowerExperimentRow]:
    """Cover sizes of the structure tensor's powers next to the certified
    decay curve (n exp(-e))^j; e = 0 when the module is semisimple and no
    certificate exists."""
    if m < 1:
        raise ValueError("need at least one power")
    p = profile(f)
    cert = module_certificate(f, p)
    if cert is not None:
        exponent = bounds(cert, f.n).exponent
    else:
        exponent = Fraction(0)
    sigma = structure_tensor(f)
    rows = []
    current = sigma
    for j in range(1, m + 1):
        if j > 1:
            current = kron(current, sigma, max_entries=max_entries)
        cover = min_cover(current)
        bound = stable_decimal(
            lambda ctx: (
                ctx.mpf(f.n) * ctx.exp(-ctx.mpf(exponent.numerator) / ctx.mpf(exponent.denominator))
            )
            ** j,
            digits,
        )
        rows.append(PowerExperimentRow(power=j, cover=cover, bound_decimal=bound))
    return rows
