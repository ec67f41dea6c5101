"""Directed cover trees: level counts, empirical growth rates, pruning.

A cover tree of a vertex has one node per finite path ending there, so its
level sizes are exactly the fixed-target path counts.  Growth rates are
estimated as n-th roots over a trailing window: periodicity makes single-point
estimates oscillate, and the window width is the convention for limsup/liminf
on a finite prefix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import DirectedMultigraph, path_counts
from .spectral import SccReport, scc_decomposition

GROWTH_WINDOW = 10


@dataclass(frozen=True)
class CoverLevels:
    """Exact level sizes of a cover tree plus windowed growth-rate estimates."""

    base: str | None
    depth: int
    levels: tuple[int, ...]
    upper_rate: float
    lower_rate: float
    window: int


def _windowed_rates(levels, depth: int, window: int) -> tuple[float, float]:
    start = max(1, depth - window)
    rates = []
    for n in range(start, depth + 1):
        a = levels[n]
        rates.append(math.exp(math.log(a) / n) if a > 0 else 0.0)
    return max(rates), min(rates)


def cover_levels(
    g: DirectedMultigraph, v: str, depth: int, window: int = GROWTH_WINDOW
) -> CoverLevels:
    """Level sizes |A_n| of the cover tree at ``v`` and their root estimates."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    levels = path_counts(g, v, depth).totals
    upper, lower = _windowed_rates(levels, depth, window)
    return CoverLevels(v, depth, levels, upper, lower, window)


def periodic_tree_levels(
    branching: list[int] | tuple[int, ...], depth: int, window: int = GROWTH_WINDOW
) -> CoverLevels:
    """Level sizes of the tree whose level-m nodes have branching[m mod n]
    children; the growth rate converges to the geometric mean of the factors."""
    if not branching:
        raise ValueError("branching sequence must be nonempty")
    if any(k < 1 for k in branching):
        raise ValueError("branching factors must be positive integers")
    if depth < len(branching):
        raise ValueError("depth must cover at least one full period")
    levels = [1]
    for m in range(depth):
        levels.append(levels[-1] * branching[m % len(branching)])
    upper, lower = _windowed_rates(levels, depth, window)
    return CoverLevels(None, depth, tuple(levels), upper, lower, window)


@dataclass(frozen=True)
class PruneComparison:
    """Growth of the full tree against the tree with dead branches removed.

    A path survives pruning exactly when its source vertex has arbitrarily
    long incoming paths, i.e. is reached by a cycle.  ``agrees`` states whether
    the two upper rates coincide within ``rate_tol`` at this depth; a tree that
    dies out entirely (upper rate 0) never satisfies the condition, which is
    about infinite trees.
    """

    full: CoverLevels
    pruned: CoverLevels
    agrees: bool
    rate_tol: float


def prune_and_compare(
    g: DirectedMultigraph,
    v: str,
    depth: int,
    window: int = GROWTH_WINDOW,
    rate_tol: float = 1e-2,
    report: SccReport | None = None,
) -> PruneComparison:
    """Compare the cover tree of ``v`` with its pruned version."""
    if report is None:
        report = scc_decomposition(g)
    full = cover_levels(g, v, depth, window)

    # vertices reached by some component containing a cycle
    alive: set[str] = set()
    for i, comp in enumerate(report.components):
        if comp.has_cycle:
            for j in report.reachable[i]:
                alive.update(report.components[j].vertices)

    table = path_counts(g, v, depth)
    pruned_levels = tuple(
        sum(c for w, c in table.counts[n].items() if w in alive) for n in range(depth + 1)
    )
    upper, lower = _windowed_rates(pruned_levels, depth, window)
    pruned = CoverLevels(v, depth, pruned_levels, upper, lower, window)
    agrees = full.upper_rate > 0.0 and abs(full.upper_rate - pruned.upper_rate) <= rate_tol
    return PruneComparison(full, pruned, agrees, rate_tol)
