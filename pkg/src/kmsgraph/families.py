"""Parametrized infinite-graph families: closed forms plus finite truncations.

Four families are built in.  LADDER is the chain of looped vertices whose
partition functions satisfy an explicit recurrence; STAIRCASE and SKIP are the
negative-temperature families with shortcut edges, where summability reduces
to an infinite product and a quadratic recurrence respectively; WILD realises
a prescribed set of growth exponents with one chain per exponent hanging off a
hub.  Infinite graphs never exist as objects here, only closed forms and
truncations that feed the finite-graph modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import DirectedMultigraph, enumerate_paths

SUMMABLE = "SUMMABLE"
NOT_SUMMABLE = "NOT-SUMMABLE"
UNDECIDED = "UNDECIDED-AT-N"

LADDER = "ladder"
STAIRCASE = "staircase"
SKIP = "skip"
WILD = "wild"


@dataclass(frozen=True)
class AffineRule:
    """Step sequence a_n = slope * n + offset, required to stay a nonnegative integer."""

    slope: int
    offset: int

    def __post_init__(self):
        if self.slope < 0 or self.offset < 0:
            raise ValueError("affine staircase rules need slope >= 0 and offset >= 0")

    def prefix(self, n: int) -> list[int]:
        return [self.slope * i + self.offset for i in range(n)]


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    steps: tuple[int, ...] | AffineRule | None = None
    exponents: tuple[float, ...] = ()
    depth: int = 1


# -- ladder ------------------------------------------------------------------


@dataclass(frozen=True)
class LadderValue:
    """Partition value of one ladder vertex plus the uniform-boundedness flag."""

    index: int
    beta: float
    value: float
    sup_finite: bool


def ladder_partition(n: int, beta: float) -> LadderValue:
    """Closed-form partition value of ladder vertex n at beta > 0.

    The value is (1/(1-e^-beta)) * sum_{k<=n} a^k with a = e^-beta/(1-e^-beta);
    at the critical point a = 1 this is 2(n+1).  The supremum over n is finite
    exactly when beta exceeds log 2.
    """
    if beta <= 0:
        raise ValueError("ladder partition values are defined for beta > 0")
    if n < 0:
        raise ValueError("vertex index must be >= 0")
    t = math.exp(-beta)
    a = t / (1.0 - t)
    if abs(a - 1.0) <= 1e-12:
        value = 2.0 * (n + 1)
    else:
        geometric = math.fsum(a**k for k in range(n + 1))
        value = geometric / (1.0 - t)
    return LadderValue(n, beta, value, beta > math.log(2.0))


def ladder_truncation(depth: int) -> DirectedMultigraph:
    """First depth+1 ladder vertices: a loop at each and a step to the next."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    vertices = [f"v{i}" for i in range(depth + 1)]
    edges = [(f"v{i}", f"v{i}", 1) for i in range(depth + 1)]
    edges += [(f"v{i}", f"v{i+1}", 1) for i in range(depth)]
    return DirectedMultigraph(vertices, edges)


def ladder_truncation_check(n: int, beta: float, depth: int) -> float:
    """|closed form - truncated series| for ladder vertex n.

    Path counts into vertex n only involve the first n+1 vertices, so the
    truncated graph carries the exact counts and the residual is the series
    tail, geometric for beta away from log 2.
    """
    from .graph import path_counts

    closed = ladder_partition(n, beta).value
    g = ladder_truncation(n)
    totals = path_counts(g, f"v{n}", depth).totals
    partial = math.fsum(c * math.exp(-beta * k) for k, c in enumerate(totals))
    return abs(closed - partial)


# -- staircase ---------------------------------------------------------------


@dataclass(frozen=True)
class StaircaseSummability:
    """Partial products of (1+e^(a_j beta))^-1 and the summability verdict."""

    beta: float
    partial_products: tuple[float, ...]
    verdict: str
    last_increment: float


def staircase_summability(
    steps: list[int] | tuple[int, ...] | AffineRule, beta: float, levels: int
) -> StaircaseSummability:
    """Decide summability of the staircase family at beta < 0.

    Affine rules admit an exact verdict by geometric comparison: summable
    exactly when the slope is positive.  Explicit finite prefixes cannot
    decide an infinite product, so they report UNDECIDED-AT-N together with
    the partial products.
    """
    if beta >= 0:
        raise ValueError("summability criterion applies to beta < 0")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if isinstance(steps, AffineRule):
        prefix = steps.prefix(levels)
        verdict = SUMMABLE if steps.slope > 0 else NOT_SUMMABLE
    else:
        prefix = list(steps)[:levels]
        if any(a < 0 for a in prefix):
            raise ValueError("step sizes must be nonnegative integers")
        verdict = UNDECIDED

    products = []
    acc = 1.0
    for a in prefix:
        acc /= 1.0 + math.exp(a * beta)
        products.append(acc)
    increment = (
        abs(products[-1] - products[-2]) if len(products) > 1 else float("inf")
    )
    return StaircaseSummability(beta, tuple(products), verdict, increment)


def staircase_truncation(steps: list[int] | tuple[int, ...], depth: int) -> DirectedMultigraph:
    """Chain v0..v_depth with shortcut edges over each run of a_j step edges.

    Landing vertices sit at positions m_j = a_0+...+a_{j-1} + j; the shortcut
    e_j jumps from m_j to m_{j+1} in one step.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    vertices = [f"v{i}" for i in range(depth + 1)]
    edges = [(f"v{i}", f"v{i+1}", 1) for i in range(depth)]
    position = 0
    for a in steps:
        nxt = position + a + 1
        if nxt > depth:
            break
        edges.append((f"v{position}", f"v{nxt}", 1))
        position = nxt
    return DirectedMultigraph(vertices, edges)


@dataclass(frozen=True)
class StaircaseIdentity:
    lhs: float
    rhs: float
    equal: bool
    tol: float


def staircase_bruteforce_identity(
    steps: list[int] | tuple[int, ...], beta: float, n: int, tol: float = 1e-10
) -> StaircaseIdentity:
    """Check the subset-path identity on a truncation by exhaustive enumeration.

    The weighted sum over paths from the start to landing vertex m_n, with
    weight e^(beta (m_n - length)), must equal the product of (1 + e^(a_j beta))
    over the first n steps.
    """
    if n < 0 or n > 12:
        raise ValueError("prefix length must be between 0 and 12")
    if len(steps) < n:
        raise ValueError(f"need at least {n} step sizes, got {len(steps)}")
    prefix = list(steps)[:n]
    m = sum(prefix) + n
    g = staircase_truncation(prefix, m)
    target = f"v{m}"
    lhs = 0.0
    for path in enumerate_paths(g, target, m):
        source = path[0][0] if path else target
        if source == "v0":
            lhs += math.exp(beta * (m - len(path)))
    rhs = math.prod(1.0 + math.exp(a * beta) for a in prefix)
    return StaircaseIdentity(lhs, rhs, abs(lhs - rhs) <= tol, tol)


# -- skip --------------------------------------------------------------------


@dataclass(frozen=True)
class SkipHarmonic:
    """Geometric harmonic vector of the skip chain at beta < 0.

    chi_n = amplitude * ratio^n with ratio the positive root of
    x^2 + x = e^beta; the amplitude 1 - ratio makes the entries sum to 1.
    """

    beta: float
    ratio: float
    amplitude: float
    residual: float

    def entry(self, n: int) -> float:
        return self.amplitude * self.ratio**n


def skip_harmonic(beta: float, check_depth: int = 50) -> SkipHarmonic:
    """Solve the skip-chain recurrence chi_n = e^-beta (chi_{n+1} + chi_{n+2})."""
    ratio = (-1.0 + math.sqrt(1.0 + 4.0 * math.exp(beta))) / 2.0
    amplitude = 1.0 - ratio
    scale = math.exp(-beta)
    residual = 0.0
    for n in range(check_depth + 1):
        chi_n = amplitude * ratio**n
        defect = abs(chi_n - scale * (amplitude * ratio ** (n + 1) + amplitude * ratio ** (n + 2)))
        residual = max(residual, defect)
    return SkipHarmonic(beta, ratio, amplitude, residual)


def skip_truncation(depth: int) -> DirectedMultigraph:
    """Chain v0..v_depth with steps v_n -> v_{n+1} and skips v_n -> v_{n+2}."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    vertices = [f"v{i}" for i in range(depth + 1)]
    edges = [(f"v{i}", f"v{i+1}", 1) for i in range(depth)]
    edges += [(f"v{i}", f"v{i+2}", 1) for i in range(depth - 1)]
    return DirectedMultigraph(vertices, edges)


def skip_substaircase_partial_sums(beta: float, levels: int) -> list[float]:
    """Partial sums of the return-speed criterion restricted to the embedded
    constant-step staircase (every other skip removed); they grow without
    bound, which transfers non-summability to the full skip chain."""
    if beta >= 0:
        raise ValueError("criterion applies to beta < 0")
    sums = []
    acc = 1.0
    for n in range(levels):
        acc *= 1.0 + math.exp(2 * beta)
        sums.append(acc)
    return sums


# -- wild --------------------------------------------------------------------


@dataclass(frozen=True)
class WildFamily:
    """Truncated wild graph, predicted growth exponent per branch vertex, and
    the integer-part multiplicity sequence of each branch."""

    graph: DirectedMultigraph
    predicted_beta: dict[str, float]
    sequences: dict[str, tuple[int, ...]]
    hub: str


def wild_sequence(exponent: float, depth: int) -> list[int]:
    """Integer parts a_n = floor(d^n / (a_1 ... a_{n-1})), keeping the running
    product within constant factors of d^n."""
    if exponent <= 1.0:
        raise ValueError("growth exponents must exceed 1")
    seq = []
    product = 1.0
    for n in range(1, depth + 1):
        a = int(exponent**n / product)
        seq.append(a)
        product *= a
    return seq


def wild_graph(exponents, depth: int) -> WildFamily:
    """One descending chain per exponent, joined at a hub vertex.

    Branch k of exponent d carries a_k parallel edges from level k to level
    k-1, so the cover tree at any branch vertex grows like d^n; the predicted
    critical exponent of every vertex on that branch is log d.
    """
    if depth < 3:
        raise ValueError("depth must be >= 3")
    exponents = tuple(exponents)
    vertices = ["o"]
    edges = []
    predicted: dict[str, float] = {}
    sequences: dict[str, tuple[int, ...]] = {}
    for b, d in enumerate(exponents):
        seq = wild_sequence(d, depth)
        branch = [f"b{b}_{k}" for k in range(depth + 1)]
        vertices.extend(branch)
        edges.append((branch[0], "o", 1))
        for k in range(1, depth + 1):
            edges.append((branch[k], branch[k - 1], seq[k - 1]))
        for name in branch:
            predicted[name] = math.log(d)
        sequences[f"b{b}"] = tuple(seq)
    return WildFamily(DirectedMultigraph(vertices, edges), predicted, sequences, "o")


# -- truncation dispatch -------------------------------------------------------


def truncate(spec: FamilySpec, depth: int | None = None) -> DirectedMultigraph:
    """Finite truncation of a family, valid input for every finite-graph module."""
    depth = spec.depth if depth is None else depth
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if spec.kind == LADDER:
        return ladder_truncation(depth)
    if spec.kind == STAIRCASE:
        steps = spec.steps
        if isinstance(steps, AffineRule):
            steps = steps.prefix(depth)
        if steps is None:
            raise ValueError("staircase truncation needs a step sequence")
        return staircase_truncation(steps, depth)
    if spec.kind == SKIP:
        return skip_truncation(depth)
    if spec.kind == WILD:
        return wild_graph(spec.exponents, max(depth, 3)).graph
    raise ValueError(f"unknown family kind {spec.kind!r}")
