"""KMS-state classification data for finite graphs.

For a positive inverse temperature the classification has two strata: one
equilibrium state of type I per vertex whose partition series converges, and
one extremal state of type III_lambda per minimal component sitting exactly at
its critical inverse temperature, with lambda = rho(A_C)^(-s) for s the
period.  Harmonic vectors realise the critical states as weight vectors; the
ground-state data is the family of exact path-count fingerprints.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AtCriticalityError, ConvergenceError, NearTieError, NearTieWarning
from .graph import DirectedMultigraph, path_counts
from .series import SeriesValue, partition_value
from .spectral import (
    MAX_POWER_ITER,
    NEG_INF,
    RADIUS_TOL,
    SccReport,
    critical_temperature,
    graph_log_radius,
    radii_close,
    scc_decomposition,
)

HARMONIC_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class HarmonicVector:
    """Nonnegative vector chi with A chi = e^beta chi, entrywise.

    ``residual`` is the largest per-row defect |sum_w a_vw chi_w - e^beta chi_v|
    actually measured; normalized vectors sum to 1.
    """

    beta: float
    entries: dict[str, float]
    normalized: bool
    residual: float

    def support(self) -> set[str]:
        return {v for v, x in self.entries.items() if x > 0.0}


@dataclass(frozen=True)
class TypeIIIState:
    component: tuple[str, ...]
    lam: float
    period: int
    chi: HarmonicVector


@dataclass(frozen=True)
class KmsClassification:
    beta: float
    type_I: tuple[tuple[str, float], ...]
    type_III: tuple[TypeIIIState, ...]
    all_type_I: bool
    at_criticality: tuple[tuple[str, ...], ...]


def beta_regular_vertices(
    g: DirectedMultigraph,
    beta: float,
    report: SccReport | None = None,
    tol: float = RADIUS_TOL,
) -> set[str]:
    """Vertices whose partition series converges at ``beta``: {v : beta > beta_v}.

    Raises when ``beta`` falls inside the tolerance band of some vertex's
    critical value, naming the component responsible.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if report is None:
        report = scc_decomposition(g)
    regular = set()
    for v in g.vertices:
        crit = critical_temperature(g, v, report, tol)
        if crit.value == NEG_INF:
            regular.add(v)
            continue
        band = tol * max(1.0, abs(beta), abs(crit.value)) + crit.tolerance
        if abs(beta - crit.value) <= band:
            raise AtCriticalityError(
                f"beta={beta!r} is at the critical value of component {crit.witness}",
                components=(crit.witness,),
            )
        if beta > crit.value:
            regular.add(v)
    return regular


def minimal_components(
    g: DirectedMultigraph,
    report: SccReport | None = None,
    tol: float = RADIUS_TOL,
) -> list[int]:
    """Indices of minimal components with radius above 1.

    A component is minimal when every other component reaching it has strictly
    smaller radius; strictness is judged at the relative tolerance, and
    near-ties go to the warning channel.
    """
    if report is None:
        report = scc_decomposition(g)
    result = []
    for i, comp in enumerate(report.components):
        if not comp.has_cycle:
            continue
        near_one = radii_close(comp.radius, 1.0, tol)
        if comp.radius <= 1.0 or near_one:
            if near_one and comp.radius != 1.0:
                warnings.warn(
                    f"component {comp.vertices} has radius {comp.radius!r} within "
                    "tolerance of 1; excluded from the minimal list",
                    NearTieWarning,
                    stacklevel=2,
                )
            continue
        minimal = True
        for j, other in enumerate(report.components):
            if j == i or i not in report.reachable[j]:
                continue
            if radii_close(other.radius, comp.radius, tol):
                warnings.warn(
                    f"components {other.vertices} and {comp.vertices} have radii "
                    f"within tolerance ({other.radius!r} vs {comp.radius!r})",
                    NearTieWarning,
                    stacklevel=2,
                )
                minimal = False
                break
            if other.radius > comp.radius:
                minimal = False
                break
        if minimal:
            result.append(i)
    return result


def _perron_vector(g: DirectedMultigraph, comp: tuple[str, ...], max_iter: int) -> np.ndarray:
    """Positive eigenvector of A_C for its spectral radius, 1-normalized."""
    n = len(comp)
    if n == 1:
        return np.ones(1)
    pos = {v: i for i, v in enumerate(comp)}
    shifted = np.eye(n)
    for v in comp:
        for w, k in g.out_edges(v):
            if w in pos:
                shifted[pos[v], pos[w]] += k
    x = np.ones(n) / n
    for _ in range(max_iter):
        y = shifted @ x
        y /= y.sum()
        if np.max(np.abs(y - x)) < 1e-15:
            return y
        x = y
    raise ConvergenceError(f"Perron vector for component {comp} did not converge")


def harmonic_vector_for_component(
    g: DirectedMultigraph,
    component: tuple[str, ...],
    report: SccReport | None = None,
    tol: float = RADIUS_TOL,
    max_iter: int = MAX_POWER_ITER,
) -> HarmonicVector:
    """Normalized harmonic vector supported on the vertices reaching ``component``.

    Built at beta = log rho(A_C): the Perron eigenvector on C, extended
    upwards by block back-substitution in condensation topological order.
    Each block solve (e^beta I - A_K) x = b is well posed because every
    component above a minimal one has strictly smaller radius; a near-tie
    would poison the conditioning, so it is an error.
    """
    if report is None:
        report = scc_decomposition(g)
    comp_index = report.component_of(component[0])
    comp = report.components[comp_index]
    if tuple(component) != comp.vertices:
        raise ValueError(f"{component!r} is not a strongly connected component")
    if comp_index not in minimal_components(g, report, tol):
        raise NearTieError(
            f"component {comp.vertices} is not minimal at tolerance {tol!r}; "
            "the extension system is not guaranteed solvable"
        )
    rho = comp.radius
    beta = math.log(rho)

    chi: dict[str, float] = {v: 0.0 for v in g.vertices}
    perron = _perron_vector(g, comp.vertices, max_iter)
    for v, x in zip(comp.vertices, perron):
        chi[v] = float(x)

    # components strictly above C, processed so that everything a block feeds
    # on is already solved (reverse topological order toward C)
    above = [
        i
        for i in range(len(report.components))
        if i != comp_index and comp_index in report.reachable[i]
    ]
    above.sort(key=lambda i: len(report.reachable[i]))
    solved = set(comp.vertices)
    for i in above:
        block = report.components[i]
        if radii_close(block.radius, rho, tol) or block.radius > rho:
            raise NearTieError(
                f"component {block.vertices} above {comp.vertices} has radius "
                f"{block.radius!r} not strictly below {rho!r}"
            )
        verts = block.vertices
        pos = {v: j for j, v in enumerate(verts)}
        n = len(verts)
        system = rho * np.eye(n)
        rhs = np.zeros(n)
        for v in verts:
            for w, k in g.out_edges(v):
                if w in pos:
                    system[pos[v], pos[w]] -= k
                elif w in solved:
                    rhs[pos[v]] += k * chi[w]
        x = np.linalg.solve(system, rhs)
        if np.min(x) < -1e-12:
            raise ConvergenceError(
                f"harmonic extension produced a negative entry on {verts}"
            )
        for v, val in zip(verts, x):
            chi[v] = max(float(val), 0.0)
        solved.update(verts)

    total = math.fsum(chi.values())
    chi = {v: x / total for v, x in chi.items()}
    residual = _harmonic_residual(g, beta, chi)
    if residual >= HARMONIC_RESIDUAL_TOL:
        raise ConvergenceError(
            f"harmonic vector residual {residual!r} exceeds {HARMONIC_RESIDUAL_TOL}"
        )
    return HarmonicVector(beta, chi, True, residual)


def _harmonic_residual(g: DirectedMultigraph, beta: float, chi: dict[str, float]) -> float:
    scale = math.exp(beta)
    worst = 0.0
    for v in g.vertices:
        acc = math.fsum(k * chi[w] for w, k in g.out_edges(v))
        worst = max(worst, abs(acc - scale * chi[v]))
    return worst


def classify_kms(
    g: DirectedMultigraph,
    beta: float,
    report: SccReport | None = None,
    tol: float = RADIUS_TOL,
    series_tol: float = 1e-12,
    max_iter: int = MAX_POWER_ITER,
) -> KmsClassification:
    """Full classification at inverse temperature ``beta`` > 0.

    Type I states come from vertices with beta_v strictly below beta, each
    carrying its partition value.  Type III states appear exactly when beta
    coincides with the critical value of a minimal component; all matching
    components are reported as extreme points.
    """
    if beta <= 0:
        raise ValueError("beta must be positive; traces and ground states are separate")
    if report is None:
        report = scc_decomposition(g)

    type_one: list[tuple[str, float]] = []
    at_criticality: list[tuple[str, ...]] = []
    for v in g.vertices:
        crit = critical_temperature(g, v, report, tol)
        if crit.value == NEG_INF:
            value = partition_value(g, v, beta, series_tol, report, tol)
            type_one.append((v, value.value))
            continue
        band = tol * max(1.0, abs(beta), abs(crit.value)) + crit.tolerance
        if abs(beta - crit.value) <= band:
            if crit.witness not in at_criticality:
                at_criticality.append(crit.witness)
            continue
        if beta > crit.value:
            value = partition_value(g, v, beta, series_tol, report, tol)
            type_one.append((v, value.value))

    type_three: list[TypeIIIState] = []
    for i in minimal_components(g, report, tol):
        comp = report.components[i]
        beta_c = math.log(comp.radius)
        band = tol * max(1.0, abs(beta), abs(beta_c)) + comp.radius_error / comp.radius
        if abs(beta - beta_c) <= band:
            chi = harmonic_vector_for_component(g, comp.vertices, report, tol, max_iter)
            lam = comp.radius ** (-comp.period)
            type_three.append(TypeIIIState(comp.vertices, lam, comp.period, chi))

    log_rho = graph_log_radius(report)
    all_type_one = beta > log_rho + tol * max(1.0, abs(beta), abs(log_rho))

    return KmsClassification(
        beta=beta,
        type_I=tuple(type_one),
        type_III=tuple(type_three),
        all_type_I=all_type_one,
        at_criticality=tuple(at_criticality),
    )


@dataclass(frozen=True)
class GroundState:
    """One ground state per vertex, identified by its eigenspace-dimension
    fingerprint: the exact counts of paths from each source into the vertex."""

    vertex: str
    depth: int
    rows: dict[str, tuple[int, ...]]


def ground_states(g: DirectedMultigraph, depth: int | None = None) -> list[GroundState]:
    """Fingerprint rows (|wE^n v|) for every vertex; depth defaults to 2|V|."""
    if depth is None:
        depth = 2 * g.vertex_count
    states = []
    for v in g.vertices:
        table = path_counts(g, v, depth)
        rows = {
            w: tuple(table.count(w, n) for n in range(depth + 1)) for w in g.vertices
        }
        states.append(GroundState(v, depth, rows))
    return states


def negative_beta_summable_vertices(
    g: DirectedMultigraph, report: SccReport | None = None
) -> set[str]:
    """Vertices with finitely many incoming paths: no cycle reaches them.

    These are exactly the vertices whose weighted path sums converge for
    negative inverse temperatures; their equilibrium data is finite
    dimensional.
    """
    if report is None:
        report = scc_decomposition(g)
    out = set()
    for v in g.vertices:
        if all(
            not report.components[i].has_cycle for i in report.components_reaching(v)
        ):
            out.add(v)
    return out


def cylinder_mass_estimate(
    g: DirectedMultigraph, beta: float, depth: int
) -> dict[str, float]:
    """Renormalized deep row sums e^(-beta k) * |vE^k| as a vertex weighting.

    On a strongly connected graph at its critical value this converges to the
    harmonic vector, which makes it an independent desk-scale estimate of the
    cylinder masses of the associated conformal measure.
    """
    weights = {v: 1.0 for v in g.vertices}
    scale = math.exp(-beta)
    for _ in range(depth):
        nxt = {}
        for v in g.vertices:
            nxt[v] = scale * math.fsum(k * weights[w] for w, k in g.out_edges(v))
        total = math.fsum(nxt.values())
        if total == 0.0:
            return {v: 0.0 for v in g.vertices}
        weights = {v: x / total for v, x in nxt.items()}
    return weights
