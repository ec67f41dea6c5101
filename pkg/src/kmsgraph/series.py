"""Partition functions: rigorous numeric evaluation and exact closed forms.

The fixed-target generating function of a vertex is a rational function
p(t)/q(t) with integer coefficients, obtained from the resolvent of t*A by
fraction-free (Bareiss) elimination over the polynomial ring Z[t].  Numeric
values carry an explicit geometric tail bound driven by the spectral radius
estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AtCriticalityError, ConvergenceError
from .graph import DirectedMultigraph, path_counts
from .spectral import (
    NEG_INF,
    RADIUS_TOL,
    SccReport,
    critical_temperature,
    graph_log_radius,
    radii_close,
    scc_decomposition,
)

# ---------------------------------------------------------------------------
# Integer polynomials, ascending coefficient lists.
# ---------------------------------------------------------------------------


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _is_zero(p: list[int]) -> bool:
    return not p


def _add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _sub(a: list[int], b: list[int]) -> list[int]:
    return _add(a, [-c for c in b])


def _mul(a: list[int], b: list[int]) -> list[int]:
    if _is_zero(a) or _is_zero(b):
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim(out)


def _div_exact(a: list[int], b: list[int]) -> list[int]:
    """Quotient a/b when the division is exact in Z[t]."""
    if _is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    if _is_zero(a):
        return []
    rem = [Fraction(c) for c in a]
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = Fraction(b[-1])
    for k in range(len(a) - len(b), -1, -1):
        coeff = rem[k + len(b) - 1] / lead
        quot[k] = coeff
        if coeff:
            for j, cb in enumerate(b):
                rem[k + j] -= coeff * cb
    if any(rem) or any(c.denominator != 1 for c in quot):
        raise ArithmeticError("polynomial division was not exact")
    return _trim([int(c) for c in quot])


def _content(p: list[int]) -> int:
    c = 0
    for coeff in p:
        c = math.gcd(c, abs(coeff))
    return c


def _primitive(p: list[int]) -> list[int]:
    c = _content(p)
    if c == 0:
        return []
    out = [coeff // c for coeff in p]
    if out[-1] < 0:
        out = [-coeff for coeff in out]
    return out


def _gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd with positive leading coefficient (Euclid over Q)."""
    a = _primitive(_trim(list(a)))
    b = _primitive(_trim(list(b)))
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    fa = [Fraction(c) for c in a]
    fb = [Fraction(c) for c in b]
    while fb:
        # remainder of fa by fb
        rem = fa[:]
        lead = fb[-1]
        for k in range(len(rem) - len(fb), -1, -1):
            coeff = rem[k + len(fb) - 1] / lead
            if coeff:
                for j, cb in enumerate(fb):
                    rem[k + j] -= coeff * cb
        while rem and rem[-1] == 0:
            rem.pop()
        fa, fb = fb, rem
    denom = math.lcm(*(c.denominator for c in fa)) if fa else 1
    return _primitive([int(c * denom) for c in fa])


def _bareiss_det(matrix: list[list[list[int]]]) -> list[int]:
    """Determinant of a matrix of integer polynomials, fraction-free.

    One-step Bareiss: every interior division is exact in Z[t] by the
    Sylvester identity, so coefficients never leave the integers.
    """
    n = len(matrix)
    m = [[list(entry) for entry in row] for row in matrix]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            pivot_row = next((r for r in range(k + 1, n) if not _is_zero(m[r][k])), None)
            if pivot_row is None:
                return []
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _div_exact(
                    _sub(_mul(m[i][j], m[k][k]), _mul(m[i][k], m[k][j])), prev
                )
            m[i][k] = []
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else [-c for c in det]


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """Reduced p(t)/q(t) with integer coefficients, ascending, q(0) = 1."""

    num: tuple[int, ...]
    den: tuple[int, ...]

    @staticmethod
    def normalized(num, den) -> "RationalFunction":
        num = _trim(list(num))
        den = _trim(list(den))
        if _is_zero(den):
            raise ZeroDivisionError("rational function with zero denominator")
        if _is_zero(num):
            return RationalFunction((0,), (1,))
        g = _gcd(num, den)
        if len(g) > 1 or g[0] != 1:
            num = _div_exact(num, g)
            den = _div_exact(den, g)
        content = math.gcd(_content(num), _content(den))
        if content > 1:
            num = [c // content for c in num]
            den = [c // content for c in den]
        if den[0] == -1:
            num = [-c for c in num]
            den = [-c for c in den]
        if den[0] != 1:
            raise ArithmeticError(
                f"denominator constant term {den[0]} cannot be scaled to 1 over Z"
            )
        return RationalFunction(tuple(num), tuple(den))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        num = _add(_mul(list(self.num), list(other.den)), _mul(list(other.num), list(self.den)))
        den = _mul(list(self.den), list(other.den))
        return RationalFunction.normalized(num, den)

    def taylor(self, depth: int) -> list[int]:
        """First depth+1 series coefficients at t = 0 (exact, q(0) = 1)."""
        coeffs = []
        for n in range(depth + 1):
            c = self.num[n] if n < len(self.num) else 0
            for k in range(1, min(n, len(self.den) - 1) + 1):
                c -= self.den[k] * coeffs[n - k]
            coeffs.append(c)
        return coeffs

    def evaluate(self, t: float) -> float:
        return _horner(self.num, t) / _horner(self.den, t)

    def evaluate_exact(self, t: Fraction) -> Fraction:
        num = sum(Fraction(c) * t**i for i, c in enumerate(self.num))
        den = sum(Fraction(c) * t**i for i, c in enumerate(self.den))
        return num / den

    def to_payload(self) -> dict:
        return {"num": [str(c) for c in self.num], "den": [str(c) for c in self.den]}

    @staticmethod
    def from_payload(payload: dict) -> "RationalFunction":
        return RationalFunction.normalized(
            [int(c) for c in payload["num"]], [int(c) for c in payload["den"]]
        )


def _horner(coeffs, t: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def closed_forms(g: DirectedMultigraph) -> dict[str, RationalFunction]:
    """Exact fixed-target generating functions for every vertex at once.

    Solves (I - t*A)^T z = 1 by Cramer's rule with Bareiss determinants; the
    v entry of z is the generating function of path counts into v.  Each
    result is self-checked against path counts to depth 2n before returning.
    """
    n = g.vertex_count
    rows = g.adjacency_rows()
    matrix: list[list[list[int]]] = [
        [
            _trim([1 if i == j else 0, -rows[j][i]])
            for j in range(n)
        ]
        for i in range(n)
    ]
    determinant = _bareiss_det(matrix)

    result: dict[str, RationalFunction] = {}
    for col, v in enumerate(g.vertices):
        replaced = [
            [([1] if j == col else matrix[i][j]) for j in range(n)]
            for i in range(n)
        ]
        numerator = _bareiss_det(replaced)
        rf = RationalFunction.normalized(numerator, determinant)
        expected = path_counts(g, v, 2 * n).totals
        if rf.taylor(2 * n) != list(expected):
            raise ArithmeticError(f"closed form for {v!r} disagrees with path counts")
        result[v] = rf
    return result


def partition_closed_form(g: DirectedMultigraph, v: str) -> RationalFunction:
    """Exact closed form of the fixed-target partition function of ``v``."""
    g.index_of(v)
    return closed_forms(g)[v]


def generating_function(g: DirectedMultigraph) -> RationalFunction:
    """Generating function of total path counts: the sum over all vertices."""
    total = RationalFunction((0,), (1,))
    for rf in closed_forms(g).values():
        total = total + rf
    return total


# ---------------------------------------------------------------------------
# Numeric evaluation with tail bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesValue:
    """Numeric partition-function value.

    ``value`` is None when the series diverges; otherwise the partial sum is
    within ``tail_bound`` of the true sum.
    """

    value: float | None
    partial_sum: float
    tail_bound: float
    terms_used: int

    @property
    def diverges(self) -> bool:
        return self.value is None


_WINDOW = 10
_MAX_TERMS = 100_000


def partition_value(
    g: DirectedMultigraph,
    v: str,
    beta: float,
    tol: float = 1e-12,
    report: SccReport | None = None,
    radius_tol: float = RADIUS_TOL,
    force: bool = False,
    force_terms: int = 200,
) -> SeriesValue:
    """Sum the partition series of ``v`` at inverse temperature ``beta``.

    Divergence is decided against the critical inverse temperature from the
    spectral module.  Inside the near-tie band of that critical value the sum
    cannot be trusted either way: the call raises unless ``force`` is given,
    in which case only a partial sum is reported, flagged as divergent.
    """
    if report is None:
        report = scc_decomposition(g)
    crit = critical_temperature(g, v, report, radius_tol)

    if crit.value > NEG_INF:
        band = radius_tol * max(1.0, abs(beta), abs(crit.value)) + crit.tolerance
        if abs(beta - crit.value) <= band:
            if not force:
                raise AtCriticalityError(
                    f"beta={beta!r} lies within the tolerance band of the critical "
                    f"value {crit.value!r} of vertex {v!r}",
                    components=(crit.witness,) if crit.witness else (),
                )
            partial = _partial_sum(g, v, beta, force_terms)
            return SeriesValue(None, partial, math.inf, force_terms)
        if beta < crit.value:
            return SeriesValue(None, 0.0, math.inf, 0)

    if crit.value == NEG_INF:
        # finitely many paths end at v; the sum is exact
        total = 0.0
        n = 0
        table = path_counts(g, v, g.vertex_count)
        for n, count in enumerate(table.totals):
            if count == 0 and n > 0:
                break
            total += count * math.exp(-beta * n)
        return SeriesValue(total, total, 0.0, n)

    rho = math.exp(crit.value)
    rho_wide = rho + max(crit.tolerance * rho, radius_tol * max(1.0, rho))
    log_q = math.log(rho_wide) - beta
    # near-tied maximal components reaching v bound the polynomial factor that
    # can multiply rho^n in the counts; each tie widens the tail by 1/(1-q)
    ties = 0
    target = report.component_of(v)
    for i, comp in enumerate(report.components):
        if comp.has_cycle and target in report.reachable[i] and radii_close(comp.radius, rho, radius_tol):
            ties += 1
    ties = max(ties, 1)
    log_one_minus_q = math.log1p(-math.exp(log_q))

    total = 0.0
    window: list[float] = []
    current = {v: 1}
    n = 0
    while True:
        count = sum(current.values())
        if count:
            log_count = math.log(count)
            total += math.exp(log_count - beta * n)
            window.append(log_count - n * math.log(rho_wide))
        else:
            window.append(NEG_INF)
        if len(window) > _WINDOW:
            window.pop(0)
        log_tail = max(window) + (n + 1) * log_q - (ties + 1) * log_one_minus_q
        tail = math.exp(log_tail) if log_tail < 700 else math.inf
        if n >= 2 * g.vertex_count and tail < tol:
            return SeriesValue(total, total, tail, n + 1)
        if n >= _MAX_TERMS:
            raise ConvergenceError(
                f"series for {v!r} at beta={beta!r} did not reach tolerance {tol!r} "
                f"within {_MAX_TERMS} terms (tail bound {tail!r})"
            )
        nxt: dict[str, int] = {}
        for u, c in current.items():
            for w, k in g.in_edges(u):
                nxt[w] = nxt.get(w, 0) + k * c
        current = nxt
        n += 1


def _partial_sum(g: DirectedMultigraph, v: str, beta: float, terms: int) -> float:
    table = path_counts(g, v, terms - 1)
    return math.fsum(
        math.exp(math.log(c) - beta * n) for n, c in enumerate(table.totals) if c
    )


def uniform_sup(
    g: DirectedMultigraph,
    beta: float,
    tol: float = 1e-12,
    report: SccReport | None = None,
    radius_tol: float = RADIUS_TOL,
) -> float:
    """sup over vertices of the partition value; inf when beta <= log rho(A_E).

    The tolerance band around log rho(A_E) resolves to the divergent side:
    at equality the supremum genuinely diverges, and inside the band the
    finite side is at best unrepresentably large.
    """
    if report is None:
        report = scc_decomposition(g)
    log_rho = graph_log_radius(report)
    if log_rho > NEG_INF:
        band = radius_tol * max(1.0, abs(beta), abs(log_rho))
        if beta <= log_rho + band:
            return math.inf
    return max(
        partition_value(g, v, beta, tol, report, radius_tol).value for v in g.vertices
    )
