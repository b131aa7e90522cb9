"""Scan-and-bisect root finding shared by the equilibrium solvers.

The wage fixed points in this package are roots of well-behaved scalar
functions on known intervals, but there can be more than one of them and
the economically selected equilibrium is the largest.  So the strategy is
always: evaluate on a grid, collect every sign change plus every grid
point that is already a root, bisect each bracket, and let the caller pick
from the sorted root list.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyPoolError, NoConvergenceError
from .pools import LaborPool, _moments, firing_split, pool_inf, pool_mean

__all__ = ["SolverOptions", "bisect_root", "scan_roots", "m_extended", "m_fixed_points"]


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and budgets for the iterative solvers.

    tol is the absolute residual target, max_iter the bisection budget per
    bracket, scan_points the grid resolution used to hunt for brackets,
    and damping the step factor of the damped-iteration paths.
    """

    tol: float = 1e-10
    max_iter: int = 200
    scan_points: int = 1024
    damping: float = 0.5

    def __post_init__(self):
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.scan_points < 2:
            raise ValueError("scan_points must be at least 2")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")


DEFAULT_OPTIONS = SolverOptions()


def bisect_root(g, a: float, b: float, ga: float, gb: float,
                opts: SolverOptions = DEFAULT_OPTIONS) -> float:
    """Bisect a sign-change bracket [a, b] down to a root of g.

    Stops when the residual is within opts.tol or the interval has shrunk
    to floating-point resolution; raises NoConvergenceError if opts.max_iter
    halvings were not enough for either.
    """
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    if (ga > 0.0) == (gb > 0.0):
        raise ValueError("bisect_root needs a sign change")
    lo, hi, glo = a, b, ga
    best_x, best_g = (a, ga) if abs(ga) < abs(gb) else (b, gb)
    for _ in range(opts.max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval at floating-point resolution
            return best_x
        gmid = g(mid)
        if abs(gmid) < abs(best_g):
            best_x, best_g = mid, gmid
        if gmid == 0.0 or abs(gmid) <= opts.tol:
            return mid
        if (gmid > 0.0) == (glo > 0.0):
            lo, glo = mid, gmid
        else:
            hi = mid
    raise NoConvergenceError(
        f"bisection did not reach tol={opts.tol} in {opts.max_iter} steps",
        best={"x": best_x}, residuals={"g": best_g})


def scan_roots(g, lo: float, hi: float, opts: SolverOptions = DEFAULT_OPTIONS) -> list[float]:
    """All roots of g on [lo, hi] found by grid scan plus bracket bisection."""
    if hi < lo:
        raise ValueError("empty scan interval")
    if hi == lo:
        return [lo] if abs(g(lo)) <= opts.tol else []
    n = opts.scan_points
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    gs = [g(x) for x in xs]
    roots: list[float] = []
    for i, (x, gx) in enumerate(zip(xs, gs)):
        if gx == 0.0 or abs(gx) <= opts.tol:
            roots.append(x)
        elif i > 0 and (gs[i - 1] > 0.0) != (gx > 0.0) and abs(gs[i - 1]) > opts.tol:
            roots.append(bisect_root(g, xs[i - 1], x, gs[i - 1], gx, opts))
    # Deduplicate near-identical roots, keeping sorted order.
    scale = max(abs(lo), abs(hi), 1.0)
    out: list[float] = []
    for r in sorted(roots):
        if not out or r - out[-1] > 1e-9 * scale:
            out.append(r)
    return out


def m_extended(pool: LaborPool, w: float, mu: float) -> float:
    """Leaver-pool mean extended by its limits where the pool empties.

    Inside the support this is the plain leaver mean.  When nobody leaves
    (mu = 0 at or below the bottom of the pool) the mean degenerates to
    the pool infimum, which is its limit from the right; at or above the
    top of the support everyone leaves and the value is the pool mean.
    """
    if w >= pool.base.support_high:
        return pool_mean(pool)
    leavers, _ = firing_split(pool, w, mu)
    n, m1 = _moments(leavers)
    if n <= 0.0:
        return pool_inf(pool)
    return m1 / n


def m_fixed_points(pool: LaborPool, mu: float,
                   opts: SolverOptions = DEFAULT_OPTIONS) -> list[float]:
    """Sorted fixed points of w = m_extended(pool, w, mu).

    The scan window is [min(pool_inf, 0), pool_mean]: the leaver mean never
    exceeds the pool mean (leavers over-weight the bottom of the pool), and
    the window is stretched down to zero so review wages below a positive
    support floor are covered.
    """
    mean = pool_mean(pool)
    lo = min(pool_inf(pool), 0.0)
    if mean <= lo:
        return [mean]  # degenerate pool concentrated at a single point
    g = lambda w: w - m_extended(pool, w, mu)
    return scan_roots(g, lo, mean, opts)
