"""Productivity distributions and reweighted labor pools.

Every sub-market in the hiring/firing models is the entry distribution
N(theta) scaled by a piecewise-constant weight function: firing at a
threshold keeps the part above it, random quitting moves a slice of mass
mu across, and repeated rounds multiply those factors together.  A
:class:`LaborPool` stores exactly that — a base distribution plus an
ordered list of (interval, multiplier) pieces partitioning the support.

Conventions
-----------
* A split at threshold ``t`` sends everything strictly below ``t`` out at
  full weight; mass at or above ``t`` splits ``mu`` (leaves) versus
  ``1 - mu`` (stays).  For continuous bases the boundary carries no mass;
  for discrete bases an atom sitting exactly at ``t`` follows the
  at-or-above rule.
* Thresholds outside the support are clamped to the nearest endpoint.
* Moments of uniform and discrete bases are closed-form.  Piecewise-linear
  densities are integrated by adaptive Simpson with every density
  breakpoint and weight cut as a panel boundary, which makes the panels
  polynomial and the quadrature effectively exact.

All values are immutable; operations return new pools.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyPoolError, InvalidThresholdError
from .quadrature import adaptive_simpson

__all__ = [
    "ProductivityDistribution",
    "LaborPool",
    "uniform",
    "discrete",
    "piecewise_linear",
    "pool_mass",
    "pool_mean",
    "truncated_mean",
    "firing_split",
    "m_operator",
    "pool_inf",
    "pool_sup",
    "quantile",
    "sample_productivities",
]

_QUAD_TOL = 1e-10


# =====================================================================
# Base distributions
# =====================================================================

@dataclass(frozen=True)
class ProductivityDistribution:
    """Base worker-productivity measure N(theta) on [support_low, support_high].

    kind is one of ``"uniform"`` (constant density `level`), ``"discrete"``
    (point masses `atoms` as (theta, count) pairs) or ``"piecewise"``
    (density linear between the (theta, density) `nodes`).  The measure is
    a head count, not a probability: total mass may be any positive real.
    """

    kind: str
    support_low: float
    support_high: float
    level: float = 1.0
    atoms: tuple[tuple[float, float], ...] = ()
    nodes: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in ("uniform", "discrete", "piecewise"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind != "discrete" and not self.support_low < self.support_high:
            raise ValueError("support must have positive width")

    # -- density integrals over [a, b] for the continuous kinds ---------

    def _segment_density(self, x0, d0, x1, d1):
        slope = (d1 - d0) / (x1 - x0)
        return lambda t: d0 + slope * (t - x0)

    def mass_between(self, a: float, b: float) -> float:
        """Integral of N(theta) over [a, b] (continuous kinds only)."""
        a = max(a, self.support_low)
        b = min(b, self.support_high)
        if b <= a:
            return 0.0
        if self.kind == "uniform":
            return self.level * (b - a)
        total = 0.0
        for (x0, d0), (x1, d1) in zip(self.nodes, self.nodes[1:]):
            lo, hi = max(a, x0), min(b, x1)
            if hi <= lo:
                continue
            total += adaptive_simpson(self._segment_density(x0, d0, x1, d1),
                                      lo, hi, tol=_QUAD_TOL)
        return total

    def first_moment_between(self, a: float, b: float) -> float:
        """Integral of theta * N(theta) over [a, b] (continuous kinds only)."""
        a = max(a, self.support_low)
        b = min(b, self.support_high)
        if b <= a:
            return 0.0
        if self.kind == "uniform":
            return self.level * (b - a) * (b + a) / 2.0
        total = 0.0
        for (x0, d0), (x1, d1) in zip(self.nodes, self.nodes[1:]):
            lo, hi = max(a, x0), min(b, x1)
            if hi <= lo:
                continue
            dens = self._segment_density(x0, d0, x1, d1)
            total += adaptive_simpson(lambda t: t * dens(t), lo, hi, tol=_QUAD_TOL)
        return total

    # -- whole-measure summaries ----------------------------------------

    def total_mass(self) -> float:
        if self.kind == "discrete":
            return float(sum(c for _, c in self.atoms))
        return self.mass_between(self.support_low, self.support_high)

    def mean(self) -> float:
        n = self.total_mass()
        if n <= 0.0:
            raise EmptyPoolError("distribution carries no mass")
        if self.kind == "discrete":
            return sum(t * c for t, c in self.atoms) / n
        return self.first_moment_between(self.support_low, self.support_high) / n

    def cdf(self, x: float) -> float:
        """Mass at or below x."""
        if self.kind == "discrete":
            return float(sum(c for t, c in self.atoms if t <= x))
        return self.mass_between(self.support_low, x)


def uniform(low: float, high: float, level: float = 1.0) -> ProductivityDistribution:
    """Uniform base: constant density `level` on [low, high]."""
    if not low < high:
        raise ValueError("uniform support needs low < high")
    if not level > 0.0:
        raise ValueError("density level must be positive")
    return ProductivityDistribution("uniform", float(low), float(high), level=float(level))


def discrete(atoms) -> ProductivityDistribution:
    """Discrete base from (theta, count) pairs; duplicate thetas are merged."""
    merged: dict[float, float] = {}
    for theta, count in atoms:
        theta, count = float(theta), float(count)
        if count < 0.0:
            raise ValueError("atom counts must be nonnegative")
        merged[theta] = merged.get(theta, 0.0) + count
    cleaned = tuple(sorted((t, c) for t, c in merged.items() if c > 0.0))
    if not cleaned:
        raise ValueError("discrete distribution needs at least one atom with positive count")
    return ProductivityDistribution(
        "discrete", cleaned[0][0], cleaned[-1][0], atoms=cleaned)


def piecewise_linear(nodes) -> ProductivityDistribution:
    """Piecewise-linear density through (theta, density) breakpoints."""
    pts = tuple((float(t), float(d)) for t, d in nodes)
    if len(pts) < 2:
        raise ValueError("piecewise density needs at least two breakpoints")
    for (t0, _), (t1, _) in zip(pts, pts[1:]):
        if not t1 > t0:
            raise ValueError("breakpoints must be strictly increasing")
    if any(d < 0.0 for _, d in pts):
        raise ValueError("densities must be nonnegative")
    dist = ProductivityDistribution("piecewise", pts[0][0], pts[-1][0], nodes=pts)
    if dist.total_mass() <= 0.0:
        raise ValueError("piecewise density carries no mass")
    return dist


# =====================================================================
# Pools: base distribution x piecewise-constant weights
# =====================================================================

@dataclass(frozen=True)
class LaborPool:
    """A base distribution rescaled by interval multipliers.

    `pieces` is an ordered tuple of (lo, hi, multiplier) covering the base
    support contiguously.  Intervals are half-open [lo, hi) except the last,
    which is closed so the top of the support belongs to it.
    """

    base: ProductivityDistribution
    pieces: tuple[tuple[float, float, float], ...] = field(default=())

    def __post_init__(self):
        if not self.pieces:
            object.__setattr__(self, "pieces",
                               ((self.base.support_low, self.base.support_high, 1.0),))
        ps = self.pieces
        if ps[0][0] != self.base.support_low or ps[-1][1] != self.base.support_high:
            raise ValueError("pieces must cover the full support")
        for (_, h0, _), (l1, _, _) in zip(ps, ps[1:]):
            if h0 != l1:
                raise ValueError("pieces must be contiguous")
        for lo, hi, w in ps:
            if hi < lo:
                raise ValueError("piece with negative width")
            if not (w >= 0.0):
                raise ValueError("multipliers must be nonnegative")

    @staticmethod
    def entry(dist: ProductivityDistribution) -> "LaborPool":
        """The whole distribution at weight one (the hiring pool at entry)."""
        return LaborPool(dist)

    def weight_at(self, theta: float) -> float:
        """Multiplier applied at productivity theta.

        Pieces are half-open on the right except the last; a degenerate
        piece created by cutting at the top of the support is the last
        piece and therefore catches the boundary atom.
        """
        for lo, hi, w in self.pieces[:-1]:
            if lo <= theta < hi:
                return w
        lo, hi, w = self.pieces[-1]
        if lo <= theta <= hi:
            return w
        return 0.0

    def _rescaled(self, cut: float, low_factor: float, high_factor: float) -> "LaborPool":
        """Scale weights by `low_factor` strictly below `cut`, `high_factor` at or above."""
        out = []
        for lo, hi, w in self.pieces:
            if lo >= cut:
                out.append((lo, hi, w * high_factor))
            elif hi <= cut:
                out.append((lo, hi, w * low_factor))
            else:
                out.append((lo, cut, w * low_factor))
                out.append((cut, hi, w * high_factor))
        return LaborPool(self.base, tuple(out))


def _moments(pool: LaborPool) -> tuple[float, float]:
    """(mass, first moment) of the whole pool."""
    base = pool.base
    if base.kind == "discrete":
        n = sum(c * pool.weight_at(t) for t, c in base.atoms)
        m1 = sum(t * c * pool.weight_at(t) for t, c in base.atoms)
        return n, m1
    n = m1 = 0.0
    for lo, hi, w in pool.pieces:
        if w > 0.0 and hi > lo:
            n += w * base.mass_between(lo, hi)
            m1 += w * base.first_moment_between(lo, hi)
    return n, m1


def _restricted_moments(pool: LaborPool, a: float, b: float) -> tuple[float, float]:
    """(mass, first moment) over the window [a, b].

    Discrete atoms at either endpoint are included (closed interval); for
    continuous bases the endpoints carry no mass either way.
    """
    base = pool.base
    a = max(a, base.support_low)
    b = min(b, base.support_high)
    if base.kind == "discrete":
        n = m1 = 0.0
        for t, c in base.atoms:
            if a <= t <= b:
                wgt = c * pool.weight_at(t)
                n += wgt
                m1 += t * wgt
        return n, m1
    if b <= a:
        return 0.0, 0.0
    n = m1 = 0.0
    for lo, hi, w in pool.pieces:
        clo, chi = max(lo, a), min(hi, b)
        if w > 0.0 and chi > clo:
            n += w * base.mass_between(clo, chi)
            m1 += w * base.first_moment_between(clo, chi)
    return n, m1


def pool_mass(pool: LaborPool) -> float:
    """Total worker mass in the pool."""
    return _moments(pool)[0]


def pool_mean(pool: LaborPool) -> float:
    """Average productivity of the pool; EmptyPoolError on zero mass."""
    n, m1 = _moments(pool)
    if n <= 0.0:
        raise EmptyPoolError("pool has no workers")
    return m1 / n


def truncated_mean(pool: LaborPool, a: float, b: float) -> float:
    """Mean productivity over the window [a, b].

    The window must sit inside the support.  Discrete atoms exactly at a
    or b are included.
    """
    lo_s, hi_s = pool.base.support_low, pool.base.support_high
    window_ok = lo_s <= a < b <= hi_s or (pool.base.kind == "discrete" and lo_s <= a <= b <= hi_s)
    if not window_ok:
        raise ValueError(f"truncation window [{a}, {b}] must sit inside [{lo_s}, {hi_s}]")
    n, m1 = _restricted_moments(pool, a, b)
    if n <= 0.0:
        raise EmptyPoolError(f"no worker mass on [{a}, {b}]")
    return m1 / n


def firing_split(pool: LaborPool, threshold: float, mu: float) -> tuple[LaborPool, LaborPool]:
    """Split a pool at an end-of-period review.

    Workers strictly below `threshold` all leave; workers at or above it
    leave with probability `mu` and stay with probability ``1 - mu``.
    Returns ``(leavers, stayers)``; their masses sum to the original.
    Thresholds outside the support are clamped to its endpoints.
    """
    _check_mu(mu)
    if not np.isfinite(threshold):
        raise InvalidThresholdError(f"threshold {threshold!r} is not a finite real")
    t = min(max(threshold, pool.base.support_low), pool.base.support_high)
    leavers = pool._rescaled(t, 1.0, mu)
    stayers = pool._rescaled(t, 0.0, 1.0 - mu)
    return leavers, stayers


def m_operator(pool: LaborPool, w: float, mu: float) -> float:
    """Average productivity of the leavers when the review wage is `w`.

    Everyone strictly below `w` leaves, everyone at or above leaves with
    probability `mu`; the result is the mean of that mixture.  At or above
    the top of the support the whole pool turns over, so the value is the
    pool mean (the same limit the split gives from the left for continuous
    bases, and the sensible reading for a top atom).
    """
    _check_mu(mu)
    n_all, m1_all = _moments(pool)
    if n_all <= 0.0:
        raise EmptyPoolError("pool has no workers")
    if w >= pool.base.support_high:
        return m1_all / n_all
    leavers, _ = firing_split(pool, w, mu)
    n, m1 = _moments(leavers)
    if n <= 0.0:
        raise EmptyPoolError(f"no one leaves at wage {w} with mu={mu}")
    return m1 / n


def pool_inf(pool: LaborPool) -> float:
    """Lowest productivity carrying positive weight."""
    base = pool.base
    if base.kind == "discrete":
        for t, c in base.atoms:
            if c * pool.weight_at(t) > 0.0:
                return t
        raise EmptyPoolError("pool has no workers")
    for lo, hi, w in pool.pieces:
        if w > 0.0 and base.mass_between(lo, hi) > 0.0:
            return lo
    raise EmptyPoolError("pool has no workers")


def pool_sup(pool: LaborPool) -> float:
    """Highest productivity carrying positive weight."""
    base = pool.base
    if base.kind == "discrete":
        for t, c in reversed(base.atoms):
            if c * pool.weight_at(t) > 0.0:
                return t
        raise EmptyPoolError("pool has no workers")
    for lo, hi, w in reversed(pool.pieces):
        if w > 0.0 and base.mass_between(lo, hi) > 0.0:
            return hi
    raise EmptyPoolError("pool has no workers")


def _check_mu(mu: float) -> None:
    if not (0.0 <= mu <= 1.0):
        raise ValueError(f"quit probability mu={mu} must lie in [0, 1]")


# =====================================================================
# Sampling support (inverse CDF), used by the Monte Carlo simulator
# =====================================================================

def quantile(dist: ProductivityDistribution, q: float) -> float:
    """Inverse CDF at mass fraction q in [0, 1]."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    return float(sample_productivities(dist, np.asarray([q]))[0])


def sample_productivities(dist: ProductivityDistribution, u: np.ndarray) -> np.ndarray:
    """Map uniform draws u in [0, 1) to productivities by inverse CDF."""
    u = np.asarray(u, dtype=np.float64)
    total = dist.total_mass()
    if dist.kind == "uniform":
        return dist.support_low + u * (dist.support_high - dist.support_low)
    if dist.kind == "discrete":
        thetas = np.array([t for t, _ in dist.atoms])
        cum = np.cumsum([c for _, c in dist.atoms]) / total
        idx = np.searchsorted(cum, u, side="right")
        idx = np.minimum(idx, len(thetas) - 1)
        return thetas[idx]
    # piecewise: invert the per-segment quadratic CDF
    xs = np.array([t for t, _ in dist.nodes])
    ds = np.array([d for _, d in dist.nodes])
    seg_mass = np.array([dist.mass_between(x0, x1) for x0, x1 in zip(xs, xs[1:])])
    cum = np.concatenate([[0.0], np.cumsum(seg_mass)])
    target = u * total
    idx = np.searchsorted(cum, target, side="right") - 1
    idx = np.clip(idx, 0, len(seg_mass) - 1)
    x0, x1 = xs[idx], xs[idx + 1]
    d0, d1 = ds[idx], ds[idx + 1]
    h = x1 - x0
    rem = target - cum[idx]
    a = (d1 - d0) / (2.0 * h)
    # Solve a s^2 + d0 s = rem for the offset s in [0, h].
    with np.errstate(divide="ignore", invalid="ignore"):
        disc = np.sqrt(np.maximum(d0 * d0 + 4.0 * a * rem, 0.0))
        s_quad = np.where(a != 0.0, (disc - d0) / np.where(a != 0.0, 2.0 * a, 1.0), 0.0)
        s_lin = np.where(d0 > 0.0, rem / np.where(d0 > 0.0, d0, 1.0), 0.0)
    s = np.where(np.abs(a) < 1e-14, s_lin, s_quad)
    return x0 + np.clip(s, 0.0, h)
