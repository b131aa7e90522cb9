"""Distribution and pool mechanics, checked against brute-force oracles.

The closed-form moment code in ``labormkt.pools`` is the foundation the
rest of the package leans on, so everything here is cross-checked against
an independent midpoint-Riemann integrator (for continuous bases) or
direct atom sums (for discrete ones) before any identity is trusted.
"""

import math

import numpy as np
import pytest

import labormkt as lm
from labormkt import pools
from labormkt.errors import EmptyPoolError
from labormkt.solvers import m_extended


# ---------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------

def riemann_mass(dist, a, b, n=200_001):
    """Midpoint rule for the continuous kinds; deliberately naive."""
    a = max(a, dist.support_low)
    b = min(b, dist.support_high)
    if b <= a:
        return 0.0
    xs = np.linspace(a, b, n)
    mids = 0.5 * (xs[:-1] + xs[1:])
    return float(np.sum(density_of(dist, mids)) * (b - a) / (n - 1))


def riemann_first_moment(dist, a, b, n=200_001):
    a = max(a, dist.support_low)
    b = min(b, dist.support_high)
    if b <= a:
        return 0.0
    xs = np.linspace(a, b, n)
    mids = 0.5 * (xs[:-1] + xs[1:])
    return float(np.sum(mids * density_of(dist, mids)) * (b - a) / (n - 1))


def density_of(dist, x):
    x = np.asarray(x, dtype=float)
    if dist.kind == "uniform":
        return np.full_like(x, dist.level)
    if dist.kind == "piecewise":
        ts = np.array([t for t, _ in dist.nodes])
        ds = np.array([d for _, d in dist.nodes])
        return np.interp(x, ts, ds)
    raise AssertionError("oracle only handles continuous kinds")


UNI = lm.uniform(0.0, 1.0)
UNI_WIDE = lm.uniform(2.0, 5.0, level=0.4)
PW = lm.piecewise_linear([(0.0, 0.2), (0.3, 1.1), (0.7, 0.9), (1.0, 0.1)])
DISC = lm.discrete([(0.2, 1.0), (0.5, 2.0), (0.9, 1.5)])


# ---------------------------------------------------------------------
# Base distribution moments
# ---------------------------------------------------------------------

@pytest.mark.parametrize("dist", [UNI, UNI_WIDE, PW])
@pytest.mark.parametrize("window", [(-1.0, 10.0), (0.1, 0.65), (0.3, 0.3), (0.55, 0.7)])
def test_continuous_moments_match_riemann(dist, window):
    a, b = window
    assert dist.mass_between(a, b) == pytest.approx(riemann_mass(dist, a, b), abs=1e-7)
    assert dist.first_moment_between(a, b) == pytest.approx(
        riemann_first_moment(dist, a, b), abs=1e-7)


def test_totals_and_means():
    assert UNI.total_mass() == pytest.approx(1.0)
    assert UNI.mean() == pytest.approx(0.5)
    assert UNI_WIDE.total_mass() == pytest.approx(0.4 * 3.0)
    assert UNI_WIDE.mean() == pytest.approx(3.5)
    assert DISC.total_mass() == 4.5
    assert DISC.mean() == pytest.approx((0.2 + 1.0 + 1.35) / 4.5)
    assert PW.total_mass() == pytest.approx(riemann_mass(PW, 0, 1), abs=1e-7)


def test_discrete_cdf_steps():
    assert DISC.cdf(0.1) == 0.0
    assert DISC.cdf(0.2) == 1.0          # closed at the atom
    assert DISC.cdf(0.49999) == 1.0
    assert DISC.cdf(0.5) == 3.0
    assert DISC.cdf(2.0) == 4.5


def test_constructor_validation():
    with pytest.raises(ValueError):
        lm.uniform(1.0, 1.0)
    with pytest.raises(ValueError):
        lm.uniform(2.0, 1.0)
    with pytest.raises(ValueError):
        pools.ProductivityDistribution(kind="cauchy", support_low=0, support_high=1)


# ---------------------------------------------------------------------
# Pools: splits, masses, the M operator
# ---------------------------------------------------------------------

@pytest.mark.parametrize("dist", [UNI, UNI_WIDE, PW, DISC])
@pytest.mark.parametrize("mu", [0.0, 0.3, 0.5, 1.0])
def test_firing_split_conserves_mass_and_moment(dist, mu):
    pool = pools.LaborPool.entry(dist)
    lo, hi = pools.pool_inf(pool), pools.pool_sup(pool)
    for frac in (0.0, 0.25, 0.5, 0.9, 1.0):
        t = lo + frac * (hi - lo)
        leave, stay = pools.firing_split(pool, t, mu)
        total = pools.pool_mass(stay) + pools.pool_mass(leave)
        assert total == pytest.approx(pools.pool_mass(pool), abs=1e-12)
        moment = (pools.pool_mass(stay) * pools.pool_mean(stay)
                  if pools.pool_mass(stay) > 0 else 0.0)
        moment += (pools.pool_mass(leave) * pools.pool_mean(leave)
                   if pools.pool_mass(leave) > 0 else 0.0)
        assert moment == pytest.approx(
            pools.pool_mass(pool) * pools.pool_mean(pool), abs=1e-10)


def test_split_sides_against_direct_truncation():
    """Stayers are the (1-mu)-thinned upper part; leavers are lower part
    plus the mu slice."""
    pool = pools.LaborPool.entry(UNI)
    mu, t = 0.4, 0.3
    leave, stay = pools.firing_split(pool, t, mu)
    assert pools.pool_mass(stay) == pytest.approx((1 - mu) * (1 - t), abs=1e-12)
    assert pools.pool_mean(stay) == pytest.approx((1 + t) / 2, abs=1e-12)
    n_leave = t + mu * (1 - t)
    m_leave = t * t / 2 + mu * (1 - t * t) / 2
    assert pools.pool_mass(leave) == pytest.approx(n_leave, abs=1e-12)
    assert pools.pool_mean(leave) == pytest.approx(m_leave / n_leave, abs=1e-12)


def test_atom_at_threshold_follows_at_or_above_rule():
    pool = pools.LaborPool.entry(DISC)
    mu = 0.25
    leave, stay = pools.firing_split(pool, 0.5, mu)
    # atom at 0.5 splits mu/(1-mu); atom at 0.2 leaves outright
    assert pools.pool_mass(stay) == pytest.approx((1 - mu) * (2.0 + 1.5), abs=1e-12)
    assert pools.pool_mass(leave) == pytest.approx(1.0 + mu * 3.5, abs=1e-12)


def test_m_operator_uniform_closed_form():
    pool = pools.LaborPool.entry(UNI)
    for mu in (0.1, 0.5, 0.9):
        for w in (0.05, 0.3, 0.6, 0.95):
            n = w + mu * (1 - w)
            m = w * w / 2 + mu * (1 - w * w) / 2
            assert pools.m_operator(pool, w, mu) == pytest.approx(m / n, abs=1e-12)


def test_m_extended_edges():
    pool = pools.LaborPool.entry(UNI)
    mean = pools.pool_mean(pool)
    # at or above the support top everyone leaves: mean of the whole pool
    assert m_extended(pool, 1.0, 0.5) == pytest.approx(mean)
    assert m_extended(pool, 7.0, 0.5) == pytest.approx(mean)
    # mu = 0 at the bottom: nobody leaves, convention pins the bottom value
    assert m_extended(pool, 0.0, 0.0) == pools.pool_inf(pool)
    # mu > 0 at the bottom: leavers are a thinned copy of the whole pool
    assert m_extended(pool, 0.0, 0.3) == pytest.approx(mean)


def test_truncated_mean_windows():
    pool = pools.LaborPool.entry(UNI)
    assert pools.truncated_mean(pool, 0.2, 0.6) == pytest.approx(0.4, abs=1e-12)
    assert pools.truncated_mean(pool, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)
    pw_pool = pools.LaborPool.entry(PW)
    a, b = 0.25, 0.8
    want = riemann_first_moment(PW, a, b) / riemann_mass(PW, a, b)
    assert pools.truncated_mean(pw_pool, a, b) == pytest.approx(want, abs=1e-6)


def test_empty_pool_errors():
    pool = pools.LaborPool.entry(UNI)
    leave, stay = pools.firing_split(pool, 1.0, 0.0)
    # nobody stays above the top with mu = 0 pulling no slice across
    assert pools.pool_mass(stay) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(EmptyPoolError):
        pools.pool_mean(stay)


def test_mu_validation():
    pool = pools.LaborPool.entry(UNI)
    for bad in (-0.1, 1.5, math.nan):
        with pytest.raises(ValueError):
            pools.firing_split(pool, 0.5, bad)


def test_repeated_splits_compound_weights():
    """Two rounds of firing produce the same pool as direct double
    truncation: the survivor weight above both cuts is (1-mu)^2."""
    mu = 0.3
    pool = pools.LaborPool.entry(UNI)
    _, stay1 = pools.firing_split(pool, 0.4, mu)
    _, stay2 = pools.firing_split(stay1, 0.6, mu)
    assert pools.pool_mass(stay2) == pytest.approx((1 - mu) ** 2 * 0.4, abs=1e-12)
    assert pools.pool_mean(stay2) == pytest.approx(0.8, abs=1e-12)


# ---------------------------------------------------------------------
# Quantiles and sampling
# ---------------------------------------------------------------------

def test_quantile_uniform_is_affine():
    for q in (0.0, 0.25, 0.5, 0.99, 1.0):
        assert pools.quantile(UNI_WIDE, q) == pytest.approx(2.0 + 3.0 * q, abs=1e-12)


def test_quantile_inverts_cdf_piecewise():
    total = PW.total_mass()
    for q in (0.05, 0.3, 0.5, 0.77, 0.95):
        x = pools.quantile(PW, q)
        assert PW.mass_between(PW.support_low, x) / total == pytest.approx(q, abs=1e-9)


def test_quantile_discrete_lands_on_atoms():
    values = {pools.quantile(DISC, q) for q in np.linspace(0.01, 0.99, 37)}
    assert values <= {0.2, 0.5, 0.9}
    # masses 1 : 2 : 1.5 of 4.5 -> breakpoints at 2/9 and 6/9
    assert pools.quantile(DISC, 0.1) == 0.2
    assert pools.quantile(DISC, 0.5) == 0.5
    assert pools.quantile(DISC, 0.9) == 0.9


def test_sampling_matches_quantile_map():
    u = np.linspace(0.0005, 0.9995, 2001)
    draws = pools.sample_productivities(PW, u)
    assert draws.shape == u.shape
    assert draws.min() >= PW.support_low - 1e-12
    assert draws.max() <= PW.support_high + 1e-12
    # the inverse-CDF transform of a uniform grid reproduces the mean
    assert float(draws.mean()) == pytest.approx(PW.mean(), abs=2e-3)
    # spot-check against the scalar quantile
    for i in (0, 500, 1000, 2000):
        assert draws[i] == pytest.approx(pools.quantile(PW, u[i]), abs=1e-9)
