"""Adaptive Simpson integration for the generic-density code path.

Uniform and discrete bases never come through here (their moments are
closed-form); this integrator backs piecewise-linear densities, where the
integrands are low-degree polynomials on each panel, so the recursion
terminates almost immediately.
"""

from __future__ import annotations

from typing import Callable


def _simpson(f: Callable[[float], float], a: float, fa: float, b: float, fb: float) -> tuple[float, float, float]:
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 48) -> float:
    """Integrate f over [a, b] to absolute tolerance `tol`."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth)


def _recurse(f, a, fa, b, fb, m, fm, whole, tol, depth) -> float:
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * tol:
        # Richardson correction on the final split.
        return left + right + err / 15.0
    return (_recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + _recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1))
