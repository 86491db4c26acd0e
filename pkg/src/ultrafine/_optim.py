"""Small derivative-free searches for concave/convex functions of one or two variables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INVPHI = (np.sqrt(5) - 1) / 2


@dataclass
class LineResult:
    x: float
    fx: float
    evaluations: int
    hit_cap: bool


def golden_max(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 500):
    """Golden-section maximization of a unimodal ``f`` on ``[a, b]``."""
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    n = 2
    while abs(b - a) > tol * max(1.0, abs(a) + abs(b)) and n < max_iter:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
        n += 1
    if f1 >= f2:
        return x1, f1, n
    return x2, f2, n


def maximize_unimodal(f, lo: float = -1.0, hi: float = 1.0, cap: float = 1e3,
                      tol: float = 1e-10) -> LineResult:
    """Maximize a concave function of one variable.

    The bracket ``[lo, hi]`` is doubled on whichever side still improves
    until an interior point beats both ends or ``|x|`` would exceed ``cap``.
    """
    evals = 0
    cache = {}

    def g(x):
        nonlocal evals
        if x not in cache:
            cache[x] = f(x)
            evals += 1
        return cache[x]

    hit_cap = False
    while True:
        mid = 0.5 * (lo + hi)
        fl, fm, fh = g(lo), g(mid), g(hi)
        if fm >= fl and fm >= fh:
            break
        width = hi - lo
        if fh > fm:
            new_hi = hi + width
            if abs(new_hi) > cap:
                new_hi = np.sign(new_hi) * cap
                hit_cap = new_hi == hi
            lo, hi = mid, new_hi
        else:
            new_lo = lo - width
            if abs(new_lo) > cap:
                new_lo = np.sign(new_lo) * cap
                hit_cap = new_lo == lo
            lo, hi = new_lo, mid
        if hit_cap:
            x = hi if fh > fm else lo
            return LineResult(x, g(x), evals, True)
    x, fx, n = golden_max(g, lo, hi, tol=tol)
    for e in (lo, hi):
        if g(e) > fx:
            x, fx = e, g(e)
    return LineResult(x, fx, evals + n, abs(x) >= cap * (1 - 1e-12))


def minimize_convex(f, lo: float = -1.0, hi: float = 1.0, cap: float = 1e3,
                    tol: float = 1e-10) -> LineResult:
    res = maximize_unimodal(lambda x: -f(x), lo, hi, cap, tol)
    return LineResult(res.x, -res.fx, res.evaluations, res.hit_cap)


def _line_max(f, x0, d, fx0, cap, tol):
    res = maximize_unimodal(lambda t: f(x0 + t * d) if t != 0.0 else fx0,
                            lo=-8.0, hi=8.0, cap=cap, tol=tol)
    return res


def maximize_concave_2d(f, x0=(0.0, 0.0), tol: float = 1e-9, max_outer: int = 200,
                        line_cap: float = 1e6):
    """Adaptive coordinate ascent for a concave function of two variables.

    The direction set holds the two axes, both diagonals and the most
    recent net displacement, which lets the search follow ridges where
    the function has a kink.

    Returns
    -------
    x : ndarray
    fx : float
    evaluations : int
    """
    x = np.asarray(x0, dtype=float)
    fx = f(x)
    evals = 1
    r = 1 / np.sqrt(2)
    base = [np.array([1.0, 0.0]), np.array([0.0, 1.0]),
            np.array([r, r]), np.array([r, -r])]
    extra = []
    for _ in range(max_outer):
        start, fstart = x.copy(), fx
        for d in base + extra:
            res = _line_max(f, x, d, fx, line_cap, 1e-12)
            evals += res.evaluations
            if res.fx > fx:
                x = x + res.x * d
                fx = res.fx
        step = x - start
        if np.linalg.norm(step) > 0:
            extra = [step / np.linalg.norm(step)]
        if fx - fstart < tol:
            break
    return x, fx, evals
