"""Golden-section search, written against plain arithmetic so it also runs on mpmath numbers."""
from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable, a, b, tol=1e-12, max_iter: int = 500):
    """Minimizer of a unimodal ``f`` on [a, b], located to within ``tol``.

    Returns ``(x, f(x))``.  ``a``, ``b`` and ``tol`` may be floats or
    ``mpmath.mpf``; the arithmetic follows their type.
    """
    if b < a:
        a, b = b, a
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def scan_then_golden(f: Callable, a: float, b: float, samples: int = 2001, tol: float = 1e-12):
    """Bracket the global minimum on a uniform scan, then refine by golden section."""
    step = (b - a) / (samples - 1)
    xs = [a + i * step for i in range(samples)]
    vals = [f(x) for x in xs]
    i = min(range(samples), key=vals.__getitem__)
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, samples - 1)]
    return golden_section(f, lo, hi, tol)
