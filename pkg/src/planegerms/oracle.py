"""Floating-point cross-checks of orders and contacts.

Both estimators sample the arc at geometrically spaced parameters and fit a
straight line in log-log coordinates.  They are independent of the exact
machinery: only ``to_complex`` of the coefficients is shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DegenerateContact, RangeError
from .poly import BivariatePoly
from .series import Arc, BranchGerm, PuiseuxSeries

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SlopeEstimate:
    slope: float
    residual: float
    samples: int
    t_range: tuple[float, float]

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "residual": self.residual,
            "samples": self.samples,
            "t_range": list(self.t_range),
        }


def _check_range(t_min: float, t_max: float, n: int) -> np.ndarray:
    if not (0 < t_min < t_max < 1):
        raise RangeError(f"need 0 < t_min < t_max < 1, got [{t_min}, {t_max}]", (1e-6, 1e-3))
    if n < 4:
        raise RangeError(f"need at least 4 samples, got {n}")
    return np.geomspace(t_min, t_max, n)


def _fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    rms = math.sqrt(res[0] / len(x)) if len(res) else 0.0
    return float(coef[0]), rms


def _series_numeric(s: PuiseuxSeries) -> tuple[np.ndarray, np.ndarray]:
    exps = np.array([float(q) for q, _ in s.terms])
    coefs = np.array([c.to_complex() for _, c in s.terms], dtype=complex)
    return exps, coefs


def _arc_points(a: Arc, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if a.kind == "x":
        exps, coefs = _series_numeric(a.y)
        x = ts.astype(complex) ** a.p
        y = (coefs[None, :] * ts[:, None] ** exps[None, :]).sum(axis=1) if len(exps) else np.zeros_like(x)
        return x, y
    exps, coefs = _series_numeric(a.v)
    v = (coefs[None, :] * ts[:, None] ** exps[None, :]).sum(axis=1)
    return np.zeros(len(ts), dtype=complex), ts**a.e_prime * v


def estimate_order(f: BivariatePoly, a: Arc, t_min: float = 1e-6, t_max: float = 1e-3, n: int = 16) -> SlopeEstimate:
    """Slope of ``log|f(a(t))|`` against ``log t``."""
    ts = _check_range(t_min, t_max, n)
    x, y = _arc_points(a, ts)
    values = np.zeros(len(ts), dtype=complex)
    scale = np.zeros(len(ts))
    for (i, j), c in f.terms.items():
        term = c.to_complex() * x**i * y**j
        values += term
        scale += np.abs(term)
    return _order_fit(ts, np.abs(values), scale, t_min, t_max)


def _order_fit(ts, mags, scale, t_min: float, t_max: float) -> SlopeEstimate:
    if not np.all(np.isfinite(mags)):
        raise RangeError("|f| overflows on the requested range", (t_min / 10, t_max / 10))
    # cancellation first: a sum of resolved terms that cancels to 0 is not an underflow
    if np.any(mags < 64 * EPS * scale):
        raise RangeError(
            "cancellation in f(a(t)) exceeds double precision on the requested range",
            (min(t_min * 100, t_max / 10), min(t_max * 100, 0.5)),
        )
    if np.any(mags < 1e-290):
        raise RangeError("|f| underflows on the requested range", (t_min * 10, min(t_max * 10, 0.5)))
    slope, res = _fit(np.log(ts), np.log(mags))
    return SlopeEstimate(slope, res, len(ts), (t_min, t_max))


def estimate_order_germ(g, a: Arc, t_min: float = 1e-6, t_max: float = 1e-3, n: int = 16) -> SlopeEstimate:
    """Like :func:`estimate_order` for a germ known only by its branches.

    ``f`` is evaluated as the product of ``(Y - psi(zeta^l X^(1/m)))^mult`` over
    all conjugates, in the germ's chart.
    """
    ts = _check_range(t_min, t_max, n)
    x, y = _arc_points(a, ts)
    if g.shear is not None:
        x = x - float(g.shear) * y
    logs = np.zeros(len(ts))
    for b, k in g.factors:
        exps, coefs = _series_numeric(b.psi)
        root = x ** (1.0 / b.m)
        for l in range(b.m):
            u = root * np.exp(2j * math.pi * l / b.m)
            psi = (coefs[None, :] * u[:, None] ** exps[None, :]).sum(axis=1) if len(exps) else np.zeros_like(u)
            diff = np.abs(y - psi)
            if np.any(diff <= 64 * EPS * (np.abs(y) + np.abs(psi))):
                raise RangeError(
                    "cancellation in f(a(t)) exceeds double precision on the requested range",
                    (min(t_min * 100, t_max / 10), min(t_max * 100, 0.5)),
                )
            logs += k * np.log(diff)
    slope, res = _fit(np.log(ts), logs)
    return SlopeEstimate(slope, res, n, (t_min, t_max))


class _Slice:
    """Points of a branch at a given distance from the origin, one per argument of ``u``."""

    def __init__(self, b: BranchGerm):
        self.m = b.m
        self.exps, self.coefs = _series_numeric(b.psi)

    def point(self, u: complex) -> tuple[complex, complex]:
        y = complex(np.sum(self.coefs * u**self.exps)) if len(self.exps) else 0j
        return u**self.m, y

    def norm(self, rho: float, theta: float) -> float:
        x, y = self.point(rho * complex(math.cos(theta), math.sin(theta)))
        return math.hypot(abs(x), abs(y))

    def radius(self, r: float, theta: float) -> float:
        hi = r ** (1.0 / self.m)
        for _ in range(60):
            if self.norm(hi, theta) >= r:
                break
            hi *= 2
        else:
            raise RangeError("radial search for the curve slice did not bracket the radius")
        lo = 0.0
        if self.norm(hi, theta) == r:
            return hi
        return brentq(lambda s: self.norm(s, theta) - r, lo, hi, xtol=1e-300, rtol=4 * EPS, maxiter=400)

    def distance(self, p: tuple[complex, complex], r: float, theta: float) -> float:
        rho = self.radius(r, theta)
        x, y = self.point(rho * complex(math.cos(theta), math.sin(theta)))
        return math.hypot(abs(p[0] - x), abs(p[1] - y))


def slice_distance(a_point: tuple[complex, complex], b: BranchGerm, conj_samples: int = 64) -> float:
    """Distance from a point to ``X(r)``, ``r`` its norm, ``X`` the branch."""
    sl = _Slice(b)
    r = math.hypot(abs(a_point[0]), abs(a_point[1]))
    step = 2 * math.pi / conj_samples
    coarse = [(sl.distance(a_point, r, k * step), k * step) for k in range(conj_samples)]
    coarse.sort()
    best = coarse[0][0]
    for d0, theta in coarse[:3]:
        res = minimize_scalar(
            lambda th: sl.distance(a_point, r, th),
            bounds=(theta - step, theta + step),
            method="bounded",
            options={"xatol": 1e-15, "maxiter": 500},
        )
        best = min(best, float(res.fun), d0)
    return best


def _auto_contact_range(a: Arc, b: BranchGerm, conj_samples: int) -> tuple[float, float]:
    """One decade starting at the smallest ``t = 10^-k`` whose distance is still resolved."""
    lowest = None
    for k in range(1, 10):
        t = 10.0**-k
        x, y = _arc_points(a, np.array([t]))
        p = (complex(x[0]), complex(y[0]))
        r = math.hypot(abs(p[0]), abs(p[1]))
        if slice_distance(p, b, conj_samples) < RESOLVED * r:
            break
        lowest = t
    if lowest is None:
        raise DegenerateContact("the arc is not resolved from the curve at any sampled scale")
    return lowest, min(lowest * 10, 0.5)


RESOLVED = 1e-13


def estimate_contact(
    a: Arc,
    b: BranchGerm,
    t_min: float | None = None,
    t_max: float | None = None,
    n: int = 12,
    conj_samples: int = 64,
) -> SlopeEstimate:
    """Slope of ``log dist(a(t), X(|a(t)|))`` against ``log |a(t)|``.

    Without an explicit range the lowest decade at which the distance is
    still well above rounding (relative ``1e-13``) is used.
    """
    if t_min is None or t_max is None:
        t_min, t_max = _auto_contact_range(a, b, conj_samples)
    ts = _check_range(t_min, t_max, n)
    x, y = _arc_points(a, ts)
    radii, dists = [], []
    for px, py in zip(x, y):
        r = math.hypot(abs(px), abs(py))
        d = slice_distance((complex(px), complex(py)), b, conj_samples)
        radii.append(r)
        dists.append(d)
    radii, dists = np.array(radii), np.array(dists)
    if np.all(dists <= 1e-13 * radii):
        raise DegenerateContact("the arc lies on the curve: distances vanish to rounding")
    if np.any(dists <= 1e-13 * radii):
        raise RangeError(
            "distance to the curve slice is below double-precision resolution on part of the range",
            (min(t_min * 10, t_max / 10), min(t_max * 10, 0.5)),
        )
    slope, res = _fit(np.log(radii), np.log(dists))
    return SlopeEstimate(slope, res, n, (t_min, t_max))
