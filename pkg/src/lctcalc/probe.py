"""Monte Carlo divergence probe for ``|f|^-c`` near the origin.

Samples are drawn fiberwise.  ``|x|`` is log-uniform inside dyadic shells
(uniform angle), and given ``x`` the ``y`` coordinate comes from a mixture
of a uniform component on the ball and log-uniform displacements around the
numerically computed roots of ``f(x, .)``.  The integrand is weighted by the
inverse of the full mixture density, so every estimate is unbiased for the
integral over its region.

The regions are nested: ``A(r)`` is the part of the ball where ``|x| >= r``
and ``y`` stays at least ``r`` from every root of ``f(x, .)``.  As ``r``
shrinks, ``A(r)`` exhausts the ball minus the zero set, so the integrals
over ``A(r)`` stay bounded exactly when ``|f|^-c`` is integrable.  The
verdict compares how much mass each successive level adds.

Numerical only.  Verdicts are trends, not proofs.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np
import sympy

from .adapt import Field, _from_sympy, _to_sympy
from .bivar import BivarPoly

ACCEPTANCE_SEED = 0xC0FFEE
_TINY = 1e-300
_LOG_TINY = math.log(_TINY)
_Y_PER_X = 10
_EVAL_ERR = 4 * np.finfo(float).eps


class Verdict(enum.Enum):
    CONVERGING_TREND = "CONVERGING_TREND"
    DIVERGING_TREND = "DIVERGING_TREND"
    INCONCLUSIVE = "INCONCLUSIVE"


def default_radii(levels: int = 3, step: int = 12, ball_radius: float = 0.5) -> tuple[float, ...]:
    """``levels`` dyadic radii, ``step`` doublings apart, below the ball radius."""
    return tuple(ball_radius * 2.0 ** (-step * (k + 1)) for k in range(levels))


@dataclass(frozen=True)
class ProbeConfig:
    field: Field = Field.COMPLEX
    c: float = 1.0
    radii: tuple[float, ...] = dc_field(default_factory=default_radii)
    samples_per_shell: int = 100_000
    seed: int = ACCEPTANCE_SEED
    shells_per_radius: int = 3
    ball_radius: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not self.radii:
            raise ValueError("at least one radius is required")
        if any(r <= 0 for r in self.radii):
            raise ValueError("radii must be positive")
        if any(b >= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly decreasing")
        if self.radii[0] >= self.ball_radius:
            raise ValueError("radii must lie below the ball radius")
        if self.samples_per_shell < _Y_PER_X:
            raise ValueError(f"samples_per_shell must be at least {_Y_PER_X}")
        if self.shells_per_radius < 1:
            raise ValueError("shells_per_radius must be positive")

    def shell_edges(self) -> list[tuple[float, float]]:
        """``|x|`` intervals, outermost first, log-evenly splitting each band."""
        edges = []
        hi = self.ball_radius
        for r in self.radii:
            s = self.shells_per_radius
            ratio = (r / hi) ** (1.0 / s)
            for j in range(s):
                edges.append((hi * ratio ** (j + 1), hi * ratio**j))
            hi = r
        return edges


@dataclass(frozen=True)
class ProbeVerdict:
    estimates: list[tuple[float, float, float]]  # (radius, estimate, stderr)
    verdict: Verdict
    increments: list[tuple[float, float]] = dc_field(default_factory=list)
    log_ratio: float = math.nan
    z_score: float = math.nan


# -- factored evaluation -------------------------------------------------------


@dataclass(frozen=True)
class _Factor:
    poly: BivarPoly
    power: int
    y_coeffs: tuple  # index q -> polynomial in x alone
    magnitude: BivarPoly  # same support, absolute coefficients


@lru_cache(maxsize=64)
def _factorization(f: BivarPoly) -> tuple[float, tuple[_Factor, ...]]:
    """Squarefree factors, so that multiple components are evaluated without
    cancellation: ``|f| = |const| * prod |g_i|^i``."""
    const, factors = sympy.sqf_list(_to_sympy(f))
    out = []
    for g, k in factors:
        gb = _from_sympy(sympy.Poly(g, *_to_sympy(f).gens))
        rows = gb.y_coefficients()
        dy = max(rows) if rows else 0
        coeffs = tuple(
            BivarPoly({(p, 0): c for p, c in rows.get(q, {}).items()}) for q in range(dy + 1)
        )
        mag = BivarPoly({m: abs(c) for m, c in gb.coeffs.items()})
        out.append(_Factor(gb, int(k), coeffs, mag))
    return float(abs(sympy.Rational(const))), tuple(out)


def _log_abs_f(const: float, factors, x, y) -> np.ndarray:
    """``log|f|``, with each factor floored at its own rounding-error bound:
    values below it are noise, and flooring only shrinks the integrand."""
    acc = np.full(np.broadcast(x, y).shape, math.log(const) if const > 0 else _LOG_TINY)
    ax, ay = np.abs(x), np.abs(y)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        for fac in factors:
            val = np.abs(fac.poly.eval_float(x, y))
            floor = _EVAL_ERR * len(fac.poly) * fac.magnitude.eval_float(ax, ay)
            acc = acc + fac.power * np.log(np.maximum(val, floor))
    acc = np.nan_to_num(acc, nan=_LOG_TINY, neginf=_LOG_TINY)
    return np.maximum(acc, _LOG_TINY)


def _roots_in_y(factors, x: np.ndarray) -> np.ndarray:
    """Roots of every factor in ``y`` at each ``x``; shape ``(n, total degree)``.

    Entries are NaN where a leading coefficient vanishes.
    """
    cols = []
    n = x.shape[0]
    for fac in factors:
        d = len(fac.y_coeffs) - 1
        if d < 1:
            continue
        a = np.stack([np.asarray(c.eval_float(x, 0.0) + 0j * x) for c in fac.y_coeffs], axis=1)
        lead = a[:, d]
        bad = lead == 0
        lead = np.where(bad, 1.0, lead)
        norm = a[:, :d] / lead[:, None]
        if d == 1:
            roots = -norm
        else:
            comp = np.zeros((n, d, d), dtype=complex)
            comp[:, np.arange(1, d), np.arange(d - 1)] = 1.0
            comp[:, :, d - 1] = -norm
            roots = np.linalg.eigvals(comp)
        roots = np.where(bad[:, None], np.nan, roots)
        cols.append(roots)
    if not cols:
        return np.zeros((n, 0), dtype=complex)
    return np.concatenate(cols, axis=1)


# -- sampling ------------------------------------------------------------------


@dataclass(frozen=True)
class _ShellSample:
    """Per-sample log|f|, log density and the deepest level reached."""

    log_f: np.ndarray  # shape (n_x, _Y_PER_X)
    log_w: np.ndarray  # log(1/q), -inf outside the ball
    level: np.ndarray  # index into radii, or len(radii) when excluded


def _polar(rng, n, lo, hi, complex_mode):
    """Log-uniform modulus in ``[lo, hi]`` with uniform angle; returns values
    and log densities."""
    span = math.log(hi / lo)
    mod = lo * np.exp(rng.random(n) * span)
    if complex_mode:
        ang = rng.random(n) * (2 * math.pi)
        val = mod * np.exp(1j * ang)
        logq = -math.log(2 * math.pi * span) - 2 * np.log(mod)
    else:
        sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        val = sign * mod
        logq = -math.log(2 * span) - np.log(mod)
    return val, logq


def _sample_shell(f: BivarPoly, cfg: ProbeConfig, index: int, lo: float, hi: float) -> _ShellSample:
    complex_mode = cfg.field is Field.COMPLEX
    rng = np.random.default_rng(cfg.seed ^ index)
    R = cfg.ball_radius
    r_min = cfg.radii[-1]
    n_x = cfg.samples_per_shell // _Y_PER_X
    const, factors = _factorization(f)

    x, logq_x = _polar(rng, n_x, lo, hi, complex_mode)
    centers = _roots_in_y(factors, x)
    if not complex_mode:
        centers = centers.real + 0j
    valid = np.isfinite(centers) & (np.abs(centers) <= 2 * R)
    n_c = centers.shape[1]

    # mixture: 1/4 uniform on |y| <= R, 3/4 split over valid root centers
    n_valid = valid.sum(axis=1)
    w_uni = np.where(n_valid > 0, 0.25, 1.0)
    w_each = np.where(n_valid > 0, 0.75 / np.maximum(n_valid, 1), 0.0)

    shape = (n_x, _Y_PER_X)
    pick = rng.random(shape)
    # choose component: uniform if pick < w_uni, else the k-th valid center
    cum = np.cumsum(valid * w_each[:, None], axis=1) + w_uni[:, None]
    n_before = (pick[:, :, None] >= cum[:, None, :]).sum(axis=2)
    comp = np.where(pick < w_uni[:, None], -1, np.minimum(n_before, max(n_c - 1, 0)))
    u_span = 2 * R
    u, _ = _polar(rng, n_x * _Y_PER_X, r_min, u_span, complex_mode)
    u = u.reshape(shape)
    if complex_mode:
        rad = R * np.sqrt(rng.random(shape))
        uni = rad * np.exp(1j * 2 * math.pi * rng.random(shape))
    else:
        uni = R * (2 * rng.random(shape) - 1)
    safe_centers = np.where(valid, centers, 0.0)
    if n_c:
        chosen = np.take_along_axis(safe_centers, np.maximum(comp, 0), axis=1)
        y = np.where(comp < 0, uni, chosen + u)
    else:
        y = uni

    # full mixture density at y
    log_span = math.log(u_span / r_min)
    if complex_mode:
        q = w_uni[:, None] / (math.pi * R * R) * (np.abs(y) <= R)
    else:
        q = w_uni[:, None] / (2 * R) * (np.abs(y) <= R)
    min_dist = np.full(shape, np.inf)
    for k in range(n_c):
        dist = np.abs(y - safe_centers[:, k][:, None])
        ok = valid[:, k][:, None]
        inside = (dist >= r_min) & (dist <= u_span) & ok
        with np.errstate(divide="ignore"):
            dens = (
                1.0 / (2 * math.pi * log_span * dist**2)
                if complex_mode
                else 1.0 / (2 * log_span * dist)
            )
        q = q + np.where(inside, w_each[:, None] * dens, 0.0)
        root_dist = np.abs(y - centers[:, k][:, None])
        min_dist = np.minimum(min_dist, np.where(np.isfinite(root_dist), root_dist, np.inf))

    xb = x[:, None] * np.ones(shape)
    in_ball = np.abs(xb) ** 2 + np.abs(y) ** 2 <= R * R
    with np.errstate(divide="ignore"):
        log_w = np.where(in_ball & (q > 0), -np.log(q) - logq_x[:, None], -np.inf)
    dist = np.minimum(np.abs(xb), min_dist)
    radii = np.asarray(cfg.radii)
    level = np.searchsorted(-radii, -dist, side="right")  # first k with dist >= r_k
    log_f = _log_abs_f(const, factors, xb, y)
    return _ShellSample(log_f, log_w, level)


def _shell_key(f: BivarPoly, cfg: ProbeConfig) -> tuple:
    return (f, cfg.field, cfg.radii, cfg.samples_per_shell, cfg.seed, cfg.shells_per_radius, cfg.ball_radius)


@lru_cache(maxsize=32)
def _samples(key: tuple, workers: int | None) -> tuple[_ShellSample, ...]:
    f = key[0]
    cfg = ProbeConfig(
        field=key[1], radii=key[2], samples_per_shell=key[3], seed=key[4],
        shells_per_radius=key[5], ball_radius=key[6],
    )
    edges = cfg.shell_edges()
    jobs = [(i, lo, hi) for i, (lo, hi) in enumerate(edges)]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return tuple(pool.map(lambda j: _sample_shell(f, cfg, *j), jobs))
    return tuple(_sample_shell(f, cfg, *j) for j in jobs)


def _level_moments(f: BivarPoly, cfg: ProbeConfig, workers: int | None = None):
    """Per-level mass added (``level k`` = ``A(r_k)`` minus ``A(r_{k-1})``)
    and its covariance matrix, summed over shells in order."""
    if f.is_zero():
        raise ValueError("the zero polynomial is not integrable anywhere")
    if f.coefficient(0, 0) != 0:
        raise ValueError("f must vanish at the origin")
    L = len(cfg.radii)
    mean = np.zeros(L)
    cov = np.zeros((L, L))
    for sh in _samples(_shell_key(f, cfg), workers):
        with np.errstate(over="ignore", invalid="ignore"):
            w = np.exp(sh.log_w - cfg.c * sh.log_f)
        w = np.where(np.isfinite(w), w, np.where(np.isnan(w), 0.0, np.finfo(float).max))
        # group the y samples belonging to one x: those are iid
        per_level = np.stack(
            [np.where(sh.level == k, w, 0.0).mean(axis=1) for k in range(L)], axis=1
        )
        n = per_level.shape[0]
        mean += per_level.mean(axis=0)
        cov += np.cov(per_level, rowvar=False, ddof=1).reshape(L, L) / n
    return mean, cov


def mc_estimate(f: BivarPoly, cfg: ProbeConfig, radius: float, workers: int | None = None):
    """Estimate of the integral of ``|f|^-c`` over ``A(radius)`` and its
    standard error.  ``radius`` must be one of ``cfg.radii``."""
    if radius not in cfg.radii:
        raise ValueError("radius must be one of the configured radii")
    k = cfg.radii.index(radius)
    mean, cov = _level_moments(f, cfg, workers)
    est = float(mean[: k + 1].sum())
    var = float(cov[: k + 1, : k + 1].sum())
    return est, math.sqrt(max(var, 0.0))


def classify(mean: np.ndarray, cov: np.ndarray, z_crit: float = 2.0):
    """Compare the mass added by the last two levels on a log scale."""
    d1, d2 = float(mean[-2]), float(mean[-1])
    if d1 <= 0 and d2 <= 0:
        return Verdict.CONVERGING_TREND, math.nan, math.nan
    if d1 <= 0 or d2 <= 0:
        return Verdict.INCONCLUSIVE, math.nan, math.nan
    scale = max(d1, d2)
    d1, d2 = d1 / scale, d2 / scale
    if min(d1, d2) < 1e-150:  # squares would underflow
        return Verdict.INCONCLUSIVE, math.log(d2 or 5e-324) - math.log(d1 or 5e-324), math.nan
    v11, v22, v12 = (float(v) / scale / scale for v in (cov[-2, -2], cov[-1, -1], cov[-2, -1]))
    var = v11 / d1**2 + v22 / d2**2 - 2 * v12 / (d1 * d2)
    log_ratio = math.log(d2 / d1)
    if not math.isfinite(var):
        return Verdict.INCONCLUSIVE, log_ratio, math.nan
    se = math.sqrt(max(var, 0.0))
    z = log_ratio / se if se > 0 else math.copysign(math.inf, log_ratio)
    if z > z_crit:
        return Verdict.DIVERGING_TREND, log_ratio, z
    if z < -z_crit:
        return Verdict.CONVERGING_TREND, log_ratio, z
    return Verdict.INCONCLUSIVE, log_ratio, z


def probe_config(field: Field = Field.COMPLEX, c: float = 1.0, **kw) -> ProbeConfig:
    return ProbeConfig(field=field, c=float(c), **kw)


def divergence_probe(
    f: BivarPoly,
    c,
    field: Field = Field.COMPLEX,
    *,
    samples_per_shell: int = 100_000,
    seed: int = ACCEPTANCE_SEED,
    radii: tuple[float, ...] | None = None,
    shells_per_radius: int = 3,
    workers: int | None = None,
) -> ProbeVerdict:
    """Trend verdict for integrability of ``|f|^-c`` near the origin.

    Needs at least two radii; the last two levels decide the verdict.
    """
    kw = {} if radii is None else {"radii": tuple(radii)}
    cfg = ProbeConfig(
        field=field, c=float(c), samples_per_shell=samples_per_shell, seed=seed,
        shells_per_radius=shells_per_radius, **kw,
    )
    if len(cfg.radii) < 2:
        raise ValueError("at least two radii are needed for a trend")
    mean, cov = _level_moments(f, cfg, workers)
    estimates = []
    for k, r in enumerate(cfg.radii):
        est = float(mean[: k + 1].sum())
        var = float(cov[: k + 1, : k + 1].sum())
        estimates.append((r, est, math.sqrt(max(var, 0.0))))
    increments = [
        (r, float(mean[k])) for k, r in enumerate(cfg.radii)
    ]
    verdict, log_ratio, z = classify(mean, cov)
    return ProbeVerdict(estimates, verdict, increments, log_ratio, z)
