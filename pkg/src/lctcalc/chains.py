"""Batches of thresholds, ascending runs and accumulation points."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from .adapt import Field, Normalization, compute_lct
from .bivar import BivarPoly, parse, to_text


@dataclass
class ThresholdSet:
    entries: list[tuple[str, object]] = dc_field(default_factory=list)
    field: Field = Field.COMPLEX
    normalization: Normalization = Normalization.INDEX
    errors: list[tuple[int, str, str]] = dc_field(default_factory=list)

    def values(self) -> list:
        return [c for _, c in self.entries]


def batch_lct(
    inputs: Iterable[BivarPoly | str],
    field: Field = Field.COMPLEX,
    normalization: Normalization = Normalization.INDEX,
    workers: int | None = None,
) -> ThresholdSet:
    """Run :func:`compute_lct` over ``inputs``, keeping input order.

    Failing entries are recorded in ``errors`` as ``(index, text, message)``
    and left out of ``entries``.
    """
    items = list(inputs)

    def one(item):
        try:
            f = parse(item) if isinstance(item, str) else item
            return to_text(f), compute_lct(f, field, normalization).c0, None
        except Exception as exc:  # collected per entry
            return str(item), None, f"{type(exc).__name__}: {exc}"

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, items))
    else:
        results = [one(it) for it in items]
    out = ThresholdSet(field=field, normalization=normalization)
    for i, (text, c0, err) in enumerate(results):
        if err is None:
            out.entries.append((text, c0))
        else:
            out.errors.append((i, text, err))
    return out


def read_batch_file(path) -> list[str]:
    """One expression per line; blank lines and ``#`` comments are skipped."""
    lines = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
    return lines


def one_variable_set_nearest(v: Fraction, field: Field = Field.COMPLEX) -> Fraction:
    """Nearest element of ``{k/n : n >= 1} U {0}`` (k = 2 over C, 1 over R)."""
    k = 2 if field is Field.COMPLEX else 1
    if v <= 0:
        return Fraction(0)
    if v >= k:
        return Fraction(k)
    n = int(k / v)  # k/(n+1) < v <= k/n
    lo, hi = Fraction(k, n + 1), Fraction(k, n)
    return lo if v - lo <= hi - v else hi


@dataclass(frozen=True)
class AccumulationCandidate:
    limit: Fraction
    count: int
    nearest: Fraction
    gap: Fraction
    members: tuple = ()


def tail_limit(values: Sequence[Fraction]) -> Fraction:
    """Limit of a tail approaching its minimum from above.

    Fits ``L + c/(M - k)`` through the three smallest distinct values, which
    is exact for harmonic tails such as ``2/3 + 2/m``.  Falls back to the
    minimum when the gaps do not shrink toward it.
    """
    w = sorted(set(values))
    if len(w) < 3:
        return w[0]
    g0, g1 = w[1] - w[0], w[2] - w[1]
    if g1 <= g0:
        return w[0]
    rho = g1 / g0
    M = 2 * rho / (rho - 1)
    return max(w[0] - g0 * (M - 1), Fraction(0))


def accumulation_points(
    values: Sequence[Fraction],
    tol: Fraction,
    field: Field = Field.COMPLEX,
    min_count: int = 10,
) -> list[AccumulationCandidate]:
    """Cluster sorted values by gaps of at most ``tol``.

    Each cluster with at least ``min_count`` members is reported with the
    extrapolated limit of its lower tail (see :func:`tail_limit`), the
    nearest one-variable threshold, and the exact gap between them.
    """
    vals = list(values)
    if any(b < a for a, b in zip(vals, vals[1:])):
        raise ValueError("values must be sorted ascending")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    clusters: list[list[Fraction]] = []
    for v in vals:
        if clusters and v - clusters[-1][-1] <= tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    out = []
    for cl in clusters:
        if len(cl) < min_count:
            continue
        limit = tail_limit([Fraction(v) for v in cl])
        nearest = one_variable_set_nearest(limit, field)
        out.append(AccumulationCandidate(limit, len(cl), nearest, abs(limit - nearest), tuple(cl)))
    return out


@dataclass(frozen=True)
class LatticeL:
    N: int
    points: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.points)


def lattice_L(N: int) -> LatticeL:
    """Lattice points ``(p, q)`` with ``0 <= p <= q <= N``: the candidates for
    vertices left of the diagonal when the order is ``N``."""
    if N < 1:
        raise ValueError("N must be positive")
    pts = tuple((p, q) for q in range(N + 1) for p in range(q + 1))
    return LatticeL(N, pts)


@dataclass(frozen=True)
class Run:
    start: int
    values: tuple
    stabilized: bool
    repeats: int

    def __len__(self):
        return len(self.values)


def ascending_runs(values: Sequence) -> list[Run]:
    """Split into maximal strictly ascending runs.

    ``stabilized`` marks runs whose last value is repeated right after the
    run; ``repeats`` counts those consecutive repeats.
    """
    vals = list(values)
    runs: list[Run] = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] > vals[j]:
            j += 1
        k = j
        while k + 1 < len(vals) and vals[k + 1] == vals[j]:
            k += 1
        runs.append(Run(i, tuple(vals[i:j + 1]), k > j, k - j))
        i = j + 1
    return runs
