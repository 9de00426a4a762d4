"""Scaling experiments: energy gap exponents and boundary-layer collapse.

For each wall count n the energy gap

    alpha_n = E_n(bulk positions) - E_n(minimiser)

measures how much the pile-up gains by deviating from the bulk profile; it
is non-negative by optimality.  Assuming a power law alpha_n ~ n^{-p}, the
exponent is estimated from successive doublings,

    p_n = (log alpha_n - log alpha_{2n}) / log 2,

for gamma growing like a power of n.  The collapse metric quantifies how
well blown-up density mismatches from different runs agree on the
boundary-layer region (0, 1).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discrete import DensitySamples, bulk_positions, energy, newton_minimize

GAMMA_RULE_EXPONENTS = {"1/4": 0.25, "1/2": 0.5, "3/4": 0.75}


def gamma_for(rule: str, n: int) -> float:
    """Resolve a gamma rule label: a power of n ("1/4", "1/2", "3/4") or an
    explicit constant ("value:<float>")."""
    if rule in GAMMA_RULE_EXPONENTS:
        return float(n) ** GAMMA_RULE_EXPONENTS[rule]
    if rule.startswith("value:"):
        value = float(rule.split(":", 1)[1])
        if value <= 0:
            raise ValueError("explicit gamma must be positive")
        return value
    raise ValueError(f"unknown gamma rule {rule!r}")


@dataclass
class ScalingRow:
    n: int
    gamma_rule: str
    gamma: float
    alpha: float
    p: float | None


@dataclass
class ScalingReport:
    rows: list[ScalingRow]

    def table(self) -> list[list]:
        """Rows for CSV emission: n, gamma_rule, gamma, alpha, p."""
        return [
            [r.n, r.gamma_rule, r.gamma, r.alpha, "" if r.p is None else r.p]
            for r in self.rows
        ]


def alpha(n: int, gamma: float, tol: float = 1e-10) -> float:
    """Energy gap between the bulk-generated positions and the minimiser at
    the same (n, gamma); non-negative by optimality of the minimiser."""
    if n < 2:
        raise ValueError("the energy gap needs n >= 2")
    bulk = bulk_positions(n, gamma)
    minimiser = newton_minimize(n, gamma, init=bulk, tol=tol)
    return energy(bulk) - energy(minimiser)


def exponent_table(
    n_list: list[int],
    rules: list[str],
    tol: float = 1e-10,
    threads: int = 1,
) -> ScalingReport:
    """Power-law exponents p_n per gamma rule over a list of wall counts.

    Each row needs the gap at n and at 2n (with gamma re-evaluated from the
    rule at 2n); rows whose doubled gap is unavailable report no exponent.
    Rows are independent and may be computed concurrently; assembly order is
    deterministic.
    """
    tasks = []
    for rule in rules:
        needed = sorted(set(n_list) | {2 * n for n in n_list})
        for n in needed:
            tasks.append((rule, n))

    def compute(task):
        rule, n = task
        return alpha(n, gamma_for(rule, n), tol=tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            gaps = dict(zip(tasks, pool.map(compute, tasks)))
    else:
        gaps = {task: compute(task) for task in tasks}

    rows = []
    for rule in rules:
        for n in sorted(n_list):
            a_n = gaps[(rule, n)]
            a_2n = gaps.get((rule, 2 * n))
            p = None
            if a_2n is not None and a_n > 0 and a_2n > 0:
                p = (math.log(a_n) - math.log(a_2n)) / math.log(2.0)
            rows.append(
                ScalingRow(n=n, gamma_rule=rule, gamma=gamma_for(rule, n), alpha=a_n, p=p)
            )
    return ScalingReport(rows=rows)


def collapse_metric(
    runs: list[DensitySamples],
    window: tuple[float, float] = (0.01, 0.99),
    n_points: int = 200,
) -> float:
    """Sup-distance between blown-up density profiles on the layer region.

    Each run is restricted to locations in (0, 1) and linearly interpolated
    on a common comparison grid of ``n_points`` equispaced points inside
    ``window``, intersected with every run's sample range (the profiles are
    sample-sparse at the edges, and interpolation is only trusted between
    samples).  Returns the largest pairwise deviation over the grid; smaller
    means better collapse.
    """
    if len(runs) < 2:
        raise ValueError("collapse needs at least two runs")
    restricted = []
    for run in runs:
        keep = (run.locations > 0.0) & (run.locations < 1.0)
        if np.count_nonzero(keep) < 2:
            raise ValueError("a run has fewer than two samples in (0, 1)")
        restricted.append((run.locations[keep], run.values[keep]))

    lo = max(window[0], max(loc[0] for loc, _ in restricted))
    hi = min(window[1], min(loc[-1] for loc, _ in restricted))
    if hi <= lo:
        raise ValueError("runs share no comparison window inside (0, 1)")
    grid = np.linspace(window[0], window[1], n_points)
    grid = grid[(grid >= lo) & (grid <= hi)]
    if grid.size == 0:
        raise ValueError("comparison grid does not intersect the common window")

    profiles = [np.interp(grid, loc, val) for loc, val in restricted]
    worst = 0.0
    for i in range(len(profiles)):
        for j in range(i + 1, len(profiles)):
            worst = max(worst, float(np.max(np.abs(profiles[i] - profiles[j]))))
    return worst
