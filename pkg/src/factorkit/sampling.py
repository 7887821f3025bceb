"""Uniform random regular graphs and Monte Carlo estimators.

Samplers use the pairing (configuration) model with rejection of loops
and repeated edges, which is exactly uniform over simple d-regular graphs
conditioned on acceptance; the expected number of attempts grows like
e^((d^2-1)/4), so degrees are capped at 4.

Every estimator derives trial i's generator from (seed, i) alone (see
rng.trial_generator), accumulates integer indicator counts, and is
therefore byte-reproducible for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidInputError, RegimeRefusedError
from .graphs import LabelledGraph
from .rng import TrialStream, trial_generator

__all__ = [
    "Estimate",
    "random_regular",
    "estimate_disjoint_prob",
    "estimate_multi_disjoint",
    "expected_common_p2",
    "estimate_overlap_tail",
    "mc_common_p2_mean",
    "MAX_SAMPLER_DEGREE",
]

MAX_SAMPLER_DEGREE = 4
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class Estimate:
    """A binomial proportion with its uncertainty.

    std_err is the plug-in binomial standard error sqrt(p(1-p)/trials);
    when fewer than 10 successes or failures were seen the Wilson score
    interval replaces the normal one (and, if the plug-in value is zero,
    its half-width divided by 1.96 replaces std_err), so the interval is
    never degenerate.
    """

    p_hat: float
    trials: int
    std_err: float
    ci95: tuple

    @staticmethod
    def from_counts(successes: int, trials: int) -> "Estimate":
        if trials <= 0:
            raise InvalidInputError("need at least one trial")
        p = successes / trials
        se = math.sqrt(p * (1.0 - p) / trials)
        if min(successes, trials - successes) >= 10:
            lo = max(0.0, p - _Z95 * se)
            hi = min(1.0, p + _Z95 * se)
        else:
            lo, hi = _wilson(successes, trials)
            if se == 0.0:
                se = (hi - lo) / (2.0 * _Z95)
        return Estimate(p, trials, se, (min(lo, p), max(hi, p)))


def _wilson(successes: int, trials: int) -> tuple:
    z2 = _Z95 * _Z95
    p = successes / trials
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = _Z95 * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


# ---------------------------------------------------------------------------
# sampling

def _pairing_edges(gen: np.random.Generator, n: int, d: int) -> tuple:
    """One uniform simple d-regular graph as (u, v) arrays (u < v)."""
    stubs_base = np.repeat(np.arange(n, dtype=np.int64), d)
    while True:
        stubs = stubs_base.copy()
        gen.shuffle(stubs)
        u = stubs[0::2]
        v = stubs[1::2]
        if d > 1:
            if (u == v).any():
                continue
            lo = np.minimum(u, v)
            hi = np.maximum(u, v)
            ids = np.sort(lo * n + hi)
            if (np.diff(ids) == 0).any():
                continue
            return lo, hi
        return np.minimum(u, v), np.maximum(u, v)


def _check_sampler_regime(n: int, d: int) -> None:
    if d < 1:
        raise InvalidInputError(f"sampler needs d >= 1, got {d}")
    if (n * d) % 2:
        raise InvalidInputError(f"no {d}-regular graph on {n} vertices (parity)")
    if d >= n:
        raise InvalidInputError(f"degree {d} needs more than {n} vertices")
    if d > MAX_SAMPLER_DEGREE:
        raise RegimeRefusedError(
            f"pairing-model sampler is limited to d <= {MAX_SAMPLER_DEGREE} "
            f"(rejection cost ~ e^((d^2-1)/4)); got d = {d}"
        )


def random_regular(n: int, d: int, seed: int) -> LabelledGraph:
    """A uniformly random simple d-regular graph on n vertices."""
    _check_sampler_regime(n, d)
    gen = trial_generator(seed, 0)
    u, v = _pairing_edges(gen, n, d)
    return LabelledGraph.from_edges(n, zip(u.tolist(), v.tolist()))


# ---------------------------------------------------------------------------
# estimators

def _run_trials(trials: int, seed: int, workers: int, trial_fn: Callable) -> int:
    """Sum of indicator outcomes over trials 0..trials-1.

    trial_fn(stream, i) must draw trial i's randomness only from
    stream.generator(seed, i'); chunking over workers then only re-groups
    an integer sum, so the result is worker-count independent."""
    if trials < 1:
        raise InvalidInputError("need at least one trial")

    def chunk(args):
        lo, hi = args
        stream = TrialStream()
        return sum(trial_fn(stream, i) for i in range(lo, hi))

    if workers <= 1:
        return chunk((0, trials))
    bounds = np.linspace(0, trials, workers + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(chunk, zip(bounds[:-1], bounds[1:])))
    return sum(parts)


def estimate_disjoint_prob(
    D: LabelledGraph, H: LabelledGraph, trials: int, seed: int, workers: int = 1
) -> Estimate:
    """Probability that a uniform relabelling of H shares no edge with D."""
    if D.n != H.n:
        raise InvalidInputError(f"graphs have different orders: {D.n} vs {H.n}")
    n = D.n
    dmat = np.zeros((n, n), dtype=bool)
    for a, b in D.edges():
        dmat[a, b] = dmat[b, a] = True
    hu = np.array([e[0] for e in H.edges()], dtype=np.int64)
    hv = np.array([e[1] for e in H.edges()], dtype=np.int64)
    if hu.size == 0:
        return Estimate.from_counts(trials, trials)

    def trial(stream: TrialStream, i: int) -> int:
        p = stream.generator(seed, i).permutation(n)
        return 0 if dmat[p[hu], p[hv]].any() else 1

    return Estimate.from_counts(_run_trials(trials, seed, workers, trial), trials)


def estimate_multi_disjoint(
    degrees: Sequence[int], n: int, trials: int, seed: int, workers: int = 1
) -> Estimate:
    """Probability that freshly sampled, independently relabelled regular
    graphs of the given degrees are pairwise edge-disjoint."""
    degrees = [int(d) for d in degrees]
    if not degrees:
        raise InvalidInputError("need at least one degree")
    for d in degrees:
        _check_sampler_regime(n, d)

    def trial(stream: TrialStream, i: int) -> int:
        gen = stream.generator(seed, i)
        ids = []
        for d in degrees:
            u, v = _pairing_edges(gen, n, d)
            p = gen.permutation(n)
            pu, pv = p[u], p[v]
            ids.append(np.minimum(pu, pv) * n + np.maximum(pu, pv))
        allids = np.sort(np.concatenate(ids))
        return 0 if (np.diff(allids) == 0).any() else 1

    return Estimate.from_counts(_run_trials(trials, seed, workers, trial), trials)


def expected_common_p2(n: int, d: int, h: int) -> float:
    """Expected number of 2-paths shared by a d-regular graph and a
    randomly relabelled h-regular graph: n d(d-1) h(h-1) / (2(n-1)(n-2))."""
    if n < 3:
        raise InvalidInputError(f"need n >= 3, got {n}")
    return n * d * (d - 1) * h * (h - 1) / (2.0 * (n - 1) * (n - 2))


def _tail_setup(n: int, d: int, h: int, seed: int):
    _check_sampler_regime(n, d)
    _check_sampler_regime(n, h)
    dgen = trial_generator(seed, 0)
    hgen = trial_generator(seed, 1)
    du, dv = _pairing_edges(dgen, n, d)
    dmat = np.zeros((n, n), dtype=bool)
    dmat[du, dv] = dmat[dv, du] = True
    hu, hv = _pairing_edges(hgen, n, h)
    return dmat, hu, hv


def estimate_overlap_tail(
    n: int, d: int, h: int, trials: int, seed: int, workers: int = 1
) -> Estimate:
    """Probability of the bad overlap event: the relabelled h-regular graph
    shares a 2-path with the d-regular graph, or shares at least
    M = ceil(max(8dh, log n)) edges.  D and H are sampled once from the
    seed's first two substreams; trials randomise the relabelling only."""
    from .switching import threshold_M

    dmat, hu, hv = _tail_setup(n, d, h, seed)
    M = threshold_M(n, d, h)

    def trial(stream: TrialStream, i: int) -> int:
        p = stream.generator(seed, i + 2).permutation(n)
        pu, pv = p[hu], p[hv]
        mask = dmat[pu, pv]
        c = int(mask.sum())
        if c >= M:
            return 1
        if c >= 2:
            ends = np.concatenate((pu[mask], pv[mask]))
            if np.unique(ends).size < ends.size:
                return 1
        return 0

    return Estimate.from_counts(_run_trials(trials, seed, workers, trial), trials)


def mc_common_p2_mean(
    n: int, d: int, h: int, trials: int, seed: int, workers: int = 1
) -> tuple:
    """Monte Carlo mean (and its standard error) of the number of shared
    2-paths, for checking expected_common_p2."""
    dmat, hu, hv = _tail_setup(n, d, h, seed)

    def trial(stream: TrialStream, i: int) -> int:
        p = stream.generator(seed, i + 2).permutation(n)
        pu, pv = p[hu], p[hv]
        mask = dmat[pu, pv]
        if int(mask.sum()) < 2:
            return 0
        ends = np.concatenate((pu[mask], pv[mask]))
        counts = np.bincount(ends)
        return int((counts * (counts - 1) // 2).sum())

    def chunk(args):
        lo, hi = args
        stream = TrialStream()
        s = s2 = 0
        for i in range(lo, hi):
            v = trial(stream, i)
            s += v
            s2 += v * v
        return s, s2

    if workers <= 1:
        s, s2 = chunk((0, trials))
    else:
        bounds = np.linspace(0, trials, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, zip(bounds[:-1], bounds[1:])))
        s = sum(a for a, _ in parts)
        s2 = sum(b for _, b in parts)
    mean = s / trials
    var = max(0.0, s2 / trials - mean * mean)
    return mean, math.sqrt(var / trials)
