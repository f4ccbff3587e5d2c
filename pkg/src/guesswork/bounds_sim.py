"""Entropy lower bound and a seeded Monte Carlo replay of the guessing game.

Floating point is confined to this module; everything it reports next to
an ``exact`` field is a diagnostic, never a decision.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    AnyPartition, Distribution, MomentFunction, SymmetricNoise, build_posterior_system,
    guesswork_moment, posterior_sets_of, _check_f,
)

KAPPA_SAFE = 4.0
KAPPA_GEOMETRIC = math.e  # tight only for geometric-like X; not a universal constant


def entropy(probs: Sequence) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    return -sum(float(p) * math.log2(float(p)) for p in probs if p > 0)


def massey_lower_bound(dist: Distribution, noise: SymmetricNoise, kappa: float = KAPPA_SAFE) -> float:
    """``2**(H(X) + H(V)) / (kappa * M) + 1`` for the expected guessing time after one answer."""
    return 2.0 ** (entropy(dist.probs) + entropy(noise.channel)) / (kappa * noise.m) + 1.0


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    mean: float
    std_error: float
    seed: int
    exact: Fraction

    def to_json(self) -> dict:
        out = asdict(self)
        out["exact"] = f"{self.exact.numerator}/{self.exact.denominator}"
        return out


def _joint_sampler(table: list[Fraction], rng: np.random.Generator, size: int) -> np.ndarray:
    """Inverse-CDF draws over an exact discrete law; integer arithmetic when it fits in 63 bits."""
    den = math.lcm(*(p.denominator for p in table))
    if den < 2 ** 62:
        cum = np.cumsum([p.numerator * (den // p.denominator) for p in table], dtype=np.int64)
        u = rng.integers(0, den, size=size, dtype=np.int64)
        return np.searchsorted(cum, u, side="right")
    cum = np.cumsum([float(p) for p in table])
    cum[-1] = 1.0
    return np.searchsorted(cum, rng.random(size), side="right")


def simulate_game(dist: Distribution, noise: SymmetricNoise, part: AnyPartition,
                  f: MomentFunction | None = None, trials: int = 100_000,
                  seed: int = 0) -> SimulationReport:
    """Play the game ``trials`` times: draw X and V, answer, guess in posterior order."""
    if trials < 1:
        raise ValueError("trials must be positive")
    n, m = dist.n, noise.m
    f = f if f is not None else MomentFunction.identity(n)
    _check_f(n, f)
    ps = build_posterior_system(dist, noise)
    sets = posterior_sets_of(ps, part)
    # stop[y, x] = guess number at which symbol x is reached after answer y
    stop = np.zeros((m, n), dtype=np.int64)
    for y, s in enumerate(sets):
        for rank, t in enumerate(s):
            stop[y, t.symbol] = rank
    fvals = np.array([float(v) for v in f.values])
    classes = np.array(part.classes, dtype=np.int64)

    rng = np.random.Generator(np.random.PCG64(seed))
    joint = [t.value for t in ps.terms]  # index k*m + v
    draws = _joint_sampler(joint, rng, trials)
    x, v = np.divmod(draws, m)
    y = (classes[x] + v) % m
    cost = fvals[stop[y, x]]
    mean = float(cost.mean())
    se = float(cost.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    exact = guesswork_moment(dist, noise, part, f)
    return SimulationReport(trials, mean, se, seed, exact)
