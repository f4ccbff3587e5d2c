"""Random instance generators and independent oracles shared by the test modules.

The oracles here deliberately avoid the library's posterior-set machinery:
guessing cost is computed from conditional posteriors P(X | Y = y), and
posterior-respecting assignments are found by a direct search over σ blocks.
"""

import itertools
import random
from fractions import Fraction as F

from guesswork.core import (
    BinarySymmetric, Partition, Distribution, MaryAdditive, MomentFunction, build_posterior_system,
)
from guesswork.dmd import DmdSystem, NaeSatInstance


def random_distribution(rng: random.Random, n: int, hi: int = 100) -> Distribution:
    weights = [rng.randint(1, hi) for _ in range(n)]
    total = sum(weights)
    return Distribution.from_probs([F(w, total) for w in weights])


def random_eps_below_half(rng: random.Random) -> F:
    den = rng.randint(3, 400)
    return F(rng.randint(1, (den - 1) // 2), den)


def tie_free_bsc(rng: random.Random, n: int):
    while True:
        dist = random_distribution(rng, n)
        noise = BinarySymmetric(random_eps_below_half(rng))
        if not build_posterior_system(dist, noise).has_ties:
            return dist, noise


def tie_free_mary(rng: random.Random, n: int, m: int = 3):
    while True:
        dist = random_distribution(rng, n)
        w = [rng.randint(1, 40) for _ in range(m)]
        noise = MaryAdditive(tuple(F(x, sum(w)) for x in w))
        if not build_posterior_system(dist, noise).has_ties:
            return dist, noise


def fully_symmetric_mary(rng: random.Random, n: int, m: int = 3):
    dist = random_distribution(rng, n)
    den = rng.randint(m + 1, 300)
    lie = F(rng.randint(1, den // m), den)  # each wrong answer; truth keeps the rest
    return dist, MaryAdditive((1 - (m - 1) * lie,) + (lie,) * (m - 1))


def f_battery(n: int, rng: random.Random | None = None) -> list[MomentFunction]:
    """Identity, square, two step functions and one random nondecreasing table."""
    rng = rng or random.Random(n)
    half = (n + 1) // 2
    acc, table = F(0), []
    for _ in range(n):
        acc += F(rng.randint(0, 9), rng.randint(1, 7))
        table.append(acc)
    return [
        MomentFunction.identity(n),
        MomentFunction(tuple(F(k * k) for k in range(1, n + 1))),
        MomentFunction(tuple(F(int(k > half)) for k in range(1, n + 1))),
        MomentFunction(tuple(F(k // 3) for k in range(1, n + 1))),
        MomentFunction(tuple(table)),
    ]


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def oracle_guesswork(probs, channel, classes, f) -> F:
    """E f(T) via P(Y = y) * sum_k f(k) P(x_k^y | y), guessing in posterior order."""
    m, n = len(channel), len(probs)
    total = F(0)
    for y in range(m):
        joint = [probs[k] * channel[(y - classes[k]) % m] for k in range(n)]
        py = sum(joint)
        if py == 0:
            continue
        post = sorted((j / py for j in joint), reverse=True)
        total += py * sum(fk * q for fk, q in zip(f, post))
    return total


def oracle_mary_min(probs, channel, f):
    m, n = len(channel), len(probs)
    values = {c: oracle_guesswork(probs, channel, c, f)
              for c in itertools.product(range(m), repeat=n)}
    best = min(values.values())
    return best, sorted(c for c, v in values.items() if v == best)


def admits_respecting_assignment(sigma) -> list[int] | None:
    """DFS over rows, checking σ blocks directly; complete, so None certifies absence."""
    m = sigma.m
    rows = sorted({s for s, _ in sigma.order})
    n = max(rows) + 1 if rows else 0
    blocks_of = {r: [] for r in range(n)}
    for b in sigma.blocks:
        for s, _ in b:
            blocks_of[s].append(b)
    z = [None] * n

    def ok(row):
        for b in blocks_of[row]:
            seen = set()
            for s, v in b:
                if z[s] is None:
                    continue
                y = (z[s] + v) % m
                if y in seen:
                    return False
                seen.add(y)
        return True

    def go(i):
        if i == n:
            return True
        for val in range(m) if i else (0,):
            z[i] = val
            if ok(i) and go(i + 1):
                return True
        z[i] = None
        return False

    return list(z) if go(0) else None


def random_nae(rng: random.Random, max_vars=5, max_clauses=6) -> NaeSatInstance:
    n = rng.randint(1, max_vars)
    clauses = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3))
                    for _ in range(rng.randint(0, max_clauses)))
    return NaeSatInstance(n, clauses)


def random_dmd(rng: random.Random, m=3, max_vars=3, max_eqs=3) -> DmdSystem:
    n = rng.randint(1, max_vars)
    eqs = tuple((rng.randrange(n), rng.randrange(n), rng.randrange(m))
                for _ in range(rng.randint(0, max_eqs)))
    return DmdSystem(m, n, eqs)


# four truthful/lying pairs arranged as in the worked sibling-graph example
CYCLE_AND_EDGE_BLOCKS = [((0, 0), (1, 0)), ((0, 1), (2, 0)), ((1, 1), (2, 1)), ((3, 0), (3, 1))]


def partitions_from_graph(graph, n):
    """Every 2-coloring of the graph read back as a set A (class 1 holds the truthful term)."""
    base = graph.two_colorings()
    out = []
    for flips in itertools.product((0, 1), repeat=len(base)):
        colour = {key: col ^ flip for comp, flip in zip(base, flips) for key, col in comp.items()}
        out.append(Partition(tuple(colour[(k, 0)] == 1 for k in range(n))))
    return out
