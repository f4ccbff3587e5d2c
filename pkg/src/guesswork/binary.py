"""Binary questions: zigzag, sibling graph, and enumeration of all optimal partitions."""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    AnyPartition, BinarySymmetric, Distribution, MomentFunction, Partition,
    PosteriorSystem, _check_arity, _check_f, build_posterior_system, dot,
    posterior_sets_of, term_order_key, unconstrained_level_sums,
)
from .errors import CapExceededError, ConditionError, InputError, TiesPresentError

Key = tuple[int, int]  # (symbol, noise index)

DEFAULT_BRUTE_CAP = 20
DEFAULT_LIST_LIMIT = 1024


# ---------------------------------------------------------------------------
# bijections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bijection:
    """An ordering of the M*N posterior terms, read as consecutive blocks of M σ-siblings."""
    order: tuple[Key, ...]
    m: int

    def __post_init__(self):
        if self.m < 2 or len(self.order) % self.m:
            raise InputError("bijection length must be a multiple of M >= 2")
        if len(set(self.order)) != len(self.order):
            raise InputError("bijection lists a term twice")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Sequence[Key]], m: int) -> "Bijection":
        order = []
        for b in blocks:
            if len(b) != m:
                raise InputError(f"σ-sibling block {b!r} does not have {m} terms")
            order.extend(tuple(t) for t in b)
        return cls(tuple(order), m)

    @classmethod
    def descending(cls, ps: PosteriorSystem) -> "Bijection":
        return cls(tuple(t.key for t in ps.sigma_down), ps.m)

    @property
    def blocks(self) -> list[tuple[Key, ...]]:
        m = self.m
        return [self.order[i:i + m] for i in range(0, len(self.order), m)]

    @property
    def n(self) -> int:
        return len(self.order) // self.m

    def check_against(self, ps: PosteriorSystem) -> None:
        if self.m != ps.m or set(self.order) != {t.key for t in ps.terms}:
            raise InputError("σ is not a permutation of the posterior terms")


# ---------------------------------------------------------------------------
# sibling graph
# ---------------------------------------------------------------------------

class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> list[list]:
        out = defaultdict(list)
        for x in sorted(self.parent):
            out[self.find(x)].append(x)
        return sorted(out.values())


@dataclass(frozen=True)
class SiblingGraph:
    vertices: tuple[Key, ...]
    posterior_edges: tuple[tuple[Key, Key], ...]
    sigma_edges: tuple[tuple[Key, Key], ...]
    components: tuple[tuple[Key, ...], ...]

    @property
    def component_count(self) -> int:
        return len(self.components)

    def neighbours(self) -> dict[Key, set[Key]]:
        adj = {v: set() for v in self.vertices}
        for a, b in self.posterior_edges + self.sigma_edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def component_shapes(self) -> list[tuple[str, int]]:
        """``("edge", 2)`` for an isolated edge, ``("cycle", L)`` for a simple L-cycle, else ``("other", L)``."""
        adj = self.neighbours()
        shapes = []
        for comp in self.components:
            degs = {len(adj[v]) for v in comp}
            if len(comp) == 2 and degs == {1}:
                shapes.append(("edge", 2))
            elif degs == {2}:
                shapes.append(("cycle", len(comp)))
            else:
                shapes.append(("other", len(comp)))
        return shapes

    def two_colorings(self) -> list[dict[Key, int]]:
        """One base 2-coloring per component (smallest vertex gets colour 0)."""
        adj = self.neighbours()
        out = []
        for comp in self.components:
            colour = {comp[0]: 0}
            stack = [comp[0]]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in colour:
                        colour[w] = 1 - colour[v]
                        stack.append(w)
                    elif colour[w] == colour[v]:
                        raise InputError("sibling graph is not bipartite")
            out.append(colour)
        return out


def sibling_graph(ps: PosteriorSystem, sigma: Bijection) -> SiblingGraph:
    sigma.check_against(ps)
    vertices = tuple(t.key for t in ps.terms)
    post = []
    for k in range(ps.n):
        sibs = [(k, v) for v in range(ps.m)]
        post.extend((a, b) for i, a in enumerate(sibs) for b in sibs[i + 1:])
    sig = []
    for block in sigma.blocks:
        sig.extend((a, b) for i, a in enumerate(block) for b in block[i + 1:])
    uf = UnionFind(vertices)
    for a, b in post + sig:
        uf.union(a, b)
    comps = tuple(tuple(g) for g in uf.groups())
    return SiblingGraph(vertices, tuple(post), tuple(sig), comps)


# ---------------------------------------------------------------------------
# partitions vs bijections
# ---------------------------------------------------------------------------

def zigzag_partition(n: int) -> Partition:
    """Odd ranks (1st, 3rd, ...) of the descending order go to A."""
    if n < 1:
        raise InputError("N must be at least 1")
    return Partition(tuple(k % 2 == 0 for k in range(n)))


def _answer_of(part: AnyPartition, key: Key, m: int) -> int:
    return (part.classes[key[0]] + key[1]) % m


def is_posterior_respecting(part: AnyPartition, sigma: Bijection, ps: PosteriorSystem) -> bool:
    """No two σ-siblings fall in the same posterior set (works for any M)."""
    _check_arity(ps.n, ps.m, part)
    sigma.check_against(ps)
    for block in sigma.blocks:
        answers = {_answer_of(part, key, ps.m) for key in block}
        if len(answers) != len(block):
            return False
    return True


def is_order_preserving(part: AnyPartition, sigma: Bijection, ps: PosteriorSystem) -> bool:
    _check_arity(ps.n, ps.m, part)
    sigma.check_against(ps)
    last = [None] * ps.m
    for key in sigma.order:
        y = _answer_of(part, key, ps.m)
        rank = term_order_key(ps.term(*key))
        if last[y] is not None and not last[y] < rank:
            return False
        last[y] = rank
    return True


def is_induced(part: AnyPartition, sigma: Bijection, ps: PosteriorSystem) -> bool:
    """Block k of σ equals the set of k-th largest terms across the posterior sets."""
    _check_arity(ps.n, ps.m, part)
    sigma.check_against(ps)
    sets = posterior_sets_of(ps, part)
    for k, block in enumerate(sigma.blocks):
        if set(block) != {s[k].key for s in sets}:
            return False
    return True


# ---------------------------------------------------------------------------
# optimal partitions
# ---------------------------------------------------------------------------

@dataclass
class OptimalPartitions:
    count: int | None               # 2**c, complements counted separately; None under ties
    components: int
    partitions: list[Partition]     # capped at the list limit
    optimum_levels: list[Fraction]  # stopping-time distribution shared by every optimum
    certified: bool
    truncated: bool = False

    @property
    def canonical_count(self) -> int | None:
        return None if self.count is None else self.count // 2

    def value(self, f: MomentFunction) -> Fraction:
        return dot(f, self.optimum_levels)


def _require_bsc(noise) -> None:
    if not isinstance(noise, BinarySymmetric):
        raise InputError("this operation needs a binary symmetric noise model")


def enumerate_optimal_partitions(dist: Distribution, noise: BinarySymmetric,
                                 list_limit: int = DEFAULT_LIST_LIMIT) -> OptimalPartitions:
    """Every 2-coloring of the sibling graph of the descending order is an optimal question.

    Under ties the count is not certified and only the first coloring is returned.
    """
    _require_bsc(noise)
    ps = build_posterior_system(dist, noise)
    sigma = Bijection.descending(ps)
    graph = sibling_graph(ps, sigma)
    base = graph.two_colorings()
    c = len(base)
    levels = unconstrained_level_sums(ps)

    def build(mask: int) -> Partition:
        colour = {}
        for i, comp in enumerate(base):
            flip = (mask >> i) & 1
            for key, col in comp.items():
                colour[key] = col ^ flip
        # (k, 0) in answer set 1 means class(k) = 1, i.e. k in A
        return Partition(tuple(colour[(k, 0)] == 1 for k in range(ps.n)))

    if ps.has_ties:
        return OptimalPartitions(None, c, [build(0)], levels, certified=False)
    total = 2 ** c
    shown = min(total, list_limit)
    parts = [build(mask) for mask in range(shown)]
    return OptimalPartitions(total, c, parts, levels, certified=True,
                             truncated=shown < total)


def is_zigzag_unique(dist: Distribution, noise: BinarySymmetric) -> bool:
    _require_bsc(noise)
    ps = build_posterior_system(dist, noise)
    if ps.has_ties:
        raise TiesPresentError("uniqueness is only decided for distinct posterior terms")
    return sibling_graph(ps, Bijection.descending(ps)).component_count == 1


def check_remark3_condition(dist: Distribution, noise: BinarySymmetric) -> bool:
    """Geometric-like sufficient condition for the descending sibling graph to be one 2N-cycle."""
    _require_bsc(noise)
    p = dist.probs
    if len(p) < 3:
        raise ConditionError("the condition needs N >= 3")
    ratio = noise.eps / (1 - noise.eps)
    lower = max(p[k + 2] / p[k] for k in range(len(p) - 2))
    upper = min(p[k + 1] / p[k] for k in range(len(p) - 1))
    return lower < ratio < upper


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def scaled_channel_table(ps: PosteriorSystem) -> tuple[list[list[int]], int]:
    """Integer numerators ``table[k][v]`` of every term over one common denominator."""
    den = math.lcm(*(t.value.denominator for t in ps.terms))
    table = [[0] * ps.m for _ in range(ps.n)]
    for t in ps.terms:
        table[t.symbol][t.noise] = t.value.numerator * (den // t.value.denominator)
    return table, den


def scaled_levels(table: list[list[int]], classes: Sequence[int], m: int) -> list[int]:
    n = len(table)
    totals = [0] * n
    for y in range(m):
        col = sorted((table[k][(y - classes[k]) % m] for k in range(n)), reverse=True)
        for k in range(n):
            totals[k] += col[k]
    return totals


def scaled_f(f: MomentFunction) -> tuple[list[int], int]:
    den = math.lcm(*(v.denominator for v in f.values)) if f.values else 1
    return [v.numerator * (den // v.denominator) for v in f.values], den


def _binary_chunk(args):
    table, fvals, lo, hi = args
    n = len(table)
    best, arg = None, []
    for rest in range(lo, hi):
        classes = [1] + [(rest >> i) & 1 for i in range(n - 1)]
        value = sum(a * b for a, b in zip(fvals, scaled_levels(table, classes, 2)))
        if best is None or value < best:
            best, arg = value, [rest]
        elif value == best:
            arg.append(rest)
    return best, arg


def _parallel_min(chunk_fn, table, fvals, total: int, workers: int):
    if workers <= 1 or total < 4096:
        return chunk_fn((table, fvals, 0, total))
    step = -(-total // workers)
    jobs = [(table, fvals, lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(chunk_fn, jobs))
    best = min(r[0] for r in results)
    return best, [a for r in results if r[0] == best for a in r[1]]


def brute_force_optimal(dist: Distribution, noise: BinarySymmetric, f: MomentFunction | None = None,
                        cap: int = DEFAULT_BRUTE_CAP, workers: int = 1):
    """Exhaustive minimum over the 2**(N-1) partitions containing symbol 0.

    Returns ``(min value, sorted list of canonical argmin partitions)``.
    """
    _require_bsc(noise)
    n = dist.n
    if n > cap:
        raise CapExceededError(f"N={n} exceeds brute-force cap {cap}")
    if f is None:
        f = MomentFunction.identity(n)
    _check_f(n, f)
    ps = build_posterior_system(dist, noise)
    table, den = scaled_channel_table(ps)
    fvals, fden = scaled_f(f)
    best, arg = _parallel_min(_binary_chunk, table, fvals, 2 ** (n - 1), workers)
    parts = [Partition((True,) + tuple(bool((r >> i) & 1) for i in range(n - 1))) for r in arg]
    parts.sort(key=lambda p: sorted(p.subset))
    return Fraction(best, den * fden), parts
