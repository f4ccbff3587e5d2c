"""M-ary questions over a modulo-additive noisy answer."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .binary import (
    Bijection, _parallel_min, is_induced, is_posterior_respecting, scaled_channel_table,
    scaled_f, scaled_levels,
)
from .core import (
    Distribution, MomentFunction, MPartition, MaryAdditive, PosteriorSystem, PosteriorTerm,
    SymmetricNoise, _check_f, build_posterior_system, guesswork_moment,
)
from .dmd import dmd_assignment_to_partition, sigma_to_dmd, solve_dmd
from .errors import CapExceededError, InputError, TiesPresentError

DEFAULT_MARY_CAP = 2_000_000

mary_is_posterior_respecting = is_posterior_respecting
mary_is_induced = is_induced
mary_guesswork = guesswork_moment


def mary_zigzag(n: int, m: int) -> MPartition:
    """The symbol of rank k (1-based) is put in class ``k mod M``."""
    if n < 1 or m < 2:
        raise InputError("need N >= 1 and M >= 2")
    return MPartition(tuple((k + 1) % m for k in range(n)), m)


def is_cyclically_separating(sets: Sequence[Sequence], ps: PosteriorSystem) -> bool:
    """True iff moving a term one noise step also moves it one answer step, for every symbol.

    ``sets`` may hold :class:`PosteriorTerm` objects or ``(symbol, noise)`` keys.
    """
    if len(sets) != ps.m:
        raise InputError(f"expected {ps.m} sets, got {len(sets)}")
    where = {}
    for y, s in enumerate(sets):
        for t in s:
            key = t.key if isinstance(t, PosteriorTerm) else tuple(t)
            if key in where:
                raise InputError(f"term {key} appears in two sets")
            where[key] = y
    if set(where) != {t.key for t in ps.terms}:
        raise InputError("sets do not partition the posterior terms")
    m = ps.m
    return all(where[(k, (v + 1) % m)] == (where[(k, v)] + 1) % m
               for k in range(ps.n) for v in range(m))


def unconstrained_achievable(dist: Distribution, noise: SymmetricNoise,
                             allow_ties: bool = False) -> MPartition | None:
    """A partition inducing the descending order, if one exists.

    Such a partition attains the relaxation bound.  With ``allow_ties`` the
    tie-broken descending order is used; the partition found then still
    attains the bound, but the None answer is no longer a certificate.
    """
    ps = build_posterior_system(dist, noise)
    if ps.has_ties and not allow_ties:
        raise TiesPresentError("posterior terms are not distinct")
    sigma = Bijection.descending(ps)
    z = solve_dmd(sigma_to_dmd(sigma, ps))
    if z is None:
        return None
    return dmd_assignment_to_partition(z, sigma, ps)


def _mary_chunk(args):
    table, fvals, lo, hi, m = args
    n = len(table)
    best, arg = None, []
    for idx in range(lo, hi):
        classes, rest = [], idx
        for _ in range(n):
            rest, a = divmod(rest, m)
            classes.append(a)
        value = sum(a * b for a, b in zip(fvals, scaled_levels(table, classes, m)))
        if best is None or value < best:
            best, arg = value, [idx]
        elif value == best:
            arg.append(idx)
    return best, arg


class _MaryChunk:
    def __init__(self, m):
        self.m = m

    def __call__(self, args):
        table, fvals, lo, hi = args
        return _mary_chunk((table, fvals, lo, hi, self.m))


def mary_brute_force_optimal(dist: Distribution, noise: SymmetricNoise,
                             f: MomentFunction | None = None, cap: int = DEFAULT_MARY_CAP,
                             workers: int = 1) -> tuple[Fraction, list[MPartition]]:
    """Exhaustive minimum over all M**N class assignments, with every argmin."""
    m, n = noise.m, dist.n
    total = m ** n
    if total > cap:
        raise CapExceededError(f"M**N = {total} exceeds brute-force cap {cap}")
    if f is None:
        f = MomentFunction.identity(n)
    _check_f(n, f)
    ps = build_posterior_system(dist, noise)
    table, den = scaled_channel_table(ps)
    fvals, fden = scaled_f(f)
    best, arg = _parallel_min(_MaryChunk(m), table, fvals, total, workers)
    parts = []
    for idx in arg:
        classes = []
        for _ in range(n):
            idx, a = divmod(idx, m)
            classes.append(a)
        parts.append(MPartition(tuple(classes), m))
    parts.sort(key=lambda p: p.assignment)
    return Fraction(best, den * fden), parts


def all_assignments(n: int, m: int):
    for classes in itertools.product(range(m), repeat=n):
        yield MPartition(classes, m)
