"""Domain types, posterior-term algebra and guessing-moment evaluation.

Symbols are indexed from 0 in the internal descending-probability order;
``Distribution.user_order`` maps them back to the caller's labels.  Noise
index 0 is always the truthful answer, so for a binary symmetric channel
the two posterior-siblings of symbol ``k`` are ``(1 - eps) p(k)`` (noise 0)
and ``eps p(k)`` (noise 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import ArityError, InputError


def parse_rational(value) -> Fraction:
    """Parse a decimal string, ``"p/q"`` string or int into an exact Fraction."""
    if isinstance(value, bool):
        raise InputError(f"malformed number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        # floats would silently round; refuse them
        raise InputError(f"malformed number (use a string): {value!r}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed number: {value!r}") from exc


# ---------------------------------------------------------------------------
# distributions, noise, moment functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Distribution:
    probs: tuple[Fraction, ...]
    user_order: tuple[int, ...]

    def __post_init__(self):
        if not self.probs:
            raise InputError("distribution must contain at least one symbol")
        if any(p <= 0 for p in self.probs):
            raise InputError("probabilities must be strictly positive")
        if sum(self.probs) != 1:
            raise InputError(f"probabilities sum to {sum(self.probs)}, not 1")
        if any(a < b for a, b in zip(self.probs, self.probs[1:])):
            raise InputError("internal probabilities must be nonincreasing")
        if sorted(self.user_order) != list(range(len(self.probs))):
            raise InputError("user_order must be a permutation")

    @classmethod
    def from_probs(cls, probs: Iterable) -> "Distribution":
        """Sort caller probabilities descending (stably) and record the labels."""
        values = [parse_rational(p) for p in probs]
        order = sorted(range(len(values)), key=lambda i: -values[i])
        return cls(tuple(values[i] for i in order), tuple(order))

    @property
    def n(self) -> int:
        return len(self.probs)

    def user_label(self, k: int) -> int:
        """1-based caller label of internal symbol ``k``."""
        return self.user_order[k] + 1


@dataclass(frozen=True)
class BinarySymmetric:
    """Crossover ``eps``; inputs above 1/2 are folded to ``1 - eps`` with ``flipped`` set."""
    eps: Fraction
    flipped: bool = False

    def __post_init__(self):
        if not 0 <= self.eps <= Fraction(1, 2):
            raise InputError("BSC crossover must lie in [0, 1/2] after normalization")

    @classmethod
    def make(cls, eps) -> "BinarySymmetric":
        eps = parse_rational(eps)
        if not 0 <= eps <= 1:
            raise InputError(f"crossover probability {eps} outside [0, 1]")
        if eps > Fraction(1, 2):
            return cls(1 - eps, True)
        return cls(eps)

    @property
    def m(self) -> int:
        return 2

    @property
    def channel(self) -> tuple[Fraction, ...]:
        return (1 - self.eps, self.eps)


@dataclass(frozen=True)
class MaryAdditive:
    """Modulo-additive noise: the answer is ``class + V mod M`` with ``P(V = v) = eps[v]``."""
    eps: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.eps) < 2:
            raise InputError("M-ary noise needs M >= 2")
        if any(not 0 <= e <= 1 for e in self.eps):
            raise InputError("noise probabilities must lie in [0, 1]")
        if sum(self.eps) != 1:
            raise InputError(f"noise probabilities sum to {sum(self.eps)}, not 1")

    @classmethod
    def make(cls, eps: Iterable) -> "MaryAdditive":
        return cls(tuple(parse_rational(e) for e in eps))

    @property
    def m(self) -> int:
        return len(self.eps)

    @property
    def channel(self) -> tuple[Fraction, ...]:
        return self.eps

    @property
    def fully_symmetric(self) -> bool:
        return len(set(self.eps[1:])) == 1


@dataclass(frozen=True)
class BinaryAsymmetric:
    """``eps`` is the 0 -> 1 crossover (symbol outside A), ``delta`` the 1 -> 0 crossover."""
    eps: Fraction
    delta: Fraction

    def __post_init__(self):
        for name, v in (("eps", self.eps), ("delta", self.delta)):
            if not 0 <= v <= 1:
                raise InputError(f"{name}={v} outside [0, 1]")

    @classmethod
    def make(cls, eps, delta) -> "BinaryAsymmetric":
        return cls(parse_rational(eps), parse_rational(delta))

    @property
    def m(self) -> int:
        return 2


NoiseModel = Union[BinarySymmetric, MaryAdditive, BinaryAsymmetric]
SymmetricNoise = Union[BinarySymmetric, MaryAdditive]


@dataclass(frozen=True)
class MomentFunction:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise InputError("moment function must be nondecreasing")

    @classmethod
    def from_values(cls, values: Iterable) -> "MomentFunction":
        return cls(tuple(parse_rational(v) for v in values))

    @classmethod
    def identity(cls, n: int) -> "MomentFunction":
        return cls(tuple(Fraction(k) for k in range(1, n + 1)))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]


# ---------------------------------------------------------------------------
# posterior terms
# ---------------------------------------------------------------------------

class PosteriorTerm(NamedTuple):
    symbol: int
    noise: int
    value: Fraction

    @property
    def key(self) -> tuple[int, int]:
        return (self.symbol, self.noise)


def term_order_key(t: PosteriorTerm):
    """Total order used everywhere: value descending, then symbol, then noise index."""
    return (-t.value, t.symbol, t.noise)


@dataclass(frozen=True)
class PosteriorSystem:
    n: int
    m: int
    terms: tuple[PosteriorTerm, ...]          # symbol-major: terms[k*m + v]
    sigma_down: tuple[PosteriorTerm, ...]
    has_ties: bool = field(default=False)

    def term(self, symbol: int, noise: int) -> PosteriorTerm:
        return self.terms[symbol * self.m + noise]

    def rank(self) -> dict[tuple[int, int], int]:
        """Position of every term key in ``sigma_down``."""
        return {t.key: i for i, t in enumerate(self.sigma_down)}


def build_posterior_system(dist: Distribution, noise: SymmetricNoise) -> PosteriorSystem:
    if isinstance(noise, BinaryAsymmetric):
        raise InputError("posterior system needs a symmetric (modulo-additive) noise model")
    channel = noise.channel
    m = len(channel)
    terms = tuple(PosteriorTerm(k, v, channel[v] * p)
                  for k, p in enumerate(dist.probs) for v in range(m))
    down = tuple(sorted(terms, key=term_order_key))
    ties = any(a.value == b.value for a, b in zip(down, down[1:]))
    return PosteriorSystem(dist.n, m, terms, down, ties)


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Binary question ``X in A``; ``members[k]`` is True when symbol ``k`` is in A."""
    members: tuple[bool, ...]

    @classmethod
    def from_set(cls, n: int, subset: Iterable[int]) -> "Partition":
        s = set(subset)
        if any(not 0 <= k < n for k in s):
            raise InputError(f"partition members out of range for N={n}")
        return cls(tuple(k in s for k in range(n)))

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def m(self) -> int:
        return 2

    @property
    def subset(self) -> frozenset[int]:
        return frozenset(k for k, inside in enumerate(self.members) if inside)

    def complement(self) -> "Partition":
        return Partition(tuple(not x for x in self.members))

    @property
    def is_canonical(self) -> bool:
        return bool(self.members) and self.members[0]

    def canonical(self) -> "Partition":
        """The representative of ``{A, complement}`` that contains symbol 0."""
        return self if self.is_canonical or not self.members else self.complement()

    @property
    def classes(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.members)

    def to_mpartition(self) -> "MPartition":
        return MPartition(self.classes, 2)


@dataclass(frozen=True)
class MPartition:
    """M-ary question: ``assignment[k]`` is the class of symbol ``k``."""
    assignment: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise InputError("M must be at least 2")
        if any(not 0 <= a < self.m for a in self.assignment):
            raise InputError("class index out of range")

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def classes(self) -> tuple[int, ...]:
        return self.assignment

    def blocks(self) -> list[frozenset[int]]:
        out = [set() for _ in range(self.m)]
        for k, a in enumerate(self.assignment):
            out[a].add(k)
        return [frozenset(b) for b in out]

    def to_partition(self) -> Partition:
        if self.m != 2:
            raise ArityError("only a 2-class partition converts to a binary one")
        return Partition(tuple(a == 1 for a in self.assignment))


AnyPartition = Union[Partition, MPartition]


def _check_arity(n: int, m: int, part: AnyPartition) -> None:
    if part.n != n:
        raise ArityError(f"partition covers {part.n} symbols, distribution has {n}")
    if part.m != m:
        raise ArityError(f"partition has {part.m} classes but the noise alphabet has {m}")


def posterior_sets(dist: Distribution, noise: SymmetricNoise,
                   part: AnyPartition) -> list[list[PosteriorTerm]]:
    """Posterior sets for every answer, each sorted by the term order.

    Term ``(k, v)`` is consistent with answer ``(class(k) + v) mod M``.
    """
    ps = build_posterior_system(dist, noise)
    return posterior_sets_of(ps, part)


def posterior_sets_of(ps: PosteriorSystem, part: AnyPartition) -> list[list[PosteriorTerm]]:
    _check_arity(ps.n, ps.m, part)
    sets: list[list[PosteriorTerm]] = [[] for _ in range(ps.m)]
    classes = part.classes
    for t in ps.terms:
        sets[(classes[t.symbol] + t.noise) % ps.m].append(t)
    for s in sets:
        s.sort(key=term_order_key)
    return sets


def level_sums(ps: PosteriorSystem, part: AnyPartition) -> list[Fraction]:
    """Probability that the guessing game stops at guess k, for k = 1..N."""
    sets = posterior_sets_of(ps, part)
    return [sum(s[k].value for s in sets) for k in range(ps.n)]


def _check_f(n: int, f: MomentFunction) -> None:
    if len(f) != n:
        raise ArityError(f"moment table has {len(f)} entries, expected {n}")


def guesswork_moment(dist: Distribution, noise: SymmetricNoise, part: AnyPartition,
                     f: MomentFunction | None = None) -> Fraction:
    """Exact E[f(guessing time)] when Bob guesses in posterior order after one noisy answer."""
    if f is None:
        f = MomentFunction.identity(dist.n)
    _check_f(dist.n, f)
    ps = build_posterior_system(dist, noise)
    return sum((fk * s for fk, s in zip(f.values, level_sums(ps, part))), Fraction(0))


def unconstrained_level_sums(ps: PosteriorSystem) -> list[Fraction]:
    m = ps.m
    return [sum(t.value for t in ps.sigma_down[k * m:(k + 1) * m]) for k in range(ps.n)]


def unconstrained_minimum(dist: Distribution, noise: SymmetricNoise,
                          f: MomentFunction | None = None) -> Fraction:
    """Relaxation bound: sorted posterior terms grouped into consecutive blocks of M."""
    if f is None:
        f = MomentFunction.identity(dist.n)
    _check_f(dist.n, f)
    ps = build_posterior_system(dist, noise)
    return sum((fk * s for fk, s in zip(f.values, unconstrained_level_sums(ps))), Fraction(0))


def dot(f: MomentFunction | Sequence[Fraction], sums: Sequence[Fraction]) -> Fraction:
    values = f.values if isinstance(f, MomentFunction) else f
    return sum((a * b for a, b in zip(values, sums)), Fraction(0))


# ---------------------------------------------------------------------------
# input documents
# ---------------------------------------------------------------------------

def parse_noise(doc) -> NoiseModel:
    if not isinstance(doc, dict) or "type" not in doc:
        raise InputError("noise must be an object with a 'type' field")
    kind = doc["type"]
    if kind == "bsc":
        return BinarySymmetric.make(doc.get("eps"))
    if kind == "mary":
        eps = doc.get("eps")
        if not isinstance(eps, list):
            raise InputError("'mary' noise needs an 'eps' list")
        return MaryAdditive.make(eps)
    if kind == "asym":
        if "delta" not in doc:
            raise InputError("'asym' noise needs 'delta'")
        return BinaryAsymmetric.make(doc.get("eps"), doc["delta"])
    raise InputError(f"unknown noise type {kind!r}")


def parse_distribution(text: str | dict):
    """Parse the JSON instance document.

    Returns ``(Distribution, NoiseModel, MomentFunction)``; the moment table
    is given in internal rank order (``f[k]`` weighs the k-th guess) and
    defaults to ``f(k) = k``.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
    else:
        doc = text
    if not isinstance(doc, dict) or not isinstance(doc.get("probs"), list):
        raise InputError("document must be an object with a 'probs' list")
    dist = Distribution.from_probs(doc["probs"])
    noise = parse_noise(doc.get("noise"))
    if "f" in doc and doc["f"] is not None:
        if not isinstance(doc["f"], list):
            raise InputError("'f' must be a list")
        f = MomentFunction.from_values(doc["f"])
        _check_f(dist.n, f)
    else:
        f = MomentFunction.identity(dist.n)
    return dist, noise, f
