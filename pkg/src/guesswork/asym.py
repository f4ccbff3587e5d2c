"""Binary asymmetric channel with small crossovers: exact O(N^2) optimal question.

Under the small-noise condition Bob always exhausts the set Carole points
to before touching its complement, so for a fixed |A| = a the expected
guessing time is a weighted sum of probabilities with known weights
``k + delta (N - a)`` inside A and ``k + eps a`` outside.  Pairing the
smallest weight with the largest probability minimizes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .binary import DEFAULT_BRUTE_CAP
from .core import Distribution, Partition, parse_rational
from .errors import CapExceededError, ConditionError


@dataclass(frozen=True)
class AsymCoefficients:
    a: int
    c: tuple[Fraction, ...]      # weights of the a symbols in A, by in-set rank
    c_bar: tuple[Fraction, ...]  # weights of the N - a symbols outside A

    @classmethod
    def build(cls, n: int, a: int, eps: Fraction, delta: Fraction) -> "AsymCoefficients":
        c = tuple(k + delta * (n - a) for k in range(1, a + 1))
        c_bar = tuple(k + eps * a for k in range(1, n - a + 1))
        return cls(a, c, c_bar)

    def merged(self) -> list[tuple[Fraction, bool]]:
        """All N weights ascending as ``(weight, from_c)``; c-list wins ties."""
        return sorted([(w, True) for w in self.c] + [(w, False) for w in self.c_bar],
                      key=lambda t: (t[0], not t[1]))


def check_small_noise(dist: Distribution, eps, delta) -> bool:
    eps, delta = parse_rational(eps), parse_rational(delta)
    hi, lo = dist.probs[0], dist.probs[-1]
    return eps * hi < (1 - delta) * lo and delta * hi < (1 - eps) * lo


def _require(dist, eps, delta):
    if not check_small_noise(dist, eps, delta):
        raise ConditionError("crossover probabilities violate the small-noise condition")


def _cost(probs, members, eps, delta) -> Fraction:
    n = len(probs)
    inside = [p for p, x in zip(probs, members) if x]
    outside = [p for p, x in zip(probs, members) if not x]
    a = len(inside)
    total = sum(((k + 1) + delta * (n - a)) * p for k, p in enumerate(inside))
    total += sum(((k + 1) + eps * a) * p for k, p in enumerate(outside))
    return Fraction(total)


def asym_guesswork(dist: Distribution, eps, delta, part: Partition) -> Fraction:
    """Expected guessing time when the pointed-to set is searched first."""
    eps, delta = parse_rational(eps), parse_rational(delta)
    _require(dist, eps, delta)
    if part.n != dist.n:
        raise ConditionError("partition size does not match the distribution")
    return _cost(dist.probs, part.members, eps, delta)


def asym_optimal_partition(dist: Distribution, eps, delta) -> tuple[Partition, Fraction]:
    eps, delta = parse_rational(eps), parse_rational(delta)
    _require(dist, eps, delta)
    n = dist.n
    best = None
    for a in range(n + 1):
        coeffs = AsymCoefficients.build(n, a, eps, delta).merged()
        value = sum((w * p for (w, _), p in zip(coeffs, dist.probs)), Fraction(0))
        members = tuple(from_c for _, from_c in coeffs)
        # strict improvement only: smallest a wins ties
        if best is None or value < best[1]:
            best = (Partition(members), value)
    return best


def asym_brute_force(dist: Distribution, eps, delta, cap: int = DEFAULT_BRUTE_CAP):
    """Exhaustive minimum of :func:`asym_guesswork` over all 2**N subsets."""
    eps, delta = parse_rational(eps), parse_rational(delta)
    _require(dist, eps, delta)
    n = dist.n
    if n > cap:
        raise CapExceededError(f"N={n} exceeds brute-force cap {cap}")
    # everything scaled to integers: cost * D * den(eps) * den(delta)
    den = math.lcm(*(p.denominator for p in dist.probs))
    ints = [p.numerator * (den // p.denominator) for p in dist.probs]
    e_num, e_den = eps.numerator, eps.denominator
    d_num, d_den = delta.numerator, delta.denominator
    best, arg = None, []
    for mask in range(2 ** n):
        ranks = s_in = s_out = 0
        r_in = r_out = 0
        for k, p in enumerate(ints):
            if mask >> k & 1:
                r_in += 1
                ranks += r_in * p
                s_in += p
            else:
                r_out += 1
                ranks += r_out * p
                s_out += p
        value = (ranks * e_den * d_den + d_num * e_den * (n - r_in) * s_in
                 + e_num * d_den * r_in * s_out)
        if best is None or value < best:
            best, arg = value, [mask]
        elif value == best:
            arg.append(mask)
    parts = sorted((Partition(tuple(bool(m >> k & 1) for k in range(n))) for m in arg),
                   key=lambda p: sorted(p.subset))
    return Fraction(best, den * e_den * d_den), parts
