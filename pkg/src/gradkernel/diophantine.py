"""Minimal solutions of one linear degree equation over the naturals.

The equation is a.p - b.q = c with positive integer weight lists a, b and
solutions (p; q) in natural numbers.  Two sets drive the series normal form:

* the Hilbert basis M(a, b): minimal nonzero solutions of the homogeneous
  equation (componentwise partial order), and
* M(a, b, c): the minimal solutions of the inhomogeneous equation.

Every solution splits as an element of M(a, b, c) plus a natural-number
combination of the Hilbert basis; :func:`decompose_solution` computes the
greedy such splitting.

The search is a Contejean-Devie completion: walk up from the unit vectors,
only ever stepping in a direction whose weight opposes the current defect,
collect exact solutions, and prune any node that dominates a known solution.
Termination follows from Dickson's lemma, and the inhomogeneous case is
folded in by a slack variable with weight -c capped at exponent 1.  A final
minimality sieve is kept as a cheap safety net.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import NamedTuple

from .errors import BoundTooLarge, NotASolution

#: Componentwise guard for the brute-force oracle.
MAX_BRUTE_BOUND = 1000


class DegreeEquation(NamedTuple):
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: int


class Solution(NamedTuple):
    p: tuple[int, ...]
    q: tuple[int, ...]


def _validate_weights(a, b) -> tuple[tuple[int, ...], tuple[int, ...]]:
    a = tuple(int(x) for x in a)
    b = tuple(int(x) for x in b)
    if any(x <= 0 for x in a + b):
        raise ValueError("weight lists must be strictly positive")
    return a, b


def evaluate(eq: DegreeEquation, s: Solution) -> int:
    return sum(x * y for x, y in zip(eq.a, s.p)) - sum(
        x * y for x, y in zip(eq.b, s.q)
    )


def dominates(s: Solution, t: Solution) -> bool:
    """True when s >= t componentwise."""
    return all(x >= y for x, y in zip(s.p + s.q, t.p + t.q))


def _completion(coeffs: tuple[int, ...], caps: tuple[int, ...]):
    """Minimal nonzero solutions of sum(coeffs[i] * x_i) = 0 within caps."""
    n = len(coeffs)
    minimal: list[tuple[int, ...]] = []
    frontier = {
        tuple(1 if j == i else 0 for j in range(n))
        for i in range(n)
        if caps[i] >= 1
    }
    while frontier:
        values = {v: sum(c * x for c, x in zip(coeffs, v)) for v in frontier}
        # solutions of this level first, so domination pruning sees them
        for v in sorted(v for v, val in values.items() if val == 0):
            if not any(all(x >= y for x, y in zip(v, m)) for m in minimal):
                minimal.append(v)
        nxt = set()
        for v, val in values.items():
            if val == 0:
                continue
            for i in range(n):
                if coeffs[i] * val < 0 and v[i] < caps[i]:
                    w = tuple(x + (1 if j == i else 0) for j, x in enumerate(v))
                    if not any(
                        all(x >= y for x, y in zip(w, m)) for m in minimal
                    ):
                        nxt.add(w)
        frontier = nxt
    # safety sieve: drop anything dominating another entry
    sieved = [
        v
        for v in minimal
        if not any(
            w != v and all(x >= y for x, y in zip(v, w)) for w in minimal
        )
    ]
    return sorted(sieved)


@lru_cache(maxsize=None)
def hilbert_basis(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[Solution, ...]:
    """Minimal nonzero solutions of a.p = b.q, in lexicographic order.

    Either side may be empty, in which case the equation degenerates to the
    pure sub-equation on the other side and the basis is empty (all weights
    are strictly positive, so only zero solves it).
    """
    a, b = _validate_weights(a, b)
    ka = len(a)
    coeffs = a + tuple(-x for x in b)
    if not coeffs:
        return ()
    caps = (MAX_BRUTE_BOUND * 10,) * len(coeffs)
    raw = _completion(coeffs, caps)
    return tuple(Solution(v[:ka], v[ka:]) for v in raw)


@lru_cache(maxsize=None)
def minimal_inhomogeneous(
    a: tuple[int, ...], b: tuple[int, ...], c: int
) -> tuple[Solution, ...]:
    """Minimal solutions of a.p - b.q = c, lexicographically ordered.

    May be empty (for instance a=(2), b=(2), c=1).  For c = 0 the unique
    minimal solution is the zero vector.
    """
    a, b = _validate_weights(a, b)
    ka, kb = len(a), len(b)
    coeffs = a + tuple(-x for x in b) + (-int(c),)
    caps = (MAX_BRUTE_BOUND * 10,) * (ka + kb) + (1,)
    raw = _completion(coeffs, caps)
    picked = [v[: ka + kb] for v in raw if v[-1] == 1]
    out = [Solution(v[:ka], v[ka:]) for v in picked]
    # the slack-capped completion already yields a minimal antichain, but a
    # final sieve keeps this independent of search order
    out = [
        s for s in out if not any(t != s and dominates(s, t) for t in out)
    ]
    return tuple(sorted(out))


@dataclass(frozen=True)
class HilbertData:
    """Solution structure of one degree equation.

    homogeneous:    the Hilbert basis M(a, b).
    inhomogeneous:  the minimal solutions M(a, b, c).
    """

    equation: DegreeEquation
    homogeneous: tuple[Solution, ...]
    inhomogeneous: tuple[Solution, ...]


@lru_cache(maxsize=None)
def hilbert_data(a: tuple[int, ...], b: tuple[int, ...], c: int) -> HilbertData:
    a, b = _validate_weights(a, b)
    return HilbertData(
        DegreeEquation(a, b, int(c)),
        hilbert_basis(a, b),
        minimal_inhomogeneous(a, b, c),
    )


def decompose_solution(s: Solution, data: HilbertData):
    """Split s into (minimal part, basis multiplicities), greedily.

    At each step the lexicographically largest basis element that still fits
    is subtracted; the walk provably lands in M(a, b, c).  Raises
    :class:`NotASolution` when s does not solve the equation.
    """
    s = Solution(tuple(s.p), tuple(s.q))
    eq = data.equation
    if len(s.p) != len(eq.a) or len(s.q) != len(eq.b):
        raise NotASolution(f"shape of {s} does not match {eq}")
    if any(x < 0 for x in s.p + s.q):
        raise NotASolution(f"{s} has negative entries")
    if evaluate(eq, s) != eq.c:
        raise NotASolution(f"{s} does not solve {eq}")
    inhom = set(data.inhomogeneous)
    basis_desc = sorted(data.homogeneous, reverse=True)
    counts: dict[Solution, int] = {}
    current = s
    while current not in inhom:
        for g in basis_desc:
            if dominates(current, g):
                current = Solution(
                    tuple(x - y for x, y in zip(current.p, g.p)),
                    tuple(x - y for x, y in zip(current.q, g.q)),
                )
                counts[g] = counts.get(g, 0) + 1
                break
        else:
            raise NotASolution(
                f"{s} admits no decomposition over the computed sets"
            )
    return current, counts


def recompose(m: Solution, counts: dict[Solution, int]) -> Solution:
    """Inverse of :func:`decompose_solution`: m plus the weighted basis sum."""
    p = list(m.p)
    q = list(m.q)
    for g, k in counts.items():
        for i, x in enumerate(g.p):
            p[i] += k * x
        for i, x in enumerate(g.q):
            q[i] += k * x
    return Solution(tuple(p), tuple(q))


def brute_force_solutions(
    a, b, c: int, bound: int
) -> tuple[Solution, ...]:
    """All solutions with every component <= bound, by direct enumeration.

    The independent oracle for the completion search.  Exponential in the
    number of variables; ``bound`` is guarded by :data:`MAX_BRUTE_BOUND`.
    """
    a, b = _validate_weights(a, b)
    if bound > MAX_BRUTE_BOUND:
        raise BoundTooLarge(f"bound {bound} exceeds {MAX_BRUTE_BOUND}")
    if bound < 0:
        raise ValueError("negative bound")
    rng = range(bound + 1)
    out = []
    for p in product(rng, repeat=len(a)):
        lhs = sum(x * y for x, y in zip(a, p))
        for q in product(rng, repeat=len(b)):
            if lhs - sum(x * y for x, y in zip(b, q)) == c:
                out.append(Solution(p, q))
    return tuple(sorted(out))
