"""Exact slope arithmetic on the torus and distances in the Farey graph.

A slope is stored as a reduced pair ``(p, q)`` read as the extended rational
``p/q``; ``1/0`` is infinity.  All arithmetic uses Python integers, so slopes
with thousands of digits (deep Fibonacci layerings) are fine.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Optional

__all__ = [
    "Slope",
    "INF",
    "ZERO",
    "ONE",
    "reduce",
    "parse_slope",
    "intersection_number",
    "mediant",
    "anti_mediant",
    "is_farey_triple",
    "farey_distance",
    "farey_distance_bfs",
    "continued_fraction",
    "fibonacci",
    "fibonacci_slope",
    "fibonacci_distance_closed_form",
    "apply_matrix",
    "matrix_to_infinity",
]


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        if gcd(p, q) != 1 or q < 0 or (q == 0 and p != 1):
            raise ValueError(f"{p}/{q} is not in canonical form; use reduce()")

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def vector(self) -> tuple[int, int]:
        return (self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def __repr__(self) -> str:
        return f"Slope({self.p}/{self.q})"


def reduce(a: int, b: int) -> Slope:
    """Canonical slope of the pair ``(a, b)``: coprime, ``q > 0`` or ``1/0``."""
    if a == 0 and b == 0:
        raise ValueError("(0, 0) does not determine a slope")
    g = gcd(a, b)
    a, b = a // g, b // g
    if b < 0 or (b == 0 and a < 0):
        a, b = -a, -b
    return Slope(a, b)


INF = Slope(1, 0)
ZERO = Slope(0, 1)
ONE = Slope(1, 1)


def parse_slope(text: str) -> Slope:
    """Parse ``"p/q"``, a bare integer, or ``inf``/``∞``."""
    s = text.strip()
    if s.lower() in ("inf", "infinity", "∞"):
        return INF
    if "/" in s:
        num, den = s.split("/", 1)
        return reduce(int(num), int(den))
    return reduce(int(s), 1)


def intersection_number(s: Slope, t: Slope) -> int:
    return abs(s.p * t.q - s.q * t.p)


def _require_edge(s: Slope, t: Slope) -> None:
    if intersection_number(s, t) != 1:
        raise ValueError(f"{s} and {t} do not span a Farey edge")


def mediant(s: Slope, t: Slope) -> Slope:
    _require_edge(s, t)
    return reduce(s.p + t.p, s.q + t.q)


def anti_mediant(s: Slope, t: Slope) -> Slope:
    _require_edge(s, t)
    return reduce(s.p - t.p, s.q - t.q)


def is_farey_triple(a: Slope, b: Slope, c: Slope) -> bool:
    return (
        intersection_number(a, b) == 1
        and intersection_number(b, c) == 1
        and intersection_number(a, c) == 1
    )


def apply_matrix(m, s: Slope) -> Slope:
    """Act on a slope by the integer matrix ``((a, b), (c, d))``."""
    (a, b), (c, d) = m
    return reduce(a * s.p + b * s.q, c * s.p + d * s.q)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k = a // b
        a, b = b, a - k * b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def matrix_to_infinity(s: Slope):
    """A matrix in SL(2, Z) taking ``s`` to ``1/0``."""
    g, x, y = _ext_gcd(s.p, s.q)
    if g < 0:
        x, y = -x, -y
    return ((x, y), (-s.q, s.p))


def continued_fraction(p: int, q: int) -> list[int]:
    """Regular continued fraction of ``p/q`` (``q > 0``); the first term may be
    negative, later ones are positive and the last is at least 2 unless the
    expansion has a single term."""
    if q <= 0:
        raise ValueError("denominator must be positive")
    terms = []
    while q:
        a = p // q
        terms.append(a)
        p, q = q, p - a * q
    return terms


def _distance_from_infinity(s: Slope) -> int:
    if s.is_infinite:
        return 0
    terms = continued_fraction(s.p, s.q)
    # Walk the convergents C_{-1}=inf, C_0, ..., C_n.  Consecutive convergents
    # are adjacent; C_{k-2} and C_k are adjacent exactly when a_k == 1.
    before, last = 0, 1  # distances to C_{k-2}, C_{k-1}
    for a in terms[1:]:
        here = last + 1
        if a == 1:
            here = min(here, before + 1)
        before, last = last, here
    return last


def farey_distance(s: Slope, t: Slope) -> int:
    """Graph distance between two slopes in the Farey graph.

    Moves ``s`` to infinity by an element of SL(2, Z) and reads the distance
    of the image of ``t`` off its continued fraction.
    """
    if s == t:
        return 0
    return _distance_from_infinity(apply_matrix(matrix_to_infinity(s), t))


def _neighbours(s: Slope, bound: int) -> Iterator[Slope]:
    # Solutions (r, u) of |p u - q r| = 1 form the lines (r0, u0) + k (p, q).
    p, q = s.p, s.q
    g, x, y = _ext_gcd(q, -p)  # q x - p y = g = +-1
    if g < 0:
        x, y = -x, -y
    # (r, u) = (x, y) gives p*y - q*x = -1  =>  |p u - q r| = 1
    seen = set()
    for sign in (1, -1):
        r0, u0 = sign * x, sign * y
        if p == 0 and q == 1:
            ks = range(-bound - abs(u0) - 1, bound + abs(u0) + 2)
        else:
            span = bound + max(abs(r0), abs(u0))
            step = max(abs(p), abs(q))
            lim = span // step + 2
            ks = range(-lim, lim + 1)
        for k in ks:
            r, u = r0 + k * p, u0 + k * q
            if abs(r) <= bound and abs(u) <= bound and (r, u) != (0, 0):
                t = reduce(r, u)
                if t not in seen:
                    seen.add(t)
                    yield t


def farey_distance_bfs(s: Slope, t: Slope, bound: Optional[int] = None) -> int:
    """Breadth-first search in the Farey graph truncated to slopes with
    ``|p|, |q| <= bound`` (default: the largest entry of the inputs, at least
    1).  Independent of the continued-fraction route; meant as an oracle."""
    if bound is None:
        bound = max(1, abs(s.p), s.q, abs(t.p), t.q)
    if s == t:
        return 0
    dist = {s: 0}
    queue = deque([s])
    while queue:
        cur = queue.popleft()
        for nxt in _neighbours(cur, bound):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                if nxt == t:
                    return dist[nxt]
                queue.append(nxt)
    raise ValueError(f"{t} unreachable from {s} within bound {bound}")


def fibonacci(k: int) -> int:
    """Fibonacci numbers indexed so that F_0 = F_1 = 1, F_{-1} = 0, F_{-2} = 1."""
    if k < -2:
        raise ValueError("index must be >= -2")
    if k == -2:
        return 1
    a, b = 1, 0  # F_{-2}, F_{-1}
    for _ in range(k + 1):
        a, b = b, a + b
    return b


def fibonacci_slope(k: int) -> Slope:
    """The slope F_{k+1}/F_k."""
    if k < -1:
        raise ValueError("k must be >= -1")
    return reduce(fibonacci(k + 1), fibonacci(k))


def fibonacci_distance_closed_form(k: int) -> int:
    if k < 0:
        raise ValueError("k must be non-negative")
    return k // 2 + 1
