"""Simple cycles of the complete bipartite graph K_{n,n}.

A simple cycle on 2k vertices is stored as two sequences ``xs`` (left
vertices) and ``ys`` (right vertices), read as the closed walk

    x_1 -> y_1 -> x_2 -> y_2 -> ... -> x_k -> y_k -> x_1

All vertices are 1-based.  The canonical form anchors the walk at the smallest
left vertex and orients it so that ``y_1 < y_k``; every simple cycle has
exactly one canonical representative.

Canonical enumeration order is: ``k`` ascending, then ``xs`` lexicographic,
then ``ys`` lexicographic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb, factorial, perm
from typing import Iterator, Sequence


@dataclass(frozen=True)
class SimpleCycle:
    xs: tuple[int, ...]
    ys: tuple[int, ...]

    def __post_init__(self):
        xs, ys = tuple(self.xs), tuple(self.ys)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if len(xs) != len(ys):
            raise ValueError(f"odd-length walk: {len(xs)} left vs {len(ys)} right vertices")
        if len(xs) < 2:
            raise ValueError("a simple cycle in K_{n,n} needs at least 4 vertices")
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError(f"repeated vertex in cycle {xs} / {ys}")
        if min(xs) < 1 or min(ys) < 1:
            raise ValueError("vertices are 1-based")

    @property
    def k(self) -> int:
        return len(self.xs)

    @classmethod
    def from_walk(cls, xs: Sequence[int], ys: Sequence[int]) -> "SimpleCycle":
        """Canonicalize an arbitrary traversal of a cycle."""
        c = cls(tuple(xs), tuple(ys))
        k = c.k
        s = c.xs.index(min(c.xs))
        xs = c.xs[s:] + c.xs[:s]
        ys = c.ys[s:] + c.ys[:s]
        if ys[0] > ys[-1]:
            # walk backwards from x_1: x_1, y_k, x_k, y_{k-1}, ..., x_2, y_1
            xs = (xs[0],) + tuple(xs[i] for i in range(k - 1, 0, -1))
            ys = tuple(reversed(ys))
        return cls(xs, ys)

    def is_canonical(self) -> bool:
        return self.xs[0] == min(self.xs) and self.ys[0] < self.ys[-1]

    def max_vertex(self) -> int:
        return max(max(self.xs), max(self.ys))

    def edges(self) -> list[tuple[int, int, int]]:
        """Edges ``(x, y, sign)`` in traversal order; the first edge has sign +1."""
        k = self.k
        out = []
        for i in range(k):
            out.append((self.xs[i], self.ys[i], 1))
            out.append((self.xs[(i + 1) % k], self.ys[i], -1))
        return out

    def walk(self) -> list[tuple[str, int]]:
        out = []
        for x, y in zip(self.xs, self.ys):
            out += [("x", x), ("y", y)]
        out.append(("x", self.xs[0]))
        return out

    def to_text(self) -> str:
        return " ".join(map(str, (self.k, *self.xs, *self.ys)))

    @classmethod
    def from_text(cls, text: str) -> "SimpleCycle":
        vals = [int(t) for t in text.split()]
        if not vals or len(vals) != 1 + 2 * vals[0]:
            raise ValueError(f"malformed cycle text: {text!r}")
        k = vals[0]
        return cls(tuple(vals[1:1 + k]), tuple(vals[1 + k:]))

    def interleaved(self) -> str:
        """``x1 y1 x2 y2 ... xk yk`` (the certificate form used in reports)."""
        return " ".join(f"{x} {y}" for x, y in zip(self.xs, self.ys))


def count_by_length(n: int) -> dict[int, int]:
    """Number of simple cycles with k left vertices, for k = 2..n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return {k: comb(n, k) ** 2 * factorial(k) * factorial(k - 1) // 2 for k in range(2, n + 1)}


def count_simple_cycles(n: int) -> int:
    return sum(count_by_length(n).values())


def xs_sequences(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Left-vertex sequences with x_1 minimal, in lexicographic order."""
    for x1 in range(1, n - k + 2):
        for rest in itertools.permutations(range(x1 + 1, n + 1), k - 1):
            yield (x1, *rest)


def ys_sequences(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Right-vertex sequences with y_1 < y_k, in lexicographic order."""
    for ys in itertools.permutations(range(1, n + 1), k):
        if ys[0] < ys[-1]:
            yield ys


def enumerate_stratum(n: int, k: int, xs: Sequence[int]) -> Iterator[SimpleCycle]:
    xs = tuple(xs)
    for ys in ys_sequences(n, k):
        yield SimpleCycle(xs, ys)


def enumerate_simple_cycles(n: int, ks: Sequence[int] | None = None) -> Iterator[SimpleCycle]:
    """Yield every simple cycle of K_{n,n} once, canonical form, canonical order."""
    if n < 2:
        raise ValueError("n must be at least 2")
    for k in ks if ks is not None else range(2, n + 1):
        for xs in xs_sequences(n, k):
            yield from enumerate_stratum(n, k, xs)


# ranking within a stratum ---------------------------------------------------

def num_xs_sequences(n: int, k: int) -> int:
    return comb(n, k) * factorial(k - 1)


def num_ys_sequences(n: int, k: int) -> int:
    return perm(n, k) // 2


def _unrank_xs(n: int, k: int, r: int) -> tuple[int, ...]:
    for x1 in range(1, n - k + 2):
        block = perm(n - x1, k - 1)
        if r < block:
            pool = list(range(x1 + 1, n + 1))
            return (x1, *_unrank_partial_perm(pool, k - 1, r))
        r -= block
    raise IndexError("xs rank out of range")


def _unrank_partial_perm(pool: list[int], t: int, r: int) -> list[int]:
    pool = list(pool)
    out = []
    for i in range(t):
        block = perm(len(pool) - 1, t - i - 1)
        idx, r = divmod(r, block)
        out.append(pool.pop(idx))
    return out


def _rank_partial_perm(pool: list[int], seq: Sequence[int]) -> int:
    pool = list(pool)
    t = len(seq)
    r = 0
    for i, v in enumerate(seq):
        idx = pool.index(v)
        r += idx * perm(len(pool) - 1, t - i - 1)
        pool.pop(idx)
    return r


def _ys_completions(pool: list[int], left: int, y1: int) -> int:
    """Ordered completions of length ``left`` from ``pool`` whose last entry exceeds y1."""
    if left == 0:
        return 0
    g = sum(1 for v in pool if v > y1)
    return g * perm(len(pool) - 1, left - 1)


def _unrank_ys(n: int, k: int, r: int) -> tuple[int, ...]:
    pool = list(range(1, n + 1))
    out: list[int] = []
    for pos in range(k):
        for v in pool:
            rest = [u for u in pool if u != v]
            left = k - pos - 1
            y1 = out[0] if out else v
            if left == 0:
                size = 1 if v > y1 else 0
            else:
                size = _ys_completions(rest, left, y1)
            if r < size:
                out.append(v)
                pool = rest
                break
            r -= size
        else:
            raise IndexError("ys rank out of range")
    return tuple(out)


def _rank_ys(n: int, ys: Sequence[int]) -> int:
    k = len(ys)
    pool = list(range(1, n + 1))
    r = 0
    for pos, target in enumerate(ys):
        for v in pool:
            if v == target:
                break
            rest = [u for u in pool if u != v]
            left = k - pos - 1
            y1 = ys[0] if pos > 0 else v
            r += (1 if v > y1 else 0) if left == 0 else _ys_completions(rest, left, y1)
        pool.remove(target)
    return r


def unrank_cycle(n: int, k: int, r: int) -> SimpleCycle:
    """The r-th cycle (0-based) of the length-k stratum in canonical order."""
    per = num_ys_sequences(n, k)
    xi, yi = divmod(r, per)
    return SimpleCycle(_unrank_xs(n, k, xi), _unrank_ys(n, k, yi))


def rank_cycle(n: int, c: SimpleCycle) -> int:
    """Global 0-based position of a canonical cycle in the enumeration order."""
    if not c.is_canonical():
        raise ValueError("rank_cycle expects a canonical cycle")
    counts = count_by_length(n)
    offset = sum(counts[j] for j in range(2, c.k))
    x1 = c.xs[0]
    xi = sum(perm(n - v, c.k - 1) for v in range(1, x1))
    xi += _rank_partial_perm(list(range(x1 + 1, n + 1)), c.xs[1:])
    return offset + xi * num_ys_sequences(n, c.k) + _rank_ys(n, c.ys)


def sample_simple_cycle(n: int, seed: int | random.Random) -> SimpleCycle:
    """Uniform sample over all simple cycles of K_{n,n}."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    counts = count_by_length(n)
    r = rng.randrange(sum(counts.values()))
    for k, c in counts.items():
        if r < c:
            return unrank_cycle(n, k, r)
        r -= c
    raise AssertionError("unreachable")
