"""Exact character computations for S_n and the class-function identities
used to bound independent sets in B_n.

For a set A of permutations, ``phi_from_set(A)`` records the distribution of
the cycle type of p * p'^-1 over uniform pairs (p, p') in A^2.  Characters
extend linearly, so chi(phi) is the average of chi over those differences.

All arithmetic is exact (``int`` / ``Fraction``) except :func:`series_bound`
and the empirical constants returned by :func:`uniformity`.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, perm, prod
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .birkhoff import PermSet, bound_check, sign, verify_independent
from .errors import BudgetExceeded

Partition = tuple[int, ...]

PAIR_BUDGET = 10**8
TUPLE_BUDGET = 10**8


# partitions ---------------------------------------------------------------

def partitions(n: int) -> list[Partition]:
    """Partitions of n in reverse lexicographic order, starting with (n,)."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def gen(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first, *tail)

    return list(gen(n, n))


def check_partition(lam: Sequence[int]) -> Partition:
    lam = tuple(int(v) for v in lam)
    if any(v < 1 for v in lam) or any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"not a partition: {lam}")
    return lam


def hook(n: int, m: int) -> Partition:
    """h_m = (n - m, 1, ..., 1) with m ones."""
    if not 0 <= m <= n - 1:
        raise ValueError(f"hook index must lie in [0, {n - 1}]")
    return (n - m,) + (1,) * m


def is_hook(lam: Partition) -> bool:
    return len(lam) <= 1 or lam[1] <= 1


def conjugate(lam: Partition) -> Partition:
    return tuple(sum(1 for v in lam if v > i) for i in range(lam[0] if lam else 0))


def dominates(lam: Partition, mu: Partition) -> bool:
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def z_value(mu: Partition) -> int:
    """Size of the centralizer of an element of cycle type mu."""
    return prod(k**m * factorial(m) for k, m in Counter(mu).items())


def class_size(mu: Sequence[int]) -> int:
    mu = check_partition(mu)
    return factorial(sum(mu)) // z_value(mu)


# characters -----------------------------------------------------------------

def _beta(lam: Partition) -> tuple[int, ...]:
    L = len(lam)
    return tuple(lam[i] + (L - 1 - i) for i in range(L))


def _from_beta(beta: Sequence[int]) -> Partition:
    b = sorted(beta, reverse=True)
    L = len(b)
    return tuple(v for v in (b[i] - (L - 1 - i) for i in range(L)) if v > 0)


@lru_cache(maxsize=None)
def _mn(lam: Partition, mu: Partition) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beta = _beta(lam)
    occupied = set(beta)
    total = 0
    # a rim hook of length r <-> moving a bead from b down to an empty b - r
    for b in beta:
        t = b - r
        if t < 0 or t in occupied:
            continue
        height = sum(1 for c in beta if t < c < b)
        new = _from_beta([t if c == b else c for c in beta])
        total += (-1) ** height * _mn(new, rest)
    return total


def mn_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """chi^lam on the class of cycle type mu, by the Murnaghan-Nakayama rule."""
    lam, mu = check_partition(lam), check_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"{lam} and {mu} are partitions of different integers")
    return _mn(lam, tuple(sorted(mu, reverse=True)))


def character_table(n: int) -> tuple[list[Partition], list[list[int]]]:
    """Rows indexed by lambda, columns by cycle type, both in ``partitions(n)`` order."""
    ps = partitions(n)
    return ps, [[mn_character(lam, mu) for mu in ps] for lam in ps]


# Kostka numbers -----------------------------------------------------------------

def _horizontal_strips(shape: tuple[int, ...], lam: Partition, r: int) -> Iterator[tuple[int, ...]]:
    """Shapes nu inside lam with nu / shape a horizontal strip of size r."""
    L = len(lam)

    def rec(j: int, left: int, acc: list[int]):
        if j == L:
            if left == 0:
                yield tuple(acc)
            return
        hi = min(lam[j], shape[j - 1] if j else lam[0])
        for v in range(shape[j], min(hi, shape[j] + left) + 1):
            acc.append(v)
            yield from rec(j + 1, left - (v - shape[j]), acc)
            acc.pop()

    yield from rec(0, r, [])


def kostka(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Number of semistandard tableaux of shape lam and content mu."""
    lam, mu = check_partition(lam), check_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"{lam} and {mu} are partitions of different integers")
    if not dominates(lam, mu):
        return 0

    @lru_cache(maxsize=None)
    def fill(shape: tuple[int, ...], i: int) -> int:
        if i == len(mu):
            return 1 if shape == lam else 0
        return sum(fill(nu, i + 1) for nu in _horizontal_strips(shape, lam, mu[i]))

    return fill((0,) * len(lam), 0)


# class functions from sets ---------------------------------------------------------

@dataclass
class ClassFunction:
    """Exact values indexed by cycle type; missing types are zero."""
    n: int
    values: dict[Partition, Fraction] = field(default_factory=dict)

    def __getitem__(self, mu: Partition) -> Fraction:
        return self.values.get(tuple(mu), Fraction(0))

    def coefficient(self, mu: Partition) -> Fraction:
        """Coefficient of each single group element of type mu."""
        return self[mu] / class_size(mu)


def _radix(n: int) -> list[int]:
    radix = [0] * (n + 1)
    base = 1
    for ell in range(1, n + 1):
        radix[ell] = base
        base *= n // ell + 1
    if base >= 2**63:
        raise BudgetExceeded(f"cycle-type keys for n={n} do not fit in 64 bits")
    return radix


def _decode_key(key: int, n: int, radix: list[int]) -> Partition:
    parts = []
    for ell in range(n, 0, -1):
        m, key = divmod(key, radix[ell])
        parts += [ell] * m
    return tuple(parts)


def _arrays(A: PermSet) -> tuple[np.ndarray, np.ndarray]:
    P = A.array()
    return P, np.argsort(P, axis=1)


def pair_type_counts(A: PermSet, budget: int = PAIR_BUDGET) -> Counter:
    """Counter of cycle types of p * p'^-1 over ordered pairs in A^2."""
    K = len(A)
    if K == 0:
        raise ValueError("empty set")
    if K * K > budget:
        raise BudgetExceeded(f"|A|^2 = {K * K} exceeds the pair budget {budget}")
    n = A.n
    radix = _radix(n)
    P, Pinv = _arrays(A)
    counts: Counter = Counter()
    step = max(1, 2_000_000 // K)
    for a0 in range(0, K, step):
        keys = _kernels.pair_type_keys(P, Pinv, a0, min(K, a0 + step), np.array(radix, np.int64))
        uniq, cnt = np.unique(keys, return_counts=True)
        for u, c in zip(uniq.tolist(), cnt.tolist()):
            counts[_decode_key(u, n, radix)] += c
    return counts


def phi_from_set(A: PermSet, budget: int = PAIR_BUDGET) -> ClassFunction:
    K = len(A)
    counts = pair_type_counts(A, budget)
    return ClassFunction(A.n, {mu: Fraction(c, K * K) for mu, c in sorted(counts.items(), reverse=True)})


def chi_on_phi(lam: Sequence[int], phi: ClassFunction) -> Fraction:
    lam = check_partition(lam)
    if sum(lam) != phi.n:
        raise ValueError("partition size does not match the class function")
    return sum((v * mn_character(lam, mu) for mu, v in phi.values.items()), Fraction(0))


def ip_characters(phi: ClassFunction) -> Fraction:
    """Inner product with the uniform n-cycle class function, via hook characters."""
    n = phi.n
    return sum(((-1) ** m * chi_on_phi(hook(n, m), phi) for m in range(n)), Fraction(0))


def ip_direct(A: PermSet, budget: int = PAIR_BUDGET) -> Fraction:
    """n * Pr over (p, p') in A^2 that p * p'^-1 is an n-cycle."""
    K = len(A)
    if K * K > budget:
        raise BudgetExceeded(f"|A|^2 = {K * K} exceeds the pair budget {budget}")
    P, Pinv = _arrays(A)
    hits = int(_kernels.count_full_cycles(P, Pinv)) if A.n > 1 else K * K
    return Fraction(A.n * hits, K * K)


# the action on ordered k-tuples ---------------------------------------------------

def _tuple_image_counts(A: PermSet, k: int, budget: int) -> Iterator[np.ndarray]:
    """Multiplicities of the pairs (I, p(I)), I in [n]_k and p in A, in chunks of I."""
    n = A.n
    if not 0 <= k <= n:
        raise ValueError(f"tuple length must lie in [0, {n}]")
    if perm(n, k) ** 2 > budget:
        raise BudgetExceeded(f"(n)_k^2 = {perm(n, k) ** 2} exceeds the tuple budget {budget}")
    P = A.array()
    K = len(A)
    if k == 0:
        yield np.array([K])
        return
    weights = n ** np.arange(k, dtype=np.int64)
    tuples = itertools.permutations(range(n), k)
    chunk = max(1, 4_000_000 // K)
    while True:
        block = np.array(list(itertools.islice(tuples, chunk)), dtype=np.int64)
        if block.size == 0:
            return
        J = P[:, block] @ weights                     # (K, chunk) image codes
        keys = J + (np.arange(len(block), dtype=np.int64) * n**k)[None, :]
        yield np.unique(keys, return_counts=True)[1]


def young_trace(A: PermSet, k: int, budget: int = TUPLE_BUDGET) -> Fraction:
    """sum over I, J in [n]_k of Pr_{p in A}[p(I) = J]^2."""
    K = len(A)
    total = sum(int((c * c).sum()) for c in _tuple_image_counts(A, k, budget))
    return Fraction(total, K * K)


def uniformity(A: PermSet, m: int, budget: int = TUPLE_BUDGET) -> tuple[Fraction, float]:
    """(max over I, J of Pr[p(I) = J], the smallest c with that max <= c^m / (n)_m)."""
    if m < 1:
        raise ValueError("tuple length must be at least 1")
    K = len(A)
    top = max(int(c.max()) for c in _tuple_image_counts(A, m, budget))
    p = Fraction(top, K)
    return p, float(p * perm(A.n, m)) ** (1.0 / m)


def lemma_check(A: PermSet, phi: ClassFunction | None = None, k_max: int | None = None,
                budget: int = TUPLE_BUDGET) -> list[tuple[int, int, Fraction, Fraction]]:
    """Violations of chi^{h_m}(phi) <= ((max Pr) * (n)_k - 1) / C(k, m).

    Checked for every even k in [2, min(k_max, n - 1)] and 1 <= m <= k; the
    right-hand side is (c^k - 1) / C(k, m) at the empirical c, kept exact.
    k = n is excluded: h_n is not a shape, and n-tuples carry the same action
    as (n-1)-tuples, so the multiplicity there is C(n-1, m), not C(n, m).
    Returns (k, m, lhs, rhs) for each failure.
    """
    n = A.n
    phi = phi or phi_from_set(A)
    k_max = n - 1 if k_max is None else min(k_max, n - 1)
    bad = []
    for k in range(2, k_max + 1, 2):
        ck = uniformity(A, k, budget)[0] * perm(n, k)
        for m in range(1, k + 1):
            lhs = chi_on_phi(hook(n, m), phi)
            rhs = (ck - 1) / comb(k, m)
            if lhs > rhs:
                bad.append((k, m, lhs, rhs))
    return bad


def kostka_decomposition(phi: ClassFunction, k: int) -> Fraction:
    """sum over lambda of K_{lambda, h_k} * chi^lambda(phi)."""
    n = phi.n
    mu = hook(n, k) if k < n else hook(n, n - 1)
    return sum((kostka(lam, mu) * chi_on_phi(lam, phi) for lam in partitions(n)), Fraction(0))


# sign symmetry and the series bound --------------------------------------------------

def duality_check(A: PermSet, phi: ClassFunction | None = None) -> bool:
    """chi^{h_m}(phi) == chi^{h_{n-1-m}}(phi) for all 1 <= m <= n-1."""
    if len({sign(p) for p in A}) > 1:
        raise ValueError("duality needs all permutations of A to have the same sign")
    n = A.n
    phi = phi or phi_from_set(A)
    chi = [chi_on_phi(hook(n, m), phi) for m in range(n)]
    return all(chi[m] == chi[n - 1 - m] for m in range(1, n))


def series_bound(c: float, n: int, truncation: int) -> float:
    """1 - sum over the first ``truncation`` odd m of (c^(2m) - 1) / C(2m, m).

    For n >= 8 the m = 3 term uses (c^8 - 1) / C(8, 3) instead.
    """
    if c <= 0 or truncation < 1:
        raise ValueError("need c > 0 and truncation >= 1")
    log_c = math.log(c)
    total = 1.0
    for t in range(truncation):
        m = 2 * t + 1
        if m == 3 and n >= 8:
            a, log_b = 8, math.log(comb(8, 3))
        else:
            a, log_b = 2 * m, math.lgamma(2 * m + 1) - 2 * math.lgamma(m + 1)
        # (c^a - 1) / b = (c^a / b) * (1 - c^-a), without forming c^a or b
        total -= math.exp(a * log_c - log_b) * -math.expm1(-a * log_c)
    return total


# the combined report ----------------------------------------------------------------

def _fmt(x: Fraction) -> str:
    return str(x)


def analyze(A: PermSet, k_max: int = 4) -> tuple[list[str], bool]:
    """Report lines and whether every applicable property held."""
    n = A.n
    phi = phi_from_set(A)
    lines = [f"n={n}", f"size={len(A)}"]
    ok = True
    chi_all = {lam: chi_on_phi(lam, phi) for lam in partitions(n)}
    for m in range(n):
        lines.append(f"chi[h_{m}]={_fmt(chi_all[hook(n, m)])}")
    ipc, ipd = ip_characters(phi), ip_direct(A)
    lines += [f"ip_chars={_fmt(ipc)}", f"ip_direct={_fmt(ipd)}", f"ip_match={'pass' if ipc == ipd else 'fail'}"]
    ok &= ipc == ipd
    k_top = min(k_max, n)
    for k in range(2, k_top + 1, 2):
        lines.append(f"c_emp[{k}]={uniformity(A, k)[1]:.6f}")
    same_sign = len({sign(p) for p in A}) == 1
    if same_sign:
        dual = duality_check(A, phi)
        lines.append(f"duality={'pass' if dual else 'fail'}")
        ok &= dual
    else:
        lines.append("duality=n/a")
    nonneg = all(v >= 0 for v in chi_all.values())
    lines.append(f"nonneg={'pass' if nonneg else 'fail'}")
    ok &= nonneg
    lemma = not lemma_check(A, phi, k_top)
    lines.append(f"lemma={'pass' if lemma else 'fail'}")
    ok &= lemma
    indep = verify_independent(A).passed
    lines.append(f"independent={'pass' if indep else 'fail'}")
    bound = bound_check(len(A), n)
    lines.append(f"bound={'pass' if bound else 'fail'}")
    if indep:
        ok &= bound
    return lines, ok
