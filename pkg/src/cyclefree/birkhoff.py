"""Permutations and the Birkhoff polytope graph B_n = Cay(S_n, C_n).

Permutations are tuples of 1-based images: ``p[i - 1] == p(i)``.
Composition is right-to-left, ``compose(p, s)(i) == p(s(i))``, and two
permutations p, p' are adjacent in B_n when ``compose(p, inverse(p'))`` is a
cycle, i.e. has exactly one orbit of size >= 2.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded
from .labeling import Label, Labeling

Permutation = tuple[int, ...]

PERM_ENUM_BUDGET = 10          # largest n whose S_n we enumerate
PAIR_BUDGET = 10**9            # |A|^2 for exhaustive pairwise checks
MAX_INDEPENDENT_BUDGET = 4     # largest n for the exact maximum
PERMSET_HEADER = "PERMSET v1"


# permutation basics ---------------------------------------------------------

def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def check_perm(p: Sequence[int]) -> Permutation:
    p = tuple(int(v) for v in p)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"not a permutation of [{len(p)}]: {p}")
    return p


def compose(p: Permutation, s: Permutation) -> Permutation:
    if len(p) != len(s):
        raise ValueError("permutations of different sizes")
    return tuple(p[v - 1] for v in s)


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p, 1):
        out[v - 1] = i
    return tuple(out)


def from_cycles(n: int, *cycles: Sequence[int]) -> Permutation:
    """Build a permutation of [n] from disjoint cycles, e.g. ``from_cycles(4, (1, 2), (3, 4))``."""
    img = list(range(1, n + 1))
    for c in cycles:
        for a, b in zip(c, c[1:] + type(c)(c[:1])):
            img[a - 1] = b
    return check_perm(img)


def orbits(p: Permutation) -> list[tuple[int, ...]]:
    """Nontrivial cycles of p, each starting at its smallest point."""
    seen = set()
    out = []
    for i in range(1, len(p) + 1):
        if i in seen or p[i - 1] == i:
            continue
        c = [i]
        seen.add(i)
        j = p[i - 1]
        while j != i:
            c.append(j)
            seen.add(j)
            j = p[j - 1]
        out.append(tuple(c))
    return out


def cycle_type(p: Permutation) -> tuple[int, ...]:
    lengths = [len(c) for c in orbits(p)]
    fixed = len(p) - sum(lengths)
    return tuple(sorted(lengths, reverse=True)) + (1,) * fixed


def sign(p: Permutation) -> int:
    return -1 if sum(len(c) - 1 for c in orbits(p)) % 2 else 1


def cycle_notation(p: Permutation) -> str:
    cs = orbits(p)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs) if cs else "()"


def is_cycle(t: Permutation) -> bool:
    return len(orbits(t)) == 1


def adjacent(p: Permutation, p2: Permutation) -> bool:
    if len(p) != len(p2):
        raise ValueError("permutations of different sizes")
    return is_cycle(compose(p, inverse(p2)))


# permutation sets -------------------------------------------------------------

@dataclass(frozen=True)
class PermSet:
    n: int
    members: tuple[Permutation, ...]

    def __post_init__(self):
        members = tuple(sorted({check_perm(p) for p in self.members}))
        if any(len(p) != self.n for p in members):
            raise ValueError(f"all members must be permutations of [{self.n}]")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, perms: Iterable[Sequence[int]], n: int | None = None) -> "PermSet":
        perms = [tuple(p) for p in perms]
        if n is None:
            if not perms:
                raise ValueError("cannot infer n from an empty set")
            n = len(perms[0])
        return cls(n, tuple(perms))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, p):
        return tuple(p) in set(self.members)

    def array(self) -> np.ndarray:
        """Members as a 0-based (|A|, n) image array."""
        return np.array(self.members, dtype=np.int64).reshape(len(self), self.n) - 1

    def encode(self) -> str:
        lines = [PERMSET_HEADER, f"n={self.n} count={len(self)}"]
        lines += [" ".join(map(str, p)) for p in self.members]
        return "\n".join(lines) + "\n"

    @classmethod
    def decode(cls, text: str) -> "PermSet":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != PERMSET_HEADER:
            raise ValueError("not a PERMSET v1 file")
        try:
            params = dict(tok.split("=") for tok in lines[1].split())
            n, count = int(params["n"]), int(params["count"])
        except (IndexError, KeyError, ValueError) as e:
            raise ValueError("malformed PERMSET header") from e
        rows = [tuple(int(v) for v in ln.split()) for ln in lines[2:]]
        if len(rows) != count:
            raise ValueError(f"header says {count} permutations, found {len(rows)}")
        if len(set(rows)) != len(rows):
            raise ValueError("duplicate permutations in PERMSET")
        return cls(n, tuple(rows))


@dataclass
class IndependenceReport:
    passed: bool
    pairs_checked: int
    size: int
    pair: tuple[Permutation, Permutation] | None = None
    mode: str = "exhaustive"

    @property
    def difference(self) -> Permutation | None:
        if self.pair is None:
            return None
        return compose(self.pair[0], inverse(self.pair[1]))

    def to_text(self) -> str:
        s = f"verdict={'pass' if self.passed else 'fail'} size={self.size} pairs={self.pairs_checked}"
        if self.pair is not None:
            a, b = self.pair
            s += (f" certificate={','.join(map(str, a))}|{','.join(map(str, b))}"
                  f" tau={cycle_notation(self.difference)}")
        return s


def verify_independent(
    A: PermSet,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int | None = None,
    budget: int = PAIR_BUDGET,
    engine: str = "compiled",
) -> IndependenceReport:
    """Check that no two members of A are adjacent in B_n.

    Exhaustive mode reports the lexicographically first adjacent pair (by
    position in the sorted member list).
    """
    K = len(A)
    if mode == "sampled":
        if samples is None or seed is None:
            raise ValueError("sampled mode needs samples and seed")
        rng = random.Random(seed)
        if K < 2:
            return IndependenceReport(True, 0, K, mode="sampled")
        for t in range(samples):
            a, b = rng.sample(range(K), 2)
            if adjacent(A.members[a], A.members[b]):
                return IndependenceReport(False, t + 1, K, (A.members[a], A.members[b]), "sampled")
        return IndependenceReport(True, samples, K, mode="sampled")
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if K * K > budget:
        raise BudgetExceeded(f"|A|^2 = {K * K} exceeds the pair budget {budget}")
    total = K * (K - 1) // 2
    if engine == "python":
        count = 0
        for a in range(K):
            for b in range(a + 1, K):
                count += 1
                if adjacent(A.members[a], A.members[b]):
                    return IndependenceReport(False, count, K, (A.members[a], A.members[b]))
        return IndependenceReport(True, count, K)
    if K < 2:
        return IndependenceReport(True, 0, K)
    P = A.array()
    Pinv = np.argsort(P, axis=1)
    first = _kernels.first_adjacent(P, Pinv)
    hits = np.flatnonzero(first >= 0)
    if hits.size == 0:
        return IndependenceReport(True, total, K)
    a = int(hits[0])
    b = int(first[a])
    before = sum(K - 1 - i for i in range(a))
    return IndependenceReport(False, before + (b - a), K, (A.members[a], A.members[b]))


# the reduction from labelings ---------------------------------------------------

def all_permutations(n: int) -> np.ndarray:
    """S_n as a 0-based (n!, n) array in lexicographic order."""
    if n > PERM_ENUM_BUDGET:
        raise BudgetExceeded(f"enumerating S_{n} exceeds the budget n <= {PERM_ENUM_BUDGET}")
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def matching_sums(labeling: Labeling, P: np.ndarray, chunk: int = 1 << 16) -> np.ndarray:
    """Row-wise keys of sum_i label(i, p(i)); packed words for q = 2, residues otherwise."""
    n = labeling.n
    rows = np.arange(n)
    table = labeling.packed if labeling.q == 2 else labeling.coords
    out = []
    for s in range(0, len(P), chunk):
        block = table[rows, P[s:s + chunk]]          # (c, n, W or d)
        if labeling.q == 2:
            out.append(np.bitwise_xor.reduce(block, axis=1))
        else:
            out.append(block.sum(axis=1) % labeling.q)
    return np.concatenate(out) if out else np.zeros((0, table.shape[2]), table.dtype)


def _key_to_label(key: np.ndarray, labeling: Labeling) -> Label:
    if labeling.q == 2:
        bits = [(int(key[j // 64]) >> (j % 64)) & 1 for j in range(labeling.d)]
        return Label(tuple(bits), 2)
    return Label(tuple(int(v) for v in key), labeling.q)


def fibers(labeling: Labeling) -> dict[Label, PermSet]:
    """All nonempty fibers {p : sum_i label(i, p(i)) = h} of the matching-sum map."""
    n = labeling.n
    P = all_permutations(n)
    keys = matching_sums(labeling, P)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    order = np.argsort(inv, kind="stable")
    bounds = np.searchsorted(inv[order], np.arange(len(uniq) + 1))
    out = {}
    for u in range(len(uniq)):
        idx = order[bounds[u]:bounds[u + 1]]
        out[_key_to_label(uniq[u], labeling)] = PermSet(n, tuple(map(tuple, (P[idx] + 1).tolist())))
    return out


def best_fiber(labeling: Labeling) -> tuple[Label, PermSet]:
    """Largest fiber; ties go to the lexicographically smallest label."""
    n = labeling.n
    P = all_permutations(n)
    keys = matching_sums(labeling, P)
    uniq, inv, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    inv = inv.reshape(-1)
    top = np.flatnonzero(counts == counts.max())
    h, u = min((_key_to_label(uniq[t], labeling).coords, t) for t in top)
    members = P[inv == u] + 1
    return Label(h, labeling.q), PermSet(n, tuple(map(tuple, members.tolist())))


# the dyadic block construction ----------------------------------------------------

@dataclass(frozen=True)
class BlockSystem:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need n = 2^m with m >= 1")

    @classmethod
    def for_n(cls, n: int) -> "BlockSystem":
        if n < 2 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 2, got {n}")
        return cls(n.bit_length() - 1)

    @property
    def n(self) -> int:
        return 1 << self.m

    def block(self, i: int, j: int) -> range:
        """T(i, j), for 0 <= i <= m and 1 <= j <= 2^i."""
        if not (0 <= i <= self.m and 1 <= j <= 1 << i):
            raise IndexError(f"no block T({i},{j})")
        w = 1 << (self.m - i)
        return range(w * (j - 1) + 1, w * j + 1)

    def modulus(self, i: int) -> int:
        w = 1 << (self.m - i)
        return comb(2 * w, w)

    def expected_size(self) -> int:
        """n! / prod_i M_i."""
        return factorial(self.n) // prod(self.modulus(i) for i in range(1, self.m + 1))


def subset_rank(R: Sequence[int], S: Iterable[int]) -> int:
    """Colex rank of the half-size subset S among half-size subsets of R."""
    R = sorted(R)
    S = sorted(set(S))
    if len(R) % 2 or len(S) != len(R) // 2:
        raise ValueError("S must be a half-size subset of an even-size R")
    pos = {v: i for i, v in enumerate(R)}
    try:
        return sum(comb(pos[v], t) for t, v in enumerate(S, 1))
    except KeyError as e:
        raise ValueError(f"{e.args[0]} is not in R") from None


def subset_unrank(R: Sequence[int], r: int) -> tuple[int, ...]:
    R = sorted(R)
    if len(R) % 2:
        raise ValueError("R must have even size")
    h = len(R) // 2
    if not 0 <= r < comb(len(R), h):
        raise ValueError(f"rank {r} out of range")
    out = []
    for t in range(h, 0, -1):
        c = t - 1
        while comb(c + 1, t) <= r:
            c += 1
        out.append(R[c])
        r -= comb(c, t)
    return tuple(sorted(out))


def image(p: Permutation, block: Iterable[int]) -> list[int]:
    return sorted(p[v - 1] for v in block)


def level_checksum(p: Permutation, sys: BlockSystem, i: int) -> int:
    total = 0
    for j in range(1, (1 << (i - 1)) + 1):
        total += subset_rank(image(p, sys.block(i - 1, j)), image(p, sys.block(i, 2 * j - 1)))
    return total % sys.modulus(i)


def appendix_level(p: Permutation, sys: BlockSystem) -> int:
    """Largest i such that p lies in A_i (0 for every permutation)."""
    if len(p) != sys.n:
        raise ValueError("size mismatch")
    for i in range(1, sys.m + 1):
        if level_checksum(p, sys, i):
            return i - 1
    return sys.m


def appendix_member(p: Permutation, sys: BlockSystem) -> bool:
    return appendix_level(p, sys) == sys.m


def appendix_level_sizes(sys: BlockSystem) -> list[int]:
    """[|A_0|, |A_1|, ..., |A_m|] by filtering all of S_n."""
    if sys.n > 8:
        raise BudgetExceeded("filtering S_n is limited to n <= 8")
    sizes = [0] * (sys.m + 1)
    for p in itertools.permutations(range(1, sys.n + 1)):
        for i in range(appendix_level(p, sys) + 1):
            sizes[i] += 1
    return sizes


def appendix_enumerate(sys: BlockSystem) -> PermSet:
    if sys.n > 8:
        raise BudgetExceeded("filtering S_n is limited to n <= 8")
    perms = (p for p in itertools.permutations(range(1, sys.n + 1)) if appendix_member(p, sys))
    return PermSet(sys.n, tuple(perms))


def appendix_sample(sys: BlockSystem, seed: int | random.Random) -> Permutation:
    """Uniform member of A: free half-subset choices, the last block forced."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    images = {1: list(range(1, sys.n + 1))}       # level i-1 block j -> image set
    for i in range(1, sys.m + 1):
        M = sys.modulus(i)
        nblocks = 1 << (i - 1)
        nxt = {}
        total = 0
        for j in range(1, nblocks + 1):
            R = images[j]
            if j < nblocks:
                S = sorted(rng.sample(R, len(R) // 2))
                total += subset_rank(R, S)
            else:
                S = list(subset_unrank(R, (-total) % M))
            nxt[2 * j - 1] = S
            nxt[2 * j] = [v for v in R if v not in S]
        images = nxt
    return tuple(images[j][0] for j in range(1, sys.n + 1))


def block_claim_holds(p: Permutation, p2: Permutation, sys: BlockSystem, i: int) -> bool:
    """For p, p2 in A_i with a cycle as difference: p and p2 map every level-i
    block onto the same set, and agree pointwise off a single block."""
    if not is_cycle(compose(p, inverse(p2))):
        return True
    blocks = [sys.block(i, j) for j in range(1, (1 << i) + 1)]
    if any(image(p, T) != image(p2, T) for T in blocks):
        return False
    differing = [T for T in blocks if any(p[v - 1] != p2[v - 1] for v in T)]
    return len(differing) <= 1


# bounds and the exact maximum ---------------------------------------------------

def bound_check(size: int, n: int) -> bool:
    """size <= n! / 2^((n-4)/2), compared exactly."""
    lhs, rhs = size * size, factorial(n) ** 2
    e = n - 4
    if e >= 0:
        lhs <<= e
    else:
        rhs <<= -e
    return lhs <= rhs


def appendix_lower_bound(n: int) -> Fraction:
    """n! / 4^n."""
    return Fraction(factorial(n), 4**n)


def max_independent_exact(n: int) -> tuple[int, PermSet]:
    """Maximum independent set of B_n by branch and bound, n <= 4."""
    if n > MAX_INDEPENDENT_BUDGET:
        raise BudgetExceeded(f"exact maximum limited to n <= {MAX_INDEPENDENT_BUDGET}")
    verts = list(itertools.permutations(range(1, n + 1)))
    V = len(verts)
    nbr = [0] * V
    for a in range(V):
        for b in range(a + 1, V):
            if adjacent(verts[a], verts[b]):
                nbr[a] |= 1 << b
                nbr[b] |= 1 << a
    best = [0, 0]

    def branch(chosen: int, cand: int, size: int):
        if size > best[0]:
            best[:] = [size, chosen]
        if size + bin(cand).count("1") <= best[0]:
            return
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            branch(chosen | 1 << v, cand & ~nbr[v], size + 1)
            if size + bin(cand).count("1") <= best[0]:
                return

    branch(0, (1 << V) - 1, 0)
    size, mask = best
    witness = PermSet(n, tuple(verts[v] for v in range(V) if mask >> v & 1))
    return size, witness
