"""Edge labelings of K_{n,n} by Z_q^d and the simple-cycle-free property.

A labeling is simple cycle free when every simple cycle has a nonzero
alternating-sign label sum.  For q = 2 the signs do not matter and the sum is
a plain XOR of bit vectors.

Coordinate 1 of a label is its first coordinate; for q = 2 it is also the
least significant bit of the first 64-bit word of the packed form.
"""

from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .cycles import (
    SimpleCycle,
    count_simple_cycles,
    enumerate_simple_cycles,
    num_ys_sequences,
    sample_simple_cycle,
    xs_sequences,
)
from .errors import BudgetExceeded

HEADER = "CYCLEFREE v1"
DIGITS = string.digits + string.ascii_lowercase
# exhaustive verification is allowed up to the cycle count of K_{8,8}
DEFAULT_CYCLE_BUDGET = count_simple_cycles(8)


@dataclass(frozen=True)
class Label:
    coords: tuple[int, ...]
    q: int = 2

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % self.q for c in self.coords))

    @classmethod
    def zero(cls, d: int, q: int = 2) -> "Label":
        return cls((0,) * d, q)

    @classmethod
    def unit(cls, i: int, d: int, q: int = 2) -> "Label":
        """Unit vector with a 1 in (1-based) coordinate i."""
        c = [0] * d
        c[i - 1] = 1
        return cls(tuple(c), q)

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def bits(self) -> int:
        if self.q != 2:
            raise ValueError("bit packing is only defined for q = 2")
        return sum(1 << i for i, c in enumerate(self.coords) if c)

    def _check(self, other: "Label"):
        if self.q != other.q or self.d != other.d:
            raise ValueError("labels from different groups")

    def __add__(self, other: "Label") -> "Label":
        self._check(other)
        return Label(tuple(a + b for a, b in zip(self.coords, other.coords)), self.q)

    def __sub__(self, other: "Label") -> "Label":
        self._check(other)
        return Label(tuple(a - b for a, b in zip(self.coords, other.coords)), self.q)

    def __neg__(self) -> "Label":
        return Label(tuple(-a for a in self.coords), self.q)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return "".join(DIGITS[c] for c in self.coords)


class Labeling:
    """Total map (x, y) in [n] x [n] -> Z_q^d, held as an (n, n, d) residue array."""

    def __init__(self, coords, q: int = 2):
        coords = np.asarray(coords, dtype=np.int64)
        if coords.ndim != 3 or coords.shape[0] != coords.shape[1]:
            raise ValueError(f"expected an (n, n, d) array, got shape {coords.shape}")
        if q < 2:
            raise ValueError("q must be at least 2")
        if coords.size and (coords.min() < 0 or coords.max() >= q):
            raise ValueError(f"label entries must lie in [0, {q})")
        self.coords = coords
        self.coords.setflags(write=False)
        self.q = q

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[2]

    def __getitem__(self, edge: tuple[int, int]) -> Label:
        x, y = edge
        return Label(tuple(self.coords[x - 1, y - 1]), self.q)

    def __eq__(self, other):
        if not isinstance(other, Labeling):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.coords, other.coords)

    def __repr__(self):
        return f"Labeling(n={self.n}, d={self.d}, q={self.q})"

    @cached_property
    def packed(self) -> np.ndarray:
        """(n, n, W) uint64 words; coordinate 1 is bit 0 of word 0."""
        if self.q != 2:
            raise ValueError("bit packing is only defined for q = 2")
        W = max(1, (self.d + 63) // 64)
        out = np.zeros((self.n, self.n, W), dtype=np.uint64)
        for j in range(self.d):
            w, b = divmod(j, 64)
            out[:, :, w] |= self.coords[:, :, j].astype(np.uint64) << np.uint64(b)
        return out

    def encode(self) -> str:
        if self.q > len(DIGITS):
            raise ValueError(f"text format supports q <= {len(DIGITS)}")
        lines = [HEADER, f"n={self.n} d={self.d} q={self.q}"]
        for x in range(self.n):
            for y in range(self.n):
                lines.append(f"{x + 1} {y + 1} " + "".join(DIGITS[c] for c in self.coords[x, y]))
        return "\n".join(lines) + "\n"

    @classmethod
    def decode(cls, text: str) -> "Labeling":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != HEADER:
            raise ValueError("not a CYCLEFREE v1 labeling")
        try:
            params = dict(tok.split("=") for tok in lines[1].split())
            n, d, q = int(params["n"]), int(params["d"]), int(params["q"])
        except (IndexError, KeyError, ValueError) as e:
            raise ValueError("malformed labeling header") from e
        body = lines[2:]
        if len(body) != n * n:
            raise ValueError(f"expected {n * n} edge lines, got {len(body)}")
        coords = np.zeros((n, n, d), dtype=np.int64)
        expected = itertools.product(range(1, n + 1), repeat=2)
        for line, (ex, ey) in zip(body, expected):
            parts = line.split()
            digits = parts[2] if len(parts) == 3 else ("" if d == 0 else None)
            if len(parts) not in (2, 3) or (int(parts[0]), int(parts[1])) != (ex, ey) or digits is None:
                raise ValueError(f"bad edge line {line!r}")
            if len(digits) != d:
                raise ValueError(f"label {digits!r} does not have length {d}")
            vals = [DIGITS.index(ch) for ch in digits]
            if any(v >= q for v in vals):
                raise ValueError(f"digit out of range for q={q} in {line!r}")
            coords[ex - 1, ey - 1] = vals
        return cls(coords, q)


# constructions -------------------------------------------------------------

def construct_recursive(n: int) -> Labeling:
    """The recursive d = 3n labeling of K_{n,n}, n a power of two."""
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    if n == 2:
        c = np.zeros((2, 2, 6), dtype=np.int64)
        c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 2] = c[1, 1, 3] = 1
        return Labeling(c, q=2)
    h = n // 2
    sub = construct_recursive(h).coords
    c = np.zeros((n, n, 3 * n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            if y < h:
                c[x, y, x] = 1
            if x < h:
                c[x, y, n + y % h] = 1
            c[x, y, n + h:] = sub[x % h, y % h]
    return Labeling(c, q=2)


def construct_random(n: int, d: int, q: int, seed: int) -> Labeling:
    if n < 2 or d < 1 or q < 2:
        raise ValueError("need n >= 2, d >= 1, q >= 2")
    rng = np.random.default_rng(seed)
    return Labeling(rng.integers(0, q, size=(n, n, d)), q)


# cycle sums ----------------------------------------------------------------

def cycle_sum(labeling: Labeling, cycle: SimpleCycle) -> Label:
    """Alternating-sign label sum along the traversal (first edge +1)."""
    if cycle.max_vertex() > labeling.n:
        raise ValueError(f"cycle leaves [{labeling.n}]")
    total = np.zeros(labeling.d, dtype=np.int64)
    for x, y, s in cycle.edges():
        total += s * labeling.coords[x - 1, y - 1]
    return Label(tuple(total), labeling.q)


@dataclass
class VerificationReport:
    passed: bool
    cycles_checked: int
    certificate: SimpleCycle | None = None
    mode: str = "exhaustive"

    def to_text(self) -> str:
        s = f"verdict={'pass' if self.passed else 'fail'} cycles={self.cycles_checked}"
        if self.certificate is not None:
            s += f" certificate={self.certificate.interleaved()}"
        return s


def _stratum_rows(n: int):
    rows, ks = [], []
    for k in range(2, n + 1):
        for xs in xs_sequences(n, k):
            rows.append(list(xs) + [0] * (n - k))
            ks.append(k)
    return np.array(rows, dtype=np.int64) - 1, np.array(ks, dtype=np.int64)


def _verify_exhaustive_kernel(labeling: Labeling) -> VerificationReport:
    n = labeling.n
    xs_rows, ks = _stratum_rows(n)
    np.maximum(xs_rows, 0, out=xs_rows)
    if labeling.q == 2:
        checked, failed, fail_ys = _kernels.scan_strata_xor(labeling.packed, xs_rows, ks)
    else:
        checked, failed, fail_ys = _kernels.scan_strata_mod(labeling.coords, labeling.q, xs_rows, ks)
    bad = np.flatnonzero(failed)
    if bad.size == 0:
        return VerificationReport(True, int(checked.sum()))
    r = int(bad[0])
    k = int(ks[r])
    # rows before r were scanned completely
    before = sum(num_ys_sequences(n, int(kk)) for kk in ks[:r])
    cert = SimpleCycle(tuple(int(v) + 1 for v in xs_rows[r, :k]), tuple(int(v) + 1 for v in fail_ys[r, :k]))
    return VerificationReport(False, before + int(checked[r]), cert)


def _verify_exhaustive_python(labeling: Labeling) -> VerificationReport:
    count = 0
    for c in enumerate_simple_cycles(labeling.n):
        count += 1
        if cycle_sum(labeling, c).is_zero():
            return VerificationReport(False, count, c)
    return VerificationReport(True, count)


def verify_cycle_free(
    labeling: Labeling,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int | None = None,
    budget: int = DEFAULT_CYCLE_BUDGET,
    engine: str = "compiled",
) -> VerificationReport:
    """Check every (exhaustive) or a seeded sample of simple cycles.

    On failure the report carries the first zero-sum cycle met; in exhaustive
    mode that is the first in canonical order and ``cycles_checked`` is its
    1-based position.  ``engine="python"`` runs the slow reference path.
    """
    if mode == "exhaustive":
        total = count_simple_cycles(labeling.n)
        if total > budget:
            raise BudgetExceeded(
                f"K_{{{labeling.n},{labeling.n}}} has {total} simple cycles, budget is {budget}"
            )
        if engine == "python":
            return _verify_exhaustive_python(labeling)
        return _verify_exhaustive_kernel(labeling)
    if mode == "sampled":
        if samples is None or seed is None:
            raise ValueError("sampled mode needs samples and seed")
        rng = random.Random(seed)
        for i in range(samples):
            c = sample_simple_cycle(labeling.n, rng)
            if cycle_sum(labeling, c).is_zero():
                return VerificationReport(False, i + 1, c, mode="sampled")
        return VerificationReport(True, samples, mode="sampled")
    raise ValueError(f"unknown mode {mode!r}")


# minimal d by exhaustive search ---------------------------------------------

def _cycles_by_last_edge(n: int) -> dict[tuple[int, int], list[list[tuple[int, int, int]]]]:
    order = {e: i for i, e in enumerate(itertools.product(range(n), repeat=2))}
    out: dict[tuple[int, int], list] = {}
    for c in enumerate_simple_cycles(n):
        edges = [(x - 1, y - 1, s) for x, y, s in c.edges()]
        last = max(((x, y) for x, y, _ in edges), key=order.__getitem__)
        out.setdefault(last, []).append(edges)
    return out


def find_cycle_free(n: int, d: int, q: int = 2) -> Labeling | None:
    """Some simple-cycle-free labeling [n] x [n] -> Z_q^d, or None.

    The search fixes row 1 and column 1 to zero: adding a_x + b_y to every
    label (x, y) leaves all alternating cycle sums unchanged, so this loses no
    solutions.  Edges are filled in row-major order and each cycle is checked
    as soon as its last edge is set.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    by_last = _cycles_by_last_edge(n)
    free = [(x, y) for x in range(1, n) for y in range(1, n)]
    values = list(itertools.product(range(q), repeat=d))
    table = np.zeros((n, n, d), dtype=np.int64)

    def ok(edge) -> bool:
        for edges in by_last.get(edge, ()):
            s = np.zeros(d, dtype=np.int64)
            for x, y, sign in edges:
                s += sign * table[x, y]
            if not (s % q).any():
                return False
        return True

    # the row-major last edge of any cycle has x, y >= 2, so it is free
    def search(i: int) -> bool:
        if i == len(free):
            return True
        e = free[i]
        for v in values:
            table[e] = v
            if ok(e) and search(i + 1):
                return True
        table[e] = 0
        return False

    return Labeling(table.copy(), q) if search(0) else None


def search_min_d(n: int, q: int = 2) -> int:
    """Smallest d admitting a simple-cycle-free labeling of K_{n,n}."""
    if n not in (2, 3):
        raise ValueError("exhaustive search is only supported for n in {2, 3}")
    d = 0
    while find_cycle_free(n, d, q) is None:
        d += 1
    return d
