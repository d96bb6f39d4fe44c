"""Integer partitions, Young-diagram statistics and a plane-partition oracle.

Partitions are plain tuples of weakly decreasing positive integers; the empty
tuple is the empty partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

Partition = tuple[int, ...]

PLANE_PARTITION_LIMIT = 12


def check_partition(p: Partition) -> None:
    for i in range(len(p)):
        nxt = p[i + 1] if i + 1 < len(p) else 0
        if p[i] < max(nxt, 1):
            raise ValueError(f"not a partition: {p}")


def weight(p: Partition) -> int:
    return sum(p)


@lru_cache(maxsize=None)
def enumerate_partitions(n: int, max_part: int | None = None) -> tuple[Partition, ...]:
    """All partitions of n, in descending lexicographic order."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    if max_part is None or max_part > n:
        max_part = n
    out = []
    for first in range(max_part, 0, -1):
        for rest in enumerate_partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_up_to(w: int) -> list[Partition]:
    """All partitions of weight <= w, ordered by (weight, descending lex)."""
    out: list[Partition] = []
    for n in range(w + 1):
        out.extend(enumerate_partitions(n))
    return out


def conjugate(p: Partition) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for part in p if part > i) for i in range(p[0]))


def contains(lam: Partition, mu: Partition) -> bool:
    """mu sits inside lam as Young diagrams."""
    if len(mu) > len(lam):
        return False
    return all(m <= l for l, m in zip(lam, mu))


def kappa(p: Partition) -> int:
    return sum(part * (part - 2 * i + 1) for i, part in enumerate(p, start=1))


def hooks(p: Partition) -> tuple[int, ...]:
    """Hook lengths of all cells, as a sorted (descending) tuple."""
    conj = conjugate(p)
    out = []
    for i, row in enumerate(p, start=1):
        for j in range(1, row + 1):
            out.append(row - j + conj[j - 1] - i + 1)
    return tuple(sorted(out, reverse=True))


def contents(p: Partition) -> tuple[int, ...]:
    out = []
    for i, row in enumerate(p, start=1):
        for j in range(1, row + 1):
            out.append(j - i)
    return tuple(sorted(out))


def dim_partition(p: Partition) -> int:
    """Number of standard tableaux of shape p, by the hook-length formula."""
    n = weight(p)
    denom = 1
    for h in hooks(p):
        denom *= h
    num = factorial(n)
    assert num % denom == 0
    return num // denom


@lru_cache(maxsize=None)
def standard_tableaux_count(p: Partition) -> int:
    """Tableau count by corner removal; independent of the hook formula."""
    if not p:
        return 1
    total = 0
    for i in range(len(p)):
        below = p[i + 1] if i + 1 < len(p) else 0
        if p[i] > below:
            shrunk = list(p)
            shrunk[i] -= 1
            if shrunk[-1] == 0:
                shrunk.pop()
            total += standard_tableaux_count(tuple(shrunk))
    return total


def levels(p: Partition, s: int, depth: int) -> tuple[int, ...]:
    """First ``depth`` occupied energy levels lambda_i - i + 1 + s."""
    if depth < len(p):
        depth = len(p)
    return tuple((p[i - 1] if i <= len(p) else 0) - i + 1 + s for i in range(1, depth + 1))


@dataclass(frozen=True)
class PartitionStats:
    weight: int
    kappa: int
    hooks: tuple[int, ...]
    dim: int
    contents: tuple[int, ...]
    levels: tuple[int, ...]


def partition_stats(p: Partition, s: int = 0, depth: int = 0) -> PartitionStats:
    return PartitionStats(
        weight=weight(p),
        kappa=kappa(p),
        hooks=hooks(p),
        dim=dim_partition(p),
        contents=contents(p),
        levels=levels(p, s, depth),
    )


def format_partition(p: Partition) -> str:
    return "(" + ",".join(str(x) for x in p) + ")"


def parse_partition(text: str) -> Partition:
    text = text.strip().strip("()")
    if not text:
        return ()
    p = tuple(int(x) for x in text.split(","))
    check_partition(p)
    return p


# ---------------------------------------------------------------------------
# plane partitions

def _rows_below(prev: Partition, budget: int):
    """Partitions fitting under ``prev`` pointwise, of weight 1..budget."""

    def rec(i: int, cap: int, left: int):
        if i == len(prev) or left == 0:
            yield ()
            return
        top = min(prev[i], cap, left)
        yield ()
        for part in range(top, 0, -1):
            for rest in rec(i + 1, part, left - part):
                yield (part,) + rest

    for row in rec(0, prev[0] if prev else 0, budget):
        if row:
            yield row


@lru_cache(maxsize=None)
def _completions(prev: Partition, budget: int) -> tuple[int, ...]:
    """counts[v] = number of ways to stack further rows of total volume v."""
    counts = [0] * (budget + 1)
    counts[0] = 1
    for row in _rows_below(prev, budget):
        w = sum(row)
        sub = _completions(row, budget - w)
        for v, c in enumerate(sub):
            counts[w + v] += c
    return tuple(counts)


def enumerate_plane_partitions(n_max: int) -> list[int]:
    """Counts of plane partitions by volume 0..n_max, by exhaustive search.

    The first row caps every later row, and volume n_max caps the first row,
    so the whole search lives in an n_max x n_max x n_max box.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > PLANE_PARTITION_LIMIT:
        raise ValueError(
            f"n_max = {n_max} exceeds the guard {PLANE_PARTITION_LIMIT}; "
            "the brute-force box grows too fast beyond that"
        )
    counts = [0] * (n_max + 1)
    counts[0] = 1
    for w in range(1, n_max + 1):
        for first in enumerate_partitions(w):
            sub = _completions(first, n_max - w)
            for v, c in enumerate(sub):
                counts[w + v] += c
    return counts
