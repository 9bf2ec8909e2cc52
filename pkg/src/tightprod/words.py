"""Words over a symmetric alphabet of permutation generators.

A word is a sequence of nonzero signed integers: letter ``i`` means
generator g_i and ``-i`` its inverse (1-indexed, matching the CLI syntax
``1 2 -1`` for g1 g2 g1^-1).  Provides reduction, order/primitivity,
evaluation at permutation tuples, fixed-point probability estimation, and
the closed-path count that ties words to adjacency traces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import (
    InternalCheckError,
    Permutation,
    PermutationGraph,
    adjacency_matrix,
    from_permutations,
)

Word = tuple[int, ...]


def word(letters: Iterable[int]) -> Word:
    w = tuple(int(x) for x in letters)
    if any(x == 0 for x in w):
        raise ValueError("letters are nonzero signed generator indices")
    return w


def reduce_word(w: Sequence[int]) -> Word:
    """Cancel adjacent inverse pairs; single stack pass, order-independent."""
    stack: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("letters are nonzero signed generator indices")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def cyclic_core(w: Sequence[int]) -> Word:
    """Strip matching (first, last) inverse pairs off the reduced word."""
    r = list(reduce_word(w))
    while len(r) >= 2 and r[0] == -r[-1]:
        r = r[1:-1]
    return tuple(r)


def word_order(w: Sequence[int]) -> int:
    """Largest l such that the reduced word is a conjugate of an l-th
    power; 0 for words reducing to nothing, 1 for primitive words."""
    r = reduce_word(w)
    if not r:
        return 0
    core = cyclic_core(r)
    if not core:
        raise InternalCheckError("cyclic core of a nonempty reduced word is nonempty")
    n = len(core)
    for p in range(1, n + 1):
        if n % p == 0 and core == core[:p] * (n // p):
            return n // p
    return 1


def is_primitive(w: Sequence[int]) -> bool:
    return word_order(w) == 1


def all_words(d: int, length: int) -> Iterable[Word]:
    letters = [i for i in range(1, d + 1)] + [-i for i in range(1, d + 1)]
    return itertools.product(letters, repeat=length)


def count_imprimitive(d: int, k: int, cap: int = 10_000_000) -> int:
    """Exhaustively count words of length 2k over d generators whose order
    is not 1; checked against the k^2 (2 sqrt(2d))^{2k} ceiling."""
    total = (2 * d) ** (2 * k)
    if total > cap:
        raise ValueError(f"{total} words exceed the enumeration cap {cap}")
    count = sum(1 for w in all_words(d, 2 * k) if word_order(w) != 1)
    bound = k * k * (2 * math.sqrt(2 * d)) ** (2 * k)
    if count > bound:
        raise InternalCheckError(f"imprimitive count {count} exceeds the bound {bound}")
    return count


def evaluate_word(w: Sequence[int], perms: Sequence[Permutation]) -> Permutation:
    """Compose the word at a permutation tuple, first letter applied
    first."""
    if not perms:
        raise ValueError("need at least one permutation")
    n = perms[0].n
    images = list(range(n))
    for x in w:
        idx = abs(x) - 1
        if idx >= len(perms):
            raise ValueError(f"letter {x} has no permutation")
        p = perms[idx] if x > 0 else perms[idx].inverse()
        images = [p(y) for y in images]
    return Permutation(images)


def exact_p(w: Sequence[int], n: int, d: int | None = None) -> float:
    """Exhaustive fixed-point probability Pr[word(sigma..)(0) = 0] over all
    tuples of permutations of {0..n-1}; only viable for tiny n and d."""
    w = word(w)
    if d is None:
        d = max((abs(x) for x in w), default=1)
    if n > 6 or d > 2:
        raise ValueError("exhaustive mode is capped at n <= 6, d <= 2")
    perms = [Permutation(p) for p in itertools.permutations(range(n))]
    hits = 0
    total = 0
    for tup in itertools.product(perms, repeat=d):
        total += 1
        if evaluate_word(w, tup)(0) == 0:
            hits += 1
    return hits / total


@dataclass(frozen=True)
class PEstimate:
    p_hat: float
    std_error: float
    samples: int


def estimate_p(
    w: Sequence[int], n: int, samples: int, seed: int, d: int | None = None
) -> PEstimate:
    """Monte Carlo fixed-point probability with binomial standard error.

    Each sample draws a fresh tuple of uniform permutations (chunked in
    numpy; a permutation is the argsort of i.i.d. uniforms).
    """
    w = word(w)
    if samples <= 0:
        raise ValueError("need a positive sample count")
    if n < 1:
        raise ValueError("n must be positive")
    if d is None:
        d = max((abs(x) for x in w), default=1)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    needs_inverse = {abs(x) - 1 for x in w if x < 0}
    hits = 0
    done = 0
    chunk_size = max(1, min(20_000, samples))
    while done < samples:
        c = min(chunk_size, samples - done)
        perms = {}
        invs = {}
        for i in range(d):
            p = np.argsort(rng.random((c, n)), axis=1)
            perms[i] = p
            if i in needs_inverse:
                invs[i] = np.argsort(p, axis=1)
        pos = np.zeros(c, dtype=np.int64)
        rows = np.arange(c)
        for x in w:
            table = perms[abs(x) - 1] if x > 0 else invs[abs(x) - 1]
            pos = table[rows, pos]
        hits += int(np.count_nonzero(pos == 0))
        done += c
    p_hat = hits / samples
    se = math.sqrt(p_hat * (1.0 - p_hat) / samples)
    return PEstimate(p_hat, se, samples)


def primitive_p_bound(n: int, k: int) -> float:
    """The fixed-point probability ceiling for a primitive word of length
    k at permutation degree n."""
    return 1.0 / (n - k) + k**4 / (n - k) ** 2


def closed_path_count(pg: PermutationGraph, length: int, cap: int = 10_000_000) -> int:
    """Count (start vertex, word) pairs whose walk closes, over all words
    of the given length; equals the trace of the adjacency power."""
    if pg.pairing is not None:
        raise ValueError("closed-path counting requires a pairing-free presentation")
    if length < 0 or length % 2:
        raise ValueError("path length must be even and non-negative")
    d = pg.d
    n = pg.n
    total = (2 * d) ** length * max(n, 1)
    if total > cap:
        raise ValueError(f"{total} walks exceed the enumeration cap {cap}")
    gens = [p.images for p in pg.generators]
    invs = [p.inverse().images for p in pg.generators]
    count = 0
    for w in all_words(d, length):
        pos = list(range(n))
        for x in w:
            table = gens[x - 1] if x > 0 else invs[-x - 1]
            pos = [table[y] for y in pos]
        count += sum(1 for v in range(n) if pos[v] == v)
    return count


def trace_of_power(pg: PermutationGraph, length: int) -> int:
    """Independent route to the same number via the adjacency matrix."""
    a = adjacency_matrix(from_permutations(pg))
    return int(np.trace(np.linalg.matrix_power(a.astype(np.int64), length)))
