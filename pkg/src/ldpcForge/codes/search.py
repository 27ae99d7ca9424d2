"""Quasi-collision search for certified low-weight codewords.

A chain sums k+1 distinct columns of M over the integers while building in k
quasi-colliding pairs (coordinates at circular distance at most t). Dropping
those pairs leaves a reduced multisupport of c = k(r-2)+r coordinates. When
two reduced multisupports admit a pairing of width below t, every coordinate
of both chains is paired, each pair is closed by a run of consecutive columns
of C, and the result is a codeword of weight at most 2(k+1) + t(k+1)r.

Collisions are found by bucketing quantized multisupports on a few shifted
grids and verified exactly with a bottleneck matching; every assembled word
is certified (zero syndrome, non-zero, within the bound) before it is returned.
"""

import itertools
import logging
import math
import queue
import random
import time
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from ldpcForge.codes import bounds
from ldpcForge.codes.code_model import BitVector, CRun, StructuredCode, ell, run_descriptor, syndrome
from ldpcForge.codes.errors import (
    CertificationFailed,
    ChainStuck,
    DegenerateZero,
    HypothesisViolated,
    InvalidChain,
    SizeMismatch,
    TooLarge,
)
from ldpcForge.codes.models import CodeParams, SearchConfig
from ldpcForge.utils import gf2
from ldpcForge.utils.workers import StreamWorker, drain

MAX_STEP_ATTEMPTS = 64
MAX_BUCKET_SIZE = 32
MAX_ORACLE_DIMENSION = 24


@dataclass(frozen=True)
class ChainVector:
    """k+1 distinct columns of M summed over the integers, with k built-in quasi-colliding pairs.

    entries lists the rows of the chain's columns in chain order; it is the
    multisupport of the integer sum. built_in_slots holds the pairs as
    positions in entries, so no position is consumed twice.
    """
    m: int
    column_indices: Tuple[int, ...]
    entries: Tuple[int, ...]
    built_in_slots: Tuple[Tuple[int, int], ...]
    fallbacks: int = 0

    @property
    def k(self) -> int:
        return len(self.column_indices) - 1

    @property
    def built_in_pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((self.entries[a], self.entries[b]) for a, b in self.built_in_slots)

    @property
    def int_sum(self) -> np.ndarray:
        return np.bincount(np.asarray(self.entries, dtype=np.int64), minlength=self.m)


@dataclass(frozen=True)
class ReducedVector:
    """A chain's multisupport with its built-in pairs removed, sorted."""
    multisupport: Tuple[int, ...]
    origin: Optional[ChainVector] = None
    built_in_cost: int = 0

    def __post_init__(self):
        if self.origin is not None:
            expected = len(self.origin.entries) - 2 * self.origin.k
            if len(self.multisupport) != expected:
                raise ValueError(f"reduced vector has {len(self.multisupport)} coordinates, expected {expected}")

    def __len__(self) -> int:
        return len(self.multisupport)


@dataclass(frozen=True)
class Pairing:
    """A bijection between two multisupports, as (i, f(i)) pairs, and its width."""
    pairs: Tuple[Tuple[int, int], ...]
    width: int


@dataclass(frozen=True)
class SearchResult:
    """A certified non-zero codeword with the chains and runs that produced it."""
    params: CodeParams
    k: int
    t: int
    codeword: BitVector
    weight: int
    m_column_set: Tuple[int, ...]
    c_runs: Tuple[CRun, ...]
    chains: Tuple[ChainVector, ChainVector]
    cross_pairing: Pairing
    chains_used: int = 0

    @property
    def bound(self) -> int:
        return bounds.weight_bound(self.t, self.k, self.params.r)


def _fresh_column(n_cols: int, used: set, rng: random.Random) -> int:
    for _ in range(MAX_STEP_ATTEMPTS):
        col = rng.randrange(n_cols)
        if col not in used:
            return col
    remaining = [c for c in range(n_cols) if c not in used]
    if not remaining:
        raise ChainStuck(f"all {n_cols} columns of M are already in the chain")
    return remaining[rng.randrange(len(remaining))]


def build_chain(code: StructuredCode, k: int, t: int, rng: random.Random) -> ChainVector:
    """Grow a chain of k+1 distinct M-columns through k successive quasi-collisions.

    Each step picks a free position j of the running sum, a row i != j within
    circular distance t of it, and a column with an entry in row i. If that
    column is already in the chain the running sum already holds the
    quasi-collision (j, i); it is recorded and any fresh column is added
    instead.

    Raises:
        HypothesisViolated: if t <= 2k
        ChainStuck: if no free position or fresh column can be found
    """
    if t <= 2 * k:
        raise HypothesisViolated(f"chain building needs t > 2k, got t={t}, k={k}")
    m = code.m
    n_cols = code.n - code.m
    if k + 1 > n_cols:
        raise ChainStuck(f"a chain of {k + 1} distinct columns needs n-m >= {k + 1}, got {n_cols}")
    max_offset = min(t, m // 2)

    start = rng.randrange(n_cols)
    columns = [start]
    used = {start}
    entries = list(code.m_column(start))
    free = list(range(len(entries)))
    slots: List[Tuple[int, int]] = []
    fallbacks = 0

    for _ in range(k):
        for _attempt in range(MAX_STEP_ATTEMPTS):
            if not free:
                raise ChainStuck(f"no free position left after {len(slots)} pairs")
            a = free[rng.randrange(len(free))]
            j = entries[a]
            i = (j + rng.choice((-1, 1)) * rng.randint(1, max_offset)) % m
            candidates = code.columns_with_row(i)
            col = candidates[rng.randrange(len(candidates))]
            if col not in used:
                base = len(entries)
                column = code.m_column(col)
                b = base + column.index(i)
                entries.extend(column)
                free.remove(a)
                free.extend(s for s in range(base, base + len(column)) if s != b)
                slots.append((a, b))
                columns.append(col)
                used.add(col)
                break
            b = next((s for s in free if entries[s] == i), None)
            if b is None:
                continue
            free.remove(a)
            free.remove(b)
            slots.append((a, b))
            col = _fresh_column(n_cols, used, rng)
            base = len(entries)
            column = code.m_column(col)
            entries.extend(column)
            free.extend(range(base, base + len(column)))
            columns.append(col)
            used.add(col)
            fallbacks += 1
            break
        else:
            raise ChainStuck(f"no quasi-collision found in {MAX_STEP_ATTEMPTS} attempts")

    return ChainVector(
        m=m,
        column_indices=tuple(columns),
        entries=tuple(entries),
        built_in_slots=tuple(slots),
        fallbacks=fallbacks,
    )


def check_chain(code: StructuredCode, chain: ChainVector, t: int) -> None:
    """Independent validator for chains.

    Raises:
        InvalidChain: naming the first broken invariant
    """
    cols = chain.column_indices
    k = chain.k
    if len(set(cols)) != len(cols):
        raise InvalidChain(f"columns are not distinct: {cols}")
    n_cols = code.n - code.m
    if any(not 0 <= c < n_cols for c in cols):
        raise InvalidChain(f"column index outside [0, {n_cols}): {cols}")
    expected = tuple(i for c in cols for i in code.m_column(c))
    if chain.entries != expected:
        raise InvalidChain("entries do not match the chain's columns")
    if len(chain.entries) != (k + 1) * code.r:
        raise InvalidChain(f"integer sum has weight {len(chain.entries)}, expected {(k + 1) * code.r}")
    if len(chain.built_in_slots) != k:
        raise InvalidChain(f"{len(chain.built_in_slots)} built-in pairs for k={k}")
    seen = set()
    for a, b in chain.built_in_slots:
        if a == b or a in seen or b in seen:
            raise InvalidChain(f"position reused by pair ({a}, {b})")
        if not (0 <= a < len(chain.entries) and 0 <= b < len(chain.entries)):
            raise InvalidChain(f"pair ({a}, {b}) points outside the multisupport")
        seen.update((a, b))
        i, j = chain.entries[a], chain.entries[b]
        if ell(i - j, code.m) > t:
            raise InvalidChain(f"pair ({i}, {j}) has distance {ell(i - j, code.m)} > t={t}")


def reduce(chain: ChainVector) -> ReducedVector:
    """Drop the built-in pairs, one unit per consumed position."""
    consumed = {s for pair in chain.built_in_slots for s in pair}
    remaining = tuple(sorted(e for s, e in enumerate(chain.entries) if s not in consumed))
    cost = sum(ell(i - j, chain.m) for i, j in chain.built_in_pairs)
    return ReducedVector(multisupport=remaining, origin=chain, built_in_cost=cost)


def _coords(v: Union[ReducedVector, Sequence[int]]) -> Tuple[int, ...]:
    return v.multisupport if isinstance(v, ReducedVector) else tuple(int(x) for x in v)


def _distance_matrix(a: Sequence[int], b: Sequence[int], m: int) -> np.ndarray:
    diff = np.abs(np.asarray(a, dtype=np.int64)[:, None] - np.asarray(b, dtype=np.int64)[None, :]) % m
    return np.minimum(diff, m - diff)


def _perfect_matching(mask: np.ndarray) -> Optional[np.ndarray]:
    matching = maximum_bipartite_matching(csr_matrix(mask), perm_type='column')
    if (matching == -1).any():
        return None
    return matching


def bottleneck_pairing(a: Union[ReducedVector, Sequence[int]],
                       b: Union[ReducedVector, Sequence[int]],
                       m: int) -> Pairing:
    """Pairing between two multisupports minimizing the largest circular distance.

    Binary search over the distinct pair distances; a width is feasible when the
    bipartite graph of pairs within it has a perfect matching.

    Raises:
        SizeMismatch: if the multisupports differ in size
    """
    xs, ys = _coords(a), _coords(b)
    if len(xs) != len(ys):
        raise SizeMismatch(f"cannot pair {len(xs)} coordinates with {len(ys)}")
    if not xs:
        return Pairing(pairs=(), width=0)
    dist = _distance_matrix(xs, ys, m)
    widths = np.unique(dist)
    lo, hi = 0, len(widths) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching(dist <= widths[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    matching = _perfect_matching(dist <= widths[lo])
    pairs = tuple((xs[row], ys[int(matching[row])]) for row in range(len(xs)))
    return Pairing(pairs=pairs, width=max(ell(i - j, m) for i, j in pairs))


def brute_force_width(a: Union[ReducedVector, Sequence[int]],
                      b: Union[ReducedVector, Sequence[int]],
                      m: int) -> int:
    """Minimum pairing width over every bijection; factorial time."""
    xs, ys = _coords(a), _coords(b)
    if len(xs) != len(ys):
        raise SizeMismatch(f"cannot pair {len(xs)} coordinates with {len(ys)}")
    if not xs:
        return 0
    return min(
        max(ell(x - y, m) for x, y in zip(xs, perm))
        for perm in itertools.permutations(ys)
    )


class BucketIndex:
    """Reduced vectors bucketed by their multiset of quantized coordinates.

    Coordinates are cut into cells of max(1, t // 2) rows on bucket_offsets
    grids shifted by fractions of a cell, so two vectors whose coordinates sit
    close but across a cell boundary on one grid still meet on another.
    Candidates are only ever accepted after an exact bottleneck check.
    """

    def __init__(self, t: int, m: int, bucket_offsets: int = 2, max_bucket_size: int = MAX_BUCKET_SIZE):
        self.t = t
        self.m = m
        self.cell = max(1, t // 2)
        self.ncells = math.ceil(m / self.cell)
        self.shifts = sorted({o * self.cell // bucket_offsets for o in range(bucket_offsets)})
        self.max_bucket_size = max_bucket_size
        self.buckets: List[Dict[Tuple[int, ...], List[ReducedVector]]] = [defaultdict(list) for _ in self.shifts]
        self.size = 0

    def keys(self, reduced: ReducedVector) -> List[Tuple[int, ...]]:
        return [
            tuple(sorted(((x + shift) // self.cell) % self.ncells for x in reduced.multisupport))
            for shift in self.shifts
        ]

    def probe(self, reduced: ReducedVector) -> List[Tuple[ReducedVector, Pairing]]:
        """Stored vectors from other chains whose pairing with reduced has width below t."""
        seen = set()
        found = []
        for grid, key in zip(self.buckets, self.keys(reduced)):
            for other in grid.get(key, ()):
                if id(other) in seen:
                    continue
                seen.add(id(other))
                if other.origin is not None and other.origin is reduced.origin:
                    continue
                if other is reduced or len(other) != len(reduced):
                    continue
                pairing = bottleneck_pairing(other, reduced, self.m)
                if pairing.width < self.t:
                    found.append((other, pairing))
        return found

    def insert(self, reduced: ReducedVector) -> None:
        for grid, key in zip(self.buckets, self.keys(reduced)):
            bucket = grid[key]
            if len(bucket) < self.max_bucket_size:
                bucket.append(reduced)
        self.size += 1


def find_collision(pool: Sequence[ReducedVector], t: int, m: int,
                   bucket_offsets: int = 2) -> Optional[Tuple[ReducedVector, ReducedVector, Pairing]]:
    """First verified pair of pool entries whose bottleneck pairing has width below t."""
    index = BucketIndex(t, m, bucket_offsets)
    for reduced in pool:
        hits = index.probe(reduced)
        if hits:
            other, pairing = hits[0]
            return other, reduced, pairing
        index.insert(reduced)
    return None


def assemble_codeword(code: StructuredCode, chain_u: ChainVector, chain_v: ChainVector,
                      cross_pairing: Pairing, t: int) -> SearchResult:
    """Close every pair of both chains with a run of C-columns and certify the word.

    The M-part is the symmetric difference of the two column sets; the C-part
    is the GF(2) sum of the runs of all built-in pairs and cross pairs.

    Raises:
        DegenerateZero: if everything cancels
        CertificationFailed: if the word is not a codeword or exceeds the bound
    """
    if chain_u.k != chain_v.k:
        raise ValueError(f"chains have different k: {chain_u.k} and {chain_v.k}")
    if cross_pairing.width >= t:
        raise CertificationFailed(f"cross pairing width {cross_pairing.width} is not below t={t}")
    m, n = code.m, code.n
    k = chain_u.k
    m_columns = tuple(sorted(set(chain_u.column_indices) ^ set(chain_v.column_indices)))

    bits = np.zeros(n, dtype=np.uint8)
    runs: List[CRun] = []
    for i, j in chain_u.built_in_pairs + chain_v.built_in_pairs + cross_pairing.pairs:
        if i == j:
            continue
        run = run_descriptor(i, j, m)
        runs.append(run)
        bits[(run.start + np.arange(run.length)) % m] ^= 1
    if m_columns:
        bits[m + np.asarray(m_columns)] = 1

    word = BitVector.from_bits(bits)
    if word.is_zero():
        raise DegenerateZero("the two chains cancel to the zero word")
    if not syndrome(code, word).is_zero():
        raise CertificationFailed("assembled word has a non-zero syndrome")
    weight = word.weight()
    limit = bounds.weight_bound(t, k, code.r)
    if weight > limit:
        raise CertificationFailed(f"assembled word has weight {weight} above the bound {limit}")
    return SearchResult(
        params=code.params,
        k=k,
        t=t,
        codeword=word,
        weight=weight,
        m_column_set=m_columns,
        c_runs=tuple(runs),
        chains=(chain_u, chain_v),
        cross_pairing=cross_pairing,
    )


def resolve_t(code: StructuredCode, config: SearchConfig) -> int:
    """The tolerance a search runs with: explicit t, else the bound-driven choice (at least 2k+1)."""
    if config.t:
        return config.t
    t = bounds.choose_t(code.m, code.r, config.k)
    if t <= 2 * config.k:
        logging.warning(f"[search] choose_t gave t={t} <= 2k at m={code.m}; using t={2 * config.k + 1}")
        t = 2 * config.k + 1
    return t


def _reduced_stream(code: StructuredCode, k: int, t: int, count: int, seed: int) -> Iterator[ReducedVector]:
    rng = random.Random(seed)
    for _ in range(count):
        yield reduce(build_chain(code, k, t, rng))


def _parallel_stream(code: StructuredCode, config: SearchConfig, t: int) -> Iterator[ReducedVector]:
    out: queue.Queue = queue.Queue(maxsize=4096)
    seeds = np.random.SeedSequence(config.seed).spawn(config.threads)
    share, extra = divmod(config.max_chains, config.threads)
    workers = []
    for w, seq in enumerate(seeds):
        count = share + (1 if w < extra else 0)
        stream_seed = int(seq.generate_state(1, dtype=np.uint64)[0])
        workers.append(StreamWorker(
            name=f"chains-{w}",
            producer=lambda count=count, stream_seed=stream_seed: _reduced_stream(code, config.k, t, count, stream_seed),
            out=out,
        ))
    for worker in workers:
        worker.start()
    try:
        yield from drain(workers, out)
    finally:
        for worker in workers:
            worker.stop_event.set()
        for worker in workers:
            worker.stop()


def search_min_weight(code: StructuredCode, config: SearchConfig) -> Optional[SearchResult]:
    """Sample up to max_chains chains and return the lightest certified codeword found.

    Deterministic for a given seed when config.threads == 1.
    """
    t = resolve_t(code, config)
    if config.max_chains < 2:
        logging.info(f"[search] budget of {config.max_chains} chain(s) cannot produce a collision")
        return None
    logging.info(
        f"[search] n={code.n} m={code.m} r={code.r} k={config.k} t={t} "
        f"budget={config.max_chains} threads={config.threads}"
    )
    if config.threads == 1:
        stream = _reduced_stream(code, config.k, t, config.max_chains, config.seed)
    else:
        stream = _parallel_stream(code, config, t)

    index = BucketIndex(t, code.m, config.bucket_offsets)
    best: Optional[SearchResult] = None
    used = 0
    degenerate = 0
    started = time.perf_counter()
    for reduced in stream:
        used += 1
        for other, pairing in index.probe(reduced):
            try:
                result = assemble_codeword(code, other.origin, reduced.origin, pairing, t)
            except DegenerateZero:
                degenerate += 1
                continue
            if best is None or result.weight < best.weight:
                logging.info(f"[search] weight {result.weight} after {used} chains")
                best = result
        index.insert(reduced)

    logging.info(
        f"[search] done: {used} chains, {degenerate} degenerate collisions, "
        f"best={None if best is None else best.weight} in {time.perf_counter() - started:.2f}s"
    )
    if best is None:
        return None
    return replace(best, chains_used=used)


def exact_min_distance(code: StructuredCode, max_dimension: int = MAX_ORACLE_DIMENSION) -> int:
    """Minimum weight over every non-zero codeword, from a kernel basis of H.

    Raises:
        TooLarge: if the code dimension exceeds max_dimension
    """
    if code.n - code.m > max_dimension:
        raise TooLarge(f"dimension is at least n-m={code.n - code.m} > {max_dimension}")
    rows = gf2.bitrows_from_column_supports(code.h_column_supports(), code.m)
    basis = gf2.nullspace_basis(rows, code.n)
    if len(basis) > max_dimension:
        raise TooLarge(f"dimension {len(basis)} > {max_dimension}")
    weight, _ = gf2.min_weight_gray(basis)
    return weight
