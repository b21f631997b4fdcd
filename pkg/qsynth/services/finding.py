"""
Layered breadth-first search over circuits built from the two-qubit gates

Layer k holds the distinct search states first reached with k gates, in the
lexicographic order of their smallest witness word. Each layer's states are
restricted to the binary patterns; functions not seen at a lower cost form G[k].
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from qsynth import current_app
from qsynth.errors import BudgetExceededError, InputError
from qsynth.extensions import logger
from qsynth.models import (
    GENERATORS,
    GENERATORS_WITH_NOT,
    CostDatabase,
    CostRecord,
    LayerStats,
)
from qsynth.services.binperm import (
    S8_ORDER,
    BinPerm,
    bp_compose,
    not_layers,
    rank_array,
)
from qsynth.services.gates import Circuit, Gate, gate_perm, two_qubit_gates
from qsynth.services.mvl import BANNED, BINARY_ENTRIES, NUM_ENTRIES

# Absorbing image standing for "banned"
SINK = NUM_ENTRIES
CHUNK_ROWS = 1 << 15
SEARCH_KEYS = ('trajectory', 'full')


@dataclass
class SearchLayer:
    """
    One breadth-first layer

    states[i] holds the images of the tracked entries (SINK when banned);
    parents[i] indexes the previous layer and generators[i] the generator
    that extended it.
    """
    depth: int
    states: np.ndarray
    parents: np.ndarray
    generators: np.ndarray
    dead_transitions: int = 0
    seconds: float = 0.0
    resident_bytes: int = 0

    def __len__(self) -> int:
        return len(self.parents)


# ============================================================================
# GENERATOR TABLES
# ============================================================================

def _image_table(images: Sequence[int]) -> np.ndarray:
    table = np.full(NUM_ENTRIES + 1, SINK, dtype=np.uint8)
    for x, y in enumerate(images):
        if y != BANNED:
            table[x] = y
    return table


@lru_cache(maxsize=None)
def generator_words(free_nots: bool) -> Tuple[Tuple[Gate, ...], ...]:
    """
    Gate words added by one search step

    Without free NOTs these are the 18 two-qubit gates. With free NOTs every
    gate is followed by each of the 8 NOT layers, so NOTs ride along at no cost.
    """
    if not free_nots:
        return tuple((g,) for g in two_qubit_gates())
    return tuple((g,) + layer.as_circuit().gates for g in two_qubit_gates() for layer in not_layers())


@lru_cache(maxsize=None)
def _generator_tables(free_nots: bool) -> np.ndarray:
    tables = []
    for word in generator_words(free_nots):
        table = np.arange(NUM_ENTRIES + 1, dtype=np.uint8)
        for g in word:
            table = _image_table(gate_perm(g).images)[table]
        tables.append(table)
    return np.stack(tables)


def _tracked_entries(key: str) -> Tuple[np.ndarray, np.ndarray]:
    """Entries whose images make up a state, and the columns holding binary inputs"""
    if key == 'trajectory':
        return np.array(BINARY_ENTRIES, dtype=np.uint8), np.arange(len(BINARY_ENTRIES))
    return np.arange(NUM_ENTRIES, dtype=np.uint8), np.array(BINARY_ENTRIES)


# ============================================================================
# DEDUPLICATION
# ============================================================================

def _pack(states: np.ndarray) -> np.ndarray:
    """(n, W) uint8 states -> (n, W/8) uint64 keys"""
    return np.ascontiguousarray(states).view(np.uint64)


def _unique_min(keys: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Indices of one row per distinct key: the one with the smallest order"""
    if len(order) == 0:
        return np.zeros(0, dtype=np.int64)
    columns = tuple(keys[:, c] for c in reversed(range(keys.shape[1])))
    idx = np.lexsort((order,) + columns)
    sorted_keys = keys[idx]
    first = np.ones(len(idx), dtype=bool)
    first[1:] = (sorted_keys[1:] != sorted_keys[:-1]).any(axis=1)
    return idx[first]


class _SeenSet:
    """Keys of every state placed in some layer"""

    def __init__(self, width: int):
        self.width = width
        self._sorted = np.zeros(0, dtype=np.uint64)
        self._rows: Set[bytes] = set()

    def __len__(self):
        return len(self._sorted) if self.width == 1 else len(self._rows)

    @property
    def nbytes(self) -> int:
        if self.width == 1:
            return self._sorted.nbytes
        return len(self._rows) * (8 * self.width + 64)

    def fresh(self, keys: np.ndarray) -> np.ndarray:
        if self.width == 1:
            return ~np.isin(keys[:, 0], self._sorted, assume_unique=True)
        return np.array([row.tobytes() not in self._rows for row in keys], dtype=bool)

    def add(self, keys: np.ndarray):
        if self.width == 1:
            self._sorted = np.sort(np.concatenate([self._sorted, keys[:, 0]]))
        else:
            self._rows.update(row.tobytes() for row in keys)


# ============================================================================
# LAYER EXPANSION
# ============================================================================

def _expand_chunk(tables: np.ndarray, states: np.ndarray, start: int, live_cols: np.ndarray):
    """Apply every generator to a slice of the frontier and drop dead and duplicate results"""
    n_gen = len(tables)
    images = tables[:, states]
    live = (images[:, :, live_cols] < SINK).all(axis=2)
    dead = int(live.size - np.count_nonzero(live))
    gen_idx, row_idx = np.nonzero(live)
    candidates = images[gen_idx, row_idx]
    order = (start + row_idx).astype(np.int64) * n_gen + gen_idx
    keys = _pack(candidates)
    keep = _unique_min(keys, order)
    return candidates[keep], keys[keep], order[keep], dead


def iter_layers(max_cost: int, free_nots: bool = False, key: str = 'trajectory',
                threads: int = 1, memory_ceiling_bytes: Optional[int] = None) -> Iterator[SearchLayer]:
    """
    Yield layers 0..max_cost, stopping early once a layer comes out empty

    Results do not depend on `threads`: chunk results are merged and the
    minimum order wins, exactly as in a single pass.

    Raises:
        BudgetExceededError: the next layer would not fit under the ceiling
    """
    if key not in SEARCH_KEYS:
        raise InputError(f"unknown search key '{key}' (known: {', '.join(SEARCH_KEYS)})")
    tables = _generator_tables(free_nots)
    n_gen = len(tables)
    tracked, live_cols = _tracked_entries(key)
    seen = _SeenSet(len(tracked) // 8)

    started = time.perf_counter()
    if free_nots:
        states = np.stack([_image_table(layer.as_partial_perm().images)[tracked] for layer in not_layers()])
        generators = np.arange(len(states), dtype=np.int64)
    else:
        states = tracked[None, :].copy()
        generators = np.full(1, -1, dtype=np.int64)
    parents = np.full(len(states), -1, dtype=np.int64)
    seen.add(_pack(states))
    history_bytes = parents.nbytes + generators.nbytes

    frontier = SearchLayer(0, states, parents, generators, 0, time.perf_counter() - started,
                           history_bytes + states.nbytes + seen.nbytes)
    yield frontier

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for depth in range(1, max_cost + 1):
            started = time.perf_counter()
            starts = range(0, len(frontier.states), CHUNK_ROWS)
            slices = [(frontier.states[s:s + CHUNK_ROWS], s) for s in starts]
            if pool is not None:
                results = pool.map(lambda sl: _expand_chunk(tables, sl[0], sl[1], live_cols), slices)
            else:
                results = (_expand_chunk(tables, sl[0], sl[1], live_cols) for sl in slices)

            parts, dead = [], 0
            pending_bytes = 0
            for candidates, keys, order, chunk_dead in results:
                fresh = seen.fresh(keys)
                parts.append((candidates[fresh], keys[fresh], order[fresh]))
                dead += chunk_dead
                pending_bytes += candidates[fresh].nbytes + keys[fresh].nbytes + order[fresh].nbytes
                resident = history_bytes + frontier.states.nbytes + seen.nbytes + pending_bytes
                if memory_ceiling_bytes is not None and resident > memory_ceiling_bytes:
                    logger.error(f"layer {depth}: ~{resident} bytes exceeds ceiling {memory_ceiling_bytes}")
                    raise BudgetExceededError(depth - 1, needed_bytes=resident,
                                              ceiling_bytes=memory_ceiling_bytes)

            if parts:
                candidates = np.concatenate([p[0] for p in parts])
                keys = np.concatenate([p[1] for p in parts])
                order = np.concatenate([p[2] for p in parts])
            else:
                candidates = np.zeros((0, len(tracked)), dtype=np.uint8)
                keys = np.zeros((0, len(tracked) // 8), dtype=np.uint64)
                order = np.zeros(0, dtype=np.int64)

            keep = _unique_min(keys, order)
            keep = keep[np.argsort(order[keep], kind='stable')]
            states, order = candidates[keep], order[keep]
            seen.add(keys[keep])

            parents = order // n_gen
            generators = order % n_gen
            history_bytes += parents.nbytes + generators.nbytes
            frontier = SearchLayer(depth, states, parents, generators, dead, time.perf_counter() - started,
                                   history_bytes + states.nbytes + seen.nbytes)
            logger.info(f"layer {depth}: states={len(states)}, dead={dead}, "
                        f"{frontier.seconds:.2f}s, ~{frontier.resident_bytes // 1024} KiB")
            yield frontier
            if len(states) == 0:
                return
    finally:
        if pool is not None:
            pool.shutdown()


# ============================================================================
# FINDING
# ============================================================================

def _restrictions(layer: SearchLayer, live_cols: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Ranks of the binary-preserving states of a layer and their positions"""
    images = layer.states[:, live_cols].astype(np.int64)
    binary = ((images & 0b101010) == 0).all(axis=1)
    patterns = ((images >> 4) & 1) * 4 + ((images >> 2) & 1) * 2 + (images & 1)
    positions = np.flatnonzero(binary)
    return rank_array(patterns[binary]), positions


def layer_witness(layers: Sequence[SearchLayer], depth: int, index: int, free_nots: bool = False) -> Circuit:
    """Gate word leading to state `index` of layer `depth`"""
    words = generator_words(free_nots)
    gates: List[Gate] = []
    while depth > 0:
        layer = layers[depth]
        gates[:0] = words[int(layer.generators[index])]
        index = int(layer.parents[index])
        depth -= 1
    if free_nots:
        gates[:0] = not_layers()[int(layers[0].generators[index])].as_circuit().gates
    return Circuit(tuple(gates))


def finding(max_cost: int, free_nots: bool = False, *, key: Optional[str] = None,
            threads: Optional[int] = None, memory_ceiling_mb: Optional[int] = None
            ) -> Tuple[CostDatabase, List[LayerStats]]:
    """
    Build G[0..max_cost] with lexicographically smallest witnesses

    Args:
        max_cost: deepest layer to build
        free_nots: also allow NOT gates anywhere at cost 0 (validation mode)
        key: 'trajectory' or 'full' search states (config SEARCH_KEY)
        threads: workers for layer expansion (config WORKER_THREADS)
        memory_ceiling_mb: search budget (config MEMORY_CEILING_MB)

    Returns:
        (database, per-layer statistics)

    Raises:
        BudgetExceededError: carries the partial database up to the last
                             completed layer and its statistics
    """
    if max_cost < 0:
        raise InputError(f"max_cost must be >= 0, got {max_cost}")
    settings = current_app().config
    key = key or settings['SEARCH_KEY']
    threads = max(1, threads or settings['WORKER_THREADS'])
    ceiling_mb = memory_ceiling_mb if memory_ceiling_mb is not None else settings['MEMORY_CEILING_MB']
    ceiling = ceiling_mb * 1024 * 1024 if ceiling_mb else None

    _, live_cols = _tracked_entries(key)
    found = np.zeros(S8_ORDER, dtype=bool)
    reachable = S8_ORDER if free_nots else S8_ORDER // 8
    located: List[Tuple[int, int, int]] = []
    layers: List[SearchLayer] = []
    stats: List[LayerStats] = []
    complete = False

    def build(final_cost: int, partial: bool = False) -> CostDatabase:
        records = [CostRecord(r, depth, layer_witness(layers, depth, i, free_nots)) for r, depth, i in located]
        return CostDatabase(tuple(records), final_cost,
                            generators=GENERATORS_WITH_NOT if free_nots else GENERATORS,
                            order=settings['RESIDUAL_ORDER'], complete=complete, partial=partial)

    logger.info(f"finding: max_cost={max_cost}, free_nots={free_nots}, key={key}, threads={threads}")
    try:
        for layer in iter_layers(max_cost, free_nots, key, threads, ceiling):
            ranks, positions = _restrictions(layer, live_cols)
            unique, first = np.unique(ranks, return_index=True)
            new = ~found[unique]
            found[unique[new]] = True
            located.extend((int(r), layer.depth, int(positions[i])) for r, i in zip(unique[new], first[new]))
            # Earlier layers only feed witness reconstruction
            if layers:
                layers[-1].states = layers[-1].states[:0]
            layers.append(layer)

            g_size = int(np.count_nonzero(new))
            s8_size = g_size if free_nots else g_size * 8
            stats.append(LayerStats(layer.depth, len(layer), layer.dead_transitions, g_size, s8_size,
                                    layer.seconds, layer.resident_bytes))
            logger.info(f"layer {layer.depth}: |G|={g_size}, |S8|={s8_size}")
            # Closed: no new state, or every reachable function is known (NOT-free
            # circuits fix pattern 0, so they reach at most 7! functions)
            if len(layer) == 0 or np.count_nonzero(found) == reachable:
                complete = True
                break
    except BudgetExceededError as e:
        e.database = build(e.last_layer, partial=True)
        e.layers = stats
        raise

    return build(max_cost), stats


def s8_layer(db: CostDatabase, k: int, order: Optional[str] = None) -> Set[BinPerm]:
    """
    NOT-layer images of G[k]: { a*g : a in N, g in G[k] }

    With order 'notfirst' (default) the NOT layer is applied first.
    """
    if k > db.max_cost and not db.complete:
        raise InputError(f"layer {k} is beyond the database (max_cost={db.max_cost})")
    order = order or db.order
    layers = [a.as_binperm() for a in not_layers()]
    result = set()
    for g in db.layer_perms(k):
        for a in layers:
            result.add(bp_compose(g, a) if order == 'notlast' else bp_compose(a, g))
    return result
