"""
Minimum-cost synthesis of 3-bit reversible functions
NOT layer + NOT-free circuit, looked up in a cost database or found by
iterative-deepening search over the two-qubit gates
"""

from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from qsynth import current_app
from qsynth.errors import BoundExceededError, InputError, VerificationError
from qsynth.extensions import logger
from qsynth.models import CostDatabase, Synthesis
from qsynth.services.binperm import (
    BinPerm,
    NotLayer,
    bp_compose,
    bp_inverse,
    not_layers,
)
from qsynth.services.gates import Circuit, Gate, gate_perm, two_qubit_gates
from qsynth.services.mvl import BANNED, BINARY_ENTRIES, NUM_ENTRIES, pattern_of

SINK = NUM_ENTRIES


def residual(g: BinPerm, layer: NotLayer, order: str = 'notfirst') -> BinPerm:
    """The NOT-free part h with g = a*h (notfirst) or g = h*a (notlast)"""
    a_inv = bp_inverse(layer.as_binperm())
    if order == 'notlast':
        return bp_compose(g, a_inv)
    return bp_compose(a_inv, g)


def residuals(g: BinPerm, order: str = 'notfirst') -> Dict[BinPerm, NotLayer]:
    """The 8 residuals of g, one per NOT layer (all distinct)"""
    return {residual(g, a, order): a for a in not_layers()}


def _verified(s: Synthesis) -> Synthesis:
    if not s.verify():
        raise VerificationError(f"circuit {s.circuit} with NOT mask {s.not_layer.mask} "
                                f"does not realize {s.target}")
    return s


# ============================================================================
# TRAJECTORY SEARCH HELPERS
# ============================================================================

@lru_cache(maxsize=None)
def _step_tables() -> Tuple[Tuple[Gate, Tuple[int, ...]], ...]:
    """(gate, image table with SINK for banned) for each search generator"""
    steps = []
    for g in two_qubit_gates():
        table = [SINK if y == BANNED else y for y in gate_perm(g).images] + [SINK]
        steps.append((g, tuple(table)))
    return tuple(steps)


_PATTERNS = tuple(pattern_of(x) for x in range(NUM_ENTRIES)) + (None,)


def _as_images(state: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
    """Pattern images of a trajectory, or None when some image is non-binary"""
    images = tuple(_PATTERNS[x] for x in state)
    return None if None in images else images


def _iddfs(targets: Dict[Tuple[int, ...], NotLayer], limit: int) -> Optional[Tuple[Circuit, NotLayer]]:
    """
    Lexicographically first word of exactly `limit` gates whose restriction is a target

    A transposition table skips states already expanded at the same or a
    smaller depth within this iteration.
    """
    steps = _step_tables()
    visited: Dict[Tuple[int, ...], int] = {}
    path: List[Gate] = []

    def dfs(state: Tuple[int, ...], depth: int) -> Optional[NotLayer]:
        if depth == limit:
            images = _as_images(state)
            return None if images is None else targets.get(images)
        if visited.get(state, limit + 1) <= depth:
            return None
        visited[state] = depth
        for gate, table in steps:
            nxt = tuple(table[x] for x in state)
            if SINK in nxt:
                continue
            path.append(gate)
            hit = dfs(nxt, depth + 1)
            if hit is not None:
                return hit
            path.pop()
        return None

    layer = dfs(BINARY_ENTRIES, 0)
    if layer is None:
        return None
    return Circuit(tuple(path)), layer


# ============================================================================
# EXPRESSING
# ============================================================================

def expressing(g: BinPerm, cb: int, db: Optional[CostDatabase] = None,
               order: Optional[str] = None) -> Synthesis:
    """
    Minimum-cost NOT layer + NOT-free circuit for g

    Args:
        g: target function
        cb: cost bound
        db: cost database; a hit there is minimal, a miss is final when
            the database covers cb, otherwise the iterative-deepening
            search continues above db.max_cost
        order: 'notfirst' or 'notlast' (config RESIDUAL_ORDER)

    Returns:
        Verified Synthesis of minimum two-qubit cost

    Raises:
        BoundExceededError: the minimum cost is above cb
    """
    if cb < 0:
        raise InputError(f"cost bound must be >= 0, got {cb}")
    settings = current_app().config
    order = order or settings['RESIDUAL_ORDER']
    targets = residuals(g, order)

    start = 0
    if db is not None and not db.free_nots:
        best = None
        for h, layer in targets.items():
            record = db.get(h)
            if record is None:
                continue
            if best is None or (record.cost, layer.mask) < (best[0].cost, best[1].mask):
                best = (record, layer)
        if best is not None:
            if best[0].cost > cb:
                raise BoundExceededError(g, cb, f"minimum cost is {best[0].cost}")
            logger.debug(f"expressing {g}: database hit at cost {best[0].cost}, mask {best[1].mask}")
            return _verified(Synthesis(g, best[1], best[0].witness, order))
        if db.covers(cb):
            raise BoundExceededError(g, cb)
        # Nothing at cost <= db.max_cost
        start = db.max_cost + 1

    limit = min(cb, settings['DFS_MAX_COST'])
    by_images = {h.images: layer for h, layer in targets.items()}
    for depth in range(start, limit + 1):
        hit = _iddfs(by_images, depth)
        if hit is not None:
            circuit, layer = hit
            logger.debug(f"expressing {g}: search hit at cost {depth}, mask {layer.mask}")
            return _verified(Synthesis(g, layer, circuit, order))
    reason = f"search limited to cost {limit}" if limit < cb else ''
    raise BoundExceededError(g, cb, reason)


def enumerate_min_impls(g: BinPerm, k: int, order: Optional[str] = None) -> List[Synthesis]:
    """
    Every NOT-free gate word of exactly k gates realizing g up to a NOT layer

    Exhaustive depth-first enumeration (at most 18^k words, pruned at dead
    states); results come out in canonical lexicographic order.
    """
    if k < 0:
        raise InputError(f"k must be >= 0, got {k}")
    order = order or current_app().config['RESIDUAL_ORDER']
    by_images = {h.images: layer for h, layer in residuals(g, order).items()}
    steps = _step_tables()
    found: List[Synthesis] = []
    path: List[Gate] = []

    def dfs(state: Tuple[int, ...], depth: int):
        if depth == k:
            images = _as_images(state)
            layer = None if images is None else by_images.get(images)
            if layer is not None:
                found.append(_verified(Synthesis(g, layer, Circuit(tuple(path)), order)))
            return
        for gate, table in steps:
            nxt = tuple(table[x] for x in state)
            if SINK in nxt:
                continue
            path.append(gate)
            dfs(nxt, depth + 1)
            path.pop()

    dfs(BINARY_ENTRIES, 0)
    logger.info(f"enumerate_min_impls {g} at cost {k}: {len(found)} implementations")
    return found
