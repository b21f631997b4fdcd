"""
Domain records produced by the synthesis engine
Search statistics, the cost database, synthesis results and analysis reports
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from qsynth.services.binperm import (
    BinPerm,
    NotLayer,
    bp_compose,
    restricted_perm,
    unrank,
)
from qsynth.services.gates import Circuit, circuit_perm

GENERATORS = 'cnot,cv,cvdg'
GENERATORS_WITH_NOT = 'cnot,cv,cvdg,not'
RESIDUAL_ORDERS = ('notfirst', 'notlast')


@dataclass(frozen=True)
class LayerStats:
    """Statistics of one breadth-first layer"""
    depth: int
    states: int
    dead_transitions: int
    g_size: int
    s8_size: int
    seconds: float = field(default=0.0, compare=False)
    resident_bytes: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CostRecord:
    rank: int
    cost: int
    witness: Circuit


@dataclass(frozen=True)
class CostDatabase:
    """
    Minimum cost and witness for every reached 3-bit reversible function

    records are sorted by rank; G[k] is the set of ranks whose cost is k.
    Immutable after construction, safe to share between threads.
    """
    records: Tuple[CostRecord, ...]
    max_cost: int
    generators: str = GENERATORS
    order: str = 'notfirst'
    complete: bool = False
    partial: bool = field(default=False, compare=False)
    _by_rank: Dict[int, CostRecord] = field(default=None, init=False, repr=False, compare=False)
    _layers: Dict[int, Tuple[int, ...]] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        records = tuple(sorted(self.records, key=lambda r: r.rank))
        object.__setattr__(self, 'records', records)
        by_rank = {r.rank: r for r in records}
        layers: Dict[int, List[int]] = {k: [] for k in range(self.max_cost + 1)}
        for r in records:
            layers.setdefault(r.cost, []).append(r.rank)
        object.__setattr__(self, '_by_rank', by_rank)
        object.__setattr__(self, '_layers', {k: tuple(v) for k, v in layers.items()})

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CostRecord]:
        return iter(self.records)

    def __contains__(self, g: BinPerm) -> bool:
        return g.rank in self._by_rank

    def __repr__(self):
        return f'<CostDatabase max_cost={self.max_cost} records={len(self.records)} complete={self.complete}>'

    @property
    def free_nots(self) -> bool:
        return self.generators == GENERATORS_WITH_NOT

    def get(self, g: BinPerm) -> Optional[CostRecord]:
        return self._by_rank.get(g.rank)

    def cost_of(self, g: BinPerm) -> Optional[int]:
        record = self.get(g)
        return None if record is None else record.cost

    def layer(self, k: int) -> Tuple[int, ...]:
        """Ranks of G[k]"""
        return self._layers.get(k, ())

    def layer_perms(self, k: int) -> List[BinPerm]:
        return [unrank(r) for r in self.layer(k)]

    def layer_sizes(self) -> List[int]:
        return [len(self.layer(k)) for k in range(self.max_cost + 1)]

    def covers(self, bound: int) -> bool:
        """True when every function of cost <= bound is in the database"""
        return self.complete or bound <= self.max_cost

    @property
    def diameter(self) -> Optional[int]:
        """Largest cost present, reported only once the search closed"""
        if not self.complete:
            return None
        return max((k for k, ranks in self._layers.items() if ranks), default=0)


@dataclass(frozen=True)
class Synthesis:
    """
    NOT layer plus NOT-free circuit realizing a target

    With order 'notfirst' the layer is applied before the circuit,
    with 'notlast' after it.
    """
    target: BinPerm
    not_layer: NotLayer
    circuit: Circuit
    order: str = 'notfirst'

    @property
    def cost(self) -> int:
        return self.circuit.cost

    def full_circuit(self) -> Circuit:
        if self.order == 'notlast':
            return self.circuit + self.not_layer.as_circuit()
        return self.not_layer.as_circuit() + self.circuit

    def realized(self) -> Optional[BinPerm]:
        body = restricted_perm(circuit_perm(self.circuit))
        if body is None:
            return None
        layer = self.not_layer.as_binperm()
        if self.order == 'notlast':
            return bp_compose(body, layer)
        return bp_compose(layer, body)

    def verify(self) -> bool:
        return self.realized() == self.target


@dataclass(frozen=True)
class Theorem2Report:
    """Coset-decomposition checks over a database"""
    max_cost: int
    distinct_elements: int
    layer_sizes: Tuple[int, ...]
    s8_sizes: Tuple[int, ...]
    violations: Tuple[str, ...] = ()
    complete: bool = False
    g_total: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class G4Report:
    """Split of G[4] into CNOT-only members and the universal family"""
    feynman_ranks: Tuple[int, ...]
    other_ranks: Tuple[int, ...]
    universal: Dict[int, bool]
    orbits: Tuple[Tuple[int, ...], ...]
    compositions: Dict[int, Tuple[int, int]]

    @property
    def representatives(self) -> Tuple[int, ...]:
        return tuple(orbit[0] for orbit in self.orbits)

    @property
    def all_universal(self) -> bool:
        return all(self.universal.get(r, False) for r in self.other_ranks)
