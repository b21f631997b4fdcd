"""
Gate catalog, cost model and circuits
3 NOT + 6 CNOT + 6 controlled-V + 6 controlled-V-dagger gates on wires 0..2
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import permutations
from typing import Iterable, List, Optional, Sequence, Tuple

from qsynth.errors import InputError
from qsynth.services.mvl import (
    BANNED,
    NUM_ENTRIES,
    NUM_WIRES,
    PartialPerm,
    QValue,
    ValueOp,
    pp_compose,
    pp_identity,
    value_map,
    wire_value,
    with_wire_value,
)


class GateKind(Enum):
    NOT = 'NOT'
    CNOT = 'CNOT'
    CV = 'CV'
    CVDG = 'CVDG'

    @property
    def op(self) -> ValueOp:
        """Operation applied to the target wire"""
        return {
            GateKind.NOT: ValueOp.NOT,
            GateKind.CNOT: ValueOp.NOT,
            GateKind.CV: ValueOp.V,
            GateKind.CVDG: ValueOp.VDAG,
        }[self]

    @property
    def is_controlled(self) -> bool:
        return self is not GateKind.NOT

    @property
    def cost(self) -> int:
        return 0 if self is GateKind.NOT else 1


# Canonical order: CNOT < CV < CVDG, NOT gates listed after the two-qubit gates
_KIND_ORDER = {GateKind.CNOT: 0, GateKind.CV: 1, GateKind.CVDG: 2, GateKind.NOT: 3}

WIRE_PERMUTATIONS: Tuple[Tuple[int, ...], ...] = tuple(permutations(range(NUM_WIRES)))


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int
    control: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.target < NUM_WIRES:
            raise InputError(f"target wire {self.target} out of range 0..{NUM_WIRES - 1}")
        if self.kind.is_controlled:
            if self.control is None:
                raise InputError(f"{self.kind.value} needs a control wire")
            if not 0 <= self.control < NUM_WIRES:
                raise InputError(f"control wire {self.control} out of range 0..{NUM_WIRES - 1}")
            if self.control == self.target:
                raise InputError(f"control and target are both wire {self.target}")
        elif self.control is not None:
            raise InputError("NOT takes no control wire")

    @property
    def cost(self) -> int:
        return self.kind.cost

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (_KIND_ORDER[self.kind], -1 if self.control is None else self.control, self.target)

    def dagger(self) -> 'Gate':
        """Inverse gate: CV <-> CVDG, NOT and CNOT are involutions"""
        swap = {GateKind.CV: GateKind.CVDG, GateKind.CVDG: GateKind.CV}
        return Gate(swap.get(self.kind, self.kind), self.target, self.control)

    def relabel(self, sigma: Sequence[int]) -> 'Gate':
        control = None if self.control is None else sigma[self.control]
        return Gate(self.kind, sigma[self.target], control)

    def __str__(self) -> str:
        if self.control is None:
            return f"{self.kind.value}({self.target})"
        return f"{self.kind.value}({self.control},{self.target})"


def NOT(t: int) -> Gate:
    return Gate(GateKind.NOT, t)


def CNOT(c: int, t: int) -> Gate:
    return Gate(GateKind.CNOT, t, c)


def CV(c: int, t: int) -> Gate:
    return Gate(GateKind.CV, t, c)


def CVDG(c: int, t: int) -> Gate:
    return Gate(GateKind.CVDG, t, c)


# ============================================================================
# CATALOG
# ============================================================================

_WIRE_PAIRS = [(c, t) for c in range(NUM_WIRES) for t in range(NUM_WIRES) if c != t]

_TWO_QUBIT: Tuple[Gate, ...] = tuple(
    Gate(kind, t, c)
    for kind in (GateKind.CNOT, GateKind.CV, GateKind.CVDG)
    for c, t in _WIRE_PAIRS
)
_NOTS: Tuple[Gate, ...] = tuple(NOT(t) for t in range(NUM_WIRES))


def two_qubit_gates() -> List[Gate]:
    """The 18 search generators, in canonical order"""
    return list(_TWO_QUBIT)


def not_gates() -> List[Gate]:
    return list(_NOTS)


def cnot_gates() -> List[Gate]:
    return [g for g in _TWO_QUBIT if g.kind is GateKind.CNOT]


def gate_catalog() -> List[Gate]:
    """All 21 gates: the two-qubit gates in canonical order, then NOT(0..2)"""
    return list(_TWO_QUBIT + _NOTS)


@lru_cache(maxsize=None)
def gate_perm(g: Gate) -> PartialPerm:
    """
    Partial permutation of a gate on the 64 entries

    A controlled gate is undefined where its control carries V0/V1; on the
    other 32 entries it applies its operation to the target when the control
    is 1 and is the identity when the control is 0.
    """
    images = []
    for x in range(NUM_ENTRIES):
        if g.kind.is_controlled:
            c = wire_value(x, g.control)
            if not c.is_binary:
                images.append(BANNED)
                continue
            if c is QValue.B0:
                images.append(x)
                continue
        t = wire_value(x, g.target)
        images.append(with_wire_value(x, g.target, value_map(g.kind.op, t)))
    return PartialPerm(tuple(images))


# ============================================================================
# CIRCUITS
# ============================================================================

@dataclass(frozen=True)
class Circuit:
    """Gate sequence, leftmost gate applied first"""
    gates: Tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))

    @classmethod
    def of(cls, *gates: Gate) -> 'Circuit':
        return cls(tuple(gates))

    @property
    def cost(self) -> int:
        """Number of two-qubit gates"""
        return sum(g.cost for g in self.gates)

    @property
    def is_not_free(self) -> bool:
        return all(g.kind is not GateKind.NOT for g in self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: 'Circuit') -> 'Circuit':
        return Circuit(self.gates + tuple(other.gates))

    def __str__(self) -> str:
        return ' '.join(str(g) for g in self.gates)


def circuit_perm(c: Iterable[Gate]) -> PartialPerm:
    """Left-to-right composition of the gates' partial permutations"""
    p = pp_identity()
    for g in c:
        p = pp_compose(p, gate_perm(g))
    return p


def circuit_inverse(c: Circuit) -> Circuit:
    return Circuit(tuple(g.dagger() for g in reversed(c.gates)))


def conjugate_by_wire_perm(c: Circuit, sigma: Sequence[int]) -> Circuit:
    """Relabel every gate's wires: wire w becomes sigma[w]"""
    if sorted(sigma) != list(range(NUM_WIRES)):
        raise InputError(f"{tuple(sigma)} is not a permutation of the wires")
    return Circuit(tuple(g.relabel(sigma) for g in c.gates))
