"""
Four-valued qubit algebra
Value alphabet {0, 1, V0, V1}, 3-wire truth-table entries and the
partial-permutation algebra on the 64 entries

Conventions used across the package:
- entry index = 16*code(v0) + 4*code(v1) + code(v2), wire 0 most significant
- composition is left-to-right: pp_compose(f, g)(x) = g(f(x))
- a banned entry (outside the domain) has image BANNED
"""

from dataclasses import dataclass
from enum import Enum, IntEnum
from itertools import product
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from qsynth.errors import InputError

NUM_WIRES = 3
NUM_VALUES = 4
NUM_ENTRIES = NUM_VALUES ** NUM_WIRES  # 64
BANNED = -1


# ============================================================================
# VALUES
# ============================================================================

class QValue(IntEnum):
    """Single-wire value; the integer is the canonical code"""
    B0 = 0
    B1 = 1
    V0 = 2
    V1 = 3

    @property
    def is_binary(self) -> bool:
        return self <= QValue.B1

    def __str__(self) -> str:
        return {0: '0', 1: '1', 2: 'V0', 3: 'V1'}[int(self)]


class ValueOp(Enum):
    """Single-wire operation applied by a gate to its target"""
    NOT = 'NOT'
    V = 'V'
    VDAG = 'VDAG'


# Indexed by code (B0, B1, V0, V1)
_VALUE_TABLES: Dict[ValueOp, Tuple[QValue, ...]] = {
    # (B0 B1)(V0 V1)
    ValueOp.NOT: (QValue.B1, QValue.B0, QValue.V1, QValue.V0),
    # B0 -> V0 -> B1 -> V1 -> B0
    ValueOp.V: (QValue.V0, QValue.V1, QValue.B1, QValue.B0),
    ValueOp.VDAG: (QValue.V1, QValue.V0, QValue.B0, QValue.B1),
}


def value_map(op: ValueOp, v: QValue) -> QValue:
    """
    Image of a single-wire value under NOT, V or V-dagger

    Args:
        op: operation applied to the wire
        v: current value of the wire

    Returns:
        Value of the wire after the operation
    """
    return _VALUE_TABLES[ValueOp(op)][int(v)]


# ============================================================================
# ENTRIES
# ============================================================================

class Entry(NamedTuple):
    """One row of the 4-valued truth table: the values of wires 0, 1, 2"""
    v0: QValue
    v1: QValue
    v2: QValue

    @property
    def index(self) -> int:
        return 16 * int(self.v0) + 4 * int(self.v1) + int(self.v2)

    @property
    def is_binary(self) -> bool:
        return all(QValue(v).is_binary for v in self)

    def __str__(self) -> str:
        return '(' + ','.join(str(QValue(v)) for v in self) + ')'


def entry_index(e: Sequence[QValue]) -> int:
    """Canonical index of an entry (0..63)"""
    if len(e) != NUM_WIRES:
        raise InputError(f"entry must have {NUM_WIRES} wires, got {len(e)}")
    return Entry(*(QValue(v) for v in e)).index


def entry_from_index(i: int) -> Entry:
    """Inverse of entry_index"""
    if not 0 <= i < NUM_ENTRIES:
        raise InputError(f"entry index {i} out of range 0..{NUM_ENTRIES - 1}")
    return Entry(QValue(i >> 4), QValue((i >> 2) & 3), QValue(i & 3))


def wire_value(index: int, wire: int) -> QValue:
    """Value carried by `wire` in the entry with the given index"""
    return QValue((index >> (2 * (NUM_WIRES - 1 - wire))) & 3)


def with_wire_value(index: int, wire: int, value: QValue) -> int:
    shift = 2 * (NUM_WIRES - 1 - wire)
    return (index & ~(3 << shift)) | (int(value) << shift)


def binary_entry(pattern: int) -> int:
    """Entry index of binary input pattern p = 4*b0 + 2*b1 + b2"""
    return 16 * ((pattern >> 2) & 1) + 4 * ((pattern >> 1) & 1) + (pattern & 1)


def pattern_of(index: int) -> Optional[int]:
    """Binary pattern of an entry, or None when some wire is V0/V1"""
    e = entry_from_index(index)
    if not e.is_binary:
        return None
    return 4 * int(e.v0) + 2 * int(e.v1) + int(e.v2)


# Entry indices of patterns 0..7, in pattern order
BINARY_ENTRIES: Tuple[int, ...] = tuple(binary_entry(p) for p in range(8))
BINARY_MASK = sum(1 << x for x in BINARY_ENTRIES)


def permute_entry_wires(index: int, sigma: Sequence[int]) -> int:
    """Relabel wires: the value on wire w moves to wire sigma[w]"""
    out = 0
    for w in range(NUM_WIRES):
        out = with_wire_value(out, sigma[w], wire_value(index, w))
    return out


def measurement_distribution(index: int) -> Dict[int, float]:
    """
    Computational-basis measurement of an entry

    Entries are product states; a V0/V1 wire reads 0 or 1 with
    probability 1/2 each.

    Returns:
        {binary pattern: probability}, patterns with zero probability omitted
    """
    e = entry_from_index(index)
    per_wire = [((int(v), 1.0),) if QValue(v).is_binary else ((0, 0.5), (1, 0.5)) for v in e]
    dist: Dict[int, float] = {}
    for (b0, p0), (b1, p1), (b2, p2) in product(*per_wire):
        pattern = 4 * b0 + 2 * b1 + b2
        dist[pattern] = dist.get(pattern, 0.0) + p0 * p1 * p2
    return dict(sorted(dist.items()))


# ============================================================================
# UNITARY ORACLE
# ============================================================================

def standard_operators() -> Dict[ValueOp, np.ndarray]:
    """X, V = sqrt(X) and V-dagger as 2x2 complex matrices"""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    v = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
    return {ValueOp.NOT: x, ValueOp.V: v, ValueOp.VDAG: v.conj().T}


def value_vectors() -> Dict[QValue, np.ndarray]:
    """State vectors of the four values: |0>, |1>, V|0>, V|1>"""
    v = standard_operators()[ValueOp.V]
    b0 = np.array([1, 0], dtype=complex)
    b1 = np.array([0, 1], dtype=complex)
    return {QValue.B0: b0, QValue.B1: b1, QValue.V0: v @ b0, QValue.V1: v @ b1}


@dataclass(frozen=True)
class OracleReport:
    checked: int
    mismatches: Tuple[Tuple[ValueOp, QValue], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def unitary_value_oracle(operators: Optional[Dict[ValueOp, np.ndarray]] = None) -> OracleReport:
    """
    Check the value tables against 2x2 matrix arithmetic

    All amplitudes involved are 0, 1 or (1 +/- i)/2, which are exact in
    binary floating point, so the comparison is exact equality.

    Args:
        operators: matrices to test in place of the standard ones
                   (missing keys fall back to the standard matrix)

    Returns:
        OracleReport listing every (op, value) whose matrix image differs
        from the table image
    """
    ops = standard_operators()
    if operators:
        ops.update({ValueOp(k): np.asarray(m, dtype=complex) for k, m in operators.items()})
    vectors = value_vectors()

    mismatches: List[Tuple[ValueOp, QValue]] = []
    checked = 0
    for op in ValueOp:
        for v in QValue:
            checked += 1
            if not np.array_equal(ops[op] @ vectors[v], vectors[value_map(op, v)]):
                mismatches.append((op, v))
    return OracleReport(checked=checked, mismatches=tuple(mismatches))


# ============================================================================
# PARTIAL PERMUTATIONS
# ============================================================================

@dataclass(frozen=True)
class PartialPerm:
    """
    Partial injection on the 64 entries

    images[x] is the image of entry x, or BANNED when x is outside the
    domain. Equality is exact equality of the image tuple.
    """
    images: Tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != NUM_ENTRIES:
            raise InputError(f"partial permutation needs {NUM_ENTRIES} images, got {len(self.images)}")
        seen = set()
        for y in self.images:
            if y == BANNED:
                continue
            if not 0 <= y < NUM_ENTRIES or y in seen:
                raise InputError(f"partial permutation is not injective at image {y}")
            seen.add(y)

    @classmethod
    def from_mapping(cls, mapping: Dict[int, int]) -> 'PartialPerm':
        images = [BANNED] * NUM_ENTRIES
        for x, y in mapping.items():
            images[x] = y
        return cls(tuple(images))

    @property
    def domain(self) -> int:
        """Domain as a 64-bit membership mask"""
        return sum(1 << x for x, y in enumerate(self.images) if y != BANNED)

    @property
    def banned(self) -> int:
        """Complement of the domain"""
        return ((1 << NUM_ENTRIES) - 1) & ~self.domain

    @property
    def size(self) -> int:
        return sum(1 for y in self.images if y != BANNED)

    @property
    def is_total(self) -> bool:
        return BANNED not in self.images

    def __call__(self, x: int) -> Optional[int]:
        return pp_apply(self, x)

    def items(self) -> Iterable[Tuple[int, int]]:
        return ((x, y) for x, y in enumerate(self.images) if y != BANNED)


_IDENTITY = PartialPerm(tuple(range(NUM_ENTRIES)))


def pp_identity() -> PartialPerm:
    return _IDENTITY


def pp_identity_on(domain: int) -> PartialPerm:
    """Identity restricted to a domain mask"""
    return PartialPerm(tuple(x if domain >> x & 1 else BANNED for x in range(NUM_ENTRIES)))


def pp_apply(f: PartialPerm, x: int) -> Optional[int]:
    """Image of x, or None when x is banned"""
    y = f.images[x]
    return None if y == BANNED else y


def pp_compose(f: PartialPerm, g: PartialPerm) -> PartialPerm:
    """Apply f, then g. Entries whose f-image is banned by g leave the domain."""
    gi = g.images
    return PartialPerm(tuple(BANNED if y == BANNED else gi[y] for y in f.images))


def pp_inverse(f: PartialPerm) -> PartialPerm:
    images = [BANNED] * NUM_ENTRIES
    for x, y in f.items():
        images[y] = x
    return PartialPerm(tuple(images))
