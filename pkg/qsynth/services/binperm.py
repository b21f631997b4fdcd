"""
The binary world: permutations of the 8 binary patterns (S8)
Restriction of partial permutations, NOT layers, Lehmer ranking,
group closure and the universality test

Pattern encoding: p = 4*v0 + 2*v1 + v2 (wire 0 most significant).
bp_compose(f, g) applies f first, like pp_compose.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from qsynth.errors import InputError
from qsynth.services.gates import NOT, Circuit, circuit_perm, cnot_gates, gate_perm
from qsynth.services.mvl import (
    BANNED,
    BINARY_ENTRIES,
    NUM_WIRES,
    PartialPerm,
    pattern_of,
)

NUM_PATTERNS = 8
S8_ORDER = math.factorial(NUM_PATTERNS)  # 40320
_FACT = [math.factorial(i) for i in range(NUM_PATTERNS)]


@dataclass(frozen=True)
class BinPerm:
    """images[i] is the output pattern for input pattern i"""
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if len(images) != NUM_PATTERNS:
            raise InputError(f"a 3-bit permutation has {NUM_PATTERNS} images, got {len(images)}")
        if sorted(images) != list(range(NUM_PATTERNS)):
            raise InputError(f"{list(images)} is not a permutation of 0..{NUM_PATTERNS - 1}")
        object.__setattr__(self, 'images', images)

    def __call__(self, pattern: int) -> int:
        return self.images[pattern]

    def __str__(self) -> str:
        return '[' + ','.join(str(x) for x in self.images) + ']'

    @property
    def rank(self) -> int:
        return rank(self)

    @property
    def order(self) -> int:
        """Order of the permutation in S8 (lcm of its cycle lengths)"""
        seen = [False] * NUM_PATTERNS
        result = 1
        for start in range(NUM_PATTERNS):
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.images[x]
                length += 1
            if length:
                result = math.lcm(result, length)
        return result


@dataclass(frozen=True)
class NotLayer:
    """
    Input-side layer of NOT gates

    mask is expressed in pattern bits, so the layer acts on patterns as
    x -> x XOR mask: bit 4 flips wire 0, bit 2 wire 1, bit 1 wire 2.
    """
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < NUM_PATTERNS:
            raise InputError(f"NOT mask {self.mask} out of range 0..7")

    @classmethod
    def on_wires(cls, wires: Iterable[int]) -> 'NotLayer':
        return cls(sum(1 << (NUM_WIRES - 1 - w) for w in set(wires)))

    @property
    def wires(self) -> List[int]:
        return [w for w in range(NUM_WIRES) if self.mask >> (NUM_WIRES - 1 - w) & 1]

    def as_binperm(self) -> BinPerm:
        return BinPerm(tuple(x ^ self.mask for x in range(NUM_PATTERNS)))

    def as_circuit(self) -> Circuit:
        return Circuit(tuple(NOT(w) for w in self.wires))

    def as_partial_perm(self) -> PartialPerm:
        return circuit_perm(self.as_circuit())

    def __mul__(self, other: 'NotLayer') -> 'NotLayer':
        return NotLayer(self.mask ^ other.mask)


def not_layers() -> List[NotLayer]:
    """The group N, ordered by mask"""
    return [NotLayer(m) for m in range(NUM_PATTERNS)]


# ============================================================================
# RESTRICTION
# ============================================================================

def restricted_map(p: PartialPerm) -> Optional[Tuple[int, ...]]:
    """
    Images (entry indices) of the 8 binary inputs, in pattern order

    Returns None when some binary input is banned. Images may be non-binary.
    """
    images = tuple(p.images[x] for x in BINARY_ENTRIES)
    if BANNED in images:
        return None
    return images


def restricted_perm(p: PartialPerm) -> Optional[BinPerm]:
    """
    Permutation induced on the binary patterns

    Defined only when every binary input is in the domain and every image is
    binary; None otherwise.
    """
    images = restricted_map(p)
    if images is None:
        return None
    patterns = [pattern_of(y) for y in images]
    if None in patterns:
        return None
    return BinPerm(tuple(patterns))


# ============================================================================
# GROUP OPERATIONS
# ============================================================================

def bp_identity() -> BinPerm:
    return BinPerm(tuple(range(NUM_PATTERNS)))


def bp_compose(f: BinPerm, g: BinPerm) -> BinPerm:
    """Apply f, then g"""
    return BinPerm(tuple(g.images[y] for y in f.images))


def bp_inverse(f: BinPerm) -> BinPerm:
    images = [0] * NUM_PATTERNS
    for x, y in enumerate(f.images):
        images[y] = x
    return BinPerm(tuple(images))


def permute_pattern_wires(pattern: int, sigma: Sequence[int]) -> int:
    """Move the bit of wire w to wire sigma[w]"""
    out = 0
    for w in range(NUM_WIRES):
        if pattern >> (NUM_WIRES - 1 - w) & 1:
            out |= 1 << (NUM_WIRES - 1 - sigma[w])
    return out


def conjugate_binperm(g: BinPerm, sigma: Sequence[int]) -> BinPerm:
    """The function g with its wires relabelled through sigma"""
    images = [0] * NUM_PATTERNS
    for x in range(NUM_PATTERNS):
        images[permute_pattern_wires(x, sigma)] = permute_pattern_wires(g.images[x], sigma)
    return BinPerm(tuple(images))


# ============================================================================
# RANKING
# ============================================================================

def rank(g: BinPerm) -> int:
    """Lehmer rank: lexicographic index among the 40320 permutations"""
    images = g.images
    r = 0
    for i in range(NUM_PATTERNS - 1):
        smaller = sum(1 for y in images[i + 1:] if y < images[i])
        r += smaller * _FACT[NUM_PATTERNS - 1 - i]
    return r


def unrank(r: int) -> BinPerm:
    if not 0 <= r < S8_ORDER:
        raise InputError(f"rank {r} out of range 0..{S8_ORDER - 1}")
    pool = list(range(NUM_PATTERNS))
    images = []
    for i in range(NUM_PATTERNS - 1, -1, -1):
        digit, r = divmod(r, _FACT[i])
        images.append(pool.pop(digit))
    return BinPerm(tuple(images))


def rank_array(perms: np.ndarray) -> np.ndarray:
    """Vectorised rank of an (N, 8) array of permutations"""
    perms = np.asarray(perms, dtype=np.int64).reshape(-1, NUM_PATTERNS)
    ranks = np.zeros(len(perms), dtype=np.int64)
    for i in range(NUM_PATTERNS - 1):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        ranks += smaller * _FACT[NUM_PATTERNS - 1 - i]
    return ranks


# ============================================================================
# CLOSURE AND UNIVERSALITY
# ============================================================================

def closure_ranks(generators: Iterable[BinPerm]) -> np.ndarray:
    """
    Sorted ranks of the subgroup generated by `generators`

    Worklist over a 40320-entry membership table; each round right-multiplies
    the newest elements by every generator.
    """
    gens = np.array([g.images for g in generators], dtype=np.int64).reshape(-1, NUM_PATTERNS)
    seen = np.zeros(S8_ORDER, dtype=bool)
    seen[0] = True
    frontier = np.arange(NUM_PATTERNS, dtype=np.int64)[None, :]

    while len(frontier) and len(gens):
        candidates = gens[:, frontier].reshape(-1, NUM_PATTERNS)
        ranks, first = np.unique(rank_array(candidates), return_index=True)
        fresh = ~seen[ranks]
        seen[ranks[fresh]] = True
        frontier = candidates[first[fresh]]

    return np.flatnonzero(seen)


def generate_closure(generators: Iterable[BinPerm]) -> Set[BinPerm]:
    """Smallest subset of S8 containing the generators and the identity, closed under composition"""
    return {unrank(int(r)) for r in closure_ranks(generators)}


def single_wire_not_layers() -> List[BinPerm]:
    return [NotLayer.on_wires([w]).as_binperm() for w in range(NUM_WIRES)]


def cnot_binperms() -> List[BinPerm]:
    return [restricted_perm(gate_perm(g)) for g in cnot_gates()]


def affine_generators() -> List[BinPerm]:
    """Single-wire NOTs and the 6 CNOTs: generators of the affine group (order 1344)"""
    return single_wire_not_layers() + cnot_binperms()


def is_universal(g: BinPerm) -> bool:
    """True when NOT, CNOT and g together generate all of S8"""
    return len(closure_ranks(affine_generators() + [g])) == S8_ORDER


_NAMED = {
    'identity': (0, 1, 2, 3, 4, 5, 6, 7),
    # (A, B, C) -> (A, B, C xor AB)
    'toffoli': (0, 1, 2, 3, 4, 5, 7, 6),
    # (A, B, C) -> (A, A xor B, C xor AB)
    'peres': (0, 1, 2, 3, 6, 7, 5, 4),
}


def named_perm(name: str) -> BinPerm:
    key = name.strip().lower()
    if key not in _NAMED:
        raise InputError(f"unknown permutation name '{name}' (known: {', '.join(sorted(_NAMED))})")
    return BinPerm(_NAMED[key])
