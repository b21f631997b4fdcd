"""
Analyses over a cost database
Coset-decomposition checks and the split of the cost-4 layer
"""

from itertools import product
from typing import Dict, List, Optional, Set, Tuple

from qsynth.errors import InputError
from qsynth.extensions import logger
from qsynth.models import CostDatabase, G4Report, Theorem2Report
from qsynth.services.binperm import (
    S8_ORDER,
    BinPerm,
    bp_compose,
    bp_identity,
    cnot_binperms,
    is_universal,
    not_layers,
    restricted_perm,
    unrank,
)
from qsynth.services.expressing import residuals
from qsynth.services.gates import (
    WIRE_PERMUTATIONS,
    GateKind,
    circuit_perm,
    conjugate_by_wire_perm,
)

NOT_FREE_FUNCTIONS = S8_ORDER // 8  # 5040


def verify_theorem2(db: CostDatabase, order: Optional[str] = None) -> Theorem2Report:
    """
    Check that the NOT-layer images of the G[k] partition what they cover

    Every a*g (a in N, g in G[k]) must be produced exactly once over all k
    and all masks; a complete database must reach 5040 NOT-free functions
    and all 40320 permutations.
    """
    order = order or db.order
    owner: Dict[BinPerm, Tuple[int, int]] = {}
    violations: List[str] = []
    s8_sizes = []

    for k in range(db.max_cost + 1):
        size = 0
        for g in db.layer_perms(k):
            for a in not_layers():
                x = bp_compose(g, a.as_binperm()) if order == 'notlast' else bp_compose(a.as_binperm(), g)
                if x in owner:
                    prev_k, prev_mask = owner[x]
                    violations.append(f"{x} produced by mask {prev_mask} at cost {prev_k} "
                                      f"and by mask {a.mask} at cost {k}")
                    continue
                owner[x] = (k, a.mask)
                size += 1
        s8_sizes.append(size)

    g_total = len(db)
    if db.complete:
        if g_total != NOT_FREE_FUNCTIONS:
            violations.append(f"complete database holds {g_total} functions, expected {NOT_FREE_FUNCTIONS}")
        if len(owner) != S8_ORDER:
            violations.append(f"cosets cover {len(owner)} permutations, expected {S8_ORDER}")

    report = Theorem2Report(
        max_cost=db.max_cost,
        distinct_elements=len(owner),
        layer_sizes=tuple(db.layer_sizes()),
        s8_sizes=tuple(s8_sizes),
        violations=tuple(violations),
        complete=db.complete,
        g_total=g_total,
    )
    logger.info(f"coset check: {len(owner)} elements, {len(violations)} violations")
    return report


def residuals_in_database(db: CostDatabase, g: BinPerm, order: Optional[str] = None) -> int:
    """How many of the 8 residuals of g are NOT-free functions in the database"""
    return sum(1 for h in residuals(g, order or db.order) if h in db)


def cnot_only_ranks(length: int) -> Set[int]:
    """Ranks of functions computed by some word of exactly `length` CNOTs"""
    cnots = cnot_binperms()
    ranks = set()
    for word in product(cnots, repeat=length):
        p = bp_identity()
        for c in word:
            p = bp_compose(p, c)
        ranks.add(p.rank)
    return ranks


def classify_g4(db: CostDatabase) -> G4Report:
    """
    Split G[4] into members with a 4-CNOT implementation and the rest

    The rest are tested for universality and grouped into orbits under
    the 6 wire relabellings (via their relabelled witnesses).
    """
    if not db.covers(4):
        raise InputError(f"classify_g4 needs a database built to cost 4 (max_cost={db.max_cost})")

    feynman = cnot_only_ranks(4)
    g4 = db.layer(4)
    feynman_ranks = tuple(r for r in g4 if r in feynman)
    other_ranks = tuple(r for r in g4 if r not in feynman)

    universal = {r: is_universal(unrank(r)) for r in other_ranks}

    compositions = {}
    orbits = set()
    for r in other_ranks:
        witness = db.get(unrank(r)).witness
        cnots = sum(1 for g in witness if g.kind is GateKind.CNOT)
        compositions[r] = (cnots, len(witness) - cnots)
        orbit = {restricted_perm(circuit_perm(conjugate_by_wire_perm(witness, sigma))).rank
                 for sigma in WIRE_PERMUTATIONS}
        orbits.add(tuple(sorted(orbit)))

    report = G4Report(
        feynman_ranks=feynman_ranks,
        other_ranks=other_ranks,
        universal=universal,
        orbits=tuple(sorted(orbits)),
        compositions=compositions,
    )
    logger.info(f"G[4]: {len(feynman_ranks)} CNOT-only, {len(other_ranks)} other, {len(report.orbits)} orbits")
    return report
