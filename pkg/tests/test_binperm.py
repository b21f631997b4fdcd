"""
Binary permutations: restriction, NOT layers, ranking, closure, universality
"""

import numpy as np
import pytest

from qsynth.errors import InputError
from qsynth.services.binperm import (
    S8_ORDER,
    BinPerm,
    NotLayer,
    affine_generators,
    bp_compose,
    bp_identity,
    bp_inverse,
    closure_ranks,
    cnot_binperms,
    conjugate_binperm,
    generate_closure,
    is_universal,
    named_perm,
    not_layers,
    rank,
    rank_array,
    restricted_map,
    restricted_perm,
    single_wire_not_layers,
    unrank,
)
from qsynth.services.gates import CNOT, CV, NOT, Circuit, circuit_perm, gate_perm
from qsynth.services.mvl import pp_identity

TOFFOLI = BinPerm((0, 1, 2, 3, 4, 5, 7, 6))
PERES = BinPerm((0, 1, 2, 3, 6, 7, 5, 4))
CNOT_02 = BinPerm((0, 1, 2, 3, 5, 4, 7, 6))


def random_binperm(rng):
    images = list(range(8))
    rng.shuffle(images)
    return BinPerm(tuple(images))


def test_binperm_validation():
    """Test 1: images must be a permutation of 0..7"""
    with pytest.raises(InputError):
        BinPerm((0, 0, 2, 3, 4, 5, 6, 7))
    with pytest.raises(InputError):
        BinPerm((0, 1, 2))


def test_not_layer_group_laws():
    """Test 2: a*a is the identity and a*b is the identity only for a = b, all 64 pairs"""
    identity = NotLayer(0)
    layers = not_layers()
    assert len(layers) == 8
    for a in layers:
        assert a * a == identity
        for b in layers:
            assert (a * b == identity) == (a == b)
            assert bp_compose(a.as_binperm(), b.as_binperm()) == (a * b).as_binperm()


def test_not_layer_matches_not_gates():
    """Test 3: a mask acts as x XOR mask, and its NOT gates restrict to the same permutation"""
    assert NotLayer.on_wires([0]).mask == 4
    assert NotLayer.on_wires([2]).mask == 1
    assert NotLayer(5).wires == [0, 2]
    for a in not_layers():
        assert restricted_perm(a.as_partial_perm()) == a.as_binperm()
        assert a.as_binperm().images == tuple(x ^ a.mask for x in range(8))
    assert restricted_perm(gate_perm(NOT(0))) == NotLayer(4).as_binperm()


def test_restricted_perm_examples():
    """Test 4: restriction of gates and cascades to the binary patterns"""
    assert restricted_perm(pp_identity()) == bp_identity()
    assert restricted_perm(gate_perm(CNOT(0, 2))) == CNOT_02
    assert restricted_perm(gate_perm(CV(0, 2))) is None
    assert restricted_perm(circuit_perm([CV(0, 2), CV(0, 2)])) == CNOT_02


def test_restricted_map_examples():
    """Test 5: the binary-input trajectory, absent when a binary input is banned"""
    images = restricted_map(gate_perm(CV(0, 2)))
    assert images is not None
    assert images[4] == 18
    assert restricted_map(pp_identity()) == (0, 1, 4, 5, 16, 17, 20, 21)
    assert restricted_map(circuit_perm([CV(0, 1), CV(1, 2)])) is None


def test_restriction_is_multiplicative(rng):
    """Test 6: restriction of a ++ b is the composition of the restrictions"""
    gates = [CNOT(c, t) for c in range(3) for t in range(3) if c != t] + [NOT(w) for w in range(3)]
    for _ in range(200):
        a = Circuit(tuple(rng.choice(gates) for _ in range(rng.randint(0, 5))))
        b = Circuit(tuple(rng.choice(gates) for _ in range(rng.randint(0, 5))))
        assert restricted_perm(circuit_perm(a + b)) == bp_compose(
            restricted_perm(circuit_perm(a)), restricted_perm(circuit_perm(b)))


def test_bp_group_laws(rng):
    """Test 7: identity, inverse and involution examples"""
    assert bp_compose(CNOT_02, CNOT_02) == bp_identity()
    for _ in range(100):
        g = random_binperm(rng)
        assert bp_compose(g, bp_inverse(g)) == bp_identity()
        assert bp_compose(bp_identity(), g) == g


def test_rank_examples(rng):
    """Test 8: Lehmer rank bounds and round trip on 1000 random permutations"""
    assert rank(bp_identity()) == 0
    assert rank(BinPerm((7, 6, 5, 4, 3, 2, 1, 0))) == S8_ORDER - 1
    for _ in range(1000):
        g = random_binperm(rng)
        assert unrank(rank(g)) == g
    with pytest.raises(InputError):
        unrank(S8_ORDER)


def test_rank_array_matches_rank(rng):
    """Test 9: the vectorised ranking agrees with the scalar one"""
    perms = [random_binperm(rng) for _ in range(50)]
    ranks = rank_array(np.array([g.images for g in perms]))
    assert ranks.tolist() == [g.rank for g in perms]


def test_closure_sizes():
    """Test 10: 1, 8, 1344 and 40320 for the four generator sets"""
    assert generate_closure([]) == {bp_identity()}
    assert len(closure_ranks(single_wire_not_layers())) == 8
    assert len(cnot_binperms()) == 6
    assert len(closure_ranks(affine_generators())) == 1344
    assert len(closure_ranks(affine_generators() + [TOFFOLI])) == S8_ORDER


def test_closure_contains_generators():
    """Test 11: every generator and product of two lies in the closure"""
    gens = affine_generators()
    members = generate_closure(gens)
    for a in gens:
        assert a in members
        for b in gens:
            assert bp_compose(a, b) in members


def test_is_universal():
    """Test 12: Toffoli and Peres are universal with NOT and CNOT, affine maps are not"""
    assert not is_universal(bp_identity())
    assert not is_universal(CNOT_02)
    assert is_universal(TOFFOLI)
    assert is_universal(PERES)


def test_named_perm():
    """Test 13: the named targets"""
    assert named_perm('toffoli') == TOFFOLI
    assert named_perm('peres') == PERES
    assert named_perm('identity') == bp_identity()
    with pytest.raises(InputError):
        named_perm('fredkin')


def test_conjugate_binperm_matches_circuit_relabel():
    """Test 14: relabelling the function agrees with relabelling a CNOT"""
    assert conjugate_binperm(restricted_perm(gate_perm(CNOT(0, 2))), (1, 0, 2)) == \
        restricted_perm(gate_perm(CNOT(1, 2)))
    assert conjugate_binperm(TOFFOLI, (0, 1, 2)) == TOFFOLI
