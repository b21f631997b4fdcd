"""
Value tables, truth-table entries and the partial-permutation algebra
"""

import numpy as np
import pytest

from qsynth.errors import InputError
from qsynth.services.mvl import (
    BANNED,
    BINARY_ENTRIES,
    NUM_ENTRIES,
    Entry,
    PartialPerm,
    QValue,
    ValueOp,
    entry_from_index,
    entry_index,
    measurement_distribution,
    pattern_of,
    pp_apply,
    pp_compose,
    pp_identity,
    pp_identity_on,
    pp_inverse,
    unitary_value_oracle,
    value_map,
)

B0, B1, V0, V1 = QValue.B0, QValue.B1, QValue.V0, QValue.V1


def random_partial_perm(rng, density=0.7):
    """Random partial injection: a shuffled image set on a random domain"""
    images = list(range(NUM_ENTRIES))
    rng.shuffle(images)
    return PartialPerm(tuple(y if rng.random() < density else BANNED for y in images))


def random_total_perm(rng):
    images = list(range(NUM_ENTRIES))
    rng.shuffle(images)
    return PartialPerm(tuple(images))


def test_value_map_examples():
    """Test 1: NOT, V and V-dagger on single values"""
    assert value_map(ValueOp.NOT, B0) == B1
    assert value_map(ValueOp.V, V0) == B1
    assert value_map(ValueOp.VDAG, B0) == V1
    for v in QValue:
        assert value_map(ValueOp.V, value_map(ValueOp.VDAG, v)) == v
        assert value_map(ValueOp.VDAG, value_map(ValueOp.V, v)) == v
        assert value_map(ValueOp.NOT, value_map(ValueOp.NOT, v)) == v


def test_v_squared_is_not():
    """Test 2: applying V twice matches NOT on every value"""
    for v in QValue:
        assert value_map(ValueOp.V, value_map(ValueOp.V, v)) == value_map(ValueOp.NOT, v)


def test_value_codes():
    """Test 3: four values, codes 0..3, binary iff code <= 1"""
    assert [int(v) for v in QValue] == [0, 1, 2, 3]
    assert [v.is_binary for v in QValue] == [True, True, False, False]
    assert all(QValue(int(v)) is v for v in QValue)


def test_unitary_oracle_passes():
    """Test 4: the tables agree with 2x2 matrix arithmetic on all 12 pairs"""
    report = unitary_value_oracle()
    assert report.checked == 12
    assert report.ok
    assert report.mismatches == ()


def test_unitary_oracle_negative_control():
    """Test 5: the identity matrix in place of X is caught"""
    report = unitary_value_oracle({ValueOp.NOT: np.eye(2)})
    assert not report.ok
    assert (ValueOp.NOT, B0) in report.mismatches
    assert all(op is ValueOp.NOT for op, _ in report.mismatches)


def test_entry_index_examples():
    """Test 6: base-4 entry indices, wire 0 most significant"""
    assert entry_index((B0, B0, B0)) == 0
    assert entry_index((B0, B1, V0)) == 6
    assert entry_index((V1, V1, V1)) == 63
    for i in range(NUM_ENTRIES):
        assert entry_index(entry_from_index(i)) == i


def test_entry_index_out_of_range():
    """Test 7: indices outside 0..63 are rejected"""
    with pytest.raises(InputError):
        entry_from_index(64)
    with pytest.raises(InputError):
        entry_from_index(-1)


def test_binary_entries():
    """Test 8: exactly 8 binary entries, listed in pattern order"""
    binary = [i for i in range(NUM_ENTRIES) if entry_from_index(i).is_binary]
    assert sorted(BINARY_ENTRIES) == binary
    assert [pattern_of(x) for x in BINARY_ENTRIES] == list(range(8))
    assert pattern_of(entry_index((B1, V0, B0))) is None
    assert str(Entry(B1, B0, V0)) == '(1,0,V0)'


def test_measurement_distribution():
    """Test 9: V-valued wires read 0 or 1 with probability 1/2"""
    assert measurement_distribution(entry_index((B1, B0, B1))) == {5: 1.0}
    assert measurement_distribution(entry_index((B1, B0, V0))) == {4: 0.5, 5: 0.5}
    dist = measurement_distribution(entry_index((V0, V1, V0)))
    assert sorted(dist) == list(range(8))
    assert sum(dist.values()) == pytest.approx(1.0)


def test_compose_examples():
    """Test 10: composition applies the left argument first"""
    f = PartialPerm.from_mapping({0: 5})
    g = PartialPerm.from_mapping({5: 0})
    h = PartialPerm.from_mapping({1: 2})
    assert pp_compose(f, g) == PartialPerm.from_mapping({0: 0})
    assert pp_compose(f, h).size == 0
    assert pp_apply(f, 0) == 5
    assert pp_apply(f, 1) is None


def test_partial_perm_rejects_non_injective():
    """Test 11: two entries with one image is not a partial permutation"""
    with pytest.raises(InputError):
        PartialPerm.from_mapping({0: 3, 1: 3})
    with pytest.raises(InputError):
        PartialPerm((0,) * 10)


def test_monoid_laws(rng):
    """Test 12: identity, associativity and the inverse law on 1000 random triples"""
    for _ in range(1000):
        f, g, h = (random_partial_perm(rng) for _ in range(3))
        assert pp_compose(pp_identity(), f) == f
        assert pp_compose(f, pp_identity()) == f
        assert pp_compose(pp_compose(f, g), h) == pp_compose(f, pp_compose(g, h))
        assert pp_compose(f, pp_inverse(f)) == pp_identity_on(f.domain)
        assert pp_inverse(pp_inverse(f)) == f


def test_composite_domain(rng):
    """Test 13: the composite is defined exactly where f lands in dom(g)"""
    for _ in range(200):
        f, g = random_partial_perm(rng), random_partial_perm(rng)
        fg = pp_compose(f, g)
        for x in range(NUM_ENTRIES):
            y = f(x)
            expected = None if y is None else g(y)
            assert fg(x) == expected


def test_total_perms_form_a_group(rng):
    """Test 14: total permutations compose to total ones and have two-sided inverses"""
    for _ in range(200):
        f, g = random_total_perm(rng), random_total_perm(rng)
        assert pp_compose(f, g).is_total
        assert pp_compose(f, pp_inverse(f)) == pp_identity()
        assert pp_compose(pp_inverse(f), f) == pp_identity()
        assert pp_inverse(pp_compose(f, g)) == pp_compose(pp_inverse(g), pp_inverse(f))


def test_banned_is_domain_complement(rng):
    """Test 15: banned set and domain partition the 64 entries"""
    f = random_partial_perm(rng)
    assert f.domain & f.banned == 0
    assert f.domain | f.banned == (1 << NUM_ENTRIES) - 1
    assert bin(f.domain).count('1') == f.size
