"""
Circuit files, permutation lines and the cost database file
"""

import pytest

from qsynth.errors import DatabaseFormatError, InputError
from qsynth.formats import (
    format_circuit,
    format_db,
    format_perm,
    load_db,
    parse_circuit,
    parse_db,
    parse_perm,
    read_circuit,
    save_db,
)
from qsynth.models import CostDatabase
from qsynth.services.binperm import BinPerm, bp_identity, named_perm
from qsynth.services.cache import build_database
from qsynth.services.gates import CNOT, CV, CVDG, NOT, Circuit, gate_catalog

PERES_TEXT = "CV(1,2)\nCNOT(0,1)\nCVDG(1,2)\nCV(0,2)\n"


@pytest.fixture(scope='module')
def db3(app):
    db, _ = build_database(3)
    return db


def test_parse_circuit_examples():
    """Test 1: single gates, the Peres cascade, comments and blank lines"""
    assert parse_circuit("CNOT(0,2)") == Circuit.of(CNOT(0, 2))
    peres = parse_circuit(PERES_TEXT)
    assert peres == Circuit.of(CV(1, 2), CNOT(0, 1), CVDG(1, 2), CV(0, 2))
    assert peres.cost == 4
    text = "# Peres\n\nCV(1, 2)   # first\n  NOT(0)\n"
    assert parse_circuit(text) == Circuit.of(CV(1, 2), NOT(0))


def test_parse_circuit_errors():
    """Test 2: control equal to target, unknown tokens and bad wires carry line and column"""
    with pytest.raises(InputError) as info:
        parse_circuit("CNOT(2,2)")
    assert info.value.line == 1

    with pytest.raises(InputError) as info:
        parse_circuit("CNOT(0,1)\n  TOFFOLI(0,1,2)")
    assert (info.value.line, info.value.column) == (2, 3)
    assert 'line 2, column 3' in str(info.value)

    for bad in ("CV(0,5)", "NOT(0,1)", "CNOT(1)", "CNOT(0,1) CV(1,2)"):
        with pytest.raises(InputError):
            parse_circuit(bad)


def test_circuit_roundtrip(rng):
    """Test 3: format then parse gives the circuit back"""
    catalog = gate_catalog()
    for _ in range(50):
        c = Circuit(tuple(rng.choice(catalog) for _ in range(rng.randint(0, 8))))
        assert parse_circuit(format_circuit(c)) == c
    assert format_circuit(parse_circuit(PERES_TEXT)) == PERES_TEXT


def test_read_circuit_missing_file(tmp_path):
    """Test 4: an unreadable path is an input error"""
    with pytest.raises(InputError):
        read_circuit(tmp_path / 'missing.txt')


def test_parse_perm_examples():
    """Test 5: Toffoli, identity, duplicate and out-of-range images"""
    assert parse_perm("perm: 0 1 2 3 4 5 7 6") == named_perm('toffoli')
    assert parse_perm("perm: 0 1 2 3 4 5 6 7\n") == bp_identity()
    for bad in ("perm: 0 0 2 3 4 5 6 7", "perm: 0 1 2 3 4 5 6 8", "perm: 0 1 2",
                "perm: 0 1 2 3 4 5 6 x", "0 1 2 3 4 5 6 7"):
        with pytest.raises(InputError):
            parse_perm(bad)


def test_perm_roundtrip(rng):
    """Test 6: format then parse gives the permutation back"""
    for _ in range(50):
        images = list(range(8))
        rng.shuffle(images)
        g = BinPerm(tuple(images))
        assert parse_perm(format_perm(g)) == g
    assert format_perm(named_perm('peres')) == 'perm: 0 1 2 3 6 7 5 4'


def test_db_roundtrip(db3, tmp_path):
    """Test 7: save then load gives an equal database of 82 records"""
    path = tmp_path / 'g3.qdb'
    save_db(db3, path)
    loaded = load_db(path)
    assert loaded == db3
    assert len(loaded) == 82
    assert format_db(loaded) == path.read_text(encoding='utf-8')


def test_db_header(db3):
    """Test 8: header line and rank-sorted records"""
    lines = format_db(db3).splitlines()
    assert lines[0] == 'qsynthdb v1 max_cost=3 generators=cnot,cv,cvdg order=notfirst'
    assert lines[1] == '0 0'
    ranks = [int(line.split()[0]) for line in lines[1:]]
    assert ranks == sorted(ranks)


def _tamper(text, record, field, value):
    lines = text.splitlines()
    fields = lines[record].split()
    fields[field] = value
    lines[record] = ' '.join(fields)
    return '\n'.join(lines) + '\n'


def test_db_tampered_cost(db3):
    """Test 9: a changed cost field fails at its record"""
    text = format_db(db3)
    cost = int(text.splitlines()[5].split()[1])
    with pytest.raises(DatabaseFormatError) as info:
        parse_db(_tamper(text, 5, 1, str(cost + 1)))
    assert info.value.record == 5


def test_db_tampered_witness(db3):
    """Test 10: a witness that realizes another function fails at its record"""
    text = format_db(db3)
    lines = text.splitlines()
    gate = lines[3].split()[2]
    replacement = 'CNOT(0,1)' if gate != 'CNOT(0,1)' else 'CNOT(0,2)'
    with pytest.raises(DatabaseFormatError) as info:
        parse_db(_tamper(text, 3, 2, replacement))
    assert info.value.record == 3


def test_db_version_and_generators(db3):
    """Test 11: unknown version or generator set is rejected"""
    text = format_db(db3)
    with pytest.raises(DatabaseFormatError):
        parse_db(text.replace('qsynthdb v1', 'qsynthdb v2', 1))
    with pytest.raises(DatabaseFormatError):
        parse_db(text.replace('generators=cnot,cv,cvdg', 'generators=cnot', 1))
    with pytest.raises(DatabaseFormatError):
        parse_db('')


def test_db_rejects_not_gates():
    """Test 12: witnesses must be NOT-free"""
    text = "qsynthdb v1 max_cost=1 generators=cnot,cv,cvdg order=notfirst\n0 0\n"
    assert len(parse_db(text)) == 1
    with pytest.raises(DatabaseFormatError):
        parse_db(text + "1 1 NOT(0)\n")


def test_free_nots_database_not_saved(app):
    """Test 13: only NOT-free databases have a file format"""
    free = CostDatabase((), 0, generators='cnot,cv,cvdg,not')
    with pytest.raises(InputError):
        format_db(free)
