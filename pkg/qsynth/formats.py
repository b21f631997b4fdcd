"""
Text formats: circuit files, permutation lines and the cost database file

Circuit file:   one gate per line, NOT(t) CNOT(c,t) CV(c,t) CVDG(c,t), '#' comments
Permutation:    perm: p0 p1 p2 p3 p4 p5 p6 p7   (pattern = 4*v0 + 2*v1 + v2)
Database file:  qsynthdb v1 max_cost=K generators=cnot,cv,cvdg order=notfirst
                <rank> <cost> <gate> <gate> ...   sorted by rank
"""

import re
from pathlib import Path
from typing import List, Optional, Union

from qsynth.errors import DatabaseFormatError, InputError
from qsynth.extensions import logger
from qsynth.models import GENERATORS, RESIDUAL_ORDERS, CostDatabase, CostRecord
from qsynth.services.binperm import (
    NUM_PATTERNS,
    S8_ORDER,
    BinPerm,
    restricted_perm,
    unrank,
)
from qsynth.services.gates import Circuit, Gate, GateKind, circuit_perm

DB_VERSION = 1

_GATE_RE = re.compile(r'(NOT|CNOT|CVDG|CV)\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)$')
_HEADER_RE = re.compile(
    r'qsynthdb v(\d+) max_cost=(\d+) generators=(\S+) order=(\S+)$'
)


# ============================================================================
# CIRCUITS
# ============================================================================

def parse_gate(token: str, line: Optional[int] = None, column: Optional[int] = None) -> Gate:
    """Parse one gate token such as CNOT(0,2)"""
    m = _GATE_RE.match(token)
    if not m:
        raise InputError(f"unrecognised gate '{token}'", line, column)
    kind = GateKind(m.group(1))
    first, second = int(m.group(2)), m.group(3)
    try:
        if kind is GateKind.NOT:
            if second is not None:
                raise InputError("NOT takes a single wire")
            return Gate(kind, first)
        if second is None:
            raise InputError(f"{kind.value} takes a control and a target wire")
        return Gate(kind, int(second), first)
    except InputError as e:
        raise InputError(f"{e} in '{token}'", line, column) from None


def parse_circuit(text: str) -> Circuit:
    """
    Parse circuit text, gates applied top to bottom

    Raises:
        InputError: with line and column of the offending token
    """
    gates: List[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split('#', 1)[0]
        token = body.strip()
        if not token:
            continue
        column = len(body) - len(body.lstrip()) + 1
        gates.append(parse_gate(token, lineno, column))
    return Circuit(tuple(gates))


def format_circuit(circuit: Circuit) -> str:
    return ''.join(f"{g}\n" for g in circuit)


def read_circuit(path: Union[str, Path]) -> Circuit:
    return parse_circuit(_read_text(path))


# ============================================================================
# PERMUTATIONS
# ============================================================================

def parse_perm(text: str) -> BinPerm:
    """Parse 'perm: p0 ... p7'"""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith('#')]
    if len(lines) != 1:
        raise InputError(f"expected a single 'perm:' line, got {len(lines)} lines")
    line = lines[0].strip()
    if not line.startswith('perm:'):
        raise InputError("permutation must start with 'perm:'", 1, 1)

    values = []
    for word in line[len('perm:'):].split():
        try:
            values.append(int(word))
        except ValueError:
            raise InputError(f"'{word}' is not an integer") from None
    if len(values) != NUM_PATTERNS:
        raise InputError(f"expected {NUM_PATTERNS} images, got {len(values)}")
    seen = set()
    for v in values:
        if not 0 <= v < NUM_PATTERNS:
            raise InputError(f"image {v} out of range 0..{NUM_PATTERNS - 1}")
        if v in seen:
            raise InputError(f"duplicate image {v}")
        seen.add(v)
    return BinPerm(tuple(values))


def format_perm(g: BinPerm) -> str:
    return 'perm: ' + ' '.join(str(x) for x in g.images)


def read_perm(path: Union[str, Path]) -> BinPerm:
    return parse_perm(_read_text(path))


# ============================================================================
# COST DATABASE
# ============================================================================

def format_db(db: CostDatabase) -> str:
    if db.free_nots:
        raise InputError("only NOT-free databases can be saved")
    lines = [f"qsynthdb v{DB_VERSION} max_cost={db.max_cost} generators={db.generators} order={db.order}"]
    for r in db.records:
        lines.append(' '.join([str(r.rank), str(r.cost)] + [str(g) for g in r.witness]))
    return '\n'.join(lines) + '\n'


def save_db(db: CostDatabase, path: Union[str, Path]):
    Path(path).write_text(format_db(db), encoding='utf-8')
    logger.info(f"saved {len(db)} records to {path}")


def parse_db(text: str) -> CostDatabase:
    """
    Parse and re-verify a database file

    Every witness must be NOT-free, have as many gates as its cost and
    restrict to the permutation of its rank.

    Raises:
        DatabaseFormatError: naming the first bad record
    """
    lines = text.splitlines()
    if not lines:
        raise DatabaseFormatError("empty database file", line=1)
    m = _HEADER_RE.match(lines[0].strip())
    if not m:
        raise DatabaseFormatError("bad header", line=1)
    version, max_cost, generators, order = int(m.group(1)), int(m.group(2)), m.group(3), m.group(4)
    if version != DB_VERSION:
        raise DatabaseFormatError(f"unsupported version v{version} (expected v{DB_VERSION})", line=1)
    if generators != GENERATORS:
        raise DatabaseFormatError(f"unsupported generators '{generators}' (expected {GENERATORS})", line=1)
    if order not in RESIDUAL_ORDERS:
        raise DatabaseFormatError(f"unknown order '{order}'", line=1)

    records: List[CostRecord] = []
    previous = -1
    for number, raw in enumerate(lines[1:], start=1):
        lineno = number + 1
        fields = raw.split()
        if len(fields) < 2:
            raise DatabaseFormatError("expected '<rank> <cost> <gates...>'", number, lineno)
        try:
            rank, cost = int(fields[0]), int(fields[1])
        except ValueError:
            raise DatabaseFormatError("rank and cost must be integers", number, lineno) from None
        if not 0 <= rank < S8_ORDER:
            raise DatabaseFormatError(f"rank {rank} out of range", number, lineno)
        if rank <= previous:
            raise DatabaseFormatError(f"rank {rank} out of order", number, lineno)
        previous = rank
        try:
            witness = Circuit(tuple(parse_gate(tok, lineno) for tok in fields[2:]))
        except InputError as e:
            raise DatabaseFormatError(str(e), number) from None
        if not witness.is_not_free:
            raise DatabaseFormatError("witness contains NOT gates", number, lineno)
        if len(witness) != cost or cost > max_cost:
            raise DatabaseFormatError(f"cost {cost} does not match witness of {len(witness)} gates "
                                      f"(max_cost={max_cost})", number, lineno)
        if restricted_perm(circuit_perm(witness)) != unrank(rank):
            raise DatabaseFormatError(f"witness does not realize rank {rank}", number, lineno)
        records.append(CostRecord(rank, cost, witness))

    complete = len(records) == S8_ORDER // 8
    return CostDatabase(tuple(records), max_cost, generators=generators, order=order, complete=complete)


def load_db(path: Union[str, Path]) -> CostDatabase:
    db = parse_db(_read_text(path))
    logger.info(f"loaded {len(db)} records from {path}")
    return db


def _read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
