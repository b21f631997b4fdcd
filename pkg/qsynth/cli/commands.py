"""
CLI commands
Exit codes: 0 success, 1 bound exceeded / not found, 2 input error,
3 resource budget exceeded
"""

from functools import wraps
from typing import List, Optional

import click

from qsynth.cli import cli
from qsynth.errors import (
    BoundExceededError,
    BudgetExceededError,
    InputError,
    VerificationError,
)
from qsynth.formats import format_perm, load_db, parse_perm, read_circuit, read_perm, save_db
from qsynth.models import CostDatabase
from qsynth.services.analysis import classify_g4, verify_theorem2
from qsynth.services.binperm import (
    affine_generators,
    closure_ranks,
    named_perm,
    restricted_map,
    restricted_perm,
    unrank,
)
from qsynth.services.cache import build_database
from qsynth.services.expressing import enumerate_min_impls, expressing
from qsynth.services.gates import circuit_perm
from qsynth.services.mvl import (
    BINARY_ENTRIES,
    NUM_ENTRIES,
    entry_from_index,
    measurement_distribution,
)

EXIT_NOT_FOUND = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def handles_errors(f):
    """Map engine exceptions to exit codes, messages go to stderr"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return f(*args, **kwargs)
        except BudgetExceededError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_BUDGET)
        except (BoundExceededError, VerificationError) as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_NOT_FOUND)
        except InputError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(EXIT_INPUT)

    return decorated_function


def _settings():
    return click.get_current_context().find_root().obj.config


def _gates_text(circuit) -> str:
    return str(circuit) if len(circuit) else '(none)'


def _echo_table(sizes: List[int], extra: Optional[List[int]] = None):
    header = "Cost k\t|G[k]|\t|S8[k]|"
    if extra is not None:
        header += "\t|S8[k]| free NOT"
    click.echo(header)
    for k, size in enumerate(sizes):
        row = f"{k}\t{size}\t{8 * size}"
        if extra is not None:
            row += f"\t{extra[k] if k < len(extra) else '-'}"
        click.echo(row)


def _sizes(db: CostDatabase, max_cost: int) -> List[int]:
    """Layer sizes 0..max_cost, zero past the diameter of a complete database"""
    sizes = db.layer_sizes()
    return (sizes + [0] * (max_cost + 1))[:max_cost + 1]


def _target(name, perm_text, perm_file):
    given = [x for x in (name, perm_text, perm_file) if x]
    if len(given) != 1:
        raise InputError("give exactly one of --name, --perm, --perm-file")
    if name:
        return named_perm(name)
    if perm_text:
        text = perm_text.strip()
        return parse_perm(text if text.startswith('perm:') else f"perm: {text}")
    return read_perm(perm_file)


# ============================================================================
# COMMANDS
# ============================================================================

@cli.command()
@click.option('--max-cost', type=click.IntRange(min=0), required=True, help='Deepest cost layer.')
@click.option('--free-nots', is_flag=True, help='Add a column from a search with cost-0 NOT gates anywhere.')
@click.option('--db', 'db_path', type=click.Path(dir_okay=False), help='Read the table from a database file.')
@click.option('--threads', type=click.IntRange(min=1), help='Workers for layer expansion.')
@handles_errors
def table(max_cost, free_nots, db_path, threads):
    """Print |G[k]| and |S8[k]| for k = 0..max-cost."""
    if db_path:
        db = load_db(db_path)
        if not db.covers(max_cost):
            raise InputError(f"database only reaches cost {db.max_cost}")
    else:
        try:
            db, _ = build_database(max_cost, threads=threads)
        except BudgetExceededError as e:
            _echo_table(e.database.layer_sizes())
            raise

    extra = None
    if free_nots:
        try:
            free_db, _ = build_database(max_cost, True, threads=threads)
        except BudgetExceededError:
            _echo_table(_sizes(db, max_cost))
            raise
        extra = free_db.layer_sizes()
    _echo_table(_sizes(db, max_cost), extra)
    if db.diameter is not None:
        click.echo(f"complete: {len(db)} functions, diameter {db.diameter}")


@cli.command()
@click.option('--name', type=click.Choice(['toffoli', 'peres', 'identity']), help='Named target.')
@click.option('--perm', 'perm_text', help='Target images, e.g. "0 1 2 3 4 5 7 6".')
@click.option('--perm-file', type=click.Path(dir_okay=False), help='File holding a perm: line.')
@click.option('--bound', type=click.IntRange(min=0), help='Cost bound (default: config DFS_MAX_COST).')
@click.option('--all-at-min', is_flag=True, help='Also list every implementation at the minimum cost.')
@click.option('--db', 'db_path', type=click.Path(dir_okay=False), help='Cost database to look up.')
@handles_errors
def synth(name, perm_text, perm_file, bound, all_at_min, db_path):
    """Minimum-cost NOT layer and gate sequence for a 3-bit function.

    The printed NOT mask uses pattern bits: 4 flips wire 0, 2 flips wire 1,
    1 flips wire 2.
    """
    target = _target(name, perm_text, perm_file)
    bound = _settings()['DFS_MAX_COST'] if bound is None else bound
    db = load_db(db_path) if db_path else None

    s = expressing(target, bound, db)
    click.echo(f"target: {format_perm(target)}")
    click.echo(f"order: {s.order}")
    click.echo(f"not mask: {s.not_layer.mask}")
    click.echo(f"gates: {_gates_text(s.circuit)}")
    click.echo(f"cost: {s.cost}")

    if all_at_min:
        impls = enumerate_min_impls(target, s.cost)
        click.echo(f"implementations at cost {s.cost}: {len(impls)}")
        for impl in impls:
            click.echo(f"  mask={impl.not_layer.mask} {_gates_text(impl.circuit)}")


@cli.command('eval')
@click.option('--circuit', 'circuit_path', type=click.Path(dir_okay=False), required=True)
@click.option('--inputs', type=click.Choice(['binary', 'all']), default='binary', show_default=True)
@handles_errors
def evaluate(circuit_path, inputs):
    """Print the output entry of every input, banned inputs and the binary permutation."""
    circuit = read_circuit(circuit_path)
    p = circuit_perm(circuit)
    click.echo(f"circuit: {_gates_text(circuit)}")
    click.echo(f"cost: {circuit.cost}")

    entries = BINARY_ENTRIES if inputs == 'binary' else range(NUM_ENTRIES)
    banned = 0
    for x in entries:
        y = p(x)
        if y is None:
            banned += 1
            click.echo(f"{entry_from_index(x)} -> banned")
            continue
        out = entry_from_index(y)
        line = f"{entry_from_index(x)} -> {out}"
        if not out.is_binary:
            dist = measurement_distribution(y)
            line += "  measure: " + ' '.join(f"{k}:{v:g}" for k, v in dist.items())
        click.echo(line)
    click.echo(f"banned inputs: {banned}")

    g = restricted_perm(p)
    if g is not None:
        click.echo(f"binary permutation: {format_perm(g)}")
    elif restricted_map(p) is not None:
        click.echo("binary permutation: none (non-binary outputs)")
    else:
        click.echo("binary permutation: none (banned binary input)")


@cli.command()
@click.option('--circuit', 'circuit_path', type=click.Path(dir_okay=False))
@click.option('--perm', 'perm_text')
@handles_errors
def universal(circuit_path, perm_text):
    """Does the function, with NOT and CNOT, generate all 40320 permutations?"""
    if bool(circuit_path) == bool(perm_text):
        raise InputError("give exactly one of --circuit, --perm")
    if circuit_path:
        g = restricted_perm(circuit_perm(read_circuit(circuit_path)))
        if g is None:
            raise InputError("circuit is not binary-preserving")
    else:
        g = _target(None, perm_text, None)
    size = len(closure_ranks(affine_generators() + [g]))
    click.echo(f"target: {format_perm(g)}")
    click.echo(f"closure size: {size}")
    click.echo(f"universal: {'yes' if size == 40320 else 'no'}")


@cli.command('classify-g4')
@click.option('--db', 'db_path', type=click.Path(dir_okay=False), required=True)
@handles_errors
def classify_g4_command(db_path):
    """Split G[4] into CNOT-only members and the universal family."""
    db = load_db(db_path)
    report = classify_g4(db)
    click.echo(f"G[4] members: {len(report.feynman_ranks) + len(report.other_ranks)}")
    click.echo(f"CNOT-only: {len(report.feynman_ranks)}")
    universal_count = sum(1 for r in report.other_ranks if report.universal[r])
    click.echo(f"other: {len(report.other_ranks)} (universal: {universal_count})")
    click.echo(f"orbits: {len(report.orbits)}")
    for i, orbit in enumerate(report.orbits, start=1):
        rep = orbit[0]
        cnots, controlled = report.compositions[rep]
        click.echo(f"orbit {i}: size {len(orbit)} representative {format_perm(unrank(rep))} "
                   f"witness {db.get(unrank(rep)).witness} ({controlled} controlled-V, {cnots} CNOT)")


@cli.command()
@click.option('--theorem2', is_flag=True, required=True, help='Check the NOT-layer coset decomposition.')
@click.option('--db', 'db_path', type=click.Path(dir_okay=False), required=True)
@handles_errors
def verify(theorem2, db_path):
    """Verify the coset decomposition over a database."""
    if not theorem2:
        raise InputError("nothing to verify (use --theorem2)")
    report = verify_theorem2(load_db(db_path))
    click.echo(f"max cost: {report.max_cost}")
    click.echo(f"layer sizes: {' '.join(str(x) for x in report.layer_sizes)}")
    click.echo(f"S8 layer sizes: {' '.join(str(x) for x in report.s8_sizes)}")
    click.echo(f"distinct S8 elements: {report.distinct_elements}")
    click.echo(f"complete: {'yes' if report.complete else 'no'}")
    click.echo(f"violations: {len(report.violations)}")
    for v in report.violations:
        click.echo(f"  {v}")
    if not report.ok:
        click.get_current_context().exit(EXIT_NOT_FOUND)


@cli.group('db')
def db_group():
    """Cost database files."""


@db_group.command('build')
@click.option('--max-cost', type=click.IntRange(min=0), required=True)
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True)
@click.option('--threads', type=click.IntRange(min=1), help='Workers for layer expansion.')
@handles_errors
def db_build(max_cost, out_path, threads):
    """Build G[0..max-cost] and write it to a database file."""
    try:
        db, _ = build_database(max_cost, threads=threads)
    except BudgetExceededError as e:
        save_db(e.database, out_path)
        click.echo(f"wrote partial database ({len(e.database)} records, cost <= {e.last_layer}) to {out_path}")
        raise
    save_db(db, out_path)
    click.echo(f"wrote {len(db)} records (max cost {db.max_cost}) to {out_path}")
