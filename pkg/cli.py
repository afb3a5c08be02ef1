#!/usr/bin/env python3
"""
hyperspec command line: spectra, theorem checks, bounds, transformations,
generators and fuzzing for complex unit hypergraphs.

Exit codes: 0 success, 1 usage or input error, 2 a check failed.
"""
import logging
import sys
from typing import List, Optional, Sequence

import click
import numpy as np

import config
from analysis import bound_report, run_full_suite
from eigen import operator_spectrum
from hypergraph import (
    dual, fuzz_corpus, gen_random, underlying, weak_delete_edges, weak_delete_vertices, switch,
)
from hypergraph_io import (
    bound_report_to_dict, read_hypergraph, read_switching, serialize, spectrum_to_dict,
    suite_to_dict, to_json, write_hypergraph,
)
from operators import OPERATOR_KINDS
from utils import BadParameter, configure_logging, handle_cli_errors

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CHECK_FAILED = 2

TRANSFORM_OPS = ('dual', 'underlying', 'delete-vertices', 'delete-edges', 'vswitch', 'eswitch')


def _human(value: float, tau: float = 0.0) -> str:
    """12 significant digits; values the nullity policy treats as zero print as 0"""
    if abs(value) <= tau:
        value = 0.0
    return format(value + 0.0, f".{config.HUMAN_DIGITS}g")


def _human_complex(z: complex) -> str:
    re = format(z.real + 0.0, f".{config.HUMAN_DIGITS}g")
    im = format(z.imag + 0.0, f"+.{config.HUMAN_DIGITS}g")
    return f"{re}{im}i"


def _index_list(raw: Optional[str], prefix: str) -> List[int]:
    """'v0,v1' or '0,1' -> [0, 1]; empty string -> []"""
    if raw is None:
        raise BadParameter(f"missing index list (e.g. {prefix}0,{prefix}1)")
    indices = []
    for token in raw.split(','):
        token = token.strip()
        if not token:
            continue
        digits = token[1:] if token[:1] == prefix else token
        if not digits.isdigit():
            raise BadParameter(f"bad index {token!r}; expected {prefix}<k> or <k>")
        indices.append(int(digits))
    return indices


def _write_or_echo(G, output: Optional[str]):
    if output:
        write_hypergraph(G, output)
    else:
        click.echo(serialize(G))


@click.group(context_settings={'help_option_names': ['-h', '--help']})
@click.option('--log-level', default=None, help='Override LOG_LEVEL (DEBUG, INFO, WARNING, ...)')
@click.option('--structured-logs/--plain-logs', default=None, help='JSON log records on stderr')
def cli(log_level, structured_logs):
    """Spectra and theorem checks for complex unit hypergraphs."""
    configure_logging(log_level, structured_logs)


@cli.command()
@click.argument('file', type=click.Path(dir_okay=False))
@click.option('--operator', 'operator_kind', required=True, type=click.Choice(OPERATOR_KINDS))
@click.option('--vectors', is_flag=True, help='Also print unit eigenvectors')
@click.option('--json', 'as_json', is_flag=True)
@handle_cli_errors
def spectrum(file, operator_kind, vectors, as_json):
    """Ascending eigenvalues of one operator."""
    G = read_hypergraph(file)
    result = operator_spectrum(G, operator_kind, vectors)
    if as_json:
        click.echo(to_json(spectrum_to_dict(result, operator_kind)))
        return EXIT_OK

    values = result.values
    tau = config.get_nullity_policy().threshold(float(np.max(np.abs(values)))) if values.size else 0.0
    click.echo(' '.join(_human(v, tau) for v in values))
    if vectors:
        for i, value in enumerate(values):
            components = ' '.join(_human_complex(z) for z in result.vectors[:, i])
            click.echo(f"{_human(value, tau)}: {components}")
    return EXIT_OK


@cli.command()
@click.argument('file', type=click.Path(dir_okay=False))
@click.option('--seed', type=click.IntRange(min=0), default=None, help='Sample seed (default SUITE_SEED)')
@click.option('--workers', type=click.IntRange(min=1), default=None)
@click.option('--json', 'as_json', is_flag=True)
@handle_cli_errors
def check(file, seed, workers, as_json):
    """Run every theorem check; exit 2 if any fails."""
    G = read_hypergraph(file)
    result = run_full_suite(G, seed=seed, workers=workers)
    if as_json:
        click.echo(to_json(suite_to_dict(result)))
    else:
        for report in result.reports:
            label = {'pass': 'PASS', 'fail': 'FAIL', 'skipped': 'SKIP'}[report.verdict]
            line = f"{label} {report.check_name}"
            if report.reason:
                line += f": {report.reason}"
            click.echo(line)
        click.echo(result.summary_line())
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


@cli.command()
@click.argument('file', type=click.Path(dir_okay=False))
@click.option('--json', 'as_json', is_flag=True)
@handle_cli_errors
def bounds(file, as_json):
    """Spectral-radius and largest-eigenvalue bounds."""
    G = read_hypergraph(file)
    report = bound_report(G)
    if as_json:
        click.echo(to_json(bound_report_to_dict(report)))
        return EXIT_OK

    rows = [
        ('Delta', report.delta), ('nabla', report.nabla),
        ('rho(A)', report.rho_A), ('Delta(nabla-1)', report.bound_rho_A),
        ('gershgorin(A)', report.gershgorin_A),
        ('lambda_n(K)', report.lambda_max_K), ("lambda_n(K(G'))", report.lambda_max_K_underlying),
        ('nabla*Delta', report.bound_K),
        ('lambda_n(L)', report.lambda_max_L), ("lambda_n(L(G'))", report.lambda_max_L_underlying),
        ('max(Delta,nabla)', report.bound_max_degree_size),
        ('alpha', report.alpha),
    ]
    for name, value in rows:
        shown = '-' if value is None else _human(float(value))
        click.echo(f"{name}: {shown}")
    click.echo(f"regular: {str(report.is_regular).lower()}, uniform: {str(report.is_uniform).lower()}, "
               f"connected: {str(report.is_connected).lower()}")
    for key, verdict in report.verdicts.items():
        click.echo(f"{key}: {verdict}")
    for note in report.notes:
        click.echo(f"note: {note}")
    return EXIT_OK


@cli.command()
@click.argument('file', type=click.Path(dir_okay=False))
@click.argument('op_arg', required=False)
@click.option('--op', required=True, type=click.Choice(TRANSFORM_OPS))
@click.option('-o', '--output', type=click.Path(dir_okay=False), default=None, help='Output file (default stdout)')
@handle_cli_errors
def transform(file, op_arg, op, output):
    """Write a transformed hypergraph.

    OP_ARG is the index list for delete-vertices (v0,v1) and delete-edges
    (e0,e2), or the switching-function file for vswitch and eswitch.
    """
    G = read_hypergraph(file)
    if op == 'dual':
        result = dual(G)
    elif op == 'underlying':
        result = underlying(G)
    elif op == 'delete-vertices':
        result, index_map = weak_delete_vertices(G, _index_list(op_arg, 'v'))
        logger.info(f"vertex index map (old -> new): {index_map}")
    elif op == 'delete-edges':
        result = weak_delete_edges(G, _index_list(op_arg, 'e'))
    else:
        if op_arg is None:
            raise BadParameter(f"{op} needs a switching-function file")
        f = read_switching(op_arg)
        expected = 'vertex' if op == 'vswitch' else 'edge'
        if f.kind != expected:
            raise BadParameter(f"{op} needs a {expected} switching function, got kind {f.kind!r}")
        result = switch(G, f)
    _write_or_echo(result, output)
    return EXIT_OK


def _phase_mode(raw: str):
    if raw == 'continuous':
        return 'continuous', 1
    if raw.startswith('roots:') and raw[len('roots:'):].isdigit():
        return 'roots', int(raw[len('roots:'):])
    raise BadParameter(f"--phases must be 'continuous' or 'roots:K', got {raw!r}")


@cli.command()
@click.option('--n', 'n', type=int, required=True)
@click.option('--m', 'm', type=int, required=True)
@click.option('--p', 'p', type=float, required=True, help='Incidence probability in (0, 1]')
@click.option('--phases', default='continuous', show_default=True, help="'continuous' or 'roots:K'")
@click.option('--seed', type=int, default=None)
@click.option('-o', '--output', type=click.Path(dir_okay=False), default=None)
@handle_cli_errors
def gen(n, m, p, phases, seed, output):
    """Generate a random hypergraph."""
    mode, k = _phase_mode(phases)
    _write_or_echo(gen_random(n, m, p, phase_mode=mode, k=k, seed=seed), output)
    return EXIT_OK


@cli.command()
@click.option('--count', type=click.IntRange(min=0), default=40, show_default=True)
@click.option('--seed', type=click.IntRange(min=0), default=0, show_default=True)
@click.option('--n-max', type=click.IntRange(min=1), default=10, show_default=True)
@click.option('--m-max', type=click.IntRange(min=1), default=10, show_default=True)
@click.option('--json', 'as_json', is_flag=True)
@handle_cli_errors
def fuzz(count, seed, n_max, m_max, as_json):
    """Run the full suite on a seeded random corpus; exit 2 on any failure."""
    totals = {'passed': 0, 'failed': 0, 'skipped': 0}
    failing = []
    for i, G in enumerate(fuzz_corpus(count, seed, n_max, m_max)):
        result = run_full_suite(G, seed=seed)
        totals['passed'] += result.passed
        totals['failed'] += result.failed
        totals['skipped'] += result.skipped
        if not result.ok:
            logger.warning(f"instance {i} ({result.inputs_digest}): {result.summary_line()}")
            failing.append({'instance': i, 'document': serialize(G), **suite_to_dict(result)})

    if as_json:
        click.echo(to_json({
            'schema_version': config.SCHEMA_VERSION,
            'count': count,
            'seed': seed,
            'summary': totals,
            'failing': failing,
        }))
    else:
        click.echo(f"fuzz: {count} instances, {len(failing)} with failures")
        click.echo(f"checks: {totals['passed']} passed, {totals['failed']} failed, {totals['skipped']} skipped")
    return EXIT_CHECK_FAILED if failing else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point returning the exit code instead of calling sys.exit"""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name='hyperspec',
                      standalone_mode=False)
    except click.exceptions.Abort:
        click.echo('error: aborted', err=True)
        return EXIT_INPUT
    except click.ClickException as e:
        e.show()
        return EXIT_INPUT
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
