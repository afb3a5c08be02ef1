"""
Hypergraph and switching-function documents, plus JSON views of spectra and reports.

Document format (schema_version 1):
    {"schema_version":1,"n":2,"edges":[[{"v":0,"omega":[1,0]},{"v":1,"omega":[0,1]}]]}

Phases are stored as [re, im] pairs with 17 significant digits, so
parse(serialize(G)) reproduces every phase bit for bit. Edges keep their
stored order (it is the column order of B); incidences within an edge are
written sorted by vertex.
"""
import json
import logging
from typing import Any, Dict, List, Optional

import numpy as np

import config
from analysis import BoundReport, CheckReport, SuiteResult
from eigen import Spectrum
from hypergraph import ComplexUnitHypergraph, PhaseValue, SwitchingFunction, build
from utils import (
    BadVertexIndex, DocumentSyntaxError, DuplicateIncidence, NonUnitPhase, SchemaError,
)

logger = logging.getLogger(__name__)

_DOCUMENT_KEYS = {'schema_version', 'n', 'edges'}
_INCIDENCE_KEYS = {'v', 'omega'}
_SWITCHING_KEYS = {'schema_version', 'kind', 'values'}


def _fmt(x: float) -> str:
    return format(x, '.17g')


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _load(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.msg, e.lineno, e.colno) from None
    if not isinstance(data, dict):
        raise SchemaError('$', 'document must be an object')
    return data


def _check_version(data: Dict[str, Any]):
    if 'schema_version' not in data:
        raise SchemaError('schema_version', 'missing')
    version = data['schema_version']
    if not _is_int(version):
        raise SchemaError('schema_version', 'must be an integer')
    if version != config.SCHEMA_VERSION:
        raise SchemaError('schema_version', f"unsupported version {version}")


def _check_keys(data: Dict[str, Any], allowed: set, path: str):
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SchemaError(f"{path}.{unknown[0]}" if path else unknown[0], 'unknown field')
    missing = sorted(allowed - set(data))
    if missing:
        raise SchemaError(f"{path}.{missing[0]}" if path else missing[0], 'missing')


def _phase_pair(value: Any, path: str):
    if not isinstance(value, list) or len(value) != 2 or not all(_is_number(x) for x in value):
        raise SchemaError(path, 'must be a [re, im] pair of numbers')
    return float(value[0]), float(value[1])


def parse(text: str) -> ComplexUnitHypergraph:
    """
    Parse a hypergraph document.

    Raises:
        DocumentSyntaxError: unparseable text (1-based line and column)
        SchemaError: structurally wrong document (field path such as edges[0][1].omega)
        NonUnitPhase, DuplicateIncidence, BadVertexIndex: with a `path` attribute
    """
    data = _load(text)
    _check_version(data)
    _check_keys(data, _DOCUMENT_KEYS, '')
    n = data['n']
    if not _is_int(n) or n < 0:
        raise SchemaError('n', 'must be a non-negative integer')
    edges = data['edges']
    if not isinstance(edges, list):
        raise SchemaError('edges', 'must be a list')

    raw_edges = []
    for j, edge in enumerate(edges):
        if not isinstance(edge, list):
            raise SchemaError(f"edges[{j}]", 'must be a list of incidences')
        raw = []
        for position, incidence in enumerate(edge):
            path = f"edges[{j}][{position}]"
            if not isinstance(incidence, dict):
                raise SchemaError(path, 'must be an object')
            _check_keys(incidence, _INCIDENCE_KEYS, path)
            if not _is_int(incidence['v']):
                raise SchemaError(f"{path}.v", 'must be an integer')
            re, im = _phase_pair(incidence['omega'], f"{path}.omega")
            raw.append((incidence['v'], re, im))
        raw_edges.append(raw)

    try:
        return build(n, raw_edges)
    except NonUnitPhase as e:
        raise _with_path(e, f"edges[{e.edge}][{e.position}].omega")
    except (DuplicateIncidence, BadVertexIndex) as e:
        raise _with_path(e, f"edges[{e.edge}][{e.position}].v")


def _with_path(error: Exception, path: str) -> Exception:
    error.path = path
    error.args = (f"{path}: {error}",)
    return error


def serialize(G: ComplexUnitHypergraph) -> str:
    """Canonical compact document; byte-identical for equal hypergraphs"""
    edges = []
    for edge in G.edges:
        incidences = ','.join(
            f'{{"v":{v},"omega":[{_fmt(phase.re)},{_fmt(phase.im)}]}}' for v, phase in edge
        )
        edges.append(f'[{incidences}]')
    return f'{{"schema_version":{config.SCHEMA_VERSION},"n":{G.n},"edges":[{",".join(edges)}]}}'


def parse_switching(text: str) -> SwitchingFunction:
    """{"schema_version":1,"kind":"vertex"|"edge","values":[[re,im],...]}"""
    data = _load(text)
    _check_version(data)
    _check_keys(data, _SWITCHING_KEYS, '')
    kind = data['kind']
    if kind not in ('vertex', 'edge'):
        raise SchemaError('kind', "must be 'vertex' or 'edge'")
    if not isinstance(data['values'], list):
        raise SchemaError('values', 'must be a list')
    values = []
    for i, value in enumerate(data['values']):
        path = f"values[{i}]"
        re, im = _phase_pair(value, path)
        try:
            values.append(PhaseValue(re, im))
        except NonUnitPhase as e:
            raise _with_path(e, path)
    return SwitchingFunction(kind, tuple(values))


def serialize_switching(f: SwitchingFunction) -> str:
    values = ','.join(f'[{_fmt(p.re)},{_fmt(p.im)}]' for p in f.values)
    return f'{{"schema_version":{config.SCHEMA_VERSION},"kind":"{f.kind}","values":[{values}]}}'


def _read_text(path: str) -> str:
    """UTF-8 file contents; undecodable bytes are a syntax error at their position"""
    with open(path, 'rb') as fh:
        raw = fh.read()
    try:
        return raw.decode('utf-8')
    except UnicodeDecodeError as e:
        before = raw[:e.start]
        line = before.count(b'\n') + 1
        column = e.start - (before.rfind(b'\n') + 1) + 1
        raise DocumentSyntaxError(f"invalid UTF-8 byte 0x{raw[e.start]:02x} at offset {e.start}", line, column) from None


def read_hypergraph(path: str) -> ComplexUnitHypergraph:
    return parse(_read_text(path))


def write_hypergraph(G: ComplexUnitHypergraph, path: str):
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(serialize(G) + '\n')
    logger.debug(f"wrote n={G.n} m={G.m} hypergraph to {path}")


def read_switching(path: str) -> SwitchingFunction:
    return parse_switching(_read_text(path))


# =============================================================================
# REPORT VIEWS
# =============================================================================

def _complex_list(vector: np.ndarray) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in vector]


def spectrum_to_dict(spectrum: Spectrum, operator_kind: Optional[str] = None) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        'schema_version': config.SCHEMA_VERSION,
        'values': [float(v) for v in spectrum.values],
        'max_residual': float(spectrum.max_residual),
    }
    if operator_kind is not None:
        data['operator'] = operator_kind
    if spectrum.vectors is not None:
        data['vectors'] = [_complex_list(spectrum.vectors[:, i]) for i in range(spectrum.vectors.shape[1])]
    return data


def check_report_to_dict(report: CheckReport) -> Dict[str, Any]:
    return {
        'check_name': report.check_name,
        'inputs_digest': report.inputs_digest,
        'measured': [[label, value] for label, value in report.measured],
        'tolerance': report.tolerance,
        'verdict': report.verdict,
        'reason': report.reason,
        'notes': list(report.notes),
        'skipped_parts': list(report.skipped_parts),
    }


def bound_report_to_dict(report: BoundReport) -> Dict[str, Any]:
    data = {
        name: getattr(report, name)
        for name in report.__dataclass_fields__
        if name not in ('verdicts', 'notes', 'alpha_witness')
    }
    data['alpha_witness'] = list(report.alpha_witness) if report.alpha_witness is not None else None
    data['verdicts'] = dict(report.verdicts)
    data['notes'] = list(report.notes)
    data['schema_version'] = config.SCHEMA_VERSION
    return data


def suite_to_dict(result: SuiteResult) -> Dict[str, Any]:
    return {
        'schema_version': config.SCHEMA_VERSION,
        'inputs_digest': result.inputs_digest,
        'seed': result.seed,
        'reports': [check_report_to_dict(r) for r in result.reports],
        'summary': {'passed': result.passed, 'failed': result.failed, 'skipped': result.skipped},
    }


def to_json(data: Dict[str, Any]) -> str:
    """Stable-key-ordered JSON with full double precision"""
    return json.dumps(data, sort_keys=True, indent=2)
