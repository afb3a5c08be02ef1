"""
Shared signature generation for hypergraphs and check inputs.

Every CheckReport carries an inputs digest built here, so a failing fuzz
report can be matched to the exact hypergraph (and deletion set, switching
function, seed) that produced it. Phases are hashed through float.hex, which
is exact: two hypergraphs share a signature only if every phase bit agrees.
"""

import hashlib
import json
import logging
from typing import Any, Dict

logger = logging.getLogger(__name__)


def canonical_hypergraph_data(G) -> Dict[str, Any]:
    """
    Canonical, JSON-ready description of a hypergraph.

    Args:
        G: ComplexUnitHypergraph (edges already sorted by vertex)

    Returns:
        Dict with n and the exact hex form of every phase
    """
    return {
        'n': G.n,
        'edges': [
            [[v, phase.re.hex(), phase.im.hex()] for v, phase in edge]
            for edge in G.edges
        ],
    }


def normalize_parameter(value: Any) -> Any:
    """Turn check parameters (sets, tuples, phases, switchings) into stable JSON values"""
    if isinstance(value, (set, frozenset)):
        return sorted(normalize_parameter(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [normalize_parameter(v) for v in value]
    if isinstance(value, float):
        return value.hex()
    if hasattr(value, 're') and hasattr(value, 'im'):
        return [value.re.hex(), value.im.hex()]
    if hasattr(value, 'kind') and hasattr(value, 'values'):
        return {'kind': value.kind, 'values': normalize_parameter(value.values)}
    return value


def generate_hypergraph_signature(G) -> str:
    """
    Stable signature of a hypergraph: "n{n}m{m}:<hash>".

    Edge order is part of the signature; it is the column order of B.
    """
    payload = json.dumps(canonical_hypergraph_data(G), sort_keys=True, separators=(',', ':'))
    digest = hashlib.md5(payload.encode()).hexdigest()[:12]
    return f"n{G.n}m{len(G.edges)}:{digest}"


def generate_check_signature(G, **params: Any) -> str:
    """Signature of a hypergraph plus the extra inputs of one check"""
    base = generate_hypergraph_signature(G)
    if not params:
        return base
    normalized = {key: normalize_parameter(value) for key, value in params.items()}
    payload = json.dumps(normalized, sort_keys=True, separators=(',', ':'))
    return f"{base}:{hashlib.md5(payload.encode()).hexdigest()[:8]}"
