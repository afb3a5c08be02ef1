"""
Consolidated utilities for the complex unit hypergraph toolkit
Logging, timing, tolerance comparisons, the exception hierarchy and decorators
"""
import json
import logging
import sys
import time
from contextlib import contextmanager
from datetime import datetime
from functools import wraps
from typing import Any, Dict, Iterable, Optional, Sequence

import click
import numpy as np
import pytz

import config

logger = logging.getLogger(__name__)

# =============================================================================
# EXCEPTIONS
# =============================================================================


class HypergraphError(Exception):
    """Base class for every error raised on malformed input"""
    pass


class NonUnitPhase(HypergraphError, ValueError):
    """An incidence label is not a complex unit"""

    def __init__(self, modulus: float, edge: Optional[int] = None, position: Optional[int] = None):
        self.modulus = modulus
        self.edge = edge
        self.position = position
        where = ''
        if edge is not None:
            where = f" at edge {edge}" + (f", incidence {position}" if position is not None else '')
        super().__init__(f"phase modulus {modulus!r} is not 1{where}")


class DuplicateIncidence(HypergraphError, ValueError):
    def __init__(self, vertex: int, edge: int, position: Optional[int] = None):
        self.vertex = vertex
        self.edge = edge
        self.position = position
        super().__init__(f"vertex {vertex} appears twice in edge {edge}")


class BadVertexIndex(HypergraphError, IndexError):
    def __init__(self, vertex: Any, n: int, edge: Optional[int] = None, position: Optional[int] = None):
        self.vertex = vertex
        self.n = n
        self.edge = edge
        self.position = position
        super().__init__(f"vertex index {vertex!r} out of range for n={n}")


class BadEdgeIndex(HypergraphError, IndexError):
    def __init__(self, edge: Any, m: int):
        self.edge = edge
        self.m = m
        super().__init__(f"edge index {edge!r} out of range for m={m}")


class NotAdjacentInEdge(HypergraphError, ValueError):
    pass


class LengthMismatch(HypergraphError, ValueError):
    pass


class BadParameter(HypergraphError, ValueError):
    pass


class TooLarge(HypergraphError, ValueError):
    pass


class ZeroDegreeVertex(HypergraphError, ValueError):
    """D^-1 is undefined; lists every offending vertex"""

    def __init__(self, vertices: Sequence[int]):
        self.vertices = tuple(vertices)
        super().__init__(f"vertices with degree 0: {list(self.vertices)}")


class NotHermitian(HypergraphError, ValueError):
    def __init__(self, deviation: float, tolerance: float):
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(f"matrix is not Hermitian: max|M - M^+| = {deviation:.3e} > {tolerance:.1e}")


class NotSquare(HypergraphError, ValueError):
    pass


class NoConvergence(HypergraphError, ArithmeticError):
    def __init__(self, sweeps: int, off_norm: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(f"Jacobi did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")


class NonPositiveDiagonal(HypergraphError, ValueError):
    pass


class ZeroVector(HypergraphError, ValueError):
    pass


class DocumentSyntaxError(HypergraphError, ValueError):
    """Unparseable hypergraph document; line/column are 1-based"""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"syntax error at line {line}, column {column}: {message}")


class SchemaError(HypergraphError, ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class EmptyEdgeWarning(UserWarning):
    """A random edge stayed empty after every resample"""
    pass


# =============================================================================
# CORE UTILITIES
# =============================================================================

class TimeUtils:
    """Timestamps for logs and reports"""

    @staticmethod
    def now() -> datetime:
        """Current time in the configured log timezone"""
        try:
            tz = pytz.timezone(config.LOG_TIMEZONE)
        except pytz.UnknownTimeZoneError:
            tz = pytz.UTC
        return datetime.now(tz)

    @staticmethod
    def elapsed_ms(start: float) -> float:
        return (time.perf_counter() - start) * 1000.0


class ToleranceUtils:
    """Tolerance-based comparisons shared by operators, eigen and analysis"""

    @staticmethod
    def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
        """Largest entrywise deviation; inf when the shapes disagree"""
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape != b.shape:
            return float('inf')
        if a.size == 0:
            return 0.0
        return float(np.max(np.abs(a - b)))

    @staticmethod
    def spectral_scale(*spectra: Iterable[float]) -> float:
        """1 + max|lambda| over all given spectra"""
        biggest = 0.0
        for values in spectra:
            values = np.asarray(values, dtype=float)
            if values.size:
                biggest = max(biggest, float(np.max(np.abs(values))))
        return 1.0 + biggest

    @staticmethod
    def strip_zeros(values: Sequence[float], policy: Optional[config.NullityTolerance] = None) -> np.ndarray:
        """Drop eigenvalues the nullity policy counts as zero"""
        policy = policy or config.get_nullity_policy()
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return values
        tau = policy.threshold(float(np.max(np.abs(values))))
        return values[np.abs(values) > tau]

    @staticmethod
    def multiset_deviation(a: Sequence[float], b: Sequence[float]) -> float:
        """Sorted pointwise deviation of two spectra; inf on length mismatch"""
        a = np.sort(np.asarray(a, dtype=float))
        b = np.sort(np.asarray(b, dtype=float))
        if a.shape != b.shape:
            return float('inf')
        if a.size == 0:
            return 0.0
        return float(np.max(np.abs(a - b)))


class MetricsUtils:
    """Timing records for solves and checks"""

    @staticmethod
    @contextmanager
    def timed(label: str, **details: Any):
        start = time.perf_counter()
        try:
            yield
        finally:
            logger.debug(f"{label}: {TimeUtils.elapsed_ms(start):.1f}ms {details if details else ''}".rstrip())


# =============================================================================
# LOGGING UTILITIES
# =============================================================================

class JsonFormatter(logging.Formatter):
    """JSON formatter for structured logging"""

    def format(self, record):
        log_entry = {
            "timestamp": TimeUtils.now().isoformat(),
            "timezone": config.LOG_TIMEZONE,
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage()
        }

        if hasattr(record, 'event_type'):
            log_entry['event_type'] = record.event_type
        if hasattr(record, 'details'):
            log_entry.update(record.details)

        return json.dumps(log_entry, default=str)


class StructuredLogger:
    """Emits check and solver events as structured records"""

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)
        self.name = name

    def log_check_event(self, check_name: str, verdict: str, details: Dict[str, Any]):
        """Log one finished check; failures are warnings, everything else debug"""
        extra = {
            'event_type': 'check',
            'details': {'check': check_name, 'verdict': verdict, **details},
        }
        if verdict == 'fail':
            self.logger.warning(f"check {check_name} failed", extra=extra)
        else:
            self.logger.debug(f"check {check_name}: {verdict}", extra=extra)

    def log_solver_event(self, size: int, sweeps: int, duration_ms: float):
        extra = {
            'event_type': 'solve',
            'details': {'size': size, 'sweeps': sweeps, 'duration_ms': round(duration_ms, 3)},
        }
        self.logger.debug(f"jacobi solve n={size} sweeps={sweeps}", extra=extra)


def configure_logging(level: Optional[str] = None, structured: Optional[bool] = None):
    """
    Install a single stderr handler on the root logger.

    stdout belongs to command output (spectra, reports), so logs never go there.
    """
    level = (level or config.LOG_LEVEL).upper()
    structured = config.STRUCTURED_LOGGING if structured is None else structured

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, '_hyperspec', False):
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler._hyperspec = True
    if structured:
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.WARNING))


# =============================================================================
# DECORATORS
# =============================================================================

def handle_cli_errors(f):
    """Decorator turning input/validation errors into exit code 1 with a stderr diagnostic"""
    @wraps(f)
    def decorated(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except HypergraphError as e:
            click.echo(f"error: {e}", err=True)
            return 1
        except OSError as e:
            click.echo(f"error: {e.strerror or e}: {e.filename}" if e.filename else f"error: {e}", err=True)
            return 1
    return decorated


# =============================================================================
# INITIALIZATION
# =============================================================================

structured_logger = StructuredLogger('hyperspec')

# Export main utilities
__all__ = [
    'TimeUtils', 'ToleranceUtils', 'MetricsUtils',
    'JsonFormatter', 'StructuredLogger', 'configure_logging', 'structured_logger',
    'handle_cli_errors',
    'HypergraphError', 'NonUnitPhase', 'DuplicateIncidence', 'BadVertexIndex',
    'BadEdgeIndex', 'NotAdjacentInEdge', 'LengthMismatch', 'BadParameter',
    'TooLarge', 'ZeroDegreeVertex', 'NotHermitian', 'NotSquare', 'NoConvergence',
    'NonPositiveDiagonal', 'ZeroVector', 'DocumentSyntaxError', 'SchemaError',
    'EmptyEdgeWarning',
]
