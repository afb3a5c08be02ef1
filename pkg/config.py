"""
Environment-based configuration for the complex unit hypergraph toolkit
"""
import logging
import os
from dataclasses import dataclass

logger = logging.getLogger(__name__)

# Environment Detection
ENVIRONMENT = os.environ.get('ENVIRONMENT', 'production')
DEBUG = ENVIRONMENT == 'development'


def _env_float(name, default):
    """
    Read a float setting, falling back to the default on garbage.

    A mistyped tolerance must not make every check fail for reasons that have
    nothing to do with the hypergraph under test.
    """
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not a number, using {default}")
        return default
    if value < 0:
        logger.warning(f"Ignoring {name}={raw!r}: must be non-negative, using {default}")
        return default
    return value


def _env_int(name, default, minimum=0):
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value < minimum:
        logger.warning(f"Ignoring {name}={raw!r}: must be >= {minimum}, using {default}")
        return default
    return value


def _env_bool(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() == 'true'


# Tolerances
PHASE_TOL = _env_float('PHASE_TOL', 1e-9)            # | |omega| - 1 | accepted at construction
HERMITIAN_TOL = _env_float('HERMITIAN_TOL', 1e-12)   # matrix identities and Hermiticity
SPECTRAL_TOL = _env_float('SPECTRAL_TOL', 1e-8)      # eigenvalue comparisons and slacks
RAYLEIGH_TOL = _env_float('RAYLEIGH_TOL', 1e-9)      # Rayleigh quotient sandwiches
SOLVER_HERMITIAN_TOL = _env_float('SOLVER_HERMITIAN_TOL', 1e-10)

# Nullity policy: |lambda| <= max(NULLITY_ABS_FLOOR, NULLITY_REL_FACTOR * max|lambda|)
NULLITY_ABS_FLOOR = _env_float('NULLITY_ABS_FLOOR', 1e-10)
NULLITY_REL_FACTOR = _env_float('NULLITY_REL_FACTOR', 1e-9)

# Eigensolver
JACOBI_MAX_SWEEPS = _env_int('JACOBI_MAX_SWEEPS', 60, minimum=1)
JACOBI_OFFDIAG_REL = _env_float('JACOBI_OFFDIAG_REL', 1e-13)
SPECTRUM_CACHE_SIZE = _env_int('SPECTRUM_CACHE_SIZE', 4096)

# Combinatorics
MAX_BRUTE_FORCE_VERTICES = _env_int('MAX_BRUTE_FORCE_VERTICES', 24, minimum=1)
EMPTY_EDGE_RESAMPLES = _env_int('EMPTY_EDGE_RESAMPLES', 100)

# Verification suite
SUITE_SEED = _env_int('SUITE_SEED', 0)
RAYLEIGH_SAMPLES = _env_int('RAYLEIGH_SAMPLES', 1000, minimum=1)
QUADRATIC_FORM_SAMPLES = _env_int('QUADRATIC_FORM_SAMPLES', 100, minimum=1)
SUITE_WORKERS = _env_int('SUITE_WORKERS', 1, minimum=1)

# Logging
LOG_LEVEL = os.environ.get('LOG_LEVEL', 'WARNING').upper()
STRUCTURED_LOGGING = _env_bool('STRUCTURED_LOGGING', False)
LOG_TIMEZONE = os.environ.get('LOG_TIMEZONE', 'UTC')

# Output
HUMAN_DIGITS = 12
SCHEMA_VERSION = 1

# Development Settings
if DEBUG:
    LOG_LEVEL = 'DEBUG'


@dataclass(frozen=True)
class NullityTolerance:
    """Two-sided zero test for eigenvalues."""
    absolute_floor: float = 1e-10
    relative_factor: float = 1e-9

    def threshold(self, max_abs_eigenvalue):
        return max(self.absolute_floor, self.relative_factor * max_abs_eigenvalue)


def get_nullity_policy():
    """Return the nullity tolerance configured for this process."""
    return NullityTolerance(
        absolute_floor=NULLITY_ABS_FLOOR,
        relative_factor=NULLITY_REL_FACTOR,
    )
