"""
Numeric constants and defaults for orbitkernel.

Everything here is a plain module-level value so that configuration,
tests and the command line all read the same defaults.
"""

import math

TWO_PI = 2.0 * math.pi

# Radius guard around the axis Q = 0 where the SO(2) action stops being free
EPS_MIN = 1e-6

# Below this f~-plane radius squared the square root of R is taken as the identity
RHO2_SERIES_CUTOFF = 1e-14

# Central differences
FD_STEP = 1e-4
FD_STEP_MIN = 1e-7
FD_STEP_MAX = 1e-2

# Largest Fourier index exercised by the generator harness
MAX_HARMONIC = 8

# Path simulation
DT = 1e-3
BATCH_SIZE = 20_000  # paths per worker task
NOISE_BLOCK = 1000  # paths per noise stream
N_GROUPS = 50  # batch-means groups for Monte Carlo standard errors
MIN_GROUPS = 30
MIN_BOX_HITS = 100

# Orbit quadrature
QUAD_POINTS = 256
QUAD_RTOL = 1e-10

# Box averaging (Gauss-Legendre nodes per axis)
BOX_NODES = 6

# Grid solver on (Q*, rho, phi) with rho, phi polar coordinates of f~
GRID_H = 0.1
GRID_N_PHI = 64
GRID_N_PHI_MIN = 8
# Outer walls left unset sit this many sqrt(lambda t) beyond the start and the box
GRID_MARGIN = 5.0
GRID_WIDTH_CELLS = 2
# Explicit Euler in (Q*, rho): dt = courant * h^2 / (lambda * kappa_max), positive for courant <= GRID_COURANT_MAX;
# kappa = 1 on a uniform weight and never exceeds it for sqrt(H) rho
GRID_COURANT = 0.4
GRID_COURANT_MAX = 0.5
BOUNDARY_MASS_TOL = 0.01

# Identity tolerances
IDENTITY_TOL = 1e-12
PULLBACK_TOL = 1e-8
PULLBACK_STEP = 1e-5
JACOBIAN_RTOL = 1e-5
EQUIVARIANCE_TOL = 1e-5
DRIFT_GAP_TOL = 1e-6

# Acceptance on the headline relation
RELATION_Z_MAX = 3.0
RELATION_RESIDUAL_MAX = 0.05
NEGATIVE_CONTROL_Z_MIN = 5.0

# Config schema
SCHEMA_VERSION = 1
THREADS_ENV = "ORBITKERNEL_THREADS"

# Exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2

# Output columns
SAMPLE_CSV_COLUMNS = ("time", "q_star", "ft1", "ft2", "weight_log", "phase_re", "phase_im", "discarded")
SWEEP_CSV_COLUMNS = (
    "t",
    "mu2kappa",
    "start_q_star",
    "start_ft1",
    "start_ft2",
    "lhs",
    "lhs_stderr",
    "rhs",
    "residual",
    "z",
    "n_paths",
    "discards",
    "passed",
)
