"""
Identity suites for the geometry, generator and sde modules.

Each check measures one residual over seeded random points or samples
and compares it with a tolerance. The registered names are fixed so that
a summary always lists the same checks in the same order.
"""

import logging
import math
import time
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import ks_2samp

from orbitkernel.const import (
    DRIFT_GAP_TOL,
    EQUIVARIANCE_TOL,
    EXIT_CHECK_FAILED,
    EXIT_OK,
    IDENTITY_TOL,
    JACOBIAN_RTOL,
    PULLBACK_STEP,
    PULLBACK_TOL,
    TWO_PI,
)
from orbitkernel.modules.generators.fields import coordinate, standard_family
from orbitkernel.modules.generators.operators import (
    apply_lb_orbit,
    apply_reduced_generator,
    dhat_rate,
    dhat_rate_via_ito,
    drift_gap,
    equivariance_residual,
    fourier_coefficient,
    jacobian_potential_fd,
    jacobian_scalar_fd,
    orbit_drift,
)
from orbitkernel.modules.geometry.bundle import (
    faddeev_popov,
    general_formula_connection,
    general_formula_horizontal_metric,
    geometry_at,
    jacobian_potential,
)
from orbitkernel.modules.geometry.points import (
    AdaptedPoint,
    BasePoint,
    EuclideanPoint,
    from_adapted,
    gauge_condition,
    group_act,
    to_adapted,
)
from orbitkernel.modules.sde.batch import frozen_phase_decay, simulate_batch

logger = logging.getLogger(__name__)

GEOMETRY_CHECKS = (
    "det_g",
    "metric_inverse",
    "sqrt_r",
    "rz_killing",
    "group_noise",
    "orbit_inverse",
    "h_det",
    "projector",
    "connection_pairing",
    "general_connection",
    "horizontal_metric",
    "faddeev_popov",
    "adapted_roundtrip",
    "isometry",
    "pullback",
    "jacobian_identity",
)

GENERATOR_CHECKS = (
    "equivariance",
    "drift_gap",
    "lb_drift",
    "jacobian_potential",
    "dhat_rate",
    "fourier_projection",
)

SDE_CHECKS = (
    "transport_adapted",
    "transport_transformed",
    "bessel_moment",
    "phase_mean",
    "phase_modulus",
    "weight_sign",
    "discard_fraction",
)

KS_ALPHA = 0.01

# How each residual is normalised; reported as residual_kind next to it
RESIDUAL_KINDS = {
    "absolute": "max |r|",
    "relative": "max |r| / |reference|",
    "scaled": "max |r| / (1 + max |reference|)",
    "z": "|estimate - expected| / stderr",
    "pvalue": "smallest two-sample KS p-value",
    "count": "offending samples",
    "flag": "1 when the condition holds, else 0",
}
MOMENT_Z_MAX = 3.0
DISCARD_FRACTION_MAX = 0.05


@dataclass(frozen=True)
class CheckResult:
    """
    Attributes:
        name: Registered check name
        passed: Outcome
        residual: Measured value
        tolerance: Threshold it was compared with
        wall_time: Seconds spent
        at_least: True when the residual must reach the tolerance rather than stay below it
        kind: Key of RESIDUAL_KINDS
    """

    name: str
    passed: bool
    residual: float
    tolerance: float
    wall_time: float
    at_least: bool = False
    kind: str = "absolute"

    def to_dict(self, timing=False):
        out = {
            "name": self.name,
            "passed": bool(self.passed),
            "residual": float(self.residual),
            "residual_kind": self.kind,
            "tolerance": float(self.tolerance),
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out


@dataclass(frozen=True)
class CheckSummary:
    """
    Ordered results of one suite.
    """

    title: str
    results: tuple

    @property
    def passed(self):
        return all(result.passed for result in self.results)

    @property
    def names(self):
        return tuple(result.name for result in self.results)

    @property
    def exit_code(self):
        return EXIT_OK if self.passed else EXIT_CHECK_FAILED

    def __getitem__(self, name):
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)

    def merged(self, other):
        return CheckSummary(self.title, self.results + other.results)

    def to_dict(self, timing=False):
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [result.to_dict(timing) for result in self.results],
        }


def measure(name, tolerance, func, at_least=False, kind="absolute"):
    """
    Time func() and compare its residual with tolerance.

    Args:
        name: Check name
        tolerance: Threshold
        func: Callable returning the residual
        at_least: Pass when residual >= tolerance instead of residual <= tolerance
        kind: Key of RESIDUAL_KINDS describing the normalisation

    Returns:
        CheckResult
    """
    if kind not in RESIDUAL_KINDS:
        raise ValueError(f"unknown residual kind {kind!r}")
    began = time.perf_counter()
    residual = float(func())
    elapsed = time.perf_counter() - began
    passed = residual >= tolerance if at_least else residual <= tolerance
    # NaN never passes
    passed = passed and not math.isnan(residual)
    level = logging.INFO if passed else logging.WARNING
    logger.log(
        level,
        "%-22s %s  %s residual %.3g (tolerance %.3g)",
        name,
        "pass" if passed else "FAIL",
        kind,
        residual,
        tolerance,
    )
    return CheckResult(name, passed, residual, tolerance, elapsed, at_least, kind)


def sample_adapted_points(n, seed, q_range=(0.2, 5.0), f_range=(-3.0, 3.0)):
    """Seeded uniform adapted points with a uniform angle."""
    rng = np.random.default_rng(seed)
    q = rng.uniform(*q_range, n)
    f = rng.uniform(*f_range, (n, 2))
    angle = rng.uniform(0.0, TWO_PI, n)
    return [AdaptedPoint(q[i], f[i, 0], f[i, 1], angle[i]) for i in range(n)]


def _scaled(residual, scale):
    return float(np.max(np.abs(residual))) / (1.0 + scale)


def _inject(bundle, fault):
    if fault == "flip-connection":
        return replace(bundle, conn=bundle.conn * np.array([1.0, -1.0, 1.0]))
    return bundle


def _pullback_residual(x, step=PULLBACK_STEP):
    center = x.as_array()
    columns = []
    for k in range(4):
        shift = np.zeros(4)
        shift[k] = step
        plus = from_adapted(AdaptedPoint(*(center + shift))).as_array()
        minus = from_adapted(AdaptedPoint(*(center - shift))).as_array()
        columns.append((plus - minus) / (2.0 * step))
    jacobian = np.array(columns).T
    return np.max(np.abs(jacobian.T @ jacobian - geometry_at(x).g_adapted))


def _isometry_residual(p, theta):
    # the action is linear, so unit-step differences give its Jacobian up to rounding
    image = group_act(p, theta).as_array()
    columns = [
        group_act(EuclideanPoint.from_array(p.as_array() + unit), theta).as_array() - image for unit in np.eye(4)
    ]
    jacobian = np.array(columns).T
    return np.max(np.abs(jacobian.T @ jacobian - np.eye(4)))


def run_geometry_check(cfg):
    """
    Evaluate every geometry identity at cfg.checks n_points seeded random points.

    Args:
        cfg: RunConfig; checks.fault = "flip-connection" flips the sign of A_f1

    Returns:
        CheckSummary with GEOMETRY_CHECKS in order
    """
    checks = cfg.checks
    points = sample_adapted_points(int(checks["n_points"]), int(checks["seed"]))
    fault = checks["fault"]
    bundles = [_inject(geometry_at(x), fault) for x in points]
    fd = cfg.fd

    def each(func):
        return max(func(x, b) for x, b in zip(points, bundles))

    def det_g(x, b):
        return abs(np.linalg.det(b.g_adapted) - x.q_star**2) / x.q_star**2

    def metric_inverse(x, b):
        scale = np.max(np.abs(b.g_adapted)) * np.max(np.abs(b.g_inverse))
        return _scaled(b.g_adapted @ b.g_inverse - np.eye(4), scale)

    def sqrt_r(x, b):
        return _scaled(b.x_sqrt @ b.x_sqrt.T - b.r_matrix, np.max(np.abs(b.r_matrix)))

    def rz_killing(x, b):
        z = -b.conn[1:]
        return _scaled(b.r_matrix @ z + b.killing_f / b.gamma, np.max(np.abs(b.r_matrix)) * np.max(np.abs(z)))

    def group_noise(x, b):
        z = -b.conn[1:]
        return _scaled(b.x_group**2 - (1.0 / b.gamma - z @ b.r_matrix @ z), 1.0 / b.gamma)

    def orbit_inverse(x, b):
        block = np.zeros((3, 3))
        block[0, 0] = 1.0
        block[1:, 1:] = b.r_matrix
        scale = np.max(np.abs(b.h_orbit_inv))
        return max(
            _scaled(b.h_orbit_inv - block, scale),
            _scaled(b.h_orbit @ b.h_orbit_inv - np.eye(3), scale),
        )

    def h_det(x, b):
        return max(abs(b.h_det - x.q_star**2 / b.d_scalar), abs(np.linalg.det(b.h_orbit) - b.h_det))

    def projector(x, b):
        return _scaled(b.r_matrix - (np.outer(b.proj_n, b.proj_n) + np.eye(2)), np.max(np.abs(b.r_matrix)))

    def connection_pairing(x, b):
        return abs(b.conn[1:] @ b.killing_f + b.gamma / b.d_scalar - 1.0)

    def general_connection(x, b):
        return np.max(np.abs(general_formula_connection(x) - b.conn))

    def horizontal_metric(x, b):
        return np.max(np.abs(general_formula_horizontal_metric(x) - b.h_orbit))

    def fp(x, b):
        on_gauge = from_adapted(x.base.lift(0.0))
        return max(abs(faddeev_popov(x) - b.phi_fp), abs(b.phi_fp + x.q_star), abs(gauge_condition(on_gauge)))

    def roundtrip(x, b):
        p = from_adapted(x)
        back = to_adapted(p)
        flat = from_adapted(back)
        return _scaled(flat.as_array() - p.as_array(), np.max(np.abs(p.as_array())))

    def isometry(x, b):
        return _isometry_residual(from_adapted(x), x.angle)

    def pullback(x, b):
        return _pullback_residual(x)

    def jacobian_identity(x, b):
        closed = 3.0 / b.d_scalar
        return abs(jacobian_scalar_fd(x, fd) - closed) / closed

    measured = {
        "det_g": (IDENTITY_TOL, det_g, "relative"),
        "metric_inverse": (IDENTITY_TOL, metric_inverse, "scaled"),
        "sqrt_r": (IDENTITY_TOL, sqrt_r, "scaled"),
        "rz_killing": (IDENTITY_TOL, rz_killing, "scaled"),
        "group_noise": (IDENTITY_TOL, group_noise, "scaled"),
        "orbit_inverse": (IDENTITY_TOL, orbit_inverse, "scaled"),
        "h_det": (IDENTITY_TOL, h_det, "absolute"),
        "projector": (IDENTITY_TOL, projector, "scaled"),
        "connection_pairing": (IDENTITY_TOL, connection_pairing, "absolute"),
        "general_connection": (IDENTITY_TOL, general_connection, "absolute"),
        "horizontal_metric": (IDENTITY_TOL, horizontal_metric, "absolute"),
        "faddeev_popov": (IDENTITY_TOL, fp, "absolute"),
        "adapted_roundtrip": (IDENTITY_TOL, roundtrip, "scaled"),
        "isometry": (IDENTITY_TOL, isometry, "absolute"),
        "pullback": (PULLBACK_TOL, pullback, "absolute"),
        "jacobian_identity": (JACOBIAN_RTOL, jacobian_identity, "relative"),
    }
    results = []
    for name in GEOMETRY_CHECKS:
        tolerance, func, kind = measured[name]
        results.append(measure(name, tolerance, lambda f=func: each(f), kind=kind))
    return CheckSummary("geometry-check", tuple(results))


def run_generator_check(cfg):
    """
    Operator identities: equivariance of the reduced generator, drift gaps,
    the Jacobian potential, the filtering rate and Fourier projection.

    Returns:
        CheckSummary with GENERATOR_CHECKS in order
    """
    checks = cfg.checks
    fd = cfg.fd
    lam = cfg.sim.mu2kappa
    harmonics = [int(n) for n in checks["harmonics"]]
    field_points = sample_adapted_points(int(checks["field_points"]), int(checks["seed"]), (0.8, 3.0), (-1.0, 1.0))
    rate_points = sample_adapted_points(int(checks["n_points"]), int(checks["seed"]) + 1)
    fields = standard_family()

    def equivariance():
        worst = 0.0
        for x in field_points:
            p = from_adapted(x)
            for phi in fields:
                for n in harmonics:
                    reduced = apply_reduced_generator(phi, n, x.base, lam, fd)
                    worst = max(worst, equivariance_residual(phi, n, p, lam, fd) / (1.0 + abs(reduced)))
        return worst

    def gap():
        worst = 0.0
        for x in field_points:
            expected = drift_gap(x, lam)
            for i in range(3):
                phi = coordinate(i)
                measured = apply_reduced_generator(phi, 0, x, lam, fd).real - 0.5 * lam * apply_lb_orbit(phi, x, fd)
                worst = max(worst, abs(measured - expected[i]))
        return worst

    def lb_drift():
        worst = 0.0
        for x in field_points:
            expected = orbit_drift(x, lam)
            for i in range(3):
                worst = max(worst, abs(0.5 * lam * apply_lb_orbit(coordinate(i), x, fd) - expected[i]))
        return worst

    def jacobian():
        worst = 0.0
        for x in field_points:
            closed = jacobian_potential(x, lam)
            worst = max(worst, abs(jacobian_potential_fd(x, lam, fd) - closed) / abs(closed))
        return worst

    def rate():
        worst = 0.0
        for x in rate_points:
            for n in harmonics:
                worst = max(worst, abs(dhat_rate(x, n, lam) - dhat_rate_via_ito(x, n, lam)))
        return worst

    def projection():
        worst = 0.0
        phi = fields[-1]
        for x in field_points[:10]:
            value = phi.at(x)
            for n in harmonics:

                def lifted(q, f1, f2, theta, n=n):
                    return phi(q, f1, f2) * (np.exp(1j * n * theta) + 0.5 * np.exp(-1j * (n + 1) * theta))

                worst = max(worst, abs(fourier_coefficient(lifted, n, x) - value))
        return worst

    measured = {
        "equivariance": (EQUIVARIANCE_TOL, equivariance, "scaled"),
        "drift_gap": (DRIFT_GAP_TOL, gap, "absolute"),
        "lb_drift": (DRIFT_GAP_TOL, lb_drift, "absolute"),
        "jacobian_potential": (DRIFT_GAP_TOL, jacobian, "relative"),
        "dhat_rate": (IDENTITY_TOL, rate, "absolute"),
        "fourier_projection": (IDENTITY_TOL, projection, "absolute"),
    }
    results = []
    for name in GENERATOR_CHECKS:
        tolerance, func, kind = measured[name]
        results.append(measure(name, tolerance, func, kind=kind))
    return CheckSummary("generator-check", tuple(results))


def _min_ks_pvalue(reference, other):
    return min(ks_2samp(reference[i], other[i]).pvalue for i in range(3))


def run_sde_check(cfg, threads=None):
    """
    Law transport between the flat and adapted processes, the Bessel moment,
    filtering-factor decay on frozen coefficients and weight sanity.

    Each process runs once from cfg.query.start with its own seed offset.

    Returns:
        CheckSummary with SDE_CHECKS in order
    """
    checks = cfg.checks
    t = float(checks["sde_t"])
    params = replace(cfg.sim, n_paths=int(checks["sde_paths"]), t_total=t)
    start = cfg.query.start
    lam = params.mu2kappa
    offsets = {"original": 0, "adapted": 1, "transformed": 2, "xi_tilde": 3}
    runs = {}

    def run(kind):
        if kind not in runs:
            seeded = replace(params, seed=(params.seed + offsets[kind]) % 2**64)
            runs[kind] = simulate_batch(kind, 0, seeded, start, t, threads=threads)
        return runs[kind]

    def kept_endpoints(kind):
        samples = run(kind)
        return samples.endpoints[:, ~samples.discarded]

    def transport(kind):
        return _min_ks_pvalue(kept_endpoints("original"), kept_endpoints(kind))

    def bessel():
        samples = run("transformed")
        mean, stderr = samples.moment(samples.endpoints[0] ** 2, 50)
        return abs(mean - (start.q_star**2 + 2.0 * lam * t)) / stderr

    frozen = BasePoint(1.0, 0.6, -0.4)
    decay = frozen_phase_decay(frozen, 1, params)

    def weight_sign():
        samples = run("xi_tilde")
        kept = samples.weight_log[~samples.discarded]
        if params.potential.is_zero:
            return np.count_nonzero(~np.isfinite(kept) | (kept >= 0.0))
        return np.count_nonzero(~np.isfinite(kept))

    results = (
        measure("transport_adapted", KS_ALPHA, lambda: transport("adapted"), at_least=True, kind="pvalue"),
        measure("transport_transformed", KS_ALPHA, lambda: transport("transformed"), at_least=True, kind="pvalue"),
        measure("bessel_moment", MOMENT_Z_MAX, bessel, kind="z"),
        measure(
            "phase_mean",
            MOMENT_Z_MAX,
            lambda: abs(decay.mean_re - decay.expected_mean) / decay.mean_re_stderr,
            kind="z",
        ),
        measure(
            "phase_modulus",
            1e-9,
            lambda: abs(decay.mean_abs2 - decay.expected_abs2) / decay.expected_abs2,
            kind="relative",
        ),
        measure("weight_sign", 0, weight_sign, kind="count"),
        measure("discard_fraction", DISCARD_FRACTION_MAX, lambda: run("xi_tilde").discard_fraction, kind="absolute"),
    )
    return CheckSummary("sde-check", results)
