"""Multi-start derivative-free search for entropy minima of channels.

Both searches run Nelder-Mead from a mix of deterministic and seeded random
starting points and keep the best local minimum found. The results are
heuristic upper bounds: nothing here certifies global optimality, and the
reports say so through their restart statistics rather than pretending to a
proof.

Parametrizations
----------------
Pure states use 2d real parameters (re, im interleaved blockwise); the
objective normalizes internally, so the search space is effectively the unit
sphere with a redundant scale direction. Input states for the entropy gain
use a full complex d x d matrix A with rho = A A^dagger / tr(A A^dagger),
which covers every density matrix including rank-deficient ones.

All objective evaluation happens in nats; the requested logarithm base only
rescales the final report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .channel import KrausChannel, _apply_stack, tensor
from .linalg import ConsistencyError, ContractViolation, log_divisor, spectrum_entropy

# Returned when the parameter vector collapses below numerical rank; large
# enough to repel the simplex from the origin without overflowing anything.
_COLLAPSE_PENALTY = 1e3
_COLLAPSE_NORM = 1e-8


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the multi-start simplex search.

    restart seeds derive from (seed, restart_index), so reports are
    reproducible bit for bit at fixed config and identical across channels
    given on different occasions.
    """

    restarts: int = 64
    seed: int = 0
    max_iterations_per_restart: int = 2000
    simplex_tolerance: float = 1e-9
    objective_tolerance: float = 1e-12
    log_base: float | None = None

    def __post_init__(self):
        if int(self.restarts) < 1:
            raise ContractViolation(f"restarts must be >= 1, got {self.restarts}")
        if int(self.seed) < 0:
            raise ContractViolation(f"seed must be nonnegative, got {self.seed}")
        if int(self.max_iterations_per_restart) < 1:
            raise ContractViolation("max_iterations_per_restart must be >= 1")
        if float(self.simplex_tolerance) <= 0 or float(self.objective_tolerance) <= 0:
            raise ContractViolation("tolerances must be positive")
        log_divisor(self.log_base)  # validates the base


@dataclass(frozen=True)
class SearchReport:
    """Outcome of one multi-start search, values in the configured base.

    restart_values holds every restart's local minimum, sorted ascending;
    value equals its first entry. converged_fraction counts restarts whose
    simplex met both tolerance targets before hitting iteration limits.
    """

    value: float
    argmin: np.ndarray
    restart_values: list[float]
    converged_fraction: float
    evaluations: int


@dataclass(frozen=True)
class ProbeReport:
    """Additivity probe outcome for a product channel.

    gap = joint_min - sum_of_singles. Subadditivity keeps the gap at or below
    zero up to search noise; a gap well below -1e-8 would mean the joint
    search found a genuinely better entangled input, which is worth reporting
    loudly rather than erroring. schmidt_coefficients describe the joint
    argmin (descending); a vanishing second coefficient means a product state
    achieved the joint minimum.
    """

    joint_min: float
    sum_of_singles: float
    gap: float
    argmin: np.ndarray
    schmidt_coefficients: np.ndarray
    joint: SearchReport
    single_a: SearchReport
    single_b: SearchReport


def haar_pure(dim: int, seed) -> np.ndarray:
    """Haar-distributed pure state, deterministic in the seed.

    A normalized vector of iid standard complex Gaussians is uniform on the
    sphere. dim = 1 returns the lone basis vector with phase fixed to 1.
    """
    if int(dim) < 1:
        raise ContractViolation(f"dimension must be >= 1, got {dim}")
    if int(dim) == 1:
        return np.ones(1, dtype=np.complex128)
    return _haar_from_rng(np.random.default_rng(seed), int(dim))


def _haar_from_rng(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def schmidt_coefficients(phi, dims) -> np.ndarray:
    """Descending Schmidt coefficients of a bipartite pure state."""
    d_a, d_b = int(dims[0]), int(dims[1])
    v = np.asarray(phi, dtype=np.complex128)
    if v.shape != (d_a * d_b,):
        raise ContractViolation(
            f"state shape {v.shape} does not match factor dimensions ({d_a}, {d_b})"
        )
    return np.linalg.svd(v.reshape(d_a, d_b), compute_uv=False)


def _params_from_state(phi: np.ndarray) -> np.ndarray:
    return np.concatenate([phi.real, phi.imag])


def _state_from_params(x: np.ndarray, dim: int) -> np.ndarray:
    v = x[:dim] + 1j * x[dim:]
    return v / np.linalg.norm(v)


def _pure_objective(channel: KrausChannel):
    """Output entropy (nats) as a function of 2*dim_in real parameters.

    Diagonalizes whichever of the Gram matrix <X_l phi, X_k phi> or the
    output state is smaller; both carry the same nonzero spectrum.
    """
    ops = channel.kraus
    n, dim_out, dim_in = ops.shape
    use_gram = n <= dim_out

    def objective(x):
        v = x[:dim_in] + 1j * x[dim_in:]
        norm = np.linalg.norm(v)
        if norm < _COLLAPSE_NORM:
            return _COLLAPSE_PENALTY
        moved = ops @ (v / norm)
        small = moved @ moved.conj().T if use_gram else moved.T @ moved.conj()
        return spectrum_entropy(np.linalg.eigvalsh(small))

    return objective


def _gain_objective(channel: KrausChannel):
    """Entropy gain (nats) over density matrices rho = A A^dagger / tr."""
    ops = channel.kraus
    dim = channel.dim_in
    block = dim * dim

    def objective(x):
        a = (x[:block] + 1j * x[block:]).reshape(dim, dim)
        total = float(np.vdot(a, a).real)
        if total < _COLLAPSE_NORM**2:
            return _COLLAPSE_PENALTY
        rho = (a @ a.conj().T) / total
        s_in = spectrum_entropy(np.linalg.eigvalsh(rho))
        s_out = spectrum_entropy(np.linalg.eigvalsh(_apply_stack(ops, rho)))
        return s_out - s_in

    return objective


def _multistart(objective, config: SearchConfig, deterministic_inits, random_init):
    """Shared engine: run the restarts, track the best point and statistics."""
    best_value = math.inf
    best_x = None
    values = []
    evaluations = 0
    converged = 0
    for index in range(int(config.restarts)):
        if index < len(deterministic_inits):
            x0 = np.asarray(deterministic_inits[index], dtype=float)
        else:
            x0 = random_init(np.random.default_rng([int(config.seed), index]))
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": int(config.max_iterations_per_restart),
                "maxfev": 4 * int(config.max_iterations_per_restart) + 100,
                "xatol": float(config.simplex_tolerance),
                "fatol": float(config.objective_tolerance),
            },
        )
        value = float(result.fun)
        values.append(value)
        evaluations += int(result.nfev)
        if result.status == 0:
            converged += 1
        if value < best_value:
            best_value = value
            best_x = np.asarray(result.x, dtype=float).copy()
    return best_value, best_x, sorted(values), converged / int(config.restarts), evaluations


def min_output_entropy(channel: KrausChannel, config: SearchConfig | None = None) -> SearchReport:
    """Search for the minimum output entropy over pure inputs.

    Restart 0 starts from the first basis vector; the rest start from Haar
    states seeded by (config.seed, restart_index). The returned value is the
    best local minimum seen, an upper bound on the true minimum.
    """
    cfg = config if config is not None else SearchConfig()
    objective = _pure_objective(channel)
    dim = channel.dim_in
    basis = np.zeros(dim, dtype=np.complex128)
    basis[0] = 1.0
    deterministic = [_params_from_state(basis)]

    def random_init(rng):
        return _params_from_state(_haar_from_rng(rng, dim))

    best, best_x, values, fraction, evaluations = _multistart(
        objective, cfg, deterministic, random_init
    )
    divisor = log_divisor(cfg.log_base)
    return SearchReport(
        value=best / divisor,
        argmin=_state_from_params(best_x, dim),
        restart_values=[v / divisor for v in values],
        converged_fraction=fraction,
        evaluations=evaluations,
    )


def min_entropy_gain(channel: KrausChannel, config: SearchConfig | None = None) -> SearchReport:
    """Search for the minimum entropy gain over all input states.

    Restart 0 starts from the maximally mixed state (gain <= 0 there for
    bistochastic channels), restart 1 from a pure basis state; the rest use
    seeded complex Gaussian matrices. The report's argmin is the best density
    matrix itself.
    """
    cfg = config if config is not None else SearchConfig()
    if channel.dim_in != channel.dim_out:
        raise ContractViolation("entropy gain search requires matching input and output dims")
    objective = _gain_objective(channel)
    dim = channel.dim_in
    block = dim * dim

    def pack(a):
        flat = np.asarray(a, dtype=np.complex128).reshape(block)
        return np.concatenate([flat.real, flat.imag])

    pure = np.zeros((dim, dim), dtype=np.complex128)
    pure[0, 0] = 1.0
    deterministic = [pack(np.eye(dim)), pack(pure)]

    def random_init(rng):
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return pack(a)

    best, best_x, values, fraction, evaluations = _multistart(
        objective, cfg, deterministic, random_init
    )
    a = (best_x[:block] + 1j * best_x[block:]).reshape(dim, dim)
    rho = (a @ a.conj().T) / float(np.vdot(a, a).real)

    divisor = log_divisor(cfg.log_base)
    value = best / divisor
    lower = -math.log(dim) / divisor
    if value < lower - 1e-8 or value > 1e-8:
        raise ConsistencyError(
            f"entropy gain minimum {value!r} escaped the certified range [{lower!r}, 0]"
        )
    return SearchReport(
        value=value,
        argmin=rho,
        restart_values=[v / divisor for v in values],
        converged_fraction=fraction,
        evaluations=evaluations,
    )


def _entangled_init(d_a: int, d_b: int) -> np.ndarray:
    """Alternating-sign maximally entangled start for the joint search.

    For equal factor dimensions this is the rotation singlet written in the
    m-basis; otherwise a plain maximally entangled state on the smaller
    dimension.
    """
    if d_a == d_b:
        v = np.zeros(d_a * d_b, dtype=np.complex128)
        for i in range(d_a):
            v[i * d_b + (d_b - 1 - i)] = (-1.0) ** i
        return v / np.linalg.norm(v)
    d = min(d_a, d_b)
    v = np.zeros(d_a * d_b, dtype=np.complex128)
    for i in range(d):
        v[i * d_b + i] = 1.0
    return v / np.linalg.norm(v)


def additivity_probe(
    channel_a: KrausChannel, channel_b: KrausChannel, config: SearchConfig | None = None
) -> ProbeReport:
    """Compare the joint minimum output entropy against the sum of singles.

    Runs the single-channel searches first, then searches the product channel
    starting from (in order) the product of the single argmins, an entangled
    state, the first basis vector, and seeded Haar states. The product start
    guarantees gap <= 0 up to simplex noise; the entangled start gives
    entanglement a genuine chance to win. Heuristic evidence only: a zero gap
    here is not a proof of additivity.
    """
    cfg = config if config is not None else SearchConfig()
    report_a = min_output_entropy(channel_a, cfg)
    report_b = min_output_entropy(channel_b, cfg)
    joint_channel = tensor(channel_a, channel_b)
    d_a = channel_a.dim_in
    d_b = channel_b.dim_in

    basis = np.zeros(d_a * d_b, dtype=np.complex128)
    basis[0] = 1.0
    deterministic = [
        _params_from_state(np.kron(report_a.argmin, report_b.argmin)),
        _params_from_state(_entangled_init(d_a, d_b)),
        _params_from_state(basis),
    ]

    objective = _pure_objective(joint_channel)
    dim = d_a * d_b

    def random_init(rng):
        return _params_from_state(_haar_from_rng(rng, dim))

    best, best_x, values, fraction, evaluations = _multistart(
        objective, cfg, deterministic, random_init
    )
    divisor = log_divisor(cfg.log_base)
    phi = _state_from_params(best_x, dim)
    joint = SearchReport(
        value=best / divisor,
        argmin=phi,
        restart_values=[v / divisor for v in values],
        converged_fraction=fraction,
        evaluations=evaluations,
    )
    total_singles = report_a.value + report_b.value
    return ProbeReport(
        joint_min=joint.value,
        sum_of_singles=total_singles,
        gap=joint.value - total_singles,
        argmin=phi,
        schmidt_coefficients=schmidt_coefficients(phi, (d_a, d_b)),
        joint=joint,
        single_a=report_a,
        single_b=report_b,
    )
