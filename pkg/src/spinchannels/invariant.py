"""Block decomposition of rotationally invariant two-spin states.

A state commuting with every U tensor U rotation is a direct mixture of the
total-spin blocks j = 0..2s, each block carrying the maximally mixed state on
its 2j+1 dimensional space. Such a state is fully described by the block
probabilities p_j, and its entropy splits into a classical part over j plus
the log-multiplicity of each block:

    S = sum_j [ p_j log(2j+1) - p_j log p_j ].

Three independent routes to the p_j coexist here on purpose. The projector
trace tr(P_j rho) is the reference; the matrix element (2j+1) <j;0|rho|j;0>
must match it because an invariant state is constant on each block; and for
the decohered singlet specifically a closed moment formula in the spin
matrix elements must match as well. Disagreement between routes raises
instead of silently picking one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import isotropic_channel, tensor, apply
from .linalg import (
    ConsistencyError,
    ContractViolation,
    log_base_label,
    log_divisor,
    require_hermitian,
    spectrum_entropy,
)
from .spin import (
    SpinLabel,
    casimir_projectors,
    coupled_zero_m_state,
    rotation_unitary,
    singlet_state,
    spin_operators,
)

_LN2 = math.log(2.0)
_LN3 = math.log(3.0)

# Exact single-use minimum output entropies of the isotropic channel, keyed
# by 2s, in nats. Only the two spins with known closed forms appear.
EXACT_SINGLE_CHANNEL_MIN = {
    1: _LN3 - 2.0 * _LN2 / 3.0,
    2: _LN2,
}
SINGLE_MIN_CLOSED_FORM = {
    1: "ln 3 - (2/3) ln 2",
    2: "ln 2",
}

# Exact output entropy of the doubly decohered singlet, same keying.
EXACT_PAIR_ENTROPY = {
    1: 5.0 * _LN3 / 3.0 - 2.0 * _LN2 / 3.0,
    2: _LN3 + 4.0 * _LN2 / 3.0,
}
PAIR_ENTROPY_CLOSED_FORM = {
    1: "(5/3) ln 3 - (2/3) ln 2",
    2: "ln 3 + (4/3) ln 2",
}

EXACT_EXCESS = {
    1: math.log(4.0 / 3.0) / 3.0,
    2: _LN3 - 2.0 * _LN2 / 3.0,
}
EXCESS_CLOSED_FORM = {
    1: "(1/3) ln(4/3)",
    2: "ln 3 - (2/3) ln 2",
}

_INVARIANCE_CHECK_SEED = 171717
_CROSS_CHECK_TOL = 1e-9
_MOMENT_TOL = 1e-10


@dataclass(frozen=True)
class IsotypicDistribution:
    """Block probabilities (p_0, ..., p_2s) of an invariant two-spin state."""

    spin: SpinLabel
    probs: tuple

    def __post_init__(self):
        label = SpinLabel.coerce(self.spin)
        object.__setattr__(self, "spin", label)
        raw = np.asarray(self.probs, dtype=float)
        if raw.shape != (label.twice_s + 1,):
            raise ContractViolation(
                f"expected {label.twice_s + 1} block probabilities for spin {label}, "
                f"got shape {raw.shape}"
            )
        lowest = float(raw.min()) if raw.size else 0.0
        if lowest < -1e-8:
            raise ContractViolation(f"block probability {lowest:.3e} violates positivity")
        clamped = np.clip(raw, 0.0, None)
        total = float(clamped.sum())
        if abs(total - 1.0) > 1e-8:
            raise ContractViolation(f"block probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", tuple(float(p) for p in clamped))


@dataclass(frozen=True)
class SingletDecoherenceReport:
    """Everything the singlet decoherence computation produces, in one place.

    Reference fields (single_channel_min, two_channel_reference, excess) are
    None for spins without a known closed-form single-channel minimum.
    """

    spin: SpinLabel
    probs: tuple
    entropy: float
    single_channel_min: float | None
    two_channel_reference: float | None
    excess: float | None
    log_base: float | None

    def as_dict(self) -> dict:
        payload = {
            "spin": str(self.spin),
            "probs": list(self.probs),
            "entropy": self.entropy,
            "log_base": log_base_label(self.log_base),
        }
        if self.single_channel_min is not None:
            payload["single_channel_min"] = self.single_channel_min
            payload["two_channel_reference"] = self.two_channel_reference
            payload["excess"] = self.excess
        return payload


def _require_invariant(rho: np.ndarray, label: SpinLabel, tol: float, samples: int = 10):
    """Reject states that fail invariance under sampled U tensor U rotations."""
    rng = np.random.default_rng(_INVARIANCE_CHECK_SEED)
    worst = 0.0
    for _ in range(samples):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        u = rotation_unitary(label, axis, angle)
        w = np.kron(u, u)
        worst = max(worst, float(np.abs(w @ rho @ w.conj().T - rho).max()))
    if worst > tol:
        raise ContractViolation(
            f"state is not rotationally invariant: worst deviation {worst:.3e} "
            f"under sampled rotations exceeds {tol:.1e}"
        )


def isotypic_probabilities(rho, spin, invariance_tol: float = 1e-8) -> IsotypicDistribution:
    """Block probabilities of an invariant state on two spin-s systems.

    Computes tr(P_j rho) from the Casimir projectors and cross-checks it
    against the matrix elements (2j+1) <j;0|rho|j;0>; the two must agree
    within 1e-9 or the call fails. The projector route's values are returned.
    """
    label = SpinLabel.coerce(spin)
    d = label.dimension
    m = require_hermitian(rho, name="invariant state")
    if m.shape != (d * d, d * d):
        raise ContractViolation(
            f"state shape {m.shape} does not match two spin-{label} systems"
        )
    trace = complex(np.trace(m))
    if abs(trace - 1.0) > 1e-10:
        raise ContractViolation(f"state trace is {trace!r}, not 1")
    _require_invariant(m, label, invariance_tol)

    from_projectors = [
        float(np.real(np.trace(p @ m))) for p in casimir_projectors(label)
    ]
    from_elements = [
        (2 * j + 1) * float(np.real(np.vdot(coupled_zero_m_state(label, j), m @ coupled_zero_m_state(label, j))))
        for j in range(label.twice_s + 1)
    ]
    worst = max(abs(a - b) for a, b in zip(from_projectors, from_elements))
    if worst > _CROSS_CHECK_TOL:
        raise ConsistencyError(
            f"projector-trace and matrix-element block probabilities disagree by {worst:.3e}"
        )
    return IsotypicDistribution(label, tuple(from_projectors))


def moment_probabilities(spin) -> IsotypicDistribution:
    """Block probabilities of the doubly decohered singlet via spin moments.

    Closed route that never builds the output state:

        p_j = (2j+1) / (s(s+1))^2 * sum_kl |<j;0| S_k tensor S_l |singlet>|^2.

    Must agree with the channel route within 1e-10 (cross-checked by
    `singlet_decoherence` and the test suite, not recomputed here).
    """
    label = SpinLabel.coerce(spin)
    if label.twice_s == 0:
        raise ContractViolation("the isotropic channel is undefined for spin 0 (s(s+1) = 0)")
    ops = spin_operators(label)
    psi = singlet_state(label)
    scale = 1.0 / (label.s * (label.s + 1.0)) ** 2
    probs = []
    for j in range(label.twice_s + 1):
        bra = coupled_zero_m_state(label, j)
        total = 0.0
        for s_k in ops:
            for s_l in ops:
                amp = np.vdot(bra, np.kron(s_k, s_l) @ psi)
                total += float(abs(amp) ** 2)
        probs.append((2 * j + 1) * scale * total)
    return IsotypicDistribution(label, tuple(probs))


def invariant_state_entropy(distribution: IsotypicDistribution, base=None) -> float:
    """Entropy of the invariant state with the given block probabilities.

    Evaluates sum_j [p_j log(2j+1) - p_j log p_j]; zero-probability blocks
    contribute nothing.
    """
    total = 0.0
    for j, p in enumerate(distribution.probs):
        if p > 0.0:
            total += p * math.log(2 * j + 1) - p * math.log(p)
    return total / log_divisor(base)


def state_from_distribution(distribution: IsotypicDistribution) -> np.ndarray:
    """Reconstruct the invariant state sum_j p_j P_j / (2j+1)."""
    projectors = casimir_projectors(distribution.spin)
    d2 = projectors[0].shape[0]
    out = np.zeros((d2, d2), dtype=np.complex128)
    for j, p in enumerate(distribution.probs):
        out += p * projectors[j] / (2 * j + 1)
    return out


def decohered_singlet(spin) -> np.ndarray:
    """(Lambda_s tensor Lambda_s)(|singlet><singlet|), the invariant output."""
    label = SpinLabel.coerce(spin)
    one = isotropic_channel(label)
    psi = singlet_state(label)
    return apply(tensor(one, one), np.outer(psi, psi.conj()))


def singlet_decoherence(spin, base=None) -> SingletDecoherenceReport:
    """Full analysis of the doubly decohered singlet for one spin value.

    Pushes the singlet through the product of two isotropic channels,
    decomposes the output into total-spin blocks (projector route, element
    route, and moment formula all cross-checked), and evaluates the block
    entropy both from the formula and by direct diagonalization. For spins
    with known closed-form single-channel minima the report also carries the
    additivity reference 2 * min and the strictly positive excess above it.
    """
    label = SpinLabel.coerce(spin)
    if label.twice_s == 0:
        raise ContractViolation("the isotropic channel is undefined for spin 0 (s(s+1) = 0)")
    rho = decohered_singlet(label)
    distribution = isotypic_probabilities(rho, label)

    moments = moment_probabilities(label)
    worst = max(abs(a - b) for a, b in zip(distribution.probs, moments.probs))
    if worst > _MOMENT_TOL:
        raise ConsistencyError(
            f"moment formula and channel output disagree on block probabilities by {worst:.3e}"
        )

    entropy_nats = invariant_state_entropy(distribution)
    direct_nats = spectrum_entropy(np.linalg.eigvalsh(rho))
    if abs(entropy_nats - direct_nats) > _MOMENT_TOL:
        raise ConsistencyError(
            f"block entropy formula and diagonalization disagree: "
            f"{entropy_nats!r} vs {direct_nats!r}"
        )

    divisor = log_divisor(base)
    single = EXACT_SINGLE_CHANNEL_MIN.get(label.twice_s)
    if single is None:
        single_out = reference_out = excess_out = None
    else:
        excess = entropy_nats - 2.0 * single
        if excess <= 0.0:
            raise ConsistencyError(
                f"decohered singlet entropy {entropy_nats!r} does not exceed "
                f"the additivity reference {2.0 * single!r}"
            )
        single_out = single / divisor
        reference_out = 2.0 * single / divisor
        excess_out = excess / divisor
    return SingletDecoherenceReport(
        spin=label,
        probs=distribution.probs,
        entropy=entropy_nats / divisor,
        single_channel_min=single_out,
        two_channel_reference=reference_out,
        excess=excess_out,
        log_base=base,
    )
