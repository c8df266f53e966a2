"""Completely positive trace-preserving maps given by Kraus operator stacks.

A channel acts as rho -> sum_k X_k rho X_k^dagger. The Kraus operators live
in a single (n_kraus, dim_out, dim_in) array so that applying the channel is
two BLAS calls rather than a Python loop.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    ContractViolation,
    as_complex_matrix,
    check_pure_state,
    matrix_from_json,
    matrix_to_json,
    von_neumann_entropy,
)
from .spin import SpinLabel, spin_operators

TP_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Kraus stack of shape (n_kraus, dim_out, dim_in).

    Construction enforces trace preservation, sum_k X_k^dagger X_k = I,
    within 1e-10 per entry. The stored array is write-protected; build a new
    channel instead of mutating one.
    """

    kraus: np.ndarray

    def __post_init__(self):
        try:
            ops = np.asarray(self.kraus, dtype=np.complex128)
        except (ValueError, TypeError):
            raise ContractViolation("Kraus operators must share a common shape") from None
        if ops.ndim == 2:
            ops = ops[np.newaxis, :, :]
        if ops.ndim != 3 or ops.shape[0] < 1 or ops.shape[1] < 1 or ops.shape[2] < 1:
            raise ContractViolation(
                f"expected a stack of matrices, got array of shape {ops.shape}"
            )
        ops = ops.copy()
        ops.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        defect = self.trace_preservation_defect()
        if defect > TP_TOL:
            raise ContractViolation(
                f"Kraus set is not trace preserving: residual {defect:.3e} exceeds {TP_TOL:.0e}"
            )

    @property
    def n_kraus(self) -> int:
        return self.kraus.shape[0]

    @property
    def dim_out(self) -> int:
        return self.kraus.shape[1]

    @property
    def dim_in(self) -> int:
        return self.kraus.shape[2]

    def trace_preservation_defect(self) -> float:
        """Max-entry residual of sum_k X_k^dagger X_k - I."""
        gram = np.einsum("kji,kjl->il", self.kraus.conj(), self.kraus)
        return float(np.abs(gram - np.eye(self.dim_in)).max())

    def bistochastic_defect(self) -> float:
        """Max-entry residual of sum_k X_k X_k^dagger - I (unital direction)."""
        if self.dim_in != self.dim_out:
            raise ContractViolation("bistochasticity is undefined for rectangular channels")
        out = np.einsum("kij,klj->il", self.kraus, self.kraus.conj())
        return float(np.abs(out - np.eye(self.dim_out)).max())

    def is_bistochastic(self, tol: float = TP_TOL) -> bool:
        return self.dim_in == self.dim_out and self.bistochastic_defect() <= tol


def isotropic_channel(spin) -> KrausChannel:
    """The rotation covariant channel with Kraus operators S_k / sqrt(s(s+1)).

    Bistochastic by construction. Spin 0 is rejected: s(s+1) = 0 leaves no
    channel to normalize.
    """
    label = SpinLabel.coerce(spin)
    if label.twice_s == 0:
        raise ContractViolation("the isotropic channel is undefined for spin 0 (s(s+1) = 0)")
    scale = 1.0 / math.sqrt(label.s * (label.s + 1.0))
    return KrausChannel(np.stack([op * scale for op in spin_operators(label)]))


def _apply_stack(ops: np.ndarray, rho: np.ndarray) -> np.ndarray:
    moved = ops @ rho
    return np.tensordot(moved, ops.conj(), axes=([0, 2], [0, 2]))


def apply(channel: KrausChannel, rho) -> np.ndarray:
    """Evaluate the channel on a matrix (not restricted to states)."""
    m = as_complex_matrix(rho)
    d = channel.dim_in
    if m.shape != (d, d):
        raise ContractViolation(f"operator shape {m.shape} does not match channel input dim {d}")
    return _apply_stack(channel.kraus, m)


def tensor(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Parallel composition: Kraus set {X_k tensor Y_l}."""
    ops = np.stack([np.kron(x, y) for x in a.kraus for y in b.kraus])
    return KrausChannel(ops)


def output_gram(channel: KrausChannel, phi) -> np.ndarray:
    """Gram matrix G_kl = <X_l phi, X_k phi> of the propagated vectors.

    Shares its nonzero spectrum with the channel output on |phi><phi|, which
    makes it the cheap route to output entropies when n_kraus < dim_out.
    """
    v = check_pure_state(phi)
    if v.shape[0] != channel.dim_in:
        raise ContractViolation(
            f"state dimension {v.shape[0]} does not match channel input dim {channel.dim_in}"
        )
    moved = channel.kraus @ v
    return moved @ moved.conj().T


def entropy_gain(channel: KrausChannel, rho, base=None) -> float:
    """S(Lambda(rho)) - S(rho)."""
    m = as_complex_matrix(rho)
    d = channel.dim_in
    if m.shape != (d, d):
        raise ContractViolation(f"state shape {m.shape} does not match channel input dim {d}")
    return von_neumann_entropy(apply(channel, m), base) - von_neumann_entropy(m, base)


_FLIP = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=np.complex128)


def time_reversal_apply(rho) -> np.ndarray:
    """Spin-1/2 isotropic channel through its antiunitary normal form.

    Evaluates (tr rho) I/3 + T rho T^dagger / 3 where T conjugates in the
    m-basis and then applies the spin flip [[0, -1], [1, 0]]. Agrees with the
    three-Kraus form to machine precision; kept as an independent route.
    """
    m = as_complex_matrix(rho)
    if m.shape != (2, 2):
        raise ContractViolation(f"time reversal form is specific to dimension 2, got {m.shape}")
    flipped = _FLIP @ m.conj() @ _FLIP.conj().T
    return np.trace(m) * np.eye(2, dtype=np.complex128) / 3.0 + flipped / 3.0


def random_channel(dim: int, n_kraus: int, seed) -> KrausChannel:
    """Haar-style random channel: a random isometry sliced into Kraus blocks.

    QR of an (n_kraus * dim, dim) complex Gaussian matrix gives column
    orthonormality, which is exactly trace preservation of the slices.
    """
    if int(dim) < 1 or int(n_kraus) < 1:
        raise ContractViolation(f"need dim >= 1 and n_kraus >= 1, got {dim}, {n_kraus}")
    dim = int(dim)
    n_kraus = int(n_kraus)
    rng = np.random.default_rng(seed)
    gaussian = rng.standard_normal((n_kraus * dim, dim)) + 1j * rng.standard_normal(
        (n_kraus * dim, dim)
    )
    q, _ = np.linalg.qr(gaussian)
    return KrausChannel(q.reshape(n_kraus, dim, dim))


def fixed_point_state(channel: KrausChannel, tol: float = 1e-12, max_iterations: int = 10000):
    """Iterate rho <- Lambda(rho) from the maximally mixed state.

    Returns the fixed point once successive iterates agree within `tol` per
    entry, or None if the iteration has not settled after `max_iterations`
    steps (peripheral spectrum of the superoperator).
    """
    if channel.dim_in != channel.dim_out:
        raise ContractViolation("fixed points require matching input and output dimensions")
    d = channel.dim_in
    rho = np.eye(d, dtype=np.complex128) / d
    for _ in range(int(max_iterations)):
        advanced = _apply_stack(channel.kraus, rho)
        residual = float(np.abs(advanced - rho).max())
        rho = advanced
        if residual <= tol:
            return (rho + rho.conj().T) / 2.0
    return None


def channel_to_json(channel: KrausChannel) -> dict:
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [matrix_to_json(op) for op in channel.kraus],
    }


def channel_from_json(data) -> KrausChannel:
    """Parse the wire format, validating declared dimensions against shapes."""
    if not isinstance(data, dict):
        raise ContractViolation("channel payload must be a JSON object")
    for key in ("dim_in", "dim_out", "kraus"):
        if key not in data:
            raise ContractViolation(f"channel payload is missing the {key!r} field")
    raw = data["kraus"]
    if not isinstance(raw, list) or not raw:
        raise ContractViolation("channel payload needs a nonempty list of Kraus matrices")
    ops = [matrix_from_json(entry) for entry in raw]
    shape = ops[0].shape
    for op in ops[1:]:
        if op.shape != shape:
            raise ContractViolation("Kraus matrices in the payload have inconsistent shapes")
    dim_out, dim_in = shape
    if int(data["dim_in"]) != dim_in or int(data["dim_out"]) != dim_out:
        raise ContractViolation(
            f"declared dimensions ({data['dim_in']}, {data['dim_out']}) do not match "
            f"matrix shape {shape}"
        )
    return KrausChannel(np.stack(ops))


def load_channel(path) -> KrausChannel:
    """Read a channel from a JSON file; malformed input raises with a reason."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ContractViolation(f"malformed channel file {path}: {exc}") from None
    return channel_from_json(data)


def save_channel(channel: KrausChannel, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(channel_to_json(channel), handle, indent=2, sort_keys=True)
        handle.write("\n")
