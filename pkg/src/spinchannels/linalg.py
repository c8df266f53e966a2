"""Dense complex matrix primitives and entropy functionals.

Operators are plain numpy arrays with complex128 entries, stored row major.
Bipartite indices are flattened as (i_A, i_B) -> i_A * d_B + i_B; every
tensor-product helper in this package shares that convention.

Entropies are computed internally in nats. Passing a ``base`` converts the
final value by dividing by log(base); nothing upstream ever sees a converted
number.
"""

from __future__ import annotations

import math

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
# Eigenvalues of a nominally positive matrix: anything in [-EIGENVALUE_ERROR, 0)
# is treated as float noise and clamped to zero; below that positivity is
# considered genuinely violated.
EIGENVALUE_ERROR = 1e-8
SUPPORT_THRESHOLD = 1e-10


class ContractViolation(ValueError):
    """An argument failed one of the documented preconditions."""


class ConsistencyError(RuntimeError):
    """Two redundant evaluation paths disagreed beyond tolerance."""


def as_complex_matrix(matrix) -> np.ndarray:
    """Coerce input to a 2-d complex128 array, without copying when possible."""
    out = np.asarray(matrix, dtype=np.complex128)
    if out.ndim != 2:
        raise ContractViolation(f"expected a matrix, got an array of rank {out.ndim}")
    if out.shape[0] < 1 or out.shape[1] < 1:
        raise ContractViolation(f"matrix must be nonempty, got shape {out.shape}")
    return out


def as_state_vector(vector) -> np.ndarray:
    """Coerce input to a 1-d complex128 array."""
    out = np.asarray(vector, dtype=np.complex128)
    if out.ndim != 1 or out.shape[0] < 1:
        raise ContractViolation(f"expected a state vector, got shape {np.shape(vector)}")
    return out


def hermiticity_defect(matrix) -> float:
    """Max-entry distance from Hermiticity, max |M - M^dagger|."""
    m = as_complex_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise ContractViolation(f"hermiticity is undefined for shape {m.shape}")
    return float(np.abs(m - m.conj().T).max())


def require_hermitian(matrix, tol: float = HERMITICITY_TOL, name: str = "matrix") -> np.ndarray:
    m = as_complex_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise ContractViolation(f"{name} is not square: shape {m.shape}")
    defect = float(np.abs(m - m.conj().T).max())
    if defect > tol:
        raise ContractViolation(
            f"{name} is not Hermitian: max |M - M^dagger| = {defect:.3e} exceeds {tol:.1e}"
        )
    return m


def unitarity_defect(matrix) -> float:
    """Max-entry residual of U^dagger U - I."""
    u = as_complex_matrix(matrix)
    if u.shape[0] != u.shape[1]:
        raise ContractViolation(f"unitarity is undefined for shape {u.shape}")
    eye = np.eye(u.shape[0])
    return float(np.abs(u.conj().T @ u - eye).max())


def is_unitary(matrix, tol: float = 1e-9) -> bool:
    return unitarity_defect(matrix) <= tol


def check_pure_state(vector, tol: float = 1e-12) -> np.ndarray:
    """Validate a unit vector and return it as complex128."""
    v = as_state_vector(vector)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise ContractViolation(f"state vector is not normalized: |phi| = {norm!r}")
    return v


def check_density_matrix(
    matrix,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    eig_tol: float = SUPPORT_THRESHOLD,
) -> np.ndarray:
    """Validate Hermiticity, unit trace, and positivity of a density matrix."""
    rho = require_hermitian(matrix, herm_tol, "density matrix")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > trace_tol:
        raise ContractViolation(f"density matrix trace is {trace!r}, not 1 within {trace_tol:.1e}")
    lowest = float(np.linalg.eigvalsh(rho).min())
    if lowest < -eig_tol:
        raise ContractViolation(
            f"density matrix has eigenvalue {lowest:.3e}, violating positivity beyond {eig_tol:.1e}"
        )
    return rho


def hermitian_eigensystem(matrix, tol: float = HERMITICITY_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvector columns.

    Hermiticity is enforced first so that silent non-Hermitian input cannot
    produce a plausible-looking but wrong spectrum.
    """
    m = require_hermitian(matrix, tol)
    return np.linalg.eigh(m)


def kron(a, b) -> np.ndarray:
    """Tensor product in the shared (i_A, i_B) -> i_A * d_B + i_B convention."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def kron_vec(a, b) -> np.ndarray:
    """Tensor product of state vectors, same index convention as `kron`."""
    return np.kron(as_state_vector(a), as_state_vector(b))


def partial_trace(matrix, dims, keep: str) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    Parameters
    ----------
    matrix : array, shape (d_a * d_b, d_a * d_b)
    dims : pair (d_a, d_b)
    keep : "A" to return the d_a x d_a reduction, "B" for d_b x d_b
    """
    rho = as_complex_matrix(matrix)
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a < 1 or d_b < 1:
        raise ContractViolation(f"invalid factor dimensions {dims!r}")
    if rho.shape != (d_a * d_b, d_a * d_b):
        raise ContractViolation(
            f"operator shape {rho.shape} does not match factor dimensions ({d_a}, {d_b})"
        )
    blocks = rho.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("abcb->ac", blocks)
    if keep == "B":
        return np.einsum("abad->bd", blocks)
    raise ContractViolation(f"keep must be 'A' or 'B', got {keep!r}")


def log_divisor(base) -> float:
    """Conversion divisor from nats: 1 for natural log, log(base) otherwise."""
    if base is None:
        return 1.0
    b = float(base)
    if b <= 0.0 or b == 1.0:
        raise ContractViolation(f"invalid logarithm base {base!r}")
    return math.log(b)


def log_base_label(base) -> str:
    """Short textual tag for a logarithm base, used in reports."""
    if base is None:
        return "e"
    b = float(base)
    if b == 2.0:
        return "2"
    if abs(b - math.e) < 1e-12:
        return "e"
    return repr(b)


def spectrum_entropy(eigenvalues) -> float:
    """Shannon entropy -sum(w log w) of a spectrum, in nats.

    Small negative eigenvalues (float noise from diagonalization) are clamped
    to zero; anything below -1e-8 raises, because that indicates a genuinely
    non-positive input rather than roundoff.
    """
    w = np.asarray(eigenvalues, dtype=float)
    if w.size == 0:
        raise ContractViolation("empty spectrum")
    lowest = float(w.min())
    if lowest < -EIGENVALUE_ERROR:
        raise ContractViolation(
            f"eigenvalue {lowest:.3e} violates positivity beyond {EIGENVALUE_ERROR:.0e}"
        )
    w = w[w > 0.0]
    if w.size == 0:
        return 0.0
    return float(-(w * np.log(w)).sum())


def von_neumann_entropy(rho, base=None) -> float:
    """Entropy of a state, -tr(rho log rho), via diagonalization."""
    m = require_hermitian(rho, name="state")
    return spectrum_entropy(np.linalg.eigvalsh(m)) / log_divisor(base)


def relative_entropy(rho, sigma, base=None) -> float:
    """Relative entropy S(rho | sigma) = tr(rho log rho) - tr(rho log sigma).

    Returns inf when rho places weight above SUPPORT_THRESHOLD outside the
    support of sigma. Eigenvalues of sigma below SUPPORT_THRESHOLD do not
    count as support.
    """
    r = require_hermitian(rho, name="rho")
    s = require_hermitian(sigma, name="sigma")
    if r.shape != s.shape:
        raise ContractViolation(f"dimension mismatch: rho {r.shape} vs sigma {s.shape}")
    lam = np.linalg.eigvalsh(r)
    mu, w_vecs = np.linalg.eigh(s)
    if float(lam.min()) < -EIGENVALUE_ERROR or float(mu.min()) < -EIGENVALUE_ERROR:
        raise ContractViolation("relative entropy requires positive semidefinite arguments")
    lam = np.clip(lam, 0.0, None)
    mu = np.clip(mu, 0.0, None)

    outside = mu <= SUPPORT_THRESHOLD
    if bool(outside.any()):
        w_out = w_vecs[:, outside]
        weight = float(np.real(np.sum(w_out.conj() * (r @ w_out))))
        if weight > SUPPORT_THRESHOLD:
            return math.inf

    inside = ~outside
    # |<v_i|w_j>|^2 with rho-eigenvectors v_i; rows follow lam's ordering.
    _, v_vecs = np.linalg.eigh(r)
    overlaps = np.abs(v_vecs.conj().T @ w_vecs[:, inside]) ** 2
    pos = lam > 0.0
    first = float((lam[pos] * np.log(lam[pos])).sum())
    second = float((lam[:, None] * overlaps * np.log(mu[inside])[None, :]).sum())
    return (first - second) / log_divisor(base)


def operator_norm(matrix) -> float:
    """Largest singular value."""
    m = as_complex_matrix(matrix)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def matrix_to_json(matrix) -> list:
    """Rows of [re, im] pairs; the wire format for complex matrices."""
    m = as_complex_matrix(matrix)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ContractViolation("matrix payload must be a nonempty list of rows")
    width = None
    out = []
    for row in rows:
        if not isinstance(row, list) or not row:
            raise ContractViolation("matrix rows must be nonempty lists")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ContractViolation("matrix rows have inconsistent lengths")
        parsed = []
        for entry in row:
            if not isinstance(entry, list) or len(entry) != 2:
                raise ContractViolation(f"matrix entries must be [re, im] pairs, got {entry!r}")
            parsed.append(complex(float(entry[0]), float(entry[1])))
        out.append(parsed)
    return np.asarray(out, dtype=np.complex128)


def vector_to_json(vector) -> list:
    v = as_state_vector(vector)
    return [[float(z.real), float(z.imag)] for z in v]


def vector_from_json(entries) -> np.ndarray:
    if not isinstance(entries, list) or not entries:
        raise ContractViolation("vector payload must be a nonempty list")
    parsed = []
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ContractViolation(f"vector entries must be [re, im] pairs, got {entry!r}")
        parsed.append(complex(float(entry[0]), float(entry[1])))
    return np.asarray(parsed, dtype=np.complex128)
