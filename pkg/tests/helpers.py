"""Shared constructors for the test suite."""

import numpy as np

from spinchannels.channel import KrausChannel


def replacement_channel(dim, target=0):
    """Constant map onto a basis pure state: Kraus set {|target><i|}."""
    ops = np.zeros((dim, dim, dim), dtype=complex)
    for i in range(dim):
        ops[i, target, i] = 1.0
    return KrausChannel(ops)


def random_hermitian(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


def random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_axis_angle(rng):
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    return axis, float(rng.uniform(0.0, 2.0 * np.pi))
