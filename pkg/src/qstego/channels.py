"""CPTP maps as Kraus families: composition, tensor products, isometric
extensions, complementary channels, and the textbook single-qubit fixtures.

Kraus families are kept exactly as given (no canonicalization); complementary
channels are therefore basis-dependent up to an isometry on the environment,
and anything that compares them should compare spectra only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import DIM_CAP, DensityMatrix, as_matrix

CPTP_TOL = 1e-9


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace-preserving map held as a Kraus family.

    Validates the completeness relation sum_j F_j† F_j = I to 1e-9.
    """

    kraus: tuple

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise ValueError("invalid channel: no Kraus operators")
        din = ks[0].shape[1]
        dout = ks[0].shape[0]
        total = np.zeros((din, din), dtype=complex)
        for k in ks:
            if k.shape != (dout, din):
                raise ValueError("shape error: inconsistent Kraus shapes")
            total += k.conj().T @ k
        if np.max(np.abs(total - np.eye(din))) > CPTP_TOL:
            raise ValueError("invalid channel: Kraus completeness fails")
        object.__setattr__(self, "kraus", ks)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]


@dataclass(frozen=True)
class Isometry:
    """Matrix V with V†V = I (within 1e-9)."""

    data: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.data, dtype=complex)
        if v.ndim != 2 or v.shape[0] < v.shape[1]:
            raise ValueError("shape error: not a tall matrix")
        if np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))) > CPTP_TOL:
            raise ValueError("invalid isometry: columns not orthonormal")
        object.__setattr__(self, "data", v)

    @property
    def dim_in(self) -> int:
        return self.data.shape[1]

    @property
    def dim_out(self) -> int:
        return self.data.shape[0]


def apply(ch: QuantumChannel, rho) -> DensityMatrix:
    """sum_j F_j rho F_j†."""
    a = as_matrix(rho)
    if a.shape[0] != ch.dim_in:
        raise ValueError("shape error: state does not match channel input")
    out = apply_matrix(ch, a)
    return DensityMatrix((out + out.conj().T) / 2)


def apply_matrix(ch: QuantumChannel, a: np.ndarray) -> np.ndarray:
    """Channel action on a raw matrix (no state validation)."""
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=complex)
    for k in ch.kraus:
        out += k @ a @ k.conj().T
    return out


def tensor(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """Kronecker product of two channels (all pairwise Kraus products)."""
    if a.dim_in * b.dim_in > DIM_CAP or a.dim_out * b.dim_out > DIM_CAP:
        raise ValueError("dimension limit")
    return QuantumChannel(tuple(np.kron(f, g) for f in a.kraus for g in b.kraus))


def tensor_power(ch: QuantumChannel, n: int) -> QuantumChannel:
    """n-fold Kronecker power; Kraus operators indexed by n-tuples in product order."""
    if n < 1:
        raise ValueError("bad parameter: n must be >= 1")
    if ch.dim_in**n > DIM_CAP or ch.dim_out**n > DIM_CAP:
        raise ValueError("dimension limit")
    ks = []
    for combo in itertools.product(ch.kraus, repeat=n):
        k = combo[0]
        for f in combo[1:]:
            k = np.kron(k, f)
        ks.append(k)
    return QuantumChannel(tuple(ks))


def compose(outer: QuantumChannel, inner: QuantumChannel) -> QuantumChannel:
    """outer after inner; Kraus family of all products G_i F_j."""
    if inner.dim_out != outer.dim_in:
        raise ValueError("shape error: channel dimensions do not compose")
    return QuantumChannel(tuple(g @ f for g in outer.kraus for f in inner.kraus))


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel((np.eye(dim, dtype=complex),))


def isometric_extension(ch: QuantumChannel) -> Isometry:
    """V = sum_j F_j (x) |j>_E with environment dimension = number of Kraus operators.

    tr_E(V rho V†) reproduces the channel action; the output ordering is
    (system, environment).
    """
    k = len(ch.kraus)
    v = np.zeros((ch.dim_out * k, ch.dim_in), dtype=complex)
    for j, f in enumerate(ch.kraus):
        e = np.zeros(k, dtype=complex)
        e[j] = 1.0
        v += np.kron(f, e.reshape(-1, 1))
    return Isometry(v)


def complementary(ch: QuantumChannel, rho) -> DensityMatrix:
    """Environment output tr_out(V rho V†) for the canonical isometric extension.

    With V = sum_j F_j (x) |j>, the result has entries tr(F_j rho F_j'†).
    """
    a = as_matrix(rho)
    if a.shape[0] != ch.dim_in:
        raise ValueError("shape error: state does not match channel input")
    return DensityMatrix(complementary_matrix(ch, a))


def complementary_matrix(ch: QuantumChannel, a: np.ndarray) -> np.ndarray:
    k = len(ch.kraus)
    env = np.zeros((k, k), dtype=complex)
    moved = [f @ a for f in ch.kraus]
    for j in range(k):
        for jp in range(j, k):
            val = np.trace(moved[j] @ ch.kraus[jp].conj().T)
            env[j, jp] = val
            env[jp, j] = np.conj(val)
    return env


_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def standard_channel(kind: str, p: float | None = None, unitary=None) -> QuantumChannel:
    """Textbook channel fixtures.

    kind one of "identity", "unitary", "depolarizing", "dephasing",
    "bit_flip", "amplitude_damping".  ``p`` is the noise parameter in [0, 1];
    depolarizing(p) acts as rho -> (1-p) rho + p I/2 and dephasing(p) as
    rho -> (1-p) rho + p Z rho Z.
    """
    if kind == "identity":
        return identity_channel(2 if unitary is None else np.asarray(unitary).shape[0])
    if kind == "unitary":
        u = np.asarray(unitary, dtype=complex)
        return QuantumChannel((u,))
    if p is None or not 0.0 <= p <= 1.0:
        raise ValueError("bad parameter: p must be in [0, 1]")
    eye = np.eye(2, dtype=complex)
    if kind == "depolarizing":
        return QuantumChannel(
            (
                np.sqrt(1 - 3 * p / 4) * eye,
                np.sqrt(p / 4) * _PAULI_X,
                np.sqrt(p / 4) * _PAULI_Y,
                np.sqrt(p / 4) * _PAULI_Z,
            )
        )
    if kind == "dephasing":
        return QuantumChannel((np.sqrt(1 - p) * eye, np.sqrt(p) * _PAULI_Z))
    if kind == "bit_flip":
        return QuantumChannel((np.sqrt(1 - p) * eye, np.sqrt(p) * _PAULI_X))
    if kind == "amplitude_damping":
        k0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
        k1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
        return QuantumChannel((k0, k1))
    raise ValueError(f"bad parameter: unknown channel kind {kind!r}")


def haar_random_subspace(dim_ambient: int, m: int, rng) -> Isometry:
    """Isometry onto a Haar-random m-dimensional subspace.

    QR of a complex Gaussian matrix with the R diagonal phase fixed, which is
    distributionally the same as Gram-Schmidt on independent Gaussian vectors.
    ``rng`` is a seeded numpy Generator (or an int seed).
    """
    if m > dim_ambient:
        raise ValueError("bad parameter: m exceeds ambient dimension")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    g = rng.normal(size=(dim_ambient, m)) + 1j * rng.normal(size=(dim_ambient, m))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return Isometry(q)


def choi_matrix(ch: QuantumChannel) -> np.ndarray:
    """Choi operator (ch (x) id)(|phi><phi|) with |phi> unnormalized maximally entangled."""
    d = ch.dim_in
    c = np.zeros((ch.dim_out * d, ch.dim_out * d), dtype=complex)
    for k in ch.kraus:
        v = k.reshape(-1)  # row-major flatten pairs the (out, in) indices
        c += np.outer(v, v.conj())
    return c
