"""Protocol data model: cover-code types, stego-code types, and the
entanglement-distillation oracle interface.

Cover codes compute their reported reliability/fidelity at construction.
Stego codes are produced by the builders in this package; every achieved
metric they carry is recomputed by an audit routine from the assembled
artifacts (encoder states, POVMs, channels), never copied from intermediate
search output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..channels import Isometry, QuantumChannel, apply, compose, identity_channel, tensor
from ..linalg import DensityMatrix, Povm, maximally_entangled

PROPORTIONALITY_TOL = 1e-8


@dataclass(frozen=True)
class CcCode:
    """Classical communication code: encoder table, decoding POVM, channel.

    ``channel`` is the full n-use channel the code is designed for; the
    reported reliability (1/M) sum_w tr(Lambda^w channel(f(w))) and
    epsilon = 1 - reliability are computed at construction.
    """

    codewords: tuple
    povm: Povm
    channel: QuantumChannel
    n: int
    reliability: float = field(init=False)

    def __post_init__(self):
        cw = tuple(
            c if isinstance(c, DensityMatrix) else DensityMatrix(np.asarray(c, dtype=complex))
            for c in self.codewords
        )
        if len(cw) != len(self.povm):
            raise ValueError("shape error: codeword count differs from POVM size")
        rel = float(
            np.mean(
                [
                    np.trace(e.data @ apply(self.channel, c).data).real
                    for c, e in zip(cw, self.povm.elements)
                ]
            )
        )
        object.__setattr__(self, "codewords", cw)
        object.__setattr__(self, "reliability", rel)

    @property
    def m(self) -> int:
        return len(self.codewords)

    @property
    def epsilon(self) -> float:
        return max(0.0, 1.0 - self.reliability)

    def outputs(self) -> list:
        return [apply(self.channel, c) for c in self.codewords]


@dataclass(frozen=True)
class QcCode:
    """Quantum communication code with an explicit recovery split.

    ``correctable`` indexes the Kraus operators of ``channel`` whose
    restriction to the code space is recovered by the decoder; the
    proportionality constant c of decode o N_tilde o encode = c id is
    extracted from the Choi matrix at construction and epsilon = 1 - c.
    """

    encode: Isometry
    decode: QuantumChannel
    channel: QuantumChannel
    correctable: tuple
    n: int
    c: float = field(init=False)

    def __post_init__(self):
        if self.encode.dim_out != self.channel.dim_in:
            raise ValueError("shape error: encoder output does not match channel")
        object.__setattr__(self, "correctable", tuple(int(j) for j in self.correctable))
        kraus = [
            d @ self.channel.kraus[j] @ self.encode.data
            for j in self.correctable
            for d in self.decode.kraus
        ]
        c, residual = proportionality_to_identity(kraus, self.m)
        if residual > PROPORTIONALITY_TOL:
            raise ValueError("invalid cover: recovery split is not proportional to identity")
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.encode.dim_in

    @property
    def epsilon(self) -> float:
        return max(0.0, 1.0 - self.c)

    @property
    def projector(self) -> np.ndarray:
        return self.encode.data @ self.encode.data.conj().T


def proportionality_to_identity(kraus_list, dim: int) -> tuple[float, float]:
    """Constant c and residual of a Kraus-sum map against c * id, via Choi."""
    choi = np.zeros((dim * dim, dim * dim), dtype=complex)
    for k in kraus_list:
        v = np.asarray(k, dtype=complex).reshape(-1)
        choi += np.outer(v, v.conj())
    phi = np.eye(dim, dtype=complex).reshape(-1)
    c = float((phi.conj() @ choi @ phi).real) / dim**2
    residual = float(np.max(np.abs(choi - c * np.outer(phi, phi.conj()))))
    return c, residual


@dataclass(frozen=True)
class EsCode:
    """Entanglement sharing code: Alice's joint input state plus Bob's decoder.

    ``rho`` lives on H^(M) (x) H_A^(x n); the reported fidelity
    F(Phi^(M), rho_tilde) is computed at construction by pushing the A^n
    factor through ``channel`` and then ``decode``.
    """

    m: int
    rho: DensityMatrix
    decode: QuantumChannel
    channel: QuantumChannel
    n: int
    fidelity: float = field(init=False)

    def __post_init__(self):
        if self.rho.dim != self.m * self.channel.dim_in:
            raise ValueError("shape error: joint state does not match M * dim_in")
        to_bob = compose(self.decode, self.channel)
        joint = apply(tensor(identity_channel(self.m), to_bob), self.rho)
        phi = maximally_entangled(self.m)
        f = float((phi.data.conj() @ joint.data @ phi.data).real)
        object.__setattr__(self, "fidelity", min(max(f, 0.0), 1.0))

    @property
    def epsilon(self) -> float:
        return max(0.0, 1.0 - self.fidelity)


@dataclass(frozen=True)
class ResolvabilityCode:
    """K random codebooks over the input alphabet with per-codebook PGM decoders."""

    codebooks: np.ndarray  # shape (K, M), symbol indices
    decoders: tuple  # K Povm instances over the output space
    reliability: float
    distance: float

    @property
    def k(self) -> int:
        return self.codebooks.shape[0]

    @property
    def m(self) -> int:
        return self.codebooks.shape[1]


@dataclass(frozen=True)
class EdCode:
    """One-way entanglement distillation code (encoder cq in C, dim L)."""

    m: int
    l: int
    encode: QuantumChannel  # A -> C (x) A_tilde
    decode: QuantumChannel  # C (x) B -> B_tilde
    distance: float


#: (rho_AB, (dim_a, dim_b), M, L, eps) -> EdCode or None
DistillerOracle = Callable[[DensityMatrix, tuple, int, int, float], Optional[EdCode]]


@dataclass(frozen=True)
class StegoCcCode:
    """Stego classical-communication code built on a CC cover.

    Encoders/POVMs are indexed per key value s (K = 1 and a single POVM for
    the noiseless construction).  Flat message index is (w - 1) * M_bar + w_bar
    in 0-based form w * mbar + wbar.
    """

    mode: str
    n: int
    m: int
    mbar: int
    kbar: int
    encoders: tuple  # kbar entries, each a tuple of m * mbar DensityMatrix
    povms: tuple  # kbar Povm instances
    hashes: tuple  # per-w QuantumHashCode (noiseless) or ResolvabilityCode (noisy)
    eps_cover: float
    zeta_ach: float
    per_w_distance: tuple
    per_w_success: tuple
    distance: float
    decode_prob: float
    key_bits: float
    bound_ok: bool
    warning: bool


@dataclass(frozen=True)
class StegoQcCcCode:
    """Stego quantum+classical code built on a QC_R cover via label twirling."""

    mbar: int
    g: np.ndarray  # hash table over the correctable index set
    d: np.ndarray  # Knill-Laflamme weights
    p_j: np.ndarray
    unitaries: tuple
    encoders: tuple  # mbar channels W -> A^n
    decoder: QuantumChannel  # B^n -> W (x) W_bar
    kl_residual: float
    polar_residual: float
    zeta_ach: float
    eps_cover: float
    c_cover: float
    c_stego: float
    cypher_decode_prob: float
    distance_sup: float
    bound_ok: bool
    warning: bool


@dataclass(frozen=True)
class StegoEsRsCode:
    """Stego entanglement + randomness sharing code built on an ES cover."""

    mbar: int
    p_x: np.ndarray
    f: np.ndarray
    alice_povm: Povm
    bob_povm: Povm
    final_state: DensityMatrix
    fidelity: float
    eps_cover: float
    zeta_ach: float
    b_output_distance: float
    key_agreement: float
    bound_ok: bool
    warning: bool


@dataclass(frozen=True)
class StegoCcEsCode:
    """Stego classical-communication + entanglement-sharing code (CC cover)."""

    mbar: int
    mcc: int
    n1: int
    n2: int
    ed_codes: tuple  # per-w EdCode
    hashes: tuple  # per-w QuantumHashCode on the f2 block
    povms: tuple  # per key s2 (single entry: noiseless sub-protocol)
    classical_reliability: float
    entanglement_distance: float
    distance: float
    key_bits: float
    eps_cover: float
    warning: bool
