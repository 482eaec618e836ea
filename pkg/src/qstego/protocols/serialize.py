"""Versioned text serialization for protocol instances.

Line-oriented nested key/value format: scalars as ``<type> <key> <value>``,
complex matrices row-major with base-10 entries (one ``(re+imj)`` token per
entry, full row per line).  Keys nest with dots.  No binary content, so the
files diff cleanly and serve as golden fixtures.
"""

from __future__ import annotations

import numpy as np

from ..channels import Isometry, QuantumChannel
from ..linalg import DensityMatrix, HermitianOperator, Povm
from .codes import CcCode, EsCode, QcCode, ResolvabilityCode, StegoCcCode

HEADER = "qstego-protocol-text 1"


def _emit(lines, key, value):
    if isinstance(value, bool):
        lines.append(f"bool {key} {int(value)}")
    elif isinstance(value, (int, np.integer)):
        lines.append(f"int {key} {int(value)}")
    elif isinstance(value, (float, np.floating)):
        lines.append(f"float {key} {float(value)!r}")
    elif isinstance(value, str):
        lines.append(f"str {key} {value}")
    elif isinstance(value, np.ndarray) and value.dtype.kind in "iu":
        lines.append(f"ints {key} " + " ".join(str(int(x)) for x in value.reshape(-1)))
    elif isinstance(value, np.ndarray):
        mat = np.atleast_2d(np.asarray(value, dtype=complex))
        lines.append(f"matrix {key} {mat.shape[0]} {mat.shape[1]}")
        for row in mat:
            lines.append(" ".join(repr(complex(z)) for z in row))
    elif isinstance(value, DensityMatrix):
        _emit(lines, key, value.data)
    elif isinstance(value, HermitianOperator):
        _emit(lines, key, value.data)
    elif isinstance(value, Povm):
        _emit(lines, key + ".len", len(value))
        for i, e in enumerate(value.elements):
            _emit(lines, f"{key}.{i}", e.data)
    elif isinstance(value, (QuantumChannel,)):
        _emit(lines, key + ".len", len(value.kraus))
        for i, k in enumerate(value.kraus):
            _emit(lines, f"{key}.{i}", k)
    elif isinstance(value, Isometry):
        _emit(lines, key, value.data)
    elif isinstance(value, (tuple, list)):
        _emit(lines, key + ".len", len(value))
        for i, item in enumerate(value):
            _emit(lines, f"{key}.{i}", item)
    else:
        raise ValueError(f"bad parameter: cannot serialize {type(value).__name__}")


class _Reader:
    def __init__(self, text: str):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != HEADER:
            raise ValueError("shape error: not a qstego protocol text")
        self.kind = lines[1].split(" ", 1)[1]
        self.items: dict = {}
        i = 2
        while i < len(lines):
            tag, rest = lines[i].split(" ", 1)
            if tag == "matrix":
                key, rows, cols = rest.rsplit(" ", 2)
                rows, cols = int(rows), int(cols)
                data = [
                    [complex(tok) for tok in lines[i + 1 + r].split()] for r in range(rows)
                ]
                self.items[key] = np.array(data, dtype=complex)
                i += 1 + rows
            else:
                key, value = rest.split(" ", 1)
                if tag == "int":
                    self.items[key] = int(value)
                elif tag == "bool":
                    self.items[key] = bool(int(value))
                elif tag == "float":
                    self.items[key] = float(value)
                elif tag == "ints":
                    self.items[key] = np.array([int(t) for t in value.split()], dtype=int)
                elif tag == "str":
                    self.items[key] = value
                else:
                    raise ValueError(f"shape error: unknown tag {tag!r}")
                i += 1

    def seq(self, key):
        return [self.items_at(f"{key}.{i}") for i in range(self.items[key + ".len"])]

    def items_at(self, key):
        return self.items[key]


def _channel_payload(lines, key, ch: QuantumChannel):
    _emit(lines, key, ch)


def to_text(obj) -> str:
    lines = [HEADER]
    if isinstance(obj, CcCode):
        lines.append("kind cc_code")
        _emit(lines, "n", obj.n)
        _emit(lines, "codewords", list(obj.codewords))
        _emit(lines, "povm", obj.povm)
        _channel_payload(lines, "channel", obj.channel)
    elif isinstance(obj, QcCode):
        lines.append("kind qc_code")
        _emit(lines, "n", obj.n)
        _emit(lines, "encode", obj.encode)
        _emit(lines, "decode", obj.decode)
        _channel_payload(lines, "channel", obj.channel)
        _emit(lines, "correctable", np.array(obj.correctable, dtype=int))
    elif isinstance(obj, EsCode):
        lines.append("kind es_code")
        _emit(lines, "n", obj.n)
        _emit(lines, "m", obj.m)
        _emit(lines, "rho", obj.rho)
        _emit(lines, "decode", obj.decode)
        _channel_payload(lines, "channel", obj.channel)
    elif isinstance(obj, ResolvabilityCode):
        lines.append("kind resolvability_code")
        _emit(lines, "codebooks", obj.codebooks)
        _emit(lines, "decoders", list(obj.decoders))
        _emit(lines, "reliability", obj.reliability)
        _emit(lines, "distance", obj.distance)
    elif isinstance(obj, StegoCcCode):
        lines.append("kind stego_cc_code")
        for key in ("mode",):
            _emit(lines, key, obj.mode)
        for key in ("n", "m", "mbar", "kbar"):
            _emit(lines, key, getattr(obj, key))
        _emit(lines, "encoders", [list(enc) for enc in obj.encoders])
        _emit(lines, "povms", list(obj.povms))
        for key in (
            "eps_cover",
            "zeta_ach",
            "distance",
            "decode_prob",
            "key_bits",
        ):
            _emit(lines, key, getattr(obj, key))
        _emit(lines, "per_w_distance", np.array(obj.per_w_distance))
        _emit(lines, "per_w_success", np.array(obj.per_w_success))
        _emit(lines, "bound_ok", obj.bound_ok)
        _emit(lines, "warning", obj.warning)
    else:
        raise ValueError(f"bad parameter: cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def from_text(text: str):
    r = _Reader(text)
    if r.kind == "cc_code":
        return CcCode(
            codewords=tuple(DensityMatrix(m) for m in r.seq("codewords")),
            povm=Povm(tuple(HermitianOperator(m) for m in r.seq("povm"))),
            channel=QuantumChannel(tuple(r.seq("channel"))),
            n=r.items["n"],
        )
    if r.kind == "qc_code":
        return QcCode(
            encode=Isometry(r.items["encode"]),
            decode=QuantumChannel(tuple(r.seq("decode"))),
            channel=QuantumChannel(tuple(r.seq("channel"))),
            correctable=tuple(int(j) for j in r.items["correctable"]),
            n=r.items["n"],
        )
    if r.kind == "es_code":
        return EsCode(
            m=r.items["m"],
            rho=DensityMatrix(r.items["rho"]),
            decode=QuantumChannel(tuple(r.seq("decode"))),
            channel=QuantumChannel(tuple(r.seq("channel"))),
            n=r.items["n"],
        )
    if r.kind == "resolvability_code":
        books = r.items["codebooks"]
        k = r.items["decoders.len"]
        m = books.size // k
        decoders = tuple(
            Povm(tuple(HermitianOperator(mat) for mat in r.seq(f"decoders.{s}")))
            for s in range(k)
        )
        return ResolvabilityCode(
            codebooks=books.reshape(k, m),
            decoders=decoders,
            reliability=r.items["reliability"],
            distance=r.items["distance"],
        )
    if r.kind == "stego_cc_code":
        kbar = r.items["encoders.len"]
        encoders = tuple(
            tuple(DensityMatrix(mat) for mat in r.seq(f"encoders.{s}")) for s in range(kbar)
        )
        povms = tuple(
            Povm(tuple(HermitianOperator(mat) for mat in r.seq(f"povms.{s}")))
            for s in range(kbar)
        )
        return StegoCcCode(
            mode=r.items["mode"],
            n=r.items["n"],
            m=r.items["m"],
            mbar=r.items["mbar"],
            kbar=r.items["kbar"],
            encoders=encoders,
            povms=povms,
            hashes=(),
            eps_cover=r.items["eps_cover"],
            zeta_ach=r.items["zeta_ach"],
            per_w_distance=tuple(float(x) for x in np.atleast_2d(r.items["per_w_distance"])[0].real),
            per_w_success=tuple(float(x) for x in np.atleast_2d(r.items["per_w_success"])[0].real),
            distance=r.items["distance"],
            decode_prob=r.items["decode_prob"],
            key_bits=r.items["key_bits"],
            bound_ok=r.items["bound_ok"],
            warning=r.items["warning"],
        )
    raise ValueError(f"shape error: unknown protocol kind {r.kind!r}")
