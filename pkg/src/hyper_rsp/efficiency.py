"""Resource efficiency of the two protocols, kept in exact rational arithmetic.

The figure of merit is (qubits prepared) / (channel qubits + classical bits).
Both protocols prepare a two-qubit single-photon state over a four-qubit
hyper-entangled channel; they differ only in the classical cost, 2 bits versus
3, so the fractions 1/3 and 2/7 are exact and compared without tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .runtime import PAYLOAD_BITS
from .states import ProtocolKind

TRANSMITTED_QUBITS = 2
CHANNEL_QUBITS = 4


@dataclass(frozen=True)
class EfficiencyInput:
    """Resource counts entering the efficiency figure."""

    transmitted_qubits: int
    channel_qubits: int
    classical_bits: int

    def __post_init__(self) -> None:
        for name, value in (
            ("transmitted_qubits", self.transmitted_qubits),
            ("channel_qubits", self.channel_qubits),
            ("classical_bits", self.classical_bits),
        ):
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
        if self.channel_qubits + self.classical_bits == 0:
            raise ValueError("channel_qubits + classical_bits must be positive")


def efficiency(inputs: EfficiencyInput) -> Fraction:
    """Exact reduced fraction, never floating point."""
    return Fraction(inputs.transmitted_qubits, inputs.channel_qubits + inputs.classical_bits)


def classical_bits(kind: ProtocolKind) -> int:
    """The per-run classical cost, taken from the channel codec's payload width."""
    return PAYLOAD_BITS[kind]


def protocol_inputs(kind: ProtocolKind) -> EfficiencyInput:
    return EfficiencyInput(
        transmitted_qubits=TRANSMITTED_QUBITS,
        channel_qubits=CHANNEL_QUBITS,
        classical_bits=classical_bits(kind),
    )


def protocol_efficiency(kind: ProtocolKind) -> Fraction:
    """1/3 for the polarization-frequency protocol, 2/7 for polarization-time-bin."""
    return efficiency(protocol_inputs(kind))
