"""Stochastic execution: sampled outcomes, detector loss, and the classical channel.

The classical message carries the measurement outcome as a small code: 2 payload
bits for the four-detector protocol, 3 for the eight-detector one.  On the wire
a message is a fixed 3-byte little-endian frame [version][protocol][code]; the
2-/3-bit payload width is the accounting figure used by the efficiency module.

Randomness contract: all sampling uses numpy's Philox 4x64 counter-based
generator.  Trials are processed in fixed chunks of ``CHUNK_TRIALS``; chunk
``c`` of a run seeded with ``s`` draws from ``Philox(key=[s, c])``, so every
chunk's trials are a pure function of (seed, chunk index).  Results are
identical across platforms and independent of how chunks are distributed over
workers.  Each trial consumes three uniforms, in column order: outcome draw,
sender's detector, receiver's detector.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .protocols import BranchReport, run_protocol
from .states import Outcome, ProtocolKind, StateVector, TargetParams, UnknownDetectorError

WIRE_VERSION = 1
CHUNK_TRIALS = 1 << 14

PROTOCOL_CODES = {ProtocolKind.PF: 0, ProtocolKind.TB: 1}
_CODE_TO_PROTOCOL = {code: kind for kind, code in PROTOCOL_CODES.items()}

#: payload bits per message: ceil(log2(registry size))
PAYLOAD_BITS = {ProtocolKind.PF: 2, ProtocolKind.TB: 3}

_PF_PATH_ORDER = ("a1", "a2")
_TB_PATH_ORDER = ("kp1", "kp2", "kp3", "kp4")


@dataclass(frozen=True)
class ChannelMessage:
    """One classical announcement from sender to receiver."""

    version: int
    protocol: ProtocolKind
    outcome_code: int


@dataclass(frozen=True)
class SampleStats:
    """Aggregate of one post-selected sampling run."""

    protocol: ProtocolKind
    eta_d: float
    trials: int
    detected: int
    success_rate: float
    mean_fidelity_on_detected: float
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.detected <= self.trials:
            raise ValueError(f"detected {self.detected} outside [0, {self.trials}]")
        if self.success_rate != self.detected / self.trials:
            raise ValueError("success_rate must equal detected/trials")


def encode_outcome(kind: ProtocolKind, outcome: Outcome) -> ChannelMessage:
    """PF: code = 2·[pol=V] + [path=a2]; TB: code = 4·[pol=V] + path index."""
    paths = _PF_PATH_ORDER if kind is ProtocolKind.PF else _TB_PATH_ORDER
    if outcome.polarization not in ("H", "V") or outcome.path not in paths:
        raise UnknownDetectorError(f"outcome {outcome} not in the {kind.value} registry")
    code = len(paths) * int(outcome.polarization == "V") + paths.index(outcome.path)
    return ChannelMessage(WIRE_VERSION, kind, code)


def decode_outcome(message: ChannelMessage) -> Outcome:
    paths = _PF_PATH_ORDER if message.protocol is ProtocolKind.PF else _TB_PATH_ORDER
    if not 0 <= message.outcome_code < 2 * len(paths):
        raise ValueError(f"outcome code {message.outcome_code} out of range")
    polarization = "V" if message.outcome_code >= len(paths) else "H"
    return Outcome(polarization, paths[message.outcome_code % len(paths)])


def message_to_bytes(message: ChannelMessage) -> bytes:
    """Fixed 3-byte little-endian frame [version][protocol][outcome_code]."""
    return bytes((message.version, PROTOCOL_CODES[message.protocol], message.outcome_code))


def message_from_bytes(frame: bytes) -> ChannelMessage:
    if len(frame) != 3:
        raise ValueError(f"expected a 3-byte frame, got {len(frame)} bytes")
    version, protocol_code, outcome_code = frame
    if version != WIRE_VERSION:
        raise ValueError(f"unsupported wire version {version}")
    if protocol_code not in _CODE_TO_PROTOCOL:
        raise ValueError(f"unknown protocol code {protocol_code}")
    kind = _CODE_TO_PROTOCOL[protocol_code]
    message = ChannelMessage(version, kind, outcome_code)
    decode_outcome(message)  # range check
    return message


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """The documented per-chunk stream: Philox keyed by (seed, chunk index)."""
    key = np.array([seed & (2**64 - 1), chunk_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class BranchSampler:
    """Exact branch table of one protocol, ready for repeated outcome draws."""

    def __init__(self, kind: ProtocolKind, params: TargetParams):
        self.kind = kind
        self.params = params
        self.branches: tuple[BranchReport, ...] = run_protocol(kind, params)
        cumulative = []
        total = 0.0
        for branch in self.branches:
            total += branch.probability
            cumulative.append(total)
        self._cumulative = cumulative

    def draw(self, rng: np.random.Generator) -> BranchReport:
        u = float(rng.random())
        index = bisect.bisect_right(self._cumulative, u)
        return self.branches[min(index, len(self.branches) - 1)]

    def draw_many(self, uniforms: np.ndarray) -> np.ndarray:
        """Vectorized branch indices for an array of uniforms in [0, 1)."""
        return np.minimum(
            np.searchsorted(self._cumulative, uniforms, side="right"),
            len(self.branches) - 1,
        )


def sample_run(
    kind: ProtocolKind, params: TargetParams, rng: np.random.Generator
) -> tuple[Outcome, StateVector]:
    """Draw one measurement outcome and return it with the corrected receiver state."""
    branch = BranchSampler(kind, params).draw(rng)
    return branch.outcome, branch.bob_state_post


def sample_with_loss(
    kind: ProtocolKind,
    params: TargetParams,
    eta_d: float,
    trials: int,
    seed: int,
) -> SampleStats:
    """Post-selected sampling with detector efficiency ``eta_d``.

    A trial is detected only when both parties' detectors fire, two independent
    Bernoulli(η_d) draws, so the detection rate estimates η_d².  Conditioned on
    detection the protocol is unchanged: the recorded fidelity per detected
    trial is the exact branch fidelity, which is 1 for the ideal circuits.
    """
    if not 0.0 <= eta_d <= 1.0:
        raise ValueError(f"detector efficiency must lie in [0, 1], got {eta_d}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    sampler = BranchSampler(kind, params)
    fidelities = np.array([b.fidelity_post for b in sampler.branches])
    detected = 0
    fidelity_sum = 0.0
    for chunk_index in range(math.ceil(trials / CHUNK_TRIALS)):
        start = chunk_index * CHUNK_TRIALS
        count = min(CHUNK_TRIALS, trials - start)
        rng = chunk_generator(seed, chunk_index)
        u = rng.random((count, 3))
        indices = sampler.draw_many(u[:, 0])
        clicks = (u[:, 1] < eta_d) & (u[:, 2] < eta_d)
        detected += int(clicks.sum())
        fidelity_sum += float(fidelities[indices[clicks]].sum())
    mean_fidelity = fidelity_sum / detected if detected else float("nan")
    return SampleStats(
        protocol=kind,
        eta_d=eta_d,
        trials=trials,
        detected=detected,
        success_rate=detected / trials,
        mean_fidelity_on_detected=mean_fidelity,
        seed=seed,
    )
