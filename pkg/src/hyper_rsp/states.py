"""Labeled-basis state vectors for two photons with heterogeneous degrees of freedom.

A photon is described by an ordered tuple of registers (polarization, frequency,
spatial path, time bin), each with a declared, ordered value set.  A two-photon
state is a sparse map from basis labels, i.e. pairs of per-photon value tuples,
to complex amplitudes:

    |Ψ⟩ = Σ  c(a, b) |a⟩_A |b⟩_B,      Σ |c|² = 1.

The canonical basis order is lexicographic over (photon A registers, then
photon B registers) with each register's values in declaration order; the dense
verification route in :mod:`hyper_rsp.dense` relies on that ordering being
reproducible.

States are immutable; every operation returns a new instance.  Amplitudes with
magnitude below ``PRUNE_TOL`` are dropped, and the squared norm must stay
within ``NORM_TOL`` of one after every element application.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

NORM_TOL = 1e-10
PRUNE_TOL = 1e-14
PARAM_TOL = 1e-12

POLARIZATION = ("H", "V")
FREQUENCY = ("w1", "w2")
TIME_BINS = (0, 1)  # early = 0, late = 1
# Photon A needs one unit of delay headroom for the interferometer stage.
TIME_BINS_WITH_DELAY = (0, 1, 2)

#: A basis label: (photon A values, photon B values), aligned with the schema.
Label = tuple[tuple, tuple]


class SchemaMismatchError(ValueError):
    """Two states (or a state and an operation) disagree on the register layout."""


class UnknownDetectorError(ValueError):
    """Measurement outcome names a polarization or path outside the registry."""


class ProtocolKind(Enum):
    """Which degree-of-freedom pair rides alongside polarization."""

    PF = "pf"  # polarization + frequency
    TB = "tb"  # polarization + time bin

    @classmethod
    def parse(cls, text: str) -> "ProtocolKind":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown protocol {text!r}; expected 'pf' or 'tb'") from None


@dataclass(frozen=True)
class Register:
    """One degree-of-freedom slot: a name and its ordered, finite value set."""

    name: str
    values: tuple

    def __post_init__(self) -> None:
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"register {self.name!r} has duplicate values")
        if not self.values:
            raise ValueError(f"register {self.name!r} has no values")

    def index(self, value) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise ValueError(f"value {value!r} not in register {self.name!r}") from None


def pol_register() -> Register:
    return Register("pol", POLARIZATION)


def freq_register() -> Register:
    return Register("freq", FREQUENCY)


def time_register(values: tuple = TIME_BINS) -> Register:
    if any((not isinstance(v, int)) or v < 0 for v in values):
        raise ValueError("time-bin delays must be non-negative integers")
    return Register("time", tuple(values))


def path_register(paths: Iterable[str]) -> Register:
    return Register("path", tuple(paths))


@dataclass(frozen=True)
class Schema:
    """Fixed register layout of one circuit stage (photon A tuple, photon B tuple)."""

    photon_a: tuple[Register, ...]
    photon_b: tuple[Register, ...]

    def __post_init__(self) -> None:
        for regs in (self.photon_a, self.photon_b):
            names = [r.name for r in regs]
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate register names: {names}")

    def registers(self, photon: str) -> tuple[Register, ...]:
        if photon == "A":
            return self.photon_a
        if photon == "B":
            return self.photon_b
        raise ValueError(f"photon must be 'A' or 'B', got {photon!r}")

    def has_register(self, photon: str, name: str) -> bool:
        return any(r.name == name for r in self.registers(photon))

    def register(self, photon: str, name: str) -> Register:
        for reg in self.registers(photon):
            if reg.name == name:
                return reg
        raise SchemaMismatchError(f"photon {photon} has no {name!r} register")

    def position(self, photon: str, name: str) -> int:
        for i, reg in enumerate(self.registers(photon)):
            if reg.name == name:
                return i
        raise SchemaMismatchError(f"photon {photon} has no {name!r} register")

    def with_register(self, photon: str, register: Register) -> "Schema":
        """Append a register to one photon (explicit schema transform)."""
        if self.has_register(photon, register.name):
            raise SchemaMismatchError(
                f"photon {photon} already has a {register.name!r} register"
            )
        if photon == "A":
            return Schema(self.photon_a + (register,), self.photon_b)
        return Schema(self.photon_a, self.photon_b + (register,))

    def without_register(self, photon: str, name: str) -> "Schema":
        """Drop a register from one photon (explicit schema transform)."""
        pos = self.position(photon, name)
        regs = self.registers(photon)
        trimmed = regs[:pos] + regs[pos + 1 :]
        if photon == "A":
            return Schema(trimmed, self.photon_b)
        return Schema(self.photon_a, trimmed)

    def dimension(self) -> int:
        dim = 1
        for reg in self.photon_a + self.photon_b:
            dim *= len(reg.values)
        return dim

    def labels(self) -> list[Label]:
        """All basis labels in canonical (lexicographic) order."""
        a_axes = [reg.values for reg in self.photon_a]
        b_axes = [reg.values for reg in self.photon_b]
        return [(a, b) for a in product(*a_axes) for b in product(*b_axes)]

    def label_index(self) -> dict[Label, int]:
        return {label: i for i, label in enumerate(self.labels())}

    def validate_label(self, label: Label) -> None:
        a_values, b_values = label
        for values, regs, photon in ((a_values, self.photon_a, "A"), (b_values, self.photon_b, "B")):
            if len(values) != len(regs):
                raise SchemaMismatchError(
                    f"photon {photon} label {values!r} has {len(values)} entries, "
                    f"schema has {len(regs)} registers"
                )
            for value, reg in zip(values, regs):
                if value not in reg.values:
                    raise SchemaMismatchError(
                        f"value {value!r} not allowed in register {reg.name!r}"
                    )

    def format_label(self, label: Label) -> str:
        a_values, b_values = label
        a_txt = ",".join(str(v) for v in a_values) if a_values else "-"
        b_txt = ",".join(str(v) for v in b_values) if b_values else "-"
        if not a_values:
            return f"|{b_txt}>"
        return f"|{a_txt}>A|{b_txt}>B"


@dataclass(frozen=True)
class Outcome:
    """One of the sender's detector results: a polarization on an output path."""

    polarization: str
    path: str

    def __str__(self) -> str:
        return f"{self.polarization}@{self.path}"


@dataclass(frozen=True)
class StateVector:
    """Normalized sparse amplitude map over one schema.  Immutable."""

    schema: Schema
    amplitudes: Mapping[Label, complex]

    @classmethod
    def build(
        cls,
        schema: Schema,
        amplitudes: Mapping[Label, complex],
        normalize: bool = False,
    ) -> "StateVector":
        """Prune tiny amplitudes, validate labels, and enforce unit norm."""
        pruned: dict[Label, complex] = {}
        for label, amp in amplitudes.items():
            amp = complex(amp)
            if abs(amp) < PRUNE_TOL:
                continue
            schema.validate_label(label)
            pruned[label] = amp
        norm_sq = sum(abs(a) ** 2 for a in pruned.values())
        if normalize:
            if norm_sq == 0.0:
                raise ValueError("cannot normalize a zero state")
            scale = 1.0 / math.sqrt(norm_sq)
            pruned = {label: amp * scale for label, amp in pruned.items()}
        elif abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state norm² = {norm_sq!r}, expected 1 within {NORM_TOL}")
        return cls(schema, MappingProxyType(pruned))

    def amplitude(self, label: Label) -> complex:
        return self.amplitudes.get(label, 0j)

    def items(self) -> Iterator[tuple[Label, complex]]:
        return iter(self.amplitudes.items())

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes.values())

    def support(self) -> set[Label]:
        return set(self.amplitudes)

    def __str__(self) -> str:
        parts = [
            f"({amp.real:+.4f}{amp.imag:+.4f}j){self.schema.format_label(label)}"
            for label, amp in sorted(self.amplitudes.items(), key=str)
        ]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TargetParams:
    """The three real coefficient pairs defining the state to be prepared.

    (alpha0, beta0) weights H/V polarization, (alpha1, beta1) the two frequency
    modes, and (alpha2, beta2) the early/late time bins.  Each pair must sit on
    the unit circle within ``PARAM_TOL``; all six values lie in [-1, 1].
    """

    alpha0: float
    beta0: float
    alpha1: float = 1.0
    beta1: float = 0.0
    alpha2: float = 1.0
    beta2: float = 0.0

    def __post_init__(self) -> None:
        for name, alpha, beta in self._pairs():
            for v in (alpha, beta):
                if not -1.0 <= v <= 1.0:
                    raise ValueError(f"{name} coefficient {v!r} outside [-1, 1]")
            r = alpha * alpha + beta * beta
            if abs(r - 1.0) > PARAM_TOL:
                raise ValueError(
                    f"{name} pair ({alpha}, {beta}) not normalized: α²+β² = {r!r}"
                )

    def _pairs(self):
        return (
            ("polarization", self.alpha0, self.beta0),
            ("frequency", self.alpha1, self.beta1),
            ("time-bin", self.alpha2, self.beta2),
        )

    @classmethod
    def for_polarization_frequency(cls, a0, b0, a1, b1) -> "TargetParams":
        return cls(alpha0=a0, beta0=b0, alpha1=a1, beta1=b1)

    @classmethod
    def for_polarization_time_bin(cls, a0, b0, a2, b2) -> "TargetParams":
        return cls(alpha0=a0, beta0=b0, alpha2=a2, beta2=b2)

    @classmethod
    def from_angles(cls, theta_p: float, theta_f: float, theta_t: float) -> "TargetParams":
        """Build from three angles on the real parameter circle."""
        return cls(
            alpha0=math.cos(theta_p),
            beta0=math.sin(theta_p),
            alpha1=math.cos(theta_f),
            beta1=math.sin(theta_f),
            alpha2=math.cos(theta_t),
            beta2=math.sin(theta_t),
        )

    @classmethod
    def random(cls, rng) -> "TargetParams":
        """Draw angles uniformly on [0, 2π), then cos/sin to normalized pairs."""
        angles = rng.uniform(0.0, 2.0 * math.pi, size=3)
        return cls.from_angles(*angles)

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.alpha0, self.beta0, self.alpha1, self.beta1, self.alpha2, self.beta2)


def hyper_bell_schema(kind: ProtocolKind) -> Schema:
    if kind is ProtocolKind.PF:
        return Schema(
            (pol_register(), freq_register()),
            (pol_register(), freq_register()),
        )
    return Schema(
        (pol_register(), time_register(TIME_BINS_WITH_DELAY)),
        (pol_register(), time_register()),
    )


def receiver_schema(kind: ProtocolKind) -> Schema:
    """Schema of the receiver's photon alone (photon A already measured away)."""
    if kind is ProtocolKind.PF:
        return Schema((), (pol_register(), freq_register()))
    return Schema((), (pol_register(), time_register()))


def make_hyper_bell(kind: ProtocolKind) -> StateVector:
    """The shared channel ½(|HH⟩+|VV⟩)(|ω₁ω₁⟩+|ω₂ω₂⟩), or with (|ee⟩+|ll⟩).

    Four nonzero amplitudes, each ½, perfectly correlated in both registers.
    """
    schema = hyper_bell_schema(kind)
    second = FREQUENCY if kind is ProtocolKind.PF else TIME_BINS
    amps = {((p, x), (p, x)): 0.5 for p in POLARIZATION for x in second}
    return StateVector.build(schema, amps)


def make_target(params: TargetParams, kind: ProtocolKind) -> StateVector:
    """The receiver-side product state (α₀|H⟩+β₀|V⟩)(α₁|ω₁⟩+β₁|ω₂⟩) or its time-bin twin."""
    schema = receiver_schema(kind)
    if kind is ProtocolKind.PF:
        second_pair = (params.alpha1, params.beta1)
        second_values = FREQUENCY
    else:
        second_pair = (params.alpha2, params.beta2)
        second_values = TIME_BINS
    pol_pair = (params.alpha0, params.beta0)
    amps = {
        ((), (p, x)): pol_pair[i] * second_pair[j]
        for i, p in enumerate(POLARIZATION)
        for j, x in enumerate(second_values)
    }
    return StateVector.build(schema, amps)


def fidelity(s: StateVector, t: StateVector) -> float:
    """|⟨t|s⟩|² for normalized states; invariant under global phase of either."""
    if s.schema != t.schema:
        raise SchemaMismatchError("fidelity requires matching schemas")
    overlap = 0j
    for label, amp in s.items():
        overlap += t.amplitude(label).conjugate() * amp
    return abs(overlap) ** 2


def project_photon_a(
    state: StateVector, outcome: Outcome
) -> tuple[float, StateVector | None]:
    """Project photon A onto one detector (polarization, path) and collapse.

    Returns (probability, receiver state).  A zero-probability branch is
    reported as (0.0, None) rather than an error, since degenerate parameters
    legitimately empty branches.
    """
    names = sorted(r.name for r in state.schema.photon_a)
    if names != ["path", "pol"]:
        raise SchemaMismatchError(
            f"projective measurement needs photon A in (pol, path) registers, got {names}"
        )
    pol_reg = state.schema.register("A", "pol")
    path_reg = state.schema.register("A", "path")
    if outcome.polarization not in pol_reg.values or outcome.path not in path_reg.values:
        raise UnknownDetectorError(f"no detector for outcome {outcome}")
    i_pol = state.schema.position("A", "pol")
    i_path = state.schema.position("A", "path")

    residual: dict[Label, complex] = {}
    for (a_values, b_values), amp in state.items():
        if a_values[i_pol] == outcome.polarization and a_values[i_path] == outcome.path:
            residual[((), b_values)] = residual.get(((), b_values), 0j) + amp
    probability = sum(abs(a) ** 2 for a in residual.values())
    if not residual or probability == 0.0:
        return 0.0, None
    bob_schema = Schema((), state.schema.photon_b)
    bob = StateVector.build(bob_schema, residual, normalize=True)
    return probability, bob
