"""The two remote-preparation circuits, branch enumeration, and correction maps.

Both circuits act only on the sender's photon A of a shared hyper-entangled
pair and end in a projective polarization measurement on labeled output paths.

Polarization-frequency circuit (four detectors, one per pol x {a1, a2}):

    R_θ  →  wavelength router (ω₁→a1, ω₂→a2)  →  frequency eraser  →
    variable splitter on (a1, a2) with φ/2 picked from (α₁, β₁).

Polarization-time-bin circuit (eight detectors, pol x {kp1..kp4}):

    R_θ  →  entry PBS (H→a2, V→a1)  →  Pockels cells (early on a2, late on a1)
    →  crossing PBS  →  per-path unbalanced interferometers whose long (V) arm
    adds one delay unit and whose arms carry R_θ₁ / R_θ₂  →  the now-uniform
    time register is dropped  →  H↔V flips on k1, k2  →  two 50:50 splitters
    (k1,k4)→(kp1,kp4) and (k2,k3)→(kp2,kp3).

The receiver applies a tabulated two-factor Pauli correction keyed on the
announced outcome; `derive_correction` re-derives that table by exhaustive
search over all 16 candidates and is the oracle the hard-coded map is tested
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elements import (
    BalancedSplitter,
    DropUniformRegister,
    Element,
    FrequencyEraser,
    HalfWavePlate,
    LongArmDelay,
    PauliOp,
    PauliString,
    PockelsCell,
    PolarizationRotation,
    PolarizingRouter,
    UnbalancedSplitter,
    WavelengthRouter,
    all_pauli_strings,
)
from .states import (
    Outcome,
    ProtocolKind,
    StateVector,
    TargetParams,
    UnknownDetectorError,
    fidelity,
    make_hyper_bell,
    make_target,
    project_photon_a,
)

FIDELITY_TOL = 1e-10

PF_PATHS = ("a1", "a2")
TB_PATHS = ("a1", "a2", "k1", "k2", "k3", "k4", "kp1", "kp2", "kp3", "kp4")

PF_DETECTOR_PATHS = ("a1", "a2")
TB_DETECTOR_PATHS = ("kp1", "kp2", "kp3", "kp4")


class CorrectionNotFoundError(RuntimeError):
    """No Pauli correction reaches the target: a table/convention inconsistency."""


def outcome_registry(kind: ProtocolKind) -> tuple[Outcome, ...]:
    """All detector outcomes, in classical-message code order."""
    paths = PF_DETECTOR_PATHS if kind is ProtocolKind.PF else TB_DETECTOR_PATHS
    return tuple(Outcome(pol, path) for pol in ("H", "V") for path in paths)


def rotation_angle(alpha: float, beta: float) -> float:
    """Rotation angle realizing (cosθ, sinθ) = (α, β).

    Equals arccos(α) whenever β ≥ 0; the atan2 form extends the construction
    to negative β, which a bare arccos cannot reach.
    """
    return math.atan2(beta, alpha)


def build_circuit(kind: ProtocolKind, params: TargetParams) -> tuple[Element, ...]:
    """The ordered element list photon A traverses before detection."""
    theta = rotation_angle(params.alpha0, params.beta0)
    if kind is ProtocolKind.PF:
        phi = 2.0 * rotation_angle(params.alpha1, params.beta1)
        return (
            PolarizationRotation("A", theta),
            WavelengthRouter("A", {"w1": "a1", "w2": "a2"}, PF_PATHS),
            FrequencyEraser("A", {"a1": "w1", "a2": "w2"}),
            UnbalancedSplitter("A", ("a1", "a2"), phi),
        )
    theta1 = rotation_angle(params.alpha2, params.beta2)
    theta2 = theta1 - math.pi / 2.0
    return (
        PolarizationRotation("A", theta),
        # Entry PBS: transmit H to a2, reflect V to a1.
        PolarizingRouter("A", {"H": "a2", "V": "a1"}, registry=TB_PATHS),
        PockelsCell("A", paths=("a2",), time_value=0),
        PockelsCell("A", paths=("a1",), time_value=1),
        # Crossing PBS: H swaps paths, V stays.
        PolarizingRouter("A", {("H", "a1"): "a2", ("V", "a1"): "a1",
                               ("H", "a2"): "a1", ("V", "a2"): "a2"}),
        # Interferometer entries: short (H) arm k1/k4, long (V) arm k2/k3.
        PolarizingRouter("A", {("H", "a1"): "k1", ("V", "a1"): "k2"}),
        PolarizingRouter("A", {("H", "a2"): "k4", ("V", "a2"): "k3"}),
        LongArmDelay("A", "k2", "V"),
        LongArmDelay("A", "k3", "V"),
        PolarizationRotation("A", theta1, paths=("k1", "k4")),
        PolarizationRotation("A", theta2, paths=("k2", "k3")),
        # Interferometer exits: H transmits straight, V crosses arms.
        PolarizingRouter("A", {("H", "k1"): "k1", ("V", "k1"): "k2",
                               ("H", "k2"): "k2", ("V", "k2"): "k1"}),
        PolarizingRouter("A", {("H", "k3"): "k3", ("V", "k3"): "k4",
                               ("H", "k4"): "k4", ("V", "k4"): "k3"}),
        # Both arms now sit in the same bin; the mark carries no information.
        DropUniformRegister("A", "time", expected_value=1),
        HalfWavePlate("A", ("k1",)),
        HalfWavePlate("A", ("k2",)),
        BalancedSplitter("A", ("k1", "k4"), ("kp1", "kp4")),
        BalancedSplitter("A", ("k2", "k3"), ("kp2", "kp3")),
    )


def evolve(kind: ProtocolKind, params: TargetParams) -> StateVector:
    """The pre-measurement state: the hyper-entangled pair through the circuit."""
    state = make_hyper_bell(kind)
    for element in build_circuit(kind, params):
        state = element.apply(state)
    return state


# Correction tables keyed by (polarization, detector path).
_PF_CORRECTIONS = {
    ("H", "a1"): (("pol", "sz"), ("freq", "sz")),
    ("H", "a2"): (("pol", "sz"), ("freq", "sx")),
    ("V", "a1"): (("pol", "sx"), ("freq", "sz")),
    ("V", "a2"): (("pol", "sx"), ("freq", "sx")),
}

_TB_CORRECTIONS = {
    ("H", "kp1"): (("pol", "sx"), ("time", "sx")),
    ("H", "kp2"): (("pol", "sz"), ("time", "I")),
    ("H", "kp3"): (("pol", "sz"), ("time", "sz")),
    ("H", "kp4"): (("pol", "sx"), ("time", "isy")),
    ("V", "kp1"): (("pol", "sz"), ("time", "sx")),
    ("V", "kp2"): (("pol", "sx"), ("time", "I")),
    ("V", "kp3"): (("pol", "sx"), ("time", "sz")),
    ("V", "kp4"): (("pol", "sz"), ("time", "isy")),
}


def correction_table(kind: ProtocolKind, outcome: Outcome) -> PauliString:
    """The receiver's tabulated correction for one announced outcome."""
    table = _PF_CORRECTIONS if kind is ProtocolKind.PF else _TB_CORRECTIONS
    key = (outcome.polarization, outcome.path)
    if key not in table:
        raise UnknownDetectorError(f"no correction tabulated for outcome {outcome}")
    return PauliString(table[key])


@dataclass(frozen=True)
class BranchReport:
    """One measurement branch: outcome, weight, and the receiver states."""

    outcome: Outcome
    probability: float
    bob_state_pre: StateVector
    correction: PauliString
    bob_state_post: StateVector
    fidelity_post: float


def run_protocol(kind: ProtocolKind, params: TargetParams) -> tuple[BranchReport, ...]:
    """Enumerate every detector outcome of the finished circuit exactly.

    Each branch's collapsed receiver state is corrected by the tabulated
    operator and scored against the target; an ideal run reports fidelity 1 on
    every branch.
    """
    final = evolve(kind, params)
    target = make_target(params, kind)
    reports = []
    for outcome in outcome_registry(kind):
        probability, bob_pre = project_photon_a(final, outcome)
        if bob_pre is None:
            raise RuntimeError(f"branch {outcome} unexpectedly empty")
        correction = correction_table(kind, outcome)
        bob_post = PauliOp("B", correction).apply(bob_pre)
        reports.append(
            BranchReport(
                outcome=outcome,
                probability=probability,
                bob_state_pre=bob_pre,
                correction=correction,
                bob_state_post=bob_post,
                fidelity_post=fidelity(bob_post, target),
            )
        )
    return tuple(reports)


@dataclass(frozen=True)
class CorrectionSearch:
    """Outcome of the exhaustive 16-way correction search."""

    matches: tuple[PauliString, ...]

    @property
    def operator(self) -> PauliString:
        return self.matches[0]

    @property
    def ambiguous(self) -> bool:
        return len(self.matches) > 1


def derive_correction(bob_state: StateVector, target: StateVector) -> CorrectionSearch:
    """Search all 16 two-factor corrections for ones reaching the target.

    Returns every candidate with fidelity 1 within tolerance, in a fixed
    enumeration order; at generic parameters exactly one survives.  Raises
    :class:`CorrectionNotFoundError` when none does, which signals an
    inconsistent table or sign convention rather than a sampling fluke.
    """
    if bob_state.schema != target.schema:
        raise ValueError("collapsed state and target must share one schema")
    register_names = tuple(r.name for r in target.schema.photon_b)
    if len(register_names) != 2:
        raise ValueError("correction search expects a two-register receiver photon")
    matches = []
    for candidate in all_pauli_strings(register_names):
        corrected = PauliOp("B", candidate).apply(bob_state)
        if fidelity(corrected, target) >= 1.0 - FIDELITY_TOL:
            matches.append(candidate)
    if not matches:
        raise CorrectionNotFoundError(
            "no two-factor Pauli correction maps the collapsed state onto the target"
        )
    return CorrectionSearch(tuple(matches))
