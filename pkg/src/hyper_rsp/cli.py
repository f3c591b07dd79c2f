"""Command-line front end: verification, sampling, and efficiency reports.

    hyper-rsp verify --protocol pf --params 0.6 0.8 0.28 0.96
    hyper-rsp sample --protocol tb --params random --seed 7 --eta-d 0.8 --trials 100000
    hyper-rsp efficiency --format json

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
Reports are emitted as json, csv, or an aligned table; amplitudes are printed
as (re, im) pairs with 12 significant digits in canonical basis order, so
emitted JSON re-parses to bit-identical numbers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from .efficiency import protocol_efficiency, protocol_inputs
from .protocols import (
    FIDELITY_TOL,
    BranchReport,
    derive_correction,
    run_protocol,
)
from .runtime import chunk_generator, encode_outcome, sample_with_loss
from .states import ProtocolKind, StateVector, TargetParams, make_target

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

#: Philox stream index reserved for drawing random target parameters.
PARAMS_STREAM = 2**32


@dataclass(frozen=True)
class RunConfig:
    protocol: ProtocolKind
    params: TargetParams
    trials: int
    eta_d: float
    seed: int
    fmt: str
    output: str | None


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _state_amplitudes(state: StateVector) -> list[list[float]]:
    """Canonical-order (re, im) pairs, 12 significant digits."""
    return [
        [_round12(amp.real), _round12(amp.imag)]
        for amp in (state.amplitude(label) for label in state.schema.labels())
    ]


def _state_text(state: StateVector) -> str:
    pairs = _state_amplitudes(state)
    return " ".join(f"({re:g},{im:g})" for re, im in pairs)


def _params_dict(params: TargetParams) -> dict:
    keys = ("alpha0", "beta0", "alpha1", "beta1", "alpha2", "beta2")
    return {k: _round12(v) for k, v in zip(keys, params.as_tuple())}


def random_params(seed: int) -> TargetParams:
    """Reproducible random target: three angles from the documented generator."""
    return TargetParams.random(chunk_generator(seed, PARAMS_STREAM))


def parse_params(tokens: list[str], protocol: ProtocolKind, seed: int) -> TargetParams:
    """Four per-protocol values, all six, or the literal ``random``."""
    if len(tokens) == 1 and tokens[0].lower() == "random":
        return random_params(seed)
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"bad parameter value: {exc}") from None
    if len(values) == 6:
        return TargetParams(*values)
    if len(values) == 4:
        if protocol is ProtocolKind.PF:
            return TargetParams.for_polarization_frequency(*values)
        return TargetParams.for_polarization_time_bin(*values)
    raise ValueError(
        f"--params takes 4 values (per-protocol pairs), 6 values, or 'random'; got {len(values)}"
    )


# ---------------------------------------------------------------------------
# report builders


def _branch_entry(kind: ProtocolKind, branch: BranchReport, consistent: bool) -> dict:
    return {
        "outcome": {
            "polarization": branch.outcome.polarization,
            "path": branch.outcome.path,
        },
        "code": encode_outcome(kind, branch.outcome).outcome_code,
        "probability": _round12(branch.probability),
        "bob_state_pre": _state_amplitudes(branch.bob_state_pre),
        "correction": branch.correction.compact(),
        "bob_state_post": _state_amplitudes(branch.bob_state_post),
        "fidelity_post": _round12(branch.fidelity_post),
        "correction_consistent": consistent,
    }


def verify_report(kind: ProtocolKind, params: TargetParams) -> dict:
    branches = run_protocol(kind, params)
    target = make_target(params, kind)
    entries = []
    first_failure = None
    for branch in branches:
        search = derive_correction(branch.bob_state_pre, target)
        consistent = branch.correction in search.matches
        ok = consistent and branch.fidelity_post >= 1.0 - FIDELITY_TOL
        if not ok and first_failure is None:
            first_failure = str(branch.outcome)
        entries.append(_branch_entry(kind, branch, consistent))
    basis = [branches[0].bob_state_pre.schema.format_label(label)
             for label in branches[0].bob_state_pre.schema.labels()]
    return {
        "protocol": kind.value,
        "params": _params_dict(params),
        "bob_basis": basis,
        "branches": entries,
        "all_pass": first_failure is None,
        "first_failure": first_failure,
    }


def sample_report(config: RunConfig) -> dict:
    stats = sample_with_loss(
        config.protocol, config.params, config.eta_d, config.trials, config.seed
    )
    mean_fid = stats.mean_fidelity_on_detected
    return {
        "protocol": config.protocol.value,
        "params": _params_dict(config.params),
        "stats": {
            "eta_d": _round12(stats.eta_d),
            "trials": stats.trials,
            "detected": stats.detected,
            "success_rate": _round12(stats.success_rate),
            "mean_fidelity_on_detected": None if math.isnan(mean_fid) else _round12(mean_fid),
            "seed": stats.seed,
        },
    }


def efficiency_report() -> dict:
    protocols = {}
    for kind in (ProtocolKind.PF, ProtocolKind.TB):
        fraction = protocol_efficiency(kind)
        inputs = protocol_inputs(kind)
        protocols[kind.value] = {
            "efficiency": str(fraction),
            "numerator": fraction.numerator,
            "denominator": fraction.denominator,
            "transmitted_qubits": inputs.transmitted_qubits,
            "channel_qubits": inputs.channel_qubits,
            "classical_bits": inputs.classical_bits,
        }
    return {"protocols": protocols}


# ---------------------------------------------------------------------------
# renderers


def _verify_table(report: dict) -> str:
    lines = [
        f"protocol {report['protocol']}  params "
        + " ".join(f"{k}={v:g}" for k, v in report["params"].items()),
        f"bob basis: {'  '.join(report['bob_basis'])}",
        f"{'outcome':<8}{'code':<6}{'probability':<14}{'correction':<12}"
        f"{'fidelity':<10}{'consistent'}",
    ]
    for entry in report["branches"]:
        outcome = f"{entry['outcome']['polarization']}@{entry['outcome']['path']}"
        lines.append(
            f"{outcome:<8}{entry['code']:<6}{entry['probability']:<14g}"
            f"{entry['correction']:<12}{entry['fidelity_post']:<10g}"
            f"{'yes' if entry['correction_consistent'] else 'NO'}"
        )
        pre = " ".join(f"({re:g},{im:g})" for re, im in entry["bob_state_pre"])
        post = " ".join(f"({re:g},{im:g})" for re, im in entry["bob_state_post"])
        lines.append(f"    pre:  {pre}")
        lines.append(f"    post: {post}")
    if report["all_pass"]:
        lines.append("verdict: PASS")
    else:
        lines.append(f"verdict: FAIL (first failing row: {report['first_failure']})")
    return "\n".join(lines) + "\n"


def _verify_csv(report: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(
        ["protocol", "polarization", "path", "code", "probability",
         "correction", "fidelity_post", "correction_consistent",
         "bob_state_pre", "bob_state_post"]
    )
    for entry in report["branches"]:
        writer.writerow(
            [
                report["protocol"],
                entry["outcome"]["polarization"],
                entry["outcome"]["path"],
                entry["code"],
                f"{entry['probability']:.12g}",
                entry["correction"],
                f"{entry['fidelity_post']:.12g}",
                entry["correction_consistent"],
                " ".join(f"{re:.12g},{im:.12g}" for re, im in entry["bob_state_pre"]),
                " ".join(f"{re:.12g},{im:.12g}" for re, im in entry["bob_state_post"]),
            ]
        )
    return buffer.getvalue()


def _sample_table(report: dict) -> str:
    stats = report["stats"]
    mean_fid = stats["mean_fidelity_on_detected"]
    return (
        f"protocol {report['protocol']}  params "
        + " ".join(f"{k}={v:g}" for k, v in report["params"].items())
        + "\n"
        + f"eta_d {stats['eta_d']:g}  trials {stats['trials']}  detected {stats['detected']}\n"
        + f"success_rate {stats['success_rate']:.12g}\n"
        + "mean_fidelity_on_detected "
        + ("n/a" if mean_fid is None else f"{mean_fid:.12g}")
        + f"\nseed {stats['seed']}\n"
    )


def _sample_csv(report: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    stats = report["stats"]
    writer.writerow(
        ["protocol", "eta_d", "trials", "detected", "success_rate",
         "mean_fidelity_on_detected", "seed"]
    )
    writer.writerow(
        [report["protocol"], f"{stats['eta_d']:.12g}", stats["trials"], stats["detected"],
         f"{stats['success_rate']:.12g}",
         "" if stats["mean_fidelity_on_detected"] is None
         else f"{stats['mean_fidelity_on_detected']:.12g}",
         stats["seed"]]
    )
    return buffer.getvalue()


def _efficiency_table(report: dict) -> str:
    lines = []
    for name, entry in report["protocols"].items():
        lines.append(
            f"{name} {entry['efficiency']}  "
            f"(qubits prepared {entry['transmitted_qubits']}, "
            f"channel qubits {entry['channel_qubits']}, "
            f"classical bits {entry['classical_bits']})"
        )
    return "\n".join(lines) + "\n"


def _efficiency_csv(report: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(
        ["protocol", "efficiency", "numerator", "denominator",
         "transmitted_qubits", "channel_qubits", "classical_bits"]
    )
    for name, entry in report["protocols"].items():
        writer.writerow(
            [name, entry["efficiency"], entry["numerator"], entry["denominator"],
             entry["transmitted_qubits"], entry["channel_qubits"], entry["classical_bits"]]
        )
    return buffer.getvalue()


def _render(report: dict, fmt: str, table_renderer, csv_renderer) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        return csv_renderer(report)
    return table_renderer(report)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(parser: argparse.ArgumentParser, with_protocol: bool = True) -> None:
    if with_protocol:
        parser.add_argument("--protocol", required=True, choices=["pf", "tb"])
        parser.add_argument(
            "--params",
            required=True,
            nargs="+",
            help="four per-protocol values, six values, or 'random'",
        )
        parser.add_argument("--seed", type=int, default=0,
                            help="seed for sampling and for 'random' params")
    parser.add_argument("--format", dest="fmt", choices=["json", "csv", "table"],
                        default="table")
    parser.add_argument("--output", default=None, help="write the report to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyper-rsp",
        description="Simulate and verify remote preparation of single-photon "
        "two-qubit states over hyper-entangled channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="enumerate all branches and check corrections")
    _add_common(verify)

    sample = sub.add_parser("sample", help="post-selected sampling with detector loss")
    _add_common(sample)
    sample.add_argument("--eta-d", type=float, default=1.0,
                        help="single-photon detector efficiency in [0, 1]")
    sample.add_argument("--trials", type=int, default=10000)

    eff = sub.add_parser("efficiency", help="exact efficiency fractions and bit costs")
    _add_common(eff, with_protocol=False)

    return parser


def _build_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    protocol = ProtocolKind.parse(args.protocol)
    try:
        params = parse_params(args.params, protocol, args.seed)
    except ValueError as exc:
        parser.error(str(exc))
    return RunConfig(
        protocol=protocol,
        params=params,
        trials=getattr(args, "trials", 0),
        eta_d=getattr(args, "eta_d", 1.0),
        seed=args.seed,
        fmt=args.fmt,
        output=args.output,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "efficiency":
        _emit(_render(efficiency_report(), args.fmt, _efficiency_table, _efficiency_csv),
              args.output)
        return EXIT_OK

    config = _build_config(args, parser)

    if args.command == "verify":
        report = verify_report(config.protocol, config.params)
        _emit(_render(report, config.fmt, _verify_table, _verify_csv), config.output)
        return EXIT_OK if report["all_pass"] else EXIT_VERIFY_FAILED

    if args.command == "sample":
        if config.trials < 1:
            parser.error(f"--trials must be positive, got {config.trials}")
        if not 0.0 <= config.eta_d <= 1.0:
            parser.error(f"--eta-d must lie in [0, 1], got {config.eta_d}")
        report = sample_report(config)
        _emit(_render(report, config.fmt, _sample_table, _sample_csv), config.output)
        return EXIT_OK

    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
