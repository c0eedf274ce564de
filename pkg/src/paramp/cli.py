"""Command-line front end: one sweep per invocation, CSV out.

Writes the fixed-schema sweep table, prints a tau*/achievable-parameter
summary to stderr, and optionally emits photon-number distributions and
Wigner grids at chosen interaction times.  Exit codes: 0 on success, 2 when
a state does not fit the basis cutoff, 64 on a malformed invocation or
config file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    ExperimentConfig,
    SweepEngine,
    UnboundedError,
    max_parameter,
    records_to_csv,
    tau_star,
)
from .fock import DeviceKind
from .states import TruncationError, parse_mode_spec

EXIT_OK = 0
EXIT_TRUNCATION = 2
EXIT_USAGE = 64

_EMIT_CHOICES = ("overlap", "fano", "mean", "depletion", "dist", "wigner")
_DEFAULT_WIGNER_GRID = (-6.0, 6.0, -6.0, 6.0, 121)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we reserve that
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="paramp",
        description=(
            "Exact simulation of a beam splitter (bs), degenerate parametric "
            "amplifier (dpa) or nondegenerate parametric amplifier (npa) with "
            "a coherent pump, swept over the interaction time."
        ),
    )
    parser.add_argument(
        "device",
        nargs="?",
        choices=[d.value for d in DeviceKind],
        help="device to simulate",
    )
    parser.add_argument("--config", metavar="PATH", help="key=value config file")
    parser.add_argument(
        "--signal",
        metavar="SPEC",
        help="input state: vacuum | fock:n | coherent:re,im | fock2:n,m",
    )
    parser.add_argument("--beta", metavar="RE[,IM]", help="pump amplitude")
    parser.add_argument("--tau-max", type=float, metavar="X", help="grid end")
    parser.add_argument("--tau-steps", type=int, default=None, metavar="N")
    parser.add_argument("--threshold", type=float, default=None, metavar="P")
    parser.add_argument("--eps-trunc", type=float, default=None, metavar="E")
    parser.add_argument(
        "--cutoff", default=None, metavar="auto|N", help="pump occupation cutoff"
    )
    parser.add_argument(
        "--emit",
        default=None,
        metavar="LIST",
        help=f"comma list from {{{','.join(_EMIT_CHOICES)}}}",
    )
    parser.add_argument(
        "--at-tau",
        default=None,
        metavar="T[,T...]",
        help="times for dist/wigner snapshots (default: tau*)",
    )
    parser.add_argument(
        "--wigner-grid",
        default=None,
        metavar="XMIN,XMAX,PMIN,PMAX,NPTS",
        help="phase-space window; pass as --wigner-grid=-6,6,-6,6,121",
    )
    parser.add_argument("--out", default=None, metavar="PATH", help="sweep CSV path")
    parser.add_argument(
        "--summary", default=None, metavar="PATH", help="key=value summary file"
    )
    parser.add_argument("--workers", type=int, default=None, metavar="N")
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    known = {
        "device", "signal", "beta", "tau_max", "tau_steps", "threshold",
        "eps_trunc", "cutoff", "emit", "at_tau", "wigner_grid", "out",
        "summary", "workers",
    }
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in known:
            raise _UsageError(f"{path}:{lineno}: bad config line {raw!r}")
        values[key] = value.strip()
    return values


def _parse_complex(text: str, what: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise _UsageError(f"malformed {what} {text!r}; expected re or re,im")


def _parse_taus(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise _UsageError(f"malformed --at-tau list {text!r}") from None


def _parse_wigner_grid(text: str) -> tuple[float, float, float, float, int]:
    parts = text.split(",")
    if len(parts) == 5:
        try:
            xmin, xmax, pmin, pmax = (float(v) for v in parts[:4])
            npts = int(parts[4])
            if npts >= 2 and xmax > xmin and pmax > pmin:
                return (xmin, xmax, pmin, pmax, npts)
        except ValueError:
            pass
    raise _UsageError(f"malformed --wigner-grid {text!r}")


def _merge(args: argparse.Namespace) -> argparse.Namespace:
    if not args.config:
        return args
    file_values = _read_config_file(args.config)
    for key, value in file_values.items():
        current = getattr(args, key)
        if current is None:
            if key in ("tau_max", "threshold", "eps_trunc"):
                setattr(args, key, float(value))
            elif key in ("tau_steps", "workers"):
                setattr(args, key, int(value))
            else:
                setattr(args, key, value)
    return args


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    if not args.device:
        raise _UsageError("a device (bs, dpa or npa) is required")
    device = DeviceKind(args.device)
    if not args.signal:
        raise _UsageError("--signal is required")
    try:
        signal = parse_mode_spec(args.signal)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    pair = isinstance(signal, tuple)
    if pair != (device is DeviceKind.NONDEGENERATE_AMP):
        raise _UsageError(
            f"signal {args.signal!r} does not match device {device.value!r} "
            f"(fock2:n,m is for npa only, and npa requires it)"
        )
    if not args.beta:
        raise _UsageError("--beta is required")
    beta = _parse_complex(args.beta, "--beta")
    if abs(beta) == 0:
        raise _UsageError("--beta must be nonzero (the pump drives the device)")
    pump_cutoff = None
    if args.cutoff not in (None, "auto"):
        try:
            pump_cutoff = int(args.cutoff)
        except ValueError:
            raise _UsageError(f"--cutoff must be 'auto' or an integer") from None
        if pump_cutoff < 0:
            raise _UsageError("--cutoff must be non-negative")
    kwargs = {}
    if args.tau_max is not None:
        kwargs["tau_max"] = args.tau_max
    if args.tau_steps is not None:
        kwargs["tau_steps"] = args.tau_steps
    if args.threshold is not None:
        kwargs["threshold"] = args.threshold
    if args.eps_trunc is not None:
        kwargs["eps_trunc"] = args.eps_trunc
    try:
        return ExperimentConfig(
            device=device, signal=signal, beta=beta, pump_cutoff=pump_cutoff, **kwargs
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _summary_lines(engine: SweepEngine) -> list[str]:
    config = engine.config
    lines = [
        f"device={config.device.value}",
        f"signal={config._signal_label()}",
        f"beta={config.beta.real:g},{config.beta.imag:g}",
        f"tau_max={config.tau_max:.12g}",
        f"tau_steps={config.tau_steps}",
        f"threshold={config.threshold:.12g}",
        f"tail_mass={engine.tail_mass:.3e}",
    ]
    try:
        ts = tau_star(engine)
        zm = max_parameter(engine)
        lines.append(f"tau_star={ts:.12g}")
        lines.append(f"max_param={zm:.12g}")
        record = min(
            engine.records(), key=lambda r: abs(r.tau - ts)
        )
        lines.append(f"overlap_at_tau_star={record.overlap:.12g}")
        lines.append(f"fano_at_tau_star={record.fano:.12g}")
        lines.append(f"mean_signal_at_tau_star={record.mean_signal:.12g}")
        lines.append(f"mean_pump_at_tau_star={record.mean_pump:.12g}")
        lines.append(f"depletion_at_tau_star={record.depletion:.12g}")
    except UnboundedError as exc:
        lines.append("tau_star=unbounded")
        lines.append(f"min_overlap={exc.min_overlap:.12g}")
    return lines


def _snapshot_paths(out: str, kind: str, tau: float, mode: str | None = None) -> Path:
    stem = Path(out)
    suffix = f".{kind}.tau{tau:g}.csv" if mode is None else f".{kind}.{mode}.tau{tau:g}.csv"
    return stem.with_name(stem.stem + suffix)


def _write_distributions(engine: SweepEngine, tau: float, out: str) -> list[Path]:
    dists = engine.mode_distributions(tau)
    size = max(d.size for d in dists.values())
    names = list(dists)
    rows = ["n," + ",".join(names)]
    for n in range(size):
        vals = [f"{dists[name][n] if n < dists[name].size else 0.0:.12g}" for name in names]
        rows.append(f"{n}," + ",".join(vals))
    path = _snapshot_paths(out, "dist", tau)
    path.write_text("\n".join(rows) + "\n")
    return [path]


def _write_wigners(
    engine: SweepEngine, tau: float, out: str, grid: tuple[float, float, float, float, int]
) -> list[Path]:
    xmin, xmax, pmin, pmax, npts = grid
    xs = np.linspace(xmin, xmax, npts)
    ps = np.linspace(pmin, pmax, npts)
    modes = {"signal": 0, "pump": engine.config.device.pump_mode}
    paths = []
    for label, mode in modes.items():
        w = engine.wigner_snapshot(tau, mode, xs, ps)
        path = _snapshot_paths(out, "wigner", tau, label)
        path.write_text(w.to_csv())
        paths.append(path)
    return paths


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge(args)
        config = _build_config(args)
        emit = set()
        if args.emit:
            emit = {e.strip() for e in args.emit.split(",") if e.strip()}
            unknown = emit - set(_EMIT_CHOICES)
            if unknown:
                raise _UsageError(f"unknown --emit entries: {sorted(unknown)}")
        wants_files = emit & {"dist", "wigner"}
        if wants_files and not args.out:
            raise _UsageError("--out is required when emitting dist or wigner files")
        wigner_grid = (
            _parse_wigner_grid(args.wigner_grid)
            if args.wigner_grid
            else _DEFAULT_WIGNER_GRID
        )
        snapshot_taus = _parse_taus(args.at_tau) if args.at_tau else None
    except _UsageError as exc:
        print(f"paramp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        engine = SweepEngine(config, workers=args.workers)
        csv_text = records_to_csv(engine.records())
        if args.out:
            Path(args.out).write_text(csv_text)
        else:
            sys.stdout.write(csv_text)

        summary = _summary_lines(engine)
        if args.summary:
            Path(args.summary).write_text("\n".join(summary) + "\n")
        for line in summary:
            print(line, file=sys.stderr)

        if wants_files:
            if snapshot_taus is None:
                star = [
                    line.split("=", 1)[1]
                    for line in summary
                    if line.startswith("tau_star=")
                ][0]
                if star == "unbounded":
                    print(
                        "paramp: error: no --at-tau given and tau* is unbounded",
                        file=sys.stderr,
                    )
                    return EXIT_USAGE
                snapshot_taus = [float(star)]
            written = []
            for tau in snapshot_taus:
                if "dist" in emit:
                    written += _write_distributions(engine, tau, args.out)
                if "wigner" in emit:
                    written += _write_wigners(engine, tau, args.out, wigner_grid)
            for path in written:
                print(f"wrote {path}", file=sys.stderr)
    except TruncationError as exc:
        print(f"paramp: truncation error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
