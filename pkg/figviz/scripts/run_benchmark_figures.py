#!/usr/bin/env python3
"""End-to-end benchmark figure pipeline.

Drives the simulator exclusively through its command line (``python -m
paramp``) and file outputs, assembles the derived parameter tables, writes
one TOML spec per figure, and renders fig1.png ... fig8.png with figviz:

  fig1  beam splitter: reachable displacement vs pump amplitude
  fig2  degenerate amp: threshold time and reachable squeeze vs pump
  fig3  degenerate amp: signal photon number vs time
  fig4  degenerate amp: pump Fano factor vs time
  fig5  degenerate amp, weak pump: signal/pump Wigner maps at t*, 2t*
  fig6  degenerate amp, |beta| = 3: signal histogram + Wigner at t*, 0.43
  fig7  nondegenerate amp: threshold time and reachable two-mode squeeze
  fig8  nondegenerate amp, |beta| = 5: signal/pump histograms at t*, 3t*

Completed data files are reused on reruns; pass --force to regenerate.
``--quick`` shrinks the pump grid and step counts for smoke runs.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

from figviz.cli import main as figviz_main

HERE = Path(__file__).resolve().parent
# the squared-overlap threshold matching the degenerate-amp benchmark values
DP_THRESHOLD = "0.9801"


def run_paramp(args: list[str], outputs: list[Path], force: bool) -> None:
    if not force and all(p.exists() for p in outputs):
        return
    cmd = [sys.executable, "-m", "paramp", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(
            f"paramp failed ({proc.returncode}): {' '.join(cmd)}\n{proc.stderr}"
        )


def read_summary(path: Path) -> dict[str, str]:
    pairs = {}
    for line in path.read_text().splitlines():
        key, _, value = line.partition("=")
        pairs[key] = value
    return pairs


def slug(text: str) -> str:
    return text.replace(":", "").replace(",", "_").replace(".", "p")


def threshold_table(
    data: Path, device: str, signal: str, betas: list[float],
    threshold: str | None, force: bool,
) -> Path:
    """One tau*/max-parameter table per input, assembled from run summaries."""
    table = data / f"{device}_reach_{slug(signal)}.csv"
    rows = ["beta,beta_sq,tau_star,max_param"]
    for beta in betas:
        summary = data / f"{device}_{slug(signal)}_b{beta:g}.summary"
        sweep_csv = data / f"{device}_{slug(signal)}_b{beta:g}.csv"
        args = [
            device, "--signal", signal, "--beta", f"{beta:g}",
            "--out", str(sweep_csv), "--summary", str(summary),
        ]
        if threshold:
            args += ["--threshold", threshold]
        run_paramp(args, [summary, sweep_csv], force)
        info = read_summary(summary)
        if info.get("tau_star") == "unbounded":
            # never crosses the threshold: full transfer at a quarter period
            rows.append(f"{beta:g},{beta*beta:g},nan,{beta:g}")
        else:
            rows.append(
                f"{beta:g},{beta*beta:g},{info['tau_star']},{info['max_param']}"
            )
    table.write_text("\n".join(rows) + "\n")
    return table


def sweep_file(
    data: Path, device: str, signal: str, beta: float, tau_max: float,
    steps: int, force: bool, threshold: str | None = None,
    emit: str | None = None, at_tau: str | None = None,
    wigner_grid: str | None = None,
) -> Path:
    out = data / f"{device}_{slug(signal)}_b{beta:g}_t{tau_max:g}.csv"
    args = [
        device, "--signal", signal, "--beta", f"{beta:g}",
        "--tau-max", f"{tau_max:g}", "--tau-steps", str(steps),
        "--out", str(out),
    ]
    expected = [out]
    if threshold:
        args += ["--threshold", threshold]
    if emit:
        args += ["--emit", emit]
    if at_tau:
        args += ["--at-tau", at_tau]
        stem = out.with_suffix("")
        for tau in at_tau.split(","):
            tag = f"tau{float(tau):g}"
            if "dist" in emit:
                expected.append(stem.with_name(stem.name + f".dist.{tag}.csv"))
            if "wigner" in emit:
                for mode in ("signal", "pump"):
                    expected.append(
                        stem.with_name(stem.name + f".wigner.{mode}.{tag}.csv")
                    )
    if wigner_grid:
        args += [f"--wigner-grid={wigner_grid}"]
    run_paramp(args, expected, force)
    return out


def toml_series(csv: Path, label: str, style: str) -> str:
    return (
        "[[panels.series]]\n"
        f'csv = "{csv.name}"\nlabel = "{label}"\nstyle = "{style}"\n'
    )


BETA_STYLES = ["solid", "dashed", "dashdot", "dotted", "dotdotdashed"]


def write_spec(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


def build_all(data: Path, out: Path, quick: bool, force: bool) -> list[Path]:
    data.mkdir(parents=True, exist_ok=True)
    out.mkdir(parents=True, exist_ok=True)
    betas_reach = [1.0, 2.0, 3.0] if quick else [float(b) for b in range(1, 10)]
    betas_lines = [1.0, 3.0] if quick else [1.0, 3.0, 5.0, 7.0, 9.0]
    steps = 120 if quick else 300
    wgrid = 41 if quick else 121
    specs: list[Path] = []

    # fig1: beam-splitter displacement reach
    bs_tables = {
        label: threshold_table(data, "bs", sig, betas_reach, None, force)
        for label, sig in [
            ("vacuum", "vacuum"), ("coherent 1", "coherent:1"), ("fock 1", "fock:1"),
        ]
    }
    body = [
        'kind = "line_sweep"', f'output = "{(out / "fig1.png").resolve()}"',
        'suptitle = "beam splitter: reachable displacement"',
        "width = 6.0", "height = 4.5", "[[panels]]",
        'x = "beta"', 'y = "max_param"',
        'xlabel = "pump amplitude |beta|"', 'ylabel = "|z_M|"',
    ]
    for (label, table), style in zip(bs_tables.items(), BETA_STYLES):
        body.append(toml_series(table, label, style))
    specs.append(write_spec(data / "fig1.toml", "\n".join(body) + "\n"))

    # fig2: degenerate-amp threshold time and squeeze reach
    dp_tables = {
        label: threshold_table(data, "dpa", sig, betas_reach, DP_THRESHOLD, force)
        for label, sig in [
            ("vacuum", "vacuum"), ("coherent 1", "coherent:1"),
            ("fock 1", "fock:1"), ("fock 2", "fock:2"),
        ]
    }
    body = [
        'kind = "line_sweep"', f'output = "{(out / "fig2.png").resolve()}"',
        'suptitle = "degenerate amplifier: validity time and squeeze reach"',
        "width = 9.5", "height = 4.0",
    ]
    for x, y, xl, yl in [
        ("beta_sq", "tau_star", "pump intensity |beta|^2", "tau*"),
        ("beta", "max_param", "pump amplitude |beta|", "|zeta_M|"),
    ]:
        body += ["[[panels]]", f'x = "{x}"', f'y = "{y}"',
                 f'xlabel = "{xl}"', f'ylabel = "{yl}"']
        for (label, table), style in zip(dp_tables.items(), BETA_STYLES):
            body.append(toml_series(table, label, style))
    specs.append(write_spec(data / "fig2.toml", "\n".join(body) + "\n"))

    # fig3: degenerate-amp signal growth; fig4: pump Fano traces
    for fig, column, ylabel, signals in [
        ("fig3", "mean_signal", "signal mean photon number",
         [("vacuum input", "vacuum"), ("fock 1 input", "fock:1")]),
        ("fig4", "fano", "pump Fano factor",
         [("vacuum input", "vacuum"), ("coherent 1 input", "coherent:1")]),
    ]:
        body = [
            'kind = "line_sweep"', f'output = "{(out / (fig + ".png")).resolve()}"',
            f'suptitle = "degenerate amplifier: {ylabel} vs time"',
            "width = 9.5", "height = 4.0",
        ]
        for title, sig in signals:
            body += ["[[panels]]", f'title = "{title}"', 'x = "tau"',
                     f'y = "{column}"', 'xlabel = "tau"', f'ylabel = "{ylabel}"']
            for beta, style in zip(betas_lines, BETA_STYLES):
                csv = sweep_file(data, "dpa", sig, beta, 0.5, steps, force)
                body.append(toml_series(csv, f"beta = {beta:g}", style))
        specs.append(write_spec(data / f"{fig}.toml", "\n".join(body) + "\n"))

    # fig5: weak-pump Wigner maps at tau* and 2 tau*
    stem5 = sweep_file(
        data, "dpa", "vacuum", 1.0, 1.0, steps, force, threshold=DP_THRESHOLD,
        emit="wigner", at_tau="0.42,0.84", wigner_grid=f"-4,4,-4,4,{wgrid}",
    ).with_suffix("")
    body = [
        'kind = "wigner_contour"', f'output = "{(out / "fig5.png").resolve()}"',
        'suptitle = "degenerate amplifier, |beta| = 1, vacuum signal"',
        "width = 9.0", "height = 8.0",
    ]
    for tau in ("0.42", "0.84"):
        for mode in ("signal", "pump"):
            body += [
                "[[panels]]",
                f'csv = "{stem5.name}.wigner.{mode}.tau{tau}.csv"',
                f'title = "{mode}, tau = {tau}"',
            ]
    specs.append(write_spec(data / "fig5.toml", "\n".join(body) + "\n"))

    # fig6: |beta| = 3 histograms and Wigner maps, valid vs broken regime
    stem6 = sweep_file(
        data, "dpa", "vacuum", 3.0, 0.5, steps, force, threshold=DP_THRESHOLD,
        emit="dist,wigner", at_tau="0.19,0.43", wigner_grid=f"-5,5,-5,5,{wgrid}",
    ).with_suffix("")
    body = [
        'kind = "wigner_contour"', f'output = "{(out / "fig6.png").resolve()}"',
        'suptitle = "degenerate amplifier, |beta| = 3, vacuum signal"',
        "width = 9.0", "height = 8.0",
    ]
    for tau in ("0.19", "0.43"):
        body += [
            "[[panels]]", 'kind = "histogram"',
            f'csv = "{stem6.name}.dist.tau{tau}.csv"', 'column = "signal"',
            f'title = "signal photon numbers, tau = {tau}"', "max_n = 20",
        ]
        body += [
            "[[panels]]",
            f'csv = "{stem6.name}.wigner.signal.tau{tau}.csv"',
            f'title = "signal Wigner map, tau = {tau}"',
        ]
    specs.append(write_spec(data / "fig6.toml", "\n".join(body) + "\n"))

    # fig7: nondegenerate-amp threshold time and two-mode squeeze reach
    np_tables = {
        label: threshold_table(data, "npa", sig, betas_reach, None, force)
        for label, sig in [("vacuum", "fock2:0,0"), ("fock 1,1", "fock2:1,1")]
    }
    body = [
        'kind = "line_sweep"', f'output = "{(out / "fig7.png").resolve()}"',
        'suptitle = "nondegenerate amplifier: validity time and squeeze reach"',
        "width = 9.5", "height = 4.0",
    ]
    for x, y, xl, yl in [
        ("beta_sq", "tau_star", "pump intensity |beta|^2", "tau*"),
        ("beta", "max_param", "pump amplitude |beta|", "|chi_M|"),
    ]:
        body += ["[[panels]]", f'x = "{x}"', f'y = "{y}"',
                 f'xlabel = "{xl}"', f'ylabel = "{yl}"']
        for (label, table), style in zip(np_tables.items(), BETA_STYLES):
            body.append(toml_series(table, label, style))
    specs.append(write_spec(data / "fig7.toml", "\n".join(body) + "\n"))

    # fig8: |beta| = 5 photon histograms at tau* and 3 tau*
    stem8 = sweep_file(
        data, "npa", "fock2:0,0", 5.0, 0.7, steps, force,
        emit="dist", at_tau="0.214,0.642",
    ).with_suffix("")
    body = [
        'kind = "histogram"', f'output = "{(out / "fig8.png").resolve()}"',
        'suptitle = "nondegenerate amplifier, |beta| = 5, vacuum input"',
        "width = 9.0", "height = 7.0",
    ]
    for tau in ("0.214", "0.642"):
        for mode, cap in (("signal", 25), ("pump", 50)):
            body += [
                "[[panels]]",
                f'csv = "{stem8.name}.dist.tau{tau}.csv"',
                f'column = "{mode}"',
                f'title = "{mode}, tau = {tau}"',
                f"max_n = {cap}",
            ]
    specs.append(write_spec(data / "fig8.toml", "\n".join(body) + "\n"))
    return specs


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data", default=str(HERE.parent / "figures" / "data"))
    parser.add_argument("--out", default=str(HERE.parent / "figures" / "out"))
    parser.add_argument("--quick", action="store_true",
                        help="small grids, for smoke testing")
    parser.add_argument("--force", action="store_true",
                        help="regenerate data files even if present")
    args = parser.parse_args(argv)

    data, out = Path(args.data), Path(args.out)
    specs = build_all(data, out, quick=args.quick, force=args.force)
    for spec in specs:
        code = figviz_main([str(spec)])
        if code != 0:
            print(f"rendering {spec} failed with exit code {code}",
                  file=sys.stderr)
            return code
    missing = [f"fig{i}.png" for i in range(1, 9)
               if not (out / f"fig{i}.png").exists()]
    if missing:
        print(f"missing figures: {missing}", file=sys.stderr)
        return 1
    print(f"all eight figures written to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
