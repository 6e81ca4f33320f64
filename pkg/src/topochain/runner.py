"""Execute a validated ExperimentConfig and write its CSV/JSON artifacts."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np

from . import __version__, io
from .config import ExperimentConfig
from .dynamics import basis_state, pump, quench, transfer_fidelity
from .effective import LZPath, classify_path, lz_evolve, reduction_report
from .errors import InvalidParameterError
from .fluxcircuit import FluxQubitSpec, qubit_gap, sweep_point
from .models import (
    DisorderSpec,
    apply_disorder,
    build_aah,
    build_rice_mele,
    build_ssh,
    build_trimer,
)
from .couplings import effective_coupling_identical, effective_coupling_matched
from .presets import FIGURE_IDS, PRESETS
from .spectra import (
    EDGE_FLAG_THRESHOLD,
    edge_weight,
    eigendecompose,
    instantaneous_spectrum,
    trace_from_hamiltonians,
)

_EDGE_SITES = {"ssh": 2, "rm": 2, "trimer": 3, "aah": 2}


@dataclass
class RunResult:
    files: List[Path]
    manifest: Path
    extras: dict


def parallel_map(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _build_model(model: dict):
    kind = model["kind"]
    p = model["params"]
    if kind == "ssh":
        return build_ssh(model["L"], p["a"], p["b"], p.get("omega", 0.0))
    if kind == "rm":
        return build_rice_mele(model["L"], p["a"], p["b"], p["u"])
    if kind == "trimer":
        return build_trimer(model["L"], p["a"], p["b"], p["c"], p["u"], p["v"], p["w"])
    return build_aah(model["n_sites"], p["omega"], p["alpha"], p["phase"], p["hop"])


def _run_spectrum(cfg: ExperimentConfig, out_dir: Path, stem: str, threads: int, amplitudes: bool):
    opts = cfg.options
    files, extras = [], {}
    if opts["mode"] == "trace":
        trace = instantaneous_spectrum(opts["schedule"], opts["L"], opts["n_times"])
        files.append(io.spectrum_trace_csv(out_dir / f"{stem}.csv", trace))
        return files, extras

    model = opts["model"]
    n_edge = _EDGE_SITES[model["kind"]]
    if opts["mode"] == "sweep":
        sweep = opts["sweep"]
        name = opts["sweep_param"]
        values = np.linspace(sweep["start"], sweep["stop"], sweep["points"])

        def build_at(value):
            swept = dict(model, params=dict(model["params"], **{name: float(value)}))
            return _build_model(swept)

        hams = parallel_map(build_at, values, 1)
        trace = trace_from_hamiltonians(values, hams, n_edge, axis_name=name)
        files.append(io.spectrum_trace_csv(out_dir / f"{stem}.csv", trace))
        return files, extras

    spectrum = eigendecompose(_build_model(model))
    flags = np.array(
        [edge_weight(spectrum.eigenvectors[:, j], n_edge) >= EDGE_FLAG_THRESHOLD for j in range(spectrum.n_sites)]
    )
    files.append(io.static_spectrum_csv(out_dir / f"{stem}.csv", spectrum.eigenvalues, flags))
    export = opts.get("export_states")
    if export is not None:
        if export == "edge":
            levels = [j + 1 for j in range(spectrum.n_sites) if flags[j]]
        else:
            levels = list(export)
            bad = [j for j in levels if not 1 <= j <= spectrum.n_sites]
            if bad:
                raise InvalidParameterError(f"export_states levels out of range: {bad}")
        vectors = spectrum.eigenvectors[:, [j - 1 for j in levels]]
        files.append(io.states_csv(out_dir / f"{stem}_states.csv", levels, vectors))
        extras["exported_levels"] = levels
        extras["exported_energies"] = [float(spectrum.eigenvalues[j - 1]) for j in levels]
    return files, extras


def _run_pump(cfg: ExperimentConfig, out_dir: Path, stem: str, threads: int, amplitudes: bool):
    opts = cfg.options
    schedule = opts["schedule"]
    n_sites = {"ssh": 2, "rm": 2, "trimer": 3}[schedule.kind] * opts["L"]
    psi0 = basis_state(n_sites, opts["initial_site"])
    n_records = opts["n_records"]
    traj = pump(schedule, opts["L"], psi0, cfg.integrator, n_records)
    files = [io.trajectory_csv(out_dir / f"{stem}.csv", traj, amplitudes)]
    extras = {
        "final_max_site": int(np.argmax(traj.sz[-1])) + 1,
        "final_fidelity_last_site": transfer_fidelity(traj.final_state, basis_state(n_sites, n_sites)),
    }
    return files, extras


def _run_quench(cfg: ExperimentConfig, out_dir: Path, stem: str, threads: int, amplitudes: bool):
    opts = cfg.options
    chain = _build_model(opts["model"])
    if opts["disorder"] is not None:
        d = opts["disorder"]
        chain = apply_disorder(chain, DisorderSpec(d["sigma"], d["seed"], frozenset(d["targets"])))
    traj = quench(chain, opts["flip_site"], opts["t_final"], cfg.integrator, opts["n_records"])
    files = [io.trajectory_csv(out_dir / f"{stem}.csv", traj, amplitudes)]
    extras = {"min_sz_flip_site": float(traj.sz[:, opts["flip_site"] - 1].min())}
    return files, extras


def _lz_path_from_options(path_opts: dict) -> LZPath:
    ptype = path_opts["type"]
    if ptype == "arc":
        return LZPath.arc(path_opts["alpha"], path_opts["T"], path_opts["n_samples"])
    if ptype == "line":
        return LZPath.line(path_opts["alpha"], path_opts["T"], path_opts["n_samples"])
    if ptype == "line_at_angle":
        return LZPath.line_at_angle(path_opts["alpha"], path_opts["theta"], path_opts["T"], path_opts["n_samples"])
    return LZPath.from_functions(path_opts["u"], path_opts["g"], path_opts["T"], path_opts["n_samples"])


def _run_lz(cfg: ExperimentConfig, out_dir: Path, stem: str, threads: int, amplitudes: bool):
    opts = cfg.options
    files, extras = [], {}
    tol = opts.get("classify_tol")
    if "path" in opts:
        path = _lz_path_from_options(opts["path"])
        files.append(io.lz_path_csv(out_dir / f"{stem}_path.csv", path))
        extras["path_class"] = classify_path(path, tol).value
        psi0 = np.array([1.0, 0.0] if opts["initial_state"] == "L" else [0.0, 1.0], dtype=np.complex128)
        traj = lz_evolve(path, psi0, cfg.integrator, opts["n_records"])
        files.append(io.trajectory_csv(out_dir / f"{stem}.csv", traj, amplitudes))
        extras["final_population_L"] = float(np.abs(traj.final_state[0]) ** 2)
        extras["final_population_R"] = float(np.abs(traj.final_state[1]) ** 2)
    if "from_schedule" in opts:
        fs = opts["from_schedule"]
        path = LZPath.from_schedule(fs["schedule"], fs["L"])
        files.append(io.lz_path_csv(out_dir / f"{stem}_schedule_path.csv", path))
        extras["schedule_path_class"] = classify_path(path, tol).value
    if "reduce" in opts:
        r = opts["reduce"]
        report = reduction_report(r["a"], r["b"], r["u"], r["L"])
        files.append(io.write_json(out_dir / f"{stem}_reduction.json", report))
        extras["reduction_rel_err"] = report["rel_err"]
    return files, extras


def _run_trimer(cfg: ExperimentConfig, out_dir: Path, stem: str, threads: int, amplitudes: bool):
    opts = cfg.options
    schedule = opts["schedule"]
    L = opts["L"]
    n = 3 * L
    files, extras = [], {}
    for sign_name in opts["signs"]:
        sign = 1.0 if sign_name == "plus" else -1.0
        psi0 = np.zeros(n, dtype=np.complex128)
        psi0[0] = 1.0 / np.sqrt(2.0)
        psi0[1] = sign / np.sqrt(2.0)
        traj = pump(schedule, L, psi0, cfg.integrator, opts["n_records"])
        files.append(io.trajectory_csv(out_dir / f"{stem}_{sign_name}.csv", traj, amplitudes))
        target = np.zeros(n, dtype=np.complex128)
        target[n - 2] = 1.0 / np.sqrt(2.0)
        target[n - 1] = sign / np.sqrt(2.0)
        extras[f"final_fidelity_{sign_name}"] = transfer_fidelity(traj.final_state, target)
    return files, extras


def _run_couplings(cfg: ExperimentConfig, out_dir: Path, stem: str, threads: int, amplitudes: bool):
    opts = cfg.options
    a1 = np.linspace(opts["alpha1"]["start"], opts["alpha1"]["stop"], opts["alpha1"]["points"])
    a2 = np.linspace(opts["alpha2"]["start"], opts["alpha2"]["stop"], opts["alpha2"]["points"])
    grid = [(x, y) for x in a1 for y in a2]
    scheme = opts["scheme"]

    def evaluate(pair):
        x, y = pair
        if scheme == "identical":
            p = effective_coupling_identical(opts["bare_a"], x, y, opts["n_max"]).value.real
            q = effective_coupling_identical(opts["bare_b"], x, y, opts["n_max"]).value.real
        else:
            p = effective_coupling_matched(opts["bare_a"], x, y, odd_bond=True).value.imag
            q = effective_coupling_matched(opts["bare_b"], x, y, odd_bond=False).value.imag
        return [x, y, p, q]

    rows = parallel_map(evaluate, grid, threads)
    files = [io.write_csv(out_dir / f"{stem}.csv", ["alpha_1", "alpha_2", "P", "Q"], rows)]
    extras = {"scheme": scheme, "value_component": "real" if scheme == "identical" else "imag"}
    return files, extras


def _run_fluxqubit(cfg: ExperimentConfig, out_dir: Path, stem: str, threads: int, amplitudes: bool):
    opts = cfg.options
    spec = FluxQubitSpec(**opts["spec_kwargs"])
    files, extras = [], {}
    if "f_alpha_sweep" in opts:
        rng = opts["f_alpha_sweep"]
        values = np.linspace(rng["start"], rng["stop"], rng["points"])
        gaps = parallel_map(lambda fa: qubit_gap(spec, fa), values, threads)
        rows = [[fa, gap] for fa, gap in zip(values, gaps)]
        files.append(io.write_csv(out_dir / f"{stem}.csv", ["f_alpha", "gap"], rows))
        return files, extras
    levels = opts["levels"]
    f_alpha = opts["f_alpha"]
    rng = opts["f_eps_range"]
    values = np.linspace(rng["start"], rng["stop"], rng["points"])
    points = parallel_map(lambda fe: sweep_point(spec, f_alpha, fe, levels), values, threads)
    header = ["f_eps"] + [f"E_{k}" for k in range(levels)] + ["g_perp", "g_par"]
    rows = []
    for fe, (vals, character) in zip(values, points):
        rows.append([fe] + list(vals[:levels]) + [character.g_perp, character.g_par])
    files.append(io.write_csv(out_dir / f"{stem}.csv", header, rows))
    extras["gap_at_first_point"] = float(points[0][1].gap)
    return files, extras


_RUNNERS = {
    "spectrum": _run_spectrum,
    "pump": _run_pump,
    "quench": _run_quench,
    "lz": _run_lz,
    "trimer": _run_trimer,
    "couplings": _run_couplings,
    "fluxqubit": _run_fluxqubit,
}


def run(cfg: ExperimentConfig, out_dir, threads: int = 1, amplitudes: bool = False, stem=None) -> RunResult:
    """Run one experiment; returns the written data files and manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or cfg.output or cfg.command
    start = time.perf_counter()
    files, extras = _RUNNERS[cfg.command](cfg, out_dir, stem, threads, amplitudes)
    wall = time.perf_counter() - start
    manifest = io.write_manifest(out_dir / f"{stem}.manifest.json", __version__, cfg.raw, files, wall, extras)
    return RunResult(files, manifest, extras)


def reproduce(figure_id: str, out_dir, threads: int = 1, amplitudes: bool = False) -> List[RunResult]:
    """Run every preset config filed under a figure id."""
    from .config import parse_config
    import json

    if figure_id not in PRESETS:
        raise InvalidParameterError(
            f"unknown figure id {figure_id!r}; available: {', '.join(FIGURE_IDS)}"
        )
    results = []
    for name, preset in PRESETS[figure_id]:
        cfg = parse_config(json.dumps(preset))
        results.append(run(cfg, out_dir, threads, amplitudes, stem=name))
    return results
