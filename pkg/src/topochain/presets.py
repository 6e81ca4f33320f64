"""Bundled experiment configs reproducing each figure's data files.

Every preset is a plain JSON-ready dict that round-trips through
``config.parse_config`` unchanged; ``reproduce`` runs all configs filed
under one figure id.
"""

from __future__ import annotations

_PUMP_PARAMS = {
    "a": {"form": "cos", "offset": 1.0, "amplitude": -1.0},
    "b": {"form": "const", "offset": 1.0},
    "u": {"form": "sin", "amplitude": 1.0},
}

_OPTIMIZED_PARAMS = {
    "a": {"form": "cos", "offset": 0.5, "amplitude": -0.5},
    "b": {"form": "const", "offset": 1.0},
    "u": {"form": "sin", "amplitude": 0.25},
}

_BELL_PARAMS = {
    "a": {"form": "cos", "offset": 1.0, "amplitude": -0.9},
    "b": {"form": "cos", "offset": 1.0, "amplitude": -0.9},
    "c": {"form": "const", "offset": 1.0},
    "u": {"form": "cos", "offset": 1.0, "amplitude": 1.0, "frequency_multiple": 0.5},
    "v": {"form": "const", "offset": 2.0},
    "w": {"form": "cos", "offset": 1.0, "amplitude": -1.0, "frequency_multiple": 0.5},
}


def _schedule(period, cycles=1, params=_PUMP_PARAMS, kind="rm", L=7):
    return {"kind": kind, "L": L, "T": period, "cycles": cycles, "params": params}


PRESETS = {
    "energylevel": [
        (
            "energylevel",
            {
                "schema": 1,
                "command": "spectrum",
                "kind": "ssh",
                "L": 7,
                "a": 0.0,
                "b": 1.0,
                "sweep": {"param": "a", "start": 0.0, "stop": 2.0, "points": 201},
            },
        )
    ],
    "trivial": [
        (
            "trivial_topological",
            {
                "schema": 1,
                "command": "quench",
                "kind": "ssh",
                "L": 7,
                "a": 0.1,
                "b": 1.0,
                "disorder": {"sigma": 0.01},
                "flip_site": 1,
                "t_final": 100.0,
                "n_records": 401,
                "seed": 42,
            },
        ),
        (
            "trivial_uniform",
            {
                "schema": 1,
                "command": "quench",
                "kind": "ssh",
                "L": 7,
                "a": 1.0,
                "b": 1.0,
                "disorder": {"sigma": 0.01},
                "flip_site": 1,
                "t_final": 100.0,
                "n_records": 401,
                "seed": 42,
            },
        ),
    ],
    "pumping": [
        (
            "pumping",
            {"schema": 1, "command": "pump", "schedule": _schedule(100.0)},
        )
    ],
    "rm": [
        (
            "rm_spectrum",
            {"schema": 1, "command": "spectrum", "schedule": _schedule(100.0), "n_times": 201},
        )
    ],
    "lz1": [
        (
            "lz1_path_a",
            {
                "schema": 1,
                "command": "lz",
                "path": {"type": "arc", "alpha": 1.0, "T": 200.0},
                "initial_state": "L",
            },
        ),
        (
            "lz1_path_b",
            {
                "schema": 1,
                "command": "lz",
                "path": {"type": "line", "alpha": 1.0, "T": 200.0},
                "initial_state": "L",
            },
        ),
    ],
    "lz2": [
        (
            "lz2_pump_path",
            {"schema": 1, "command": "lz", "from_schedule": _schedule(100.0)},
        )
    ],
    "optimization": [
        (
            "optimization_u_only",
            {
                "schema": 1,
                "command": "spectrum",
                "schedule": _schedule(
                    100.0,
                    params={
                        "a": {"form": "cos", "offset": 1.0, "amplitude": -1.0},
                        "b": {"form": "const", "offset": 1.0},
                        "u": {"form": "sin", "amplitude": 0.25},
                    },
                ),
                "n_times": 201,
            },
        ),
        (
            "optimization_full",
            {
                "schema": 1,
                "command": "spectrum",
                "schedule": _schedule(100.0, params=_OPTIMIZED_PARAMS),
                "n_times": 201,
            },
        ),
        (
            "optimization_pump",
            {
                "schema": 1,
                "command": "pump",
                "schedule": _schedule(100.0, cycles=3, params=_OPTIMIZED_PARAMS),
            },
        ),
    ],
    "trimer": [
        (
            "trimer_intercell",
            {
                "schema": 1,
                "command": "spectrum",
                "schedule": _schedule(
                    100.0,
                    kind="trimer",
                    L=8,
                    params={
                        "a": {"form": "const", "offset": 1.0},
                        "b": {"form": "const", "offset": 1.0},
                        "c": {"form": "sin", "amplitude": 2.0},
                        "u": {"form": "const"},
                        "v": {"form": "const"},
                        "w": {"form": "const"},
                    },
                ),
                "n_times": 201,
            },
        ),
        (
            "trimer_intracell",
            {
                "schema": 1,
                "command": "spectrum",
                "schedule": _schedule(
                    100.0,
                    kind="trimer",
                    L=8,
                    params={
                        "a": {"form": "sin", "amplitude": 1.0},
                        "b": {"form": "sin", "amplitude": 1.0},
                        "c": {"form": "const", "offset": 2.0},
                        "u": {"form": "const"},
                        "v": {"form": "const"},
                        "w": {"form": "const"},
                    },
                ),
                "n_times": 201,
            },
        ),
    ],
    "ssh3edges": [
        (
            "ssh3edges",
            {
                "schema": 1,
                "command": "spectrum",
                "kind": "trimer",
                "L": 8,
                "a": 1.0,
                "b": 1.0,
                "c": 2.0,
                "u": 0.0,
                "v": 0.0,
                "w": 0.0,
                "export_states": "edge",
            },
        )
    ],
    "belltransfer": [
        (
            "belltransfer",
            {
                "schema": 1,
                "command": "trimer",
                "schedule": _schedule(1000.0, kind="trimer", L=7, params=_BELL_PARAMS),
                "signs": ["plus", "minus"],
            },
        )
    ],
    "circuit": [
        (
            "circuit_levels",
            {
                "schema": 1,
                "command": "fluxqubit",
                "f_alpha": 0.2,
                "f_eps_range": {"start": -0.05, "stop": 0.05, "points": 41},
                "levels": 5,
            },
        ),
        (
            "circuit_gap",
            {
                "schema": 1,
                "command": "fluxqubit",
                "f_alpha_sweep": {"start": 0.0, "stop": 0.3, "points": 31},
            },
        ),
    ],
}

FIGURE_IDS = tuple(sorted(PRESETS))
