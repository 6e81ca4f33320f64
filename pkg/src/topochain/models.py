"""Single-excitation chain Hamiltonians, drive schedules and disorder.

Units: hbar = 1 and the strong coupling b = 1 set the energy scale; time is
measured in 1/b.  Sites are 1-based in documentation and file output,
0-based in arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

from ._kernels import FORM_CONST, FORM_COS, FORM_LINEAR, FORM_SIN
from .errors import InvalidDimensionError, InvalidParameterError, NumericError

MODEL_KINDS = ("ssh", "rm", "trimer")
SCHEDULE_PARAMS = {"ssh": ("a", "b"), "rm": ("a", "b", "u"), "trimer": ("a", "b", "c", "u", "v", "w")}
SITES_PER_CELL = {"ssh": 2, "rm": 2, "trimer": 3}

_FORM_IDS = {"const": FORM_CONST, "sin": FORM_SIN, "cos": FORM_COS, "linear": FORM_LINEAR}


@dataclass(frozen=True, eq=False)
class ChainHamiltonian:
    """Real symmetric tridiagonal matrix in the single-excitation basis."""

    diagonal: np.ndarray
    offdiagonal: np.ndarray

    def __post_init__(self):
        diag = np.atleast_1d(np.asarray(self.diagonal, dtype=np.float64))
        off = np.atleast_1d(np.asarray(self.offdiagonal, dtype=np.float64)) if np.size(self.offdiagonal) else np.zeros(0)
        if diag.size < 1:
            raise InvalidDimensionError("chain needs at least one site")
        if off.size != diag.size - 1:
            raise InvalidDimensionError(
                f"offdiagonal length {off.size} does not match {diag.size} sites"
            )
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise NumericError("non-finite Hamiltonian entries")
        diag = diag.copy()
        off = off.copy()
        diag.flags.writeable = False
        off.flags.writeable = False
        object.__setattr__(self, "diagonal", diag)
        object.__setattr__(self, "offdiagonal", off)

    @property
    def n_sites(self) -> int:
        return self.diagonal.size

    def to_dense(self) -> np.ndarray:
        h = np.diag(self.diagonal)
        if self.offdiagonal.size:
            h += np.diag(self.offdiagonal, 1) + np.diag(self.offdiagonal, -1)
        return h

    def allclose(self, other: "ChainHamiltonian", tol: float = 0.0) -> bool:
        return (
            self.n_sites == other.n_sites
            and np.allclose(self.diagonal, other.diagonal, rtol=0, atol=tol)
            and np.allclose(self.offdiagonal, other.offdiagonal, rtol=0, atol=tol)
        )


def _check_cells(L: int) -> int:
    L = int(L)
    if L < 1:
        raise InvalidDimensionError(f"cell count must be >= 1, got {L}")
    return L


def build_ssh(L: int, a: float, b: float, omega: float = 0.0) -> ChainHamiltonian:
    """SSH chain of 2L sites: uniform on-site omega, bonds a,b,a,...,a."""
    L = _check_cells(L)
    n = 2 * L
    off = np.empty(n - 1)
    off[0::2] = a
    off[1::2] = b
    return ChainHamiltonian(np.full(n, float(omega)), off)


def build_rice_mele(L: int, a: float, b: float, u: float) -> ChainHamiltonian:
    """Rice-Mele chain: SSH bonds plus staggered on-site +u (A) / -u (B)."""
    L = _check_cells(L)
    n = 2 * L
    diag = np.empty(n)
    diag[0::2] = u
    diag[1::2] = -u
    off = np.empty(n - 1)
    off[0::2] = a
    off[1::2] = b
    return ChainHamiltonian(diag, off)


def build_trimer(L: int, a: float, b: float, c: float, u: float, v: float, w: float) -> ChainHamiltonian:
    """Trimer Rice-Mele chain of 3L sites: bonds repeat (a,b,c) with the
    final c bond absent, on-site energies repeat (u,v,w)."""
    L = _check_cells(L)
    n = 3 * L
    diag = np.empty(n)
    diag[0::3] = u
    diag[1::3] = v
    diag[2::3] = w
    off = np.empty(n - 1)
    off[0::3] = a
    off[1::3] = b
    off[2::3] = c
    return ChainHamiltonian(diag, off)


def build_aah(n_sites: int, omega: float, alpha: float, phase: float, hop: float) -> ChainHamiltonian:
    """Aubry-Andre-Harper chain: diagonal omega*cos(2*pi*j*alpha + phase)
    with 1-based site index j, uniform hopping (the a = b case)."""
    n_sites = int(n_sites)
    if n_sites < 2:
        raise InvalidDimensionError(f"AAH chain needs >= 2 sites, got {n_sites}")
    j = np.arange(1, n_sites + 1, dtype=np.float64)
    diag = omega * np.cos(2.0 * np.pi * j * alpha + phase)
    return ChainHamiltonian(diag, np.full(n_sites - 1, float(hop)))


# ---------------------------------------------------------------------------
# Disorder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DisorderSpec:
    """Gaussian disorder of standard deviation sigma (units of b).

    Draws are reproducible and order-independent: entry i of a target block
    reads stream position i of a Philox counter-based generator keyed by
    (seed, target tag), and is mapped to a normal deviate by the inverse CDF
    (uniform in (0,1) from the top 53 bits of the raw draw).
    """

    sigma: float
    seed: int = 0
    targets: frozenset = frozenset({"diagonal", "offdiagonal"})

    def __post_init__(self):
        if not np.isfinite(self.sigma) or self.sigma < 0:
            raise InvalidParameterError(f"sigma must be finite and >= 0, got {self.sigma}")
        targets = frozenset(self.targets)
        unknown = targets - {"diagonal", "offdiagonal"}
        if unknown:
            raise InvalidParameterError(f"unknown disorder targets: {sorted(unknown)}")
        object.__setattr__(self, "targets", targets)


_TARGET_TAGS = {"diagonal": 0, "offdiagonal": 1}


def _gaussian_draws(seed: int, tag: int, count: int) -> np.ndarray:
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(tag)], dtype=np.uint64)
    raw = Philox(key=key).random_raw(count)
    uniform = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(uniform)


def apply_disorder(h: ChainHamiltonian, spec: DisorderSpec) -> ChainHamiltonian:
    """Return a new chain with independent Gaussian(0, sigma) noise added to
    the targeted entries; the input is untouched."""
    diag = h.diagonal.copy()
    off = h.offdiagonal.copy()
    if spec.sigma > 0:
        if "diagonal" in spec.targets:
            diag += spec.sigma * _gaussian_draws(spec.seed, _TARGET_TAGS["diagonal"], diag.size)
        if "offdiagonal" in spec.targets and off.size:
            off += spec.sigma * _gaussian_draws(spec.seed, _TARGET_TAGS["offdiagonal"], off.size)
    return ChainHamiltonian(diag, off)


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionSpec:
    """One primitive scalar term of a pump schedule.

    value(t) = offset + amplitude * f(2*pi*frequency_multiple*t/T + phase)
    with f in {sin, cos}; "const" is offset alone and "linear" is
    offset + amplitude*(t/T).
    """

    form: str
    offset: float = 0.0
    amplitude: float = 0.0
    frequency_multiple: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if self.form not in _FORM_IDS:
            raise InvalidParameterError(f"unknown function form {self.form!r}")
        for name in ("offset", "amplitude", "frequency_multiple", "phase"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")

    def value(self, t: float, period: float) -> float:
        if self.form == "const":
            return self.offset
        if self.form == "linear":
            return self.offset + self.amplitude * (t / period)
        x = 2.0 * np.pi * self.frequency_multiple * t / period + self.phase
        f = np.sin(x) if self.form == "sin" else np.cos(x)
        return self.offset + self.amplitude * f

    def table_row(self, period: float) -> tuple:
        """(form_id, offset, amplitude, omega_rad, phase) row for the kernels."""
        omega = 2.0 * np.pi * self.frequency_multiple / period
        return (_FORM_IDS[self.form], self.offset, self.amplitude, omega, self.phase)

    def to_dict(self) -> dict:
        return {
            "form": self.form,
            "offset": self.offset,
            "amplitude": self.amplitude,
            "frequency_multiple": self.frequency_multiple,
            "phase": self.phase,
        }


def const(value: float) -> FunctionSpec:
    return FunctionSpec("const", offset=value)


@dataclass(frozen=True)
class Schedule:
    """Named periodic parameter functions over one pump period T."""

    kind: str
    period: float
    params: Mapping[str, FunctionSpec] = field(default_factory=dict)
    cycles: int = 1

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise InvalidParameterError(f"unknown schedule kind {self.kind!r}")
        if not (np.isfinite(self.period) and self.period > 0):
            raise InvalidParameterError(f"period must be > 0, got {self.period}")
        if int(self.cycles) < 1:
            raise InvalidParameterError(f"cycles must be >= 1, got {self.cycles}")
        object.__setattr__(self, "cycles", int(self.cycles))
        required = set(SCHEDULE_PARAMS[self.kind])
        got = set(self.params)
        missing = required - got
        extra = got - required
        if missing or extra:
            parts = []
            if missing:
                parts.append(f"missing parameters {sorted(missing)}")
            if extra:
                parts.append(f"unexpected parameters {sorted(extra)}")
            raise InvalidParameterError(f"schedule for kind {self.kind!r}: " + ", ".join(parts))
        object.__setattr__(self, "params", dict(self.params))

    @property
    def total_time(self) -> float:
        return self.cycles * self.period

    def values(self, t: float) -> dict:
        return {name: fn.value(t, self.period) for name, fn in self.params.items()}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "T": self.period,
            "cycles": self.cycles,
            "params": {name: fn.to_dict() for name, fn in sorted(self.params.items())},
        }


def sample_schedule(schedule: Schedule, L: int, t: float) -> ChainHamiltonian:
    """Evaluate the schedule at time t and build the matching chain."""
    if not 0.0 <= t <= schedule.total_time:
        raise InvalidParameterError(
            f"t={t} outside the schedule window [0, {schedule.total_time}]"
        )
    vals = schedule.values(t)
    if schedule.kind == "ssh":
        return build_ssh(L, vals["a"], vals["b"])
    if schedule.kind == "rm":
        return build_rice_mele(L, vals["a"], vals["b"], vals["u"])
    return build_trimer(L, vals["a"], vals["b"], vals["c"], vals["u"], vals["v"], vals["w"])


def schedule_tables(schedule: Schedule, L: int):
    """Kernel encoding of H(t): per-parameter function rows plus the static
    0/1 (and sign) patterns each parameter multiplies."""
    names = SCHEDULE_PARAMS[schedule.kind]
    n = SITES_PER_CELL[schedule.kind] * L
    table = np.array([schedule.params[name].table_row(schedule.period) for name in names], dtype=np.float64)
    pat_diag = np.zeros((len(names), n))
    pat_off = np.zeros((len(names), n - 1))
    if schedule.kind == "ssh":
        pat_off[0, 0::2] = 1.0
        pat_off[1, 1::2] = 1.0
    elif schedule.kind == "rm":
        pat_off[0, 0::2] = 1.0
        pat_off[1, 1::2] = 1.0
        pat_diag[2, 0::2] = 1.0
        pat_diag[2, 1::2] = -1.0
    else:
        for i in range(3):
            pat_off[i, i::3] = 1.0
            pat_diag[3 + i, i::3] = 1.0
    return table, pat_diag, pat_off


# Pump sequences used throughout the figures.


def pump_schedule(period: float = 100.0, cycles: int = 1) -> Schedule:
    """Plain pump: a(t) = 1 - cos(2*pi*t/T), b = 1, u(t) = sin(2*pi*t/T)."""
    return Schedule(
        "rm",
        period,
        {
            "a": FunctionSpec("cos", offset=1.0, amplitude=-1.0),
            "b": const(1.0),
            "u": FunctionSpec("sin", amplitude=1.0),
        },
        cycles,
    )


def optimized_schedule(period: float = 100.0, cycles: int = 1) -> Schedule:
    """Gap-preserving pump: a(t) = 0.5*(1 - cos), u(t) = 0.25*sin, b = 1."""
    return Schedule(
        "rm",
        period,
        {
            "a": FunctionSpec("cos", offset=0.5, amplitude=-0.5),
            "b": const(1.0),
            "u": FunctionSpec("sin", amplitude=0.25),
        },
        cycles,
    )


def bell_transfer_schedule(period: float = 1000.0, cycles: int = 1) -> Schedule:
    """Trimer Bell-state transfer: a = b = 1 - 0.9*cos(2*pi*t/T), c = 1,
    v = 2, u = 1 + cos(pi*t/T), w = 1 - cos(pi*t/T).

    u and w exchange over one period (half-frequency cosine), so the
    schedule repeats only every second cycle."""
    ab = FunctionSpec("cos", offset=1.0, amplitude=-0.9)
    return Schedule(
        "trimer",
        period,
        {
            "a": ab,
            "b": ab,
            "c": const(1.0),
            "u": FunctionSpec("cos", offset=1.0, amplitude=1.0, frequency_multiple=0.5),
            "v": const(2.0),
            "w": FunctionSpec("cos", offset=1.0, amplitude=-1.0, frequency_multiple=0.5),
        },
        cycles,
    )
