"""Two-level reduction of the chain in its edge-state subspace.

In the topological phase the chain dynamics restricted to the two edge
states is a Landau-Zener model H = [[u, g], [g, -u]] (plus an identity
shift for the trimer blocks): u is the staggered potential and
g = Xi^2 a lam^(L-1) the exponentially small edge-edge coupling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .dynamics import HamiltonianProvider, IntegratorConfig, Trajectory, evolve
from .errors import InvalidParameterError, PhaseDomainError
from .models import ChainHamiltonian, FunctionSpec, Schedule, const
from .spectra import analytic_edge_states, coupling_ratio_norm_sq, eigendecompose
from . import models


@dataclass(frozen=True)
class TwoLevelSystem:
    """H = offset*I + [[u, g], [g, -u]]; eigenvalues offset -+ sqrt(u^2+g^2)."""

    u: float
    g: float
    offset: float = 0.0

    def to_chain(self) -> ChainHamiltonian:
        return ChainHamiltonian([self.offset + self.u, self.offset - self.u], [self.g])


def lz_eigen(sys: TwoLevelSystem) -> Tuple[float, float]:
    """(E_minus, E_plus), ascending."""
    r = float(np.hypot(sys.u, sys.g))
    return (sys.offset - r, sys.offset + r)


def edge_coupling(a: float, b: float, L: int) -> float:
    """Xi^2 * a * lam^(L-1) with lam = -a/b.

    No phase-domain guard: outside |a| < |b| this is the analytic
    continuation used to draw closed pump paths through the trivial region.
    """
    lam = -a / b
    return coupling_ratio_norm_sq(lam, int(L)) * a * lam ** (int(L) - 1)


def reduce_rm(a: float, b: float, u: float, L: int) -> TwoLevelSystem:
    """Project the Rice-Mele chain onto its two edge states."""
    if abs(a) >= abs(b):
        raise PhaseDomainError(f"reduction needs |a| < |b|, got a={a}, b={b}")
    return TwoLevelSystem(u=u, g=edge_coupling(a, b, L), offset=0.0)


def trimer_edge_coupling(a: float, c: float, v: float, L: int, upper: bool) -> float:
    """g_pm = [L(a+v)+a]/2 * Xi^2 * (-+lam)^(L-1) with lam = a/c."""
    lam = a / c
    sign_lam = -lam if upper else lam
    return (L * (a + v) + a) / 2.0 * coupling_ratio_norm_sq(lam, L) * sign_lam ** (L - 1)


def reduce_trimer(
    a: float,
    c: float,
    u: float,
    v: float,
    w: float,
    L: int,
    b: Optional[float] = None,
) -> Tuple[TwoLevelSystem, TwoLevelSystem]:
    """Two-level blocks (H_plus, H_minus) of the mirror-symmetric trimer
    chain in its upper/lower edge-state pairs.

    H_pm = [[u/2, g_pm], [g_pm, w/2]] +- (a +- v/2) * I, encoded with
    detuning (u-w)/4 and the remaining diagonal absorbed into the offset.
    """
    if b is not None and b != a:
        raise InvalidParameterError(f"trimer reduction needs the mirror case a = b, got a={a}, b={b}")
    if abs(a) >= abs(c):
        raise PhaseDomainError(f"trimer reduction needs |a| < |c|, got a={a}, c={c}")
    L = int(L)
    detuning = (u - w) / 4.0
    base = (u + w) / 4.0
    h_plus = TwoLevelSystem(detuning, trimer_edge_coupling(a, c, v, L, upper=True), base + a + v / 2.0)
    h_minus = TwoLevelSystem(detuning, trimer_edge_coupling(a, c, v, L, upper=False), base - a + v / 2.0)
    return h_plus, h_minus


# ---------------------------------------------------------------------------
# Parameter-space paths
# ---------------------------------------------------------------------------


class PathClass(enum.Enum):
    AROUND_CRITICAL = "around-critical"
    THROUGH_CRITICAL = "through-critical"
    NO_CROSSING = "no-crossing"


@dataclass(frozen=True, eq=False)
class LZPath:
    """A path t -> (u(t), g(t)) over [0, T], sampled, and, when built from
    primitive function terms, evolvable without interpolation."""

    times: np.ndarray
    u: np.ndarray
    g: np.ndarray
    period: float
    u_fn: Optional[FunctionSpec] = None
    g_fn: Optional[FunctionSpec] = None

    def __post_init__(self):
        if self.times.size < 3:
            raise InvalidParameterError("a path needs at least 3 samples")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidParameterError("path times must increase strictly")

    @classmethod
    def from_functions(cls, u_fn: FunctionSpec, g_fn: FunctionSpec, period: float, n_samples: int = 201) -> "LZPath":
        times = np.linspace(0.0, period, int(n_samples))
        u = np.array([u_fn.value(t, period) for t in times])
        g = np.array([g_fn.value(t, period) for t in times])
        return cls(times, u, g, period, u_fn, g_fn)

    @classmethod
    def arc(cls, alpha: float, period: float, n_samples: int = 201) -> "LZPath":
        """Path A: the half circle u = alpha*cos(pi t/T - pi), g = alpha*sin(pi t/T - pi)."""
        u_fn = FunctionSpec("cos", amplitude=alpha, frequency_multiple=0.5, phase=-np.pi)
        g_fn = FunctionSpec("sin", amplitude=alpha, frequency_multiple=0.5, phase=-np.pi)
        return cls.from_functions(u_fn, g_fn, period, n_samples)

    @classmethod
    def line(cls, alpha: float, period: float, n_samples: int = 201) -> "LZPath":
        """Path B: u = alpha*(2t/T - 1) straight through the critical point, g = 0."""
        u_fn = FunctionSpec("linear", offset=-alpha, amplitude=2.0 * alpha)
        return cls.from_functions(u_fn, const(0.0), period, n_samples)

    @classmethod
    def line_at_angle(cls, alpha: float, theta: float, period: float, n_samples: int = 201) -> "LZPath":
        """Path C: the path-B ramp tilted so that g = tan(theta) * u."""
        u_fn = FunctionSpec("linear", offset=-alpha, amplitude=2.0 * alpha)
        tan = np.tan(theta)
        g_fn = FunctionSpec("linear", offset=-alpha * tan, amplitude=2.0 * alpha * tan)
        return cls.from_functions(u_fn, g_fn, period, n_samples)

    @classmethod
    def from_schedule(cls, schedule: Schedule, L: int, n_samples: int = 201) -> "LZPath":
        """The (u, g) trace a Rice-Mele pump schedule induces via the
        reduction, continued analytically through the trivial region."""
        if schedule.kind != "rm":
            raise InvalidParameterError("path extraction needs a Rice-Mele schedule")
        times = np.linspace(0.0, schedule.period, int(n_samples))
        u = np.empty(times.size)
        g = np.empty(times.size)
        for i, t in enumerate(times):
            vals = schedule.values(t)
            u[i] = vals["u"]
            g[i] = edge_coupling(vals["a"], vals["b"], L)
        return cls(times, u, g, schedule.period)


def classify_path(path: LZPath, tol: Optional[float] = None) -> PathClass:
    """Around vs through the critical point u = g = 0 (or neither).

    The default tolerance is 1e-6 of the largest path radius; the result
    depends only on the ordered samples, not on their time stamps.
    """
    radius = np.hypot(path.u, path.g)
    if tol is None:
        tol = 1e-6 * float(radius.max())
    if tol <= 0:
        raise InvalidParameterError("tol must be > 0")
    nonzero = path.u[np.abs(path.u) > tol]
    changes_sign = nonzero.size >= 2 and nonzero[0] * nonzero[-1] < 0
    if not changes_sign:
        return PathClass.NO_CROSSING
    if radius.min() < tol:
        return PathClass.THROUGH_CRITICAL
    return PathClass.AROUND_CRITICAL


def path_c_hamiltonian(u: float, theta: float) -> np.ndarray:
    """H = u/cos(theta) * [[cos, sin], [sin, -cos]](theta) of the tilted ramp."""
    if abs(np.cos(theta)) < 1e-12:
        raise InvalidParameterError("theta = +-pi/2 is singular")
    return u / np.cos(theta) * np.array([[np.cos(theta), np.sin(theta)], [np.sin(theta), -np.cos(theta)]])


def path_c_frame(theta: float) -> np.ndarray:
    """Rotation R taking {|L>, |R>} to the time-independent eigenbasis of
    the path-C Hamiltonian: R H R^T is diagonal with entries +-u/cos(theta).

    Rows are (cos t/2, sin t/2) and (-sin t/2, cos t/2); the upper state is
    cos(t/2)|L> + sin(t/2)|R>.  The sign of the second row makes R a proper
    rotation, which the printed symmetric form (det = cos theta) is not.
    """
    if not abs(theta) < np.pi / 2:
        raise InvalidParameterError(f"|theta| must be < pi/2, got {theta}")
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, s], [-s, c]])


def lz_evolve(
    path: LZPath,
    psi0: np.ndarray,
    cfg: IntegratorConfig = IntegratorConfig(),
    n_records: int = 201,
) -> Trajectory:
    """Integrate the two-level Schroedinger equation along the path.

    Analytic paths are resampled exactly; sample-only paths fall back to
    linear interpolation between their stored points.
    """
    if path.u_fn is not None and path.g_fn is not None:
        table = np.array([path.u_fn.table_row(path.period), path.g_fn.table_row(path.period)])
        pat_diag = np.array([[1.0, -1.0], [0.0, 0.0]])
        pat_off = np.array([[0.0], [1.0]])

        def fn(t, _p=path):
            return ChainHamiltonian(
                [_p.u_fn.value(t, _p.period), -_p.u_fn.value(t, _p.period)],
                [_p.g_fn.value(t, _p.period)],
            )

        provider = HamiltonianProvider(fn, (table, path.period, pat_diag, pat_off))
    else:
        def fn(t, _p=path):
            u = float(np.interp(t, _p.times, _p.u))
            g = float(np.interp(t, _p.times, _p.g))
            return ChainHamiltonian([u, -u], [g])

        provider = HamiltonianProvider(fn)
    return evolve(provider, psi0, path.times[0], path.times[-1], cfg, n_records)


# ---------------------------------------------------------------------------
# Reduced-vs-full comparison and reporting
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ReductionComparison:
    times: np.ndarray
    populations_full: np.ndarray     # (nt, 2): |<L|psi>|^2, |<R|psi>|^2
    populations_reduced: np.ndarray  # (nt, 2)
    max_deviation: float


def compare_reduction(
    schedule: Schedule,
    L: int,
    cfg: IntegratorConfig = IntegratorConfig(),
    window: Tuple[float, float] = (0.0, 0.1),
    n_records: int = 101,
) -> ReductionComparison:
    """Evolve the full chain and its two-level reduction from |L> over a
    window (given as fractions of T) and report the worst population gap.

    The projectors use the instantaneous analytic edge states of
    (a(t), b(t)); the window must stay inside the topological phase.
    """
    if schedule.kind != "rm":
        raise InvalidParameterError("reduction comparison needs a Rice-Mele schedule")
    t0, t1 = (f * schedule.period for f in window)
    if not t1 > t0:
        raise InvalidParameterError("empty comparison window")

    vals0 = schedule.values(t0)
    pair0 = analytic_edge_states(vals0["a"], vals0["b"], L)
    psi0 = pair0.left.astype(np.complex128)

    full = evolve(HamiltonianProvider.from_schedule(schedule, L), psi0, t0, t1, cfg, n_records)

    def reduced_fn(t):
        vals = schedule.values(t)
        sys = reduce_rm(vals["a"], vals["b"], vals["u"], L)
        return sys.to_chain()

    reduced = evolve(HamiltonianProvider(reduced_fn), np.array([1.0, 0.0], dtype=np.complex128), t0, t1, cfg, n_records)

    pop_full = np.empty((full.times.size, 2))
    for i, t in enumerate(full.times):
        vals = schedule.values(t)
        pair = analytic_edge_states(vals["a"], vals["b"], L)
        pop_full[i, 0] = abs(np.vdot(pair.left, full.states[i])) ** 2
        pop_full[i, 1] = abs(np.vdot(pair.right, full.states[i])) ** 2
    pop_reduced = np.abs(reduced.states) ** 2
    dev = float(np.abs(pop_full - pop_reduced).max())
    return ReductionComparison(full.times, pop_full, pop_reduced, dev)


def reduction_report(a: float, b: float, u: float, L: int) -> dict:
    """Closed-form reduction next to the exact mid-gap splitting of the
    matching Rice-Mele chain; ``rel_err`` compares 2*sqrt(u^2+g^2) with it."""
    sys = reduce_rm(a, b, u, L)
    spectrum = eigendecompose(models.build_rice_mele(L, a, b, u))
    order = np.argsort(np.abs(spectrum.eigenvalues))
    pair = np.sort(spectrum.eigenvalues[order[:2]])
    exact_splitting = float(pair[1] - pair[0])
    model_splitting = 2.0 * float(np.hypot(sys.u, sys.g))
    rel_err = abs(model_splitting - exact_splitting) / exact_splitting if exact_splitting else np.inf
    lam = -a / b
    return {
        "u": float(u),
        "g": sys.g,
        "offset": sys.offset,
        "lambda": lam,
        "xi_norm_sq": coupling_ratio_norm_sq(lam, int(L)),
        "exact_splitting": exact_splitting,
        "rel_err": rel_err,
    }
