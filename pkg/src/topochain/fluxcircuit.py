"""Charge-basis quantization of the gap-tunable (gradiometric) flux qubit.

Two junction phases survive the flux-quantization constraints; plane waves
exp(-i(k*phi_1 + l*phi_2)) with k, l Cooper-pair numbers in
[-N_c, N_c] give a (2N_c+1)^2 Hermitian matrix.  Convention:
exp(i*phi)|k> = |k+1> on each junction, so the alpha-junction term couples
(k, l) -> (k+1, l+1) with amplitude -E_J*alpha*C_alpha*exp(i*chi), where
C_alpha = cos(pi*(beta*(N - f_Sigma) + f_alpha)) and chi = pi*(n - f_eps).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import InvalidParameterError


@dataclass(frozen=True)
class FluxQubitSpec:
    """Circuit parameters; energies in units of E_J.

    ``f_sigma_kappa`` ties the total frustration to the alpha-loop flux,
    f_Sigma = kappa * f_alpha.  ``n_total`` and ``n_diff`` are the trapped
    fluxoid numbers N = N_1 + N_2 + N_alpha and n = N_1 - N_2.
    """

    ej: float = 1.0
    ej_over_ec: float = 50.0
    alpha: float = 0.5
    beta: float = 0.05
    f_sigma_kappa: float = 50.0
    n_total: int = 1
    n_diff: int = 1
    charge_cutoff: int = 15

    def __post_init__(self):
        if self.ej <= 0:
            raise InvalidParameterError("ej must be > 0")
        if self.ej_over_ec <= 0:
            raise InvalidParameterError("ej_over_ec must be > 0")
        if self.alpha <= 0:
            raise InvalidParameterError("alpha must be > 0")
        if int(self.charge_cutoff) < 1:
            raise InvalidParameterError("charge_cutoff must be >= 1")

    @property
    def ec(self) -> float:
        return self.ej / self.ej_over_ec

    @property
    def dimension(self) -> int:
        return (2 * int(self.charge_cutoff) + 1) ** 2

    def with_cutoff(self, charge_cutoff: int) -> "FluxQubitSpec":
        return replace(self, charge_cutoff=charge_cutoff)


@dataclass(frozen=True)
class QubitCharacter:
    """Gap and flux-coupling matrix elements at one bias point."""

    gap: float
    g_perp: float
    g_par: float
    f_alpha: float
    f_eps: float


def _single_junction_ops(n_c: int):
    dim = 2 * n_c + 1
    charge = np.arange(-n_c, n_c + 1, dtype=np.float64)
    raise_op = np.eye(dim, k=-1)  # exp(i*phi): |k> -> |k+1>
    return charge, raise_op, np.eye(dim)


def _alpha_cosine(spec: FluxQubitSpec, f_alpha: float) -> float:
    f_sigma = spec.f_sigma_kappa * f_alpha
    return float(np.cos(np.pi * (spec.beta * (spec.n_total - f_sigma) + f_alpha)))


def build_charge_hamiltonian(spec: FluxQubitSpec, f_alpha: float, f_eps: float) -> np.ndarray:
    """Hermitian charge-basis Hamiltonian at the given reduced fluxes."""
    n_c = int(spec.charge_cutoff)
    charge, raise_op, ident = _single_junction_ops(n_c)
    k_sq = charge**2

    coef = 4.0 * spec.ec / (1.0 + 4.0 * spec.alpha)
    kinetic = coef * (
        (1.0 + 2.0 * spec.alpha) * (np.add.outer(k_sq, k_sq))
        - 4.0 * spec.alpha * np.outer(charge, charge)
    ).ravel()

    h = np.diag(kinetic + spec.ej * 2.0 * (1.0 + spec.alpha)).astype(np.complex128)

    cos_phi = 0.5 * (raise_op + raise_op.T)
    h -= spec.ej * np.kron(cos_phi, ident)
    h -= spec.ej * np.kron(ident, cos_phi)

    chi = np.pi * (spec.n_diff - f_eps)
    both_up = np.kron(raise_op, raise_op)
    amp = spec.ej * spec.alpha * _alpha_cosine(spec, f_alpha)
    h -= amp * (np.exp(1j * chi) * both_up + np.exp(-1j * chi) * both_up.T)
    return h


def d_hamiltonian_d_feps(spec: FluxQubitSpec, f_alpha: float, f_eps: float) -> np.ndarray:
    """Analytic dH/df_eps; only chi = pi*(n - f_eps) depends on f_eps."""
    n_c = int(spec.charge_cutoff)
    _, raise_op, _ = _single_junction_ops(n_c)
    chi = np.pi * (spec.n_diff - f_eps)
    both_up = np.kron(raise_op, raise_op)
    amp = spec.ej * spec.alpha * _alpha_cosine(spec, f_alpha)
    # d/df_eps of -amp*(e^{i chi} S + e^{-i chi} S^T) with dchi/df_eps = -pi
    return 1j * np.pi * amp * (np.exp(1j * chi) * both_up - np.exp(-1j * chi) * both_up.T)


def _eigensystem(spec: FluxQubitSpec, f_alpha: float, f_eps: float, n_levels: int, vectors: bool):
    n_levels = int(n_levels)
    if not 1 <= n_levels <= spec.dimension:
        raise InvalidParameterError(f"n_levels must be in 1..{spec.dimension}, got {n_levels}")
    h = build_charge_hamiltonian(spec, f_alpha, f_eps)
    if vectors:
        return scipy.linalg.eigh(h, subset_by_index=(0, n_levels - 1))
    return scipy.linalg.eigh(h, subset_by_index=(0, n_levels - 1), eigvals_only=True)


def qubit_levels(spec: FluxQubitSpec, f_alpha: float, f_eps: float, n_levels: int) -> np.ndarray:
    """Lowest ``n_levels`` eigenvalues, ascending."""
    return _eigensystem(spec, f_alpha, f_eps, n_levels, vectors=False)


def qubit_gap(spec: FluxQubitSpec, f_alpha: float) -> float:
    """Qubit frequency omega = E_1 - E_0 at the optimal point f_eps = 0."""
    levels = qubit_levels(spec, f_alpha, 0.0, 2)
    return float(levels[1] - levels[0])


def coupling_elements(spec: FluxQubitSpec, f_alpha: float, f_eps: float) -> QubitCharacter:
    """|g_perp| = |<e|dH/df_eps|g>| and |g_par| = |<+|dH/df_eps|->| with
    |+-> = (|e> +- |g>)/sqrt(2).

    The relative eigenvector phase is gauged so the cross element is real
    and nonnegative (the gauge in which the phase-space wavefunctions are
    real); there <+|dH/df_eps|-> reduces to (I_1 - I_0)/2, which vanishes
    at the optimal point by parity.
    """
    vals, vecs = _eigensystem(spec, f_alpha, f_eps, 2, vectors=True)
    ground = vecs[:, 0]
    excited = vecs[:, 1]
    dh = d_hamiltonian_d_feps(spec, f_alpha, f_eps)
    dh_ground = dh @ ground
    cross = np.vdot(excited, dh_ground)
    i0 = float(np.real(np.vdot(ground, dh_ground)))
    i1 = float(np.real(np.vdot(excited, dh @ excited)))
    g_perp = abs(cross)
    g_par = abs(i1 - i0) / 2.0
    return QubitCharacter(float(vals[1] - vals[0]), float(g_perp), float(g_par), f_alpha, f_eps)


def persistent_currents(spec: FluxQubitSpec, f_alpha: float, f_eps: float):
    """Loop currents I_0 = <g|dH/df_eps|g> and I_1 = <e|dH/df_eps|e>."""
    _, vecs = _eigensystem(spec, f_alpha, f_eps, 2, vectors=True)
    dh = d_hamiltonian_d_feps(spec, f_alpha, f_eps)
    i0 = float(np.real(np.vdot(vecs[:, 0], dh @ vecs[:, 0])))
    i1 = float(np.real(np.vdot(vecs[:, 1], dh @ vecs[:, 1])))
    return i0, i1


def sweep_point(spec: FluxQubitSpec, f_alpha: float, f_eps: float, n_levels: int):
    """One flux-sweep sample from a single diagonalization: the lowest
    ``n_levels`` energies plus the coupling elements of the qubit pair."""
    n_levels = max(int(n_levels), 2)
    vals, vecs = _eigensystem(spec, f_alpha, f_eps, n_levels, vectors=True)
    dh = d_hamiltonian_d_feps(spec, f_alpha, f_eps)
    dh_ground = dh @ vecs[:, 0]
    g_perp = abs(np.vdot(vecs[:, 1], dh_ground))
    i0 = float(np.real(np.vdot(vecs[:, 0], dh_ground)))
    i1 = float(np.real(np.vdot(vecs[:, 1], dh @ vecs[:, 1])))
    character = QubitCharacter(float(vals[1] - vals[0]), float(g_perp), abs(i1 - i0) / 2.0, f_alpha, f_eps)
    return vals, character
