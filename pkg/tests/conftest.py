"""Shared oracles and helpers; all tests check the package against
independent routes (dense LAPACK diagonalization, closed forms, power
series), never against the code paths under test."""

import numpy as np
import pytest

from topochain.models import ChainHamiltonian


def dense_eigh(h: ChainHamiltonian):
    """Brute-force dense diagonalization oracle."""
    return np.linalg.eigh(h.to_dense())


def dense_eigvals(h: ChainHamiltonian):
    return np.linalg.eigvalsh(h.to_dense())


def random_chain(rng, max_sites=12, zero_diagonal=False):
    n = int(rng.integers(1, max_sites + 1))
    diag = np.zeros(n) if zero_diagonal else rng.normal(size=n)
    off = rng.normal(size=n - 1)
    return ChainHamiltonian(diag, off)


def exact_propagator_state(h: ChainHamiltonian, psi0, t):
    """psi(t) = sum_l e^{-i E_l t} <psi_l|psi0> |psi_l> via the dense oracle."""
    vals, vecs = dense_eigh(h)
    coeff = vecs.conj().T @ psi0
    return vecs @ (np.exp(-1j * vals * t) * coeff)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
