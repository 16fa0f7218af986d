"""Shared seeded generators for randomised sweeps.

Everything here is deterministic given the seed argument, so failures
reproduce exactly.
"""

import numpy as np

from gaussqfi import (
    GaussianModelPoint,
    random_orthogonal_symplectic,
    random_symplectic,
)


def thermal_diag(nu):
    """Diagonal covariance ``diag(nu, nu)`` in (Q.., P..) ordering."""
    nu = np.asarray(nu, dtype=float)
    return np.diag(np.concatenate([nu, nu]))


def random_state(n, seed, nu_min=1.0, nu_max=3.0, squeeze_cap=1.0):
    """Random covariance with a generic (squeezing) Williamson frame.

    Returns ``(gamma, S, nu)`` with ``nu`` descending in [nu_min, nu_max].
    """
    rng = np.random.default_rng(seed)
    S = random_symplectic(n, seed=rng, squeeze_cap=squeeze_cap)
    nu = np.sort(rng.uniform(nu_min, nu_max, n))[::-1]
    return S @ thermal_diag(nu) @ S.T, S, nu


def random_passive_state(n, seed, pure_modes=0, nu_max=3.0):
    """Random covariance whose Williamson frame is orthogonal (passive).

    ``pure_modes`` of the ``n`` modes sit exactly at the vacuum temperature;
    the rest are drawn from [1.2, nu_max] (bounded away from purity so kernel
    bookkeeping is unambiguous).
    """
    rng = np.random.default_rng(seed)
    O = random_orthogonal_symplectic(n, rng)
    nu = rng.uniform(1.2, nu_max, n)
    nu[:pure_modes] = 1.0
    nu = np.sort(nu)[::-1]
    return O @ thermal_diag(nu) @ O.T, O, nu


def random_symmetric(m, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((m, m))
    return scale * 0.5 * (X + X.T)


def random_hamiltonian(n, seed, scale=1.0):
    """Symmetric matrix anticommuting with the symplectic form: [[A,B],[B,-A]]."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    B = rng.standard_normal((n, n))
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    return scale * np.block([[A, B], [B, -A]])


def random_model_point(n, seed, nu_min=1.2, nu_max=3.0, with_first_moments=True):
    """Generic nonsingular model point with random derivatives."""
    gamma, _, _ = random_state(n, seed, nu_min=nu_min, nu_max=nu_max)
    rng = np.random.default_rng(seed + 1)
    dgamma = random_symmetric(2 * n, seed + 2)
    if with_first_moments:
        d = rng.standard_normal(2 * n)
        dd = rng.standard_normal(2 * n)
    else:
        d = np.zeros(2 * n)
        dd = np.zeros(2 * n)
    return GaussianModelPoint(d=d, gamma=gamma, dd=dd, dgamma=dgamma)


def random_isothermal_point(n, seed, nu=1.0):
    """Equal-temperature point whose derivative preserves the temperature.

    ``gamma = nu S S^T`` has all symplectic eigenvalues equal to ``nu``, and
    the derivative is a Hamiltonian direction in the same frame, so both
    equal-temperature gates hold; first moments are static.
    """
    rng = np.random.default_rng(seed)
    S = random_symplectic(n, seed=rng, squeeze_cap=0.8)
    gamma = nu * S @ S.T
    dgamma = nu * S @ random_hamiltonian(n, seed + 17) @ S.T
    dgamma = 0.5 * (dgamma + dgamma.T)
    return GaussianModelPoint(
        d=np.zeros(2 * n), gamma=gamma, dd=np.zeros(2 * n), dgamma=dgamma
    )
