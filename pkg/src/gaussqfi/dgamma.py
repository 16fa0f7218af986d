"""The second-moment superoperator ``D(Y) = Gamma Y Gamma - w Y w^T``.

This map sends the quadratic coefficient matrix of a candidate symmetric
logarithmic derivative to the corresponding derivative of the covariance
matrix, so inverting it is the core linear-algebra step of Gaussian quantum
estimation.

In a Williamson frame ``Gamma = S diag(nu, nu) S^T`` the map factorises as a
congruence ``(S (x) S) D_thermal (S (x) S)^T``, and ``D_thermal`` is diagonal
on 2x2 mode-pair blocks: the block basis ``{I, w} / sqrt2`` carries eigenvalue
``nu_i nu_j - 1`` (parity +) and ``{sigma_x, sigma_z} / sqrt2`` carries
``nu_i nu_j + 1`` (parity -).  The kernel is therefore spanned, two dimensions
per ordered mode pair, by the parity-+ blocks of vacuum pairs
(``nu_i = nu_j = 1``).  All production solves run through this frame; the
dense ``(2n)^2 x (2n)^2`` matrix representation is exposed only for
verification at small ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, PreconditionError
from .symplectic import symplectic_eigenvalues, symplectic_form, williamson

__all__ = [
    "apply_dgamma",
    "dgamma_matrix",
    "SpectralLine",
    "DGammaSpectrum",
    "dgamma_spectrum",
    "dgamma_pseudoinverse_apply",
    "stein_series_solve",
]

_SQ2 = np.sqrt(2.0)
# orthonormal block basis; parity refers to the sign picked up under
# conjugation by the one-mode symplectic form
_BLOCK_BASIS = (
    (np.eye(2) / _SQ2, +1),
    (np.array([[0.0, 1.0], [-1.0, 0.0]]) / _SQ2, +1),
    (np.array([[0.0, 1.0], [1.0, 0.0]]) / _SQ2, -1),
    (np.array([[1.0, 0.0], [0.0, -1.0]]) / _SQ2, -1),
)


def apply_dgamma(gamma: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Evaluate ``Gamma @ Y @ Gamma^T - w @ Y @ w^T``."""
    gamma = np.asarray(gamma, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if Y.shape != gamma.shape:
        raise ValueError(f"Y has shape {Y.shape}, expected {gamma.shape}")
    w = symplectic_form(gamma.shape[0] // 2)
    return gamma @ Y @ gamma.T - w @ Y @ w.T


def dgamma_matrix(gamma: np.ndarray) -> np.ndarray:
    """Dense matrix representation ``Gamma (x) Gamma - w (x) w``.

    Acts on row-major vectorised matrices; symmetric (the superoperator is
    self-adjoint under ``(X|Y) = tr[X^T Y]``).  Memory is O((2n)^4) — intended
    for verification at n <= 3, not for production solves.
    """
    gamma = np.asarray(gamma, dtype=float)
    w = symplectic_form(gamma.shape[0] // 2)
    return np.kron(gamma, gamma) - np.kron(w, w)


@dataclass(frozen=True)
class SpectralLine:
    """One eigenvalue of the superoperator in the Williamson frame.

    Each ordered mode pair ``(i, j)`` contributes two lines (parity +1 and
    -1), each of multiplicity 2.
    """

    value: float
    modes: tuple[int, int]
    parity: int
    multiplicity: int
    kernel: bool


@dataclass(frozen=True)
class DGammaSpectrum:
    """Spectral data of the superoperator, organised by Williamson frame.

    ``lines`` carry the eigenvalues ``nu_i nu_j -/+ 1``; the associated
    matrix eigendirections are ``S E S^T`` over the block basis ``E``
    (see :meth:`basis_matrices`).  When the frame ``S`` is orthogonal these
    are literal eigenvectors of the dense representation; in general they
    form the congruence frame in which the map is diagonal.
    """

    nu: np.ndarray
    frame: np.ndarray
    lines: tuple[SpectralLine, ...]
    kernel_dimension: int

    def eigenvalues(self) -> np.ndarray:
        """All (2n)^2 eigenvalues with multiplicity, ascending."""
        vals = np.concatenate([[ln.value] * ln.multiplicity for ln in self.lines])
        return np.sort(vals)

    def basis_matrices(self, line: SpectralLine) -> tuple[np.ndarray, np.ndarray]:
        """The two frame matrices ``S E S^T`` spanning ``line``'s eigenspace."""
        n = len(self.nu)
        i, j = line.modes
        sel = 0 if line.parity > 0 else 2
        out = []
        for E2, _ in _BLOCK_BASIS[sel : sel + 2]:
            E = np.zeros((2 * n, 2 * n))
            E[np.ix_([i, n + i], [j, n + j])] = E2
            out.append(self.frame @ E @ self.frame.T)
        return out[0], out[1]


def _kernel_threshold(tol: float, nu: np.ndarray) -> float:
    return tol * (1.0 + float(nu.max()) ** 2)


def dgamma_spectrum(gamma: np.ndarray, tol: float = 1e-9) -> DGammaSpectrum:
    """Spectrum of the superoperator via the Williamson frame.

    Args:
        gamma: admissible covariance matrix (symmetric, ``nu_min >= 1``).
        tol: eigenvalues below ``tol * (1 + nu_max^2)`` are flagged as kernel.

    Returns:
        :class:`DGammaSpectrum`; ``kernel_dimension`` counts 2 per ordered
        vacuum mode pair.
    """
    dec = williamson(gamma)
    nu = dec.nu
    cut = _kernel_threshold(tol, nu)
    lines = []
    kernel_dim = 0
    n = len(nu)
    for i in range(n):
        for j in range(n):
            for parity in (+1, -1):
                value = nu[i] * nu[j] - parity
                kernel = abs(value) < cut
                if kernel:
                    kernel_dim += 2
                lines.append(
                    SpectralLine(
                        value=float(value),
                        modes=(i, j),
                        parity=parity,
                        multiplicity=2,
                        kernel=kernel,
                    )
                )
    return DGammaSpectrum(
        nu=nu, frame=dec.S, lines=tuple(lines), kernel_dimension=kernel_dim
    )


def _block(M: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    return M[np.ix_([i, n + i], [j, n + j])]


def dgamma_pseudoinverse_apply(
    gamma: np.ndarray, X: np.ndarray, tol: float = 1e-9
) -> tuple[np.ndarray, float]:
    """Solve ``D(Y) = X`` through the Williamson frame, dropping kernel modes.

    The input is transported to the thermal frame, divided componentwise by
    the eigenvalues ``nu_i nu_j -/+ 1`` (components on eigenvalues smaller
    than ``tol * (1 + nu_max^2)`` are zeroed), and transported back.  For
    ``X`` in the range of the map this returns an exact solution; otherwise
    ``residual = |D(Y) - X|_F`` measures how much of ``X`` escapes the range,
    and callers should surface it.

    Returns:
        ``(Y, residual)``.
    """
    gamma = np.asarray(gamma, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.shape != gamma.shape:
        raise ValueError(f"X has shape {X.shape}, expected {gamma.shape}")
    dec = williamson(gamma)
    n = len(dec.nu)
    Si = np.linalg.inv(dec.S)
    Xt = Si @ X @ Si.T
    cut = _kernel_threshold(tol, dec.nu)

    Yt = np.zeros_like(Xt)
    for i in range(n):
        for j in range(n):
            blk = _block(Xt, i, j, n)
            out = np.zeros((2, 2))
            for E2, parity in _BLOCK_BASIS:
                lam = dec.nu[i] * dec.nu[j] - parity
                if abs(lam) < cut:
                    continue
                out += (np.sum(blk * E2) / lam) * E2
            Yt[np.ix_([i, n + i], [j, n + j])] = out
    Y = Si.T @ Yt @ Si
    residual = float(np.linalg.norm(apply_dgamma(gamma, Y) - X))
    return Y, residual


def stein_series_solve(
    gamma: np.ndarray,
    dgamma: np.ndarray,
    tol: float = 1e-12,
    max_terms: int = 10_000,
) -> np.ndarray:
    """Solve for the SLD coefficient matrix via the Stein-equation series.

    ``Y = D^-1(dgamma)`` satisfies the discrete-Lyapunov (Stein) equation

        ``Y - H Y H^T = Gamma^-1 dgamma Gamma^-1``,   ``H = Gamma^-1 w``,

    whose fixed-point series ``sum_k H^k (Gamma^-1 dgamma Gamma^-1) H^T^k``
    converges geometrically iff every symplectic eigenvalue exceeds 1 (the
    spectral radius of ``H`` is ``1 / nu_min``).  Serves as an independent
    cross-check of :func:`dgamma_pseudoinverse_apply` away from purity.

    Args:
        gamma: admissible covariance matrix, strictly above purity.
        dgamma: symmetric derivative of the covariance matrix.
        tol: terminate when a term's Frobenius norm drops below ``tol``;
            also the margin of the ``nu_min > 1 + tol`` refusal gate.
        max_terms: hard cap on the number of series terms.

    Raises:
        PreconditionError: if ``nu_min <= 1 + tol`` (flag ``"nu_min"``).
        ConvergenceError: if the cap is hit, or the partial sum fails the
            Stein equation by more than ``10 * tol`` (relative).
    """
    gamma = np.asarray(gamma, dtype=float)
    dgamma = np.asarray(dgamma, dtype=float)
    if dgamma.shape != gamma.shape:
        raise ValueError(f"dgamma has shape {dgamma.shape}, expected {gamma.shape}")
    nu_min = float(symplectic_eigenvalues(gamma)[-1])
    if nu_min <= 1.0 + tol:
        raise PreconditionError(
            "nu_min",
            f"Stein series needs nu_min > 1 (got {nu_min:.6g}); "
            "use the pseudoinverse route at or near purity",
        )
    n = gamma.shape[0] // 2
    H = np.linalg.solve(gamma, symplectic_form(n))
    rhs = np.linalg.solve(gamma, np.linalg.solve(gamma, dgamma).T).T
    rhs = 0.5 * (rhs + rhs.T)

    term = rhs.copy()
    Y = term.copy()
    for _ in range(max_terms):
        term = H @ term @ H.T
        Y += term
        if np.linalg.norm(term) < tol:
            break
    else:
        raise ConvergenceError(
            f"Stein series did not converge within {max_terms} terms "
            f"(nu_min = {nu_min:.6g})"
        )
    check = np.linalg.norm(Y - H @ Y @ H.T - rhs)
    if check > 10 * tol * (1.0 + np.linalg.norm(rhs)):
        raise ConvergenceError(f"Stein equation residual {check:.3e} exceeds tolerance")
    return Y
