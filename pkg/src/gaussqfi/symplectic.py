"""Symplectic linear algebra for Gaussian bosonic states.

Conventions used throughout the package:

* canonical operators are ordered ``R = (Q_1 .. Q_n, P_1 .. P_n)``;
* the symplectic form is ``w = [[0, I], [-I, 0]]`` (so ``w @ w = -I``);
* covariance matrices are vacuum-normalised, ``Gamma_vacuum = I``, i.e.
  ``Gamma_ij = 2 <(R_i - d_i) o (R_j - d_j)>`` with ``o`` the symmetrised
  product.

A covariance matrix describes a physical state iff it is symmetric and all
its symplectic eigenvalues ``nu_k`` (Williamson spectrum) satisfy
``nu_k >= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .exceptions import ConvergenceError

__all__ = [
    "symplectic_form",
    "is_symplectic",
    "symplectic_eigenvalues",
    "CovarianceCheck",
    "validate_covariance",
    "WilliamsonDecomposition",
    "williamson",
    "random_orthogonal_symplectic",
    "random_symplectic",
    "hamiltonian_eigenframe",
    "euler_decompose",
    "direct_sum",
    "direct_sum_vector",
]


def symplectic_form(n: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form ``[[0, I], [-I, 0]]``.

    Args:
        n: number of modes (must be positive).
    """
    if n < 1:
        raise ValueError(f"number of modes must be positive, got {n}")
    w = np.zeros((2 * n, 2 * n))
    w[:n, n:] = np.eye(n)
    w[n:, :n] = -np.eye(n)
    return w


def _check_even_square(M: np.ndarray, name: str) -> int:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2 != 0 or M.shape[0] == 0:
        raise ValueError(f"{name} must be a 2n x 2n matrix, got shape {M.shape}")
    return M.shape[0] // 2


def is_symplectic(S: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff ``S @ w @ S.T == w`` within ``tol`` (max-abs deviation)."""
    n = _check_even_square(S, "S")
    w = symplectic_form(n)
    return bool(np.abs(S @ w @ S.T - w).max() <= tol)


def _sym_sqrt(G: np.ndarray) -> np.ndarray:
    """Symmetric positive square root via eigendecomposition."""
    ev, V = np.linalg.eigh(G)
    if ev[0] <= 0:
        raise ValueError(f"matrix is not positive definite (min eigenvalue {ev[0]:.3e})")
    return (V * np.sqrt(ev)) @ V.T


def symplectic_eigenvalues(gamma: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a symmetric positive-definite matrix, descending.

    Computed from the eigenvalues of ``gamma @ w``, which come in pairs
    ``+/- i nu_k``; the ``nu_k`` are returned sorted in descending order.
    """
    n = _check_even_square(gamma, "gamma")
    ev = np.linalg.eigvals(np.asarray(gamma, dtype=float) @ symplectic_form(n))
    nus = np.sort(np.abs(ev.imag))[::-1]
    return nus[: 2 * n : 2].copy()


@dataclass(frozen=True)
class CovarianceCheck:
    """Diagnostics produced by :func:`validate_covariance`."""

    valid: bool
    nu_min: float
    asymmetry: float
    min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.valid


def validate_covariance(gamma: np.ndarray, tol: float = 1e-10) -> CovarianceCheck:
    """Check that ``gamma`` is an admissible covariance matrix.

    Admissible means symmetric (within ``tol``), positive definite, and with
    symplectic spectrum ``nu_min >= 1 - tol`` (the uncertainty relation
    ``gamma + i w >= 0``).

    Returns:
        :class:`CovarianceCheck` with the verdict and the measured
        ``nu_min`` / asymmetry, so callers can report *why* a matrix was
        rejected.
    """
    gamma = np.asarray(gamma, dtype=float)
    _check_even_square(gamma, "gamma")
    if not np.all(np.isfinite(gamma)):
        return CovarianceCheck(False, np.nan, np.inf, np.nan)
    asym = float(np.abs(gamma - gamma.T).max())
    sym = 0.5 * (gamma + gamma.T)
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    if min_eig <= 0:
        return CovarianceCheck(False, 0.0, asym, min_eig)
    nu_min = float(symplectic_eigenvalues(sym)[-1])
    valid = asym <= tol and nu_min >= 1.0 - tol
    return CovarianceCheck(valid, nu_min, asym, min_eig)


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """Williamson normal form ``gamma = S @ diag(nu, nu) @ S.T``.

    Attributes:
        S: symplectic congruence, ``S @ w @ S.T = w``.
        nu: symplectic eigenvalues, descending.
    """

    S: np.ndarray
    nu: np.ndarray

    @property
    def thermal_diagonal(self) -> np.ndarray:
        return np.concatenate([self.nu, self.nu])

    def reconstruct(self) -> np.ndarray:
        return (self.S * self.thermal_diagonal[None, :]) @ self.S.T


def _williamson_once(gamma: np.ndarray) -> WilliamsonDecomposition:
    n = gamma.shape[0] // 2
    root = _sym_sqrt(gamma)
    A = root @ symplectic_form(n) @ root
    T, Q = la.schur(A)
    # A is antisymmetric, so its real Schur form is block diagonal with
    # 2x2 blocks [[0, nu], [-nu, 0]]; orient each block so nu > 0.
    pairs = []
    for k in range(n):
        b = T[2 * k, 2 * k + 1]
        qcol, pcol = Q[:, 2 * k], Q[:, 2 * k + 1]
        if b < 0:
            b, qcol, pcol = -b, pcol, qcol
        pairs.append((b, qcol, pcol))
    pairs.sort(key=lambda p: -p[0])
    nu = np.array([p[0] for p in pairs])
    Qr = np.column_stack([p[1] for p in pairs] + [p[2] for p in pairs])
    scale = np.concatenate([nu, nu])
    S = root @ Qr / np.sqrt(scale)[None, :]
    return WilliamsonDecomposition(S=S, nu=nu)


def williamson(gamma: np.ndarray, tol: float = 1e-10) -> WilliamsonDecomposition:
    """Williamson decomposition of a symmetric positive-definite matrix.

    Route: Schur decomposition of ``gamma^(1/2) @ w @ gamma^(1/2)`` with
    symplectic normalisation of the eigenvector pairs.  If the first pass
    misses ``tol``, one refinement step is applied (re-decompose the residual
    ``S^-1 gamma S^-T``, which is nearly diagonal, and compose).

    Args:
        gamma: symmetric positive-definite ``2n x 2n`` matrix.  Validity as a
            quantum state is *not* required here; the decomposition is also
            used on operator matrices whose "nu" may be < 1.
        tol: max-abs reconstruction tolerance, relative to ``max(1, |gamma|)``.

    Raises:
        ValueError: if ``gamma`` is not symmetric positive definite.
        ConvergenceError: if the reconstruction error still exceeds ``tol``
            after refinement.
    """
    gamma = np.asarray(gamma, dtype=float)
    _check_even_square(gamma, "gamma")
    asym = np.abs(gamma - gamma.T).max()
    if asym > max(tol, 1e-10) * (1 + np.abs(gamma).max()):
        raise ValueError(f"gamma is not symmetric (max asymmetry {asym:.3e})")
    gamma = 0.5 * (gamma + gamma.T)

    dec = _williamson_once(gamma)
    scale = max(1.0, float(np.abs(gamma).max()))
    err = np.abs(dec.reconstruct() - gamma).max()
    if err > tol * scale:
        # one step of iterative refinement
        Si = np.linalg.inv(dec.S)
        residual = Si @ gamma @ Si.T
        polish = _williamson_once(0.5 * (residual + residual.T))
        dec = WilliamsonDecomposition(S=dec.S @ polish.S, nu=polish.nu)
        err = np.abs(dec.reconstruct() - gamma).max()
        if err > tol * scale:
            raise ConvergenceError(
                f"williamson reconstruction error {err:.3e} exceeds tol after refinement"
            )
    return dec


def random_orthogonal_symplectic(n: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Haar-random orthogonal symplectic matrix (a passive network).

    Orthogonal symplectic matrices are exactly the images
    ``[[c, s], [-s, c]]`` of n x n unitaries ``u = c - i s``; the unitary is
    drawn Haar-uniformly via QR of a complex Ginibre sample.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Qc, R = np.linalg.qr(Z)
    diag = np.diagonal(R)
    Qc = Qc * (diag / np.abs(diag))[None, :]
    c, s = Qc.real, -Qc.imag
    return np.block([[c, s], [-s, c]])


def random_symplectic(n: int, seed: int | None = None, squeeze_cap: float = 1.0) -> np.ndarray:
    """Seeded random symplectic matrix in Euler form ``O1 diag(e^z, e^-z) O2``.

    ``O1, O2`` are Haar orthogonal-symplectic and the squeeze parameters are
    uniform with ``|z_k| <= squeeze_cap``.  Deterministic for a fixed seed.
    """
    if squeeze_cap < 0:
        raise ValueError("squeeze_cap must be non-negative")
    rng = np.random.default_rng(seed)
    O1 = random_orthogonal_symplectic(n, rng)
    O2 = random_orthogonal_symplectic(n, rng)
    z = rng.uniform(-squeeze_cap, squeeze_cap, n)
    return (O1 * np.concatenate([np.exp(z), np.exp(-z)])[None, :]) @ O2


def _hamiltonian_deviation(W: np.ndarray, w: np.ndarray) -> float:
    return float(np.abs(W @ w + w @ W).max())


def hamiltonian_eigenframe(W: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalise a symmetric Hamiltonian matrix by an orthogonal symplectic.

    A symmetric ``W`` with ``W w + w W = 0`` has spectrum symmetric about 0;
    this returns ``(O, lam)`` with ``O`` orthogonal *and* symplectic,
    ``lam >= 0`` descending, and ``O @ W @ O.T = diag(lam, -lam)``.

    The pairing uses the fact that ``w`` maps eigenvectors of ``W`` with
    eigenvalue ``+lam`` to eigenvectors with ``-lam``.

    Raises:
        ValueError: if ``W`` is not symmetric-Hamiltonian within
            ``tol * (1 + |W|)``.
    """
    W = np.asarray(W, dtype=float)
    n = _check_even_square(W, "W")
    w = symplectic_form(n)
    scale = 1.0 + float(np.abs(W).max())
    if np.abs(W - W.T).max() > tol * scale:
        raise ValueError("W is not symmetric")
    if _hamiltonian_deviation(W, w) > tol * scale:
        raise ValueError("W does not anticommute with the symplectic form")

    ev, V = np.linalg.eigh(W)
    order = np.argsort(-ev)
    pos = [k for k in order if ev[k] > tol * scale][:n]
    lam = list(ev[pos])
    qrows = [V[:, k] for k in pos]

    # the (numerically) zero eigenspace is w-invariant; pick symplectic pairs
    # (v, -w v) inside it by Gram-Schmidt against the pairs already chosen
    if len(qrows) < n:
        null = [V[:, k] for k in order if abs(ev[k]) <= tol * scale]
        chosen: list[np.ndarray] = []
        for cand in null:
            if len(qrows) == n:
                break
            v = cand.copy()
            for u in chosen:
                v -= (u @ v) * u + ((w @ u) @ v) * (w @ u)
            nrm = np.linalg.norm(v)
            if nrm < 1e-8:
                continue
            v /= nrm
            chosen.append(v)
            qrows.append(v)
            lam.append(0.0)
        if len(qrows) < n:
            raise ValueError("failed to build a symplectic basis of the null space")

    prows = [-(w @ v) for v in qrows]
    O = np.vstack([np.array(qrows), np.array(prows)])
    return O, np.array(lam)


def euler_decompose(S: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Euler (Bloch-Messiah) factorisation ``S = O1 @ diag(e^z, e^-z) @ O2``.

    ``O1, O2`` are orthogonal symplectic and ``z`` are the squeeze parameters,
    descending.  Built from the polar decomposition ``S = P O`` followed by an
    orthogonal-symplectic eigenframe of ``log P`` (which is symmetric
    Hamiltonian because ``P^t`` is symplectic for all ``t``).

    Raises:
        ValueError: if ``S`` is not symplectic within ``tol``.
    """
    S = np.asarray(S, dtype=float)
    n = _check_even_square(S, "S")
    if not is_symplectic(S, tol):
        raise ValueError("S is not symplectic")
    w = symplectic_form(n)

    P = _sym_sqrt(S @ S.T)
    O_polar = np.linalg.solve(P, S)
    ev, V = np.linalg.eigh(P)
    X = (V * np.log(ev)) @ V.T
    X = 0.5 * (X + X.T)
    X = 0.5 * (X + w @ X @ w)  # project onto the Hamiltonian subspace
    frame, z = hamiltonian_eigenframe(X, tol)
    O1 = frame.T
    O2 = frame @ O_polar
    return O1, z, O2


def direct_sum(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Mode-wise direct sum of two matrices in (Q.., P..) ordering.

    The result acts as ``A`` on the first block of modes and as ``B`` on the
    remaining ones; Q/P sectors are interleaved accordingly (a plain block
    diagonal would scramble the ordering convention).
    """
    nA = _check_even_square(A, "A")
    nB = _check_even_square(B, "B")
    n = nA + nB
    out = np.zeros((2 * n, 2 * n), dtype=np.result_type(A, B))
    idxA = list(range(nA)) + list(range(n, n + nA))
    idxB = list(range(nA, n)) + list(range(n + nA, 2 * n))
    out[np.ix_(idxA, idxA)] = A
    out[np.ix_(idxB, idxB)] = B
    return out


def direct_sum_vector(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mode-wise direct sum of two phase-space vectors in (Q.., P..) ordering."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or a.size % 2 or b.ndim != 1 or b.size % 2:
        raise ValueError("inputs must be even-length vectors")
    nA, nB = a.size // 2, b.size // 2
    return np.concatenate([a[:nA], b[:nB], a[nA:], b[nB:]])
