"""Optimal homodyne measurement design for equal-temperature models.

For a model with all symplectic eigenvalues equal to ``nu``, a
temperature-preserving derivative, and static first moments, there is a
symplectic frame ``T`` in which the state looks fully thermal
(``T Gamma T^T = nu I``) while the derivative is diagonal,
``T dGamma T^T = diag(nu lam, -nu lam)``.  In that frame the best quadrature
measurement is simply "measure every Q": it achieves
``I* = sum_k lam_k^2 / 2``, and no other homodyne frame beats it.  For pure
states ``I*`` equals the quantum Fisher information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimation import gaussian_distribution_fisher
from .exceptions import ConfigError, ConvergenceError, PreconditionError
from .models import GaussianModelPoint, check_isothermal
from .symplectic import (
    direct_sum,
    direct_sum_vector,
    hamiltonian_eigenframe,
    is_symplectic,
    validate_covariance,
    williamson,
)

__all__ = [
    "IsothermalFrame",
    "isothermal_frame",
    "optimal_homodyne_fisher",
    "homodyne_fisher",
    "HomodynePlan",
    "homodyne_plan",
    "ancilla_extend",
]


@dataclass(frozen=True)
class IsothermalFrame:
    """Normal frame of an equal-temperature model point.

    Attributes:
        T: symplectic transformation to the normal frame.
        lam: non-negative spectrum of the normalised derivative, descending;
            ``T dGamma T^T = diag(nu * lam, -nu * lam)``.
        nu: common symplectic eigenvalue.
    """

    T: np.ndarray
    lam: np.ndarray
    nu: float

    @property
    def n(self) -> int:
        return self.lam.size


def isothermal_frame(point: GaussianModelPoint, tol: float = 1e-8) -> IsothermalFrame:
    """Construct the measurement normal frame of a model point.

    Requires the two equal-temperature gates plus static first moments;
    rejection names the flag that failed.

    Raises:
        PreconditionError: flags ``"is_isothermal"``,
            ``"derivative_preserves_nu"``, or ``"static_first_moments"``.
    """
    chk = check_isothermal(point, tol)
    if not chk.is_isothermal:
        raise PreconditionError(
            "is_isothermal", "symplectic spectrum is not degenerate"
        )
    if not chk.derivative_preserves_nu:
        raise PreconditionError(
            "derivative_preserves_nu", "the derivative changes the temperature"
        )
    if np.abs(point.dd).max(initial=0.0) > tol:
        raise PreconditionError(
            "static_first_moments",
            "homodyne normal-frame analysis assumes dd = 0",
        )
    dec = williamson(point.gamma)
    nu = float(dec.nu[0])
    Si = np.linalg.inv(dec.S)
    W = Si @ point.dgamma @ Si.T
    W = 0.5 * (W + W.T)
    O, wlam = hamiltonian_eigenframe(W, tol)
    T = O @ Si
    lam = wlam / nu

    n = point.n
    scale = 1.0 + abs(nu) + np.abs(wlam).max(initial=0.0)
    dev = max(
        np.abs(T @ point.gamma @ T.T - nu * np.eye(2 * n)).max(),
        np.abs(T @ point.dgamma @ T.T - np.diag(np.concatenate([wlam, -wlam]))).max(),
    )
    if dev > 1e3 * tol * scale:
        raise ConvergenceError(f"normal-frame residual {dev:.3e} exceeds tolerance")
    return IsothermalFrame(T=T, lam=lam, nu=nu)


def optimal_homodyne_fisher(frame: IsothermalFrame) -> float:
    """Best homodyne Fisher information, ``sum_k lam_k^2 / 2``.

    Attained by measuring the Q quadratures of the normal-frame modes; equals
    half the Wigner-distribution information of the second moments, and the
    full quantum Fisher information when ``nu = 1``.
    """
    return 0.5 * float(np.sum(frame.lam**2))


def homodyne_fisher(frame: IsothermalFrame, U: np.ndarray, tol: float = 1e-10) -> float:
    """Fisher information of the quadratures ``(U R)_Q`` in the normal frame.

    ``U`` is a symplectic matrix selecting which rotated/squeezed quadratures
    are measured; with top blocks ``(a b)`` the measured marginal has
    covariance ``nu (a a^T + b b^T)`` and derivative
    ``nu (a lam a^T - b lam b^T)``.  ``U = I`` reproduces
    :func:`optimal_homodyne_fisher`; no choice exceeds it.

    Raises:
        ConfigError: if ``U`` is not symplectic or the commutation constraint
            ``a b^T = b a^T`` fails beyond ``tol``.
    """
    U = np.asarray(U, dtype=float)
    n = frame.n
    if U.shape != (2 * n, 2 * n):
        raise ConfigError(f"U has shape {U.shape}, expected {(2 * n, 2 * n)}")
    if not is_symplectic(U, max(tol, 1e-10)):
        raise ConfigError("U is not symplectic")
    a, b = U[:n, :n], U[:n, n:]
    if np.abs(a @ b.T - b @ a.T).max() > max(tol, 1e-10):
        raise ConfigError("quadrature blocks do not commute (a b^T != b a^T)")
    lam = frame.lam
    ghat = frame.nu * (a @ a.T + b @ b.T)
    dghat = frame.nu * ((a * lam[None, :]) @ a.T - (b * lam[None, :]) @ b.T)
    return gaussian_distribution_fisher(ghat, dghat)


@dataclass(frozen=True)
class HomodynePlan:
    """Passive network realising a linear combination of quadratures.

    ``V`` is orthogonal symplectic with ``[V alpha]_P = 0``: after the
    network, the target observable ``alpha . R`` is a gain-weighted sum of
    plain Q homodyne records, ``sum_k g_k (V R)_{Q_k}``.
    """

    V: np.ndarray
    gains: np.ndarray
    alpha: np.ndarray


def homodyne_plan(alpha: np.ndarray) -> HomodynePlan:
    """Single-quadrature measurement plan for the observable ``alpha . R``.

    Per mode, the rotation angle is fixed by ``(alpha_qk, alpha_pk)``; modes
    with no support get the identity rotation and zero gain.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size % 2 or alpha.size == 0:
        raise ConfigError(f"alpha must be a 2n vector, got shape {alpha.shape}")
    n = alpha.size // 2
    aq, ap = alpha[:n], alpha[n:]
    r = np.hypot(aq, ap)
    c = np.ones(n)
    s = np.zeros(n)
    live = r > 0
    c[live] = aq[live] / r[live]
    s[live] = ap[live] / r[live]
    V = np.zeros((2 * n, 2 * n))
    V[:n, :n] = np.diag(c)
    V[:n, n:] = np.diag(s)
    V[n:, :n] = -np.diag(s)
    V[n:, n:] = np.diag(c)
    return HomodynePlan(V=V, gains=r, alpha=alpha.copy())


def ancilla_extend(
    point: GaussianModelPoint, gamma_ancilla: np.ndarray, tol: float = 1e-8
) -> GaussianModelPoint:
    """Append parameter-independent ancilla modes to a model point.

    The ancilla contributes no derivative, so ``lam`` just gains zeros: side
    channels cannot raise the optimal homodyne information.  The extension is
    equal-temperature only if the ancilla is thermal at the same ``nu``.
    """
    gamma_ancilla = np.asarray(gamma_ancilla, dtype=float)
    chk = validate_covariance(gamma_ancilla, tol)
    if not chk.valid:
        raise ConfigError(
            f"ancilla covariance is not admissible (nu_min = {chk.nu_min:.6g}, "
            f"asymmetry = {chk.asymmetry:.3g})"
        )
    m2 = gamma_ancilla.shape[0]
    return GaussianModelPoint(
        d=direct_sum_vector(point.d, np.zeros(m2)),
        gamma=direct_sum(point.gamma, gamma_ancilla),
        dd=direct_sum_vector(point.dd, np.zeros(m2)),
        dgamma=direct_sum(point.dgamma, np.zeros((m2, m2))),
    )
