"""Entropy functionals of bipartite states, all in bits (base-2 logs).

Conditioning is always on subsystem B: ``S(A|B) = S(AB) - S(B)`` with
``rho_B = Tr_A rho``. Spectral sums ignore eigenvalues below 1e-12,
which implements the continuous extension ``0 log 0 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidAlphaError, SupportViolationError
from .linalg import SUPPORT_EPS, hermitian_eig, matrix_log_on_support
from .states import BlochFano, DensityMatrix

_CUTOFF = 1e-12


@dataclass(frozen=True)
class EntropyReport:
    """An entropy value together with how it was obtained."""

    value: float
    method: str  # "spectral" | "closed-form"


def _check_alpha(alpha: float) -> None:
    if alpha <= 0 or abs(alpha - 1.0) < 1e-12:
        raise InvalidAlphaError(f"alpha must be positive and != 1, got {alpha}")


def _shannon(eigs: np.ndarray) -> float:
    lam = eigs[eigs > _CUTOFF]
    return float(-np.sum(lam * np.log2(lam)))


def _power_sum(eigs: np.ndarray, alpha: float) -> float:
    lam = eigs[eigs > _CUTOFF]
    return float(np.sum(lam**alpha))


def von_neumann(rho: DensityMatrix) -> float:
    """S(AB) = -Tr[rho log2 rho]."""
    return _shannon(rho.eigenvalues())


def conditional_von_neumann(rho: DensityMatrix) -> float:
    """S(A|B) = S(AB) - S(B)."""
    return von_neumann(rho) - _shannon(np.linalg.eigvalsh(rho.marginal("B")))


def renyi(rho: DensityMatrix, alpha: float) -> float:
    """Renyi alpha-entropy ``(1/(1-alpha)) log2 Tr(rho^alpha)``.

    For the alpha -> infinity limit use :func:`min_entropy`.
    """
    _check_alpha(alpha)
    return float(np.log2(_power_sum(rho.eigenvalues(), alpha)) / (1 - alpha))


def conditional_renyi(rho: DensityMatrix, alpha: float) -> float:
    """S_alpha(A|B) = S_alpha(AB) - S_alpha(B)."""
    _check_alpha(alpha)
    s_b = np.log2(_power_sum(np.linalg.eigvalsh(rho.marginal("B")), alpha)) / (1 - alpha)
    return renyi(rho, alpha) - float(s_b)


def min_entropy(rho: DensityMatrix) -> float:
    """S_inf(AB) = -log2 of the largest eigenvalue."""
    return float(-np.log2(rho.eigenvalues()[-1]))


def conditional_min_entropy(rho: DensityMatrix) -> float:
    """S_inf(A|B) = log2( lambda_max(rho_B) / lambda_max(rho_AB) )."""
    lam_b = np.linalg.eigvalsh(rho.marginal("B"))[-1]
    return float(np.log2(lam_b / rho.eigenvalues()[-1]))


def tsallis(rho: DensityMatrix, alpha: float) -> float:
    """Tsallis alpha-entropy ``(1/(1-alpha)) [Tr(rho^alpha) - 1]``."""
    _check_alpha(alpha)
    return float((_power_sum(rho.eigenvalues(), alpha) - 1.0) / (1 - alpha))


def conditional_tsallis(rho: DensityMatrix, alpha: float) -> float:
    """Conditional Tsallis alpha-entropy (normalized quotient form):

    ``[Tr(rho_B^alpha) - Tr(rho_AB^alpha)] / [(alpha-1) Tr(rho_B^alpha)]``.
    """
    _check_alpha(alpha)
    p_b = _power_sum(np.linalg.eigvalsh(rho.marginal("B")), alpha)
    p_ab = _power_sum(rho.eigenvalues(), alpha)
    return float((p_b - p_ab) / ((alpha - 1) * p_b))


def relative_entropy(sigma: DensityMatrix, rho: DensityMatrix) -> float:
    """Relative entropy ``D(sigma || rho) = Tr[sigma (log2 sigma - log2 rho)]``.

    Raises ``SupportViolationError`` when sigma has weight outside the
    support of rho (the divergence would be infinite).
    """
    if sigma.dims != rho.dims:
        raise DimensionMismatchError(f"dims differ: {sigma.dims} vs {rho.dims}")
    log_rho, deficient = matrix_log_on_support(rho.matrix)
    if deficient:
        w, v = hermitian_eig(rho.matrix)
        null = v[:, w <= SUPPORT_EPS]
        outside = float(np.einsum("ij,ik,kj->", null.conj(), sigma.matrix, null).real)
        if outside > 1e-10:
            raise SupportViolationError(
                f"sigma has weight {outside:.3e} outside the support of rho"
            )
    log_sigma, _ = matrix_log_on_support(sigma.matrix)
    d = np.trace(sigma.matrix @ (log_sigma - log_rho)).real
    return float(d)


def _norms(bf: BlochFano) -> tuple[float, float, float]:
    if bf.dims != (2, 2):
        raise DimensionMismatchError("closed forms require a two-qubit BlochFano")
    a2 = float(bf.a @ bf.a)
    b2 = float(bf.b @ bf.b)
    t2 = float(np.sum(bf.t * bf.t))
    return a2, b2, t2


def renyi2_closed_form(bf: BlochFano) -> float:
    """Two-qubit Renyi 2-entropy from Bloch coordinates:
    ``log2[ 4 / (1 + |a|^2 + |b|^2 + |T|_F^2) ]``."""
    a2, b2, t2 = _norms(bf)
    return float(np.log2(4.0 / (1.0 + a2 + b2 + t2)))


def conditional_renyi2_closed_form(bf: BlochFano) -> float:
    """Two-qubit conditional Renyi 2-entropy:
    ``log2[ (2 + 2|b|^2) / (1 + |a|^2 + |b|^2 + |T|_F^2) ]``."""
    a2, b2, t2 = _norms(bf)
    return float(np.log2((2.0 + 2.0 * b2) / (1.0 + a2 + b2 + t2)))


def tsallis2_closed_form(bf: BlochFano) -> float:
    """Two-qubit Tsallis 2-entropy: ``(3 - |a|^2 - |b|^2 - |T|_F^2) / 4``."""
    a2, b2, t2 = _norms(bf)
    return (3.0 - a2 - b2 - t2) / 4.0


def conditional_tsallis2_closed_form(bf: BlochFano) -> float:
    """Two-qubit linear conditional Tsallis 2-form:
    ``(1 - |a|^2 + |b|^2 - |T|_F^2) / 4``.

    This equals ``Tr(rho_B^2) - Tr(rho_AB^2)``, the numerator of
    :func:`conditional_tsallis` at alpha = 2; the two differ by the
    normalization factor ``Tr(rho_B^2)``. Both are kept because the
    fidelity bound for the conditional Tsallis entropy applies to this
    linear form.
    """
    a2, b2, t2 = _norms(bf)
    return (1.0 - a2 + b2 - t2) / 4.0


def entropy_summary(rho: DensityMatrix) -> dict[str, EntropyReport]:
    """All entropies of a state, keyed by a short label. Spectral values
    always; the two-qubit closed forms are added when they apply."""
    out = {
        "S(AB)": EntropyReport(von_neumann(rho), "spectral"),
        "S(A|B)": EntropyReport(conditional_von_neumann(rho), "spectral"),
        "S2(AB)": EntropyReport(renyi(rho, 2), "spectral"),
        "S2(A|B)": EntropyReport(conditional_renyi(rho, 2), "spectral"),
        "Sinf(AB)": EntropyReport(min_entropy(rho), "spectral"),
        "Sinf(A|B)": EntropyReport(conditional_min_entropy(rho), "spectral"),
        "T2(AB)": EntropyReport(tsallis(rho, 2), "spectral"),
        "T2(A|B)": EntropyReport(conditional_tsallis(rho, 2), "spectral"),
    }
    if rho.dims == (2, 2):
        from .states import decompose

        bf = decompose(rho)
        out["S2(AB) closed"] = EntropyReport(renyi2_closed_form(bf), "closed-form")
        out["S2(A|B) closed"] = EntropyReport(conditional_renyi2_closed_form(bf), "closed-form")
        out["T2(AB) closed"] = EntropyReport(tsallis2_closed_form(bf), "closed-form")
        out["T2(A|B) linear"] = EntropyReport(conditional_tsallis2_closed_form(bf), "closed-form")
    return out
