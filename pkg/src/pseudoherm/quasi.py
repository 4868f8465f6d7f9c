"""Positive metrics: square root, induced Hermitian Hamiltonian, induced inner product.

A positive metric eta admits a principal square root, and
``sqrt(eta) H inv_sqrt(eta)`` is a Hermitian matrix similar to H, so the
spectrum of H is real.  Equivalently H acts Hermitianly in the inner product
``<phi|psi>_eta = <phi|eta psi>``, and ``sqrt(eta)`` is an isometry between
the two pictures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CheckError, InputError
from .metric import (
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    as_vector,
    classify_metric,
    residual,
)


@dataclass(frozen=True)
class InducedForm:
    """A positive metric together with its principal square root and inverse root."""

    eta: np.ndarray
    sqrt_eta: np.ndarray
    inv_sqrt_eta: np.ndarray


def metric_sqrt(eta, tol: float = DEFAULT_TOL) -> InducedForm:
    """Principal square root of a positive metric via Hermitian eigendecomposition.

    Rejects non-positive metrics with the offending minimum eigenvalue.  The
    input is symmetrized before decomposition (its hermiticity defect is
    already below tolerance once it classifies positive).
    """
    eta = as_matrix(eta, "eta")
    cls = classify_metric(eta, tol)
    if not cls.positive:
        raise CheckError("metric not positive",
                         "metric not positive: minimum eigenvalue of the Hermitian "
                         f"part is {cls.min_eigenvalue_of_hermitian_part:.6g}",
                         value=cls.min_eigenvalue_of_hermitian_part, threshold=tol)
    symmetrized = (eta + adjoint(eta)) / 2.0
    eigvals, vecs = np.linalg.eigh(symmetrized)
    roots = np.sqrt(eigvals)
    sqrt_eta = (vecs * roots) @ adjoint(vecs)
    inv_sqrt_eta = (vecs / roots) @ adjoint(vecs)
    # eigh reconstruction is Hermitian only to rounding; make it exact
    sqrt_eta = (sqrt_eta + adjoint(sqrt_eta)) / 2.0
    inv_sqrt_eta = (inv_sqrt_eta + adjoint(inv_sqrt_eta)) / 2.0
    return InducedForm(eta=eta, sqrt_eta=sqrt_eta, inv_sqrt_eta=inv_sqrt_eta)


def induced_hamiltonian(H, form: InducedForm, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Similarity transform ``sqrt(eta) H inv_sqrt(eta)``.

    Requires the form's metric to intertwine H; the result is then Hermitian
    within tolerance and shares the (hence real) spectrum of H.
    """
    H = as_matrix(H, "H")
    r = residual(H, form.eta)
    if r > tol:
        raise CheckError("eta not a metric for H",
                         f"eta does not intertwine H (residual {r:.3e} exceeds "
                         f"tolerance {tol:.3e})",
                         value=r, threshold=tol)
    return form.sqrt_eta @ H @ form.inv_sqrt_eta


def induced_inner(phi, psi, eta, allow_indefinite: bool = False,
                  tol: float = DEFAULT_TOL) -> complex:
    """Metric inner product ``sum_i conj(phi_i) (eta psi)_i``.

    Positive eta gives a true inner product (conjugate symmetric, positive
    definite).  Indefinite eta is allowed behind ``allow_indefinite``; the
    result is then only a sesquilinear form.
    """
    phi = as_vector(phi, "phi")
    psi = as_vector(psi, "psi")
    eta = as_matrix(eta, "eta")
    if phi.shape != psi.shape or phi.shape[0] != eta.shape[0]:
        raise InputError(f"dimension mismatch: phi has {phi.shape[0]}, psi has "
                         f"{psi.shape[0]}, eta is {eta.shape[0]}x{eta.shape[0]}")
    if not allow_indefinite:
        cls = classify_metric(eta, tol)
        if not cls.positive:
            raise CheckError("metric not positive",
                             "metric not positive: pass allow_indefinite=True for a "
                             "plain sesquilinear form",
                             value=cls.min_eigenvalue_of_hermitian_part, threshold=tol)
    return complex(np.vdot(phi, eta @ psi))
