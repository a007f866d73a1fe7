import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import IncompatibleMarginalsError, InconsistentTanglesError
from .inequalities import RADICAND_TOL, Real

log = logging.getLogger(__name__)

INCONSISTENT_TOL = 1e-9


class MarginalMargins(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    margins: tuple[float, float, float] = Field(
        ..., description="(lB + lC - lA, lA + lC - lB, lA + lB - lC); all >= 0 iff the spectra are compatible."
    )
    product: float = Field(..., description="(lA - lB - lC)(-lA + lB - lC)(-lA - lB + lC), for reference only.")

    @property
    def satisfied(self) -> bool:
        return min(self.margins) >= 0.0


def one_tangle_eigenvalue(tau: Real) -> Real:
    """Smaller single-party eigenvalue (1 - sqrt(1 - tau^2)) / 2 of a party with 1-tangle tau."""
    return 0.5 * (1.0 - np.sqrt(np.clip(1.0 - np.square(tau), 0.0, None)))


def eigenvalue_from_tangles(tau_ab: float, tau_ac: float, t: float) -> float:
    """
    lambda_A = (1 - sqrt(1 - tau_A|B^2 - tau_A|C^2 - tau_A|B|C^2)) / 2.

    :param tau_ab: 2-tangle of A and B.
    :param tau_ac: 2-tangle of A and C.
    :param t: 3-tangle.
    :return: Eigenvalue in [0, 1/2].
    """
    radicand = 1.0 - tau_ab**2 - tau_ac**2 - t**2
    if radicand < -INCONSISTENT_TOL:
        raise InconsistentTanglesError(f"Tangles sum to more than one (radicand {radicand:.3e}).")
    return 0.5 * (1.0 - math.sqrt(max(radicand, 0.0)))


def _q(lam: Real) -> Real:
    return lam * (1.0 - lam)


def _pair_radicands(lam_a: Real, lam_b: Real, lam_c: Real, t: Real) -> tuple[Real, Real, Real]:
    qa, qb, qc = _q(lam_a), _q(lam_b), _q(lam_c)
    half_t2 = t**2 / 2.0
    return (
        2.0 * qa + 2.0 * qb - 2.0 * qc - half_t2,
        2.0 * qa - 2.0 * qb + 2.0 * qc - half_t2,
        -2.0 * qa + 2.0 * qb + 2.0 * qc - half_t2,
    )


def tangles_from_eigenvalues(lam_a: float, lam_b: float, lam_c: float, t: float) -> tuple[float, float, float]:
    """
    Pairwise tangles from single-party eigenvalues and the 3-tangle.

    :return: (tau_A|B, tau_A|C, tau_B|C).
    """
    radicands = _pair_radicands(lam_a, lam_b, lam_c, t)
    for label, radicand in zip(("A|B", "A|C", "B|C"), radicands):
        if radicand < -RADICAND_TOL:
            raise IncompatibleMarginalsError(f"Negative radicand {radicand:.3e} for tau_{label}.")
    ab, ac, bc = (math.sqrt(max(float(r), 0.0)) for r in radicands)
    return ab, ac, bc


def marginal_triangle_margins(lam_a: float, lam_b: float, lam_c: float) -> MarginalMargins:
    """
    Triangle inequalities on the smaller eigenvalues of the three parties.

    :return: The three margins and the literal triple product.
    """
    margins = (lam_b + lam_c - lam_a, lam_a + lam_c - lam_b, lam_a + lam_b - lam_c)
    product = (lam_a - lam_b - lam_c) * (-lam_a + lam_b - lam_c) * (-lam_a - lam_b + lam_c)
    return MarginalMargins(margins=margins, product=product)


def triangle_margin_min(lam_a: Real, lam_b: Real, lam_c: Real) -> Real:
    """Smallest of the three triangle margins, vectorized."""
    return np.minimum(np.minimum(lam_b + lam_c - lam_a, lam_a + lam_c - lam_b), lam_a + lam_b - lam_c)


def boundary_factors(lam_a: Real, lam_b: Real, lam_c: Real, t: Real) -> tuple[Real, Real]:
    """
    The two polynomial factors of the squared eigenvalue-space boundary.

    p1 bounds the larger eigenvalues and p2 the smaller ones; they are exchanged by lambda -> 1 - lambda.

    :return: (p1, p2).
    """
    t4 = t**4
    p1 = t4 + 16.0 * (
        (1.0 + lam_a - lam_b - lam_c)
        * (1.0 - lam_a + lam_b - lam_c)
        * (1.0 - lam_a - lam_b + lam_c)
        * (1.0 - lam_a - lam_b - lam_c)
    )
    p2 = t4 + 16.0 * (
        (lam_a - lam_b - lam_c) * (-lam_a + lam_b - lam_c) * (-lam_a - lam_b + lam_c) * (2.0 - lam_a - lam_b - lam_c)
    )
    return p1, p2


def _polynomial_part(lam_a: Real, lam_b: Real, lam_c: Real, t: Real) -> Real:
    qa, qb, qc = _q(lam_a), _q(lam_b), _q(lam_c)
    t2 = t**2
    return t2 - t2**2 / 4.0 + 4.0 * (qa**2 + qb**2 + qc**2) - 8.0 * (qa * qb + qa * qc + qb * qc)


def eigenvalue_space_lhs(lam_a: float, lam_b: float, lam_c: float, t: float) -> float:
    """
    Achievability polynomial rewritten in eigenvalues: T + 2 sqrt(a b c), with a, b, c the pairwise radicands.

    :return: The value; equals the achievability polynomial of the corresponding tangles.
    """
    radicands = _pair_radicands(lam_a, lam_b, lam_c, t)
    if min(radicands) < -RADICAND_TOL:
        raise IncompatibleMarginalsError("Eigenvalues do not define real pairwise tangles.")
    root = math.prod(math.sqrt(max(float(r), 0.0)) for r in radicands)
    return float(_polynomial_part(lam_a, lam_b, lam_c, t)) + 2.0 * root


def squared_boundary_expression(lam_a: Real, lam_b: Real, lam_c: Real, t: Real) -> Real:
    """
    T^2 - 4abc, the eigenvalue-space boundary with the square root squared away.

    It factorizes as p1 p2 / 16.
    """
    a, b, c = _pair_radicands(lam_a, lam_b, lam_c, t)
    return _polynomial_part(lam_a, lam_b, lam_c, t) ** 2 - 4.0 * a * b * c
