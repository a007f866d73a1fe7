import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..constraints.inequalities import achievability_lhs, flipped_achievability_lhs
from ..core.operators import LocalOperator
from ..core.states import Ket, apply_local
from ..errors import ArityError, NumericFailure
from ..tangles.models import TangleTuple

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
ZERO_TOL = 1e-12
RESIDUAL_TOL = 1e-9
BRANCH_TOL = 1e-9
DIFFERENCE_STEP = 1e-3


class AcinForm(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    lambdas: tuple[float, float, float, float, float] = Field(..., description="Nonnegative weights lambda_0..4.")
    omega: float = Field(0.0, ge=0.0, lt=TWO_PI, description="Phase of the |100> amplitude.")

    @field_validator("lambdas")
    @classmethod
    def lambdas_nonnegative(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if min(v) < 0.0:
            raise ValueError(f"Weights must be nonnegative, got {v}.")
        return v

    @model_validator(mode="after")
    def normalized(self) -> "AcinForm":
        norm2 = sum(lam * lam for lam in self.lambdas)
        if abs(norm2 - 1.0) > 1e-10:
            raise ValueError(f"Weights must be normalized, sum of squares is {norm2}.")
        return self

    def amplitudes(self) -> np.ndarray:
        l0, l1, l2, l3, l4 = self.lambdas
        return np.array([l0, 0.0, 0.0, 0.0, l1 * np.exp(1j * self.omega), l2, l3, l4], dtype=np.complex128)

    def to_ket(self) -> Ket:
        return Ket(3, self.amplitudes()).normalize()


@dataclass(frozen=True)
class AcinResult:
    form: AcinForm
    unitaries: tuple[LocalOperator, LocalOperator, LocalOperator]
    # largest modulus left at |001>, |010> and |011>
    residual: float


def _slice_det(m: np.ndarray) -> complex:
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _rotation_candidates(t0: np.ndarray, t1: np.ndarray) -> list[tuple[complex, complex]]:
    """(a, b) with det(a T0 + b T1) = 0."""
    d0, d1 = _slice_det(t0), _slice_det(t1)
    mixed = complex(t0[0, 0] * t1[1, 1] + t0[1, 1] * t1[0, 0] - t0[0, 1] * t1[1, 0] - t0[1, 0] * t1[0, 1])
    scale = max(abs(d0), abs(d1), abs(mixed), ZERO_TOL)
    candidates: list[tuple[complex, complex]] = []
    if abs(d1) > ZERO_TOL * scale:
        candidates += [(1.0, complex(w)) for w in np.roots([d1, mixed, d0])]
    else:
        candidates.append((0.0, 1.0))
        if abs(mixed) > ZERO_TOL * scale:
            candidates.append((1.0, -d0 / mixed))
    if abs(d0) <= ZERO_TOL * scale:
        candidates.append((1.0, 0.0))
    return candidates


def _rotation(a: complex, b: complex) -> np.ndarray:
    norm = math.hypot(abs(a), abs(b))
    return np.array([[a, b], [-np.conj(b), np.conj(a)]]) / norm


def _choose_rotation(tensor: np.ndarray) -> np.ndarray:
    t0, t1 = tensor[0], tensor[1]
    best: tuple[float, float, np.ndarray] | None = None
    for a, b in _rotation_candidates(t0, t1):
        u = _rotation(a, b)
        rotated = u[0, 0] * t0 + u[0, 1] * t1
        if abs(_slice_det(rotated)) > 1e-9:
            continue
        weight = float(np.linalg.norm(rotated, 2))
        angle = 2.0 * math.atan2(abs(b), abs(a))
        if best is None or weight > best[0] + ZERO_TOL or (abs(weight - best[0]) <= ZERO_TOL and angle < best[1]):
            best = (weight, angle, u)
    if best is None:
        raise NumericFailure("No rotation of party A makes the |0> slice singular", float("nan"))
    log.debug("Rotation of party A by angle %.6f gives lambda_0 = %.6g.", best[1], best[0])
    return best[2]


def _phase_unitaries(tensor: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, complex]:
    """Diagonal unitaries and global phase making |000>, |101>, |110>, |111> real and nonnegative."""
    arg = np.angle
    delta = -arg(tensor[0, 0, 0])
    p, q, r, s = tensor[1, 0, 0], tensor[1, 0, 1], tensor[1, 1, 0], tensor[1, 1, 1]
    small = [abs(value) <= ZERO_TOL for value in (q, r, s)]
    if small[2]:
        alpha = -delta - arg(p)
        gamma, beta = arg(p) - arg(q), arg(p) - arg(r)
    elif small[0]:
        alpha = -delta - arg(p)
        beta, gamma = arg(p) - arg(r), arg(r) - arg(s)
    elif small[1]:
        alpha = -delta - arg(p)
        gamma, beta = arg(p) - arg(q), arg(q) - arg(s)
    else:
        gamma, beta = arg(r) - arg(s), arg(q) - arg(s)
        alpha = -delta - arg(q) - gamma
    return (
        np.diag([1.0, np.exp(1j * alpha)]),
        np.diag([1.0, np.exp(1j * beta)]),
        np.diag([1.0, np.exp(1j * gamma)]),
        complex(np.exp(1j * delta)),
    )


def _apply(tensor: np.ndarray, ua: np.ndarray, ub: np.ndarray, uc: np.ndarray) -> np.ndarray:
    return np.einsum("ia,jb,kc,abc->ijk", ua, ub, uc, tensor)


def acin_normal_form(psi: Ket) -> AcinResult:
    """
    Local unitaries bringing a 3-qubit state into normal form.

    :param psi: Normalized 3-qubit ket.
    :return: The form, the unitaries (U_A, U_B, U_C) and the residual on the zeroed positions.
    """
    if psi.n != 3:
        raise ArityError(f"The normal form is defined for 3 qubits, got {psi.n}.")
    tensor = psi.require_normalized().tensor
    ua = _choose_rotation(tensor)
    rotated = _apply(tensor, ua, np.eye(2), np.eye(2))
    if np.linalg.norm(rotated[0], 2) <= ZERO_TOL:
        # party A factors out; diagonalize the |1> slice instead
        left, _, right_h = np.linalg.svd(rotated[1])
    else:
        left, _, right_h = np.linalg.svd(rotated[0])
    ub, uc = left.conj().T, right_h.conj()
    diagonal = _apply(rotated, np.eye(2), ub, uc)
    pa, pb, pc, global_phase = _phase_unitaries(diagonal)
    final = global_phase * _apply(diagonal, pa, pb, pc)
    ua, ub, uc = pa @ ua, pb @ ub, pc @ uc

    residual = float(max(abs(final[0, 0, 1]), abs(final[0, 1, 0]), abs(final[0, 1, 1])))
    if residual > RESIDUAL_TOL:
        raise NumericFailure("Normal form search left nonzero amplitudes", residual)
    lambdas = tuple(float(abs(final[index])) for index in [(0, 0, 0), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)])
    omega = 0.0
    if lambdas[1] > ZERO_TOL:
        omega = float(np.angle(final[1, 0, 0]) % TWO_PI)
        if min(lambdas[2], lambdas[3], lambdas[4]) <= ZERO_TOL or omega > TWO_PI - ZERO_TOL:
            omega = 0.0
    norm = math.sqrt(sum(lam * lam for lam in lambdas))
    form = AcinForm(lambdas=tuple(lam / norm for lam in lambdas), omega=omega)  # type: ignore[arg-type]
    log.debug("Normal form %s with residual %.3e.", form, residual)
    return AcinResult(
        form=form,
        unitaries=(LocalOperator(0, ua), LocalOperator(1, ub), LocalOperator(2, uc)),
        residual=residual,
    )


def canonical_ket(psi: Ket) -> Ket:
    """Image of the state under the normal-form unitaries."""
    result = acin_normal_form(psi)
    image, _ = apply_local(list(result.unitaries), psi)
    return image


def tangles_from_acin(form: AcinForm) -> TangleTuple:
    """
    Tangles of a normal form.

    x = 2|l2 l3 - e^{i omega} l1 l4|, y = 2 l0 l2, z = 2 l0 l3, t = 2 l0 l4.
    """
    l0, l1, l2, l3, l4 = form.lambdas
    return TangleTuple(
        x=float(2.0 * abs(l2 * l3 - np.exp(1j * form.omega) * l1 * l4)),
        y=2.0 * l0 * l2,
        z=2.0 * l0 * l3,
        t=2.0 * l0 * l4,
    )


Branch = Literal["zero", "pi", "generic"]


class CertificateReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    tangles: TangleTuple
    second_difference: float = Field(..., description="Central second difference of the polynomial in x.")
    expected_second_derivative: float = Field(..., description="-2 (t^2 + y^2 + z^2).")
    branch: Branch = Field(..., description="Phase branch of the form.")
    lhs: float = Field(..., description="Achievability polynomial of the tangles.")
    certificate_lhs: float | None = Field(None, description="Polynomial form the perfect square certifies.")
    square_term: float | None = Field(None, description="Closed perfect-square term on the 0 and pi branches.")
    flipped_lhs: float | None = Field(None, description="Polynomial with +2xyz when l2 l3 <= l1 l4.")

    @property
    def square_residual(self) -> float | None:
        if self.certificate_lhs is None or self.square_term is None:
            return None
        return abs(self.certificate_lhs - self.square_term)


def _branch(omega: float) -> Branch:
    if min(omega, TWO_PI - omega) <= BRANCH_TOL:
        return "zero"
    if abs(omega - math.pi) <= BRANCH_TOL:
        return "pi"
    return "generic"


def necessity_certificates(form: AcinForm) -> CertificateReport:
    """
    Numerical certificates that the achievability polynomial is nonnegative on a normal form.

    The polynomial is concave in x with second derivative -2(t^2 + y^2 + z^2). On the omega = pi branch it equals
    [2 l0 (2 l1 l2 l3 + l4 - 2 l4 (l2^2 + l3^2 + l4^2))]^2, on the omega = 0 branch the same with -2 l1 l2 l3; when
    l2 l3 < l1 l4 on that branch the square certifies the flipped polynomial instead.

    :param form: Normal form.
    :return: The report.
    """
    tangles = tangles_from_acin(form)
    x, y, z, t = tangles.as_tuple()
    h = DIFFERENCE_STEP
    second = achievability_lhs(x + h, y, z, t) - 2.0 * achievability_lhs(x, y, z, t)
    second += achievability_lhs(x - h, y, z, t)
    l0, l1, l2, l3, l4 = form.lambdas
    branch = _branch(form.omega)
    lhs = float(achievability_lhs(x, y, z, t))
    flipped = float(flipped_achievability_lhs(x, y, z, t)) if l2 * l3 <= l1 * l4 else None
    certificate = square = None
    if branch != "generic":
        sign = 1.0 if branch == "pi" else -1.0
        square = float((2.0 * l0 * (sign * 2.0 * l1 * l2 * l3 + l4 - 2.0 * l4 * (l2**2 + l3**2 + l4**2))) ** 2)
        certificate = flipped if branch == "zero" and l2 * l3 < l1 * l4 else lhs
    return CertificateReport(
        tangles=tangles,
        second_difference=float(second / h**2),
        expected_second_derivative=-2.0 * (t**2 + y**2 + z**2),
        branch=branch,
        lhs=lhs,
        certificate_lhs=certificate,
        square_term=square,
        flipped_lhs=flipped,
    )


def omega_sweep_minimum(form: AcinForm, points: int = 8) -> tuple[float, float]:
    """
    Minimum of the achievability polynomial over a sweep of omega and over the two branches 0 and pi.

    :param form: Normal form whose weights are kept.
    :param points: Sweep size.
    :return: (sweep minimum, branch minimum).
    """

    def value(omega: float) -> float:
        tangles = tangles_from_acin(AcinForm(lambdas=form.lambdas, omega=omega))
        return float(achievability_lhs(*tangles.as_tuple()))

    sweep = min(value(omega) for omega in np.linspace(0.0, TWO_PI, points, endpoint=False))
    return sweep, min(value(0.0), value(math.pi))


def random_acin_form(rng: np.random.Generator, omega: float | None = None) -> AcinForm:
    """
    Random normal form with weights from |gaussian| entries.

    :param rng: Random generator.
    :param omega: Fixed phase, or uniform when ``None``.
    :return: Normalized form.
    """
    weights = np.abs(rng.standard_normal(5))
    weights /= np.linalg.norm(weights)
    phase = float(rng.uniform(0.0, TWO_PI)) if omega is None else omega
    return AcinForm(lambdas=tuple(float(w) for w in weights), omega=phase)  # type: ignore[arg-type]
