import logging
import math
from typing import Iterable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..constraints.inequalities import achievability_lhs
from ..core.numerics import DET_TOL, MAX_TANGLE_QUBITS
from ..core.operators import LocalOperator
from ..core.states import DensityMatrix, apply_local, ghz_ket, partial_trace
from ..errors import ArityError, ClassExitError, DegenerateBranchError, DegenerateParameterError, DomainError, SizeError
from ..tangles.measures import k_tangle_mixed, k_tangle_pure, residual_tangle_ghz_block
from ..tangles.models import TangleTuple
from .params import GhzClassParams

log = logging.getLogger(__name__)

INVERSION_T_MIN = 1e-9
FEASIBILITY_SLACK = 1e-9


def _denominator(params: GhzClassParams) -> float:
    d = params.denominator
    if d <= 0.0:
        raise DegenerateParameterError(f"Denominator r + kappa prod(c) = {d!r} is not positive.")
    return d


def _subset(params: GhzClassParams, subset: Iterable[int]) -> list[int]:
    parties = sorted({int(p) for p in subset})
    if any(p < 0 or p >= params.n for p in parties):
        raise DomainError(f"Subset {parties} is not contained in the {params.n} parties.")
    if len(parties) < 2:
        raise DomainError("k-tangles need a subset of at least two parties.")
    return parties


def tangles_closed_form(params: GhzClassParams, subset: Iterable[int]) -> float:
    """
    k-tangle of a subset of parties.

    :param params: GHZ-class parameters.
    :param subset: Party labels, at least two.
    :return: prod_I(s) prod_not-I(c) / D.
    """
    parties = _subset(params, subset)
    inside = np.zeros(params.n, dtype=bool)
    inside[parties] = True
    value = np.prod(np.where(inside, params.sines, params.cosines)) / _denominator(params)
    return float(value)


def one_tangle_closed_form(params: GhzClassParams, party: int) -> float:
    """1-tangle s_A sqrt(1 - prod_i!=A c_i^2) / D of one party."""
    if not 0 <= party < params.n:
        raise DomainError(f"Party {party} is not one of the {params.n} parties.")
    others = np.delete(params.cosines, party)
    return float(params.sines[party] * math.sqrt(max(1.0 - np.prod(others**2), 0.0)) / _denominator(params))


def tangle_tuple_closed_form(params: GhzClassParams) -> TangleTuple:
    if params.n != 3:
        raise ArityError(f"Tangle tuples are defined for 3 parties, got {params.n}.")
    return TangleTuple(
        x=tangles_closed_form(params, (1, 2)),
        y=tangles_closed_form(params, (0, 2)),
        z=tangles_closed_form(params, (0, 1)),
        t=tangles_closed_form(params, (0, 1, 2)),
    )


class InversionResult(BaseModel):
    """Canonical parameters recovered from a tangle tuple at kappa = -1."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    r: float = Field(..., description="Recovered r; below 1 means the tuple is not achievable.")
    phis: tuple[float, float, float] = Field(..., description="Recovered angles.")
    feasible: bool = Field(..., description="Whether r >= 1 within tolerance.")

    def params(self) -> GhzClassParams:
        if not self.feasible:
            raise DomainError(f"Tangle tuple is not achievable (r = {self.r}).")
        return GhzClassParams(n=3, r=max(self.r, 1.0), phis=self.phis, kappa=-1.0)


def invert_tangles(tangles: TangleTuple) -> InversionResult:
    """
    Recover (r, phi) from (x, y, z, t) with t > 0.

    cos(phi_A) = x / sqrt(t^2 + x^2) (and permutations) and r = (t^2 + xyz) / sqrt(prod(t^2 + x_i^2)).

    :param tangles: Tangle tuple.
    :return: The parameters and whether they describe a state.
    """
    x, y, z, t = tangles.as_tuple()
    if t <= INVERSION_T_MIN:
        raise DegenerateBranchError(f"Inversion needs a positive 3-tangle, got t = {t!r}.")
    t2 = t * t
    r = (t2 + x * y * z) / math.sqrt((t2 + x * x) * (t2 + y * y) * (t2 + z * z))
    phis = (math.atan2(t, x), math.atan2(t, y), math.atan2(t, z))
    feasible = r >= 1.0 - FEASIBILITY_SLACK
    if not feasible:
        log.info("Tuple %s is infeasible, r = %.6g.", tangles.as_tuple(), r)
    return InversionResult(r=r, phis=phis, feasible=feasible)


def necessity_identity(params: GhzClassParams) -> tuple[float, float]:
    """
    Both sides of the achievability identity on the GHZ class.

    The achievability polynomial of the closed-form tangles equals prod(s^2) ((D + prod c)^2 - 1) / D^4, which is
    prod(s^2) (r^2 - 1) / D^4 at kappa = -1.

    :param params: 3-party parameters.
    :return: (polynomial of the tangles, closed-form right-hand side).
    """
    tangles = tangle_tuple_closed_form(params)
    d = _denominator(params)
    rhs = np.prod(params.sines**2) * ((d + np.prod(params.cosines)) ** 2 - 1.0) / d**4
    return float(achievability_lhs(*tangles.as_tuple())), float(rhs)


def strong_monogamy_residual(params: GhzClassParams, party: int) -> float:
    """
    tau_A^2 minus the squares of every subset tangle containing A.

    :param params: Parameters with n <= 6.
    :param party: Party A.
    :return: Residual; zero on the whole class.
    """
    if params.n > MAX_TANGLE_QUBITS:
        raise SizeError(f"Strong monogamy is evaluated for n <= {MAX_TANGLE_QUBITS}, got {params.n}.")
    total = one_tangle_closed_form(params, party) ** 2
    for mask in range(1, 2**params.n):
        if not mask >> party & 1 or bin(mask).count("1") < 2:
            continue
        total -= tangles_closed_form(params, [p for p in range(params.n) if mask >> p & 1]) ** 2
    return float(total)


class GhzBlock(BaseModel):
    """Normalized 2x2 block [[alpha, beta], [conj(beta), gamma]] on span{|0...0>, |1...1>} of some parties."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    qubits: tuple[int, ...]
    alpha: float
    beta: complex
    gamma: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [np.conj(self.beta), self.gamma]])

    def to_density_matrix(self) -> DensityMatrix:
        """Embed the block into the full 2^k x 2^k matrix of the kept parties."""
        dim = 2 ** len(self.qubits)
        entries = np.zeros((dim, dim), dtype=np.complex128)
        entries[np.ix_([0, dim - 1], [0, dim - 1])] = self.matrix
        return DensityMatrix(self.qubits, entries)


def marginal_block(traced_ops: Sequence[LocalOperator], keep: Iterable[int]) -> GhzBlock:
    """
    Reduced state of the kept parties of (x)_traced M |GHZ>, identity on the kept parties.

    The entries are prod <u,u>, prod <v,u>, prod <v,v> over the traced parties, normalized to unit trace.

    :param traced_ops: Operators of the traced parties.
    :param keep: Kept parties.
    :return: The GHZ block.
    """
    kept = tuple(sorted({int(p) for p in keep}))
    traced = sorted(op.party for op in traced_ops)
    if not traced_ops:
        raise DomainError("At least one party has to be traced out.")
    if not kept or sorted(kept + tuple(traced)) != list(range(len(kept) + len(traced))):
        raise ArityError(f"Kept {kept} and traced {traced} parties must partition 0..n-1.")
    uu = vv = 1.0
    vu = 1.0 + 0.0j
    for op in traced_ops:
        u, v = op.entries[:, 0], op.entries[:, 1]
        uu *= float(np.vdot(u, u).real)
        vv *= float(np.vdot(v, v).real)
        vu *= complex(np.vdot(v, u))
    trace = uu + vv
    return GhzBlock(qubits=kept, alpha=uu / trace, beta=vu / trace, gamma=vv / trace)


def numeric_subset_tangle(ops: Sequence[LocalOperator], subset: Iterable[int]) -> float:
    """
    Subset tangle of (x) M_p |GHZ> computed from the numerically constructed state.

    The full set uses the pure k-tangle and even subsets the mixed Wootters formula. Odd proper subsets undo the
    kept operators on the reduced state and apply the determinant rule to the remaining GHZ block.

    :param ops: One invertible operator per party.
    :param subset: Parties of the subset, at least two.
    :return: The tangle.
    """
    n = len(ops)
    parties = sorted({int(p) for p in subset})
    if len(parties) < 2 or any(p < 0 or p >= n for p in parties):
        raise DomainError(f"Invalid subset {parties} of {n} parties.")
    psi, _ = apply_local(ops, ghz_ket(n))
    psi = psi.normalize()
    if len(parties) == n:
        return k_tangle_pure(psi)
    rho = partial_trace(psi, parties)
    if len(parties) % 2 == 0:
        return k_tangle_mixed(rho)
    by_party = {op.party: op for op in ops}
    dets = [abs(by_party[p].det) for p in parties]
    if min(dets) <= DET_TOL:
        raise ClassExitError("Kept operators must be invertible to undo them.")
    inverse = by_party[parties[0]].inverse().entries
    for p in parties[1:]:
        inverse = np.kron(inverse, by_party[p].inverse().entries)
    block = inverse @ rho.entries @ inverse.conj().T
    return float(math.prod(dets) * residual_tangle_ghz_block(block))
