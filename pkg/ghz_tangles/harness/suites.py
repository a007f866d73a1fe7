import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
import pandas as pd
import pandera as pa
from pandera.typing import Series

from ..canonical.acin import acin_normal_form, necessity_certificates, random_acin_form, tangles_from_acin
from ..config.models import SuiteConfig
from ..constraints.inequalities import SteinerMode, achievability_lhs, steiner_margin
from ..constraints.marginals import (
    boundary_factors,
    eigenvalue_from_tangles,
    squared_boundary_expression,
    tangles_from_eigenvalues,
    triangle_margin_min,
)
from ..core.numerics import MAX_TANGLE_QUBITS
from ..core.sampling import haar_random_ket, sample_rng
from ..core.states import Ket, partial_trace
from ..errors import UsageError
from ..ghz_class.closed_form import (
    GhzBlock,
    invert_tangles,
    necessity_identity,
    numeric_subset_tangle,
    one_tangle_closed_form,
    strong_monogamy_residual,
    tangle_tuple_closed_form,
    tangles_closed_form,
)
from ..ghz_class.params import random_params, reconstruct_ket, reconstruct_operators
from ..tangles.measures import (
    k_to_km1_residual,
    one_tangle,
    subset_parties,
    tangle_tuple,
    three_tangle,
    two_tangle,
    two_tangle_assistance,
    wootters_roots,
)
from ..tangles.models import TangleTuple
from .reports import SuiteSummary, WorstCase
from .roof import convex_roof_bruteforce

log = logging.getLogger(__name__)

SUFFICIENCY_STEPS = 20
SUFFICIENCY_MARGIN = 1e-6
SUFFICIENCY_T_MIN = 1e-3
# looser acceptance thresholds are folded into the margins, which are then compared against -tolerance
ROUND_TRIP_TOL = 1e-7
INVERSION_T_MIN = 1e-6
DERIVATIVE_RTOL = 1e-6
ROOF_TOL = 1e-6


@dataclass(frozen=True)
class Sample:
    margin: float
    input: dict[str, Any]


SampleFunction = Callable[[int, int, int], Sample | None]


@dataclass(frozen=True)
class Suite:
    name: str
    run: SampleFunction
    # qubit counts the suite accepts; None means the suite ignores n
    qubits: tuple[int, ...] | None = None


SUITES: dict[str, Suite] = {}


def suite(name: str, qubits: tuple[int, ...] | None = None) -> Callable[[SampleFunction], SampleFunction]:
    def register(func: SampleFunction) -> SampleFunction:
        SUITES[name] = Suite(name=name, run=func, qubits=qubits)
        return func

    return register


def _tangles_input(psi: Ket) -> dict[str, Any]:
    return tangle_tuple(psi).model_dump()


def _pair_tangle(psi: Ket, a: int, b: int) -> float:
    return two_tangle(partial_trace(psi, [a, b]))


@suite("necessity")
def necessity(seed: int, index: int, n: int) -> Sample:
    """Achievability polynomial of a Haar-random state."""
    tangles = tangle_tuple(haar_random_ket(3, seed, index))
    return Sample(float(achievability_lhs(*tangles.as_tuple())), tangles.model_dump())


def _sufficiency_point(index: int) -> tuple[float, float, float, float] | None:
    if index >= SUFFICIENCY_STEPS**4:
        return None
    axis = np.linspace(0.0, 1.0, SUFFICIENCY_STEPS)
    i, j, k, m = np.unravel_index(index, (SUFFICIENCY_STEPS,) * 4)
    return float(axis[i]), float(axis[j]), float(axis[k]), float(axis[m])


@suite("sufficiency")
def sufficiency(seed: int, index: int, n: int) -> Sample | None:
    """Grid tuples strictly inside the achievable set invert to a state with the same tangles."""
    point = _sufficiency_point(index)
    if point is None:
        return None
    x, y, z, t = point
    if t <= SUFFICIENCY_T_MIN or achievability_lhs(x, y, z, t) < SUFFICIENCY_MARGIN:
        return None
    inversion = invert_tangles(TangleTuple(x=x, y=y, z=z, t=t))
    echo = {"tangles": [x, y, z, t], "r": inversion.r}
    if not inversion.feasible:
        return Sample(inversion.r - 1.0, echo)
    recovered = tangle_tuple(reconstruct_ket(inversion.params()))
    error = max(abs(a - b) for a, b in zip(recovered.as_tuple(), point))
    return Sample(min(inversion.r - 1.0, ROUND_TRIP_TOL - error), {**echo, "error": error})


@suite("ckw")
def ckw(seed: int, index: int, n: int) -> Sample:
    """tau_P^2 = sum of the two 2-tangles of P plus t^2, for every party P."""
    psi = haar_random_ket(3, seed, index)
    t2 = three_tangle(psi) ** 2
    residuals = []
    for party in range(3):
        q, s = (p for p in range(3) if p != party)
        pairs = _pair_tangle(psi, party, q) ** 2 + _pair_tangle(psi, party, s) ** 2
        residuals.append(one_tangle(psi, party) ** 2 - pairs - t2)
    return Sample(-max(abs(r) for r in residuals), {**_tangles_input(psi), "residuals": residuals})


@suite("assistance")
def assistance(seed: int, index: int, n: int) -> Sample:
    """t^2 = concave^2 - convex^2 for the reduced state of every pair."""
    psi = haar_random_ket(3, seed, index)
    t2 = three_tangle(psi) ** 2
    residuals = []
    for pair in ([1, 2], [0, 2], [0, 1]):
        roots = wootters_roots(partial_trace(psi, pair))
        residuals.append(t2 - (roots.concave**2 - roots.convex**2))
    return Sample(-max(abs(r) for r in residuals), {**_tangles_input(psi), "residuals": residuals})


@suite("steiner-convex")
def steiner_convex(seed: int, index: int, n: int) -> Sample:
    tangles = tangle_tuple(haar_random_ket(3, seed, index))
    x, y, z, _ = tangles.as_tuple()
    return Sample(float(steiner_margin(x, y, z, SteinerMode.CONVEX)), tangles.model_dump())


@suite("steiner-concave")
def steiner_concave(seed: int, index: int, n: int) -> Sample:
    psi = haar_random_ket(3, seed, index)
    assisted = [two_tangle_assistance(partial_trace(psi, pair)) for pair in ([1, 2], [0, 2], [0, 1])]
    return Sample(float(steiner_margin(*assisted, SteinerMode.CONCAVE)), {"assistance": assisted})


def _smaller_eigenvalues(psi: Ket) -> tuple[float, float, float]:
    a, b, c = (float(partial_trace(psi, [p]).spectrum()[-1]) for p in range(3))
    return a, b, c


@suite("marginal")
def marginal(seed: int, index: int, n: int) -> Sample:
    """Smaller single-party eigenvalues of a pure state obey the triangle inequalities."""
    lambdas = _smaller_eigenvalues(haar_random_ket(3, seed, index))
    return Sample(float(triangle_margin_min(*lambdas)), {"lambdas": list(lambdas)})


@suite("eigenvalue-loop")
def eigenvalue_loop(seed: int, index: int, n: int) -> Sample:
    """Tangles -> single-party eigenvalues -> tangles reproduces the squared 2-tangles."""
    psi = haar_random_ket(3, seed, index)
    x, y, z, t = tangle_tuple(psi).as_tuple()
    lambdas = (eigenvalue_from_tangles(z, y, t), eigenvalue_from_tangles(z, x, t), eigenvalue_from_tangles(y, x, t))
    ab, ac, bc = tangles_from_eigenvalues(*lambdas, t)
    residuals = [ab**2 - z**2, ac**2 - y**2, bc**2 - x**2]
    residuals += [a - b for a, b in zip(lambdas, _smaller_eigenvalues(psi))]
    return Sample(-max(abs(r) for r in residuals), {"tangles": [x, y, z, t], "lambdas": list(lambdas)})


@suite("factorization")
def factorization(seed: int, index: int, n: int) -> Sample:
    """The squared eigenvalue-space boundary equals p1 p2 / 16."""
    psi = haar_random_ket(3, seed, index)
    lambdas = _smaller_eigenvalues(psi)
    t = three_tangle(psi)
    p1, p2 = boundary_factors(*lambdas, t)
    residual = float(squared_boundary_expression(*lambdas, t) - p1 * p2 / 16.0)
    return Sample(-abs(residual), {"lambdas": list(lambdas), "t": t})


@suite("k-to-km1", qubits=(3, 5))
def k_to_km1(seed: int, index: int, n: int) -> Sample:
    """tau_I^2 = concave^2 - convex^2 of the state with one party traced out."""
    removed = index % n
    residual = k_to_km1_residual(haar_random_ket(n, seed, index), removed)
    return Sample(-abs(residual), {"removed": removed, "residual": residual})


@suite("closed-form", qubits=tuple(range(2, MAX_TANGLE_QUBITS + 1)))
def closed_form(seed: int, index: int, n: int) -> Sample:
    """Closed-form subset tangles and 1-tangles against the numerically constructed state."""
    params = random_params(n, sample_rng(seed, index))
    ops = reconstruct_operators(params)
    psi = reconstruct_ket(params)
    errors = [abs(one_tangle_closed_form(params, p) - one_tangle(psi, p)) for p in range(n)]
    for mask in range(1, 2**n):
        parties = subset_parties(mask, n)
        if len(parties) >= 2:
            errors.append(abs(tangles_closed_form(params, parties) - numeric_subset_tangle(ops, parties)))
    return Sample(-max(errors), params.model_dump())


@suite("strong-monogamy", qubits=tuple(range(2, MAX_TANGLE_QUBITS + 1)))
def strong_monogamy(seed: int, index: int, n: int) -> Sample:
    params = random_params(n, sample_rng(seed, index))
    residuals = [strong_monogamy_residual(params, p) for p in range(n)]
    return Sample(-max(abs(r) for r in residuals), params.model_dump())


@suite("inversion")
def inversion(seed: int, index: int, n: int) -> Sample | None:
    """Random parameters survive the round trip through their tangles."""
    params = random_params(3, sample_rng(seed, index))
    tangles = tangle_tuple_closed_form(params)
    if tangles.t <= INVERSION_T_MIN:
        return None
    result = invert_tangles(tangles)
    error = max(abs(result.r - params.r), *(abs(a - b) for a, b in zip(result.phis, params.phis)))
    return Sample(ROUND_TRIP_TOL - error, params.model_dump())


@suite("necessity-identity")
def necessity_identity_suite(seed: int, index: int, n: int) -> Sample:
    """The achievability polynomial of closed-form tangles matches its factorized form, relative to its size."""
    params = random_params(3, sample_rng(seed, index))
    lhs, rhs = necessity_identity(params)
    return Sample(-abs(lhs - rhs) / max(abs(rhs), 1.0), params.model_dump())


@suite("canonical")
def canonical(seed: int, index: int, n: int) -> Sample:
    """Tangles of the normal form equal the tangles of the state."""
    psi = haar_random_ket(3, seed, index)
    result = acin_normal_form(psi)
    direct = tangle_tuple(psi)
    error = max(abs(a - b) for a, b in zip(tangles_from_acin(result.form).as_tuple(), direct.as_tuple()))
    return Sample(-max(error, result.residual), {**direct.model_dump(), "form": result.form.model_dump()})


@suite("certificates")
def certificates(seed: int, index: int, n: int) -> Sample:
    """Perfect-square certificates on the 0 and pi branches, necessity on generic phases, concavity in x."""
    omega = (0.0, math.pi, None)[index % 3]
    form = random_acin_form(sample_rng(seed, index), omega)
    report = necessity_certificates(form)
    curvature = DERIVATIVE_RTOL * max(abs(report.expected_second_derivative), 1.0)
    margin = curvature - abs(report.second_difference - report.expected_second_derivative)
    residual = report.square_residual
    margin = min(margin, report.lhs if residual is None else -residual)
    return Sample(margin, {"form": form.model_dump(), "branch": report.branch})


@suite("roof")
def roof(seed: int, index: int, n: int) -> Sample:
    """Brute-force convex roof of a random GHZ block against 2|beta|."""
    rng = sample_rng(seed, index)
    k = 2 if index % 2 == 0 else 4
    alpha = float(rng.uniform(0.05, 0.95))
    gamma = 1.0 - alpha
    beta = math.sqrt(alpha * gamma) * float(rng.uniform(0.0, 0.95)) * complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    block = GhzBlock(qubits=tuple(range(k)), alpha=alpha, beta=beta, gamma=gamma)
    roots = convex_roof_bruteforce(block.to_density_matrix())
    error = abs(roots.convex - 2.0 * abs(beta))
    return Sample(ROOF_TOL - error, {"k": k, "alpha": alpha, "beta": [beta.real, beta.imag], "convex": roots.convex})


class SuiteRecords(pa.DataFrameModel):
    """One row per sample; skipped samples carry a missing margin."""

    sample: Series[int] = pa.Field(ge=0, unique=True, title="Sample", description="Sample index.")
    margin: Series[float] = pa.Field(nullable=True, title="Margin", description="Signed margin of the sample.")
    input: Series[object] = pa.Field(nullable=True, title="Input", description="Echo of the evaluated input.")

    @pa.check("sample", name="sorted")
    @classmethod
    def sorted_by_sample(cls, sample: Series[int]) -> bool:
        """Rows are ordered by sample index, whatever order the workers finished in."""
        return bool(sample.is_monotonic_increasing)

    class Config:
        strict = True


def _run_chunk(name: str, seed: int, n: int, start: int, stop: int) -> list[dict[str, Any]]:
    run = SUITES[name].run
    rows = []
    for index in range(start, stop):
        sample = run(seed, index, n)
        if sample is None:
            rows.append({"sample": index, "margin": math.nan, "input": None})
        else:
            rows.append({"sample": index, "margin": float(sample.margin), "input": sample.input})
    return rows


def _chunks(samples: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(samples / (4 * workers)))
    return [(start, min(start + size, samples)) for start in range(0, samples, size)]


def suite_records(config: SuiteConfig, name: str) -> pd.DataFrame:
    """Evaluate every sample of a suite."""
    if name not in SUITES:
        raise UsageError(f"Unknown suite {name!r}, expected one of {', '.join(sorted(SUITES))}.")
    accepted = SUITES[name].qubits
    if accepted is not None and config.n not in accepted:
        raise UsageError(f"Suite {name} runs for n in {accepted}, got n = {config.n}.")

    chunks = _chunks(config.samples, config.workers)
    if config.workers == 1:
        parts = [_run_chunk(name, config.seed, config.n, start, stop) for start, stop in chunks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            futures = [executor.submit(_run_chunk, name, config.seed, config.n, start, stop) for start, stop in chunks]
            parts = [f.result() for f in futures]
    df = pd.DataFrame([row for part in parts for row in part], columns=["sample", "margin", "input"])
    df = df.sort_values("sample", ignore_index=True).astype({"sample": "int64", "margin": "float64"})
    return SuiteRecords.validate(df)


def summarize(config: SuiteConfig, name: str, records: pd.DataFrame) -> SuiteSummary:
    evaluated = records.dropna(subset=["margin"])
    violations = int((evaluated["margin"] < -config.tolerance).sum())
    run = {
        "suite": name,
        "samples": config.samples,
        "seed": config.seed,
        "n": config.n if SUITES[name].qubits is not None else 3,
        "tolerance": config.tolerance,
    }
    if evaluated.empty:
        return SuiteSummary(**run, evaluated=0, violations=0)
    worst = evaluated.loc[evaluated["margin"].idxmin()]
    return SuiteSummary(
        **run,
        evaluated=len(evaluated),
        violations=violations,
        min_margin=float(evaluated["margin"].min()),
        max_margin=float(evaluated["margin"].max()),
        mean_margin=float(evaluated["margin"].mean()),
        worst=WorstCase(index=int(worst["sample"]), input=worst["input"], margin=float(worst["margin"])),
    )


def mc_suite(config: SuiteConfig, name: str) -> SuiteSummary:
    """Run a Monte Carlo suite."""
    log.info(
        "Running suite %s with %d samples (seed %d, %d workers).", name, config.samples, config.seed, config.workers
    )
    summary = summarize(config, name, suite_records(config, name))
    log.info("Suite %s: %d of %d evaluated samples violate.", name, summary.violations, summary.evaluated)
    return summary
