import argparse
import logging
import pprint
import sys
from typing import Callable, Sequence

from pydantic import BaseModel, ValidationError

from ..canonical.acin import acin_normal_form, necessity_certificates, tangles_from_acin
from ..config.models import GridSpec, SuiteConfig
from ..constraints.inequalities import achievability_lhs, evaluate_all
from ..constraints.marginals import eigenvalue_from_tangles, marginal_triangle_margins
from ..core.numerics import RANK_TOL
from ..errors import ExitCode, InconsistentTanglesError, TangleError, exit_code_for
from ..ghz_class.closed_form import (
    INVERSION_T_MIN,
    invert_tangles,
    one_tangle_closed_form,
    strong_monogamy_residual,
    tangle_tuple_closed_form,
    tangles_closed_form,
)
from ..harness.reports import CanonicalReport, CheckReport, MonogamyReport, RoofReport, SubsetTangle, TanglesReport
from ..harness.roof import convex_roof_bruteforce
from ..harness.suites import ROOF_TOL, mc_suite
from ..harness.surface import surface_frame
from ..io.formats import load_json, read_acin, read_density, read_ket, read_params, write_surface
from ..tangles.measures import one_tangles, subset_parties, subset_tangles, tangle_tuple, wootters_roots
from ..tangles.models import TangleTuple
from .parser import parse_args

log = logging.getLogger(__name__)

LOG_FORMAT = "[%(asctime)s] [%(levelname)8s] --- %(message)s"

Command = Callable[[argparse.Namespace, SuiteConfig], ExitCode]


def _emit(model: BaseModel) -> None:
    sys.stdout.write(model.model_dump_json(indent=2) + "\n")


def run_tangles(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    psi = read_ket(args.state)
    tangles = subset_tangles(psi)
    report = TanglesReport(
        n=psi.n,
        one_tangles=one_tangles(psi),
        subsets=[SubsetTangle(mask=m, parties=subset_parties(m, psi.n), tangle=v) for m, v in tangles.items()],
        three_qubit=tangle_tuple(psi) if psi.n == 3 else None,
    )
    _emit(report)
    return ExitCode.OK


def run_ghz(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    params = read_params(args.params)
    subsets = []
    for mask in range(1, 2**params.n):
        parties = subset_parties(mask, params.n)
        if len(parties) >= 2:
            subsets.append(SubsetTangle(mask=mask, parties=parties, tangle=tangles_closed_form(params, parties)))
    report = TanglesReport(
        n=params.n,
        one_tangles=[one_tangle_closed_form(params, p) for p in range(params.n)],
        subsets=subsets,
        three_qubit=tangle_tuple_closed_form(params) if params.n == 3 else None,
    )
    _emit(report)
    return ExitCode.OK


def _marginal_margins(tangles: TangleTuple) -> tuple[float, float, float] | None:
    x, y, z, t = tangles.as_tuple()
    try:
        lambdas = (eigenvalue_from_tangles(z, y, t), eigenvalue_from_tangles(z, x, t), eigenvalue_from_tangles(y, x, t))
    except InconsistentTanglesError as e:
        log.info("No single-party spectra for %s: %s", tangles.as_tuple(), e)
        return None
    return marginal_triangle_margins(*lambdas).margins


def run_check(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    tangles = TangleTuple(x=args.x, y=args.y, z=args.z, t=args.t)
    margin = float(achievability_lhs(*tangles.as_tuple()))
    feasible = margin >= -config.tolerance
    on_boundary = abs(margin) <= config.tolerance
    if not feasible:
        status = "infeasible"
    elif on_boundary and tangles.t <= INVERSION_T_MIN:
        status = "boundary-degenerate"
    else:
        status = "feasible"
    witness = None
    if feasible and tangles.t > INVERSION_T_MIN:
        inversion = invert_tangles(tangles)
        # for t > 0, r >= 1 holds exactly when the achievability margin is nonnegative
        witness = {"r": inversion.r, "phis": list(inversion.phis), "feasible": feasible}
    report = CheckReport(
        tangles=tangles,
        feasible=feasible,
        on_boundary=on_boundary,
        status=status,
        margins={verdict.name: verdict.margin for verdict in evaluate_all(*tangles.as_tuple())},
        marginal_margins=_marginal_margins(tangles),
        witness=witness,
    )
    _emit(report)
    return ExitCode.OK if feasible else ExitCode.VIOLATION


def run_invert(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    result = invert_tangles(TangleTuple(x=args.x, y=args.y, z=args.z, t=args.t))
    _emit(result)
    return ExitCode.OK if result.feasible else ExitCode.VIOLATION


def run_sample(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    summary = mc_suite(config, args.suite)
    _emit(summary)
    return ExitCode.OK if summary.passed else ExitCode.VIOLATION


def run_surface(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    if args.grid is not None:
        grid = GridSpec.model_validate(load_json(args.grid))
    else:
        grid = GridSpec.cube(args.steps, args.lo, args.hi, args.slices)
    write_surface(surface_frame(grid, args.constraint), args.output)
    return ExitCode.OK


def run_canonical(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    residual = None
    if args.form:
        form = read_acin(args.state)
    else:
        result = acin_normal_form(read_ket(args.state))
        form, residual = result.form, result.residual
    certificates = necessity_certificates(form)
    _emit(CanonicalReport(form=form, tangles=tangles_from_acin(form), residual=residual, certificates=certificates))
    return ExitCode.OK if certificates.lhs >= -config.tolerance else ExitCode.VIOLATION


def run_monogamy(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    params = read_params(args.params)
    residuals = [strong_monogamy_residual(params, p) for p in range(params.n)]
    worst = max(abs(r) for r in residuals)
    _emit(MonogamyReport(n=params.n, residuals=residuals, max_abs_residual=worst))
    return ExitCode.OK if worst <= config.tolerance else ExitCode.VIOLATION


def run_roof(args: argparse.Namespace, config: SuiteConfig) -> ExitCode:
    rho = read_density(args.density)
    bruteforce = convex_roof_bruteforce(
        rho, grid_points=args.grid_points, three_term=args.three_term, restarts=args.restarts, seed=config.seed
    )
    formula = wootters_roots(rho)
    _emit(RoofReport(k=rho.k, rank=rho.rank(RANK_TOL), bruteforce=bruteforce, formula=formula))
    return ExitCode.OK if bruteforce.convex >= formula.convex - ROOF_TOL else ExitCode.VIOLATION


COMMANDS: dict[str, Command] = {
    "tangles": run_tangles,
    "ghz": run_ghz,
    "check": run_check,
    "invert": run_invert,
    "sample": run_sample,
    "surface": run_surface,
    "canonical": run_canonical,
    "monogamy": run_monogamy,
    "roof": run_roof,
}


def main(argv: Sequence[str] | None = None) -> None:
    try:
        args, config = parse_args(argv)
    except (ValueError, OSError) as e:
        logging.basicConfig(format=LOG_FORMAT)
        log.error("Invalid configuration: %s", e)
        sys.exit(ExitCode.USAGE)

    logging.basicConfig(
        format=LOG_FORMAT,
        level=config.loglevel,
    )

    log.info("-" * 50)
    log.info("Config successfully parsed.")
    for line in pprint.pformat(config).split(", "):
        log.info(line)
    log.info("-" * 50)

    try:
        code = COMMANDS[args.command](args, config)
    except ValidationError as e:
        log.error("Invalid input: %s", e)
        code = ExitCode.USAGE
    except TangleError as e:
        log.error("%s: %s", type(e).__name__, e)
        code = exit_code_for(e)
    except OSError as e:
        log.error("Cannot access input: %s", e)
        code = ExitCode.USAGE

    sys.exit(code)


if __name__ == "__main__":
    main()
