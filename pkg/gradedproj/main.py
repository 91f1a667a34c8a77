"""
Command line for gradedproj.

Exit status: 0 when every requested identity holds, 1 on a verification
failure, 2 on a usage or precondition error.
"""

import logging
import os
from typing import Annotated, List, Optional, Tuple

import typer
from dotenv import load_dotenv
from pydantic import ValidationError

from .cache import configure_cache, get_cache
from .charring import character_dimension, dominant_multiplicities, graded_specialize, weyl_dim
from .errors import GradedProjError
from .gammaposet import gamma_set, psi_from_roots, psi_from_xi, psi_node, to_dot, to_json
from .jacobitrudi import (
    calibrate_koike_terada,
    golden_mismatches,
    load_golden_table,
    stable_formula_check,
    verify_conjecture,
)
from .liealgebra import c_terms, psi_module
from .logging_config import setup_logging
from .models import (
    CharacterReport,
    CharacterRow,
    CheckResult,
    CoefficientReport,
    Family,
    GammaReport,
    GradedReport,
    JTMode,
    LayerRow,
    OutputFormat,
    ProjectiveCharacter,
    PsiSet,
    RootSystem,
    RunConfig,
    VerificationReport,
    Weight,
)
from .projchar import kr_character, matrix_check, projective_character
from .rendering import (
    character_table,
    coefficient_table,
    format_character,
    gamma_table,
    graded_table,
    render_table,
    to_json as model_json,
)
from .rootdata import build_root_system, conjecture_support, i_lambda, parse_lie_type, parse_weight
from .sweep import CHECKS, SweepRunner, default_psi, sweep_grid

logger = logging.getLogger(__name__)

load_dotenv()

app = typer.Typer(help="Graded characters, c/d coefficients and Jacobi-Trudi checks for types B, C, D.",
                  no_args_is_help=True, add_completion=False)
verify_app = typer.Typer(help="Check identities; exit 0 when every residual vanishes.", no_args_is_help=True)
cache_app = typer.Typer(help="Inspect or clear the persistent cache.", no_args_is_help=True)
app.add_typer(verify_app, name="verify")
app.add_typer(cache_app, name="cache")

# Options shared by most commands
TypeOpt = Annotated[Optional[str], typer.Option("--type", help="Cartan type such as B4; defaults to the global --type.")]
FormatOpt = Annotated[Optional[OutputFormat], typer.Option("--format", help="table or json; defaults to the global --format.")]
WeightOpt = Annotated[str, typer.Option("--weight", help="Fundamental-weight coordinates, e.g. 1,1,1,0.")]
PsiNodeOpt = Annotated[Optional[int], typer.Option("--psi-node", help="Use Psi_i for node i.")]
PsiXiOpt = Annotated[Optional[str], typer.Option("--psi-xi", help="Use the argmax set of a dominant weight xi.")]
PsiRootsOpt = Annotated[Optional[str], typer.Option("--psi-roots", help="Explicit roots in simple-root coordinates, separated by ';'.")]


def _fail(message: str, code: int = 2) -> None:
    typer.echo(f"error: {message}", err=True)
    raise typer.Exit(code=code)


def _settings(ctx: typer.Context) -> dict:
    return ctx.find_root().obj or {}


def _config(ctx: typer.Context, lie_type: Optional[str], weight: Optional[str] = None,
            psi_node_: Optional[int] = None, psi_xi: Optional[str] = None, psi_roots: Optional[str] = None,
            output_format: Optional[OutputFormat] = None) -> RunConfig:
    settings = _settings(ctx)
    lie_type = lie_type or settings.get("lie_type")
    if lie_type is None:
        if weight is None:
            _fail("--type is required")
        # B of the weight's length when no type is given
        lie_type = f"B{len(weight.split(','))}"
    try:
        return RunConfig(
            lie_type=lie_type,
            weight=weight,
            psi_node=psi_node_,
            psi_xi=psi_xi,
            psi_roots=psi_roots,
            output_format=output_format or settings.get("output_format", OutputFormat.TABLE),
            cache_dir=settings.get("cache_dir"),
            use_cache=settings.get("use_cache", True),
            workers=settings.get("workers"),
            log_level=settings.get("log_level", "WARNING"),
        )
    except ValidationError as e:
        _fail(str(e.errors()[0]["msg"]))


def _resolve(config: RunConfig) -> Tuple[RootSystem, Optional[Weight]]:
    rs = build_root_system(parse_lie_type(config.lie_type))
    lam = parse_weight(config.weight, rs.rank) if config.weight is not None else None
    return rs, lam


def _psi(config: RunConfig, lam: Weight, rs: RootSystem) -> PsiSet:
    if config.psi_node is not None:
        return psi_node(config.psi_node, rs)
    if config.psi_xi is not None:
        return psi_from_xi(parse_weight(config.psi_xi, rs.rank), rs)
    if config.psi_roots is not None:
        roots = [parse_weight(r, rs.rank) for r in config.psi_roots.split(";") if r.strip()]
        return psi_from_roots(roots, rs)
    return default_psi(lam, rs)


def _emit(fmt: OutputFormat, model, table: str) -> None:
    if fmt == OutputFormat.JSON:
        typer.echo(model_json(model))
    else:
        typer.echo(table, nl=False)


def _guarded(fn):
    """Run fn, mapping library and parse errors to exit status 2."""
    try:
        return fn()
    except (GradedProjError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        _fail(str(e))

# =============================================================================
# Global options
# =============================================================================

@app.callback()
def main_callback(
    ctx: typer.Context,
    lie_type: Optional[str] = typer.Option(None, "--type", help="Cartan type such as B4."),
    output_format: OutputFormat = typer.Option(OutputFormat.TABLE, "--format", help="table or json."),
    cache_dir: Optional[str] = typer.Option(None, "--cache-dir", help="Persistent cache directory."),
    no_cache: bool = typer.Option(False, "--no-cache", help="Disable the persistent cache."),
    log_level: str = typer.Option(os.getenv("GRADEDPROJ_LOG_LEVEL", "WARNING"), "--log-level"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes for sweeps."),
):
    setup_logging(log_level)
    if workers is None and os.getenv("GRADEDPROJ_WORKERS"):
        workers = int(os.environ["GRADEDPROJ_WORKERS"])
    configure_cache(cache_dir, enabled=not no_cache)
    ctx.obj = {
        "lie_type": lie_type,
        "output_format": output_format,
        "cache_dir": cache_dir,
        "use_cache": not no_cache,
        "log_level": log_level,
        "workers": workers,
    }

# =============================================================================
# Computations
# =============================================================================

@app.command("char")
def cmd_char(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
             output_format: FormatOpt = None):
    """Dominant weight multiplicities and dimension of V(lambda)."""
    config = _config(ctx, lie_type, weight, output_format=output_format)

    def run():
        rs, lam = _resolve(config)
        mults = dominant_multiplicities(lam, rs)
        total = weyl_dim(lam, rs)
        report = CharacterReport(
            lie_type=str(rs.lie_type), lam=list(lam), dimension=total,
            rows=[CharacterRow(weight=list(w), mult=m, dim=weyl_dim(w, rs))
                  for w, m in sorted(mults.items(), key=lambda kv: tuple(-c for c in kv[0]))],
        )
        _emit(config.output_format, report, character_table(str(rs.lie_type), lam, mults, total))

    _guarded(run)


def _graded_output(config: RunConfig, rs: RootSystem, title: str, proj: ProjectiveCharacter) -> None:
    dims = {w: weyl_dim(w, rs) for s in proj.graded.degrees() for w in proj.graded.layer(s).mult}
    report = GradedReport(
        lie_type=str(rs.lie_type),
        lam=list(proj.base.mu),
        psi_origin=proj.psi.describe(),
        layers=[LayerRow(degree=s, weight=list(w), mult=m)
                for s in proj.graded.degrees() for w, m in proj.graded.layer(s).items()],
        dimension=character_dimension(graded_specialize(proj.graded), rs),
    )
    table = graded_table(title, proj, dims) + f"dimension at t=1: {report.dimension}\n"
    _emit(config.output_format, report, table)


@app.command("proj")
def cmd_proj(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
             psi_node_: PsiNodeOpt = None, psi_xi: PsiXiOpt = None,
             psi_roots: PsiRootsOpt = None, output_format: FormatOpt = None):
    """Graded character of P(lambda, 0)^Gamma."""
    config = _config(ctx, lie_type, weight, psi_node_, psi_xi, psi_roots, output_format)

    def run():
        rs, lam = _resolve(config)
        psi = _psi(config, lam, rs)
        proj = projective_character(lam, psi, rs)
        _graded_output(config, rs, f"ch_t P({','.join(map(str, lam))}, 0) for {psi.describe()}", proj)

    _guarded(run)


@app.command("kr")
def cmd_kr(ctx: typer.Context, node: int = typer.Option(..., "--node"), level: int = typer.Option(..., "--level"),
           lie_type: TypeOpt = None, output_format: FormatOpt = None):
    """Graded character of the KR module labelled (node, level)."""
    config = _config(ctx, lie_type, output_format=output_format)

    def run():
        rs, _ = _resolve(config)
        proj = kr_character(node, level, rs)
        _graded_output(config, rs, f"KR({node},{level}) in {rs.lie_type}", proj)

    _guarded(run)


@app.command("gamma")
def cmd_gamma(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
              psi_node_: PsiNodeOpt = None, psi_xi: PsiXiOpt = None,
              psi_roots: PsiRootsOpt = None, dot: bool = typer.Option(False, "--dot", help="Emit Graphviz."),
              output_format: FormatOpt = None):
    """Nodes and cover relations of Gamma(lambda, Psi)."""
    config = _config(ctx, lie_type, weight, psi_node_, psi_xi, psi_roots, output_format)

    def run():
        rs, lam = _resolve(config)
        gamma = gamma_set(lam, _psi(config, lam, rs), rs)
        if dot:
            typer.echo(to_dot(gamma), nl=False)
            return
        payload = to_json(gamma)
        report = GammaReport(lie_type=str(rs.lie_type), lam=list(lam), psi_origin=gamma.psi.describe(),
                             nodes=payload["nodes"], edges=payload["edges"])
        _emit(config.output_format, report, gamma_table(gamma))

    _guarded(run)


@app.command("coeffs")
def cmd_coeffs(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
               psi_node_: PsiNodeOpt = None, psi_xi: PsiXiOpt = None,
               psi_roots: PsiRootsOpt = None, output_format: FormatOpt = None):
    """c^lambda_{mu,s} for every weight space of the exterior algebra of n^-_Psi."""
    config = _config(ctx, lie_type, weight, psi_node_, psi_xi, psi_roots, output_format)

    def run():
        rs, lam = _resolve(config)
        psi = _psi(config, lam, rs)
        rows = c_terms(lam, psi_module(psi, rs), rs)
        report = CoefficientReport(lie_type=str(rs.lie_type), lam=list(lam), psi_origin=psi.describe(), rows=rows)
        title = f"c-coefficients for λ=({','.join(map(str, lam))}), {psi.describe()} in {rs.lie_type}"
        _emit(config.output_format, report, coefficient_table(title, rows))

    _guarded(run)

# =============================================================================
# Verification
# =============================================================================

def _finish_verification(config: RunConfig, report: VerificationReport) -> None:
    rows = [(c.check, "pass" if c.passed else "FAIL", c.residual or "0") for c in report.checks]
    _emit(config.output_format, report, render_table(f"verify {report.lie_type} λ=({','.join(map(str, report.lam))})",
                                       ["check", "status", "residual"], rows))
    failing = next((c for c in report.checks if not c.passed), None)
    if failing is not None:
        typer.echo(f"{failing.check} residual: {failing.residual}", err=True)
        raise typer.Exit(code=1)


def _verify(config: RunConfig, checks: List[str]) -> None:
    def run():
        rs, lam = _resolve(config)
        psi = _psi(config, lam, rs)
        matrices = None
        results: List[CheckResult] = []
        for name in checks:
            if name == "matrix":
                result, matrices = matrix_check(lam, psi, rs)
                results.append(result)
            else:
                results.append(CHECKS[name](lam, psi, rs))
        return VerificationReport(
            lie_type=str(rs.lie_type),
            lam=list(lam),
            psi_origin=psi.describe(),
            residual_is_zero=all(r.passed for r in results),
            checks=results,
            matrices=matrices,
        )

    _finish_verification(config, _guarded(run))


@verify_app.command("thm2")
def verify_thm2_cmd(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
                    psi_node_: PsiNodeOpt = None, psi_xi: PsiXiOpt = None,
                    psi_roots: PsiRootsOpt = None,
                    extra: bool = typer.Option(False, "--extra", help="Also run the dimension and shift checks."),
                    output_format: FormatOpt = None):
    """The alternating c-sum of projective characters equals ch V(lambda)."""
    config = _config(ctx, lie_type, weight, psi_node_, psi_xi, psi_roots, output_format)
    _verify(config, ["thm2", "dimension", "shift"] if extra else ["thm2"])


@verify_app.command("matrix")
def verify_matrix_cmd(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
                      psi_node_: PsiNodeOpt = None, psi_xi: PsiXiOpt = None,
                      psi_roots: PsiRootsOpt = None, output_format: FormatOpt = None):
    """A(t) E(-t) = Id over Gamma(lambda, Psi)."""
    config = _config(ctx, lie_type, weight, psi_node_, psi_xi, psi_roots, output_format)
    _verify(config, ["matrix"])


@verify_app.command("conjecture")
def verify_conjecture_cmd(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
                          mode: JTMode = typer.Option(JTMode.CONCRETE, "--mode"),
                          output_format: FormatOpt = None):
    """sum (-1)^s c h_nu = ch V(lambda), in the character ring or in Z[h_k]."""
    config = _config(ctx, lie_type, weight, output_format=output_format)

    def run():
        rs, lam = _resolve(config)
        residual = verify_conjecture(lam, rs, mode)
        zero = residual.is_zero()
        if zero:
            text = None
        elif mode == JTMode.SYMBOLIC:
            text = str(residual)
        else:
            text = format_character(residual)
        check = CheckResult(check=f"conjecture/{mode.value}", passed=zero, residual=text)
        return VerificationReport(lie_type=str(rs.lie_type), lam=list(lam), residual_is_zero=zero, checks=[check])

    _finish_verification(config, _guarded(run))


@verify_app.command("stable")
def verify_stable_cmd(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
                      output_format: FormatOpt = None):
    """The 2^|Psi|-term alternating sum of Jacobi-Trudi determinants for large lambda."""
    config = _config(ctx, lie_type, weight, output_format=output_format)

    def run():
        rs, lam = _resolve(config)
        residual = stable_formula_check(lam, rs)
        check = CheckResult(check="stable", passed=residual.is_zero(),
                            residual=None if residual.is_zero() else format_character(residual))
        return VerificationReport(lie_type=str(rs.lie_type), lam=list(lam), residual_is_zero=check.passed,
                                  checks=[check])

    _finish_verification(config, _guarded(run))


@verify_app.command("golden")
def verify_golden_cmd(ctx: typer.Context, weight: WeightOpt, lie_type: TypeOpt = None,
                      table: Optional[str] = typer.Option(None, "--table",
                                                          help="Golden table name; chosen from the type and i_lambda when omitted."),
                      output_format: FormatOpt = None):
    """Computed c-coefficients against a stored table, entry for entry."""
    config = _config(ctx, lie_type, weight, output_format=output_format)

    def run():
        rs, lam = _resolve(config)
        name = table or f"{'c' if rs.family == Family.C else 'bd'}_ilambda{i_lambda(lam)}"
        problems = golden_mismatches(load_golden_table(name), lam, rs)
        check = CheckResult(check=f"golden/{name}", passed=not problems,
                            residual="; ".join(problems) if problems else None,
                            detail={"mismatches": len(problems)})
        return VerificationReport(lie_type=str(rs.lie_type), lam=list(lam), residual_is_zero=check.passed,
                                  checks=[check])

    _finish_verification(config, _guarded(run))


@verify_app.command("calibrate")
def verify_calibrate_cmd(ctx: typer.Context, lie_type: TypeOpt = None,
                         top: int = typer.Option(..., "--i-lambda", help="Last nonzero node of the weights tried."),
                         max_coord: int = typer.Option(2, "--max-coord"),
                         output_format: FormatOpt = None):
    """Evaluate the Koike-Terada determinant against ch V(lambda); exit 1 if the route stays disabled."""
    config = _config(ctx, lie_type, output_format=output_format)

    def run():
        rs, _ = _resolve(config)
        return calibrate_koike_terada(rs, top, max_coord)

    report = _guarded(run)
    status = "enabled" if report.enabled else "disabled"
    rows = [(",".join(map(str, case.lam)), "pass" if case.passed else "FAIL") for case in report.cases]
    _emit(config.output_format, report,
          render_table(f"calibrate {report.lie_type} i_lambda={report.i_lambda}: {status}", ["lambda", "status"], rows))
    if not report.enabled:
        failing = next((case for case in report.cases if not case.passed), None)
        where = f" at lambda={','.join(map(str, failing.lam))}" if failing else ""
        typer.echo(f"calibration failed{where}", err=True)
        raise typer.Exit(code=1)


@verify_app.command("sweep")
def verify_sweep_cmd(ctx: typer.Context, lie_type: TypeOpt = None,
                     checks: str = typer.Option("thm2,matrix,conjecture", "--checks",
                                                help=f"Comma-separated subset of {','.join(CHECKS)}."),
                     max_coord: int = typer.Option(1, "--max-coord"),
                     max_i_lambda: Optional[int] = typer.Option(None, "--max-i-lambda"),
                     output_format: FormatOpt = None):
    """Run checks over every weight with small coordinates, in parallel."""
    config = _config(ctx, lie_type, output_format=output_format)
    names = [c.strip() for c in checks.split(",") if c.strip()]
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        _fail(f"unknown checks: {', '.join(unknown)}")

    def run():
        rs, _ = _resolve(config)
        top = max_i_lambda if max_i_lambda is not None else min(3, conjecture_support(rs))
        runner = SweepRunner(max_workers=config.workers, cache_dir=config.cache_dir, use_cache=config.use_cache)
        return runner.run(rs, names, sweep_grid(rs, max_coord, top))

    report = _guarded(run)
    rows = [(",".join(map(str, case.lam)), case.error or "; ".join(c.check for c in case.checks if not c.passed))
            for case in report.failed]
    table = render_table(f"sweep {report.lie_type}: {report.passed}/{report.total} passed", ["lambda", "failure"], rows)
    _emit(config.output_format, report, table)
    if report.failed:
        raise typer.Exit(code=1)

# =============================================================================
# Cache
# =============================================================================

@cache_app.command("stats")
def cache_stats(ctx: typer.Context, output_format: FormatOpt = None):
    """Record counts per operation."""
    cache = get_cache()
    if cache is None:
        _fail("the persistent cache is disabled")
    stats = cache.stats()
    rows = [(op, n) for op, n in stats.ops.items()]
    table = render_table(f"{stats.path}: {stats.records} records, {stats.skipped} skipped", ["op", "records"], rows)
    _emit(output_format or _settings(ctx).get("output_format", OutputFormat.TABLE), stats, table)


@cache_app.command("clear")
def cache_clear():
    """Delete the cache file."""
    cache = get_cache()
    if cache is None:
        _fail("the persistent cache is disabled")
    cache.clear()
    typer.echo(f"cleared {cache.path}")


def main():
    app()


if __name__ == "__main__":
    main()
