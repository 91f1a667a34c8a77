"""
Named checks and the process-pool sweep that runs them over a grid of weights.
"""

import logging
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

from .cache import configure_cache
from .errors import GradedProjError
from .gammaposet import psi_from_roots, psi_node
from .jacobitrudi import conjecture_cross_check, stable_formula_check, verify_conjecture
from .models import CheckResult, JTMode, PsiSet, RootSystem, SweepCase, SweepReport, Weight
from .projchar import dimension_check, matrix_check, shift_check, verify_thm2
from .rendering import format_character, format_graded
from .rootdata import build_root_system, i_lambda, parse_lie_type

logger = logging.getLogger(__name__)


def default_psi(lam: Weight, rs: RootSystem) -> PsiSet:
    """Psi_{i_lambda}; empty for lambda = 0."""
    top = i_lambda(lam)
    return psi_node(top, rs) if top else psi_from_roots([], rs)

# =============================================================================
# Checks
# =============================================================================

def check_thm2(lam: Weight, psi: PsiSet, rs: RootSystem) -> CheckResult:
    residual = verify_thm2(lam, psi, rs)
    return CheckResult(check="thm2", passed=residual.is_zero(),
                       residual=None if residual.is_zero() else format_graded(residual))


def check_matrix(lam: Weight, psi: PsiSet, rs: RootSystem) -> CheckResult:
    return matrix_check(lam, psi, rs)[0]


def check_conjecture(lam: Weight, psi: PsiSet, rs: RootSystem) -> CheckResult:
    residual = verify_conjecture(lam, rs, JTMode.CONCRETE)
    return CheckResult(check="conjecture", passed=residual.is_zero(),
                       residual=None if residual.is_zero() else format_character(residual))


def check_stable(lam: Weight, psi: PsiSet, rs: RootSystem) -> CheckResult:
    residual = stable_formula_check(lam, rs)
    return CheckResult(check="stable", passed=residual.is_zero(),
                       residual=None if residual.is_zero() else format_character(residual))


def check_cross(lam: Weight, psi: PsiSet, rs: RootSystem) -> CheckResult:
    return conjecture_cross_check(lam, rs)


CHECKS: Dict[str, Callable[[Weight, PsiSet, RootSystem], CheckResult]] = {
    "thm2": check_thm2,
    "matrix": check_matrix,
    "dimension": dimension_check,
    "shift": shift_check,
    "conjecture": check_conjecture,
    "cross": check_cross,
    "stable": check_stable,
}


def run_checks(lam: Weight, names: Sequence[str], rs: RootSystem, psi: Optional[PsiSet] = None) -> List[CheckResult]:
    psi = psi if psi is not None else default_psi(lam, rs)
    return [CHECKS[name](lam, psi, rs) for name in names]

# =============================================================================
# Sweep
# =============================================================================

def sweep_grid(rs: RootSystem, max_coord: int, max_i_lambda: int) -> List[Weight]:
    """Dominant weights with coordinates <= max_coord supported on nodes 1..max_i_lambda."""
    tail = tuple(0 for _ in range(rs.rank - max_i_lambda))
    return [tuple(head) + tail for head in product(range(max_coord + 1), repeat=max_i_lambda)]


def run_sweep_case(args):
    """Run the named checks for one weight - must be top-level function for multiprocessing"""
    lie_type, lam, names, cache_dir, use_cache = args
    try:
        configure_cache(cache_dir, enabled=use_cache, read_only=True)
        rs = build_root_system(parse_lie_type(lie_type))
        results = run_checks(tuple(lam), names, rs)
        return {
            'success': all(r.passed for r in results),
            'lam': list(lam),
            'checks': [r.model_dump() for r in results],
        }
    except (GradedProjError, ArithmeticError, ValueError) as e:
        return {
            'success': False,
            'lam': list(lam),
            'checks': [],
            'error': str(e),
        }


class SweepRunner:
    def __init__(self, max_workers: Optional[int] = None, cache_dir: Optional[str] = None, use_cache: bool = True):
        self.max_workers = max_workers or max(1, mp.cpu_count() - 1)
        self.cache_dir = cache_dir
        self.use_cache = use_cache
        logger.info(f"Using {self.max_workers} worker processes")

    def run(self, rs: RootSystem, names: Sequence[str], weights: Sequence[Weight]) -> SweepReport:
        logger.info(f"Starting sweep of {len(weights)} weights in {rs.lie_type}: {', '.join(names)}")
        args = [(str(rs.lie_type), list(lam), list(names), self.cache_dir, self.use_cache) for lam in weights]

        if self.max_workers == 1:
            results = [run_sweep_case(a) for a in args]
        else:
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                results = list(executor.map(run_sweep_case, args))

        successful = sum(1 for r in results if r['success'])
        failed = len(results) - successful
        logger.info(f"Sweep complete: {successful} passed, {failed} failed")

        failures = []
        for r in results:
            if not r['success']:
                logger.error(f"✗ Failed: lambda={r['lam']} - {r.get('error') or 'nonzero residual'}",
                             extra={'lie_type': str(rs.lie_type), 'weight': r['lam']})
                failures.append(SweepCase(lam=r['lam'], success=False, checks=r['checks'], error=r.get('error')))
        return SweepReport(lie_type=str(rs.lie_type), checks=list(names), total=len(results),
                           passed=successful, failed=failures)
