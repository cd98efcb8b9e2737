"""Verification suite: every structural claim checked exactly on a window, one worker per order p."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from typing import TYPE_CHECKING

from loguru import logger
from pydantic import BaseModel

from apps.rpbs.models import BasisKet, CheckName, Generator, RepParams, State, Tag
from apps.rpbs.services.algebra import NamedOperator, check_identity, evaluate, named_operator, redundancy_identity
from apps.rpbs.services.catalog import mutated, relation_catalog
from apps.rpbs.services.fock import (
    apply_word,
    beta_from_vacuum,
    block_dimension,
    canonicalize,
    cyclicity_check,
    enumerate_basis,
)
from apps.rpbs.services.grading import ALT, MAIN, NonHomogeneous, check_graded_module, degree_element, relation_degrees
from apps.rpbs.services.metric import adjointness_check, positivity_check
from apps.rpbs.services.spectra import t_ladder_report
from config.settings import get_settings

if TYPE_CHECKING:
    from collections.abc import Callable

    from apps.rpbs.models import RunConfig


class CheckResult(BaseModel):
    """Verdict of one check for one order p."""

    check: CheckName
    p: int
    passed: bool
    detail: str
    data: dict[str, object] = {}


class VerificationReport(BaseModel):
    """Per-check verdicts for every order of a run; serialized with a schema field."""

    orders: list[int]
    window_m: int
    guard: int
    passed: bool
    first_failure: str | None
    results: list[CheckResult]


def basis_census(params: RepParams) -> CheckResult:
    """Block dimensions and the canonical collapse of degenerate beta labels."""
    kets = enumerate_basis(params)
    problems: list[str] = []
    for m in range(params.window_m + 1):
        for n in range(params.p + 1):
            found = sum(1 for ket in kets if (ket.m, ket.n) == (m, n))
            expected = 1 if m == 0 or n in (0, params.p) else 2
            if found != expected or block_dimension(m, n, params.p) != expected:
                problems.append(f"V_{m},{n} has {found} kets, expected {expected}")
    if canonicalize(1, params.p, Tag.BETA, 1, params) != State.ket(BasisKet(1, params.p), Fraction(1, params.p)):
        problems.append(f"|1,{params.p},β⟩ does not collapse to (1/p)|1,{params.p},α⟩")
    if canonicalize(0, 1, Tag.BETA, 1, params) or canonicalize(1, 0, Tag.BETA, 1, params):
        problems.append("beta labels on the m=0 or n=0 edge survive canonicalization")
    betas = sum(1 for ket in kets if ket.tag is Tag.BETA)
    return CheckResult(
        check=CheckName.BASIS,
        p=params.p,
        passed=not problems,
        detail="; ".join(problems) or f"{len(kets)} kets, {betas} beta",
        data={"kets": len(kets), "beta_kets": betas},
    )


class VacuumReport(BaseModel):
    p: int
    holds: bool
    images: dict[str, str]


def vacuum_conditions(params: RepParams) -> VacuumReport:
    """b-|0> = f-|0> = 0, b-b+|0> = f-f+|0> = p|0> and b-f+|0> = f-b+|0> = 0."""
    working = params.with_window(max(params.window_m, 1))
    vacuum = State.vacuum()
    p_vacuum = vacuum * params.p
    expected = {
        (Generator.B_MINUS,): State.zero(),
        (Generator.F_MINUS,): State.zero(),
        (Generator.B_MINUS, Generator.B_PLUS): p_vacuum,
        (Generator.F_MINUS, Generator.F_PLUS): p_vacuum,
        (Generator.B_MINUS, Generator.F_PLUS): State.zero(),
        (Generator.F_MINUS, Generator.B_PLUS): State.zero(),
    }
    images: dict[str, str] = {}
    holds = True
    for word_key, target in expected.items():
        image = apply_word(word_key, vacuum, working)
        images[" ".join(g.value for g in word_key)] = str(image)
        holds = holds and image == target
    return VacuumReport(p=params.p, holds=holds, images=images)


class BetaReport(BaseModel):
    p: int
    holds: bool
    labels_checked: int
    mismatch: str | None = None


def beta_definition_check(params: RepParams, max_m: int) -> BetaReport:
    """(f+)^(n-1) (b+)^(m-1) R+ |0> equals the stored |m,n,beta> for 1 <= m <= max_m, 1 <= n <= p."""
    working = params.with_window(max(params.window_m, max_m))
    checked = 0
    for m in range(1, max_m + 1):
        for n in range(1, params.p + 1):
            built = beta_from_vacuum(m, n, working)
            stored = canonicalize(m, n, Tag.BETA, 1, working)
            checked += 1
            if built != stored:
                mismatch = f"|{m},{n},β⟩: built {built}, stored {stored}"
                logger.warning(f"Beta definition fails at p={params.p}: {mismatch}")
                return BetaReport(p=params.p, holds=False, labels_checked=checked, mismatch=mismatch)
    return BetaReport(p=params.p, holds=True, labels_checked=checked)


class NumberOperatorReport(BaseModel):
    p: int
    holds: bool
    kets_checked: int
    mismatch: str | None = None


def number_operator_check(params: RepParams) -> NumberOperatorReport:
    """Nb and Nf act as m and n on every ket with m <= window_m."""
    n_b = named_operator(NamedOperator.N_B)
    n_f = named_operator(NamedOperator.N_F)
    working = params.with_window(params.window_m + 2)
    kets = enumerate_basis(params)
    for ket in kets:
        state = State.ket(ket)
        for label, operator, eigenvalue in (("Nb", n_b, ket.m), ("Nf", n_f, ket.n)):
            image = evaluate(operator, state, working)
            if image != state * eigenvalue:
                mismatch = f"{label} {ket} = {image}, expected {eigenvalue}{ket}"
                return NumberOperatorReport(p=params.p, holds=False, kets_checked=len(kets), mismatch=mismatch)
    return NumberOperatorReport(p=params.p, holds=True, kets_checked=len(kets))


def _check_relations(params: RepParams, config: RunConfig) -> CheckResult:
    entries = relation_catalog()
    if config.mutate:
        entries = [mutated(entries[0]), *entries[1:]]
    for entry in entries:
        working = params.with_window(params.window_m + entry.element.max_word_length())
        report = check_identity(entry.element, working)
        if not report.holds:
            detail = f"{entry.name} fails on {report.counterexample_ket}: image {report.counterexample_image}"
            return CheckResult(check=CheckName.RELATIONS, p=params.p, passed=False, detail=detail)
    return CheckResult(check=CheckName.RELATIONS, p=params.p, passed=True, detail=f"{len(entries)} relations hold")


def _check_lemmas(params: RepParams, config: RunConfig) -> CheckResult:
    entries = [entry for entry in relation_catalog(config.family_bound) if entry.group in ("family", "lemma")]
    for entry in entries:
        working = params.with_window(params.window_m + entry.element.max_word_length())
        report = check_identity(entry.element, working)
        if not report.holds:
            detail = f"{entry.name} fails on {report.counterexample_ket}: image {report.counterexample_image}"
            return CheckResult(check=CheckName.LEMMAS, p=params.p, passed=False, detail=detail)
    return CheckResult(check=CheckName.LEMMAS, p=params.p, passed=True, detail=f"{len(entries)} instances hold")


def _check_redundancy(params: RepParams, _config: RunConfig) -> CheckResult:
    difference, bracket = redundancy_identity()
    passed = difference == bracket
    return CheckResult(check=CheckName.REDUNDANCY, p=params.p, passed=passed, detail=f"difference = {difference}")


def _check_vacuum(params: RepParams, _config: RunConfig) -> CheckResult:
    report = vacuum_conditions(params)
    return CheckResult(check=CheckName.VACUUM, p=params.p, passed=report.holds, detail=str(report.images), data=report.model_dump())


def _check_basis(params: RepParams, _config: RunConfig) -> CheckResult:
    return basis_census(params)


def _check_beta(params: RepParams, config: RunConfig) -> CheckResult:
    report = beta_definition_check(params, params.window_m - config.guard)
    return CheckResult(
        check=CheckName.BETA, p=params.p, passed=report.holds, detail=report.mismatch or f"{report.labels_checked} labels match"
    )


def _check_numbers(params: RepParams, _config: RunConfig) -> CheckResult:
    report = number_operator_check(params)
    return CheckResult(
        check=CheckName.NUMBERS, p=params.p, passed=report.holds, detail=report.mismatch or f"{report.kets_checked} kets diagonal"
    )


def _check_adjointness(params: RepParams, _config: RunConfig) -> CheckResult:
    report = adjointness_check(params)
    return CheckResult(
        check=CheckName.ADJOINTNESS, p=params.p, passed=report.holds, detail=report.failure or f"{report.pairs_checked} pairs"
    )


def _check_positivity(params: RepParams, _config: RunConfig) -> CheckResult:
    report = positivity_check(params)
    return CheckResult(
        check=CheckName.POSITIVITY,
        p=params.p,
        passed=report.positive,
        detail=f"non-positive block V_{report.failure}" if report.failure else f"{report.blocks_checked} blocks positive definite",
        data={"minors": report.minors},
    )


def _check_grading(params: RepParams, config: RunConfig) -> CheckResult:
    entries = [entry for entry in relation_catalog(config.family_bound) if not entry.element.is_zero()]
    for grading in (MAIN, ALT):
        for entry in entries:
            verdict = degree_element(entry.element, grading)
            if isinstance(verdict, NonHomogeneous):
                return CheckResult(check=CheckName.GRADING, p=params.p, passed=False, detail=f"{entry.name} is {verdict} under {grading.name}")
    main = check_graded_module(MAIN, params)
    alt = check_graded_module(ALT, params)
    passed = main.graded and not alt.graded
    detail = f"main graded={main.graded}, alt graded={alt.graded}"
    if alt.counterexample is not None:
        witness = alt.counterexample
        detail += f" (alt fails: {witness.generator} on {witness.ket} lands in {witness.actual}, expected {witness.expected})"
    return CheckResult(
        check=CheckName.GRADING,
        p=params.p,
        passed=passed,
        detail=detail,
        data={"degrees": relation_degrees(entries), "main": main.model_dump(), "alt": alt.model_dump()},
    )


def _check_cyclicity(params: RepParams, config: RunConfig) -> CheckResult:
    report = cyclicity_check(params, config.guard)
    return CheckResult(
        check=CheckName.CYCLICITY,
        p=params.p,
        passed=report.cyclic,
        detail=f"stuck at {report.stuck}" if report.stuck else "every in-guard ket reaches and is reached from |0⟩",
    )


def _check_t_ladder(params: RepParams, config: RunConfig) -> CheckResult:
    report = t_ladder_report(params.with_window(max(params.window_m - config.guard, 2)))
    # p = 1 has no 2-dimensional blocks, so there is nothing to interchange
    passed = report.preserving and (report.interchange_found or params.p == 1)
    return CheckResult(
        check=CheckName.T_LADDER,
        p=params.p,
        passed=passed,
        detail=report.escape or f"interchange on a 2-dim block: {report.interchange_found}",
        data={"blocks": [block.model_dump() for block in report.blocks]},
    )


CHECKS: dict[CheckName, Callable[[RepParams, RunConfig], CheckResult]] = {
    CheckName.BASIS: _check_basis,
    CheckName.VACUUM: _check_vacuum,
    CheckName.RELATIONS: _check_relations,
    CheckName.LEMMAS: _check_lemmas,
    CheckName.REDUNDANCY: _check_redundancy,
    CheckName.BETA: _check_beta,
    CheckName.NUMBERS: _check_numbers,
    CheckName.ADJOINTNESS: _check_adjointness,
    CheckName.POSITIVITY: _check_positivity,
    CheckName.GRADING: _check_grading,
    CheckName.CYCLICITY: _check_cyclicity,
    CheckName.T_LADDER: _check_t_ladder,
}


def _verify_order(p: int, config: RunConfig) -> list[CheckResult]:
    """All requested checks for one order p (worker function)."""
    params = RepParams(p=p, window_m=config.window_m)
    results: list[CheckResult] = []
    for name in CheckName:
        if name not in config.checks:
            continue
        result = CHECKS[name](params, config)
        logger.debug(f"p={p} {name.value}: {'pass' if result.passed else 'FAIL'} ({result.detail})")
        results.append(result)
    return results


def run_verification(config: RunConfig, max_workers: int | None = None) -> VerificationReport:
    """Run the configured checks for every order on a thread pool.

    Args:
        config: Orders, window, guard and the checks to run
        max_workers: Pool size (default: worker_pool_size from settings)

    Returns:
        Report ordered by p and then by check
    """
    workers = max_workers or get_settings().worker_pool_size
    logger.info(f"Verifying p={config.orders} window_m={config.window_m} guard={config.guard} on {workers} workers")
    collected: dict[int, list[CheckResult]] = {}
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(_verify_order, p, config): p for p in config.orders}
        for future in as_completed(futures):
            collected[futures[future]] = future.result()

    results = [result for p in sorted(collected) for result in collected[p]]
    failures = [result for result in results if not result.passed]
    first_failure = f"p={failures[0].p} {failures[0].check.value}: {failures[0].detail}" if failures else None
    if first_failure:
        logger.warning(f"Verification failed: {first_failure}")
    else:
        logger.info(f"Verification passed: {len(results)} checks")
    return VerificationReport(
        orders=config.orders,
        window_m=config.window_m,
        guard=config.guard,
        passed=not failures,
        first_failure=first_failure,
        results=results,
    )
