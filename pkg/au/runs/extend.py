"""One-step extension runs: the reference instance on ℚ∩(0,1) plus seeded sweeps on ℕ."""
from au.errors import AUError
from au.logger import standard_logger
from au.models import Check, RunConfig, RunReport
from au.reaping.enumsets import (
    GROUND_SETS,
    EnumSet,
    co_reciprocals,
    dyadic_base,
    named_set,
    naturals,
    progression,
    reciprocals,
    unit_rationals,
)
from au.reaping.extension import (
    ExtensionResult,
    check_dense_trace,
    closure_progress,
    hausdorff_separator,
    run_one_step,
    selectors,
)
from au.seeding import generator

logger = standard_logger(__name__)

SWEEP_STREAM = 20
DYADIC_LEVEL = 3


def default_base(U: EnumSet, universe: str) -> list[EnumSet]:
    if universe == "rationals":
        return dyadic_base(U, DYADIC_LEVEL)
    return [progression(U, r, 3) for r in range(3)]


def reference_instance(config: RunConfig) -> ExtensionResult:
    U = unit_rationals()
    return run_one_step(
        U,
        reciprocals(),
        co_reciprocals(),
        pairs=[],
        stages=config.stages,
        base=default_base(U, "rationals"),
        budget=config.budget,
        seed=config.seed,
    )


def ladder_checks(prefix: str, r: ExtensionResult) -> list[Check]:
    checks = []
    for m, verdict in enumerate(r.stages):
        recursion = m + 1 >= len(r.families) or r.families[m + 1] == r.families[m] + 2 * verdict.survivors
        checks.append(
            Check(
                name=f"{prefix}.stage[{m}]",
                passed=verdict.forbidden_excluded and verdict.splits_all and recursion,
                detail=verdict.model_dump(),
            )
        )
    return checks


def progress_checks(prefix: str, r: ExtensionResult, config: RunConfig) -> list[Check]:
    return [
        Check(
            name=f"{prefix}.progress[{A.name}]",
            passed=closure_progress(r, A, config.progress, config.scan),
            detail={"t": config.progress},
        )
        for A in (r.I, r.J)
    ]


def trace_checks(prefix: str, r: ExtensionResult, config: RunConfig) -> list[Check]:
    checks = []
    for C in r.initial_family:
        thin = [
            str(eps)
            for eps in selectors(len(r.ladders), config.depth)
            if not check_dense_trace(r, C, eps, config.t, config.scan)
        ]
        checks.append(Check(name=f"{prefix}.trace[{C.name}]", passed=not thin, detail={"thin": thin}))
    return checks


def separator_checks(prefix: str, r: ExtensionResult) -> list[Check]:
    checks = []
    for n in range(len(r.ladders)):
        x = r.ground.nth(n)
        found = hausdorff_separator(r, x)
        checks.append(Check(name=f"{prefix}.separator[{x}]", passed=found == n, detail={"stage": found}))
    return checks


def ladder_listing(r: ExtensionResult, scan: int) -> list[list[str]]:
    head = r.ground.take(scan)
    return [[str(x) for x in head if D.member(x)] for D in r.ladders]


def _sweep_instance(config: RunConfig, k: int) -> tuple[EnumSet, EnumSet, EnumSet, list[EnumSet]]:
    rng = generator(config.seed, SWEEP_STREAM, k)
    U = naturals()
    step_i, step_j = (int(s) for s in rng.integers(2, 6, size=2))
    I = progression(U, int(rng.integers(0, step_i)), step_i)
    J = progression(U, int(rng.integers(0, step_j)), step_j)
    return U, I, J, default_base(U, "naturals")


def custom_checks(config: RunConfig, summary: dict) -> list[Check]:
    """Checks for the instance named on the command line."""
    U = GROUND_SETS[config.universe]()
    I, J = (named_set(U, name) for name in config.sets)
    base = [named_set(U, name) for name in config.base] or default_base(U, config.universe)
    try:
        r = run_one_step(U, I, J, [], config.stages, base, config.budget, new_point="q", seed=config.seed)
    except (AUError, ValueError) as e:
        logger.warning("⚠️ Custom instance failed: %s", e)
        return [Check(name="custom", passed=False, detail={"error": str(e)})]
    summary["custom"] = {
        "initial_family": [C.name for C in r.initial_family],
        "families": r.families,
        "ladders": ladder_listing(r, config.scan),
    }
    return [
        *ladder_checks("custom", r),
        *progress_checks("custom", r, config),
        *trace_checks("custom", r, config),
        *separator_checks("custom", r),
    ]


def run(config: RunConfig) -> RunReport:
    checks: list[Check] = []
    summary: dict = {}
    try:
        r = reference_instance(config)
    except AUError as e:
        logger.warning("⚠️ Reference instance failed: %s", e)
        checks.append(Check(name="reference", passed=False, detail={"error": str(e)}))
    else:
        checks += ladder_checks("reference", r)
        checks += progress_checks("reference", r, config)
        checks += trace_checks("reference", r, config)
        checks += separator_checks("reference", r)
        summary["families"] = r.families
        summary["initial_family"] = [C.name for C in r.initial_family]
        summary["subbase"] = r.subbase
        summary["ladders"] = ladder_listing(r, config.scan)

    for k in range(config.sweeps):
        U, I, J, base = _sweep_instance(config, k)
        prefix = f"sweep[{k}]"
        try:
            r = run_one_step(U, I, J, [], config.stages, base, config.budget, new_point=f"p{k}", seed=config.seed)
        except AUError as e:
            checks.append(Check(name=prefix, passed=False, detail={"error": str(e)}))
            continue
        checks += ladder_checks(prefix, r)
        checks += progress_checks(prefix, r, config)

    if config.sets is not None:
        checks += custom_checks(config, summary)

    logger.info("🪜 Extension run finished with %d checks", len(checks))
    return RunReport(subcommand="extend", config=config.report_fields(), checks=checks, summary=summary)
