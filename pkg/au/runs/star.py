"""⊛-fragment run: dyadicity, both strongifications, tail closure and tail fibers."""
from itertools import combinations

from au.logger import standard_logger
from au.models import Check, RunConfig, RunReport
from au.seeding import generator
from au.star.fragment import (
    StarFragment,
    cohen_fragment,
    dyadicity_check,
    fragment_dump,
    fragment_load,
    random_cells,
    random_selector,
)
from au.star.splitting import tail_splitting_fibers
from au.star.strong import (
    cofinal_schedule,
    inequivalent_on_shadow,
    separation_check,
    strongify_case1,
    strongify_case2,
    symmetric_difference,
)
from au.star.topology import star_topology_closure

logger = standard_logger(__name__)

SAMPLE_STREAM = 30
PAIR_STREAM = 31
CLOSURE_STREAM = 32
SCHEDULED_PAIRS = 20
SELECTOR_DEPTH = 3
DYADIC_SAMPLE = 128


def dyadicity_checks(f: StarFragment, config: RunConfig) -> tuple[list[Check], list[int]]:
    rng = generator(config.seed, SAMPLE_STREAM)
    beta = f.K // 2
    size = min(DYADIC_SAMPLE, beta * f.M)
    checks, counts = [], []
    for i in range(config.trials if beta else 0):
        S = random_cells(rng, beta, f.M, size)
        eps = random_selector(rng, beta, f.K, SELECTOR_DEPTH)
        count, passed = dyadicity_check(f, S, eps, config.t)
        counts.append(count)
        checks.append(Check(name=f"dyadic[{i}]", passed=passed, detail={"eps": str(eps), "count": count}))
    return checks, counts


def case1_checks(K: int, config: RunConfig) -> list[Check]:
    base = cohen_fragment(K, 1, config.seed)
    beta = K // 2
    budget = min(SCHEDULED_PAIRS, K - beta)
    candidates = list(combinations(range(beta), 2))
    if not candidates or not budget:
        return []
    rng = generator(config.seed, PAIR_STREAM)
    picks = rng.choice(len(candidates), size=min(budget, len(candidates)), replace=False)
    pairs = [candidates[int(i)] for i in sorted(picks)]
    schedule = cofinal_schedule(K, pairs, floor=beta)
    strong = strongify_case1(base, schedule)

    late = {}
    for (zeta, xi, _), alpha in schedule.items():
        found = separation_check(strong, (zeta, 0), (xi, 0), beta)
        if found is None or found > alpha:
            late[f"{zeta},{xi}"] = found
    drift = max(symmetric_difference(base, strong, alpha) for alpha in range(K))
    return [
        Check(
            name="case1",
            passed=not late and drift <= 2 and strong.partition_holds(),
            detail={"scheduled": len(schedule), "late": late, "max_symmetric_difference": drift},
        )
    ]


def case2_checks(f: StarFragment) -> list[Check]:
    if f.M < 2:
        return []
    gamma = f.K // 4
    out, report = strongify_case2(f, gamma)
    passed = out.partition_holds() and inequivalent_on_shadow(f, gamma, report.transversal)
    return [Check(name="case2", passed=passed, detail=report.model_dump(exclude={"transversal"}))]


def closure_checks(f: StarFragment, config: RunConfig) -> list[Check]:
    beta = f.K // 2
    if not beta:
        return []
    rng = generator(config.seed, CLOSURE_STREAM)
    size = min(beta * f.M, 16 * 2**config.depth)
    S = random_cells(rng, beta, f.M, size)
    report = star_topology_closure(f, 0, S, beta, config.depth)
    return [Check(name="closure", passed=report.passed, detail=report.model_dump())]


def fiber_checks(f: StarFragment) -> list[Check]:
    beta = f.K // 2
    alphas = list(range(beta, min(f.K, beta + 8)))
    if not beta or not alphas:
        return []
    report = tail_splitting_fibers(f, f.cells(beta), alphas)
    return [Check(name="fibers", passed=report.passed, detail=report.model_dump())]


def load_fragment(config: RunConfig) -> StarFragment:
    if config.fragment is None:
        return cohen_fragment(config.K, config.M, config.seed)
    f = fragment_load(config.fragment.read_text())
    logger.info("📂 Loaded a K=%d M=%d fragment from %s", f.K, f.M, config.fragment)
    return f


def run(config: RunConfig) -> RunReport:
    f = load_fragment(config)
    if config.dump is not None:
        config.dump.parent.mkdir(parents=True, exist_ok=True)
        config.dump.write_text(fragment_dump(f))
        logger.info("📝 Wrote fragment to %s", config.dump)
    checks = [Check(name="partition", passed=f.partition_holds())]
    dyadic, counts = dyadicity_checks(f, config)
    checks += dyadic
    checks += case1_checks(f.K, config)
    checks += case2_checks(f)
    checks += closure_checks(f, config)
    checks += fiber_checks(f)
    logger.info("⭐ Star run K=%d M=%d finished with %d checks", f.K, f.M, len(checks))
    summary = {
        "fragment": {"K": f.K, "M": f.M, "seed": f.seed},
        "min_dyadic_count": min(counts, default=None),
        "trials": len(counts),
    }
    return RunReport(subcommand="star", config=config.report_fields(), checks=checks, summary=summary)
