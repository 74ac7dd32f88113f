"""Fiber-count bound for random finite families."""
from au.logger import standard_logger
from au.models import Check, RunConfig, RunReport
from au.seeding import generator
from au.star.splitting import random_family, splitting_fiber_map

logger = standard_logger(__name__)

FAMILY_STREAM = 40
MAX_FAMILY_SIZE = 12


def run(config: RunConfig) -> RunReport:
    rng = generator(config.seed, FAMILY_STREAM)
    checks = []
    for i in range(config.families):
        ground = int(rng.integers(1, config.ground + 1))
        family = random_family(rng, ground, int(rng.integers(0, MAX_FAMILY_SIZE + 1)))
        report = splitting_fiber_map(family, range(ground))
        checks.append(
            Check(
                name=f"family[{i}]",
                passed=report.passed,
                detail={
                    "ground": report.ground_size,
                    "members": report.family_size,
                    "fibers": report.fiber_count,
                },
            )
        )
    logger.info("🔍 Checked %d families", config.families)
    return RunReport(
        subcommand="splitting",
        config=config.report_fields(),
        checks=checks,
        summary={"families": config.families},
    )
