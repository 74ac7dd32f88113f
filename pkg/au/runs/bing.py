"""Property run over Bing's space: pairwise witnesses and the empty-triple certificate."""
from au.bing.space import bing_au_witness, bing_closure_contains, bing_empty_triple, random_axis_system
from au.errors import VerificationFailure
from au.logger import standard_logger
from au.models import Check, RunConfig, RunReport
from au.seeding import generator

logger = standard_logger(__name__)

SYSTEM_STREAM = 10


def run(config: RunConfig) -> RunReport:
    rng = generator(config.seed, SYSTEM_STREAM)
    checks: list[Check] = []
    for i in range(config.pairs):
        S1, S2 = random_axis_system(rng), random_axis_system(rng)
        detail = {"left": str(S1), "right": str(S2)}
        try:
            witness = bing_au_witness(S1, S2)
            detail["witness"] = str(witness)
            passed = True
        except VerificationFailure as e:
            logger.warning("⚠️ Pair %d: %s", i, e)
            passed = False
        checks.append(Check(name=f"pair[{i}]", passed=passed, detail=detail))

    certificate = bing_empty_triple(config.grid_denominator)
    systems = certificate.systems
    pairs_ok = all(
        bing_closure_contains(systems[a], w) and bing_closure_contains(systems[b], w)
        for (a, b), w in zip([(0, 1), (0, 2), (1, 2)], certificate.pairwise)
    )
    checks.append(
        Check(
            name="triple",
            passed=pairs_ok and certificate.triple_empty,
            detail={
                "systems": [str(S) for S in systems],
                "pairwise": [str(w) for w in certificate.pairwise],
                "hulls_disjoint": certificate.hulls_disjoint,
                "pigeonhole": certificate.pigeonhole,
                "grid_denominator_bound": certificate.grid_denominator_bound,
                "triple_empty": certificate.triple_empty,
                "grid_hits": [str(p) for p in certificate.grid_hits],
            },
        )
    )
    return RunReport(
        subcommand="bing",
        config=config.report_fields(),
        checks=checks,
        summary={"pairs": config.pairs, "triple_empty": certificate.triple_empty},
    )
