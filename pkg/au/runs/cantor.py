"""Property run over the glued space: finite AU law, tail law, oracle and Hausdorff checks."""
import itertools

from au.cantor.glue import (
    GlueOpen,
    GluePoint,
    certify_disjoint,
    closure_contains,
    closure_oracle,
    closure_tail_bound,
    contains,
    hausdorff_witness,
    random_open,
    random_point_inside,
    rc_intersection_witness,
)
from au.cantor.points import random_y_point
from au.errors import VerificationFailure
from au.logger import standard_logger
from au.models import Check, RunConfig, RunReport
from au.seeding import generator

logger = standard_logger(__name__)

OPEN_STREAM = 1
POINT_STREAM = 2
SAMPLE_STREAM = 3


def _tail_law(V: GlueOpen, limit: int) -> list[int]:
    """Glued points past the tail bound that escape the closure."""
    bound = closure_tail_bound(V)
    return [gamma for gamma in range(bound, limit) if not closure_contains(V, GluePoint.glued(gamma))]


def _oracle_disagreements(V: GlueOpen, limit: int, index_bound: int) -> list[int]:
    out = []
    for gamma in range(limit):
        horizon = max(gamma, index_bound) + 2
        if closure_contains(V, GluePoint.glued(gamma)) != closure_oracle(V, gamma, horizon):
            out.append(gamma)
    return out


def tuple_checks(i: int, Vs: list[GlueOpen], config: RunConfig) -> list[Check]:
    opens = [str(V) for V in Vs]
    try:
        witness = str(rc_intersection_witness(Vs))
        found = True
    except VerificationFailure as e:
        logger.warning("⚠️ Tuple %d: %s", i, e)
        witness, found = None, False
    escaped = {str(V): _tail_law(V, config.tail_limit) for V in Vs}
    escaped = {V: gammas for V, gammas in escaped.items() if gammas}
    disagree = {str(V): _oracle_disagreements(V, config.oracle_limit, config.index_bound) for V in Vs}
    disagree = {V: gammas for V, gammas in disagree.items() if gammas}
    return [
        Check(
            name=f"intersection[{i}]",
            passed=found,
            detail={
                "opens": opens,
                "witness": witness,
                "tail_bounds": [closure_tail_bound(V) for V in Vs],
                "verified": found,
            },
        ),
        Check(name=f"tail[{i}]", passed=not escaped, detail={"escaped": escaped}),
        Check(name=f"oracle[{i}]", passed=not disagree, detail={"disagree": disagree}),
    ]


def _hausdorff_points(config: RunConfig) -> list[GluePoint]:
    rng = generator(config.seed, POINT_STREAM)
    glued = [GluePoint.glued(alpha) for alpha in range(config.points)]
    ys = [GluePoint.y(random_y_point(rng, config.index_bound)) for _ in range(config.points)]
    return list(dict.fromkeys(glued + ys))


def hausdorff_check(p: GluePoint, q: GluePoint, config: RunConfig, rng) -> Check:
    V1, V2 = hausdorff_witness(p, q)
    shared = []
    for _ in range(config.samples):
        y = random_point_inside(rng, V1, config.index_bound)
        if contains(V2, y):
            shared.append(str(y))
            break
    passed = contains(V1, p) and contains(V2, q) and certify_disjoint(V1, V2) and not shared
    return Check(
        name=f"hausdorff[{p},{q}]",
        passed=passed,
        detail={"left": str(V1), "right": str(V2), "shared": shared},
    )


def run(config: RunConfig) -> RunReport:
    checks: list[Check] = []
    rng = generator(config.seed, OPEN_STREAM)
    opens = 0
    for i in range(config.pairs):
        k = int(rng.integers(2, config.arity + 1))
        Vs = [random_open(rng, config.index_bound) for _ in range(k)]
        opens += k
        checks += tuple_checks(i, Vs, config)

    # `--pairs 0` yields an empty report
    points = _hausdorff_points(config) if config.pairs else []
    sample_rng = generator(config.seed, SAMPLE_STREAM)
    pairs = list(itertools.combinations(points, 2))
    checks += [hausdorff_check(p, q, config, sample_rng) for p, q in pairs]

    logger.info("🔍 Checked %d tuples over %d opens and %d point pairs", config.pairs, opens, len(pairs))
    return RunReport(
        subcommand="cantor",
        config=config.report_fields(),
        checks=checks,
        summary={"tuples": config.pairs, "opens": opens, "hausdorff_pairs": len(pairs)},
    )
