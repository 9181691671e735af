"""
Benchmark Driver

Runs replications of a simulation design: draw the population matrix, sample
data (or feed the population matrix itself when n is omitted), cluster with
every requested method and score each ground-truth cut with the adjusted Rand
index.
"""

import logging
import time
from typing import Callable, List, Optional, Sequence, Tuple, Union

from joblib import Parallel, delayed

from .. import __version__
from ..clustering.baselines import diana_from_correlation
from ..clustering.config import DEFAULT_EXHAUSTIVE_THRESHOLD, DEFAULT_LOADINGS
from ..clustering.dissimilarity import SplitDistanceKind
from ..clustering.divisive import HCSVD, CandidateCache, LoadingPolicy, cut_tree
from ..exceptions import HCSVDError
from ..helpers.matrixkit import correlation, standardize
from ..models.bench import BenchFailure, BenchResult, BenchRow, DesignSpec, GroundTruth
from ..models.matrices import CorrelationMatrix, StandardizedMatrix
from ..models.tree import SplitTree
from .designs import design_population
from .metrics import adjusted_rand_index
from .sampling import replication_rng, rng_metadata, sample_mvn

logger = logging.getLogger(__name__)

METHODS = ('hcsvd', 'diana')
DIANA_DISTANCE = 'abs_corr'
POPULATION_STEP = 'population'


def _score(tree: SplitTree, truth: GroundTruth) -> List[Tuple[int, float]]:
    return [(k, adjusted_rand_index(cut_tree(tree, k), truth[k])) for k in truth.counts]


def run_replication(
    spec: DesignSpec,
    replication: int,
    methods: Sequence[str] = METHODS,
    kinds: Sequence[Union[SplitDistanceKind, str]] = tuple(SplitDistanceKind),
    policy: Union[LoadingPolicy, str, int] = DEFAULT_LOADINGS,
    exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
) -> Tuple[List[BenchRow], List[BenchFailure]]:
    """
    One replication: population, sample, every method, every cut.

    Method failures, and a population the design cannot generate, are
    returned as BenchFailure entries instead of raised.
    """
    rng = replication_rng(spec.seed, replication)
    try:
        population, truth = design_population(spec.design, spec.p, rng)
    except HCSVDError as e:
        logger.warning("Replication %d: population not generated: %s", replication, e)
        return [], [BenchFailure(replication, POPULATION_STEP, '', str(e))]

    data: Union[CorrelationMatrix, StandardizedMatrix]
    if spec.n is None:
        data = population
        r = population
    else:
        data = standardize(sample_mvn(population, spec.n, rng))
        r = correlation(data)

    rows: List[BenchRow] = []
    failures: List[BenchFailure] = []

    def record(method: str, kind_name: str, run: Callable[[], SplitTree]) -> None:
        start = time.perf_counter()
        try:
            tree = run()
            scores = _score(tree, truth)
        except HCSVDError as e:
            logger.warning("Replication %d: %s (%s) failed: %s", replication, method, kind_name, e)
            failures.append(BenchFailure(replication, method, kind_name, str(e)))
            return
        seconds = time.perf_counter() - start
        for k, ari in scores:
            rows.append(BenchRow(
                design=spec.design.value,
                p=spec.p,
                n=spec.n,
                replication=replication,
                method=method,
                distance_kind=kind_name,
                cut_k=k,
                ari=ari,
                seconds=seconds,
            ))

    cache = CandidateCache()
    for method in methods:
        if method == 'hcsvd':
            for kind in kinds:
                kind = SplitDistanceKind.parse(kind)
                engine = HCSVD(kind=kind, policy=policy, exhaustive_threshold=exhaustive_threshold,
                               cache=cache)
                record(method, kind.value, lambda engine=engine: engine.fit(data)[0])
        elif method == 'diana':
            record(method, DIANA_DISTANCE, lambda: diana_from_correlation(r))
        else:
            raise ValueError(f"Unknown method {method!r} (expected one of: {', '.join(METHODS)})")

    logger.debug("Replication %d finished: %d rows, %d failures", replication, len(rows), len(failures))
    return rows, failures


def run_benchmark(
    spec: DesignSpec,
    methods: Sequence[str] = METHODS,
    kinds: Sequence[Union[SplitDistanceKind, str]] = tuple(SplitDistanceKind),
    policy: Union[LoadingPolicy, str, int] = DEFAULT_LOADINGS,
    exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
    threads: int = 1,
    progress: Optional[Callable[[int], None]] = None,
) -> BenchResult:
    """
    Run every replication of a design.

    Args:
        spec: Design, size, sample size (None = feed the population matrix), seed, replications
        methods: Any of 'hcsvd', 'diana'
        kinds: Distance kinds for HC-SVD
        policy: Loading count policy for HC-SVD
        exhaustive_threshold: HC-SVD enumeration threshold
        threads: joblib workers over replications
        progress: Called with each finished replication index

    Returns:
        BenchResult with rows in replication order
    """
    spec.validate()
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"Unknown methods: {', '.join(unknown)}")
    kinds = [SplitDistanceKind.parse(k) for k in kinds]

    logger.info("Benchmark: design %s, p=%d, n=%s, %d replications, methods=%s",
                spec.design.value, spec.p, spec.n if spec.n is not None else 'population',
                spec.replications, ','.join(methods))

    outcomes = Parallel(n_jobs=threads, prefer='threads')(
        delayed(run_replication)(spec, rep, methods, kinds, policy, exhaustive_threshold)
        for rep in range(spec.replications)
    )

    result = BenchResult(spec)
    for rep, (rows, failures) in enumerate(outcomes):
        result.rows.extend(rows)
        result.failures.extend(failures)
        if progress is not None:
            progress(rep)

    result.metadata = {
        'version': __version__,
        'rng': rng_metadata(spec.seed),
        'mode': 'population' if spec.n is None else 'sampled',
        'methods': list(methods),
        'kinds': [k.value for k in kinds],
        'loadings': str(LoadingPolicy.parse(policy)),
        'exhaustive_threshold': exhaustive_threshold,
    }
    return result
