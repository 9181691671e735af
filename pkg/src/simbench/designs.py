"""
Simulation Designs

Population correlation matrices with known hierarchical cluster structure.

Design a: blocks of 20 variables made of five subgroups of four. Variables in
one subgroup correlate at 0.95; subgroup h joins the subgroups before it at
step 1 - 0.2 h plus a per-block perturbation, so each block peels off one
subgroup per level.

Design b: blocks of three variables [[1, e, -e^4], [e, 1, -e^4], [-e^4, -e^4, 1]]
with e ~ U(0.8, 0.9) drawn per block.
"""

import logging
from typing import Tuple

import numpy as np

from ..exceptions import DesignInfeasibleError, InvalidDesignError, NotPositiveDefiniteError
from ..helpers.matrixkit import cholesky
from ..models.bench import Design, GroundTruth
from ..models.matrices import CorrelationMatrix
from ..models.tree import Partition

logger = logging.getLogger(__name__)

# Design a
BLOCK_SIZE_A = 20
SUBGROUP_SIZE = 4
SUBGROUPS = 5
WITHIN_SUBGROUP = 0.95
ETA_HALF_WIDTH = 0.05
MAX_RESAMPLES = 100

# Design b
BLOCK_SIZE_B = 3
ETA_RANGE_B = (0.8, 0.9)


def _labels(p: int):
    return [f"X{j + 1}" for j in range(p)]


def step_correlation(level: int, eta: np.ndarray) -> float:
    """Correlation at which subgroup `level` (1..4, 0-based) joins the earlier ones."""
    return 1.0 - 0.2 * level + eta[SUBGROUPS - 1 - level]


def design_a_block(eta: np.ndarray) -> np.ndarray:
    """
    One 20 x 20 block of design a.

    Args:
        eta: Perturbations (eta_1, ..., eta_4) of the steps 0.2, 0.4, 0.6, 0.8
    """
    block = np.empty((BLOCK_SIZE_A, BLOCK_SIZE_A))
    groups = np.repeat(np.arange(SUBGROUPS), SUBGROUP_SIZE)
    for i in range(BLOCK_SIZE_A):
        for j in range(BLOCK_SIZE_A):
            gi, gj = groups[i], groups[j]
            if gi == gj:
                block[i, j] = WITHIN_SUBGROUP
            else:
                block[i, j] = step_correlation(max(gi, gj), eta)
    np.fill_diagonal(block, 1.0)
    return block


def design_a_truth(p: int) -> GroundTruth:
    """Known partitions at b, 2b, 3b and 4b clusters for b = p / 20 blocks."""
    blocks = p // BLOCK_SIZE_A
    subgroup = np.tile(np.repeat(np.arange(SUBGROUPS), SUBGROUP_SIZE), blocks)
    block = np.repeat(np.arange(blocks), BLOCK_SIZE_A)

    partitions = {}
    for level in range(1, SUBGROUPS):
        # the first `core` subgroups stay together, each later subgroup is its own cluster
        core = SUBGROUPS - level + 1
        label = np.where(subgroup < core, 0, subgroup - core + 1)
        partitions[blocks * level] = Partition.from_labels(list(zip(block, label)))
    return GroundTruth(partitions)


def design_a_population(p: int, rng: np.random.Generator) -> Tuple[CorrelationMatrix, GroundTruth]:
    """
    Design a population matrix with p / 20 blocks.

    Raises:
        InvalidDesignError: if p is not a positive multiple of 100
        DesignInfeasibleError: if a block stays indefinite after 100 resamples
    """
    if p <= 0 or p % 100 != 0:
        raise InvalidDesignError(f"Design a needs p divisible by 100, got {p}")

    blocks = p // BLOCK_SIZE_A
    values = np.zeros((p, p))
    for b in range(blocks):
        for attempt in range(1, MAX_RESAMPLES + 1):
            eta = rng.uniform(-ETA_HALF_WIDTH, ETA_HALF_WIDTH, size=SUBGROUPS - 1)
            block = design_a_block(eta)
            try:
                cholesky(block)
                break
            except NotPositiveDefiniteError:
                logger.debug("Design a block %d not positive definite (attempt %d)", b, attempt)
        else:
            raise DesignInfeasibleError(
                f"Design a block {b} not positive definite after {MAX_RESAMPLES} resamples"
            )
        start = b * BLOCK_SIZE_A
        values[start:start + BLOCK_SIZE_A, start:start + BLOCK_SIZE_A] = block

    return CorrelationMatrix(values, _labels(p)), design_a_truth(p)


def design_b_block(eta: float) -> np.ndarray:
    """3 x 3 block with r_12 = eta and r_13 = r_23 = -eta^4."""
    tail = -eta ** 4
    return np.array([
        [1.0, eta, tail],
        [eta, 1.0, tail],
        [tail, tail, 1.0],
    ])


def design_b_truth(p: int) -> GroundTruth:
    """Blocks at p/3 clusters; each block split into {1, 2} and {3} at 2p/3."""
    blocks = p // BLOCK_SIZE_B
    block = np.repeat(np.arange(blocks), BLOCK_SIZE_B)
    within = np.tile([0, 0, 1], blocks)
    return GroundTruth({
        blocks: Partition.from_labels(block),
        2 * blocks: Partition.from_labels(list(zip(block, within))),
    })


def design_b_population(p: int, rng: np.random.Generator) -> Tuple[CorrelationMatrix, GroundTruth]:
    """
    Design b population matrix with p / 3 blocks.

    Raises:
        InvalidDesignError: if p is not a positive multiple of 3
    """
    if p <= 0 or p % BLOCK_SIZE_B != 0:
        raise InvalidDesignError(f"Design b needs p divisible by 3, got {p}")

    values = np.zeros((p, p))
    for b, eta in enumerate(rng.uniform(*ETA_RANGE_B, size=p // BLOCK_SIZE_B)):
        block = design_b_block(float(eta))
        cholesky(block)
        start = b * BLOCK_SIZE_B
        values[start:start + BLOCK_SIZE_B, start:start + BLOCK_SIZE_B] = block

    return CorrelationMatrix(values, _labels(p)), design_b_truth(p)


def design_population(design: Design, p: int, rng: np.random.Generator) -> Tuple[CorrelationMatrix, GroundTruth]:
    """Dispatch on the design."""
    design = Design(design) if not isinstance(design, Design) else design
    if design == Design.A:
        return design_a_population(p, rng)
    return design_b_population(p, rng)
