"""Random caged polymatroids for property testing.

Three families are drawn: subspace polymatroids from random integer
matrices, truncations of free polymatroids, and partitions of random column
matroids. Each may then gain loops and cage slack.
"""

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence

from pydantic import BaseModel, Field

from config.logging_config import get_logger
from config.settings import settings
from core.linalg import column_rank
from core.operations import adjoin_loop, truncate
from core.polymatroid import (
    CagedPolymatroid,
    free_polymatroid,
    members,
    polymatroid_from_matroid_partition,
)
from core.realization import RationalSubspace, caged_from_subspace

logger = get_logger('generator')

FAMILIES = ("subspace", "free_truncation", "matroid_partition")


class GeneratorParams(BaseModel):
    """Bounds for generated instances"""

    max_n: int = Field(default_factory=lambda: settings.FUZZ_MAX_N, ge=0, le=5)
    max_rank: int = Field(default_factory=lambda: settings.FUZZ_MAX_RANK, ge=0, le=5)
    max_cage: int = Field(default_factory=lambda: settings.FUZZ_MAX_CAGE, ge=0, le=4)
    loop_probability: float = Field(0.15, ge=0.0, le=1.0)
    slack_probability: float = Field(0.3, ge=0.0, le=1.0)


@dataclass(frozen=True)
class GeneratedInstance:
    seed: int
    family: str
    caged: CagedPolymatroid
    subspace: Optional[RationalSubspace] = None


class InstanceGenerator:
    """Seeded generator of caged polymatroids within the configured bounds"""

    def __init__(self, params: Optional[GeneratorParams] = None):
        self.params = params or GeneratorParams()

    def generate(self, seed: int) -> GeneratedInstance:
        rng = random.Random(seed)
        params = self.params
        if params.max_n == 0 or params.max_cage == 0:
            family = "free_truncation"
        else:
            family = rng.choice(FAMILIES)

        if family == "subspace":
            instance = self._subspace(rng, seed)
        elif family == "matroid_partition":
            instance = self._matroid_partition(rng, seed)
        else:
            instance = self._free_truncation(rng, seed)

        logger.debug(f"seed {seed}: {instance.family} {instance.caged}")
        return instance

    # Families

    def _subspace(self, rng: random.Random, seed: int) -> GeneratedInstance:
        params = self.params
        n = rng.randint(1, params.max_n)
        blocks = [rng.randint(1, params.max_cage) for _ in range(n)]
        loops = 0
        if n < params.max_n and rng.random() < params.loop_probability:
            loops = 1
            blocks.append(rng.randint(0, params.max_cage))
        width = sum(blocks)
        dim = rng.randint(0, min(params.max_rank, width))
        rows = [[rng.randint(-2, 2) for _ in range(width)] for _ in range(dim)]
        if loops:
            # the extra block carries zero columns
            start = width - blocks[-1]
            for row in rows:
                for c in range(start, width):
                    row[c] = 0

        # slack column, zero in every row
        if rng.random() < params.slack_probability:
            i = rng.randrange(len(blocks))
            if blocks[i] < params.max_cage:
                start = sum(blocks[:i + 1])
                for row in rows:
                    row.insert(start, 0)
                blocks[i] += 1

        subspace = RationalSubspace.from_rows(blocks, rows)
        return GeneratedInstance(seed, "subspace", caged_from_subspace(subspace), subspace)

    def _free_truncation(self, rng: random.Random, seed: int) -> GeneratedInstance:
        params = self.params
        n = rng.randint(0, params.max_n)
        sizes = [rng.randint(0, params.max_cage) for _ in range(n)]
        poly = free_polymatroid(sizes)
        extra = rng.randint(0, 2)
        while poly.rank > params.max_rank or (extra > 0 and poly.rank >= 1):
            if poly.rank <= params.max_rank:
                extra -= 1
            candidates = [mask for mask in range(1, 1 << n) if poly.rk(mask) >= 1]
            poly = truncate(poly, rng.choice(candidates))
        caged = CagedPolymatroid(poly, tuple(sizes))
        return GeneratedInstance(seed, "free_truncation", self._loosen(rng, caged))

    def _matroid_partition(self, rng: random.Random, seed: int) -> GeneratedInstance:
        params = self.params
        n = rng.randint(1, params.max_n)
        part_sizes = [rng.randint(1, params.max_cage) for _ in range(n)]
        while sum(part_sizes) > 8:
            k = max(range(n), key=lambda i: part_sizes[i])
            part_sizes[k] -= 1
        m = sum(part_sizes)
        r = rng.randint(0, min(params.max_rank, m))
        columns = [[rng.randint(-1, 1) for _ in range(r)] for _ in range(m)]
        vectors = [list(column) for column in zip(*columns)] if r else []
        matroid_rank = [
            column_rank(vectors, members(subset)) if vectors else 0
            for subset in range(1 << m)
        ]
        parts: List[Sequence[int]] = []
        start = 0
        for size in part_sizes:
            parts.append(range(start, start + size))
            start += size
        poly = polymatroid_from_matroid_partition(matroid_rank, parts)
        caged = CagedPolymatroid(poly, tuple(
            rng.randint(poly.singleton_rank(i), part_sizes[i]) for i in range(n)
        ))
        return GeneratedInstance(seed, "matroid_partition", self._loosen(rng, caged))

    def _loosen(self, rng: random.Random, caged: CagedPolymatroid) -> CagedPolymatroid:
        params = self.params
        cage = list(caged.cage)
        if rng.random() < params.slack_probability:
            for i in range(len(cage)):
                cage[i] = rng.randint(cage[i], max(cage[i], params.max_cage))
        loosened = CagedPolymatroid(caged.poly, tuple(cage))
        if caged.ground_size < params.max_n and rng.random() < params.loop_probability:
            loosened = adjoin_loop(loosened, rng.randint(0, params.max_cage))
        return loosened


def random_caged_polymatroid(seed: int, params: Optional[GeneratorParams] = None) -> CagedPolymatroid:
    """Seeded random caged polymatroid within the given bounds"""
    return InstanceGenerator(params).generate(seed).caged
