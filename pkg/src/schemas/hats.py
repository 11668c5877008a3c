"""JSON forms of hat pairs and voxel sets."""

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.core.geometry import AffineMap, ChartBox
from src.core.voxels import VoxelSet, decode_runs, encode_runs
from src.hats.pairs import HatPair


class HatPairModel(BaseModel):
    """Hat pair file: A is row-major [re, im] pairs, b interleaves re and im."""

    k: int
    r: float
    mu: float
    A: list[tuple[float, float]]
    b: list[float]
    label: str = ""

    @model_validator(mode="after")
    def _shapes_agree(self) -> "HatPairModel":
        n = len(self.b) // 2
        if len(self.b) % 2 or len(self.A) != n * n:
            raise ValueError(f"A needs {n * n} entries for a b of length {len(self.b)}")
        return self

    @classmethod
    def from_pair(cls, pair: HatPair) -> "HatPairModel":
        linear = pair.embedding.linear.reshape(-1)
        offset = pair.embedding.offset
        return cls(
            k=pair.k,
            r=pair.r,
            mu=pair.mu,
            A=[(float(a.real), float(a.imag)) for a in linear],
            b=[float(v) for z in offset for v in (z.real, z.imag)],
            label=pair.label,
        )

    def to_pair(self) -> HatPair:
        """Rebuild the pair; raises SingularMapError for a non-invertible A."""
        n = len(self.b) // 2
        entries = np.array(self.A, dtype=float)
        linear = (entries[:, 0] + 1j * entries[:, 1]).reshape(n, n)
        offset = np.array(self.b[0::2]) + 1j * np.array(self.b[1::2])
        return HatPair(self.k, self.r, AffineMap(linear, offset), self.mu, self.label)


class VoxelSetFile(BaseModel):
    """Voxel set file: box plus run-length encoded occupancy (axis 0 fastest)."""

    dimension: int
    lower: list[float]
    upper: list[float]
    resolution: list[int]
    encoding: str = Field(default="rle", pattern="^rle$")
    runs: list[int]

    @classmethod
    def from_voxels(cls, voxels: VoxelSet) -> "VoxelSetFile":
        box = voxels.box
        return cls(
            dimension=box.dimension,
            lower=list(box.lower),
            upper=list(box.upper),
            resolution=list(box.resolution),
            runs=encode_runs(voxels.occupancy),
        )

    def to_voxels(self) -> VoxelSet:
        box = ChartBox(tuple(self.lower), tuple(self.upper), tuple(self.resolution))
        if box.dimension != self.dimension:
            raise ValueError(f"box has dimension {box.dimension}, file says {self.dimension}")
        return VoxelSet(box, decode_runs(self.runs, box.shape))
