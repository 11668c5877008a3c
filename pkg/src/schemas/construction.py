"""Constructed function file: the glue tree with hats and voxel pieces inlined."""

from typing import Literal

from pydantic import BaseModel, Field

from src.bump.field import hat_bump
from src.bump.params import BumpParams
from src.glue.tree import ConstructedFunction, Leaf, MaxNode
from src.schemas.hats import HatPairModel, VoxelSetFile


class TreeNodeModel(BaseModel):
    """Leaf: scale, hat and support. Max: pieces V1, V2, neighborhood W and two children."""

    type: Literal["leaf", "max"]
    step: int = 0
    scale: float | None = None
    hat: HatPairModel | None = None
    support: VoxelSetFile | None = None
    V1: VoxelSetFile | None = None
    V2: VoxelSetFile | None = None
    W: VoxelSetFile | None = None
    children: list["TreeNodeModel"] = Field(default_factory=list)

    @classmethod
    def from_tree(cls, f: ConstructedFunction) -> "TreeNodeModel":
        if isinstance(f, Leaf):
            if f.hat is None:
                raise ValueError("only hat-bump leaves can be written")
            return cls(
                type="leaf",
                step=f.step,
                scale=f.scale,
                hat=HatPairModel.from_pair(f.hat),
                support=VoxelSetFile.from_voxels(f.support),
            )
        return cls(
            type="max",
            step=f.step,
            V1=VoxelSetFile.from_voxels(f.V1),
            V2=VoxelSetFile.from_voxels(f.V2),
            W=VoxelSetFile.from_voxels(f.W),
            children=[cls.from_tree(f.first), cls.from_tree(f.second)],
        )

    def to_tree(self, q: int, params: BumpParams) -> ConstructedFunction:
        if self.type == "leaf":
            if self.hat is None or self.support is None or self.scale is None:
                raise ValueError("leaf needs hat, support and scale")
            pair = self.hat.to_pair()
            bump = hat_bump(pair, q, params)
            return Leaf(bump, self.scale, self.support.to_voxels(), self.step, pair)
        if len(self.children) != 2 or self.V1 is None or self.V2 is None or self.W is None:
            raise ValueError("max node needs two children and its pieces")
        first, second = (child.to_tree(q, params) for child in self.children)
        return MaxNode(
            first, second, self.V1.to_voxels(), self.V2.to_voxels(), self.W.to_voxels(), self.step
        )


class ConstructedFunctionModel(BaseModel):
    """Replayable constructed function."""

    q: int
    seed: int | None = None
    params: BumpParams
    scales: dict[int, float] = Field(default_factory=dict)
    retried: list[int] = Field(default_factory=list)
    root: TreeNodeModel

    def to_function(self) -> ConstructedFunction:
        return self.root.to_tree(self.q, self.params)
