"""Pydantic request/response models for the HTTP service."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..asymptotics import DegreeSpec
from ..errors import InvalidInputError
from ..graphs import LabelledGraph, from_graph6


class SpecModel(BaseModel):
    n: int
    degrees: list[int]

    def to_spec(self) -> DegreeSpec:
        return DegreeSpec(self.n, tuple(self.degrees))


class GraphPayload(BaseModel):
    """A graph, either as an explicit edge list or a graph6 string."""

    n: Optional[int] = None
    edges: Optional[list[tuple[int, int]]] = None
    graph6: Optional[str] = None

    def to_graph(self) -> LabelledGraph:
        if self.graph6 is not None:
            return from_graph6(self.graph6)
        if self.n is None or self.edges is None:
            raise InvalidInputError("graph payload needs n+edges or graph6")
        return LabelledGraph.from_edges(self.n, self.edges)


class AsymRequest(BaseModel):
    formula: Literal["rprime", "regular", "mcleod", "disjoint", "multi", "join"] = "rprime"
    spec: Optional[SpecModel] = None
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    h: Optional[int] = None
    degrees: Optional[list[int]] = None
    d1: Optional[int] = None
    d2: Optional[int] = None


class ExactRequest(BaseModel):
    kind: Literal["regular", "factorisations", "matchings"]
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    spec: Optional[SpecModel] = None
    method: Literal["auto", "dfs", "memoized"] = "auto"
    workers: int = Field(default=1, ge=1)


class McRequest(BaseModel):
    mode: Literal["multi", "disjoint", "tail"]
    trials: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=1 << 64)
    workers: int = Field(default=1, ge=1)
    n: Optional[int] = None
    degrees: Optional[list[int]] = None
    d: Optional[int] = None
    h: Optional[int] = None
    graph: Optional[GraphPayload] = None
    graph2: Optional[GraphPayload] = None


class SwitchRequest(BaseModel):
    n: Optional[int] = None
    d: Optional[int] = None
    h: Optional[int] = None
    graph: Optional[GraphPayload] = None
    graph2: Optional[GraphPayload] = None
    moves: bool = False


class BoundsRequest(BaseModel):
    Z: Optional[int] = None
    A: Optional[float] = None
    B: Optional[float] = None
    c_hat: Optional[float] = None
    demo: bool = False


class FigureRequest(BaseModel):
    n: int
    method: Literal["auto", "dfs", "memoized"] = "auto"
    workers: int = Field(default=1, ge=1)


class CompareRequest(BaseModel):
    spec: SpecModel
    workers: int = Field(default=1, ge=1)


class TableResponse(BaseModel):
    config: dict
    columns: list[str]
    rows: list[list]
    summary: Optional[dict] = None
