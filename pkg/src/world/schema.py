"""Scene document schema (JSON on disk).

The pydantic models here validate the file shape only; domain invariants
(unique ids, bbox containment) are enforced by ``load_scene``.
"""
from __future__ import annotations

from pydantic import BaseModel, Field, field_validator

Vec3 = tuple[float, float, float]


class BoxDoc(BaseModel):
    min: Vec3
    max: Vec3

    @field_validator("max")
    @classmethod
    def _ordered(cls, v: Vec3, info) -> Vec3:
        lo = info.data.get("min")
        if lo is not None and any(a > b for a, b in zip(lo, v)):
            raise ValueError("bbox max must be >= min on every axis")
        return v


class ObjectDoc(BaseModel):
    id: str = Field(min_length=1, description="Scene-unique identifier, e.g. Cabinet14")
    category: str = Field(min_length=1, description="Category name, e.g. Cabinet")
    position: Vec3 = Field(description="Centre point in metres")
    bbox: BoxDoc
    facts: dict[str, str | list[str]] = Field(
        default_factory=dict, description="key -> value or values, e.g. contains: knives"
    )


class ViewpointDoc(BaseModel):
    name: str = Field(min_length=1)
    position: Vec3
    facing: Vec3 = Field(description="Viewing direction; normalised on load")


class SceneDoc(BaseModel):
    name: str = "scene"
    counter_height: float = Field(
        default=0.9, description="Threshold for high/low bands, metres above the floor"
    )
    viewpoints: list[ViewpointDoc] = Field(min_length=1)
    objects: list[ObjectDoc] = Field(default_factory=list)
