"""World model: labelled objects with geometry, observer viewpoints and id styles."""
from __future__ import annotations

import json
import logging
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..errors import AnonymizationError, SceneError, UnknownIdError, UnknownViewpointError
from .schema import SceneDoc

logger = logging.getLogger(__name__)

ID_SUFFIX = re.compile(r"(\d+)([a-z]*)$")
ANONYMOUS_PREFIX = "Object"

Vec3 = tuple[float, float, float]


class IdStyle(Enum):
    MEANINGFUL = "meaningful"
    ANONYMIZED = "anonymized"


def id_suffix(object_id: str) -> str | None:
    m = ID_SUFFIX.search(object_id)
    return m.group(0) if m else None


def sort_key(object_id: str) -> tuple:
    """Ascending numeric suffix, then letter suffix ("19" < "19a" < "23")."""
    m = ID_SUFFIX.search(object_id)
    if not m:
        return (1, 0, "", object_id)
    return (0, int(m.group(1)), m.group(2), object_id)


def anonymous_id(object_id: str) -> str:
    suffix = id_suffix(object_id)
    if suffix is None:
        raise AnonymizationError(f"{object_id} has no numeric suffix")
    return ANONYMOUS_PREFIX + suffix


@dataclass(frozen=True)
class Box:
    min: Vec3
    max: Vec3

    def contains(self, point: Vec3) -> bool:
        return all(lo <= p <= hi for lo, p, hi in zip(self.min, point, self.max))

    def overlaps_xy(self, other: Box) -> bool:
        """Strict footprint overlap on the two horizontal axes."""
        return all(self.min[i] < other.max[i] and other.min[i] < self.max[i] for i in (0, 1))


@dataclass(frozen=True)
class ObjectRecord:
    id: str
    category: str
    position: Vec3
    bbox: Box
    facts: frozenset[tuple[str, str]] = frozenset()

    def has_fact(self, key: str, value: str) -> bool:
        return (key, value) in self.facts


@dataclass(frozen=True)
class Viewpoint:
    name: str
    position: Vec3
    facing: Vec3


@dataclass(frozen=True)
class SceneModel:
    objects: tuple[ObjectRecord, ...]
    viewpoints: tuple[Viewpoint, ...]
    name: str = "scene"
    counter_height: float = 0.9
    _index: dict[str, ObjectRecord] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if not self.viewpoints:
            raise SceneError(f"scene {self.name!r} defines no viewpoint")
        for obj in self.objects:
            if obj.id in self._index:
                raise SceneError(f"duplicate object id {obj.id}")
            self._index[obj.id] = obj

    def __contains__(self, object_id: object) -> bool:
        return object_id in self._index

    def __len__(self) -> int:
        return len(self.objects)

    @property
    def ids(self) -> list[str]:
        return [o.id for o in self.objects]

    @cached_property
    def categories(self) -> frozenset[str]:
        return frozenset(o.category for o in self.objects)

    def get(self, object_id: str) -> ObjectRecord:
        try:
            return self._index[object_id]
        except KeyError:
            raise UnknownIdError(f"unknown object id {object_id}") from None

    def viewpoint(self, name: str | None = None) -> Viewpoint:
        if name is None:
            return self.viewpoints[0]
        for vp in self.viewpoints:
            if vp.name == name:
                return vp
        known = ", ".join(vp.name for vp in self.viewpoints)
        raise UnknownViewpointError(f"unknown viewpoint {name!r} (scene has: {known})")

    def sorted_objects(self) -> list[ObjectRecord]:
        return sorted(self.objects, key=lambda o: sort_key(o.id))

    def with_objects(self, objects: Iterable[ObjectRecord]) -> SceneModel:
        return SceneModel(
            objects=tuple(objects),
            viewpoints=self.viewpoints,
            name=self.name,
            counter_height=self.counter_height,
        )


def _facts(raw: Mapping[str, str | list[str]]) -> frozenset[tuple[str, str]]:
    pairs = set()
    for key, value in raw.items():
        values = [value] if isinstance(value, str) else value
        pairs.update((key, v) for v in values)
    return frozenset(pairs)


def load_scene(source: Path | str | Mapping[str, Any]) -> SceneModel:
    """Load a scene from a JSON file path or an already-parsed document.

    Raises:
        SceneError: malformed document, duplicate id, missing viewpoint,
            or a position outside its bounding box
    """
    if isinstance(source, Mapping):
        raw = dict(source)
        origin = "<document>"
    else:
        origin = str(source)
        try:
            raw = json.loads(Path(source).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise SceneError(f"scene file not found: {origin}") from None
        except json.JSONDecodeError as e:
            raise SceneError(f"{origin}: not valid JSON ({e})") from e

    if not isinstance(raw, dict):
        raise SceneError(f"{origin}: top level must be an object")
    if not raw.get("viewpoints"):
        raise SceneError(f"{origin}: scene defines no viewpoint")
    try:
        doc = SceneDoc.model_validate(raw)
    except ValidationError as e:
        raise SceneError(f"{origin}: malformed scene document\n{e}") from e

    objects = []
    for o in doc.objects:
        bbox = Box(min=o.bbox.min, max=o.bbox.max)
        if not bbox.contains(o.position):
            raise SceneError(f"{o.id}: position {o.position} lies outside its bbox")
        objects.append(
            ObjectRecord(
                id=o.id,
                category=o.category,
                position=o.position,
                bbox=bbox,
                facts=_facts(o.facts),
            )
        )
    viewpoints = tuple(
        Viewpoint(name=v.name, position=v.position, facing=v.facing) for v in doc.viewpoints
    )
    scene = SceneModel(
        objects=tuple(objects),
        viewpoints=viewpoints,
        name=doc.name,
        counter_height=doc.counter_height,
    )
    logger.debug("loaded scene %s: %d objects, %d viewpoints", scene.name, len(objects),
                 len(viewpoints))
    return scene


def dump_scene(scene: SceneModel) -> dict[str, Any]:
    """Inverse of load_scene: a plain document that loads back to an equal scene."""

    def facts(obj: ObjectRecord) -> dict[str, str | list[str]]:
        grouped: dict[str, list[str]] = {}
        for key, value in sorted(obj.facts):
            grouped.setdefault(key, []).append(value)
        return {k: v[0] if len(v) == 1 else v for k, v in grouped.items()}

    return {
        "name": scene.name,
        "counter_height": scene.counter_height,
        "viewpoints": [
            {"name": v.name, "position": list(v.position), "facing": list(v.facing)}
            for v in scene.viewpoints
        ],
        "objects": [
            {
                "id": o.id,
                "category": o.category,
                "position": list(o.position),
                "bbox": {"min": list(o.bbox.min), "max": list(o.bbox.max)},
                "facts": facts(o),
            }
            for o in scene.objects
        ],
    }


def anonymize(scene: SceneModel) -> tuple[SceneModel, dict[str, str]]:
    """Replace every "<Category><n>" id with "Object<n>".

    Returns:
        (anonymised scene, mapping original id -> anonymised id)
    """
    mapping: dict[str, str] = {}
    taken: dict[str, str] = {}
    for obj in scene.objects:
        new_id = anonymous_id(obj.id)
        if new_id in taken:
            raise AnonymizationError(
                f"{obj.id} and {taken[new_id]} both anonymise to {new_id}"
            )
        taken[new_id] = obj.id
        mapping[obj.id] = new_id
    renamed = scene.with_objects(replace(o, id=mapping[o.id]) for o in scene.objects)
    return renamed, mapping


def deanonymize(ids: Iterable[str], mapping: Mapping[str, str]) -> list[str]:
    """Map anonymised ids back through an ``anonymize`` mapping; unknown ids pass through."""
    reverse = {v: k for k, v in mapping.items()}
    return [reverse.get(i, i) for i in ids]


def render_category_list(scene: SceneModel, style: IdStyle) -> str:
    if style is IdStyle.ANONYMIZED:
        scene, _ = anonymize(scene)
        line = "{id}: category {category}"
    else:
        line = "{id} : category {category}"
    return "\n".join(
        line.format(id=o.id, category=o.category) for o in scene.sorted_objects()
    )
