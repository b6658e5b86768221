"""Scene world model."""
from .scene import (
    Box,
    IdStyle,
    ObjectRecord,
    SceneModel,
    Viewpoint,
    anonymize,
    anonymous_id,
    deanonymize,
    dump_scene,
    load_scene,
    render_category_list,
    sort_key,
)

__all__ = [
    "Box",
    "IdStyle",
    "ObjectRecord",
    "SceneModel",
    "Viewpoint",
    "anonymize",
    "anonymous_id",
    "deanonymize",
    "dump_scene",
    "load_scene",
    "render_category_list",
    "sort_key",
]
