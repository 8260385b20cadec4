"""Minkowski contents and fractal curvatures of self-similar sets and tilings.

Scenes are preset names, paths to scene JSON files, or dicts with the scene schema.
Results are plain dicts with the same layout as the CLI's JSON output.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from ._core import (
    ConfigError,
    PreconditionError,
    ResolutionError,
    _Pipeline,
    content_methods,
    distance_transform,
    preset_names,
    set_threads,
    thread_count,
)

__all__ = [
    "ConfigError",
    "PreconditionError",
    "ResolutionError",
    "Pipeline",
    "content",
    "curvature",
    "check",
    "dimension",
    "render",
    "presets",
    "preset",
    "content_methods",
    "distance_transform",
    "set_threads",
    "thread_count",
]


def _scene_arg(scene: str | Mapping[str, Any]) -> str:
    if isinstance(scene, Mapping):
        return json.dumps(scene)
    return str(scene)


class Pipeline:
    """Cached rasters and samples for one scene; reuse it for several queries."""

    def __init__(self, scene: str | Mapping[str, Any], delta: float | None = None,
                 eps_per_decade: int | None = None) -> None:
        self._p = _Pipeline(_scene_arg(scene), delta, eps_per_decade)

    @property
    def delta(self) -> float:
        return self._p.delta

    def dimension(self) -> dict:
        return json.loads(self._p.dim())

    def content(self, methods: Iterable[str] = ()) -> dict:
        return json.loads(self._p.contents(list(methods)))

    def curvature(self, k: Iterable[int] = ()) -> dict:
        return json.loads(self._p.curvatures(list(k)))

    def check(self) -> list[dict]:
        return json.loads(self._p.checks())

    def tiling(self) -> dict:
        return json.loads(self._p.tiling())

    def render(self, out_dir: str) -> None:
        self._p.render(str(out_dir))

    def export_samples(self, out_dir: str) -> None:
        self._p.export_samples(str(out_dir))


def dimension(scene, **options) -> dict:
    return Pipeline(scene, **options).dimension()


def content(scene, methods: Iterable[str] = (), **options) -> dict:
    return Pipeline(scene, **options).content(methods)


def curvature(scene, k: Iterable[int] = (), **options) -> dict:
    return Pipeline(scene, **options).curvature(k)


def check(scene, **options) -> list[dict]:
    return Pipeline(scene, **options).check()


def render(scene, out_dir: str, **options) -> dict:
    p = Pipeline(scene, **options)
    p.render(out_dir)
    return p.tiling()


def presets() -> list[str]:
    return list(preset_names())


def preset(name: str) -> dict:
    from ._core import preset_json

    return json.loads(preset_json(name))
