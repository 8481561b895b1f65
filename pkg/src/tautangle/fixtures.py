"""Reference triangulations shipped with the package."""

from __future__ import annotations

from importlib import resources

from .triangulation import Triangulation


def _load(name: str) -> Triangulation:
    text = resources.files(__package__).joinpath("data", name).read_text()
    return Triangulation.loads(text)


def figure_eight() -> Triangulation:
    """Two-tetrahedron triangulation of the figure-eight knot complement."""
    return _load("fig8.json")


def rl_insert1() -> Triangulation:
    """The RL bundle with one cancelling pair inserted after the first letter."""
    return _load("rl_insert1.json")
