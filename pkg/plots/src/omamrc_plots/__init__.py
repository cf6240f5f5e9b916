"""Figure rendering for omamrc sweep CSV outputs."""

from .render import FIGURE_KINDS, RenderError, render

__all__ = ["FIGURE_KINDS", "RenderError", "render"]
