"""Synthetic wireframe sketches from rendered screenshots."""

from .recipe import SketchRecipe
from .bezier import ControlPolygon, bezier_point, squiggle
from .canny import canny, gaussian_blur, sobel_gradients
from .raster import load_gray_png, save_gray_png, to_grayscale
from .synthesize import synthesize

__all__ = [
    "SketchRecipe",
    "ControlPolygon",
    "bezier_point",
    "squiggle",
    "canny",
    "gaussian_blur",
    "sobel_gradients",
    "synthesize",
    "to_grayscale",
    "load_gray_png",
    "save_gray_png",
]
