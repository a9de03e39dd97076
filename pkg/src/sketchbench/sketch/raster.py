"""Grayscale raster helpers (PNG in, PNG out)."""

from __future__ import annotations

import os

import numpy as np
from PIL import Image

__all__ = ["to_grayscale", "load_gray_png", "save_gray_png"]


def to_grayscale(img: np.ndarray) -> np.ndarray:
    """RGB(A) uint8 array to single-channel uint8 luma."""
    if img.ndim == 2:
        return img.astype(np.uint8, copy=False)
    mode = "RGBA" if img.shape[2] == 4 else "RGB"
    return np.asarray(Image.fromarray(img, mode).convert("L"))


def load_gray_png(path: str | os.PathLike) -> np.ndarray:
    return np.asarray(Image.open(path).convert("L"))


def save_gray_png(img: np.ndarray, path: str | os.PathLike, invert: bool = False) -> None:
    """Write an 8-bit grayscale PNG.

    ``invert=True`` flips an edges-white map into the black-strokes-on-
    white convention wireframes are drawn in.
    """
    data = 255 - img if invert else img
    Image.fromarray(data.astype(np.uint8), "L").save(path, format="PNG")
