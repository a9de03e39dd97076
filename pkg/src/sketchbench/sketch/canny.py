"""Canny edge detection.

The classic four stages: Gaussian smoothing, Sobel gradients,
non-maximum suppression along the quantized gradient direction, and
double-threshold hysteresis with 8-connected linking.  Images are
(H, W) uint8 arrays; the returned edge map contains only 0 and 255.

Coordinates follow image convention: rows grow downward, so the Sobel y
kernel measures the derivative toward larger row indices.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .recipe import SketchRecipe

__all__ = ["canny", "gaussian_blur", "sobel_gradients", "gaussian_kernel"]

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)

# (dr, dc) of the "plus" neighbor per quantized direction bin; the minus
# neighbor is the negation.
_NEIGHBOR = {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (1, -1)}


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian with kernel radius ceil(3 * sigma)."""
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing with clamped (nearest) borders."""
    kernel = gaussian_kernel(sigma)
    out = ndimage.correlate1d(img.astype(np.float64), kernel, axis=0, mode="nearest")
    return ndimage.correlate1d(out, kernel, axis=1, mode="nearest")


def sobel_gradients(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(gx, gy) Sobel derivatives of a float image."""
    f = img.astype(np.float64)
    gx = ndimage.correlate(f, SOBEL_X, mode="nearest")
    gy = ndimage.correlate(f, SOBEL_Y, mode="nearest")
    return gx, gy


def _quantize_direction(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    theta = np.mod(np.arctan2(gy, gx), np.pi)
    bins = np.zeros(theta.shape, dtype=np.uint8)
    bins[(theta >= np.pi / 8) & (theta < 3 * np.pi / 8)] = 1
    bins[(theta >= 3 * np.pi / 8) & (theta < 5 * np.pi / 8)] = 2
    bins[(theta >= 5 * np.pi / 8) & (theta < 7 * np.pi / 8)] = 3
    return bins


def _shift(mag: np.ndarray, dr: int, dc: int) -> np.ndarray:
    """Magnitude shifted by (dr, dc); cells outside the image read as -1."""
    out = np.full_like(mag, -1.0)
    h, w = mag.shape
    src = mag[
        max(0, -dr) : h - max(0, dr),
        max(0, -dc) : w - max(0, dc),
    ]
    out[
        max(0, dr) : h - max(0, -dr),
        max(0, dc) : w - max(0, -dc),
    ] = src
    return out


def _non_maximum_suppression(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Keep only ridge pixels along the quantized gradient direction.

    Ties on a two-pixel plateau break asymmetrically (>= toward the plus
    neighbor, > toward the minus neighbor) so a symmetric step edge thins
    to a single pixel instead of vanishing or doubling.
    """
    bins = _quantize_direction(gx, gy)
    keep = np.zeros(mag.shape, dtype=bool)
    for b, (dr, dc) in _NEIGHBOR.items():
        n_plus = _shift(mag, dr, dc)
        n_minus = _shift(mag, -dr, -dc)
        keep |= (bins == b) & (mag >= n_plus) & (mag > n_minus) & (mag > 0)
    suppressed = np.where(keep, mag, 0.0)
    suppressed[0, :] = 0.0
    suppressed[-1, :] = 0.0
    suppressed[:, 0] = 0.0
    suppressed[:, -1] = 0.0
    return suppressed


def _hysteresis(suppressed: np.ndarray, low: float, high: float) -> np.ndarray:
    weak = suppressed >= low
    strong = suppressed >= high
    if not strong.any():
        return np.zeros(suppressed.shape, dtype=bool)
    labels, count = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    strong_labels = np.unique(labels[strong])
    keep = np.zeros(count + 1, dtype=bool)
    keep[strong_labels] = True
    keep[0] = False
    return keep[labels]


def canny(img: np.ndarray, recipe: SketchRecipe) -> np.ndarray:
    """Binary edge map (0 or 255) of a grayscale image."""
    if img.ndim != 2:
        raise ValueError("expected a 2-D grayscale image")
    radius = math.ceil(3.0 * recipe.gaussian_sigma)
    kernel_size = 2 * radius + 1
    if min(img.shape) < kernel_size:
        raise ValueError(
            f"image {img.shape} is smaller than the {kernel_size}-px smoothing kernel"
        )
    blurred = gaussian_blur(img, recipe.gaussian_sigma)
    gx, gy = sobel_gradients(blurred)
    mag = np.hypot(gx, gy)
    suppressed = _non_maximum_suppression(mag, gx, gy)
    edges = _hysteresis(suppressed, recipe.canny_low, recipe.canny_high)
    return np.where(edges, 255, 0).astype(np.uint8)
