"""Brute-force oracle for the Canny pipeline: direct per-pixel loops.

Independent of the production path (no scipy): explicit convolutions
with clamped borders, direct angle quantization, BFS hysteresis.  Slow;
use on small fixtures only.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np


def _clamp(v: int, lo: int, hi: int) -> int:
    return max(lo, min(hi, v))


def oracle_gaussian(img: np.ndarray, sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    kernel /= kernel.sum()
    h, w = img.shape
    f = img.astype(np.float64)
    rows = np.zeros_like(f)
    for r in range(h):
        for c in range(w):
            acc = 0.0
            for k in range(-radius, radius + 1):
                acc += kernel[k + radius] * f[_clamp(r + k, 0, h - 1), c]
            rows[r, c] = acc
    out = np.zeros_like(f)
    for r in range(h):
        for c in range(w):
            acc = 0.0
            for k in range(-radius, radius + 1):
                acc += kernel[k + radius] * rows[r, _clamp(c + k, 0, w - 1)]
            out[r, c] = acc
    return out


def oracle_sobel(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    kx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]
    ky = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]]
    h, w = img.shape
    gx = np.zeros((h, w))
    gy = np.zeros((h, w))
    for r in range(h):
        for c in range(w):
            ax = ay = 0.0
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    v = img[_clamp(r + dr, 0, h - 1), _clamp(c + dc, 0, w - 1)]
                    ax += kx[dr + 1][dc + 1] * v
                    ay += ky[dr + 1][dc + 1] * v
            gx[r, c] = ax
            gy[r, c] = ay
    return gx, gy


_PLUS = {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (1, -1)}


def _direction_bin(gx: float, gy: float) -> int:
    theta = math.atan2(gy, gx) % math.pi
    if math.pi / 8 <= theta < 3 * math.pi / 8:
        return 1
    if 3 * math.pi / 8 <= theta < 5 * math.pi / 8:
        return 2
    if 5 * math.pi / 8 <= theta < 7 * math.pi / 8:
        return 3
    return 0


def oracle_nms(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    h, w = mag.shape
    out = np.zeros_like(mag)
    for r in range(1, h - 1):
        for c in range(1, w - 1):
            m = mag[r, c]
            if m <= 0:
                continue
            dr, dc = _PLUS[_direction_bin(gx[r, c], gy[r, c])]
            n_plus = mag[r + dr, c + dc]
            n_minus = mag[r - dr, c - dc]
            if m >= n_plus and m > n_minus:
                out[r, c] = m
    return out


def oracle_hysteresis(suppressed: np.ndarray, low: float, high: float) -> np.ndarray:
    h, w = suppressed.shape
    edges = np.zeros((h, w), dtype=bool)
    weak = suppressed >= low
    seeds = deque(zip(*np.nonzero(suppressed >= high)))
    for r, c in seeds:
        edges[r, c] = True
    while seeds:
        r, c = seeds.popleft()
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                rr, cc = r + dr, c + dc
                if 0 <= rr < h and 0 <= cc < w and weak[rr, cc] and not edges[rr, cc]:
                    edges[rr, cc] = True
                    seeds.append((rr, cc))
    return edges


def oracle_canny(img: np.ndarray, recipe) -> np.ndarray:
    blurred = oracle_gaussian(img, recipe.gaussian_sigma)
    gx, gy = oracle_sobel(blurred)
    mag = np.hypot(gx, gy)
    suppressed = oracle_nms(mag, gx, gy)
    edges = oracle_hysteresis(suppressed, recipe.canny_low, recipe.canny_high)
    return np.where(edges, 255, 0).astype(np.uint8)
