"""Deterministic parameters for synthetic sketch generation.

No constant here is sacred: they are tuned to make the output read like
a hand-drawn wireframe and all of them are configurable.  Randomness is
drawn from a PCG64 generator seeded with ``seed``; two runs with the
same recipe produce byte-identical sketches within one installation.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["SketchRecipe", "BODY_LINE_HEIGHT_PX"]

# Approximate default body line height; a text box is split into
# round(height / 18) drawn lines.
BODY_LINE_HEIGHT_PX = 18.0


@dataclass(frozen=True)
class SketchRecipe:
    seed: int = 0
    canny_low: float = 50.0
    canny_high: float = 150.0
    gaussian_sigma: float = 1.4
    wavelength_factor: float = 2.0
    amplitude_factor: float = 0.35
    stroke_divisor: float = 12.0
    jitter_fraction: float = 0.15

    def __post_init__(self) -> None:
        if not (0 < self.canny_low < self.canny_high <= 255):
            raise ValueError("thresholds must satisfy 0 < low < high <= 255")
        if self.gaussian_sigma <= 0:
            raise ValueError("gaussian_sigma must be positive")
        if not (0 <= self.jitter_fraction <= 0.5):
            raise ValueError("jitter_fraction must be in [0, 0.5]")
        if self.wavelength_factor <= 0 or self.amplitude_factor < 0:
            raise ValueError("wave parameters must be positive")
        if self.stroke_divisor <= 0:
            raise ValueError("stroke_divisor must be positive")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "canny_low": self.canny_low,
            "canny_high": self.canny_high,
            "gaussian_sigma": self.gaussian_sigma,
            "wavelength_factor": self.wavelength_factor,
            "amplitude_factor": self.amplitude_factor,
            "stroke_divisor": self.stroke_divisor,
            "jitter_fraction": self.jitter_fraction,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SketchRecipe":
        return cls(**data)
