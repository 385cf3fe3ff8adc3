from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .wkb.tracer import TracerParams


@dataclass(frozen=True)
class PipelineConfig:
    inputs: tuple[str, ...] = ()
    order: int = 12
    tol: float = 1e-9
    capture: float = 0.05
    zero_tol: float = 1e-6
    theta: float = 0.0
    background: str = "b0"
    areas: dict[int, Fraction] = field(default_factory=dict)
    seed: int = 0
    area_denominator: int = 10**6

    def __post_init__(self):
        for name in ("tol", "capture", "zero_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.order < 3:
            raise ValueError("truncation order must be at least 3")
        if self.background not in ("b0", "none"):
            raise ValueError("background must be 'b0' or 'none'")
        if self.area_denominator < 1:
            raise ValueError("area denominator must be positive")

    def tracer(self) -> TracerParams:
        return TracerParams(tol=self.tol, capture=self.capture, zero_tol=self.zero_tol)

    def rounded_area(self, x: float) -> Fraction:
        """Area as an exact rational with the configured denominator."""
        return Fraction(round(x * self.area_denominator), self.area_denominator)
