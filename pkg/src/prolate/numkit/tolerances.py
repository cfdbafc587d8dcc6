from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Error budget handed to the numerical kernels."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_steps: int = 200_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ValueError(f"max_steps must be a positive integer, got {self.max_steps}")

    def scaled(self, factor: float) -> Tolerances:
        """Both tolerances multiplied by ``factor`` (the global ``--tol`` knob)."""
        return replace(self, abs_tol=self.abs_tol * factor, rel_tol=self.rel_tol * factor)


DEFAULT_TOL = Tolerances()
