"""Time grids for the samplers.

The workhorse is the angle-uniform grid: nodes t = tan(angle)^endpoint-2 for
equally spaced angles in (angle_min, pi/2), which packs steps densely near
t = 0 and stretches them geometrically at large t.  Sampler grids prepend the
exact start node t = 0; the reverse-diffusion variant omits it because those
coefficients diverge there.

Jump-process clocks on (0, 1) use an arcsin reparametrization t = (1 + sin
theta)/2 with the endpoints clipped to [lo, hi], which shrinks steps like
sqrt(t (1-t)) near both endpoints where the flip rates blow up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["TimeGrid", "alpha_uniform", "alpha_uniform_positive", "arcsin_clock", "uniform_grid"]

DEFAULT_STEPS = 300
DEFAULT_T_MAX = 1.0e3
DEFAULT_CTMC_STEPS = 600


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing node vector t_0 < t_1 < ... < t_m plus a rule tag."""

    nodes: np.ndarray
    rule: str = "explicit"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).ravel()
        if nodes.size < 2:
            raise ValidationError("grid needs at least two nodes")
        if not np.all(np.isfinite(nodes)) or nodes[0] < 0 or np.any(np.diff(nodes) <= 0):
            raise ValidationError("grid nodes must be finite, nonnegative, strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def steps(self) -> int:
        return self.nodes.size - 1

    @property
    def deltas(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def horizon(self) -> float:
        return float(self.nodes[-1])


def _cot_squared_nodes(k: int, t_max: float) -> np.ndarray:
    if k < 1:
        raise ValidationError("need at least one step")
    if t_max <= 0:
        raise ValidationError("t_max must be positive")
    angle_min = np.arctan(1.0 / np.sqrt(t_max))
    angles = angle_min + (np.pi / 2 - angle_min) * (np.arange(k) / k)
    nodes = np.sort(1.0 / np.tan(angles) ** 2)
    nodes[-1] = t_max  # pin the horizon exactly
    return nodes


def alpha_uniform(k: int = DEFAULT_STEPS, t_max: float = DEFAULT_T_MAX) -> TimeGrid:
    """Angle-uniform grid with k steps from 0 to t_max (k+1 nodes)."""
    return TimeGrid(np.concatenate([[0.0], _cot_squared_nodes(k, t_max)]), rule="alpha-uniform")


def alpha_uniform_positive(k: int = DEFAULT_STEPS, t_max: float = DEFAULT_T_MAX) -> TimeGrid:
    """Angle-uniform grid without the zero node (k nodes, k-1 steps)."""
    return TimeGrid(_cot_squared_nodes(k, t_max), rule="alpha-uniform-positive")


def arcsin_clock(k: int = DEFAULT_CTMC_STEPS, lo: float = 0.01, hi: float = 0.99) -> TimeGrid:
    """Arcsin-reparametrized clock on [lo, hi] with k steps, for jump chains."""
    if not 0.0 < lo < hi < 1.0:
        raise ValidationError("need 0 < lo < hi < 1")
    theta = np.linspace(np.arcsin(2 * lo - 1), np.arcsin(2 * hi - 1), k + 1)
    nodes = 0.5 * (1.0 + np.sin(theta))
    nodes[0], nodes[-1] = lo, hi
    return TimeGrid(nodes, rule="arcsin-clock")


def uniform_grid(k: int, t_max: float, t_min: float = 0.0) -> TimeGrid:
    """Equally spaced nodes, t_min to t_max inclusive."""
    return TimeGrid(np.linspace(t_min, t_max, k + 1), rule="uniform")
