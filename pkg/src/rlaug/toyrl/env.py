"""DotReacher: drive a red dot onto a green target, from pixels only.

Positions live in the unit square; actions are velocities in [-1, 1]^2
scaled by 0.05 per step. Reward is the negative distance to the target
after moving, plus a +1 bonus on reaching it (distance below 0.05), which
ends the episode. Frames are (1, 3, 84, 84) uint8 over a uniform gray
background: the agent dot occupies the red channel and the target dot the
green channel, so the two disks stay disjoint even when they overlap
spatially. The non-zero background matters: zero-filled augmentation
artifacts (translate bands, crop canvases, resize borders) then land
outside the distribution a policy was trained on, which is what the
hardness instrumentation measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..batch import ImageBatch, float_to_u8
from ..rng import Rng
from . import STREAM_ENV

BACKGROUND_LEVEL = 56  # uniform gray; the encoder centers features on it


@dataclass(frozen=True)
class DotReacherConfig:
    size: int = 84
    max_steps: int = 40
    speed: float = 0.05
    target_radius: float = 0.05
    agent_px_radius: float = 4.0
    target_px_radius: float = 5.5
    spawn_margin: float = 0.03  # dots may hug the borders, mostly on screen
    min_spawn_distance: float = 0.2
    max_spawn_distance: float = 0.5  # bounded spawn range keeps values well-conditioned
    background: int = BACKGROUND_LEVEL
    discount: float = 0.85


class DotReacherEnv:
    """Deterministic given (seed, action sequence)."""

    def __init__(self, config: DotReacherConfig, seed: int, stream: int = STREAM_ENV):
        self.config = config
        self._rng = Rng(seed, stream)
        size = config.size
        grid = np.arange(size, dtype=np.float64)
        self._yy = grid[:, None]
        self._xx = grid[None, :]
        self.agent = np.zeros(2)
        self.target = np.zeros(2)
        self._steps = 0
        self._done = True
        self.diagnostics = {"clipped_actions": 0, "episodes": 0}

    def reset(self) -> ImageBatch:
        cfg = self.config
        lo, hi = cfg.spawn_margin, 1.0 - cfg.spawn_margin
        self.agent = np.array([self._rng.uniform(lo, hi), self._rng.uniform(lo, hi)])
        while True:
            self.target = np.array([self._rng.uniform(lo, hi), self._rng.uniform(lo, hi)])
            if cfg.min_spawn_distance <= self._dist() <= cfg.max_spawn_distance:
                break
        self._steps = 0
        self._done = False
        self.diagnostics["episodes"] += 1
        return self.render()

    def step(self, action) -> tuple[ImageBatch, float, bool]:
        if self._done:
            raise RuntimeError("episode is over; call reset()")
        a = np.asarray(action, dtype=np.float64)
        if np.abs(a).max() > 1.0:
            self.diagnostics["clipped_actions"] += 1
            a = np.clip(a, -1.0, 1.0)
        self.agent = np.clip(self.agent + a * self.config.speed, 0.0, 1.0)
        self._steps += 1
        dist = self._dist()
        reward = -dist
        reached = dist < self.config.target_radius
        if reached:
            reward += 1.0
        self._done = reached or self._steps >= self.config.max_steps
        return self.render(), float(reward), self._done

    @property
    def reached(self) -> bool:
        return self._done and self._dist() < self.config.target_radius

    def _dist(self) -> float:
        return float(math.hypot(*(self.agent - self.target)))

    def render(self) -> ImageBatch:
        cfg = self.config
        size = cfg.size
        frame = np.full((1, 3, size, size), cfg.background, dtype=np.uint8)
        self._disk(frame[0, 0], self.agent, cfg.agent_px_radius)
        self._disk(frame[0, 1], self.target, cfg.target_px_radius)
        return ImageBatch(frame)

    def _disk(self, channel: np.ndarray, pos, radius_px: float) -> None:
        cfg = self.config
        size = cfg.size
        scale = size - 1
        cy, cx = pos[0] * scale, pos[1] * scale
        reach = int(math.ceil(radius_px + 1.5))
        y0 = max(0, int(cy) - reach)
        y1 = min(size, int(cy) + reach + 1)
        x0 = max(0, int(cx) - reach)
        x1 = min(size, int(cx) + reach + 1)
        d = np.sqrt((self._yy[y0:y1] - cy) ** 2 + (self._xx[:, x0:x1] - cx) ** 2)
        intensity = np.clip(radius_px + 0.5 - d, 0.0, 1.0)  # one-pixel soft edge
        # blend the disk over the gray background
        blended = cfg.background + intensity * float(255 - cfg.background)
        channel[y0:y1, x0:x1] = float_to_u8((blended / np.float32(255.0)).astype(np.float32))
