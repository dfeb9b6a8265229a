"""Ring-buffer replay with n-step return assembly.

Each environment step appends one slot (frame, action, reward, flags); the
episode's final frame gets a trailing action-less slot so bootstrap targets
always have a stored frame. Frames are kept exactly as rendered; any
augmentation happens on sampled copies, never in storage.
"""

from __future__ import annotations

import numpy as np

from ..rng import Rng, bounded_from_u64


class ReplayBuffer:
    def __init__(self, capacity: int, frame_shape=(3, 84, 84), n_step: int = 3, gamma: float = 0.9):
        if capacity < 256:
            raise ValueError("capacity too small to hold whole episodes comfortably")
        self.capacity = capacity
        self.n_step = n_step
        self.gamma = gamma
        self.frames = np.zeros((capacity, *frame_shape), dtype=np.uint8)
        self.actions = np.zeros((capacity, 2), dtype=np.float32)
        self.rewards = np.zeros(capacity, dtype=np.float32)
        self.terminal = np.zeros(capacity, dtype=bool)  # target reached after this action
        self.has_action = np.zeros(capacity, dtype=bool)
        self.episode = np.full(capacity, -1, dtype=np.int64)
        self._head = 0
        self._count = 0
        self._episode_id = -1
        self._pending = None

    def __len__(self) -> int:
        return self._count

    def _append(self, frame_u8: np.ndarray, action, reward, terminal, has_action):
        i = self._head
        self.frames[i] = frame_u8
        self.actions[i] = 0.0 if action is None else action
        self.rewards[i] = reward
        self.terminal[i] = terminal
        self.has_action[i] = has_action
        self.episode[i] = self._episode_id
        self._head = (i + 1) % self.capacity
        self._count = min(self._count + 1, self.capacity)

    def start_episode(self, first_frame: np.ndarray):
        self._episode_id += 1
        self._pending = np.asarray(first_frame, dtype=np.uint8)

    def add(self, action, reward: float, reached: bool, done: bool, next_frame: np.ndarray):
        if self._pending is None:
            raise RuntimeError("start_episode before add")
        self._append(self._pending, action, reward, reached, True)
        nxt = np.asarray(next_frame, dtype=np.uint8)
        if done:
            self._append(nxt, None, 0.0, False, False)
            self._pending = None
        else:
            self._pending = nxt

    # -- sampling ------------------------------------------------------------

    def _candidates(self) -> np.ndarray:
        nxt_episode = np.roll(self.episode, -1)
        mask = self.has_action & (nxt_episode == self.episode)
        return np.nonzero(mask)[0]

    def can_sample(self, batch_size: int) -> bool:
        return len(self._candidates()) >= batch_size

    def sample(self, batch_size: int, rng: Rng):
        """Uniform over sampleable slots.

        Returns (obs frames, actions, n-step returns, bootstrap discounts,
        bootstrap frames); the discount is zero where the chain hit a
        terminal transition.
        """
        cands = self._candidates()
        if len(cands) == 0:
            raise RuntimeError("replay holds no complete transition yet")
        picks = cands[bounded_from_u64(rng.u64(batch_size), len(cands))]
        cap = self.capacity
        cur = picks.astype(np.int64)
        rets = self.rewards[cur].astype(np.float64)
        disc = np.full(batch_size, self.gamma)
        hit_terminal = self.terminal[cur].copy()
        for _ in range(self.n_step - 1):
            nxt = (cur + 1) % cap
            advance = (
                ~hit_terminal
                & self.has_action[nxt]
                & (self.episode[nxt] == self.episode[cur])
                & (self.episode[(nxt + 1) % cap] == self.episode[nxt])
            )
            rets = np.where(advance, rets + disc * self.rewards[nxt], rets)
            disc = np.where(advance, disc * self.gamma, disc)
            cur = np.where(advance, nxt, cur)
            hit_terminal |= advance & self.terminal[nxt]
        weights = np.where(hit_terminal, 0.0, disc)
        boot_idx = np.where(hit_terminal, picks, (cur + 1) % cap)
        return (
            self.frames[picks],
            self.actions[picks].copy(),
            rets.astype(np.float32),
            weights.astype(np.float32),
            self.frames[boot_idx],
        )
