"""Training loop: deterministic-actor critic on replayed, augmented batches.

Augmentation touches only the sampled observation batches (both the online
and the bootstrap side), never evaluation frames and never stored frames.
Fusion schedules advance by exactly one step per gradient update.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..batch import ImageBatch
from ..errors import DivergedAtStep, InvalidValue
from ..fusion import FusionSchedule
from ..metrics import ReturnSample
from ..rng import DrawBuffer, Rng
from ..transforms import TransformSpec, apply_raw, apply_transform
from . import (
    STREAM_AUG,
    STREAM_AUG_NEXT,
    STREAM_ENV,
    STREAM_EVAL_AUG,
    STREAM_EVAL_ENV,
    STREAM_EXPLORE,
    STREAM_REPLAY,
)
from .env import DotReacherConfig, DotReacherEnv
from .policy import TinyPolicy, encode
from .replay import ReplayBuffer

Augmentation = "TransformSpec | FusionSchedule | None"


@dataclass
class TrainRun:
    """Configuration of one seeded training run; ``curve`` is filled by train()."""

    seed: int
    total_env_steps: int = 30_000
    batch_size: int = 32
    replay_capacity: int = 10_000
    augmentation: object = None  # TransformSpec | FusionSchedule | None
    eval_every: int = 5_000
    eval_episodes: int = 20
    update_every: int = 4
    warmup_steps: int = 1_000
    lr: float = 1e-4
    actor_lr: float | None = None  # defaults to lr
    n_step: int = 3
    tau: float = 0.01
    stddev_start: float = 1.0
    stddev_end: float = 0.1
    stddev_fraction: float = 1.0 / 3.0  # share of training the anneal spans
    shared_aug_params: bool = True  # same draws for obs and bootstrap frames
    env: DotReacherConfig = field(default_factory=DotReacherConfig)
    curve: list = field(default_factory=list)


@dataclass
class TrainResult:
    run: TrainRun
    policy: TinyPolicy
    n_updates: int


def _stddev(run: TrainRun, step: int) -> float:
    span = max(1, int(run.total_env_steps * run.stddev_fraction))
    frac = min(1.0, step / span)
    return run.stddev_start + frac * (run.stddev_end - run.stddev_start)


def _augment(frames_u8: np.ndarray, aug, rng: Rng) -> np.ndarray:
    batch = ImageBatch(frames_u8)
    if isinstance(aug, FusionSchedule):
        return aug.apply(batch, rng).data
    return apply_transform(batch, aug, rng).data


def _augment_pair(obs: np.ndarray, boot: np.ndarray, aug, rng: Rng, shared: bool, rng_next: Rng):
    """Augment the online and bootstrap batches.

    In shared mode the pair rides one kernel pass as stacked channel planes,
    which is bit-identical to two calls with the same rng (the kernels are
    channel-agnostic) but runs the per-image machinery once.
    """
    if isinstance(aug, FusionSchedule) or not shared:
        return (
            _augment(obs, aug, rng),
            _augment(boot, aug, rng if shared else rng_next),
        )
    c = obs.shape[1]
    stacked = np.concatenate([obs, boot], axis=1)  # (B, 2c, h, w)
    out = apply_raw(stacked, aug, rng)
    return out[:, :c], out[:, c:]


def train(run: TrainRun) -> TrainResult:
    """Run the loop; returns the run with its learning curve filled in."""
    if run.total_env_steps < 1:
        raise InvalidValue("total_env_steps must be positive")
    cfg = run.env
    env = DotReacherEnv(cfg, run.seed, STREAM_ENV)
    policy = TinyPolicy(run.seed, lr=run.lr, actor_lr=run.actor_lr)
    buf = ReplayBuffer(run.replay_capacity, (3, cfg.size, cfg.size), run.n_step, cfg.discount)
    explore = DrawBuffer(Rng(run.seed, STREAM_EXPLORE))
    replay_rng = Rng(run.seed, STREAM_REPLAY)
    aug = run.augmentation
    if isinstance(aug, FusionSchedule):
        # private copy: the run owns its scheduler state from step 0
        aug = replace(aug, step_counter=0)

    run.curve = []
    n_updates = 0
    frame = env.reset().data[0]
    buf.start_episode(frame)
    for step in range(1, run.total_env_steps + 1):
        if step <= run.warmup_steps:
            action = explore.uniform(-1.0, 1.0, 2)
        else:
            mu = policy.act(frame[None])[0]
            noise = explore.normal(2)
            action = np.clip(mu + _stddev(run, step) * noise, -1.0, 1.0)
        nxt, reward, done = env.step(action)
        nxt_frame = nxt.data[0]
        buf.add(action.astype(np.float32), reward, env.reached, done, nxt_frame)
        if done:
            frame = env.reset().data[0]
            buf.start_episode(frame)
        else:
            frame = nxt_frame

        if step > run.warmup_steps and step % run.update_every == 0 and buf.can_sample(run.batch_size):
            _update(run, policy, buf, replay_rng, aug, n_updates)
            if isinstance(aug, FusionSchedule):
                aug.tick(1)
            n_updates += 1

        if step % run.eval_every == 0 or step == run.total_env_steps:
            sample = evaluate(policy, cfg, run.eval_episodes, transform=None, seed=run.seed)
            run.curve.append((step, sample))
    return TrainResult(run=run, policy=policy, n_updates=n_updates)


def _update(run: TrainRun, policy: TinyPolicy, buf: ReplayBuffer, replay_rng: Rng, aug, update_idx: int):
    obs, actions, rets, weights, boot = buf.sample(run.batch_size, replay_rng)
    if aug is not None:
        rng_obs = Rng(run.seed, STREAM_AUG, epoch=update_idx)
        rng_nxt = Rng(run.seed, STREAM_AUG_NEXT, epoch=update_idx)
        obs, boot = _augment_pair(obs, boot, aug, rng_obs, run.shared_aug_params, rng_nxt)
    z = encode(obs)
    z_next = encode(boot)
    q_next = policy.target_q(z_next)
    y = rets + weights * q_next
    critic_loss = policy.critic_update(z, actions, y)
    actor_loss = policy.actor_update(z)
    if not (math.isfinite(critic_loss) and math.isfinite(actor_loss)):
        raise DivergedAtStep(update_idx)
    policy.soft_update_targets(run.tau)


def evaluate(
    policy: TinyPolicy,
    env_cfg: DotReacherConfig,
    n_episodes: int = 20,
    transform=None,
    seed: int = 0,
    redraw: str = "frame",
) -> ReturnSample:
    """Greedy episodes on a fresh evaluation environment.

    When ``transform`` is given, each observation is augmented before the
    policy sees it; the environment itself stays clean. ``redraw`` picks the
    parameter granularity: "frame" redraws per observation (training
    semantics), "episode" holds one observation map per episode, which
    measures pure distribution shift without frame-to-frame jitter. A fresh
    env is seeded per call, so repeated evaluations replay the same episodes.
    """
    if redraw not in ("frame", "episode"):
        raise InvalidValue(f"redraw must be 'frame' or 'episode', got {redraw!r}")
    env = DotReacherEnv(env_cfg, seed, STREAM_EVAL_ENV)
    aug_base = Rng(seed, STREAM_EVAL_AUG)
    returns = []
    frames_per_ep = env_cfg.max_steps + 1
    for ep in range(n_episodes):
        frame = env.reset()
        total = 0.0
        done = False
        t = 0
        while not done:
            obs = frame
            if transform is not None:
                ctx = ep if redraw == "episode" else ep * frames_per_ep + t
                obs = ImageBatch(_augment(frame.data, transform, aug_base.at_epoch(ctx)))
            action = policy.act(obs.data)[0]
            frame, reward, done = env.step(action)
            total += reward
            t += 1
        returns.append(total)
    return ReturnSample(tuple(returns), context={"seed": seed, "episodes": n_episodes})


def worst_case_return(env_cfg: DotReacherConfig) -> float:
    """Lower bound on an episode return; used to shift scores positive."""
    return -env_cfg.max_steps * math.sqrt(2.0)
