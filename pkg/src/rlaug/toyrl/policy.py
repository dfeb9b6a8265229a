"""Tiny deterministic-actor critic pair with hand-rolled backprop.

Encoder: 4x average-pool of the 84x84 frame to 21x21, flatten, subtract
0.5. Actor: two tanh layers of 128 then a tanh head in [-1, 1]^2. Critic:
the same trunk on (features, action) with a scalar head. All smooth, so
finite differences can certify the gradients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidValue
from ..rng import Rng
from . import STREAM_INIT
from .env import BACKGROUND_LEVEL

FRAME = 84
POOL = 4
FEAT = 3 * (FRAME // POOL) ** 2  # 1323
HIDDEN = 128
ACT_DIM = 2


def encode(frames_u8: np.ndarray, dtype=np.float32) -> np.ndarray:
    """(B, 3, 84, 84) uint8 -> (B, 1323) pooled features, background at zero.

    Pools by exact integer block sums before any float math, so the features
    are a deterministic function of the bytes. Centering on the environment's
    gray level makes plain-background cells exactly zero: features stay
    sparse, and zero-filled augmentation artifacts show up as distinctly
    negative cells.
    """
    b = frames_u8.shape[0]
    k = FRAME // POOL
    a16 = frames_u8.astype(np.uint16)
    cols = a16[..., 0::POOL]
    for j in range(1, POOL):
        cols = cols + a16[..., j::POOL]
    sums = cols[..., 0::POOL, :]
    for j in range(1, POOL):
        sums = sums + cols[..., j::POOL, :]
    pooled = sums.reshape(b, 3 * k * k).astype(dtype)
    scale = dtype(2.0 / (POOL * POOL * 255.0))
    center = dtype(POOL * POOL * BACKGROUND_LEVEL) * scale
    return pooled * scale - center


def _init_layer(rng: Rng, fan_in: int, fan_out: int, dtype) -> tuple[np.ndarray, np.ndarray]:
    scale = (1.0 / fan_in) ** 0.5
    w = (rng.unit(fan_in * fan_out) * 2.0 - 1.0) * scale
    return w.reshape(fan_in, fan_out).astype(dtype), np.zeros(fan_out, dtype=dtype)


class Mlp:
    """Three layers; tanh on the hiddens, optional tanh on the head.

    A squashed head keeps its pre-activation in the cache so callers can
    regularize it (saturated heads kill the policy gradient for good).
    """

    def __init__(self, sizes, rng: Rng, dtype=np.float32, squash_head=False, head_scale=1.0):
        self.sizes = tuple(sizes)
        self.squash_head = squash_head
        self.params = {}
        for i in range(3):
            w, b = _init_layer(rng, self.sizes[i], self.sizes[i + 1], dtype)
            if i == 2 and head_scale != 1.0:
                w *= dtype(head_scale)
            self.params[f"w{i}"] = w
            self.params[f"b{i}"] = b

    def forward(self, x: np.ndarray):
        p = self.params
        h1 = np.tanh(x @ p["w0"] + p["b0"])
        h2 = np.tanh(h1 @ p["w1"] + p["b1"])
        pre = h2 @ p["w2"] + p["b2"]
        out = np.tanh(pre) if self.squash_head else pre
        return out, (x, h1, h2, pre, out)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def backward(self, cache, dout: np.ndarray, dpre_extra: np.ndarray | None = None):
        """Returns (param grads, gradient w.r.t. the input).

        ``dpre_extra`` adds straight onto the head pre-activation gradient
        (used for pre-squash regularizers).
        """
        x, h1, h2, pre, out = cache
        p = self.params
        if self.squash_head:
            dpre = dout * (1.0 - out * out)
        else:
            dpre = dout
        if dpre_extra is not None:
            dpre = dpre + dpre_extra
        grads = {
            "w2": h2.T @ dpre,
            "b2": dpre.sum(axis=0),
        }
        dh2 = (dpre @ p["w2"].T) * (1.0 - h2 * h2)
        grads["w1"] = h1.T @ dh2
        grads["b1"] = dh2.sum(axis=0)
        dh1 = (dh2 @ p["w1"].T) * (1.0 - h1 * h1)
        grads["w0"] = x.T @ dh1
        grads["b0"] = dh1.sum(axis=0)
        dx = dh1 @ p["w0"].T
        return grads, dx

    def copy(self) -> "Mlp":
        twin = object.__new__(Mlp)
        twin.sizes = self.sizes
        twin.squash_head = self.squash_head
        twin.params = {k: v.copy() for k, v in self.params.items()}
        return twin

    def as_dtype(self, dtype) -> "Mlp":
        twin = self.copy()
        twin.params = {k: v.astype(dtype) for k, v in twin.params.items()}
        return twin


class Adam:
    def __init__(self, params: dict, lr: float):
        self.lr = lr
        self.beta1, self.beta2, self.eps = 0.9, 0.999, 1e-8
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self._scratch = {k: np.empty_like(v) for k, v in params.items()}

    def step(self, params: dict, grads: dict):
        self.t += 1
        alpha = self.lr * (1.0 - self.beta2**self.t) ** 0.5 / (1.0 - self.beta1**self.t)
        for k, g in grads.items():
            m, v, tmp = self.m[k], self.v[k], self._scratch[k]
            np.multiply(g, 1.0 - self.beta1, out=tmp)
            m *= self.beta1
            m += tmp
            np.multiply(g, g, out=tmp)
            tmp *= 1.0 - self.beta2
            v *= self.beta2
            v += tmp
            np.sqrt(v, out=tmp)
            tmp += self.eps
            np.divide(m, tmp, out=tmp)
            tmp *= alpha
            params[k] -= tmp


class CriticNet:
    """Q-network; the action joins at the second layer, next to a compact
    state code, which makes the action-value interaction learnable quickly."""

    def __init__(self, rng: Rng, dtype=np.float32):
        self.params = {}
        for name, (fi, fo) in {
            "w0": (FEAT, HIDDEN),
            "w1": (HIDDEN + ACT_DIM, HIDDEN),
            "w2": (HIDDEN, 1),
        }.items():
            w, b = _init_layer(rng, fi, fo, dtype)
            self.params[name] = w
            self.params[name.replace("w", "b")] = b

    def forward(self, z: np.ndarray, actions: np.ndarray):
        p = self.params
        a = actions.astype(z.dtype)
        h1 = np.tanh(z @ p["w0"] + p["b0"])
        x2 = np.concatenate([h1, a], axis=1)
        h2 = np.tanh(x2 @ p["w1"] + p["b1"])
        q = h2 @ p["w2"] + p["b2"]
        return q[:, 0], (z, a, h1, x2, h2)

    def __call__(self, z: np.ndarray, actions: np.ndarray) -> np.ndarray:
        return self.forward(z, actions)[0]

    def backward(self, cache, dq: np.ndarray):
        """dq is (B,); returns (param grads, dQ/daction)."""
        z, a, h1, x2, h2 = cache
        p = self.params
        d2 = dq[:, None].astype(z.dtype)
        grads = {"w2": h2.T @ d2, "b2": d2.sum(axis=0)}
        dx2 = (d2 @ p["w2"].T) * (1.0 - h2 * h2)
        grads["w1"] = x2.T @ dx2
        grads["b1"] = dx2.sum(axis=0)
        da = dx2 @ p["w1"][HIDDEN:, :].T
        dh1 = (dx2 @ p["w1"][:HIDDEN, :].T) * (1.0 - h1 * h1)
        grads["w0"] = z.T @ dh1
        grads["b0"] = dh1.sum(axis=0)
        return grads, da

    def copy(self) -> "CriticNet":
        twin = object.__new__(CriticNet)
        twin.params = {k: v.copy() for k, v in self.params.items()}
        return twin

    def as_dtype(self, dtype) -> "CriticNet":
        twin = self.copy()
        twin.params = {k: v.astype(dtype) for k, v in twin.params.items()}
        return twin


class TinyPolicy:
    """Actor, critic, and their target copies, plus the optimizers."""

    PRE_PENALTY = 1e-3  # keeps the actor head out of tanh saturation

    def __init__(self, seed: int, lr: float = 1e-4, actor_lr: float | None = None, dtype=np.float32):
        rng = Rng(seed, STREAM_INIT)
        self.actor = Mlp((FEAT, HIDDEN, HIDDEN, ACT_DIM), rng, dtype, squash_head=True, head_scale=0.1)
        self.critic = CriticNet(rng, dtype)
        self.actor_target = self.actor.copy()
        self.critic_target = self.critic.copy()
        self.actor_opt = Adam(self.actor.params, actor_lr if actor_lr is not None else lr)
        self.critic_opt = Adam(self.critic.params, lr)

    # -- acting ------------------------------------------------------------

    def act(self, frames_u8: np.ndarray) -> np.ndarray:
        return self.actor(encode(frames_u8))

    def act_features(self, z: np.ndarray) -> np.ndarray:
        return self.actor(z)

    # -- updates -----------------------------------------------------------

    def critic_update(self, z: np.ndarray, actions: np.ndarray, targets: np.ndarray) -> float:
        q, cache = self.critic.forward(z, actions)
        err = q - targets
        loss = float(np.mean(err**2))
        dq = (2.0 / len(err)) * err
        grads, _ = self.critic.backward(cache, dq)
        self.critic_opt.step(self.critic.params, grads)
        return loss

    def actor_update(self, z: np.ndarray) -> float:
        mu, actor_cache = self.actor.forward(z)
        q, critic_cache = self.critic.forward(z, mu)
        pre = actor_cache[3]
        loss = float(-np.mean(q) + self.PRE_PENALTY * np.mean(pre * pre))
        dq = np.full(len(q), -1.0 / len(q), dtype=z.dtype)
        _, dmu = self.critic.backward(critic_cache, dq)
        dpre_extra = (2.0 * self.PRE_PENALTY / pre.size) * pre
        grads, _ = self.actor.backward(actor_cache, dmu, dpre_extra=dpre_extra)
        self.actor_opt.step(self.actor.params, grads)
        return loss

    def target_q(self, z_next: np.ndarray) -> np.ndarray:
        a_next = self.actor_target(z_next)
        return self.critic_target(z_next, a_next)

    def soft_update_targets(self, tau: float):
        for net, tgt in ((self.actor, self.actor_target), (self.critic, self.critic_target)):
            for k in net.params:
                tgt.params[k] *= 1.0 - tau
                tgt.params[k] += tau * net.params[k]

    # -- persistence ---------------------------------------------------------

    def save(self, path):
        blobs = {}
        for name, net in (("actor", self.actor), ("critic", self.critic),
                          ("actor_target", self.actor_target), ("critic_target", self.critic_target)):
            for k, v in net.params.items():
                blobs[f"{name}.{k}"] = v
        np.savez(path, **blobs)

    @classmethod
    def load(cls, path) -> "TinyPolicy":
        pol = cls(seed=0)
        data = np.load(path)
        for name, net in (("actor", pol.actor), ("critic", pol.critic),
                          ("actor_target", pol.actor_target), ("critic_target", pol.critic_target)):
            for k in net.params:
                net.params[k] = data[f"{name}.{k}"].copy()
        return pol


# ---------------------------------------------------------------------------
# finite-difference certification


def _critic_loss_f64(critic: CriticNet, z, a, y):
    q, _ = critic.forward(z, a)
    return float(np.mean((q - y) ** 2))


def _actor_loss_f64(actor: Mlp, critic: CriticNet, z, penalty: float):
    mu, cache = actor.forward(z)
    q, _ = critic.forward(z, mu)
    pre = cache[3]
    return float(-np.mean(q) + penalty * np.mean(pre * pre))


def _fd_check(loss_fn, params: dict, analytic: dict, rng: Rng, eps: float, samples_per_block: int) -> float:
    worst = 0.0
    for key in sorted(params):
        flat = params[key].reshape(-1)
        ga = analytic[key].reshape(-1)
        idx = [rng.below(flat.size) for _ in range(min(samples_per_block, flat.size))]
        scale = max(float(np.max(np.abs(ga[idx]))), 1e-12)
        for i in idx:
            keep = flat[i]
            flat[i] = keep + eps
            hi = loss_fn()
            flat[i] = keep - eps
            lo = loss_fn()
            flat[i] = keep
            fd = (hi - lo) / (2.0 * eps)
            scale_i = max(scale, abs(fd), 1e-12)
            worst = max(worst, abs(fd - ga[i]) / scale_i)
    return worst


def grad_check(policy: TinyPolicy, frames_u8: np.ndarray, rng: Rng, eps: float = 1e-3, samples_per_block: int = 8) -> float:
    """Max relative error of analytic vs central-difference gradients.

    Runs on float64 shadow copies of the parameters; errors are measured
    relative to each block's largest sampled gradient magnitude.
    """
    if frames_u8.shape[0] > 4:
        raise InvalidValue("grad_check expects a small batch (at most 4 frames)")
    z = encode(frames_u8, dtype=np.float64)
    actor = policy.actor.as_dtype(np.float64)
    critic = policy.critic.as_dtype(np.float64)

    actions = np.clip(rng.normal(z.shape[0] * ACT_DIM).reshape(-1, ACT_DIM), -1.0, 1.0)
    targets = rng.normal(z.shape[0])

    q, cache = critic.forward(z, actions)
    dq = (2.0 / len(targets)) * (q - targets)
    critic_grads, _ = critic.backward(cache, dq)
    worst = _fd_check(
        lambda: _critic_loss_f64(critic, z, actions, targets),
        critic.params,
        critic_grads,
        rng,
        eps,
        samples_per_block,
    )

    penalty = TinyPolicy.PRE_PENALTY
    mu, actor_cache = actor.forward(z)
    q2, critic_cache = critic.forward(z, mu)
    dq2 = np.full(len(q2), -1.0 / len(q2))
    _, dmu = critic.backward(critic_cache, dq2)
    pre = actor_cache[3]
    dpre_extra = (2.0 * penalty / pre.size) * pre
    actor_grads, _ = actor.backward(actor_cache, dmu, dpre_extra=dpre_extra)
    worst = max(
        worst,
        _fd_check(
            lambda: _actor_loss_f64(actor, critic, z, penalty),
            actor.params,
            actor_grads,
            rng,
            eps,
            samples_per_block,
        ),
    )
    return worst
