"""Experiment configuration: strict YAML parsing and spec serialization.

Configs are nested key/value documents. Unknown keys are rejected so a
typo'd option can never silently fall back to a default. The resolved
config is echoed into every output directory.
"""

from __future__ import annotations

from dataclasses import asdict
from pathlib import Path

import yaml

from .errors import ConfigError
from .fusion import SCHEMES, FusionSchedule
from .toyrl import DotReacherConfig, TrainRun
from .transforms import KINDS, UNLIMITED, TransformSpec, presample_param_sets
from .rng import Rng

_SPEC_KEYS = {
    "kind", "strength_min", "strength_max", "strength",
    "spatial_diversity", "padding_mode", "per_image", "presample_seed",
}
_SCHEDULE_KEYS = {
    "scheme", "ops", "order_mode", "mix_width", "dirichlet_alpha", "interval",
}


def _require_mapping(node, where: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(node).__name__}")
    return node


def _reject_unknown(node: dict, allowed: set, where: str):
    unknown = sorted(set(node) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key {unknown[0]!r}")


def spec_from_dict(node: dict, where: str = "augmentation") -> TransformSpec:
    node = _require_mapping(node, where)
    _reject_unknown(node, _SPEC_KEYS, where)
    if "kind" not in node:
        raise ConfigError(f"{where}: missing 'kind'")
    kind = node["kind"]
    if kind not in KINDS:
        raise ConfigError(f"{where}: unknown operator {kind!r} (one of {', '.join(KINDS)})")
    if "strength" in node and ("strength_min" in node or "strength_max" in node):
        raise ConfigError(f"{where}: give either 'strength' or the min/max pair, not both")
    if "strength" in node:
        s = node["strength"]
        if isinstance(s, list):
            if len(s) != 2:
                raise ConfigError(f"{where}: 'strength' range needs exactly [min, max]")
            smin, smax = int(s[0]), int(s[1])
        else:
            smin = smax = int(s)
    else:
        smin = int(node.get("strength_min", 0))
        smax = int(node.get("strength_max", smin))
    d = node.get("spatial_diversity", UNLIMITED)
    if isinstance(d, str):
        if d != UNLIMITED:
            raise ConfigError(f"{where}: spatial_diversity must be an integer or '{UNLIMITED}'")
    else:
        d = int(d)
    spec = TransformSpec(
        kind=kind,
        strength_min=smin,
        strength_max=smax,
        spatial_diversity=d,
        padding_mode=node.get("padding_mode"),
        per_image=bool(node.get("per_image", True)),
    )
    if d != UNLIMITED and kind in ("pad_resize_hd", "crop_shift_hd", "translate_hd"):
        seed = int(node.get("presample_seed", 0))
        spec = presample_param_sets(spec, Rng(seed, stream=9))
    return spec


def spec_to_dict(spec: TransformSpec) -> dict:
    out = {
        "kind": spec.kind,
        "strength_min": spec.strength_min,
        "strength_max": spec.strength_max,
        "spatial_diversity": spec.spatial_diversity,
        "padding_mode": spec.padding_mode,
        "per_image": spec.per_image,
    }
    return out


def schedule_from_dict(node: dict, where: str = "augmentation") -> FusionSchedule:
    node = _require_mapping(node, where)
    _reject_unknown(node, _SCHEDULE_KEYS, where)
    scheme = node.get("scheme")
    if scheme not in SCHEMES:
        raise ConfigError(f"{where}: scheme must be one of {', '.join(SCHEMES)}, got {scheme!r}")
    ops_node = node.get("ops")
    if not isinstance(ops_node, list) or not ops_node:
        raise ConfigError(f"{where}: 'ops' must be a non-empty list")
    ops = tuple(spec_from_dict(op, f"{where}.ops[{i}]") for i, op in enumerate(ops_node))
    kwargs = {}
    for key in ("order_mode", "mix_width", "dirichlet_alpha", "interval"):
        if key in node:
            kwargs[key] = node[key]
    try:
        return FusionSchedule(scheme=scheme, ops=ops, **kwargs)
    except Exception as e:
        raise ConfigError(f"{where}: {e}") from e


def schedule_to_dict(schedule: FusionSchedule) -> dict:
    out = {"scheme": schedule.scheme, "ops": [spec_to_dict(op) for op in schedule.ops]}
    if schedule.scheme == "compose":
        out["order_mode"] = schedule.order_mode
    if schedule.scheme == "mix":
        out["mix_width"] = schedule.mix_width
        out["dirichlet_alpha"] = schedule.dirichlet_alpha
    if schedule.scheme == "cycle":
        out["interval"] = schedule.interval
    return out


def augmentation_from_node(node, where: str = "augmentation"):
    """none | operator spec | fusion schedule, by shape of the node."""
    if node is None or node == "none":
        return None
    node = _require_mapping(node, where)
    if "scheme" in node:
        return schedule_from_dict(node, where)
    return spec_from_dict(node, where)


def augmentation_to_node(aug):
    if aug is None:
        return None
    if isinstance(aug, FusionSchedule):
        return schedule_to_dict(aug)
    return spec_to_dict(aug)


_ENV_KEYS = {
    "size", "max_steps", "speed", "target_radius", "agent_px_radius",
    "target_px_radius", "spawn_margin", "min_spawn_distance",
    "max_spawn_distance", "background", "discount",
}
_TRAIN_KEYS = {
    "seeds", "total_env_steps", "batch_size", "replay_capacity", "augmentation",
    "eval_every", "eval_episodes", "update_every", "warmup_steps", "lr",
    "actor_lr", "n_step", "tau", "stddev_start", "stddev_end", "stddev_fraction",
    "shared_aug_params", "env",
}


def env_from_dict(node: dict, where: str = "env") -> DotReacherConfig:
    node = _require_mapping(node, where)
    _reject_unknown(node, _ENV_KEYS, where)
    defaults = DotReacherConfig()
    kwargs = {k: node.get(k, getattr(defaults, k)) for k in _ENV_KEYS}
    return DotReacherConfig(**kwargs)


def train_runs_from_dict(node: dict, where: str = "train") -> list[TrainRun]:
    """One TrainRun per seed; everything else shared."""
    node = _require_mapping(node, where)
    _reject_unknown(node, _TRAIN_KEYS, where)
    seeds = node.get("seeds", [0])
    if isinstance(seeds, int):
        seeds = [seeds]
    if not isinstance(seeds, list) or not seeds:
        raise ConfigError(f"{where}: 'seeds' must be a non-empty list of integers")
    aug = augmentation_from_node(node.get("augmentation"), f"{where}.augmentation")
    env = env_from_dict(node.get("env", {}), f"{where}.env")
    kwargs = {}
    for key in _TRAIN_KEYS - {"seeds", "augmentation", "env"}:
        if key in node:
            kwargs[key] = node[key]
    return [TrainRun(seed=int(s), augmentation=aug, env=env, **kwargs) for s in seeds]


def train_node_echo(node: dict) -> dict:
    """Fully resolved train config (defaults filled in) for provenance."""
    runs = train_runs_from_dict(node)
    run = runs[0]
    echo = asdict(run)
    echo.pop("curve")
    echo.pop("seed")
    echo["seeds"] = [r.seed for r in runs]
    echo["augmentation"] = augmentation_to_node(run.augmentation)
    return echo


def load_config(path) -> dict:
    text = Path(path).read_text()
    try:
        node = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML ({e})") from e
    if node is None:
        node = {}
    return _require_mapping(node, str(path))


def dump_config(node: dict) -> str:
    return yaml.safe_dump(node, sort_keys=True, default_flow_style=False)
