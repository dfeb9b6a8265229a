"""Command-line entry point.

Subcommands: augment, sweep-hardness, sweep-diversity, train, eval, compare.
Exit codes: 0 success, 1 runtime error, 2 configuration error. Every
command is deterministic given its flags, config file, and seed; commands
with an output directory echo the fully resolved config there.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .batch import load_png, load_raw, save_png, save_raw
from .config import (
    augmentation_from_node,
    dump_config,
    env_from_dict,
    load_config,
    train_node_echo,
    train_runs_from_dict,
)
from .errors import ConfigError, RlaugError
from .fusion import FusionSchedule
from .metrics import ReturnSample, format_hardness_csv, hardness, iqm, pearson_r
from .rng import Rng
from .toyrl import TinyPolicy, TrainRun, evaluate, train, worst_case_return
from .transforms import TransformSpec, UNLIMITED, presample_param_sets

AUGMENT_STREAM = 0  # the rng stream cmd_augment draws from; bindings rely on it

CURVE_HEADER = "step,seed,return_mean,return_iqm"


def _load_batch(path: Path):
    if path.suffix.lower() == ".png":
        return load_png(path), "png"
    return load_raw(path), "arlt"


def _save_batch(batch, path: Path, kind: str):
    if kind == "png":
        save_png(batch, path)
    else:
        save_raw(batch, path)


def cmd_augment(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    node = cfg.get("augmentation")
    if args.op:
        node = {"kind": args.op}
        if args.strength is not None:
            node["strength"] = _parse_strength(args.strength)
        if args.padding_mode:
            node["padding_mode"] = args.padding_mode
        if args.spatial_diversity:
            node["spatial_diversity"] = (
                UNLIMITED if args.spatial_diversity == UNLIMITED else int(args.spatial_diversity)
            )
    if node is None:
        raise ConfigError("augment needs --op or a config with an 'augmentation' entry")
    aug = augmentation_from_node(node)
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    batch, kind = _load_batch(Path(args.input))
    rng = Rng(seed, AUGMENT_STREAM)
    if aug is None:
        out = batch
    elif isinstance(aug, FusionSchedule):
        out = aug.apply(batch, rng)
    else:
        from .transforms import apply_transform

        out = apply_transform(batch, aug, rng)
    _save_batch(out, Path(args.output), kind)
    return 0


def _parse_strength(text: str):
    if "," in text:
        lo, hi = text.split(",", 1)
        return [int(lo), int(hi)]
    return int(text)


def _policy_path(policy_dir: Path, seed: int) -> Path:
    return policy_dir / f"policy_seed{seed}.npz"


def _shifted_evaluator(policy, env_cfg, episodes: int, eval_seed: int):
    """ReturnSamples shifted by the worst-case bound so means stay positive.

    Hardness sweeps hold one augmentation draw per episode so the ratio
    measures distribution shift, not frame-to-frame jitter.
    """
    offset = -worst_case_return(env_cfg)

    def evaluator(spec):
        sample = evaluate(
            policy, env_cfg, episodes, transform=spec, seed=eval_seed, redraw="episode"
        )
        shifted = tuple(v + offset for v in sample.episode_returns)
        return ReturnSample(shifted, context=dict(sample.context, score_offset=offset))

    return evaluator


def _sweep_setup(cfg):
    """Shared setup of sweep-hardness and sweep-diversity."""
    env_cfg = env_from_dict(cfg.get("env", {}), "env")
    episodes = int(cfg.get("episodes", 20))
    seeds = cfg.get("seeds", [0])
    if isinstance(seeds, int):
        seeds = [seeds]
    policy_dir = Path(cfg.get("policy_dir", "."))
    kind = cfg.get("op")
    if kind is None:
        raise ConfigError(f"sweep needs 'op' in the config (got keys {sorted(cfg)})")
    missing = [s for s in seeds if not _policy_path(policy_dir, s).exists()]
    if missing:
        raise RlaugError(
            f"no trained policy for seeds {missing} under {policy_dir}; "
            f"run `rlaug train` with augmentation: none first"
        )
    return env_cfg, episodes, seeds, policy_dir, kind


def cmd_sweep_hardness(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    if args.strengths:
        cfg["strengths"] = [int(s) for s in args.strengths.split(",")]
    if args.policy_dir:
        cfg["policy_dir"] = args.policy_dir
    if args.op:
        cfg["op"] = args.op
    if args.seeds:
        cfg["seeds"] = [int(s) for s in args.seeds.split(",")]
    allowed = {"op", "strengths", "seeds", "policy_dir", "episodes", "env", "seed"}
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(f"sweep-hardness: unknown key {unknown[0]!r}")
    env_cfg, episodes, seeds, policy_dir, kind = _sweep_rows(cfg, args, "strengths")
    strengths = cfg.get("strengths")
    if not strengths:
        raise ConfigError("sweep-hardness needs 'strengths'")

    from .metrics import strength_hardness_curve

    rows = []
    pooled_pts = []
    for seed in seeds:
        policy = TinyPolicy.load(_policy_path(policy_dir, seed))
        evaluator = _shifted_evaluator(policy, env_cfg, episodes, seed)
        curve = strength_hardness_curve(evaluator, kind, strengths)
        for s, rep in curve.points:
            rows.append((s, rep, seed))
            if not rep.degenerate:
                pooled_pts.append((s, rep.ratio))
    pooled = None
    if len(pooled_pts) >= 2:
        pooled = pearson_r([p[0] for p in pooled_pts], [p[1] for p in pooled_pts])
    text = format_hardness_csv(rows, pooled)
    _write_with_echo(args.out, text, {"sweep_hardness": cfg})
    return 0


def cmd_sweep_diversity(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    if args.op:
        cfg["op"] = args.op
    if args.policy_dir:
        cfg["policy_dir"] = args.policy_dir
    if args.seeds:
        cfg["seeds"] = [int(s) for s in args.seeds.split(",")]
    allowed = {"op", "strength", "diversities", "seeds", "policy_dir", "episodes", "env", "seed"}
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(f"sweep-diversity: unknown key {unknown[0]!r}")
    env_cfg, episodes, seeds, policy_dir, kind = _sweep_rows(cfg, args, "diversities")
    strength = cfg.get("strength")
    diversities = cfg.get("diversities")
    if strength is None or not diversities:
        raise ConfigError("sweep-diversity needs 'strength' and 'diversities'")

    lines = ["diversity,hardness_ratio,clean_mean,aug_mean,n_episodes,seed"]
    for seed in seeds:
        policy = TinyPolicy.load(_policy_path(policy_dir, seed))
        evaluator = _shifted_evaluator(policy, env_cfg, episodes, seed)
        clean = evaluator(None)
        for j, d in enumerate(diversities):
            spec = TransformSpec(kind, int(strength), int(strength), spatial_diversity=int(d))
            spec = presample_param_sets(spec, Rng(int(cfg.get("seed", 0)), stream=9, epoch=j))
            rep = hardness(clean, evaluator(spec))
            ratio = "inf" if rep.degenerate else repr(rep.ratio)
            lines.append(f"{d},{ratio},{rep.clean_mean!r},{rep.aug_mean!r},{rep.augmented.n},{seed}")
    _write_with_echo(args.out, "\n".join(lines) + "\n", {"sweep_diversity": cfg})
    return 0


def _write_with_echo(out, text: str, resolved: dict):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    path.with_suffix(path.suffix + ".config.yaml").write_text(dump_config(resolved))


def _train_one(run: TrainRun, out_dir: str) -> tuple[int, list]:
    result = train(run)
    result.policy.save(_policy_path(Path(out_dir), run.seed))
    return run.seed, [(step, sample.episode_returns) for step, sample in result.run.curve]


def format_curves_csv(per_seed: dict) -> str:
    lines = [CURVE_HEADER]
    for seed in sorted(per_seed):
        for step, returns in per_seed[seed]:
            mean = float(np.mean(returns))
            lines.append(f"{step},{seed},{mean!r},{iqm(returns)!r}")
    return "\n".join(lines) + "\n"


def cmd_train(args) -> int:
    if not args.config:
        raise ConfigError("train needs --config")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg["seeds"] = [args.seed]
    runs = train_runs_from_dict(cfg)
    echo = train_node_echo(cfg)
    if args.dry_run:
        sys.stdout.write(dump_config(echo))
        return 0
    if not args.out:
        raise ConfigError("train needs --out")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.yaml").write_text(dump_config(echo))
    per_seed = {}
    workers = max(1, args.parallel_seeds)
    if workers == 1 or len(runs) == 1:
        results = [_train_one(run, str(out_dir)) for run in runs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_train_one, runs, [str(out_dir)] * len(runs)))
    for seed, curve in results:
        per_seed[seed] = curve
    (out_dir / "curves.csv").write_text(format_curves_csv(per_seed))
    return 0


def cmd_eval(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    policy_path = args.policy or cfg.get("policy")
    if not policy_path:
        raise ConfigError("eval needs --policy or a config 'policy' entry")
    env_cfg = env_from_dict(cfg.get("env", {}), "env")
    episodes = int(cfg.get("episodes", 20))
    transform = augmentation_from_node(cfg.get("transform"), "transform")
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    policy = TinyPolicy.load(policy_path)
    sample = evaluate(policy, env_cfg, episodes, transform=transform, seed=seed)
    lines = ["episode,return"]
    for i, v in enumerate(sample.episode_returns):
        lines.append(f"{i},{v!r}")
    lines.append(f"# mean={sample.mean!r}")
    lines.append(f"# iqm={iqm(sample.episode_returns)!r}")
    _write_with_echo(args.out, "\n".join(lines) + "\n", {"eval": {"policy": str(policy_path), "seed": seed}})
    return 0


def read_curves_csv(path: Path) -> dict:
    per_seed = {}
    for line in path.read_text().strip().split("\n")[1:]:
        if line.startswith("#"):
            continue
        step, seed, mean, ret_iqm = line.split(",")
        per_seed.setdefault(int(seed), []).append((int(step), float(mean), float(ret_iqm)))
    return per_seed


def cmd_compare(args) -> int:
    table = []
    for run_dir in args.runs:
        path = Path(run_dir) / "curves.csv"
        if not path.exists():
            raise RlaugError(f"{path} not found; is {run_dir} a train output directory?")
        per_seed = read_curves_csv(path)
        finals = []
        final_step = 0
        for seed, rows in per_seed.items():
            step, mean, _ = max(rows, key=lambda r: r[0])
            finals.append(mean)
            final_step = max(final_step, step)
        table.append(
            {
                "method": Path(run_dir).name,
                "final_step": final_step,
                "n_seeds": len(per_seed),
                "iqm": iqm(finals),
                "median": float(np.median(finals)),
                "mean": float(np.mean(finals)),
            }
        )
    csv_lines = ["method,final_step,n_seeds,iqm,median,mean"]
    for row in table:
        csv_lines.append(
            f"{row['method']},{row['final_step']},{row['n_seeds']},"
            f"{row['iqm']!r},{row['median']!r},{row['mean']!r}"
        )
    csv_text = "\n".join(csv_lines) + "\n"

    widths = {k: max(len(k), max(len(_fmt(r[k])) for r in table)) for k in table[0]}
    txt_lines = ["  ".join(k.ljust(widths[k]) for k in widths)]
    for row in table:
        txt_lines.append("  ".join(_fmt(row[k]).ljust(widths[k]) for k in widths))
    txt = "\n".join(txt_lines) + "\n"

    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "compare.csv").write_text(csv_text)
        (out_dir / "compare.txt").write_text(txt)
    sys.stdout.write(txt)
    return 0


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rlaug", description="deterministic augmentation engine and toy RL bench")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--config", default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--parallel-seeds", type=int, default=1)
        sp.add_argument("--dry-run", action="store_true")

    sp = sub.add_parser("augment", help="augment an ARLT or PNG image batch")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.add_argument("--op", default=None)
    sp.add_argument("--strength", default=None, help="single value or min,max")
    sp.add_argument("--padding-mode", dest="padding_mode", default=None)
    sp.add_argument("--spatial-diversity", dest="spatial_diversity", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_augment)

    sp = sub.add_parser("sweep-hardness", help="hardness vs strength on trained policies")
    sp.add_argument("--op", default=None)
    sp.add_argument("--strengths", default=None, help="comma-separated")
    sp.add_argument("--seeds", default=None, help="comma-separated")
    sp.add_argument("--policy-dir", dest="policy_dir", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_sweep_hardness)

    sp = sub.add_parser("sweep-diversity", help="hardness vs spatial diversity on trained policies")
    sp.add_argument("--op", default=None)
    sp.add_argument("--seeds", default=None)
    sp.add_argument("--policy-dir", dest="policy_dir", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_sweep_diversity)

    sp = sub.add_parser("train", help="train the toy agent per config")
    common(sp)
    sp.set_defaults(fn=cmd_train)

    sp = sub.add_parser("eval", help="evaluate a saved policy")
    sp.add_argument("--policy", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("compare", help="IQM table across train output directories")
    sp.add_argument("runs", nargs="+")
    common(sp)
    sp.set_defaults(fn=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except RlaugError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
