import sys, json
sys.path.insert(0, 'src')
import numpy as np
from rlaug.toyrl import TrainRun, train, DotReacherConfig, evaluate, worst_case_return
from rlaug.transforms import TransformSpec, TRANSLATE_HD, PAD_CROP, RAND_PAD_RESIZE
from rlaug.metrics import ReturnSample, hardness, strength_hardness_curve

seed = int(sys.argv[1]); steps = int(sys.argv[2]); margin = float(sys.argv[3])
cfg = DotReacherConfig(spawn_margin=margin)
run = TrainRun(seed=seed, total_env_steps=steps, warmup_steps=1_000, update_every=4,
               batch_size=32, eval_every=steps, eval_episodes=10,
               stddev_end=0.2, stddev_fraction=1.0, lr=1e-3, actor_lr=3e-4, env=cfg)
res = train(run)
pol = res.policy
pol.save(f"tmp/hard2_s{seed}.npz")
offset = -worst_case_return(cfg)
def ev(spec):
    s = evaluate(pol, cfg, 20, transform=spec, seed=seed)
    return ReturnSample(tuple(v + offset for v in s.episode_returns))
curve = strength_hardness_curve(ev, TRANSLATE_HD, [0, 2, 4, 8, 12])
clean = ev(None)
pc = hardness(clean, ev(TransformSpec(PAD_CROP, 4, 4)))
pr_zero = hardness(clean, ev(TransformSpec(RAND_PAD_RESIZE, 16, 16)))
pr_repl = hardness(clean, ev(TransformSpec(RAND_PAD_RESIZE, 16, 16, padding_mode="replicate")))
print(json.dumps({
    "seed": seed, "clean": round(clean.mean - offset, 2),
    "ratios": [round(r,4) for r in curve.ratios],
    "pearson": None if curve.pearson is None else round(curve.pearson, 3),
    "pc": round(pc.ratio,4), "pr_zero": round(pr_zero.ratio,4), "pr_repl": round(pr_repl.ratio,4),
}), flush=True)
