import sys, json, time
sys.path.insert(0, 'src')
from rlaug.toyrl import TrainRun, train
from rlaug.transforms import TransformSpec, PAD_CROP, RAND_PAD_RESIZE
from rlaug.fusion import default_cycaug

arm, seed = sys.argv[1], int(sys.argv[2])
augs = {
    "none": None,
    "pad_crop4": TransformSpec(PAD_CROP, 4, 4),
    "rand_pr": TransformSpec(RAND_PAD_RESIZE, 0, 16),
    "cycaug": default_cycaug(interval=500),
}
t0 = time.perf_counter()
run = TrainRun(seed=seed, total_env_steps=30_000, warmup_steps=1_000, update_every=4,
               batch_size=32, eval_every=5_000, eval_episodes=10,
               stddev_end=0.2, stddev_fraction=1.0, lr=1e-3, actor_lr=3e-4,
               augmentation=augs[arm])
res = train(run)
res.policy.save(f"tmp/pol_{arm}_seed{seed}.npz")
print(json.dumps({"arm": arm, "seed": seed, "t": round(time.perf_counter()-t0,1),
                  "curve": [(s, round(r.mean,2)) for s, r in res.run.curve]}), flush=True)
