import numpy as np
import pytest

from rlaug.batch import ImageBatch, load_raw, save_raw
from rlaug.cli import main, read_curves_csv
from rlaug.config import (
    augmentation_from_node,
    schedule_from_dict,
    spec_from_dict,
    train_runs_from_dict,
)
from rlaug.errors import ConfigError
from rlaug.fusion import CYCLE
from rlaug import transforms as tr


def make_arlt(tmp_path, name="in.arlt", shape=(3, 3, 16, 16), seed=0):
    data = np.random.default_rng(seed).integers(0, 256, shape, dtype=np.uint8)
    p = tmp_path / name
    save_raw(ImageBatch(data), p)
    return p, data


# ---------------------------------------------------------------------------
# config parsing


def test_spec_from_dict_shorthand():
    spec = spec_from_dict({"kind": "rand_pad_resize", "strength": [0, 16]})
    assert (spec.strength_min, spec.strength_max) == (0, 16)
    spec = spec_from_dict({"kind": "pad_crop", "strength": 4})
    assert (spec.strength_min, spec.strength_max) == (4, 4)
    assert spec.padding_mode == "replicate"


def test_spec_from_dict_rejects_unknown_key():
    with pytest.raises(ConfigError, match="strenght"):
        spec_from_dict({"kind": "pad_crop", "strenght": 4})


def test_spec_from_dict_rejects_unknown_kind():
    with pytest.raises(ConfigError):
        spec_from_dict({"kind": "zoom"})


def test_spec_from_dict_presamples_hd():
    spec = spec_from_dict(
        {"kind": "translate_hd", "strength": 4, "spatial_diversity": 3}
    )
    assert spec.param_sets is not None and len(spec.param_sets) == 3


def test_schedule_from_dict():
    sched = schedule_from_dict(
        {
            "scheme": "cycle",
            "interval": 500,
            "ops": [
                {"kind": "pad_crop", "strength": 4},
                {"kind": "rand_pad_resize", "strength": [0, 16]},
            ],
        }
    )
    assert sched.scheme == CYCLE
    assert sched.interval == 500
    assert [op.kind for op in sched.ops] == [tr.PAD_CROP, tr.RAND_PAD_RESIZE]


def test_augmentation_none():
    assert augmentation_from_node(None) is None
    assert augmentation_from_node("none") is None


def test_train_runs_from_dict_multi_seed():
    runs = train_runs_from_dict({"seeds": [1, 2], "total_env_steps": 500})
    assert [r.seed for r in runs] == [1, 2]
    assert all(r.total_env_steps == 500 for r in runs)


def test_train_config_rejects_unknown_key():
    with pytest.raises(ConfigError, match="total_env_stepz"):
        train_runs_from_dict({"total_env_stepz": 500})


# ---------------------------------------------------------------------------
# augment command


def test_augment_identity_pad0(tmp_path):
    src, data = make_arlt(tmp_path)
    out = tmp_path / "out.arlt"
    rc = main(["augment", str(src), str(out), "--op", "pad_crop", "--strength", "0", "--seed", "5"])
    assert rc == 0
    assert out.read_bytes() == src.read_bytes()


def test_augment_deterministic(tmp_path):
    src, _ = make_arlt(tmp_path)
    a, b = tmp_path / "a.arlt", tmp_path / "b.arlt"
    assert main(["augment", str(src), str(a), "--op", "rand_pad_resize", "--strength", "0,16", "--seed", "7"]) == 0
    assert main(["augment", str(src), str(b), "--op", "rand_pad_resize", "--strength", "0,16", "--seed", "7"]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.arlt"
    assert main(["augment", str(src), str(c), "--op", "rand_pad_resize", "--strength", "0,16", "--seed", "8"]) == 0
    assert c.read_bytes() != a.read_bytes()


def test_augment_shape_preserved(tmp_path):
    src, data = make_arlt(tmp_path)
    out = tmp_path / "out.arlt"
    assert main(["augment", str(src), str(out), "--op", "rand_pad_resize", "--strength", "0,16", "--seed", "1"]) == 0
    assert load_raw(out).shape == data.shape


def test_augment_with_schedule_config(tmp_path):
    src, _ = make_arlt(tmp_path)
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(
        "augmentation:\n"
        "  scheme: cycle\n"
        "  interval: 10\n"
        "  ops:\n"
        "    - {kind: pad_crop, strength: 2}\n"
        "    - {kind: cutout, strength: 4}\n"
        "seed: 3\n"
    )
    out = tmp_path / "out.arlt"
    assert main(["augment", str(src), str(out), "--config", str(cfg)]) == 0
    assert load_raw(out).shape == (3, 3, 16, 16)


def test_augment_bad_config_exits_2(tmp_path):
    src, _ = make_arlt(tmp_path)
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("augmentation: {kind: pad_crop, strengt: 2}\n")
    rc = main(["augment", str(src), str(tmp_path / "o.arlt"), "--config", str(cfg)])
    assert rc == 2


def test_augment_runtime_error_exits_1(tmp_path):
    rc = main(["augment", str(tmp_path / "missing.arlt"), str(tmp_path / "o.arlt"), "--op", "pad_crop", "--strength", "0"])
    assert rc == 1


def test_augment_png_roundtrip(tmp_path):
    from rlaug.batch import save_png

    data = np.random.default_rng(3).integers(0, 256, (1, 3, 12, 12), dtype=np.uint8)
    src = tmp_path / "in.png"
    save_png(ImageBatch(data), src)
    out = tmp_path / "out.png"
    assert main(["augment", str(src), str(out), "--op", "cutout", "--strength", "4", "--seed", "2"]) == 0
    from rlaug.batch import load_png

    assert load_png(out).shape == (1, 3, 12, 12)


# ---------------------------------------------------------------------------
# train / eval / compare


TRAIN_CFG = """
seeds: [0, 1]
total_env_steps: 400
warmup_steps: 100
update_every: 4
batch_size: 8
replay_capacity: 512
eval_every: 200
eval_episodes: 2
env: {max_steps: 15}
augmentation: none
"""


def test_train_dry_run_writes_nothing(tmp_path, capsys):
    cfg = tmp_path / "t.yaml"
    cfg.write_text(TRAIN_CFG)
    out = tmp_path / "run"
    rc = main(["train", "--config", str(cfg), "--out", str(out), "--dry-run"])
    assert rc == 0
    assert not out.exists()
    echoed = capsys.readouterr().out
    assert "total_env_steps: 400" in echoed
    assert "seeds:" in echoed


def test_train_writes_curves_and_policies(tmp_path):
    cfg = tmp_path / "t.yaml"
    cfg.write_text(TRAIN_CFG)
    out = tmp_path / "run"
    assert main(["train", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "config.yaml").exists()
    assert (out / "policy_seed0.npz").exists()
    assert (out / "policy_seed1.npz").exists()
    curves = read_curves_csv(out / "curves.csv")
    assert sorted(curves) == [0, 1]
    assert [s for s, _, _ in curves[0]] == [200, 400]
    header = (out / "curves.csv").read_text().split("\n")[0]
    assert header == "step,seed,return_mean,return_iqm"


def test_train_determinism_bytewise(tmp_path):
    cfg = tmp_path / "t.yaml"
    cfg.write_text(TRAIN_CFG)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["train", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["train", "--config", str(cfg), "--out", str(b)]) == 0
    assert (a / "curves.csv").read_bytes() == (b / "curves.csv").read_bytes()


def test_train_parallel_seeds_same_output(tmp_path):
    cfg = tmp_path / "t.yaml"
    cfg.write_text(TRAIN_CFG)
    a, b = tmp_path / "serial", tmp_path / "parallel"
    assert main(["train", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["train", "--config", str(cfg), "--out", str(b), "--parallel-seeds", "2"]) == 0
    assert (a / "curves.csv").read_bytes() == (b / "curves.csv").read_bytes()


def test_train_bad_key_exits_2(tmp_path):
    cfg = tmp_path / "t.yaml"
    cfg.write_text("seeds: [0]\nbatch_syze: 8\n")
    assert main(["train", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 2


def test_eval_and_compare(tmp_path):
    cfg = tmp_path / "t.yaml"
    cfg.write_text(TRAIN_CFG)
    out = tmp_path / "runA"
    assert main(["train", "--config", str(cfg), "--out", str(out)]) == 0

    ev = tmp_path / "eval.csv"
    rc = main(["eval", "--policy", str(out / "policy_seed0.npz"), "--out", str(ev), "--seed", "3"])
    assert rc == 0
    text = ev.read_text()
    assert text.startswith("episode,return")
    assert "# mean=" in text and "# iqm=" in text

    cmp_dir = tmp_path / "cmp"
    rc = main(["compare", str(out), str(out), "--out", str(cmp_dir)])
    assert rc == 0
    csv_text = (cmp_dir / "compare.csv").read_text()
    lines = csv_text.strip().split("\n")
    assert lines[0] == "method,final_step,n_seeds,iqm,median,mean"
    # comparing a run with itself gives identical rows
    assert lines[1].split(",")[1:] == lines[2].split(",")[1:]
    assert (cmp_dir / "compare.txt").exists()


def test_sweep_hardness_missing_policy_guidance(tmp_path, capsys):
    rc = main([
        "sweep-hardness", "--op", "translate_hd", "--strengths", "0,2,4",
        "--seeds", "0", "--policy-dir", str(tmp_path), "--out", str(tmp_path / "h.csv"),
    ])
    assert rc == 1
    assert "rlaug train" in capsys.readouterr().err


def test_sweeps_on_trained_policy(tmp_path):
    cfg = tmp_path / "t.yaml"
    cfg.write_text(TRAIN_CFG.replace("seeds: [0, 1]", "seeds: [0]"))
    out = tmp_path / "base"
    assert main(["train", "--config", str(cfg), "--out", str(out)]) == 0

    hard_csv = tmp_path / "hardness.csv"
    rc = main([
        "sweep-hardness", "--op", "translate_hd", "--strengths", "0,2,4",
        "--seeds", "0", "--policy-dir", str(out), "--out", str(hard_csv),
    ])
    assert rc == 0
    lines = hard_csv.read_text().strip().split("\n")
    assert lines[0] == "strength,hardness_ratio,clean_mean,aug_mean,n_episodes,seed"
    assert lines[1].startswith("0,1.0,")  # zero strength is exactly ratio 1
    assert lines[-1].startswith("# pearson_r=")

    div_cfg = tmp_path / "div.yaml"
    div_cfg.write_text(
        f"op: translate_hd\nstrength: 2\ndiversities: [1, 2, 4]\nseeds: [0]\n"
        f"policy_dir: {out}\nepisodes: 3\n"
    )
    div_csv = tmp_path / "div.csv"
    assert main(["sweep-diversity", "--config", str(div_cfg), "--out", str(div_csv)]) == 0
    lines = div_csv.read_text().strip().split("\n")
    assert lines[0] == "diversity,hardness_ratio,clean_mean,aug_mean,n_episodes,seed"
    assert len(lines) == 4


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip()
