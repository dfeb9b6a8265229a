import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlaug.batch import (
    ImageBatch,
    float_to_u8,
    join_panorama,
    load_png,
    load_raw,
    new_batch,
    save_png,
    save_raw,
    split_panorama,
)
from rlaug.errors import FormatError, InvalidShape, InvalidValue


def test_new_batch_zero_fill():
    b = new_batch(1, 1, 2, 2, np.uint8, 0)
    assert b.data.tobytes() == b"\x00" * 4


def test_new_batch_constant_fill_size():
    b = new_batch(2, 3, 84, 84, np.uint8, 255)
    assert b.data.size == 42336
    assert (b.data == 255).all()


def test_new_batch_carla_shape():
    b = new_batch(1, 3, 84, 252, np.uint8, 0)
    assert b.shape == (1, 3, 84, 252)


@pytest.mark.parametrize("dims", [(0, 1, 2, 2), (1, 1, 0, 2), (1, 1, 2, 0)])
def test_new_batch_rejects_zero_dims(dims):
    with pytest.raises(InvalidShape):
        new_batch(*dims, np.uint8, 0)


def test_new_batch_rejects_out_of_range_fill():
    with pytest.raises(InvalidValue):
        new_batch(1, 1, 2, 2, np.uint8, 300)
    with pytest.raises(InvalidValue):
        new_batch(1, 1, 2, 2, np.float32, 1.5)


def test_float_range_enforced():
    with pytest.raises(InvalidValue):
        ImageBatch(np.full((1, 1, 2, 2), 2.0, dtype=np.float32))


def test_u8_f32_u8_roundtrip_identity():
    vals = np.arange(256, dtype=np.uint8).reshape(1, 1, 16, 16)
    b = ImageBatch(vals)
    assert np.array_equal(b.to_float32().to_uint8().data, vals)


def test_round_half_up():
    # 0.5/255 boundary: floor(x*255 + 0.5)
    a = np.array([[[[0.0, 0.001961, 0.002, 1.0]]]], dtype=np.float32)
    out = float_to_u8(a)
    assert out.ravel().tolist() == [0, 1, 1, 255]


def test_batches_are_frozen():
    b = new_batch(1, 1, 2, 2, np.uint8, 0)
    with pytest.raises(ValueError):
        b.data[0, 0, 0, 0] = 1


def test_split_panorama_carla_shape():
    b = new_batch(1, 3, 84, 252, np.uint8, 7)
    out = split_panorama(b)
    assert out.shape == (3, 3, 84, 84)


def test_split_panorama_identity_when_square():
    arr = np.arange(16, dtype=np.uint8).reshape(1, 1, 4, 4)
    out = split_panorama(ImageBatch(arr))
    assert np.array_equal(out.data, arr)


def test_split_panorama_tiles_by_index_oracle():
    # brute-force oracle: tile t of image i holds src[i, c, y, t*h + x]
    arr = np.arange(24, dtype=np.uint8).reshape(2, 1, 2, 6)
    out = split_panorama(ImageBatch(arr))
    assert out.shape == (6, 1, 2, 2)
    k = 3
    for i in range(2):
        for t in range(k):
            for y in range(2):
                for x in range(2):
                    assert out.data[i * k + t, 0, y, x] == arr[i, 0, y, t * 2 + x]


def test_split_join_roundtrip():
    rngdata = np.random.default_rng(0).integers(0, 256, (2, 3, 4, 12), dtype=np.uint8)
    b = ImageBatch(rngdata)
    assert np.array_equal(join_panorama(split_panorama(b), 3).data, rngdata)


def test_split_panorama_rejects_indivisible():
    with pytest.raises(InvalidShape):
        split_panorama(new_batch(1, 1, 4, 6, np.uint8, 0))


def test_raw_roundtrip(tmp_path):
    data = np.random.default_rng(1).integers(0, 256, (4, 3, 84, 84), dtype=np.uint8)
    b = ImageBatch(data)
    p = tmp_path / "b.arlt"
    save_raw(b, p)
    again = load_raw(p)
    assert np.array_equal(again.data, data)
    save_raw(again, tmp_path / "b2.arlt")
    assert (tmp_path / "b.arlt").read_bytes() == (tmp_path / "b2.arlt").read_bytes()


def test_raw_header_layout(tmp_path):
    b = new_batch(1, 3, 84, 84, np.uint8, 0)
    p = tmp_path / "h.arlt"
    save_raw(b, p)
    blob = p.read_bytes()
    assert blob[:4] == b"ARLT"
    import struct

    version, n, c, h, w = struct.unpack_from("<IIIII", blob, 4)
    assert (version, n, c, h, w) == (1, 1, 3, 84, 84)
    assert blob[24] == 0  # dtype code
    assert blob[25:32] == b"\x00" * 7


def test_raw_float_roundtrip(tmp_path):
    data = np.random.default_rng(2).random((2, 1, 5, 7)).astype(np.float32)
    p = tmp_path / "f.arlt"
    save_raw(ImageBatch(data), p)
    assert np.array_equal(load_raw(p).data, data)


def test_raw_truncation_rejected(tmp_path):
    b = new_batch(2, 3, 8, 8, np.uint8, 1)
    p = tmp_path / "t.arlt"
    save_raw(b, p)
    blob = p.read_bytes()
    p.write_bytes(blob[:-1])
    with pytest.raises(FormatError):
        load_raw(p)
    p.write_bytes(b"XXXX" + blob[4:])
    with pytest.raises(FormatError):
        load_raw(p)
    p.write_bytes(blob[:16])
    with pytest.raises(FormatError):
        load_raw(p)


def test_png_white_pixel(tmp_path):
    from PIL import Image

    p = tmp_path / "w.png"
    Image.new("RGB", (1, 1), (255, 255, 255)).save(p)
    b = load_png(p)
    assert b.shape == (1, 3, 1, 1)
    assert (b.data == 255).all()


def test_png_roundtrip(tmp_path):
    data = np.random.default_rng(3).integers(0, 256, (1, 3, 8, 8), dtype=np.uint8)
    p = tmp_path / "r.png"
    save_png(ImageBatch(data), p)
    assert np.array_equal(load_png(p).data, data)


def test_png_gray_roundtrip(tmp_path):
    data = np.random.default_rng(4).integers(0, 256, (1, 1, 5, 9), dtype=np.uint8)
    p = tmp_path / "g.png"
    save_png(ImageBatch(data), p)
    assert np.array_equal(load_png(p).data, data)


def test_png_16bit_rejected(tmp_path):
    from PIL import Image

    p = tmp_path / "deep.png"
    Image.fromarray(np.zeros((4, 4), dtype=np.uint16)).save(p)
    with pytest.raises(FormatError):
        load_png(p)


@given(
    st.integers(1, 3),
    st.sampled_from([1, 3]),
    st.integers(1, 6),
    st.integers(1, 6),
    st.integers(0, 2**32),
)
@settings(max_examples=40, deadline=None)
def test_raw_roundtrip_property(n, c, h, w, seed):
    import tempfile
    from pathlib import Path

    data = np.random.default_rng(seed).integers(0, 256, (n, c, h, w), dtype=np.uint8)
    with tempfile.TemporaryDirectory() as d:
        p = Path(d) / "x.arlt"
        save_raw(ImageBatch(data), p)
        assert np.array_equal(load_raw(p).data, data)
