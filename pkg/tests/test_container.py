import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardgan.container import (
    read_container,
    read_container_bytes,
    write_container,
    write_container_bytes,
)
from cardgan.errors import InvalidArgument


def test_round_trip(tmp_path):
    tensors = {
        "a": np.arange(12, dtype=np.float32).reshape(3, 4),
        "b": np.ones((2, 2, 2), dtype=np.float32),
    }
    path = write_container(tmp_path / "t.bin", "test-kind", {"x": 1}, tensors)
    c = read_container(path)
    assert c.kind == "test-kind"
    assert c.meta == {"x": 1}
    assert set(c.tensors) == {"a", "b"}
    np.testing.assert_array_equal(c.tensors["a"], tensors["a"])
    np.testing.assert_array_equal(c.tensors["b"], tensors["b"])


def test_deterministic_bytes():
    tensors = {"w": np.linspace(0, 1, 7, dtype=np.float32)}
    blob1 = write_container_bytes("k", {"b": 2, "a": 1}, tensors)
    blob2 = write_container_bytes("k", {"a": 1, "b": 2}, dict(tensors))
    assert blob1 == blob2


def test_truncated_payload_reports_offset():
    blob = write_container_bytes("k", {}, {"w": np.zeros(8, dtype=np.float32)})
    with pytest.raises(InvalidArgument, match="offset"):
        read_container_bytes(blob[:-5])


def test_bad_magic():
    blob = write_container_bytes("k", {}, {})
    with pytest.raises(InvalidArgument, match="magic"):
        read_container_bytes(b"XXXX" + blob[4:])


def test_trailing_garbage_rejected():
    blob = write_container_bytes("k", {}, {"w": np.zeros(2, dtype=np.float32)})
    with pytest.raises(InvalidArgument, match="trailing"):
        read_container_bytes(blob + b"\x00\x00")


def test_expect_kind(tmp_path):
    path = write_container(tmp_path / "t.bin", "alpha", {}, {})
    with pytest.raises(InvalidArgument, match="alpha"):
        read_container(path, expect_kind="beta")


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.text(alphabet="abcdef", min_size=1, max_size=6),
                          st.integers(1, 20)), max_size=4, unique_by=lambda t: t[0]))
def test_round_trip_property(specs):
    rng = np.random.default_rng(0)
    tensors = {name: rng.standard_normal(n).astype(np.float32) for name, n in specs}
    c = read_container_bytes(write_container_bytes("k", {}, tensors))
    assert set(c.tensors) == set(tensors)
    for name in tensors:
        np.testing.assert_array_equal(c.tensors[name], tensors[name])
