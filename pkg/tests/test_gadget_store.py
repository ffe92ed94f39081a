import json

import numpy as np
import pytest

from errors import GadgetFormatError, InvalidTargetError
from gadget_store import GadgetFile, load_gadget, load_record, save_gadget, save_record

pytestmark = pytest.mark.gadget


def test_round_trip(tmp_path, block9):
    path = tmp_path / "g9.json"
    save_gadget(path, block9)
    loaded = load_gadget(path)
    assert (loaded.n, loaded.t, loaded.mod.m) == (9, 7, 6)
    assert np.array_equal(loaded.B, block9.B)
    assert np.array_equal(loaded.C, block9.C)
    assert loaded.recipe == "block(n=9,s=3)"


def test_file_layout(tmp_path, trivial3):
    path = tmp_path / "t3.json"
    save_gadget(path, trivial3)
    text = path.read_text()
    assert text.endswith("}\n")
    data = json.loads(text)
    assert list(data) == ["format_version", "m", "n", "t", "B", "C", "recipe"]
    assert data["B"] == [1, 0, 0, 0, 1, 0, 0, 0, 1]


def test_saves_are_byte_identical(tmp_path, block9):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_gadget(a, block9)
    save_gadget(b, block9)
    assert a.read_bytes() == b.read_bytes()


def test_load_save_is_bit_exact(tmp_path, block9):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_gadget(a, block9)
    save_record(b, load_record(a))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("payload", [
    {"format_version": 2, "m": 6, "n": 1, "t": 1, "B": [1], "C": [1]},
    {"m": 6, "n": 2, "t": 1, "B": [1], "C": [1, 0]},
    {"m": 6, "n": 1, "t": 1, "B": [6], "C": [1]},
    {"m": 1, "n": 1, "t": 1, "B": [0], "C": [0]},
    {"m": 6, "n": 1, "t": 1, "B": [1]},
])
def test_malformed_files(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(GadgetFormatError):
        load_record(path)


def test_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(GadgetFormatError):
        load_record(path)


def test_missing_file(tmp_path):
    with pytest.raises(GadgetFormatError, match="not found"):
        load_record(tmp_path / "missing.json")


def test_invalid_product_rejected_on_conversion():
    record = GadgetFile(m=6, n=1, t=1, B=[1], C=[2])
    with pytest.raises(InvalidTargetError):
        record.to_gadget()
