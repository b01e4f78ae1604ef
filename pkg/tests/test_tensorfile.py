"""Tensor file format: round trips, validation, bundled assets."""
import json

import numpy as np
import pytest

from einverse import (
    NonFiniteEntry,
    ParseError,
    ShapeMismatch,
    identity,
    load_tensor,
    max_abs_diff,
    save_tensor,
)
from einverse.bundled import default_assets_dir, load_asset
from einverse.tensorfile import file_digest
from conftest import random_tensor
from golden_data import ASSET_PREFIX, GOLDEN, golden_tensor


def test_roundtrip_identity(tmp_path):
    t = identity([2, 2])
    p = tmp_path / "i.json"
    save_tensor(t, p)
    assert load_tensor(p) == t


def test_roundtrip_random_bit_exact(tmp_path):
    g = np.random.Generator(np.random.PCG64(9))
    t = random_tensor(g, (2, 3), (2, 2))
    p = tmp_path / "t.json"
    save_tensor(t, p, comment="round trip fixture")
    back = load_tensor(p)
    assert back == t  # exact, not approximate
    assert np.array_equal(back.data, t.data)


def test_entry_count_mismatch(tmp_path):
    p = tmp_path / "short.json"
    doc = {
        "format_version": 1,
        "row_dims": [2, 2],
        "col_dims": [2, 2],
        "entries": [[0.0, 0.0]] * 15,
    }
    p.write_text(json.dumps(doc))
    with pytest.raises(ShapeMismatch):
        load_tensor(p)


@pytest.mark.parametrize("mutate, exc", [
    (lambda d: d.pop("row_dims"), ParseError),
    (lambda d: d.update(row_dims=[2, 0]), ParseError),
    (lambda d: d.update(row_dims="nope"), ParseError),
    (lambda d: d.update(format_version=99), ParseError),
    (lambda d: d.update(entries="nope"), ParseError),
    (lambda d: d["entries"].__setitem__(0, [1.0]), ParseError),
    (lambda d: d["entries"].__setitem__(0, [1.0, None]), ParseError),
])
def test_malformed_documents(tmp_path, mutate, exc):
    doc = {
        "format_version": 1,
        "row_dims": [2],
        "col_dims": [2],
        "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
    }
    mutate(doc)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(exc):
        load_tensor(p)


def test_invalid_json_reports_locus(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"format_version": 1,\n  "row_dims": [2,]\n}')
    with pytest.raises(ParseError, match="line"):
        load_tensor(p)


def test_non_finite_rejected(tmp_path):
    doc = {
        "format_version": 1,
        "row_dims": [1],
        "col_dims": [1],
        "entries": [[1.0, 0.0]],
    }
    p = tmp_path / "nan.json"
    p.write_text(json.dumps(doc).replace("1.0", "NaN", 1))
    with pytest.raises(NonFiniteEntry):
        load_tensor(p)


def test_missing_file():
    with pytest.raises(ParseError):
        load_tensor("/nonexistent/nowhere.json")


def test_bundled_assets_match_reference_values():
    # every shipped golden file equals its independent transcription
    for which, prefix in ASSET_PREFIX.items():
        for name in GOLDEN[which]:
            asset = load_asset(prefix + name)
            assert max_abs_diff(asset, golden_tensor(which, name)) == 0.0, (which, name)


def test_asset_dir_exists_and_digests_stable():
    d = default_assets_dir()
    a = d / "example31_A.json"
    assert a.exists()
    assert file_digest(a) == file_digest(a)


def test_save_creates_comment_and_loads_despite_it(tmp_path):
    t = identity([2])
    p = tmp_path / "c.json"
    save_tensor(t, p, comment="note")
    assert json.loads(p.read_text())["comment"] == "note"
    assert load_tensor(p) == t
