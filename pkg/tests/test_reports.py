import json
from dataclasses import dataclass

import numpy as np
import pytest

from reports import POWER_COLUMNS, as_row, render, to_csv, to_json, write_output


@dataclass
class _Row:
    a: float
    b: bool


def test_csv_header_even_when_empty():
    assert to_csv([], ("x", "y")) == "x,y\n"


def test_csv_cells():
    text = to_csv([{"x": 0.1, "y": None, "z": True, "extra": 1}], ("x", "y", "z"))
    assert text == "x,y,z\n0.1,,true\n"
    assert to_csv([{"x": np.float64(2 / 9)}], ("x",)).splitlines()[1] == repr(2 / 9)


def test_json_flat_array_with_numpy_values():
    text = to_json([{"d": np.int64(3), "ok": np.bool_(False), "v": np.float64(0.5)}], ("d", "ok", "v", "w"))
    assert text.endswith("\n")
    assert json.loads(text) == [{"d": 3, "ok": False, "v": 0.5, "w": None}]


def test_as_row_variants():
    assert as_row(_Row(1.0, False)) == {"a": 1.0, "b": False}
    with pytest.raises(TypeError):
        as_row(3)


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        render([], POWER_COLUMNS, "xml")


def test_write_output_creates_parents(tmp_path, capsys):
    target = tmp_path / "a" / "b" / "out.csv"
    write_output("x\n", str(target))
    assert target.read_text(encoding="utf-8") == "x\n"
    write_output("y\n", "-")
    assert capsys.readouterr().out == "y\n"
