"""
Tests for module files, built-in modules and the table helpers in src.utils
"""

import json
import sys
from pathlib import Path

import pandas as pd
import pytest

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parents[1]))

from src.errors import ModuleValidationError, ParseError
from src.exact_ring import Q
from src.module_loader import BUILTIN_MODULES, ModuleLoader
from src.root_datum import parse_datum_descriptor
from src.utils import (
    box_grid,
    calculate_result_summary,
    dominant_grid,
    parse_list,
    parse_vector,
    render,
    results_to_frame,
    save_results,
    types_up_to_rank,
)

SWAP_MODULE = {
    "dim": 2,
    "datum": "A1:adjoint",
    "name": "swap",
    "generators": {
        "s0": [["q", 0], [0, -1]],
        "s1": [[-1, 0], [0, "q"]],
        "omega_1": [[0, 1], [1, 0]],
    },
}


@pytest.fixture
def adjoint_loader():
    return ModuleLoader(parse_datum_descriptor("A1:adjoint"))


@pytest.fixture
def module_file(tmp_path):
    path = tmp_path / "swap.json"
    path.write_text(json.dumps(SWAP_MODULE))
    return path


class TestModuleLoader:

    @pytest.mark.parametrize("name,dim", [("sign", 1), ("steinberg", 1), ("trivial", 1), ("sign+trivial", 2)])
    def test_builtins(self, adjoint_loader, name, dim):
        assert name in BUILTIN_MODULES
        assert adjoint_loader.load(name).dim == dim

    def test_builtins_are_cached(self, adjoint_loader):
        assert adjoint_loader.load("trivial") is adjoint_loader.load("trivial")

    def test_load_file(self, adjoint_loader, module_file):
        module = adjoint_loader.load(str(module_file))
        assert module.name == "swap"
        assert module.dim == 2
        assert module.matrix("s0")[0, 0] == Q

    def test_missing_file(self, adjoint_loader, tmp_path):
        with pytest.raises(ParseError, match="no built-in module"):
            adjoint_loader.load(tmp_path / "absent.json")

    def test_invalid_json_reports_the_line(self, adjoint_loader, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "dim": 1,\n  oops\n}\n')
        with pytest.raises(ParseError) as excinfo:
            adjoint_loader.load(path)
        assert excinfo.value.line == 3

    @pytest.mark.parametrize("payload", [
        [],
        {"dim": 1},
        {"generators": {"s0": "q"}},
        {"generators": {"s0": [[1, 0], [0]]}},
    ])
    def test_malformed_payloads(self, adjoint_loader, payload):
        with pytest.raises(ParseError):
            adjoint_loader.from_payload(payload)

    def test_declared_dimension_must_match(self, adjoint_loader):
        payload = dict(SWAP_MODULE, dim=3)
        with pytest.raises(ModuleValidationError):
            adjoint_loader.from_payload(payload)

    def test_relations_are_checked(self, adjoint_loader):
        payload = json.loads(json.dumps(SWAP_MODULE))
        payload["generators"]["omega_1"] = [[1, 0], [0, 1]]
        with pytest.raises(ModuleValidationError):
            adjoint_loader.from_payload(payload)

    def test_save_and_reload(self, adjoint_loader, tmp_path):
        module = adjoint_loader.load("sign+trivial")
        path = adjoint_loader.save(module, tmp_path / "modules" / "sum.json")
        reloaded = ModuleLoader(parse_datum_descriptor("A1:adjoint")).load(path)
        assert reloaded.dim == 2
        assert reloaded.name == "sign+trivial"
        assert reloaded.matrix("s1")[1, 1] == Q


class TestUtils:

    @pytest.mark.parametrize("text,expected", [("1,0,2", (1, 0, 2)), ("[1, -1]", (1, -1)), ("3", (3,)), ("(2 2)", (2, 2))])
    def test_parse_vector(self, text, expected):
        assert parse_vector(text) == expected

    @pytest.mark.parametrize("text", ["", "[]", "1,x"])
    def test_parse_vector_errors(self, text):
        with pytest.raises(ParseError):
            parse_vector(text)

    def test_parse_list(self):
        assert parse_list("A1, A2,,B2") == ["A1", "A2", "B2"]

    def test_grids(self):
        datum = parse_datum_descriptor("A2")
        grid = list(dominant_grid(datum, 2))
        assert (1, 1) in grid and (1, 0) not in grid
        assert all(datum.is_dominant(y) for y in grid)
        assert len(list(box_grid(2, -1, 1))) == 9

    def test_types_up_to_rank(self):
        assert types_up_to_rank(2) == ["A1", "A2", "B2", "C2", "G2"]
        assert "D4" in types_up_to_rank(4) and "F4" in types_up_to_rank(4)

    def test_render(self):
        records = [{"y": [1, 0], "value": "q^-2"}]
        assert json.loads(render(records, "json")) == records
        assert render(records, "csv").splitlines()[0] == "y,value"
        assert "q^-2" in render(records, "text")
        assert render([], "text") == "(no rows)"

    def test_frame_summary(self):
        frame = results_to_frame([{"y": [1], "value": "1"}, {"y": [2], "value": "1"}])
        assert frame["y"].tolist() == ["[1]", "[2]"]
        summary = calculate_result_summary(frame)
        assert summary["distinct_values"] == {"y": 2, "value": 1}

    def test_save_results(self, tmp_path):
        frame = pd.DataFrame({"y": ["[1]"], "value": ["q^-1"]})
        path = save_results(frame, tmp_path / "out" / "table.csv", metadata={"datum": "A1"})
        assert Path(path).exists()
        metadata = json.loads((tmp_path / "out" / "table.meta.json").read_text())
        assert metadata["record_count"] == 1
        with pytest.raises(ValueError):
            save_results(frame, tmp_path / "table.txt")
