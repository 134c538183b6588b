"""
Loading Hecke modules from built-in names and JSON module files
"""

import json
from pathlib import Path
from typing import Callable, Dict, Union

from loguru import logger

from src.errors import ModuleValidationError, ParseError
from src.hecke_algebra import ModuleSpec, direct_sum, load_module, steinberg_module, to_matrix, trivial_module
from src.root_datum import RootDatum


def _sign_plus_trivial(datum: RootDatum) -> ModuleSpec:
    return direct_sum(steinberg_module(datum), trivial_module(datum))


BUILTIN_MODULES: Dict[str, Callable[[RootDatum], ModuleSpec]] = {
    "sign": steinberg_module,
    "steinberg": steinberg_module,
    "trivial": trivial_module,
    "sign+trivial": _sign_plus_trivial,
}


class ModuleLoader:
    """Resolves module arguments to validated ModuleSpec objects"""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self._cache: Dict[str, ModuleSpec] = {}

    def load(self, source: Union[str, Path]) -> ModuleSpec:
        """A built-in name ('sign', 'trivial', 'sign+trivial') or a JSON file path"""
        key = str(source)
        if key in self._cache:
            return self._cache[key]
        if key in BUILTIN_MODULES:
            logger.info(f"Using built-in module '{key}' for {self.datum.descriptor}")
            module = BUILTIN_MODULES[key](self.datum)
        else:
            module = self.load_file(Path(key))
        self._cache[key] = module
        return module

    def load_file(self, path: Path) -> ModuleSpec:
        logger.info(f"Loading module file {path}")
        if not path.exists():
            raise ParseError("module", f"no built-in module or file named {str(path)!r}")
        try:
            payload = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError("module file", exc.msg, line=exc.lineno)
        return self.from_payload(payload, source=str(path))

    def from_payload(self, payload: Dict, source: str = "<payload>") -> ModuleSpec:
        """Validate the {dim, generators} layout and the module relations"""
        if not isinstance(payload, dict):
            raise ParseError("module", f"{source}: top level must be an object")
        if "generators" not in payload or not isinstance(payload["generators"], dict):
            raise ParseError("generators", f"{source}: missing 'generators' object")

        declared_datum = payload.get("datum")
        if declared_datum is not None and declared_datum != self.datum.descriptor:
            logger.warning(f"{source} declares datum {declared_datum}, using {self.datum.descriptor}")

        matrices = {}
        for key, rows in payload["generators"].items():
            if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
                raise ParseError(f"generators.{key}", "expected a matrix as nested arrays")
            try:
                matrices[key] = to_matrix(rows)
            except ParseError as exc:
                raise ParseError(f"generators.{key}", str(exc))

        module = load_module(self.datum, matrices, name=payload.get("name", Path(source).stem))
        if "dim" in payload and payload["dim"] != module.dim:
            raise ModuleValidationError("dimension", f"declared dim {payload['dim']} but matrices are {module.dim}x{module.dim}")
        logger.info(f"Module '{module.name}' of dimension {module.dim} accepted")
        return module

    def save(self, module: ModuleSpec, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(module.to_dict(), indent=2, sort_keys=True))
        logger.info(f"Saved module '{module.name}' to {path}")
        return path
