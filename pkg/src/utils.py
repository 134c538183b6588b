"""
Utility functions for the Steinberg character calculator
"""

import json
from datetime import datetime
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import pandas as pd
from loguru import logger

from src.errors import ParseError
from src.root_datum import VALID_RANKS, Cochar, RootDatum


def parse_vector(text: str, field: str = "y") -> Tuple[int, ...]:
    """
    Parse '1,0,2', '[1, 0, 2]' or '1 0 2' into an integer tuple
    """
    cleaned = text.strip().strip("[]()")
    pieces = [piece for piece in cleaned.replace(",", " ").split() if piece]
    if not pieces:
        raise ParseError(field, f"empty vector {text!r}")
    try:
        return tuple(int(piece) for piece in pieces)
    except ValueError:
        raise ParseError(field, f"non-integer entry in {text!r}")


def parse_list(text: str) -> List[str]:
    """Comma separated names such as 'A1,A2,B2'"""
    return [item.strip() for item in text.split(",") if item.strip()]


def dominant_grid(datum: RootDatum, ymax: int) -> Iterator[Cochar]:
    """All dominant y with coordinates in 0..ymax, in lexicographic order"""
    for y in product(range(ymax + 1), repeat=datum.rank):
        if datum.is_dominant(y):
            yield tuple(y)


def box_grid(rank: int, ymin: int, ymax: int) -> Iterator[Cochar]:
    for y in product(range(ymin, ymax + 1), repeat=rank):
        yield tuple(y)


def types_up_to_rank(max_rank: int) -> List[str]:
    """Every irreducible type label of rank <= max_rank"""
    labels = []
    for letter in "ABCDEFG":
        for rank in range(1, max_rank + 1):
            if VALID_RANKS[letter](rank):
                labels.append(f"{letter}{rank}")
    return labels


def results_to_frame(records: Sequence[Dict[str, Any]]) -> pd.DataFrame:
    """Flatten JSON-ready records into a DataFrame for CSV output"""
    frame = pd.DataFrame(list(records))
    for column in frame.columns:
        if frame[column].map(lambda value: isinstance(value, (list, tuple, dict))).any():
            frame[column] = frame[column].map(lambda value: json.dumps(value, sort_keys=True))
    return frame


def render(records: Sequence[Dict[str, Any]], fmt: str) -> str:
    """Render records as text, JSON or CSV"""
    if fmt == "json":
        return json.dumps(list(records), indent=2, sort_keys=True, default=str)
    frame = results_to_frame(records)
    if fmt == "csv":
        return frame.to_csv(index=False)
    if frame.empty:
        return "(no rows)"
    return frame.to_string(index=False)


def calculate_result_summary(frame: pd.DataFrame) -> Dict[str, Any]:
    """
    Summary of a result table: shape, columns and distinct values per column
    """
    summary = {
        'shape': frame.shape,
        'columns': list(frame.columns),
        'distinct_values': {},
    }
    for col in frame.columns:
        summary['distinct_values'][col] = int(frame[col].astype(str).nunique())
    return summary


def save_results(frame: pd.DataFrame, filepath: Path, metadata: Optional[Dict[str, Any]] = None) -> str:
    """
    Save a result table with optional metadata
    """
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)

    if filepath.suffix == '.csv':
        frame.to_csv(filepath, index=False)
    elif filepath.suffix == '.json':
        frame.to_json(filepath, orient='records', indent=2)
    else:
        raise ValueError(f"Unsupported file format: {filepath.name}")

    if metadata:
        metadata_file = filepath.with_suffix('.meta.json')
        metadata['saved_at'] = datetime.now().isoformat()
        metadata['record_count'] = len(frame)
        metadata['columns'] = list(frame.columns)

        with open(metadata_file, 'w') as f:
            json.dump(metadata, f, indent=2, default=str)

        logger.info(f"Saved metadata to {metadata_file}")

    logger.info(f"Saved results to {filepath}")
    return str(filepath)
