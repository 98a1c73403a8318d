from math import isnan
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence
import json
import logging
import os
import tempfile

import numpy as np
import pandas as pd

from core.errors import InvalidGrid
from experiments.config import OutputFormat

logger = logging.getLogger(__name__)

# 17 significant digits
FLOAT_FORMAT = "%.16e"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def _check_finite(frame: pd.DataFrame, nullable: Sequence[str] = ()) -> None:
    numeric = frame.select_dtypes(include=[np.number])
    required = numeric.drop(columns=[column for column in nullable if column in numeric.columns])
    if not np.all(np.isfinite(required.to_numpy())) or np.any(np.isinf(numeric.to_numpy())):
        raise InvalidGrid("Refusing to export non-finite values")


def render_csv(frame: pd.DataFrame, header: Optional[Mapping[str, str]] = None) -> str:
    lines = [f"# {key}: {value}" for key, value in (header or {}).items()]
    body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return "".join(line + "\n" for line in lines) + body


def _json_value(value: Any) -> Any:
    # Missing values become null
    if isinstance(value, float) and isnan(value):
        return None
    return value


def render_json(frame: pd.DataFrame, header: Optional[Mapping[str, str]] = None) -> str:
    document = {
        "header": dict(header or {}),
        "columns": list(frame.columns),
        "rows": [[_json_value(value) for value in row] for row in frame.to_dict(orient="split")["data"]],
    }
    return json.dumps(document, indent=2, default=str) + "\n"


def write_table(
    frame: pd.DataFrame,
    path: Path,
    output_format: OutputFormat = OutputFormat.CSV,
    header: Optional[Mapping[str, str]] = None,
    nullable: Sequence[str] = (),
) -> Path:
    """Write frame with a provenance header; the target only ever holds a complete file.

    Columns named in nullable may hold missing values (empty in CSV, null in JSON).
    """
    _check_finite(frame, nullable)
    if output_format == OutputFormat.JSON:
        text = render_json(frame, header)
    else:
        text = render_csv(frame, header)
    _write_atomic(path, text)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def read_table(path: Path) -> pd.DataFrame:
    """Load a file written by write_table, header dropped"""
    if path.suffix == ".json":
        document = json.loads(path.read_text())
        return pd.DataFrame(document["rows"], columns=document["columns"])
    return pd.read_csv(path, comment="#")
