from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from bayesmix.errors import DataIngestionError, InvalidDataError
from bayesmix.models.dataset import Dataset

log = structlog.get_logger()


def read_csv_frame(path: Path) -> pd.DataFrame:
    """Parse a CSV so written floats read back bit-identical."""
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError:
        raise DataIngestionError(str(path), "file not found") from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataIngestionError(str(path), str(e)) from e
    except OSError as e:
        raise DataIngestionError(str(path), e.strerror or str(e)) from e
    if frame.empty:
        raise DataIngestionError(str(path), "no data rows")
    return frame


def _resolve_column(frame: pd.DataFrame, token: str) -> str:
    """A column given by header name, or by 1-based position when the name does not exist."""
    if token in frame.columns:
        return token
    if token.isdigit() and 1 <= int(token) <= frame.shape[1]:
        return str(frame.columns[int(token) - 1])
    raise InvalidDataError(f"unknown column '{token}', available: {list(frame.columns)}")


def load_dataset(
    path: str | Path, columns: list[str] | None = None, label_col: str | None = None
) -> Dataset:
    """Read a CSV with a header row into a Dataset.

    Without ``columns`` every numeric column except ``label_col`` becomes a feature; unnamed
    row-index columns written by R or pandas are skipped.
    """
    path = Path(path)
    frame = read_csv_frame(path)
    label = _resolve_column(frame, label_col) if label_col else None
    if columns:
        features = [_resolve_column(frame, token) for token in columns]
        if label in features:
            raise InvalidDataError(f"label column '{label}' cannot also be a feature")
    else:
        features = [
            str(name)
            for name in frame.columns
            if name != label
            and not str(name).startswith("Unnamed:")
            and pd.api.types.is_numeric_dtype(frame[name])
        ]
    if not features:
        raise InvalidDataError("no numeric feature columns selected")
    for name in features:
        if not pd.api.types.is_numeric_dtype(frame[name]):
            raise InvalidDataError(f"column '{name}' is not numeric")

    dataset = Dataset(
        y=frame[features].to_numpy(dtype=float),
        feature_names=tuple(features),
        true_labels=frame[label].to_numpy() if label else None,
    )
    log.info("dataset_loaded", path=str(path), N=dataset.N, r=dataset.r, features=features)
    return dataset


def load_labels(path: str | Path, column: str | None = None) -> np.ndarray:
    """One label column of a CSV; a single-column file needs no column name."""
    path = Path(path)
    frame = read_csv_frame(path)
    if column is None:
        if frame.shape[1] != 1:
            raise InvalidDataError(f"{path} has {frame.shape[1]} columns, name the label column")
        column = str(frame.columns[0])
    name = _resolve_column(frame, column)
    values = frame[name]
    if values.isna().any():
        raise InvalidDataError(f"column '{name}' in {path} has missing labels")
    return values.to_numpy()


def write_dataset(dataset: Dataset, path: str | Path, label_col: str = "class") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(dataset.y, columns=list(dataset.feature_names))
    if dataset.true_labels is not None:
        frame[label_col] = dataset.true_labels
    frame.to_csv(path, index=False)
    log.info("artifact_written", path=str(path), rows=dataset.N)
    return path
