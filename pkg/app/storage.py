"""
Reading and writing state files and sweep tables.

Files are JSON with the exact keys {"dims", "re", "im"}; floats are written in
their shortest round-trip form so a write/read cycle reproduces every entry.
"""
import csv
import hashlib
from pathlib import Path
from typing import Iterable, Union
import numpy as np
from pydantic import ValidationError
from app.exceptions import InvalidInputError, NumericalFailureError, OutputFileError, StateFileError
from app.logger import logger
from app.models import DensityState
from app.schemas import StateFile

PathLike = Union[str, Path]


def state_to_file(state: DensityState) -> StateFile:
    matrix = state.matrix
    return StateFile(
        dims=list(state.dims),
        re=np.real(matrix).tolist(),
        im=np.imag(matrix).tolist(),
    )


def state_from_file(data: StateFile) -> DensityState:
    matrix = np.array(data.re, dtype=float) + 1j * np.array(data.im, dtype=float)
    return DensityState(matrix=matrix, dims=(data.dims[0], data.dims[1]))


def file_digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def load_state(path: PathLike) -> tuple[DensityState, str]:
    """Read and validate a state file; returns the state and the file's SHA-256."""
    path = Path(path)
    logger.debug(f"Loading state file: {path}")
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise StateFileError(str(path), f"cannot read file ({e.strerror or e})")

    try:
        data = StateFile.model_validate_json(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise StateFileError(str(path), first.get("msg", "malformed content"))

    try:
        state = state_from_file(data)
    except (InvalidInputError, NumericalFailureError) as e:
        raise StateFileError(str(path), e.detail)

    digest = file_digest(raw)
    logger.info(f"Loaded {state.dims[0]}x{state.dims[1]} state from {path} (sha256 {digest[:12]})")
    return state, digest


def save_state(state: DensityState, path: PathLike) -> str:
    """Write a state file; returns the SHA-256 of the written bytes."""
    path = Path(path)
    payload = state_to_file(state).model_dump_json().encode("utf-8")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as e:
        raise OutputFileError(str(path), e.strerror or str(e))
    logger.info(f"Wrote {state.dims[0]}x{state.dims[1]} state to {path}")
    return file_digest(payload)


def write_rows(handle, rows: Iterable[dict], columns: list[str]) -> None:
    writer = csv.DictWriter(handle, fieldnames=columns)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def save_rows(rows: list[dict], columns: list[str], path: PathLike) -> None:
    """Write sweep rows as CSV, creating the parent directory."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            write_rows(handle, rows, columns)
    except OSError as e:
        raise OutputFileError(str(path), e.strerror or str(e))
    logger.info(f"Wrote {len(rows)} sweep row(s) to {path}")
