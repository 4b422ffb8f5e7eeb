"""Cube store service for reading and writing the portable cube directory.

Directory layout:
    header.json   UTF-8 JSON CubeHeader
    <var>.f32     IEEE-754 float32 little-endian, row-major [time][lat][lon]
    mask.u8       one byte per cell, row-major [lat][lon]
    oracle.json   generating coefficients (synthetic cubes only)
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import ValidationError

from firecast.models.cube import CubeHeader, Datacube
from firecast.utils.errors import CubeFormatError, ErrorCategory
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

HEADER_FILE = "header.json"
MASK_FILE = "mask.u8"
ORACLE_FILE = "oracle.json"


def write_cube(cube: Datacube, path: Union[str, Path], oracle: Optional[Dict[str, Any]] = None) -> None:
    """Write a cube (and optionally its generator oracle) into a directory.

    Args:
        cube: Cube to write.
        path: Target directory, created if missing.
        oracle: Generator coefficients to store as oracle.json.

    Raises:
        CubeFormatError: On I/O failure or header/data shape mismatch.
    """
    directory = Path(path)
    header = cube.header
    shape = (header.time_len, header.lat_len, header.lon_len)
    for spec in header.variables:
        if cube.data[spec.name].shape != shape:
            raise CubeFormatError(f"variable '{spec.name}' does not match header shape {shape}", path=str(directory))

    try:
        directory.mkdir(parents=True, exist_ok=True)
        (directory / HEADER_FILE).write_text(header.model_dump_json(indent=2), encoding="utf-8")
        for spec in header.variables:
            raw = np.ascontiguousarray(cube.data[spec.name], dtype="<f4").tobytes()
            (directory / f"{spec.name}.f32").write_bytes(raw)
        (directory / MASK_FILE).write_bytes(np.ascontiguousarray(cube.mask, dtype=np.uint8).tobytes())
        if oracle is not None:
            (directory / ORACLE_FILE).write_text(json.dumps(oracle, indent=2, sort_keys=True), encoding="utf-8")
    except OSError as e:
        raise CubeFormatError(
            f"failed to write cube: {e}", path=str(directory), category=ErrorCategory.SYSTEM
        ) from e
    logger.info(f"Wrote cube {shape} with {len(header.variables)} variables to {directory}")


def read_cube(path: Union[str, Path]) -> Datacube:
    """Read a cube directory.

    Raises:
        CubeFormatError: Missing file, size mismatch or malformed header.
    """
    directory = Path(path)
    header_path = directory / HEADER_FILE
    if not header_path.is_file():
        raise CubeFormatError(f"missing {HEADER_FILE} in {directory}", path=str(directory))
    try:
        header = CubeHeader.model_validate_json(header_path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise CubeFormatError(f"malformed {HEADER_FILE}: {e}", path=str(directory)) from e

    shape = (header.time_len, header.lat_len, header.lon_len)
    expected = 4 * header.n_cells
    data = {}
    for spec in header.variables:
        var_path = directory / f"{spec.name}.f32"
        raw = _read_bytes(var_path, directory)
        if len(raw) != expected:
            raise CubeFormatError(
                f"{var_path.name} has {len(raw)} bytes, header implies {expected}", path=str(directory)
            )
        data[spec.name] = np.frombuffer(raw, dtype="<f4").astype(np.float32).reshape(shape)

    raw_mask = _read_bytes(directory / MASK_FILE, directory)
    if len(raw_mask) != header.lat_len * header.lon_len:
        raise CubeFormatError(
            f"{MASK_FILE} has {len(raw_mask)} bytes, header implies {header.lat_len * header.lon_len}",
            path=str(directory),
        )
    mask = np.frombuffer(raw_mask, dtype=np.uint8).reshape(header.lat_len, header.lon_len)

    try:
        cube = Datacube(header=header, data=data, mask=mask)
    except ValidationError as e:
        raise CubeFormatError(f"cube violates its invariants: {e}", path=str(directory)) from e
    logger.info(f"Read cube {shape} with {len(header.variables)} variables from {directory}")
    return cube


def read_oracle(path: Union[str, Path]) -> Dict[str, Any]:
    """Read the generator coefficients stored next to a synthetic cube."""
    oracle_path = Path(path) / ORACLE_FILE
    if not oracle_path.is_file():
        raise CubeFormatError(f"missing {ORACLE_FILE} in {path}", path=str(path))
    return json.loads(oracle_path.read_text(encoding="utf-8"))


def _read_bytes(file_path: Path, directory: Path) -> bytes:
    try:
        return file_path.read_bytes()
    except FileNotFoundError:
        raise CubeFormatError(f"missing {file_path.name} in {directory}", path=str(directory)) from None
    except OSError as e:
        raise CubeFormatError(
            f"failed to read {file_path.name}: {e}", path=str(directory), category=ErrorCategory.SYSTEM
        ) from e
