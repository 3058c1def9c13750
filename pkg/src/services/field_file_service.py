"""
Field File Service
==================
Reads and writes field files, digests them for run manifests and dumps
decompositions and trajectories as one field file per piece.
"""

import hashlib
import json
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from core.exceptions import FieldFileError, GridError
from core.field import Field, Operand, to_field
from core.grid import make_grid
from core.logger import get_logger
from core.validators import FilePathValidator
from schemas.field_file import FieldFile
from services.modulation import Decomposition

PathLike = Union[str, Path]


def file_digest(path: PathLike) -> str:
    """SHA-256 of the file bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def field_to_document(value: Operand, label: Optional[str] = None) -> FieldFile:
    field = to_field(value)
    grid = field.grid
    flat = field.samples.reshape(-1)
    return FieldFile(
        n=grid.n,
        P=grid.P,
        M=grid.M,
        samples=[[float(z.real), float(z.imag)] for z in flat],
        label=label,
    )


def document_to_field(document: FieldFile) -> Field:
    grid = make_grid(document.n, document.P, document.M)
    pairs = np.asarray(document.samples, dtype=float)
    samples = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(grid.shape)
    return Field(grid, samples)


class FieldFileService:
    """Load and save fields in the JSON field-file format."""

    def __init__(self):
        self.logger = get_logger()

    def load(self, path: PathLike) -> Field:
        """
        Read and validate a field file.

        Raises:
            FieldFileNotFoundError: path does not exist
            FieldFileError: not UTF-8 JSON, schema violation, or non-finite samples
        """
        resolved = FilePathValidator.validate(str(path))
        try:
            payload = json.loads(resolved.read_text(encoding="utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise FieldFileError(str(resolved), f"not a UTF-8 JSON document ({e})")
        try:
            document = FieldFile.model_validate(payload)
        except PydanticValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first.get("loc", ()))
            raise FieldFileError(str(resolved), f"{where}: {first.get('msg')}".strip(": "))
        try:
            field = document_to_field(document)
        except GridError as e:
            raise FieldFileError(str(resolved), e.detail)
        if not np.all(np.isfinite(field.samples)):
            raise FieldFileError(str(resolved), "samples must be finite")
        self.logger.debug("Field file loaded", context={"path": str(resolved), "grid": field.grid.label})
        return field

    def save(self, value: Operand, path: PathLike, label: Optional[str] = None) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        document = field_to_document(value, label)
        target.write_text(document.model_dump_json(exclude_none=True), encoding="utf-8")
        return target

    def save_decomposition(
        self,
        decomposition: Decomposition,
        directory: PathLike,
        boxes: Optional[Iterable] = None,
    ) -> Dict[str, str]:
        """One file per nonzero box (or per listed box); returns label -> path."""
        directory = Path(directory)
        written = {}
        for k in boxes if boxes is not None else decomposition.nonzero_boxes():
            label = "box_" + "_".join(str(int(c)) for c in k)
            path = self.save(decomposition[k], directory / f"{label}.json", label=label)
            written[label] = str(path)
        return written

    def save_states(self, states: Sequence[Field], times: Sequence[float], directory: PathLike) -> List[str]:
        """One file per trajectory time, labelled with the time."""
        directory = Path(directory)
        written = []
        for index, (state, t) in enumerate(zip(states, times)):
            path = self.save(state, directory / f"state_{index:04d}.json", label=f"t={float(t):.17g}")
            written.append(str(path))
        return written


_field_file_service: Optional[FieldFileService] = None


def get_field_file_service() -> FieldFileService:
    global _field_file_service
    if _field_file_service is None:
        _field_file_service = FieldFileService()
    return _field_file_service


def load_field(path: PathLike) -> Field:
    return get_field_file_service().load(path)


def save_field(value: Operand, path: PathLike, label: Optional[str] = None) -> Path:
    return get_field_file_service().save(value, path, label)
