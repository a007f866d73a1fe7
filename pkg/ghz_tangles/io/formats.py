import json
import logging
import sys
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd
import pandera as pa
from pandera.typing import Series
from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, model_validator

from ..canonical.acin import AcinForm
from ..core.numerics import MAX_QUBITS
from ..core.states import DensityMatrix, Ket, ket_from_amplitudes
from ..errors import ParseError
from ..ghz_class.params import GhzClassParams

log = logging.getLogger(__name__)

ComplexPair = tuple[FiniteFloat, FiniteFloat]


class KetFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=1, le=MAX_QUBITS, description="Number of qubits.")
    amplitudes: list[ComplexPair] = Field(..., description="2**n amplitudes as [re, im] pairs.")

    @model_validator(mode="after")
    def amplitude_count(self) -> "KetFile":
        if len(self.amplitudes) != 2**self.n:
            raise ValueError(f"A {self.n}-qubit ket needs {2 ** self.n} amplitudes, got {len(self.amplitudes)}.")
        return self

    def to_ket(self, normalize: bool = True) -> Ket:
        return ket_from_amplitudes([complex(re, im) for re, im in self.amplitudes], normalize=normalize)

    @classmethod
    def from_ket(cls, psi: Ket) -> "KetFile":
        return cls(n=psi.n, amplitudes=[(float(a.real), float(a.imag)) for a in psi.amplitudes])


class DensityFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    qubits: list[int] = Field(..., min_length=1, description="Party labels.")
    entries: list[list[ComplexPair]] = Field(..., description="Matrix rows of [re, im] pairs.")

    def to_density_matrix(self) -> DensityMatrix:
        entries = np.array([[complex(re, im) for re, im in row] for row in self.entries])
        return DensityMatrix.validated(self.qubits, entries)


def load_json(path: Path) -> Any:
    """
    Read a JSON document.

    :param path: File to read. Only the ``.json`` suffix is supported.
    :return: The decoded document.
    """
    if path.suffix != ".json":
        raise ParseError(f"File type {path.suffix} is not supported. Input files have to be JSON.")
    with open(path, "r") as f:
        text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Malformed JSON in {path}: {e.msg}", e.lineno, e.colno, e.pos) from e


def read_ket(path: Path) -> Ket:
    ket_file = KetFile.model_validate(load_json(path))
    psi = ket_file.to_ket(normalize=False)
    if not psi.normalized:
        log.warning("Ket in %s has squared norm %.12g, normalizing.", path, psi.norm2)
        psi = psi.normalize()
    return psi


def read_params(path: Path) -> GhzClassParams:
    return GhzClassParams.model_validate(load_json(path))


def read_acin(path: Path) -> AcinForm:
    return AcinForm.model_validate(load_json(path))


def read_density(path: Path) -> DensityMatrix:
    return DensityFile.model_validate(load_json(path)).to_density_matrix()


class SurfaceFrame(pa.DataFrameModel):
    """Scalar field sampled on a grid; one row per grid point and t^2 slice."""

    x: Series[float] = pa.Field(title="x", description="First grid coordinate.")
    y: Series[float] = pa.Field(title="y", description="Second grid coordinate.")
    z: Series[float] = pa.Field(title="z", description="Third grid coordinate.")
    t2: Series[float] = pa.Field(ge=-1.0, le=1.0, title="t2", description="Signed squared 3-tangle of the slice.")
    margin: Series[float] = pa.Field(title="Margin", description="Constraint margin, >= 0 inside the set.")

    class Config:
        strict = True
        ordered = True


SURFACE_COLUMNS = ["x", "y", "z", "t2", "margin"]


def write_surface(df: pd.DataFrame, path: Path | None = None, stream: TextIO | None = None) -> None:
    """
    Validate and write a surface frame.

    :param df: Frame with columns x, y, z, t2, margin.
    :param path: Target file; ``.parquet`` is written with pyarrow, anything else as CSV.
    :param stream: Text stream used when no path is given (stdout by default).
    """
    df = SurfaceFrame.validate(df)
    if path is None:
        df.to_csv(stream or sys.stdout, index=False)
    elif path.suffix == ".parquet":
        df.to_parquet(path, engine="pyarrow", index=False)
    else:
        df.to_csv(path, index=False)
    if path is not None:
        log.info("Wrote %d rows to %s.", len(df), path)
