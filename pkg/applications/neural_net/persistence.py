"""Model file format.

A JSON document holding the topology, the flat parameter vector in the
canonical layout, the normalization bounds, the window length, the seed and
the trainer name. Floats are written in shortest round-tripping form, so
save then load reproduces every parameter bit for bit.
"""

from pathlib import Path

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from shared.exceptions import DataFileError, ModelFileError
from shared.serialization import write_json

from .schemas import Topology

logger = structlog.get_logger(__name__)


class TopologyDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    input: int = Field(ge=1)
    hidden: int = Field(ge=1)
    output: int = Field(ge=1)

    def to_topology(self) -> Topology:
        return Topology(input_len=self.input, hidden_len=self.hidden, output_len=self.output)

    @classmethod
    def from_topology(cls, topology: Topology) -> "TopologyDocument":
        return cls(input=topology.input_len, hidden=topology.hidden_len, output=topology.output_len)


class NormalizationDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min: float
    max: float


class ModelDocument(BaseModel):
    """On-disk representation of a trained model."""

    model_config = ConfigDict(extra="forbid")

    topology: TopologyDocument
    flat_params: list[float]
    normalization: NormalizationDocument
    window_len: int = Field(ge=1)
    seed: int
    trainer: str
    iterations_used: int = Field(default=0, ge=0)
    refine_epochs: int = Field(default=0, ge=0)
    final_fitness: float | None = None

    @model_validator(mode="after")
    def check_consistency(self) -> "ModelDocument":
        dimension = self.topology.to_topology().dimension
        if len(self.flat_params) != dimension:
            raise ValueError(f"flat_params has {len(self.flat_params)} entries, topology needs {dimension}")
        if self.topology.input != self.window_len:
            raise ValueError(f"topology input width {self.topology.input} differs from window_len {self.window_len}")
        return self


def write_model_document(path: Path, document: ModelDocument) -> Path:
    write_json(path, document)
    logger.info("model_saved", path=str(path), trainer=document.trainer)
    return path


def read_model_document(path: Path) -> ModelDocument:
    """Load and validate a model file.

    Raises:
        DataFileError: the file does not exist.
        ModelFileError: the JSON is malformed or inconsistent.
    """
    path = Path(path)
    if not path.is_file():
        raise DataFileError(path)
    try:
        document = ModelDocument.model_validate_json(path.read_text(encoding="utf-8"))
    except UnicodeDecodeError as exc:
        raise ModelFileError(f"{path}: not a JSON document ({exc})") from exc
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors())
        raise ModelFileError(f"{path}: invalid model file: {problems}") from exc

    logger.info("model_loaded", path=str(path), trainer=document.trainer)
    return document
