"""
File schemas for bialgebra fixtures and Schürmann triples.
Complex entries are stored as [re, im] pairs (see utils.complex_codec).
"""

from typing import Any, List
from pydantic import BaseModel, ConfigDict, Field, model_validator

import numpy as np

from utils.complex_codec import decode_array, encode_array


class FixtureFile(BaseModel):
    """JSON schema of a bialgebra fixture."""

    model_config = ConfigDict(extra="forbid")

    dim: int = Field(..., ge=1, description="Basis size d")
    labels: List[str] = Field(..., description="Basis labels")
    mult: Any = Field(..., description="d x d x d structure constants")
    unit: Any = Field(..., description="Coefficients of 1")
    star: Any = Field(..., description="d x d involution matrix")
    counit: Any = Field(..., description="Counit row")
    coproduct: Any = Field(..., description="d^2 x d coproduct matrix")
    faithful_rep: Any = Field(..., description="d matrices r x r")

    @model_validator(mode="after")
    def check_labels(self) -> "FixtureFile":
        if len(self.labels) != self.dim:
            raise ValueError(f"Expected {self.dim} labels, got {len(self.labels)}")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("Basis labels must be unique")
        return self

    def arrays(self) -> dict[str, np.ndarray]:
        """Decode every structure tensor into a complex array."""
        return {
            "mult": decode_array(self.mult, 3),
            "unit": decode_array(self.unit, 1),
            "star": decode_array(self.star, 2),
            "counit": decode_array(self.counit, 1),
            "coproduct": decode_array(self.coproduct, 2),
            "faithful_rep": decode_array(self.faithful_rep, 3),
        }

    @classmethod
    def from_arrays(cls, labels: List[str], **arrays: np.ndarray) -> "FixtureFile":
        return cls(
            dim=len(labels),
            labels=list(labels),
            **{key: encode_array(value) for key, value in arrays.items()},
        )


class TripleFile(BaseModel):
    """JSON schema of a Schürmann triple: representation matrices and the vector xi."""

    model_config = ConfigDict(extra="forbid")

    fixture: str = Field(default="", description="Fixture reference the triple belongs to")
    rep: Any = Field(..., description="d matrices nu(b_i), each k x k")
    xi: Any = Field(..., description="Vector xi in k")

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return decode_array(self.rep, 3), decode_array(self.xi, 1)
